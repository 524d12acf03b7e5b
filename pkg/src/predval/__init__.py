"""Simulation of pooled sub-sample validity estimates and classification-rate utility."""

from .bivariate import OrthantEstimate, binorm_upper, mc_orthant_oracle
from .correlation import (
    DeptRecord,
    EstimateRecord,
    bias,
    corr_matrix,
    multiple_correlations,
    pda_pool,
    pool_departments,
    range_restriction_correct,
    shrinkage_adjust,
    sum_score_from_corr,
    sum_score_validity,
)
from .errors import *  # noqa: F401,F403
from .pooling import (
    BiasTables,
    CellResult,
    SimDesign,
    ValiditySweep,
    expected_null_r,
    reproduce_bias_tables,
    run_cell,
    two_predictor_sigma,
    validity_sweep,
)
from .sampler import SeedSpec, gram_factor, mvn_sample, split_subsamples, standard_normal_matrix
from .utility import (
    FourfoldTable,
    UtilityGrid,
    UtilityReport,
    compare_grid,
    fourfold_from,
    table5b,
    utility,
)

__version__ = "0.1.0"
