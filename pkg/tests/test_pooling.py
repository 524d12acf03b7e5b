import numpy as np
import pytest
from scipy import special

from predval import (
    EmptyInput,
    SingularMatrix,
    SingularSubsample,
    NotPositiveSemidefinite,
    SimDesign,
    ValidationError,
    expected_null_r,
    reproduce_bias_tables,
    run_cell,
    validity_sweep,
)
from predval import pooling
from predval.pooling import TABLE4_VALIDITIES
from published import TABLE2_SIGMA, TABLE3_SIGMA, TABLE4_VALIDITY


def test_null_oracle_closed_form():
    # E[sqrt(B)] for B ~ Beta(a, b) is B(a + 1/2, b) / B(a, b)
    for n, k in [(25, 2), (50, 2), (77, 2), (30, 4)]:
        a, b = k / 2, (n - k - 1) / 2
        closed = np.exp(special.betaln(a + .5, b) - special.betaln(a, b))
        assert expected_null_r(n, k) == pytest.approx(closed, abs=1e-9)


class TestSimDesign:
    def test_defaults(self):
        d = SimDesign(TABLE2_SIGMA, 40, 25)
        assert d.criteria == (0, 1, 2)
        assert d.sst == 1000

    def test_sst_1001(self):
        assert SimDesign(TABLE2_SIGMA, 13, 77).sst == 1001

    @pytest.mark.parametrize("kw", [dict(nss=0, sss=25), dict(nss=40, sss=4),
                                    dict(nss=40, sss=25, replications=0),
                                    dict(nss=40, sss=25, criteria=()),
                                    dict(nss=40, sss=25, criteria=(3,))])
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            SimDesign(TABLE2_SIGMA, **kw)


class TestRunCell:
    def test_single_subsample_identity(self):
        for seed in (1, 2, 3):
            res = run_cell(SimDesign(TABLE3_SIGMA, 1, 1000, 20, seed))
            assert np.array_equal(res.draws["pda"], res.draws["agr"])

    def test_population_is_analytic(self):
        res = run_cell(SimDesign(TABLE2_SIGMA, 40, 25, 3))
        np.testing.assert_allclose([r.pop for r in res.records], (.600, .627, .301), atol=5e-4)

    def test_null_inflation(self):
        res = run_cell(SimDesign(TABLE3_SIGMA, 40, 25, 500))
        rec = res.record(2)
        assert .24 <= rec.pda <= .29
        assert .03 <= rec.agr <= .06
        assert abs(rec.pda - expected_null_r(25, 2)) < 2 * res.se("pda", 2)

    def test_single_replication(self):
        res = run_cell(SimDesign(TABLE2_SIGMA, 40, 25, 1))
        assert all(np.all(v == 0) for v in res.mc_se.values())

    def test_deterministic(self):
        d = SimDesign(TABLE2_SIGMA, 20, 50, 30, 99)
        a, b = run_cell(d), run_cell(d)
        for est in a.draws:
            assert np.array_equal(a.draws[est], b.draws[est])

    def test_seeds_matter(self):
        a = run_cell(SimDesign(TABLE2_SIGMA, 20, 50, 5, 1))
        b = run_cell(SimDesign(TABLE2_SIGMA, 20, 50, 5, 2))
        assert not np.array_equal(a.draws["pda"], b.draws["pda"])

    def test_singular_population(self):
        s = [[1, 1, .2], [1, 1, .2], [.2, .2, 1]]
        with pytest.raises(SingularMatrix):
            run_cell(SimDesign(s, 2, 10, 2))

    def test_singular_replication_is_redrawn(self, monkeypatch):
        real = pooling._replicate
        seen = []

        def flaky(a, design, seed):
            seen.append((seed.stream_index, seed.retry))
            if seed.stream_index == 1 and seed.retry < 2:
                raise SingularSubsample("forced")
            return real(a, design, seed)

        monkeypatch.setattr(pooling, "_replicate", flaky)
        res = run_cell(SimDesign(TABLE2_SIGMA, 4, 10, 3, 8))
        assert res.retries == 2
        assert seen == [(0, 0), (1, 0), (1, 1), (1, 2), (2, 0)]
        monkeypatch.setattr(pooling, "_replicate", real)
        clean = run_cell(SimDesign(TABLE2_SIGMA, 4, 10, 3, 8))
        # untouched replications are unaffected by the redraw
        assert np.array_equal(res.draws["pda"][[0, 2]], clean.draws["pda"][[0, 2]])
        assert not np.array_equal(res.draws["pda"][1], clean.draws["pda"][1])

    def test_hopeless_design_gives_up(self, monkeypatch):
        def always(a, design, seed):
            raise SingularSubsample("forced")

        monkeypatch.setattr(pooling, "_replicate", always)
        with pytest.raises(SingularSubsample):
            run_cell(SimDesign(TABLE2_SIGMA, 4, 10, 1))


class TestBiasTables:
    def test_block_order(self):
        designs = [SimDesign(TABLE2_SIGMA, n, s, 5) for n, s in [(13, 77), (40, 25), (20, 50)]]
        tables = reproduce_bias_tables(designs)
        assert [b.design.sss for b in tables.blocks] == [25, 50, 77]
        # streams follow input order, not display order
        assert [b.cell_ordinal for b in tables.blocks] == [1, 2, 0]

    def test_empty(self):
        with pytest.raises(EmptyInput):
            reproduce_bias_tables([])

    def test_mixed_sigma(self):
        with pytest.raises(ValidationError):
            reproduce_bias_tables([SimDesign(TABLE2_SIGMA, 40, 25, 2), SimDesign(TABLE3_SIGMA, 40, 25, 2)])

    def test_workers_do_not_change_results(self):
        designs = [SimDesign(TABLE2_SIGMA, n, s, 10, 5) for n, s in [(40, 25), (20, 50), (13, 77)]]
        a = reproduce_bias_tables(designs, workers=1)
        b = reproduce_bias_tables(designs, workers=3)
        for x, y in zip(a.blocks, b.blocks):
            for est in x.draws:
                assert np.array_equal(x.draws[est], y.draws[est])


class TestSweep:
    def test_population_row(self):
        sw = validity_sweep(replications=2)
        np.testing.assert_allclose(sw.population, TABLE4_VALIDITY, atol=5e-4)

    def test_degenerate_sweep(self):
        sw = validity_sweep([(0, 0)], .6, [(40, 25)], 30, 11)
        direct = run_cell(SimDesign(TABLE3_SIGMA, 40, 25, 30, 11, (2,)))
        assert sw.cells[0][0].records == direct.records
        assert sw.col_means.shape == (1,)

    def test_margins_are_magnitude_means(self):
        sw = validity_sweep(TABLE4_VALIDITIES[:2], .6, [(40, 25), (20, 50)], 20, 3)
        ab = sw.abs_bias()
        np.testing.assert_allclose(sw.row_means, ab.mean(axis=2))
        np.testing.assert_allclose(sw.col_means, ab.mean(axis=(0, 1)))
        np.testing.assert_allclose(sw.diff, sw.row_means[:, 0] - sw.row_means[:, 1])

    def test_inconsistent_pair(self):
        with pytest.raises(NotPositiveSemidefinite):
            validity_sweep([(.9, -.9)], .6, [(40, 25)], 2)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            validity_sweep([], .6, [(40, 25)], 2)
