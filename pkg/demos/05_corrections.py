# %% [markdown]
# # Shrinkage and range restriction
#
# Two textbook adjustments behave very differently in small departments.

# %%
from predval import pool_departments, range_restriction_correct, shrinkage_adjust
from predval import DeptRecord

for n in (10, 15, 25, 50, 100):
    print(f"n={n:>3}: R^2 = .20 with 3 predictors adjusts to {shrinkage_adjust(.20, n, 3):+.3f}")

# %% [markdown]
# A negative adjusted R^2 has no interpretation as a proportion of variance;
# it just signals that the sample is too small for the number of predictors.

# %%
for ratio in (1.0, 1.25, 1.5, 2.0):
    print(f"sd ratio {ratio}: r = .30 corrects to {range_restriction_correct(.30, ratio):.3f}")

# %%
# Pooling two departments' published correlations by size.
print(f"{pool_departments([DeptRecord(85, .436), DeptRecord(49, .498)]):.3f}")
