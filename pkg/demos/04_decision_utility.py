# %% [markdown]
# # What a modest validity buys in admissions
#
# Admitting a fixed share of applicants with a test of validity r changes the
# proportion of correct decisions relative to admitting at random. Whether that
# is a gain depends heavily on the base rate of success.

# %%
from predval import fourfold_from, table5b, utility

t = fourfold_from(validity=.15, base_rate=.6, quota=.3)
print(f"tp {t.tp:.3f}  fp {t.fp:.3f}  fn {t.fn:.3f}  tn {t.tn:.3f}")
u = utility(t)
print(f"correct {u.prc:.3f}  gain over best guess {u.gain:+.3f}  hit rate {u.hit_rate:.3f}")

# %% [markdown]
# With 60% able to succeed and only 30% admitted, the test misclassifies more
# people than simply admitting everyone would.

# %%
grid = table5b()
losses = [c for c in grid.cells if c.gain_loss < 0]
print(f"{len(losses)} of {len(grid.cells)} grid cells show a loss")
for c in grid.cells[:6]:
    print(c.key, (c.pct_correct, c.gain_loss, c.hit_rate))
