import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from predval import (
    DegenerateRate,
    FourfoldTable,
    ValidationError,
    ZeroBaseRate,
    compare_grid,
    fourfold_from,
    table5b,
    utility,
)
from predval.utility import percent
from published import TABLE5B

rates = st.floats(.02, .98)


class TestFourfold:
    def test_table5a(self):
        t = fourfold_from(.15, .6, .3)
        assert t.tp == pytest.approx(.2, abs=.005)
        assert t.fp == pytest.approx(.1, abs=.005)
        assert t.fn == pytest.approx(.4, abs=.005)
        assert t.tn == pytest.approx(.3, abs=.005)

    @given(rates, rates)
    def test_independence(self, b, q):
        assert fourfold_from(0, b, q).tp == q * b

    def test_perfect_test(self):
        t = fourfold_from(1, .5, .5)
        assert t.tp == pytest.approx(.5, abs=1e-12)
        assert t.fp == pytest.approx(0, abs=1e-12)
        assert t.fn == pytest.approx(0, abs=1e-12)
        assert t.tn == pytest.approx(.5, abs=1e-12)

    @pytest.mark.parametrize("b,q", [(0, .5), (1, .5), (.5, 0), (.5, 1)])
    def test_degenerate_rates(self, b, q):
        with pytest.raises(DegenerateRate):
            fourfold_from(.3, b, q)

    @given(st.floats(-1, 1), rates, rates)
    def test_margins(self, r, b, q):
        t = fourfold_from(r, b, q)
        assert t.quota == pytest.approx(q, abs=1e-7)
        assert t.base_rate == pytest.approx(b, abs=1e-7)
        assert min(t.tp, t.fp, t.fn, t.tn) >= 0

    @given(rates, rates)
    def test_monotone_in_validity(self, b, q):
        tps = [fourfold_from(r, b, q).tp for r in np.arange(-1, 1.0001, .05).clip(-1, 1)]
        assert all(x <= y + 1e-12 for x, y in zip(tps, tps[1:]))

    def test_invalid_table(self):
        with pytest.raises(ValidationError):
            FourfoldTable(.5, .5, .5, .5)


class TestUtility:
    def test_illustration(self):
        u = utility(FourfoldTable(.2, .1, .4, .3))
        assert u.prc == pytest.approx(.5)
        assert u.gain == pytest.approx(-.1)
        assert u.hit_rate == pytest.approx(1 / 3)

    def test_perfect(self):
        t = FourfoldTable(.35, 0, 0, .65)
        u = utility(t)
        assert u.gain == pytest.approx(min(t.base_rate, t.negative_base_rate))
        assert u.hit_rate == 1

    def test_from_model(self):
        u = utility(fourfold_from(.15, .6, .3))
        assert u.hit_rate == pytest.approx(.33, abs=.005)
        assert u.gain == pytest.approx(-.1, abs=.005)

    def test_zero_base_rate(self):
        with pytest.raises(ZeroBaseRate):
            utility(FourfoldTable(0, .3, 0, .7))

    @given(st.floats(-1, 1), rates, rates)
    def test_report_invariants(self, r, b, q):
        t = fourfold_from(r, b, q)
        u = utility(t)
        assert u.prc == pytest.approx(t.tp + t.tn, abs=1e-12)
        assert 0 <= u.hit_rate <= 1
        assert -1 <= u.gain <= 1

    @pytest.mark.parametrize("b", [.6, .65, .7, .8])
    def test_base_rate_dominance(self, b):
        for q in (.3, .4, .5, .6, .7):
            assert utility(fourfold_from(.15, b, q)).gain < 0


class TestTable5B:
    @pytest.mark.parametrize("key,want", [
        ((.15, .60, .30), (50, -10, 34)),
        ((.50, .50, .50), (67, 17, 67)),
        ((.30, .65, .50), (59, -6, 57)),
    ])
    def test_selected_cells(self, key, want):
        c = table5b().cell(*key)
        got = (c.pct_correct, c.gain_loss, c.hit_rate)
        assert all(abs(g - w) <= 1 for g, w in zip(got, want))

    def test_shape_and_order(self):
        g = table5b()
        assert len(g.cells) == 75
        assert [c.key for c in g.cells[:3]] == [(50, 70, 50), (50, 70, 30), (50, 70, 15)]

    def test_discrepancies_are_few(self):
        bad = compare_grid(table5b(), TABLE5B)
        assert len(bad) <= 5
        # the gain column at b+=50 is %C - 50 by definition; the printed 40 must be a typo
        assert any(d.key == (50, 70, 50) and d.reference[1] == 40 for d in bad)

    @pytest.mark.parametrize("x,want", [(.005, 1), (-.005, -1), (.334, 33), (-.1, -10), (0.0, 0)])
    def test_percent_rounding(self, x, want):
        assert percent(x) == want
