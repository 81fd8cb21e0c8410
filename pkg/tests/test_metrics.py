import numpy as np
import pytest
from hypothesis import given, strategies as st

import demandcast as dc

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


class TestPointMetrics:
    def test_hand_arithmetic(self):
        pm = dc.point_metrics([100, 200], [110, 180])
        assert pm.mape == pytest.approx(0.10)
        assert pm.mae == pytest.approx(15.0)
        assert pm.rmse == pytest.approx(np.sqrt((100 + 400) / 2))

    def test_identity(self):
        pm = dc.point_metrics([3.0, 4.0], [3.0, 4.0])
        assert (pm.mape, pm.rmse, pm.mae) == (0.0, 0.0, 0.0)

    def test_zero_actual_excluded(self):
        pm = dc.point_metrics([0, 100], [5, 100])
        assert pm.mape == 0.0
        assert pm.mae == pytest.approx(2.5)
        assert pm.mape_excluded == 1

    def test_all_zero_actuals(self):
        pm = dc.point_metrics([0.0, 0.0], [1.0, 2.0])
        assert pm.mape is None
        assert pm.rmse > 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            dc.point_metrics([1.0], [1.0, 2.0])

    def test_empty(self):
        with pytest.raises(ValueError):
            dc.point_metrics([], [])

    @given(st.lists(st.tuples(finite, finite), min_size=1, max_size=40))
    def test_rmse_at_least_mae(self, pairs):
        a, p = zip(*pairs)
        pm = dc.point_metrics(a, p)
        assert pm.rmse >= pm.mae - 1e-9 * (1 + pm.mae)

    @given(st.lists(st.tuples(finite, finite), min_size=2, max_size=20), st.randoms())
    def test_permutation_invariance(self, pairs, rnd):
        a, p = zip(*pairs)
        pm1 = dc.point_metrics(a, p)
        order = list(range(len(pairs)))
        rnd.shuffle(order)
        pm2 = dc.point_metrics([a[i] for i in order], [p[i] for i in order])
        assert pm1.rmse == pytest.approx(pm2.rmse, rel=1e-12, abs=1e-12)
        assert pm1.mae == pytest.approx(pm2.mae, rel=1e-12, abs=1e-12)

    @given(
        st.lists(st.tuples(st.floats(min_value=0.1, max_value=1e5), st.floats(min_value=0, max_value=1e5)), min_size=1, max_size=20),
        st.floats(min_value=0.01, max_value=100),
    )
    def test_scaling(self, pairs, c):
        a, p = zip(*pairs)
        base = dc.point_metrics(a, p)
        scaled = dc.point_metrics([c * x for x in a], [c * x for x in p])
        assert scaled.mape == pytest.approx(base.mape, rel=1e-9)
        assert scaled.mae == pytest.approx(c * base.mae, rel=1e-9)
        assert scaled.rmse == pytest.approx(c * base.rmse, rel=1e-9)


class TestDirectionalAccuracy:
    def test_both_increasing(self):
        assert dc.directional_accuracy([1, 2, 3], [10, 20, 30]) == 1.0

    def test_half(self):
        assert dc.directional_accuracy([1, 2, 1], [1, 2, 3]) == 0.5

    def test_tie_matches_tie(self):
        assert dc.directional_accuracy([5, 5], [5, 5]) == 1.0

    def test_tie_does_not_match_move(self):
        assert dc.directional_accuracy([5, 5], [5, 6]) == 0.0

    def test_too_short(self):
        with pytest.raises(ValueError):
            dc.directional_accuracy([1.0], [1.0])

    @given(
        st.lists(st.tuples(st.floats(min_value=0.1, max_value=1e5), st.floats(min_value=0.1, max_value=1e5)), min_size=2, max_size=20),
        st.floats(min_value=0.01, max_value=100),
    )
    def test_scale_invariant(self, pairs, c):
        a, p = zip(*pairs)
        assert dc.directional_accuracy(a, p) == dc.directional_accuracy([c * x for x in a], [c * x for x in p])
