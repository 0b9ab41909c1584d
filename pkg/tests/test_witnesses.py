import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from steerlab.core import Observable
from steerlab.states import max_entangled, partial_entangled
from steerlab.witnesses import (
    SettingPair, WitnessKind, best_pair_mix, chsh_from_correlators, chsh_parameter, correlators, mixed_scores,
    optimal_partner, steering_parameter, witness,
)

SQRT2 = np.sqrt(2)
finite = st.floats(-2, 2, allow_nan=False)


class TestBellStateBounds:
    def test_steering_reaches_sqrt2(self):
        s = steering_parameter(max_entangled(), SettingPair.xz(0, np.pi / 2), SettingPair.xz(0, np.pi / 2))
        assert s.value == pytest.approx(SQRT2, abs=1e-12)
        assert s.violated

    def test_chsh_reaches_tsirelson(self):
        alice = SettingPair.xz(0, np.pi / 2)
        bob = SettingPair.xz(np.pi / 4, -np.pi / 4)
        assert chsh_parameter(max_entangled(), alice, bob).value == pytest.approx(SQRT2, abs=1e-12)

    def test_chsh_keeps_sign(self):
        E = -np.ones((2, 2))
        assert chsh_from_correlators(E) == pytest.approx(-1.0)

    def test_identity_partner_gives_marginals(self):
        E = correlators(partial_entangled(0.3), SettingPair.xz(0.1, 1.2), SettingPair(None, None))
        np.testing.assert_allclose(E[:, 0], E[:, 1])

    def test_dispatch(self):
        a, b = SettingPair.xz(0, 1), SettingPair.xz(0.2, 0.8)
        assert witness("chsh", max_entangled(), a, b).kind is WitnessKind.CHSH
        assert witness(WitnessKind.STEERING, max_entangled(), a, b).kind is WitnessKind.STEERING


class TestMixedScores:
    @given(arrays(float, (3, 2), elements=finite), arrays(float, (3, 2), elements=finite),
           st.floats(0, 1), st.lists(st.floats(0.01, 1), min_size=3, max_size=3))
    def test_affine_in_case_points(self, p1, p2, t, w):
        mix = np.array(w) / sum(w)
        lhs = mixed_scores(t * p1 + (1 - t) * p2, mix)
        a, b = mixed_scores(p1, mix), mixed_scores(p2, mix)
        np.testing.assert_allclose(lhs, t * np.array(a) + (1 - t) * np.array(b), atol=1e-12)

    @given(arrays(float, (3, 2), elements=finite), st.floats(0, 1), st.floats(0, 1))
    def test_affine_in_weights(self, pts, t, u):
        m1, m2 = np.array([t, 1 - t, 0.0]), np.array([0.0, u, 1 - u])
        lhs = mixed_scores(pts, 0.5 * m1 + 0.5 * m2)
        rhs = 0.5 * np.array(mixed_scores(pts, m1)) + 0.5 * np.array(mixed_scores(pts, m2))
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    @pytest.mark.parametrize("mix", [[0.5, 0.6], [1.2, -0.2], [1.0]])
    def test_rejects_bad_weights(self, mix):
        with pytest.raises(ValueError):
            mixed_scores([(1, 1), (0, 0)], mix)


class TestBestPairMix:
    @given(finite, finite, finite, finite)
    def test_matches_dense_scan(self, a1, a2, b1, b2):
        v, p = best_pair_mix(a1, a2, b1, b2)
        ps = np.linspace(0, 1, 2001)
        scan = np.minimum(ps * a1 + (1 - ps) * b1, ps * a2 + (1 - ps) * b2).max()
        assert float(v) >= scan - 1e-12
        assert float(v) <= scan + 4 * 1e-3
        assert min(p * a1 + (1 - p) * b1, p * a2 + (1 - p) * b2) == pytest.approx(float(v), abs=1e-12)

    def test_crossing_point(self):
        v, p = best_pair_mix(1.3, 0.8, 0.7, 1.2)
        assert p == pytest.approx(0.5)
        assert v == pytest.approx(p * 1.3 + (1 - p) * 0.7)

    def test_broadcasts(self):
        v, p = best_pair_mix(np.ones((3, 1)), np.ones((3, 1)), np.zeros((1, 4)), np.zeros((1, 4)))
        assert v.shape == (3, 4) and np.all(p == 1)


class TestOptimalPartner:
    @given(st.floats(0, np.pi / 2), st.floats(-np.pi, np.pi), st.floats(-np.pi, np.pi))
    def test_beats_random_partners(self, alpha, x0, x1):
        rho = partial_entangled(alpha)
        alice = SettingPair.xz(x0, x1)
        rng = np.random.default_rng(0)
        for kind in WitnessKind:
            best = witness(kind, rho, alice, optimal_partner(kind, rho, alice)).value
            for _ in range(20):
                other = SettingPair.xz(*rng.uniform(-np.pi, np.pi, 2))
                assert witness(kind, rho, alice, other).value <= best + 1e-12
