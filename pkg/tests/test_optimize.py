import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from steerlab.strategies.catalog import Scenario, case_catalog
from steerlab.strategies.optimize import optimize_double_violation, optimize_scenario, pareto_front
from steerlab.witnesses import mixed_scores


@pytest.fixture(scope="module")
def ab_ll():
    return case_catalog(Scenario.STEER_AB_LL)


class TestParetoFront:
    @given(arrays(float, (40, 2), elements=st.floats(-2, 2)))
    def test_front_is_undominated(self, pts):
        front = pts[pareto_front(pts)]
        for p in front:
            dominated = np.all(pts >= p, axis=1) & np.any(pts > p, axis=1)
            assert not dominated.any()

    @given(arrays(float, (40, 2), elements=st.floats(-2, 2)))
    def test_every_point_is_covered(self, pts):
        front = pts[pareto_front(pts)]
        for p in pts:
            assert np.any(np.all(front >= p, axis=1))


class TestMaximalState:
    def test_report_is_self_consistent(self, ab_ll):
        opt = optimize_double_violation(ab_ll, ["1", "3"])
        assert sum(opt.mix.values()) == pytest.approx(1.0)
        pts = [opt.per_case[lab] for lab in ("1", "3")]
        s1, s2 = mixed_scores(pts, [opt.mix["1"], opt.mix["3"]])
        assert min(s1, s2) == pytest.approx(opt.value, abs=1e-12)
        by_label = {c.label: c for c in ab_ll}
        for lab in ("1", "3"):
            again = by_label[lab].scores(np.array([list(opt.angles[lab].values())]))[0]
            np.testing.assert_allclose(again, opt.per_case[lab], atol=1e-12)

    def test_single_case_pattern(self, ab_ll):
        opt = optimize_double_violation(ab_ll, ["1"])
        # one projective case alone cannot give a double violation
        assert opt.value <= 1.0 + 1e-9
        assert opt.mix == {"1": 1.0}

    def test_more_cases_never_hurt(self, ab_ll):
        v13 = optimize_double_violation(ab_ll, ["1", "3"]).value
        v123 = optimize_double_violation(ab_ll, ["1", "2", "3"]).value
        assert v123 >= v13 - 1e-9

    def test_deterministic(self, ab_ll):
        a = optimize_double_violation(ab_ll, ["1", "3"])
        b = optimize_double_violation(ab_ll, ["1", "3"])
        assert a.value == b.value and a.angles == b.angles and a.mix == b.mix

    def test_angles_inside_domain(self, ab_ll):
        opt = optimize_double_violation(ab_ll, ["1", "3"])
        for c in (c for c in ab_ll if c.label in opt.angles):
            for (lo, hi), v in zip(c.domain, opt.angles[c.label].values()):
                assert lo - 1e-12 <= v <= hi + 1e-12

    def test_no_violation_flag(self):
        opt = optimize_scenario(Scenario.STEER_AB_CL, ["1", "2"], alpha=np.pi / 4)
        assert not opt.violated

    def test_weak_case(self):
        opt = optimize_double_violation(case_catalog(Scenario.WEAK_LL), ["weak"])
        # min(sqrt2 G, (1 + sqrt(1 - G^2))/sqrt2) peaks where both sides meet, at G = 0.8
        assert opt.angles["weak"]["G"] == pytest.approx(0.8, abs=1e-6)
        assert opt.value == pytest.approx(0.8 * np.sqrt(2), abs=1e-9)


class TestPatternErrors:
    @pytest.mark.parametrize("pattern", [[], ["1", "1"], ["1", "9"]])
    def test_bad_pattern(self, ab_ll, pattern):
        with pytest.raises(ValueError):
            optimize_double_violation(ab_ll, pattern)

    def test_no_cases(self):
        with pytest.raises(ValueError):
            optimize_double_violation([], ["1"])

    def test_alpha_search_rejects_weak(self):
        with pytest.raises(ValueError):
            optimize_double_violation(case_catalog(Scenario.WEAK_LL), ["weak"], optimize_alpha=True)


class TestAlphaSearch:
    def test_free_alpha_not_worse_than_maximal(self):
        fixed = optimize_scenario(Scenario.STEER_AB_LL, ["1", "3"], alpha=np.pi / 4)
        free = optimize_scenario(Scenario.STEER_AB_LL, ["1", "3"])
        assert free.value >= fixed.value - 1e-9
        assert 0.0 <= free.alpha <= np.pi / 2

    def test_threads_env_does_not_change_result(self, monkeypatch):
        cases = case_catalog(Scenario.STEER_AB_LL, variant="general")
        kw = dict(optimize_alpha=True, alpha_range=(0.6, 0.9))
        monkeypatch.setenv("STEERLAB_THREADS", "1")
        a = optimize_double_violation(cases, ["1", "3"], **kw)
        monkeypatch.setenv("STEERLAB_THREADS", "4")
        b = optimize_double_violation(cases, ["1", "3"], **kw)
        assert a.value == b.value and a.alpha == b.alpha
