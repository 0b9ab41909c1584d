"""Max-min search for the best simultaneous violation of both witnesses.

For a fixed state the objective min(S1, S2) of a mixture is maximised by
mixing at most two cases (the optimum sits on one edge of the convex hull
of reachable points), and for two fixed points the best weight is exact
(:func:`steerlab.witnesses.best_pair_mix`). The search therefore only runs
over the free angles: a coarse grid, Pareto filtering, exhaustive pairing,
then Nelder-Mead polishing of the best candidates.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from ..witnesses import best_pair_mix
from .catalog import HALF_PI, StrategyCase, case_catalog

#: Grid resolution of one-angle cases.
ANGLE_STEP = np.pi / 720
#: Grid budget per case for cases with several free angles.
MULTI_BUDGET = 50_000
#: Objective tolerance of the local refinement.
FTOL = 1e-8
#: Optima within this distance of the best value count as ties.
TIE_TOL = 1e-8
#: Candidates polished per pattern.
N_POLISH = 6
ALPHA_STEP = np.pi / 360
ALPHA_RANGE = (0.0, HALF_PI)


@dataclass(frozen=True)
class ViolationOptimum:
    value: float
    angles: dict[str, dict[str, float]]   # case label -> {angle name: radians}
    mix: dict[str, float]                 # case label -> probability
    alpha: float
    scores: tuple[float, float] = (np.nan, np.nan)
    per_case: dict[str, tuple[float, float]] = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return self.value > 1.0

    def angle_vector(self) -> tuple[float, ...]:
        return tuple(v for lab in sorted(self.angles) for v in self.angles[lab].values())


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("STEERLAB_THREADS", "1")))
    except ValueError:
        return 1


# --- grids --------------------------------------------------------------------

def _grid(case: StrategyCase, budget: int = MULTI_BUDGET) -> np.ndarray:
    k = case.n_free
    if k == 0:
        return np.zeros((1, 0))
    if k == 1:
        lo, hi = case.domain[0]
        n = int(round((hi - lo) / ANGLE_STEP)) + 1
        return np.linspace(lo, hi, n).reshape(-1, 1)
    per_axis = max(int(budget ** (1.0 / k)), 3)
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in case.domain]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)


def pareto_front(points: np.ndarray) -> np.ndarray:
    """Indices of the points not dominated in both coordinates."""
    order = np.lexsort((-points[:, 1], -points[:, 0]))
    keep, best = [], -np.inf
    for i in order:
        if points[i, 1] > best:
            keep.append(i)
            best = points[i, 1]
    return np.array(keep, dtype=int)


@dataclass
class _Candidate:
    value: float
    labels: tuple[str, ...]
    angles: tuple[np.ndarray, ...]
    p: float = 1.0


def _pair_candidates(c1, c2, g1, g2, s1, s2, top: int) -> list[_Candidate]:
    f1, f2 = pareto_front(s1), pareto_front(s2)
    a, b = s1[f1][:, None, :], s2[f2][None, :, :]
    val, p = best_pair_mix(a[..., 0], a[..., 1], b[..., 0], b[..., 1])
    flat = np.argsort(-val, axis=None, kind="stable")[:top]
    out = []
    for k in flat:
        i, j = np.unravel_index(k, val.shape)
        out.append(_Candidate(float(val[i, j]), (c1.label, c2.label), (g1[f1[i]], g2[f2[j]]), float(p[i, j])))
    return out


def _single_candidates(c, g, s, top: int) -> list[_Candidate]:
    m = s.min(axis=1)
    idx = np.argsort(-m, kind="stable")[:top]
    return [_Candidate(float(m[i]), (c.label,), (g[i],)) for i in idx]


# --- local refinement -------------------------------------------------------------

def _objective(cases: Sequence[StrategyCase]):
    sizes = [c.n_free for c in cases]

    def split(x):
        parts, k = [], 0
        for n in sizes:
            parts.append(np.asarray(x[k:k + n]))
            k += n
        return parts

    def value(x):
        pts = [c.scores(a.reshape(1, -1))[0] for c, a in zip(cases, split(x))]
        if len(pts) == 1:
            return float(min(pts[0])), 1.0
        v, p = best_pair_mix(pts[0][0], pts[0][1], pts[1][0], pts[1][1])
        return float(v), float(p)

    return value, split


def _polish(cases: Sequence[StrategyCase], cand: _Candidate) -> _Candidate:
    value, split = _objective(cases)
    x0 = np.concatenate([np.atleast_1d(a) for a in cand.angles]).astype(float)
    if x0.size:
        res = minimize(lambda x: -value(x)[0], x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": FTOL * 1e-2, "maxiter": 4000 * x0.size})
        if -res.fun >= cand.value:
            x0 = res.x
    v, p = value(x0)
    return _Candidate(v, cand.labels, tuple(split(x0)), p)


def _wrap(case: StrategyCase, angles: np.ndarray) -> np.ndarray:
    """Fold angles back into the case domain when the domain spans one period."""
    out = np.array(angles, dtype=float)
    for k, (lo, hi) in enumerate(case.domain):
        if np.isclose(hi - lo, np.pi):
            out[k] = lo + np.mod(out[k] - lo, np.pi)
        else:
            out[k] = np.clip(out[k], lo, hi)
    return out


# --- public entry points ----------------------------------------------------------------

def _resolve(cases: Sequence[StrategyCase], mix_pattern) -> list[StrategyCase]:
    by_label = {c.label: c for c in cases}
    pattern = [str(p) for p in mix_pattern]
    if not pattern:
        raise ValueError("mix pattern must name at least one case")
    if len(set(pattern)) != len(pattern):
        raise ValueError(f"mix pattern repeats a case: {pattern}")
    missing = [p for p in pattern if p not in by_label]
    if missing:
        raise ValueError(f"mix pattern names unknown case(s) {missing}; available {sorted(by_label)}")
    return [by_label[p] for p in pattern]


def _best_fixed_alpha(chosen: list[StrategyCase], polish: bool, budget: int = MULTI_BUDGET) -> _Candidate:
    grids = [_grid(c, budget) for c in chosen]
    scores = [c.scores(g) for c, g in zip(chosen, grids)]
    by_label = {c.label: c for c in chosen}

    cands: list[_Candidate] = []
    for c, g, s in zip(chosen, grids, scores):
        cands += _single_candidates(c, g, s, N_POLISH)
    for (i, c1), (j, c2) in itertools.combinations(enumerate(chosen), 2):
        cands += _pair_candidates(c1, c2, grids[i], grids[j], scores[i], scores[j], N_POLISH)
    cands.sort(key=lambda c: -c.value)
    if not polish:
        return cands[0]

    top = cands[:N_POLISH]
    refined = []
    for cand in top:
        cs = [by_label[lab] for lab in cand.labels]
        r = _polish(cs, cand)
        r.angles = tuple(_wrap(c, a) for c, a in zip(cs, r.angles))
        refined.append(r)
    best = max(r.value for r in refined)
    ties = [r for r in refined if r.value >= best - TIE_TOL]
    return min(ties, key=lambda r: _tie_key(r, chosen))


def _tie_key(cand: _Candidate, chosen: list[StrategyCase]) -> tuple:
    vec = []
    for c in chosen:
        if c.label in cand.labels:
            vec += list(cand.angles[cand.labels.index(c.label)])
        else:
            vec += [np.inf] * c.n_free
    return tuple(np.round(vec, 9))


def _report(chosen: list[StrategyCase], cand: _Candidate, alpha: float) -> ViolationOptimum:
    mix = {c.label: 0.0 for c in chosen}
    angles: dict[str, dict[str, float]] = {}
    per_case: dict[str, tuple[float, float]] = {}
    weights = [cand.p, 1.0 - cand.p] if len(cand.labels) == 2 else [1.0]
    total = np.zeros(2)
    for lab, a, w in zip(cand.labels, cand.angles, weights):
        case = next(c for c in chosen if c.label == lab)
        mix[lab] = float(w)
        angles[lab] = {name: float(v) for name, v in zip(case.free_angles, a)}
        pt = case.scores(np.asarray(a, dtype=float).reshape(1, -1))[0]
        per_case[lab] = (float(pt[0]), float(pt[1]))
        total += w * pt
    for c in chosen:
        angles.setdefault(c.label, {name: 0.0 for name in c.free_angles})
    return ViolationOptimum(float(cand.value), angles, mix, float(alpha),
                            (float(total[0]), float(total[1])), per_case)


def optimize_double_violation(
    cases: Sequence[StrategyCase],
    mix_pattern: Sequence[str],
    optimize_alpha: bool = False,
    alpha_range: tuple[float, float] = ALPHA_RANGE,
    budget: int = MULTI_BUDGET,
) -> ViolationOptimum:
    """Maximise min(S1, S2) over the free angles of the cases named in
    ``mix_pattern`` and their mixing weights, optionally also over alpha.

    The alpha search rebuilds the catalog of the cases' scenario on a grid of
    step pi/360 and refines the best grid point with a bounded scalar search.
    ``budget`` caps the starting grid of cases with several free angles.
    """
    cases = list(cases)
    if not cases:
        raise ValueError("no strategy cases given")
    chosen = _resolve(cases, mix_pattern)
    if not optimize_alpha:
        cand = _best_fixed_alpha(chosen, True, budget)
        return _report(chosen, cand, chosen[0].alpha)

    scenario = chosen[0].scenario
    if scenario.is_weak:
        raise ValueError("the weak-measurement configurations are defined on the maximal state only")
    labels = [c.label for c in chosen]

    def at_alpha(alpha: float, polish: bool):
        cat = case_catalog(scenario, float(alpha), variant="general")
        picked = _resolve(cat, labels)
        return picked, _best_fixed_alpha(picked, polish, budget)

    lo, hi = alpha_range
    alphas = np.arange(lo, hi + 0.5 * ALPHA_STEP, ALPHA_STEP)
    alphas = alphas[alphas <= hi + 1e-12]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        coarse = list(pool.map(lambda a: at_alpha(a, False)[1].value, alphas))
    coarse = np.asarray(coarse)
    k = int(np.argmax(coarse >= coarse.max() - TIE_TOL))
    a_lo, a_hi = alphas[max(k - 1, 0)], alphas[min(k + 1, len(alphas) - 1)]
    if a_hi > a_lo:
        res = minimize_scalar(lambda a: -at_alpha(a, True)[1].value, bounds=(a_lo, a_hi),
                              method="bounded", options={"xatol": 1e-7})
        best_alpha = float(res.x)
    else:
        best_alpha = float(alphas[k])
    picked, cand = at_alpha(best_alpha, True)
    grid_best = at_alpha(alphas[k], True)
    if grid_best[1].value > cand.value + TIE_TOL:
        best_alpha, (picked, cand) = float(alphas[k]), grid_best
    return _report(picked, cand, best_alpha)


def optimize_scenario(
    scenario, mix_pattern: Sequence[str], alpha: Optional[float] = None, variant: str = "auto"
) -> ViolationOptimum:
    """Convenience wrapper: ``alpha=None`` searches over the state as well."""
    if alpha is None:
        return optimize_double_violation(case_catalog(scenario, variant="general"), mix_pattern, True)
    return optimize_double_violation(case_catalog(scenario, alpha, variant), mix_pattern)
