"""Optimal (S1, S2) trade-off under probabilistic mixing of strategy cases.

Mixing cases fills the convex hull of their achievable points, so the
trade-off is the non-increasing part of the upper concave hull of all
sampled points. Hull edges are labelled either as a stretch of one case's
own curve (``arc``) or as a straight mixing chord between two cases
(``mix``).

When only some pairs of cases may be mixed (the tangent construction mixes
lambda=3 with lambda=1 and with lambda=2, but never 1 with 2) the trade-off
is the upper boundary of the union of the per-pair hulls. That boundary can
have convex kinks where two pair hulls cross.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .catalog import StrategyCase

#: Sine of the turn angle below which three hull points count as collinear.
COLLINEAR_TOL = 1e-10
#: Extra density used when resampling the neighbourhood of hull arcs.
REFINE_FACTOR = 16
MIN_SAMPLES = 100


@dataclass(frozen=True)
class Segment:
    kind: str                   # "arc" or "mix"
    cases: tuple[str, ...]      # one label for arcs, two for mixing chords
    start: tuple[float, float]
    end: tuple[float, float]
    #: Free angles of the cases at the two ends of the segment.
    angles: tuple[tuple[float, ...], tuple[float, ...]] = ((), ())

    @property
    def label(self) -> str:
        return f"{self.kind}({','.join(self.cases)})"

    @property
    def slope(self) -> float:
        return (self.end[1] - self.start[1]) / (self.end[0] - self.start[0])

    @property
    def intercept(self) -> float:
        return self.start[1] - self.slope * self.start[0]


@dataclass(frozen=True, eq=False)
class TradeoffEnvelope:
    """Piecewise-linear upper boundary through the hull vertices."""

    vertices: np.ndarray            # (m, 2), S1 strictly increasing, S2 non-increasing
    segments: tuple[Segment, ...]
    pairs: Optional[tuple[tuple[str, str], ...]] = None

    def __post_init__(self) -> None:
        v = np.array(self.vertices, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        """Segment boundaries, both ends included."""
        if not self.segments:
            return [tuple(self.vertices[0])]
        return [self.segments[0].start] + [seg.end for seg in self.segments]

    @property
    def labels(self) -> list[str]:
        return [seg.label for seg in self.segments]

    @property
    def s1_max(self) -> float:
        return float(self.vertices[-1, 0])

    @property
    def s2_max(self) -> float:
        return float(self.vertices[0, 1])

    def value_at(self, s1):
        """Largest S2 reachable together with ``s1``; nan beyond the right end.

        Left of the first vertex the envelope is extended flat at its maximum.
        """
        x = np.asarray(s1, dtype=float)
        v = self.vertices
        y = np.interp(x, v[:, 0], v[:, 1])
        y = np.where(x > v[-1, 0] + 1e-12, np.nan, y)
        return float(y) if y.ndim == 0 else y

    def segment_at(self, s1: float) -> Segment | None:
        for seg in self.segments:
            if seg.start[0] - 1e-12 <= s1 <= seg.end[0] + 1e-12:
                return seg
        return None

    def diagonal_crossing(self) -> float:
        """S1 = S2 point of the envelope (the best double violation)."""
        v = self.vertices
        d = v[:, 1] - v[:, 0]
        if d[0] <= 0:
            return float(v[0, 1])
        if d[-1] >= 0:
            return float(v[-1, 0])
        k = int(np.argmax(d < 0))
        (x0, y0), (x1, y1) = v[k - 1], v[k]
        t = (y0 - x0) / ((y0 - x0) - (y1 - x1))
        return float(x0 + t * (x1 - x0))


# --- sampling -------------------------------------------------------------------

@dataclass
class _Samples:
    points: np.ndarray      # (n, 2)
    case: np.ndarray        # (n,) case index
    angles: np.ndarray      # (n, k_max) padded with nan
    step: np.ndarray        # (n,) grid spacing of the 1-D sweep, nan otherwise
    reach: np.ndarray       # (n,) distance in the (S1, S2) plane to the farther grid neighbour


def _grid(case: StrategyCase, n: int, rng: np.random.Generator) -> np.ndarray:
    k = case.n_free
    if k == 0:
        return np.zeros((1, 0))
    lo = np.array([d[0] for d in case.domain])
    hi = np.array([d[1] for d in case.domain])
    if k == 1:
        return np.linspace(lo[0], hi[0], n).reshape(-1, 1)
    return lo + (hi - lo) * rng.random((n, k))


def _sample(cases: Sequence[StrategyCase], n: int, rng: np.random.Generator) -> _Samples:
    k_max = max(c.n_free for c in cases)
    pts, idx, ang, step, reach = [], [], [], [], []
    for i, case in enumerate(cases):
        grid = _grid(case, n, rng)
        _append(pts, idx, ang, step, reach, case, i, grid, k_max,
                (case.domain[0][1] - case.domain[0][0]) / (n - 1) if case.n_free == 1 else np.nan)
    return _Samples(np.vstack(pts), np.concatenate(idx), np.vstack(ang), np.concatenate(step),
                    np.concatenate(reach))


def _append(pts, idx, ang, step, reach, case, i, grid, k_max, h) -> None:
    p = case.scores(grid)
    pts.append(p)
    d = np.linalg.norm(np.diff(p, axis=0), axis=1) if len(p) > 1 else np.zeros(0)
    r = np.zeros(len(p))
    if len(d):
        r[:-1] = d
        r[1:] = np.maximum(r[1:], d)
    reach.append(r)
    idx.append(np.full(len(grid), i))
    padded = np.full((len(grid), k_max), np.nan)
    padded[:, : case.n_free] = grid
    ang.append(padded)
    step.append(np.full(len(grid), h))


# --- hull -------------------------------------------------------------------------

def upper_hull(points: np.ndarray) -> np.ndarray:
    """Indices of the upper concave hull, left to right (monotone chain)."""
    order = np.lexsort((-points[:, 1], points[:, 0]))
    hull: list[int] = []
    for j in order:
        if hull and points[hull[-1], 0] == points[j, 0]:
            continue  # same S1, lower S2 (sorted descending within ties)
        while len(hull) >= 2:
            o, a = points[hull[-2]], points[hull[-1]]
            u, w = a - o, points[j] - o
            cross = u[0] * w[1] - u[1] * w[0]
            if cross >= -COLLINEAR_TOL * np.hypot(*u) * np.hypot(*w):
                hull.pop()
            else:
                break
        hull.append(int(j))
    return np.array(hull, dtype=int)


def _tradeoff_part(points: np.ndarray, hull: np.ndarray) -> np.ndarray:
    """Hull vertices from the highest S2 to the largest S1."""
    s2 = points[hull, 1]
    start = int(np.flatnonzero(s2 >= s2.max() - 1e-15)[-1])
    return hull[start:]


def _refine(cases, samples: _Samples, hull: np.ndarray) -> _Samples:
    """Resample every 1-D case densely around the stretch it contributes."""
    pts, idx, ang, step = [samples.points], [samples.case], [samples.angles], [samples.step]
    reach = [samples.reach]
    k_max = samples.angles.shape[1]
    for i, case in enumerate(cases):
        mine = hull[samples.case[hull] == i]
        if case.n_free != 1 or len(mine) == 0:
            continue
        h = samples.step[mine[0]]
        t = samples.angles[mine, 0]
        lo = max(t.min() - 2 * h, case.domain[0][0])
        hi = min(t.max() + 2 * h, case.domain[0][1])
        m = max(int(np.ceil((hi - lo) / h)) * REFINE_FACTOR, 2)
        grid = np.linspace(lo, hi, m + 1).reshape(-1, 1)
        _append(pts, idx, ang, step, reach, case, i, grid, k_max, (hi - lo) / m)
    return _Samples(np.vstack(pts), np.concatenate(idx), np.vstack(ang), np.concatenate(step),
                    np.concatenate(reach))


def _edge_kind(s: _Samples, i: int, j: int, cases) -> tuple[str, tuple[str, ...]]:
    ci, cj = s.case[i], s.case[j]
    if ci == cj:
        # Consecutive samples of one sweep; mirror-symmetric parameters give
        # identical points, so adjacency is judged in the (S1, S2) plane.
        gap = np.linalg.norm(s.points[i] - s.points[j])
        if cases[ci].n_free != 1 or gap <= 1.5 * max(s.reach[i], s.reach[j]):
            return "arc", (cases[ci].label,)
    labels = sorted({cases[ci].label, cases[cj].label})
    if len(labels) == 1:
        labels = labels * 2
    return "mix", tuple(labels)


def _angles(s: _Samples, i: int, cases) -> tuple[float, ...]:
    k = cases[s.case[i]].n_free
    return tuple(float(a) for a in s.angles[i, :k])


@dataclass(frozen=True)
class _Edge:
    x0: float
    y0: float
    x1: float
    y1: float
    kind: str
    cases: tuple[str, ...]
    angles: tuple[tuple[float, ...], tuple[float, ...]]

    def at(self, x: float) -> float:
        if self.x1 == self.x0:
            return self.y0
        return self.y0 + (self.y1 - self.y0) * (x - self.x0) / (self.x1 - self.x0)


def _component_hull(samples: _Samples, members: np.ndarray) -> np.ndarray:
    sub = np.flatnonzero(np.isin(samples.case, members))
    return sub[_tradeoff_part(samples.points[sub], upper_hull(samples.points[sub]))]


def _edges(samples: _Samples, hull: np.ndarray, cases) -> list[_Edge]:
    out = []
    for i, j in zip(hull[:-1], hull[1:]):
        kind, labels = _edge_kind(samples, i, j, cases)
        (x0, y0), (x1, y1) = samples.points[i], samples.points[j]
        out.append(_Edge(float(x0), float(y0), float(x1), float(y1), kind, labels,
                         (_angles(samples, i, cases), _angles(samples, j, cases))))
    return out


def _upper_union(components: list[list[_Edge]]) -> list[tuple[float, float, _Edge]]:
    """Pieces (x_start, x_end, edge) of the pointwise maximum of several
    piecewise-linear functions, each defined on its own S1 range."""
    xs = sorted({x for comp in components for e in comp for x in (e.x0, e.x1)})
    lefts = [np.array([e.x0 for e in comp]) for comp in components]
    pieces: list[tuple[float, float, _Edge]] = []
    for xa, xb in zip(xs[:-1], xs[1:]):
        if xb - xa <= 1e-15:
            continue
        active = []
        for comp, starts in zip(components, lefts):
            k = int(np.searchsorted(starts, xa, side="right")) - 1
            if k >= 0 and comp[k].x1 >= xb:
                active.append(comp[k])
        if not active:
            continue
        cuts = {xa, xb}
        for k, e in enumerate(active):
            for f in active[k + 1:]:
                da, db = e.at(xa) - f.at(xa), e.at(xb) - f.at(xb)
                if da * db < 0:
                    cuts.add(xa + (xb - xa) * da / (da - db))
        cuts = sorted(cuts)
        for ca, cb in zip(cuts[:-1], cuts[1:]):
            mid = 0.5 * (ca + cb)
            top = max(active, key=lambda e: e.at(mid))
            if pieces and pieces[-1][2] is top and abs(pieces[-1][1] - ca) < 1e-15:
                pieces[-1] = (pieces[-1][0], cb, top)
            else:
                pieces.append((ca, cb, top))
    return pieces


def tangent_pairs(cases: Sequence[StrategyCase]) -> tuple[tuple[str, str], ...]:
    """Mixing pairs of the tangent construction: lambda=3 with 1 and with 2."""
    labels = [c.label for c in cases]
    third = [lab for lab in labels if lab.startswith("3")]
    if len(third) != 1 or "1" not in labels or "2" not in labels:
        raise ValueError(f"tangent construction needs cases 1, 2 and one lambda=3 case, got {labels}")
    return (("1", third[0]), ("2", third[0]))


def build_envelope(
    cases: Sequence[StrategyCase],
    samples_per_case: int = 4096,
    seed: int = 0,
    pairs: Optional[Sequence[tuple[str, str]]] = None,
) -> TradeoffEnvelope:
    """Upper envelope of everything reachable by mixing ``cases``.

    With ``pairs=None`` any mixture is allowed and the result is concave.
    Otherwise only the listed label pairs are mixed. One-angle cases are
    swept on a uniform grid and resampled densely where they touch a hull;
    multi-angle cases are sampled at random with ``seed``.
    """
    cases = list(cases)
    if not cases:
        raise ValueError("need at least one strategy case")
    if samples_per_case < MIN_SAMPLES:
        raise ValueError(f"samples_per_case must be >= {MIN_SAMPLES}, got {samples_per_case}")
    labels = [c.label for c in cases]
    if pairs is None:
        groups = [np.arange(len(cases))]
    else:
        pairs = tuple(tuple(p) for p in pairs)
        for p in pairs:
            if len(p) != 2 or any(lab not in labels for lab in p):
                raise ValueError(f"mixing pair {p} does not name two of the cases {labels}")
        groups = [np.array([labels.index(a), labels.index(b)]) for a, b in pairs]
        loose = set(range(len(cases))) - {int(i) for g in groups for i in g}
        groups += [np.array([i]) for i in sorted(loose)]

    rng = np.random.default_rng(seed)
    samples = _sample(cases, samples_per_case, rng)
    touched = np.concatenate([_component_hull(samples, g) for g in groups])
    samples = _refine(cases, samples, touched)
    hulls = [_component_hull(samples, g) for g in groups]

    if all(len(h) == 1 for h in hulls):
        best = max((h[0] for h in hulls), key=lambda i: tuple(samples.points[i][::-1]))
        return TradeoffEnvelope(samples.points[[best]], (), pairs)

    components = [_edges(samples, h, cases) for h in hulls if len(h) > 1]
    pieces = _upper_union(components)
    segments: list[Segment] = []
    vertices = [(pieces[0][0], pieces[0][2].at(pieces[0][0]))]
    for xa, xb, e in pieces:
        start, end = vertices[-1], (xb, e.at(xb))
        vertices.append(end)
        if segments and segments[-1].kind == e.kind and segments[-1].cases == e.cases:
            prev = segments[-1]
            segments[-1] = Segment(e.kind, e.cases, prev.start, end, (prev.angles[0], e.angles[1]))
        else:
            segments.append(Segment(e.kind, e.cases, start, end, e.angles))
    return TradeoffEnvelope(np.array(vertices), tuple(segments), pairs)
