"""Linear steering and weighted CHSH parameters, and strategy mixing.

Both witnesses have classical bound 1 and quantum bound sqrt(2). A setting
of ``None`` stands for the identity measurement (observable ``I``, outcome
always +1).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .core import IDENTITY, SIGMA_1, SIGMA_3, Observable, observable_matrix
from .states import DensityMatrix

SQRT2 = float(np.sqrt(2.0))


class WitnessKind(str, Enum):
    STEERING = "steering"
    CHSH = "chsh"


@dataclass(frozen=True)
class SettingPair:
    """An observer's two measurement choices, index 0 and 1."""

    first: Observable | None
    second: Observable | None

    def __iter__(self) -> Iterator[Observable | None]:
        yield self.first
        yield self.second

    def __getitem__(self, i: int) -> Observable | None:
        return (self.first, self.second)[i]

    @classmethod
    def xz(cls, angle0: float, angle1: float) -> SettingPair:
        return cls(Observable.xz(angle0), Observable.xz(angle1))


@dataclass(frozen=True)
class WitnessScore:
    value: float
    kind: WitnessKind

    def __float__(self) -> float:
        return self.value

    @property
    def violated(self) -> bool:
        return self.value > 1.0


def _matrix(o: Observable | None) -> np.ndarray:
    return IDENTITY if o is None else observable_matrix(o)


def correlators(rho: DensityMatrix, alice: SettingPair, other: SettingPair) -> np.ndarray:
    """``E[i, j] = Tr[(A_i (x) X_j) rho]``."""
    if not isinstance(rho, DensityMatrix):
        raise TypeError("rho must be a DensityMatrix")
    E = np.empty((2, 2))
    for i, a in enumerate(alice):
        for j, x in enumerate(other):
            E[i, j] = rho.expectation(np.kron(_matrix(a), _matrix(x)))
    return E


def steering_from_correlators(E: np.ndarray) -> float:
    E = np.asarray(E, dtype=float)
    return abs(E[0, 0] + E[1, 1]) / SQRT2


def chsh_from_correlators(E: np.ndarray) -> float:
    E = np.asarray(E, dtype=float)
    return 0.5 * (E[0, 0] + E[0, 1] + E[1, 0] - E[1, 1])


def steering_parameter(rho: DensityMatrix, alice: SettingPair, other: SettingPair) -> WitnessScore:
    """(1/sqrt 2) |<A0 X0> + <A1 X1>|."""
    return WitnessScore(steering_from_correlators(correlators(rho, alice, other)), WitnessKind.STEERING)


def chsh_parameter(rho: DensityMatrix, alice: SettingPair, other: SettingPair) -> WitnessScore:
    """Half the CHSH combination; the sign is kept."""
    return WitnessScore(chsh_from_correlators(correlators(rho, alice, other)), WitnessKind.CHSH)


def witness(kind: WitnessKind | str, rho: DensityMatrix, alice: SettingPair, other: SettingPair) -> WitnessScore:
    if WitnessKind(kind) is WitnessKind.STEERING:
        return steering_parameter(rho, alice, other)
    return chsh_parameter(rho, alice, other)


def mixed_scores(per_case: Sequence[tuple[float, float]], mix: Sequence[float]) -> tuple[float, float]:
    """Convex combination of per-case (S1, S2) pairs with weights ``mix``."""
    pts = np.asarray(per_case, dtype=float).reshape(-1, 2)
    p = np.asarray(mix, dtype=float)
    if p.ndim != 1 or len(p) != len(pts):
        raise ValueError(f"need one weight per case, got {p.shape} for {len(pts)} cases")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"mix must be a probability vector, got {p.tolist()}")
    s1, s2 = p @ pts
    return float(s1), float(s2)


def best_pair_mix(a1, a2, b1, b2):
    """Maximise ``min(p*a + (1-p)*b)`` over p in [0, 1] for two points
    ``a = (a1, a2)`` and ``b = (b1, b2)``; vectorised over broadcast inputs.

    Returns ``(value, p)``. The objective is the minimum of two affine
    functions of p, so the optimum is an endpoint or the crossing point.
    """
    a1, a2, b1, b2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a1, a2, b1, b2)))
    ma, mb = np.minimum(a1, a2), np.minimum(b1, b2)
    value = np.maximum(ma, mb)
    p = np.where(ma >= mb, 1.0, 0.0)
    da, db = a1 - a2, b1 - b2
    cross = da * db < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        pc = np.where(cross, db / (db - da), 0.0)
    vc = pc * a1 + (1 - pc) * b1
    better = cross & (vc > value)
    return np.where(better, vc, value), np.where(better, pc, p)


def xz_correlation_matrix(rho: DensityMatrix) -> np.ndarray:
    """``T[i, j] = <s_i (x) s_j>`` for i, j over (sigma_1, sigma_3)."""
    paulis = (SIGMA_1, SIGMA_3)
    return np.array([[rho.expectation(np.kron(p, q)) for q in paulis] for p in paulis])


def _unit_xz(v: np.ndarray) -> Observable:
    n = np.linalg.norm(v)
    if n < 1e-15:
        return Observable(1.0, 0.0, 0.0)
    return Observable.from_xz(v[0] / n, v[1] / n)


def optimal_partner(kind: WitnessKind | str, rho: DensityMatrix, alice: SettingPair) -> SettingPair:
    """Partner settings in the x-z plane maximising the witness for fixed
    Alice observables (both traceless, x-z plane)."""
    T = xz_correlation_matrix(rho)
    a0, a1 = (np.array([o.n1, o.n3]) for o in alice)
    if WitnessKind(kind) is WitnessKind.STEERING:
        return SettingPair(_unit_xz(T.T @ a0), _unit_xz(T.T @ a1))
    return SettingPair(_unit_xz(T.T @ (a0 + a1)), _unit_xz(T.T @ (a0 - a1)))
