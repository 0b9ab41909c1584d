"""Measurement back-action on Bob's qubit and the sequential joint statistics.

Bob acts on the second tensor factor. A projective action with outcome ``b``
applies the Kraus operator ``U_y . P_b`` (``P_b`` the eigenprojector); an
identity action applies ``U_y`` alone and always reports ``b = +1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .core import IDENTITY, Observable, dagger, is_unitary, observable_matrix
from .states import DensityMatrix

OUTCOMES = (1, -1)


def _check_outcome(outcome: int) -> int:
    if outcome not in OUTCOMES:
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    return int(outcome)


def projector(o: Observable, outcome: int) -> np.ndarray:
    """Eigenprojector ``(I + outcome * n.sigma) / 2``."""
    outcome = _check_outcome(outcome)
    return 0.5 * (IDENTITY + outcome * observable_matrix(o))


def on_bob(op: np.ndarray) -> np.ndarray:
    return np.kron(IDENTITY, op)


def on_alice(op: np.ndarray) -> np.ndarray:
    return np.kron(op, IDENTITY)


@dataclass(frozen=True, eq=False)
class MeasurementAction:
    """One of Bob's settings: projective on ``observable`` (or the identity
    measurement when ``observable`` is None), followed by ``post_unitary``."""

    observable: Observable | None = None
    post_unitary: np.ndarray = field(default=IDENTITY, repr=False)

    def __post_init__(self) -> None:
        u = np.array(self.post_unitary, dtype=complex)
        if u.shape != (2, 2) or not is_unitary(u):
            raise ValueError("post_unitary must be a 2x2 unitary")
        u.setflags(write=False)
        object.__setattr__(self, "post_unitary", u)

    @classmethod
    def projective(cls, o: Observable, unitary: np.ndarray | None = None) -> MeasurementAction:
        return cls(o, IDENTITY if unitary is None else unitary)

    @classmethod
    def identity(cls, unitary: np.ndarray | None = None) -> MeasurementAction:
        return cls(None, IDENTITY if unitary is None else unitary)

    @property
    def is_identity(self) -> bool:
        return self.observable is None

    def kraus(self, outcome: int) -> np.ndarray:
        """Single-qubit Kraus operator for ``outcome`` (zero for an identity
        measurement reporting -1)."""
        outcome = _check_outcome(outcome)
        if self.observable is None:
            return self.post_unitary.copy() if outcome == 1 else np.zeros((2, 2), complex)
        return self.post_unitary @ projector(self.observable, outcome)

    def kraus_set(self) -> list[np.ndarray]:
        if self.observable is None:
            return [self.post_unitary]
        return [self.kraus(b) for b in OUTCOMES]


def _apply_kraus(rho: np.ndarray, ks: Sequence[np.ndarray]) -> np.ndarray:
    out = np.zeros((4, 4), dtype=complex)
    for k in ks:
        big = on_bob(k)
        out += big @ rho @ dagger(big)
    return out


def bob_channel(rho: DensityMatrix, actions: Sequence[MeasurementAction]) -> DensityMatrix:
    """State shared by Alice and Charlie: Bob's settings averaged uniformly,
    outcomes summed."""
    if not isinstance(rho, DensityMatrix):
        raise TypeError("rho must be a DensityMatrix")
    if len(actions) != 2:
        raise ValueError(f"Bob has exactly two settings, got {len(actions)}")
    out = np.zeros((4, 4), dtype=complex)
    for act in actions:
        out += 0.5 * _apply_kraus(rho.mat, act.kraus_set())
    # Hermitian symmetrisation removes round-off asymmetry only.
    return DensityMatrix(0.5 * (out + dagger(out)))


class PointerFamily(str, Enum):
    SQUARE = "square"
    LINEAR = "linear"


@dataclass(frozen=True)
class PointerModel:
    """Two-outcome weak measurement with quality ``F`` and precision ``G``.

    ``square`` pointers satisfy G^2 + F^2 = 1, ``linear`` ones G + F = 1.
    """

    F: float
    G: float
    family: PointerFamily = PointerFamily.SQUARE

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", PointerFamily(self.family))
        F, G = self.F, self.G
        if not (0.0 <= F <= 1.0 and 0.0 <= G <= 1.0):
            raise ValueError(f"F and G must lie in [0, 1], got F={F}, G={G}")
        if self.family is PointerFamily.SQUARE and abs(G**2 + F**2 - 1) > 1e-9:
            raise ValueError(f"square pointer needs G^2 + F^2 = 1, got {G**2 + F**2}")
        if self.family is PointerFamily.LINEAR and abs(G + F - 1) > 1e-9:
            raise ValueError(f"linear pointer needs G + F = 1, got {G + F}")
        # Positivity of the conditional map: coherences F/2 against
        # diagonal weights (1 +- G)/2.
        if F**2 + G**2 > 1 + 1e-12:
            raise ValueError(f"pointer (F={F}, G={G}) is not a valid instrument: F^2 + G^2 > 1")

    @classmethod
    def square(cls, g: float) -> PointerModel:
        return cls(float(np.sqrt(max(0.0, 1 - g * g))), float(g), PointerFamily.SQUARE)

    @classmethod
    def linear(cls, g: float) -> PointerModel:
        return cls(float(1 - g), float(g), PointerFamily.LINEAR)

    @classmethod
    def from_family(cls, family: str, g: float) -> PointerModel:
        if not 0.0 <= g <= 1.0:
            raise ValueError(f"precision G must lie in [0, 1], got {g}")
        return cls.square(g) if PointerFamily(family) is PointerFamily.SQUARE else cls.linear(g)


def _as_matrix(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def weak_channel(rho, o: Observable, pointer: PointerModel, outcome: int) -> np.ndarray:
    """Unnormalised post-measurement state for a weak measurement of ``o`` on
    Bob's qubit; its trace is the probability of ``outcome``.

    ``rho`` may itself be unnormalised (e.g. after Alice's projection).
    """
    b = _check_outcome(outcome)
    m = _as_matrix(rho)
    F, G = pointer.F, pointer.G
    plus, minus = on_bob(projector(o, 1)), on_bob(projector(o, -1))
    return (
        0.5 * F * m
        + 0.5 * (1 + b * G - F) * (plus @ m @ plus)
        + 0.5 * (1 - b * G - F) * (minus @ m @ minus)
    )


@dataclass(frozen=True)
class WeakAction:
    """Bob's weak measurement of ``observable`` through ``pointer``."""

    observable: Observable
    pointer: PointerModel


BobAction = Union[MeasurementAction, WeakAction]


def _bob_branch(m: np.ndarray, bob: BobAction, b: int) -> np.ndarray:
    if isinstance(bob, WeakAction):
        return weak_channel(m, bob.observable, bob.pointer, b)
    k = on_bob(bob.kraus(b))
    return k @ m @ dagger(k)


def joint_probability(
    rho: DensityMatrix,
    alice: Observable,
    bob: BobAction,
    charlie: Observable,
    outcomes: tuple[int, int, int],
) -> float:
    """P(a, b, c | x, y, z) for Alice's projective measurement, Bob's action
    and Charlie's projective measurement, in that order."""
    if not isinstance(rho, DensityMatrix):
        raise TypeError("rho must be a DensityMatrix")
    a, b, c = (_check_outcome(v) for v in outcomes)
    pa = on_alice(projector(alice, a))
    m = pa @ rho.mat @ pa
    m = _bob_branch(m, bob, b)
    pc = on_bob(projector(charlie, c))
    return float(np.real(np.trace(pc @ m @ pc)))


def joint_distribution(rho: DensityMatrix, alice: Observable, bob: BobAction, charlie: Observable) -> np.ndarray:
    """Array ``P[i, j, k]`` over outcomes indexed by ``OUTCOMES``."""
    out = np.empty((2, 2, 2))
    for i, a in enumerate(OUTCOMES):
        for j, b in enumerate(OUTCOMES):
            for k, c in enumerate(OUTCOMES):
                out[i, j, k] = joint_probability(rho, alice, bob, charlie, (a, b, c))
    return out


_SIGNS = np.array(OUTCOMES, dtype=float)


def correlator_ab(dist: np.ndarray) -> float:
    """<ab> from a joint distribution, Charlie marginalised."""
    return float(np.einsum("i,j,ijk->", _SIGNS, _SIGNS, dist))


def correlator_ac(dist: np.ndarray) -> float:
    """<ac> from a joint distribution, Bob marginalised."""
    return float(np.einsum("i,k,ijk->", _SIGNS, _SIGNS, dist))
