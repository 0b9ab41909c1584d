"""Sequential scenario with a weak (pointer) measurement for Bob.

Scores are built from the full joint distribution P(a, b, c | x, y, z):
Alice-Bob correlators marginalise Charlie, Alice-Charlie correlators
marginalise Bob and average Bob's two settings uniformly.
"""
from __future__ import annotations

import numpy as np

from ..channels import PointerModel, WeakAction, correlator_ab, correlator_ac, joint_distribution
from ..core import Observable
from ..states import max_entangled
from ..witnesses import SettingPair, WitnessKind, chsh_from_correlators, steering_from_correlators
from .catalog import Scenario, StrategyCase

HALF_PI = np.pi / 2

#: Optimal x-z angles (Alice, Bob, Charlie) for each configuration.
WEAK_ANGLES: dict[Scenario, tuple[tuple[float, float], ...]] = {
    Scenario.WEAK_LL: ((0.0, HALF_PI), (0.0, HALF_PI), (0.0, HALF_PI)),
    Scenario.WEAK_CL: ((0.0, HALF_PI), (np.pi / 4, -np.pi / 4), (0.0, HALF_PI)),
    Scenario.WEAK_BC_LL: ((0.0, HALF_PI), (0.0, HALF_PI), (0.0, HALF_PI)),
}


def _pairs(scenario: Scenario) -> tuple[SettingPair, SettingPair, SettingPair]:
    return tuple(SettingPair.xz(*angles) for angles in WEAK_ANGLES[scenario])  # type: ignore[return-value]


def weak_correlators(
    pointer: PointerModel, alice: SettingPair, bob: SettingPair, charlie: SettingPair
) -> tuple[np.ndarray, np.ndarray]:
    """(E_AB[x, y], E_AC[x, z]) on the Bell state from joint probabilities."""
    rho = max_entangled()
    e_ab = np.zeros((2, 2))
    e_ac = np.zeros((2, 2))
    for x, a in enumerate(alice):
        for y, b in enumerate(bob):
            act = WeakAction(b, pointer)
            for z, c in enumerate(charlie):
                dist = joint_distribution(rho, a, act, c)
                if z == 0:
                    e_ab[x, y] = correlator_ab(dist)
                e_ac[x, z] += 0.5 * correlator_ac(dist)
    return e_ab, e_ac


def _score(kind: WitnessKind, E: np.ndarray) -> float:
    return steering_from_correlators(E) if kind is WitnessKind.STEERING else chsh_from_correlators(E)


def weak_scores(scenario: Scenario, pointer: PointerModel) -> tuple[float, float]:
    scenario = Scenario(scenario)
    if not scenario.is_weak:
        raise ValueError(f"{scenario.value} is not a weak-measurement configuration")
    e_ab, e_ac = weak_correlators(pointer, *_pairs(scenario))
    k1, k2 = scenario.witnesses
    return _score(k1, e_ab), _score(k2, e_ac)


def weak_benchmark(pointer: PointerModel, scenario: Scenario = Scenario.WEAK_LL) -> tuple[float, float]:
    """(S1, S2) at the optimal settings for ``pointer``; analytically
    (sqrt2 * G, (1 + F)/sqrt2) for all three configurations."""
    if not isinstance(pointer, PointerModel):
        raise TypeError("pointer must be a PointerModel")
    return weak_scores(scenario, pointer)


def weak_closed_form(pointer: PointerModel) -> tuple[float, float]:
    return float(np.sqrt(2) * pointer.G), float((1 + pointer.F) / np.sqrt(2))


def weak_catalog(scenario: Scenario) -> list[StrategyCase]:
    """Single case tracing the square-pointer trade-off as G runs over [0, 1]."""
    scenario = Scenario(scenario)

    def closed(g):
        g = np.clip(g, 0.0, 1.0)
        return np.sqrt(2) * g, (1 + np.sqrt(1 - g * g)) / np.sqrt(2)

    return [
        StrategyCase(scenario, "weak", np.pi / 4, ("G",), None, closed, variant="weak",
                     domain=((0.0, 1.0),),
                     simulator=lambda g: weak_scores(scenario, PointerModel.square(float(g)))),
    ]
