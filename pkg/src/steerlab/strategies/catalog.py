"""Parametric measurement strategies for every scenario.

Each :class:`StrategyCase` maps its free angles to concrete settings for
Alice, Bob and Charlie and scores them through the density-matrix pipeline.
Cases with a known analytic trade-off carry it as ``closed_form``; the test
suite holds both routes to agreement.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from ..channels import MeasurementAction, bob_channel
from ..core import Observable, rot_y
from ..states import partial_entangled
from ..witnesses import SettingPair, WitnessKind, witness

SQRT2 = np.sqrt(2.0)
SQRT5 = np.sqrt(5.0)
MAX_ALPHA = np.pi / 4
HALF_PI = np.pi / 2

STEERING = WitnessKind.STEERING
CHSH = WitnessKind.CHSH


class Scenario(str, Enum):
    STEER_AB_LL = "steer-ab-ll"
    STEER_AB_CL = "steer-ab-cl"
    STEER_AB_LC = "steer-ab-lc"
    STEER_BC_LL_3A = "steer-bc-ll-3a"
    STEER_BC_LL_3B = "steer-bc-ll-3b"
    STEER_BC_CL = "steer-bc-cl"
    STEER_BC_LC = "steer-bc-lc"
    WEAK_LL = "weak-ll"
    WEAK_CL = "weak-cl"
    WEAK_BC_LL = "weak-bc-ll"

    @property
    def witnesses(self) -> tuple[WitnessKind, WitnessKind]:
        """(Alice-Bob witness, Alice-Charlie witness)."""
        table = {"ll": (STEERING, STEERING), "cl": (CHSH, STEERING), "lc": (STEERING, CHSH)}
        return next(table[t] for t in self.value.split("-") if t in table)

    @property
    def is_weak(self) -> bool:
        return self.value.startswith("weak")


@dataclass(frozen=True)
class Settings:
    alice: SettingPair
    bob: tuple[MeasurementAction, MeasurementAction]
    charlie: SettingPair

    @property
    def bob_observables(self) -> SettingPair:
        return SettingPair(self.bob[0].observable, self.bob[1].observable)


def score_settings(
    alpha: float, settings: Settings, witnesses: tuple[WitnessKind, WitnessKind]
) -> tuple[float, float]:
    """(S1, S2) for concrete settings on cos(alpha)|00> + sin(alpha)|11>."""
    rho = partial_entangled(alpha)
    s1 = witness(witnesses[0], rho, settings.alice, settings.bob_observables)
    rho_ac = bob_channel(rho, settings.bob)
    s2 = witness(witnesses[1], rho_ac, settings.alice, settings.charlie)
    return s1.value, s2.value


@dataclass(frozen=True, eq=False)
class StrategyCase:
    """One lambda-labelled strategy of a scenario at a fixed state parameter."""

    scenario: Scenario
    label: str
    alpha: float
    free_angles: tuple[str, ...]
    builder: Optional[Callable[..., Settings]]
    closed_form: Optional[Callable[..., tuple]] = None
    variant: str = "general"
    domain: tuple[tuple[float, float], ...] = ()
    #: Vectorised evaluator used in place of simulation when no closed form exists.
    fast: Optional[Callable[..., tuple]] = field(default=None, repr=False)
    #: Overrides the default density-matrix scoring (weak-measurement cases).
    simulator: Optional[Callable[..., tuple[float, float]]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not self.domain:
            object.__setattr__(self, "domain", tuple((-HALF_PI, HALF_PI) for _ in self.free_angles))

    @property
    def lam(self) -> str:
        return self.label

    @property
    def n_free(self) -> int:
        return len(self.free_angles)

    @property
    def witnesses(self) -> tuple[WitnessKind, WitnessKind]:
        return self.scenario.witnesses

    def settings(self, *angles: float) -> Settings:
        self._check_arity(angles)
        if self.builder is None:
            raise ValueError(f"case {self.label} of {self.scenario.value} has no explicit settings")
        return self.builder(*angles)

    def simulate(self, *angles: float) -> tuple[float, float]:
        """(S1, S2) through the full simulation pipeline."""
        self._check_arity(angles)
        if self.simulator is not None:
            return self.simulator(*angles)
        return score_settings(self.alpha, self.builder(*angles), self.witnesses)

    def scores(self, angles: np.ndarray) -> np.ndarray:
        """Vectorised (n, 2) scores for an (n, n_free) angle array.

        Uses the closed form, then the fast evaluator, then simulation.
        """
        angles = np.asarray(angles, dtype=float)
        if self.n_free == 0:
            n = len(angles) if angles.ndim == 2 else 1
            angles = np.zeros((n, 0))
        else:
            angles = angles.reshape(-1, self.n_free)
        n = len(angles)
        cols = [angles[:, k] for k in range(self.n_free)]
        fn = self.closed_form or self.fast
        if fn is not None:
            s1, s2 = fn(*cols)
            return np.column_stack([np.broadcast_to(s1, (n,)), np.broadcast_to(s2, (n,))]).astype(float)
        return np.array([self.simulate(*row) for row in angles], dtype=float).reshape(n, 2)

    def _check_arity(self, angles: Sequence[float]) -> None:
        if len(angles) != self.n_free:
            raise ValueError(f"case {self.label} takes {self.n_free} angle(s) {self.free_angles}, got {len(angles)}")


# --- settings helpers -------------------------------------------------------

def xz(angle: float) -> Observable:
    return Observable.xz(angle)


def pair(a0: Observable | None, a1: Observable | None) -> SettingPair:
    return SettingPair(a0, a1)


def mirror_x(angle: float) -> SettingPair:
    """cos(t) s1 + sin(t) s3 and cos(t) s1 - sin(t) s3."""
    return pair(xz(angle), xz(-angle))


def proj(o: Observable, twist: float = 0.0) -> MeasurementAction:
    """Projective action followed by exp(-i * twist * s2)."""
    return MeasurementAction.projective(o, rot_y(twist))


IDENT = MeasurementAction.identity()

DIAG_MINUS = xz(-np.pi / 4)        # (s1 - s3)/sqrt2
DIAG_PLUS = xz(np.pi / 4)          # (s1 + s3)/sqrt2
ANTI_DIAG = xz(3 * np.pi / 4)      # (-s1 + s3)/sqrt2
SIGMA1 = xz(0.0)
SIGMA3 = xz(HALF_PI)
C5_MINUS = Observable.from_xz(2 / SQRT5, -1 / SQRT5)
C5_PLUS = Observable.from_xz(2 / SQRT5, 1 / SQRT5)


def _const(v1: float, v2: float):
    return lambda: (v1, v2)


# --- catalogs with printed settings ------------------------------------------

def _steer_ab_ll_maximal(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_AB_LL
    c, s = np.cos, np.sin
    return [
        StrategyCase(sc, "1", alpha, ("theta",),
                     lambda t: Settings(mirror_x(t), (proj(DIAG_MINUS), proj(DIAG_PLUS, np.pi / 4)),
                                        pair(DIAG_MINUS, DIAG_MINUS)),
                     lambda t: (np.abs(c(t) - s(t)), np.abs(c(t))), "maximal"),
        StrategyCase(sc, "2", alpha, (),
                     lambda: Settings(pair(DIAG_PLUS, DIAG_MINUS), (IDENT, IDENT), pair(DIAG_PLUS, DIAG_MINUS)),
                     _const(0.0, SQRT2), "maximal"),
        StrategyCase(sc, "3", alpha, ("delta",),
                     lambda d: Settings(mirror_x(d), (IDENT, proj(SIGMA1)), pair(DIAG_PLUS, DIAG_MINUS)),
                     lambda d: (np.abs(c(d)) / SQRT2, 0.5 * np.abs(2 * c(d) + s(d))), "maximal"),
    ]


def _steer_ab_ll_general(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_AB_LL
    c, s = np.cos, np.sin
    s2a, c2a = s(2 * alpha), c(2 * alpha)
    return [
        StrategyCase(sc, "1", alpha, ("kappa",),
                     lambda k: Settings(mirror_x(k), (proj(DIAG_MINUS), proj(DIAG_PLUS, -np.pi / 4)),
                                        pair(DIAG_MINUS, ANTI_DIAG)),
                     lambda k: (np.abs(c(k) * s2a - s(k)), np.abs(s(k)))),
        StrategyCase(sc, "2", alpha, (),
                     lambda: Settings(pair(DIAG_PLUS, ANTI_DIAG), (IDENT, IDENT), pair(DIAG_PLUS, ANTI_DIAG)),
                     _const(abs(c2a), abs((1 + s2a) / SQRT2))),
        StrategyCase(sc, "3", alpha, ("tau",),
                     lambda t: Settings(mirror_x(t), (IDENT, proj(SIGMA1)), pair(DIAG_PLUS, DIAG_MINUS)),
                     lambda t: (np.abs(s(2 * alpha + t) / SQRT2), 0.5 * np.abs(2 * c(t) * s2a + s(t)))),
    ]


def _steer_ab_cl_maximal(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_AB_CL
    c, s = np.cos, np.sin
    return [
        StrategyCase(sc, "1", alpha, ("mu",),
                     lambda m: Settings(mirror_x(m), (proj(SIGMA1), proj(xz(2 * m), m)),
                                        pair(DIAG_MINUS, DIAG_PLUS)),
                     lambda m: (0.5 * (3 * c(m) - c(3 * m)), np.abs(c(m)) ** 3), "maximal"),
        StrategyCase(sc, "2", alpha, (),
                     lambda: Settings(pair(DIAG_PLUS, DIAG_MINUS), (IDENT, IDENT), pair(DIAG_PLUS, DIAG_MINUS)),
                     _const(0.0, SQRT2), "maximal"),
        StrategyCase(sc, "3", alpha, ("nu",),
                     lambda n: Settings(mirror_x(n), (IDENT, proj(SIGMA3)), pair(DIAG_PLUS, DIAG_MINUS)),
                     lambda n: (s(n), 0.5 * np.abs(c(n) + 2 * s(n))), "maximal"),
    ]


def _steer_ab_cl_general(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_AB_CL
    c, s = np.cos, np.sin
    s2a, c2a = s(2 * alpha), c(2 * alpha)
    return [
        StrategyCase(sc, "1", alpha, ("beta",),
                     lambda b: Settings(mirror_x(b), (proj(SIGMA1), proj(xz(2 * b), b)),
                                        pair(DIAG_MINUS, DIAG_PLUS)),
                     lambda b: (c(b) * (1 + s2a - c(2 * b)), np.abs(s2a * c(b) ** 3))),
        StrategyCase(sc, "2", alpha, (),
                     lambda: Settings(pair(SIGMA3, SIGMA1), (IDENT, IDENT), pair(SIGMA3, SIGMA1)),
                     _const(c2a, abs((1 + s2a) / SQRT2))),
        StrategyCase(sc, "3", alpha, ("gamma",),
                     lambda g: Settings(pair(xz(g), xz(np.pi - g)), (IDENT, proj(SIGMA1)),
                                        pair(DIAG_PLUS, ANTI_DIAG)),
                     lambda g: (s(2 * alpha + g), 0.5 * np.abs(2 * c(g) * s2a + s(g)))),
    ]


def _bc_main_common(sc: Scenario, alpha: float) -> list[StrategyCase]:
    c, s = np.cos, np.sin
    return [
        StrategyCase(sc, "1", alpha, ("chi",),
                     lambda x: Settings(pair(DIAG_MINUS, DIAG_PLUS), (proj(xz(x)), proj(xz(-x), -x)),
                                        pair(xz(x), xz(x))),
                     lambda x: (np.abs(c(x) - s(x)), np.abs(c(x))), "maximal"),
        StrategyCase(sc, "2", alpha, (),
                     lambda: Settings(pair(DIAG_MINUS, DIAG_PLUS), (IDENT, IDENT), pair(DIAG_MINUS, DIAG_PLUS)),
                     _const(0.0, SQRT2), "maximal"),
    ]


def _steer_bc_3a_maximal(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_BC_LL_3A
    c, s = np.cos, np.sin
    return _bc_main_common(sc, alpha) + [
        StrategyCase(sc, "3a", alpha, ("omega",),
                     lambda w: Settings(pair(DIAG_MINUS, DIAG_PLUS), (IDENT, proj(xz(w))), pair(C5_MINUS, C5_PLUS)),
                     lambda w: (0.5 * np.abs(s(w) + c(w)), np.abs((9 + c(2 * w)) / (4 * SQRT5))), "maximal"),
    ]


def _steer_bc_3b_maximal(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_BC_LL_3B
    c, s = np.cos, np.sin
    return _bc_main_common(sc, alpha) + [
        StrategyCase(sc, "3b", alpha, ("varpi",),
                     lambda v: Settings(pair(xz(v), xz(v + HALF_PI)), (IDENT, proj(SIGMA1)), pair(C5_MINUS, C5_PLUS)),
                     lambda v: (np.abs(s(v)) / SQRT2, np.sqrt(10) / 4 * np.abs(c(v) - s(v))), "maximal"),
    ]


def _bc_general_common(sc: Scenario, alpha: float) -> list[StrategyCase]:
    c, s = np.cos, np.sin
    s2a, c2a = s(2 * alpha), c(2 * alpha)
    return [
        StrategyCase(sc, "1", alpha, ("epsilon",),
                     lambda e: Settings(pair(DIAG_MINUS, DIAG_PLUS),
                                        (proj(xz(e)), proj(xz(-e), -(HALF_PI + e))),
                                        pair(xz(e), xz(e + np.pi))),
                     lambda e: (np.abs(c(e) * s2a - s(e)), np.abs(s(e)))),
        StrategyCase(sc, "2", alpha, (),
                     lambda: Settings(pair(DIAG_PLUS, ANTI_DIAG), (IDENT, IDENT), pair(DIAG_PLUS, ANTI_DIAG)),
                     _const(abs(c2a), abs((1 + s2a) / SQRT2))),
    ]


def _steer_bc_3a_general(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_BC_LL_3A
    c, s = np.cos, np.sin
    s2a, c2a = s(2 * alpha), c(2 * alpha)

    def cf(e):
        s1 = 0.5 * np.abs(s2a * c(e) + s(e) - c2a)
        s2 = np.abs((3 - c(2 * e) + 6 * s2a + s(2 * alpha - 2 * e) + s(2 * alpha + 2 * e)) / (4 * SQRT5))
        return s1, s2

    return _bc_general_common(sc, alpha) + [
        StrategyCase(sc, "3a", alpha, ("eta",),
                     lambda e: Settings(pair(DIAG_MINUS, DIAG_PLUS), (IDENT, proj(xz(e))), pair(C5_MINUS, C5_PLUS)),
                     cf),
    ]


def _steer_bc_3b_general(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_BC_LL_3B
    c, s = np.cos, np.sin
    s2a, c2a = s(2 * alpha), c(2 * alpha)
    return _bc_general_common(sc, alpha) + [
        StrategyCase(sc, "3b", alpha, ("zeta",),
                     lambda z: Settings(pair(xz(z), xz(z + HALF_PI)), (IDENT, proj(SIGMA1)), pair(C5_MINUS, C5_PLUS)),
                     lambda z: (np.abs((c2a - s2a) * s(z)) / SQRT2,
                                np.abs((1 + 4 * s2a) * (c(z) - s(z)) / (2 * np.sqrt(10))))),
    ]


# --- dispatch -----------------------------------------------------------------

_PRINTED = {
    Scenario.STEER_AB_LL: (_steer_ab_ll_maximal, _steer_ab_ll_general),
    Scenario.STEER_AB_CL: (_steer_ab_cl_maximal, _steer_ab_cl_general),
    Scenario.STEER_BC_LL_3A: (_steer_bc_3a_maximal, _steer_bc_3a_general),
    Scenario.STEER_BC_LL_3B: (_steer_bc_3b_maximal, _steer_bc_3b_general),
}


def is_maximal(alpha: float) -> bool:
    return abs(alpha - MAX_ALPHA) < 1e-12


def case_catalog(scenario: Scenario | str, alpha: float = MAX_ALPHA, variant: str = "auto") -> list[StrategyCase]:
    """All lambda-cases of ``scenario`` on cos(alpha)|00> + sin(alpha)|11>.

    ``variant`` selects between the maximal-state parametrisation ("maximal",
    only valid at alpha = pi/4) and the general-alpha one ("general").
    "auto" picks "maximal" at pi/4 when it exists.
    """
    from . import general, weak

    try:
        scenario = Scenario(scenario)
    except ValueError:
        raise ValueError(f"unknown scenario {scenario!r}") from None
    if not (-1e-12 <= alpha <= HALF_PI + 1e-12):
        raise ValueError(f"alpha must lie in [0, pi/2], got {alpha!r}")
    if variant not in ("auto", "maximal", "general"):
        raise ValueError(f"unknown variant {variant!r}")

    if scenario.is_weak:
        if not is_maximal(alpha):
            raise ValueError("weak-measurement configurations are defined on the maximal state only")
        return weak.weak_catalog(scenario)
    if scenario in _PRINTED:
        at_max, at_any = _PRINTED[scenario]
        if variant == "maximal" or (variant == "auto" and is_maximal(alpha)):
            if not is_maximal(alpha):
                raise ValueError("maximal-state settings assume alpha = pi/4")
            return at_max(alpha)
        return at_any(alpha)
    return {
        Scenario.STEER_AB_LC: general.steer_ab_lc,
        Scenario.STEER_BC_CL: general.steer_bc_cl,
        Scenario.STEER_BC_LC: general.steer_bc_lc,
    }[scenario](alpha)
