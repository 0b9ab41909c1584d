"""Open-parameter strategy families for the hybrid scenarios without
printed settings.

Charlie always answers with the x-z settings that maximise his witness
given the post-Bob state (:func:`steerlab.witnesses.optimal_partner`), so
only Alice's and Bob's angles are free. Constraints per scenario:

* ``steer-ab-lc``: Alice uses the mirror pair cos(t)s1 +- sin(t)s3; for
  lambda=1 Bob measures an orthogonal pair, the second followed by a free
  y-rotation; for lambda=3 Bob's pair is (I, s1).
* ``steer-bc-cl`` / ``steer-bc-lc``: Alice measures an orthogonal pair;
  Bob's projective directions and the lambda=1 y-rotation are free.

Scores are also available in vectorised form from the x-z correlation
matrix of the state, which the tests hold against the simulation.
"""
from __future__ import annotations

import numpy as np

from ..channels import bob_channel
from ..states import partial_entangled
from ..witnesses import WitnessKind, optimal_partner
from .catalog import (
    HALF_PI,
    IDENT,
    SIGMA1,
    Scenario,
    Settings,
    StrategyCase,
    mirror_x,
    pair,
    proj,
    xz,
)

SQRT2 = np.sqrt(2.0)


def _with_optimal_charlie(alpha: float, kind: WitnessKind, alice, bob) -> Settings:
    rho_ac = bob_channel(partial_entangled(alpha), bob)
    return Settings(alice, bob, optimal_partner(kind, rho_ac, alice))


# --- vectorised x-z Bloch algebra ---------------------------------------------
# Vectors are pairs (x, z) and 2x2 matrices are 4-tuples (m00, m01, m10, m11)
# of equally shaped arrays, which keeps single-point evaluation cheap.

def _unit(t):
    return np.cos(t), np.sin(t)


def _matvec(m, v):
    return m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]


def _tmatvec(m, v):
    return m[0] * v[0] + m[2] * v[1], m[1] * v[0] + m[3] * v[1]


def _dephase(T, b):
    """Correlation matrix after summing Bob's outcomes along unit ``b``."""
    m = _matvec(T, b)
    return m[0] * b[0], m[0] * b[1], m[1] * b[0], m[1] * b[1]


def _twist(T, twist):
    """Apply the Bloch rotation induced by exp(-i*twist*s2) on Bob's side."""
    c, s = np.cos(2 * twist), np.sin(2 * twist)
    return T[0] * c + T[1] * s, -T[0] * s + T[1] * c, T[2] * c + T[3] * s, -T[2] * s + T[3] * c


def _corr(T, a, b):
    m = _matvec(T, b)
    return a[0] * m[0] + a[1] * m[1]


def _norm(v):
    return np.hypot(v[0], v[1])


def _partner_value(kind, T, a0, a1):
    if kind is WitnessKind.STEERING:
        return (_norm(_tmatvec(T, a0)) + _norm(_tmatvec(T, a1))) / SQRT2
    plus = (a0[0] + a1[0], a0[1] + a1[1])
    minus = (a0[0] - a1[0], a0[1] - a1[1])
    return 0.5 * (_norm(_tmatvec(T, plus)) + _norm(_tmatvec(T, minus)))


def _first_witness(kind, E):
    if kind is WitnessKind.STEERING:
        return np.abs(E[0][0] + E[1][1]) / SQRT2
    return 0.5 * (E[0][0] + E[0][1] + E[1][0] - E[1][1])


class _Bloch:
    """Two-qubit state cos(a)|00> + sin(a)|11> restricted to the x-z plane."""

    def __init__(self, alpha: float):
        self.T = (np.sin(2 * alpha), 0.0, 0.0, 1.0)
        self.alice_marginal = (0.0, np.cos(2 * alpha))

    def bob_corr(self, a, b):
        """<A (x) B> with ``b`` a unit vector or None for the identity."""
        if b is None:
            return a[0] * self.alice_marginal[0] + a[1] * self.alice_marginal[1]
        return _corr(self.T, a, b)

    def after_bob(self, settings):
        """Correlation matrix of the Alice-Charlie state; ``settings`` is a
        pair of (direction or None, twist or None)."""
        out = (0.0, 0.0, 0.0, 0.0)
        for b, twist in settings:
            T = self.T if b is None else _dephase(self.T, b)
            if twist is not None:
                T = _twist(T, twist)
            out = tuple(o + 0.5 * t for o, t in zip(out, T))
        return out


def _fast(alpha, kinds, alice_fn, bob_fn):
    def evaluate(*cols):
        cols = [np.asarray(c, dtype=float) for c in cols]
        st = _Bloch(alpha)
        a0, a1 = alice_fn(cols)
        bob = bob_fn(cols)
        E = [[st.bob_corr(a, b) for b, _ in bob] for a in (a0, a1)]
        s1 = _first_witness(kinds[0], E)
        s2 = _partner_value(kinds[1], st.after_bob(bob), a0, a1)
        return s1, s2
    return evaluate


# --- families -----------------------------------------------------------------

def steer_ab_lc(alpha: float) -> list[StrategyCase]:
    sc = Scenario.STEER_AB_LC
    kinds = sc.witnesses

    def alice_vec(cols):
        t = cols[0]
        return _unit(t), _unit(-t)

    def build1(t, b, u):
        return _with_optimal_charlie(alpha, kinds[1], mirror_x(t), (proj(xz(b)), proj(xz(b + HALF_PI), u)))

    def build2(t):
        return _with_optimal_charlie(alpha, kinds[1], mirror_x(t), (IDENT, IDENT))

    def build3(t):
        return _with_optimal_charlie(alpha, kinds[1], mirror_x(t), (IDENT, proj(SIGMA1)))

    zero = lambda cols: np.zeros_like(cols[0])
    return [
        StrategyCase(sc, "1", alpha, ("theta", "bob", "twist"), build1,
                     fast=_fast(alpha, kinds, alice_vec,
                                lambda c: [(_unit(c[1]), None), (_unit(c[1] + HALF_PI), c[2])])),
        StrategyCase(sc, "2", alpha, ("theta",), build2,
                     fast=_fast(alpha, kinds, alice_vec, lambda c: [(None, None), (None, None)])),
        StrategyCase(sc, "3", alpha, ("theta",), build3,
                     fast=_fast(alpha, kinds, alice_vec, lambda c: [(None, None), (_unit(zero(c)), None)])),
    ]


def _steer_bc_hybrid(sc: Scenario, alpha: float) -> list[StrategyCase]:
    kinds = sc.witnesses

    def alice_pair(p):
        return pair(xz(p), xz(p + HALF_PI))

    def alice_vec(cols):
        return _unit(cols[0]), _unit(cols[0] + HALF_PI)

    def build1(p, b0, b1, u):
        return _with_optimal_charlie(alpha, kinds[1], alice_pair(p), (proj(xz(b0)), proj(xz(b1), u)))

    def build2(p):
        return _with_optimal_charlie(alpha, kinds[1], alice_pair(p), (IDENT, IDENT))

    def build3(p, b1):
        return _with_optimal_charlie(alpha, kinds[1], alice_pair(p), (IDENT, proj(xz(b1))))

    return [
        StrategyCase(sc, "1", alpha, ("phi", "b0", "b1", "twist"), build1,
                     fast=_fast(alpha, kinds, alice_vec,
                                lambda c: [(_unit(c[1]), None), (_unit(c[2]), c[3])])),
        StrategyCase(sc, "2", alpha, ("phi",), build2,
                     fast=_fast(alpha, kinds, alice_vec, lambda c: [(None, None), (None, None)])),
        StrategyCase(sc, "3", alpha, ("phi", "b1"), build3,
                     fast=_fast(alpha, kinds, alice_vec, lambda c: [(None, None), (_unit(c[1]), None)])),
    ]


def steer_bc_cl(alpha: float) -> list[StrategyCase]:
    return _steer_bc_hybrid(Scenario.STEER_BC_CL, alpha)


def steer_bc_lc(alpha: float) -> list[StrategyCase]:
    return _steer_bc_hybrid(Scenario.STEER_BC_LC, alpha)
