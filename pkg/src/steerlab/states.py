"""Two-qubit resource states of the form cos(a)|00> + sin(a)|11>."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ATOL, is_hermitian, is_psd

MAX_ALPHA = np.pi / 2
TRACE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 4x4 density operator (Alice's qubit first)."""

    mat: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.array(self.mat, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"two-qubit density matrix must be 4x4, got {m.shape}")
        if not is_hermitian(m):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr.real:.3g}, expected 1")
        if not is_psd(m):
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def __getitem__(self, idx):
        return self.mat[idx]

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def expectation(self, op: np.ndarray) -> float:
        """``Tr[op . rho]`` for a Hermitian ``op`` (real part)."""
        return float(np.real(np.trace(op @ self.mat)))

    def allclose(self, other: DensityMatrix, atol: float = ATOL) -> bool:
        return bool(np.max(np.abs(self.mat - other.mat)) <= atol)


def _schmidt_projector(alpha: float) -> np.ndarray:
    psi = np.zeros(4, dtype=complex)
    psi[0] = np.cos(alpha)
    psi[3] = np.sin(alpha)
    return np.outer(psi, psi.conj())


def partial_entangled(alpha: float) -> DensityMatrix:
    """Projector onto ``cos(alpha)|00> + sin(alpha)|11>`` for alpha in [0, pi/2]."""
    if not (-1e-12 <= alpha <= MAX_ALPHA + 1e-12):
        raise ValueError(f"alpha must lie in [0, pi/2], got {alpha!r}")
    return DensityMatrix(_schmidt_projector(alpha))


def max_entangled() -> DensityMatrix:
    """Bell state (|00> + |11>)/sqrt(2)."""
    return DensityMatrix(_schmidt_projector(np.pi / 4))
