"""Dense complex linear algebra for single- and two-qubit operators.

Operators are plain ``numpy.ndarray`` objects of dtype ``complex128`` and
shape ``(2, 2)`` or ``(4, 4)``. Two-qubit operators use the ordering
``|00>, |01>, |10>, |11>`` with the first factor acting on Alice's qubit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Max-entry absolute tolerance for operator equality.
ATOL = 1e-10
#: Smallest eigenvalue admitted by :func:`is_psd`.
PSD_TOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)

_PAULIS = {1: SIGMA_1, 2: SIGMA_2, 3: SIGMA_3}

for _m in (IDENTITY, SIGMA_1, SIGMA_2, SIGMA_3):
    _m.setflags(write=False)


def pauli(index: int) -> np.ndarray:
    """Return the Pauli matrix sigma_index for index in {1, 2, 3}."""
    try:
        return _PAULIS[index].copy()
    except (KeyError, TypeError):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {index!r}") from None


def _check_square(m: np.ndarray, dims: tuple[int, ...], name: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise ValueError(f"{name} must be square with dimension in {dims}, got shape {m.shape}")
    return m


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``a (x) b`` of two single-qubit operators."""
    a = _check_square(a, (2,), "first operand")
    b = _check_square(b, (2,), "second operand")
    return np.kron(a, b)


def rot_y(angle: float) -> np.ndarray:
    """``exp(-i * angle * sigma_2)``, i.e. the real rotation
    ``[[cos, -sin], [sin, cos]]``.

    Note the convention: the rotation angle on the Bloch sphere is twice
    ``angle``.
    """
    if not np.isfinite(angle):
        raise ValueError(f"rotation angle must be finite, got {angle!r}")
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def trace(m: np.ndarray) -> complex:
    return complex(np.trace(m))


def allclose(a: np.ndarray, b: np.ndarray, atol: float = ATOL) -> bool:
    """Max-entry absolute comparison (no relative term)."""
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and bool(np.max(np.abs(a - b)) <= atol)


def is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    return allclose(m, dagger(m), atol)


def is_unitary(m: np.ndarray, atol: float = ATOL) -> bool:
    m = np.asarray(m)
    return allclose(m @ dagger(m), np.eye(m.shape[0]), atol)


def is_psd(m: np.ndarray, tol: float = PSD_TOL) -> bool:
    """Positive semidefiniteness of a Hermitian matrix.

    A Gershgorin disc test settles diagonally dominant inputs without an
    eigen-decomposition; everything else falls through to ``eigvalsh``.
    """
    m = np.asarray(m)
    if not is_hermitian(m):
        return False
    diag = np.real(np.diag(m))
    radii = np.sum(np.abs(m), axis=1) - np.abs(np.diag(m))
    if np.all(diag - radii >= -tol):
        return True
    return bool(np.linalg.eigvalsh(m)[0] >= -tol)


@dataclass(frozen=True)
class Observable:
    """Dichotomic observable ``n . sigma`` given by a unit Bloch vector."""

    n1: float
    n2: float
    n3: float

    def __post_init__(self) -> None:
        norm = np.sqrt(self.n1**2 + self.n2**2 + self.n3**2)
        if not np.isfinite(norm) or abs(norm - 1.0) > 1e-9:
            raise ValueError(f"Bloch vector must have unit norm, got |n| = {norm}")

    @classmethod
    def xz(cls, angle: float) -> Observable:
        """``cos(angle) sigma_1 + sin(angle) sigma_3``."""
        return cls(float(np.cos(angle)), 0.0, float(np.sin(angle)))

    @classmethod
    def from_xz(cls, x: float, z: float) -> Observable:
        """Observable ``x sigma_1 + z sigma_3``."""
        return cls(float(x), 0.0, float(z))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.n1, self.n2, self.n3])

    def __neg__(self) -> Observable:
        return Observable(-self.n1, -self.n2, -self.n3)

    def matrix(self) -> np.ndarray:
        return observable_matrix(self)


def observable_matrix(o: Observable) -> np.ndarray:
    """``n1 sigma_1 + n2 sigma_2 + n3 sigma_3``."""
    if not isinstance(o, Observable):
        raise TypeError(f"expected Observable, got {type(o).__name__}")
    return o.n1 * SIGMA_1 + o.n2 * SIGMA_2 + o.n3 * SIGMA_3
