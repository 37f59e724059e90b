"""
Dense linear-algebra kernels.

Matrix exponentials go through scipy's order-13 Padé scaling-and-squaring,
which stays valid for defective matrices such as the jump-coefficient
generators (they are often neither invertible nor diagonalizable), so no
eigendecomposition is used on that path.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg as sla

from .core import ComplexMatrix, DimensionError, NumericalError, RealMatrix

# Largest 1-norm handled by the degree-13 Padé approximant without scaling.
THETA_13 = 5.371920351148152


@dataclass(frozen=True, eq=False)
class ExpmResult:
    """
    e^{Mt} with an estimate of the squarings its scaling step needs.

    The estimate uses the plain 1-norm rule against THETA_13; scipy picks its
    own count from sharper norm bounds and may use fewer.
    """
    value: np.ndarray
    scaling_squarings: int


def _square_finite(mat, name: str = "M") -> np.ndarray:
    arr = np.asarray(mat)
    if not np.issubdtype(arr.dtype, np.number):
        raise DimensionError(f"{name} must be numeric")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} has non-finite entries")
    return arr


def _finite_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return t


def scaling_squarings(mat: np.ndarray) -> int:
    """Estimated squarings: ceil(log2(||mat||_1 / THETA_13)), floored at 0."""
    norm = float(np.linalg.norm(mat, 1)) if mat.size else 0.0
    if norm <= THETA_13:
        return 0
    return max(int(math.ceil(math.log2(norm / THETA_13))), 0)


def expm_with_diagnostics(mat, t: float = 1.0) -> ExpmResult:
    """
    Compute e^{Mt} and estimate the scaling it needs.

    Args:
        mat: Square finite matrix M (real or complex)
        t: Finite time

    Returns:
        ExpmResult with the exponential and the squaring estimate
    """
    arr = _square_finite(mat)
    t = _finite_time(t)
    scaled = arr * t
    value = sla.expm(scaled)
    if not np.all(np.isfinite(value)):
        raise NumericalError("matrix exponential overflowed")
    return ExpmResult(value=value, scaling_squarings=scaling_squarings(scaled))


def expm(mat, t: float = 1.0) -> np.ndarray:
    """e^{Mt}; keeps the real dtype for real input."""
    return expm_with_diagnostics(mat, t).value


def expm_integral(mat, t: float, shift: float = 0.0) -> np.ndarray:
    """
    Exact integral of e^{Ms} over s in [0, t], times e^{-shift t}.

    The block matrix [[M - shift, 1], [0, -shift]] exponentiated over t carries
    the result in its upper-right block, for singular and defective M alike.
    With shift at the dominant growth rate of M the block stays bounded where
    the bare integral would overflow.
    """
    arr = _square_finite(mat)
    t = _finite_time(t)
    if t < 0:
        raise ValueError(f"integration time must be non-negative, got {t}")
    d = arr.shape[0]
    block = np.zeros((2 * d, 2 * d), dtype=np.result_type(arr.dtype, np.float64))
    block[:d, :d] = arr - shift * np.eye(d)
    block[:d, d:] = np.eye(d)
    block[d:, d:] = -shift * np.eye(d)
    return expm(block, t)[:d, d:]


def vec(mat) -> np.ndarray:
    """Column-stacking vectorisation: [[a, b], [c, d]] -> (a, c, b, d)."""
    arr = np.asarray(mat)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"vec expects a square matrix, got shape {arr.shape}")
    return arr.T.reshape(-1)


def unvec(vector, dim: int) -> np.ndarray:
    """Inverse of vec for an N x N matrix."""
    arr = np.asarray(vector)
    if arr.size != dim * dim:
        raise DimensionError(f"vector of length {arr.size} cannot be unvec'd to {dim}x{dim}")
    return arr.reshape(dim, dim).T


def hermitian_eigs(mat, tol: float = 1e-10) -> Tuple[RealMatrix, ComplexMatrix]:
    """
    Eigen-decomposition of a Hermitian matrix.

    Args:
        mat: Matrix Hermitian within ``tol`` (max-norm of M - M^dagger)
        tol: Allowed asymmetry

    Returns:
        (ascending eigenvalues, eigenvectors as columns)
    """
    arr = _square_finite(mat)
    asym = float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0
    if asym > tol:
        raise NumericalError(f"matrix is not Hermitian (deviation {asym:.3e})")
    return sla.eigh(0.5 * (arr + arr.conj().T))
