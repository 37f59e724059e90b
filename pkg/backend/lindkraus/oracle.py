"""
Brute-force reference solver.

Builds the dense N^2 x N^2 Liouvillian on column-stacked density matrices and
exponentiates it. Memory grows as N^4, so the dimension is capped
(``ORACLE_MAX_DIM`` setting, 64 by default).
"""

import logging
from typing import Optional

import numpy as np
from scipy import linalg as sla

from . import conf
from .closed_forms import SIGMA_Z
from .core import (
    DensityMatrix,
    DimensionError,
    LindbladModel,
    OracleSizeError,
    Superoperator,
    ORACLE_STATE_TOLERANCES,
)
from .linalg import expm, unvec, vec

logger = logging.getLogger(__name__)


def _check_size(dim: int, max_dim: Optional[int]):
    limit = conf.oracle_max_dim() if max_dim is None else max_dim
    if dim > limit:
        raise OracleSizeError(f"oracle limited to N <= {limit}, model has N={dim}")


def liouvillian(model: LindbladModel, max_dim: Optional[int] = None) -> Superoperator:
    """
    Dense generator L with d vec(rho)/dt = L vec(rho).

    L = -i(1 (x) H - H^T (x) 1)
        + sum_mn gamma_mn [conj(X) (x) X - 1/2 (1 (x) X^dag X) - 1/2 ((X^dag X)^T (x) 1)]
        + gamma_0 (sigma_z (x) sigma_z - 1)  for the N = 2 dephasing term
    """
    dim = model.dim
    _check_size(dim, max_dim)
    identity = np.eye(dim)
    hamiltonian = np.diag(model.energies).astype(np.complex128)
    mat = -1j * (np.kron(identity, hamiltonian) - np.kron(hamiltonian.T, identity))

    for m, n in zip(*np.nonzero(model.rates)):
        rate = model.rates[m, n]
        jump = np.zeros((dim, dim))
        jump[m, n] = 1.0
        number = jump.T @ jump
        mat += rate * (np.kron(jump.conj(), jump)
                       - 0.5 * np.kron(identity, number)
                       - 0.5 * np.kron(number.T, identity))

    if model.dephasing_rate:
        if dim != 2:
            raise DimensionError("sigma_z dephasing is defined for N=2 only")
        mat += model.dephasing_rate * (np.kron(SIGMA_Z.conj(), SIGMA_Z) - np.eye(4))

    logger.debug("built %dx%d Liouvillian", dim * dim, dim * dim)
    return Superoperator(dim=dim, mat=mat)


def oracle_evolve(model: LindbladModel, rho0: DensityMatrix, t: float,
                  max_dim: Optional[int] = None) -> DensityMatrix:
    """unvec(e^{Lt} vec(rho0)), checked at the oracle's looser tolerances."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if rho0.dim != model.dim:
        raise DimensionError(f"state has dimension {rho0.dim}, model has N={model.dim}")
    generator = liouvillian(model, max_dim)
    evolved = expm(generator.mat, t) @ vec(rho0.mat)
    return DensityMatrix(unvec(evolved, model.dim), ORACLE_STATE_TOLERANCES)


def steady_state(model: LindbladModel, max_dim: Optional[int] = None) -> DensityMatrix:
    """Unique null vector of L as a unit-trace state."""
    generator = liouvillian(model, max_dim)
    kernel = sla.null_space(generator.mat, rcond=1e-10)
    if kernel.shape[1] != 1:
        raise ValueError(f"steady state is not unique (kernel dimension {kernel.shape[1]})")
    rho = unvec(kernel[:, 0], model.dim)
    rho = rho / np.trace(rho)
    return DensityMatrix(0.5 * (rho + rho.conj().T), ORACLE_STATE_TOLERANCES)
