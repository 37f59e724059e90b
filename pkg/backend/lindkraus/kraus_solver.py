"""
Kraus-Form Solver

Solves rho' = A rho + rho A^dagger + sum_mn gamma_mn X_mn rho X_mn^dagger
without building the N^2 x N^2 Liouvillian:

1. A = -iH - 1/2 sum gamma_mn X_mn^dagger X_mn is diagonal, with complex
   energies E~_n = E_n - (i/2) sum_m gamma_mn.
2. For every target m in the channel set I, the contractions
   X_mn rho X_mn^dagger (n in I) evolve under the small real matrix Gamma_m.
3. Integrating e^{Gamma_m s} gives the jump coefficients c_mn'(t), so that

       rho(t) = e^{At} rho0 e^{A^dagger t} + sum c_mn'(t) X_mn' rho0 X_mn'^dagger,

   which is directly a Kraus representation.

Everything returned is in the Schrodinger picture; the interaction picture is
internal only.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from . import closed_forms
from .core import (
    ChannelError,
    ComplexMatrix,
    DensityMatrix,
    DimensionError,
    GammaMatrix,
    KrausSet,
    LindbladModel,
    ModelValidationError,
    NonCompletelyPositiveError,
    Tolerances,
    DEFAULT_TOLERANCES,
    ensure_valid,
)
from .linalg import expm_integral, hermitian_eigs, unvec

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EffectiveGenerator:
    """Diagonal A = -i diag(E~_n)."""
    complex_energies: ComplexMatrix

    def propagator_diagonal(self, t: float) -> ComplexMatrix:
        """Diagonal of e^{At}: e^{-i E~_n t}."""
        return np.exp(-1j * self.complex_energies * t)

    def propagator(self, t: float) -> ComplexMatrix:
        return np.diag(self.propagator_diagonal(t))


@dataclass(frozen=True, eq=False)
class JumpCoefficients:
    """
    Schrodinger-picture weights of X_mn' rho0 X_mn'^dagger at ``time``.

    ``coeffs[(m, n')]`` already includes the decay e^{2 Im E~_m t} picked up on
    the way back from the interaction picture.
    """
    time: float
    coeffs: Dict[Tuple[int, int], float]

    def as_matrix(self, dim: int) -> np.ndarray:
        """C[m, n'] so that the jump part of rho(t) is diag(C @ populations(rho0))."""
        mat = np.zeros((dim, dim))
        for (m, n_prime), value in self.coeffs.items():
            mat[m, n_prime] = value
        return mat


def _require_plain_model(model: LindbladModel, tolerances: Tolerances):
    ensure_valid(model, tolerances)
    if model.dephasing_rate > 0:
        raise ModelValidationError(
            ["dephasing_rate > 0 is solved by the two-level dephasing closed form, not by Gamma_m"]
        )


def effective_generator(model: LindbladModel,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> EffectiveGenerator:
    """E~_n = E_n - (i/2) sum_{m in I} gamma_mn."""
    _require_plain_model(model, tolerances)
    outflow = model.rates.sum(axis=0)
    return EffectiveGenerator(complex_energies=model.energies - 0.5j * outflow)


def _gamma_block(model: LindbladModel, m: int, states: Tuple[int, ...]) -> np.ndarray:
    idx = np.array(states)
    outflow = model.rates.sum(axis=0)
    block = model.rates[np.ix_(idx, idx)].copy()
    block[np.diag_indices_from(block)] += outflow[m] - outflow[idx]
    return block


def gamma_matrix(model: LindbladModel, m: int,
                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> GammaMatrix:
    """
    Build Gamma_m over the channel set.

    (Gamma_m)_{nn'} = delta_{nn'} sum_{l in I} (gamma_lm - gamma_ln) + gamma_nn',
    rows and columns in ascending state order.
    """
    _require_plain_model(model, tolerances)
    states = model.channel_set
    if m not in states:
        raise ChannelError(f"state {m} is not in the channel set {states}")
    return GammaMatrix(target=m, states=states, mat=_gamma_block(model, m, states))


def jump_coefficients(model: LindbladModel, t: float,
                      tolerances: Tolerances = DEFAULT_TOLERANCES) -> JumpCoefficients:
    """
    Compute c_mn'(t) = e^{2 Im E~_m t} sum_n gamma_mn (int_0^t e^{Gamma_m s} ds)_{nn'}.

    Args:
        model: Valid model without dephasing
        t: Non-negative time
        tolerances: ``negative_coefficient`` separates rounding from non-CP maps

    Returns:
        JumpCoefficients over m, n' in the channel set
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    _require_plain_model(model, tolerances)
    states = model.channel_set
    idx = np.array(states, dtype=int)
    outflow = model.rates.sum(axis=0)
    logger.debug("jump coefficients: N=%d, |I|=%d, t=%g", model.dim, len(states), t)

    coeffs = {}
    for m in states:
        incoming = model.rates[m, idx]
        if not incoming.any():
            continue
        # Gamma_m - outflow[m] has its spectrum in Re <= 0.
        integral = expm_integral(_gamma_block(model, m, states), t, shift=outflow[m])
        row = incoming @ integral
        for n_prime, value in zip(states, row):
            value = float(value)
            if value < -tolerances.negative_coefficient:
                logger.error("negative jump coefficient c[%d,%d](%g) = %.3e", m, n_prime, t, value)
                raise NonCompletelyPositiveError(
                    f"jump coefficient c[{m},{n_prime}]({t:g}) = {value:.3e} is negative; "
                    "the map is not completely positive"
                )
            if value < 0:
                logger.debug("clipping c[%d,%d] = %.3e to 0", m, n_prime, value)
                value = 0.0
            coeffs[(m, n_prime)] = value
    return JumpCoefficients(time=float(t), coeffs=coeffs)


def _solved_map(model: LindbladModel, t: float, tolerances: Tolerances) -> Callable[[np.ndarray], np.ndarray]:
    generator = effective_generator(model, tolerances)
    diagonal = generator.propagator_diagonal(t)
    no_jump = np.outer(diagonal, diagonal.conj())
    jumps = jump_coefficients(model, t, tolerances).as_matrix(model.dim)

    def apply(rho: np.ndarray) -> np.ndarray:
        out = rho * no_jump
        out[np.diag_indices_from(out)] += jumps @ np.diag(rho)
        return out

    return apply


def channel_map(model: LindbladModel, t: float,
                tolerances: Tolerances = DEFAULT_TOLERANCES) -> Callable[[np.ndarray], np.ndarray]:
    """
    The solved evolution at time t as a linear map on N x N arrays.

    Models with sigma_z dephasing go through the two-level dephasing closed form.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    ensure_valid(model, tolerances)
    if model.dephasing_rate > 0:
        params = closed_forms.TwoLevelParams.from_model(model)
        return closed_forms.two_level_dephasing_map(params, t)
    return _solved_map(model, t, tolerances)


def evolve(model: LindbladModel, rho0: DensityMatrix, t: float,
           tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """
    Evolve rho0 for time t.

    Args:
        model: Valid model without dephasing
        rho0: Initial state of dimension N
        t: Non-negative time

    Returns:
        rho(t), checked against the density-matrix invariants
    """
    if rho0.dim != model.dim:
        raise DimensionError(f"state has dimension {rho0.dim}, model has N={model.dim}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    _require_plain_model(model, tolerances)
    return DensityMatrix(_solved_map(model, t, tolerances)(np.array(rho0.mat)), tolerances)


def kraus_set(model: LindbladModel, t: float,
              tolerances: Tolerances = DEFAULT_TOLERANCES) -> KrausSet:
    """
    Kraus operators {e^{At}} + {sqrt(c_mn') X_mn'}.

    Jump operators whose coefficient is below ``kraus_cutoff`` are dropped.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    generator = effective_generator(model, tolerances)
    dim = model.dim
    operators = [generator.propagator(t)]
    for (m, n_prime), value in sorted(jump_coefficients(model, t, tolerances).coeffs.items()):
        if value <= tolerances.kraus_cutoff:
            continue
        jump = np.zeros((dim, dim), dtype=np.complex128)
        jump[m, n_prime] = np.sqrt(value)
        operators.append(jump)
    logger.debug("kraus set at t=%g: %d operators", t, len(operators))
    return KrausSet(dim=dim, operators=tuple(operators))


def choi_matrix(apply_map: Callable[[np.ndarray], np.ndarray], dim: int) -> ComplexMatrix:
    """Choi = sum_ij E_ij (x) Phi(E_ij), matching column-stacked vec."""
    choi = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for i in range(dim):
        for j in range(dim):
            unit = np.zeros((dim, dim), dtype=np.complex128)
            unit[i, j] = 1.0
            choi += np.kron(unit, apply_map(unit))
    return choi


def kraus_from_choi(choi, tolerances: Tolerances = DEFAULT_TOLERANCES) -> KrausSet:
    """
    Canonical Kraus set from the eigen-decomposition of a Choi matrix.

    Raises:
        NonCompletelyPositiveError: an eigenvalue is below -choi_negative
    """
    choi = np.asarray(choi, dtype=np.complex128)
    dim = int(round(np.sqrt(choi.shape[0])))
    if choi.shape != (dim * dim, dim * dim):
        raise DimensionError(f"Choi matrix must be N^2 x N^2, got shape {choi.shape}")
    eigenvalues, eigenvectors = hermitian_eigs(choi)
    if eigenvalues[0] < -tolerances.choi_negative:
        raise NonCompletelyPositiveError(
            f"Choi matrix has eigenvalue {eigenvalues[0]:.3e}; the map is not completely positive"
        )
    operators = tuple(
        np.sqrt(value) * unvec(eigenvectors[:, k], dim)
        for k, value in enumerate(eigenvalues)
        if value > tolerances.choi_cutoff
    )
    return KrausSet(dim=dim, operators=operators)


def solved_kraus_set(model: LindbladModel, t: float,
                     tolerances: Tolerances = DEFAULT_TOLERANCES) -> KrausSet:
    """Kraus set for any supported model: direct for Gamma_m models, via Choi with dephasing."""
    if model.dephasing_rate > 0:
        ensure_valid(model, tolerances)
        return kraus_from_choi(choi_matrix(channel_map(model, t, tolerances), model.dim), tolerances)
    return kraus_set(model, t, tolerances)


def solved_evolve(model: LindbladModel, rho0: DensityMatrix, t: float,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """evolve for Gamma_m models, the dephasing closed form otherwise."""
    if model.dephasing_rate > 0:
        ensure_valid(model, tolerances)
        params = closed_forms.TwoLevelParams.from_model(model)
        return closed_forms.two_level_dephasing_solution(params, rho0, t, tolerances)
    return evolve(model, rho0, t, tolerances)
