"""
Analytic Solutions

Hard-coded solutions of three master equations, used both as fixtures for the
general solver and as fast paths:

* the three-level ladder |2> -> |1> -> |0> at zero temperature with equal
  rates gamma,
* the two-level system at finite temperature (rates gamma_plus down,
  gamma_minus up),
* the same two-level system with extra sigma_z dephasing gamma_0, solved with
  the superoperator algebra of P_z, P_- and P_+ because its degenerate
  transition frequencies put it outside the Gamma_m construction.

Two-level conventions: level 0 is the ground state, sigma_z = diag(-1, +1),
sigma_- = |0><1| and H = (Omega/2) sigma_z.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from .core import (
    ComplexMatrix,
    DensityMatrix,
    DimensionError,
    LindbladModel,
    Tolerances,
    DEFAULT_TOLERANCES,
)

SIGMA_Z = np.diag([-1.0, 1.0]).astype(np.complex128)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
SIGMA_PLUS = SIGMA_MINUS.T.copy()

B0 = np.zeros((3, 3), dtype=np.complex128)
B0[0, 1] = 1.0
B1 = np.zeros((3, 3), dtype=np.complex128)
B1[1, 2] = 1.0

P_ALGEBRA_TOLERANCE = 1e-14

Superop = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TwoLevelParams:
    """Parameters of the (dephasing) two-level master equation."""
    omega: float
    gamma_plus: float
    gamma_minus: float
    gamma_0: float = 0.0

    def __post_init__(self):
        for name in ("omega", "gamma_plus", "gamma_minus", "gamma_0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma_plus < 0 or self.gamma_minus < 0 or self.gamma_0 < 0:
            raise ValueError("rates must be non-negative")

    @property
    def gamma_beta(self) -> float:
        return self.gamma_plus + self.gamma_minus

    @property
    def gamma(self) -> float:
        return self.gamma_plus - self.gamma_minus

    @classmethod
    def from_model(cls, model: LindbladModel) -> "TwoLevelParams":
        if model.dim != 2:
            raise DimensionError(f"two-level parameters need N=2, model has N={model.dim}")
        return cls(
            omega=model.transition_frequency(1, 0),
            gamma_plus=float(model.rates[0, 1]),
            gamma_minus=float(model.rates[1, 0]),
            gamma_0=model.dephasing_rate,
        )

    def to_model(self) -> LindbladModel:
        return two_level_model(self)


def two_level_model(params: TwoLevelParams) -> LindbladModel:
    """LindbladModel with E = (-Omega/2, Omega/2), gamma[0,1] = gamma_plus, gamma[1,0] = gamma_minus."""
    rates = np.array([[0.0, params.gamma_plus], [params.gamma_minus, 0.0]])
    return LindbladModel(
        energies=[-params.omega / 2, params.omega / 2],
        rates=rates,
        dephasing_rate=params.gamma_0,
    )


def three_level_model(e0: float, e1: float, e2: float, gamma: float) -> LindbladModel:
    """Ladder with gamma[0,1] = gamma[1,2] = gamma."""
    rates = np.zeros((3, 3))
    rates[0, 1] = gamma
    rates[1, 2] = gamma
    return LindbladModel(energies=[e0, e1, e2], rates=rates)


def _state_array(rho0, dim: int) -> ComplexMatrix:
    mat = rho0.mat if isinstance(rho0, DensityMatrix) else np.asarray(rho0, dtype=np.complex128)
    if mat.shape != (dim, dim):
        raise DimensionError(f"state must be {dim}x{dim}, got shape {mat.shape}")
    return mat


def _check_time(t: float):
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")


def _sandwich(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return op @ rho @ op.conj().T


def three_level_map(e0: float, e1: float, e2: float, gamma: float, t: float) -> Superop:
    """The zero-temperature ladder solution as a linear map on 3x3 arrays."""
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    _check_time(t)
    decay = math.exp(-gamma * t)
    gt_decay = gamma * t * decay
    no_jump = np.diag([
        np.exp(-1j * e0 * t),
        np.exp(-1j * e1 * t) * math.exp(-gamma * t / 2),
        np.exp(-1j * e2 * t) * math.exp(-gamma * t / 2),
    ])
    b0b1 = B0 @ B1

    def apply(rho: np.ndarray) -> np.ndarray:
        return (_sandwich(no_jump, rho)
                + (1 - decay) * _sandwich(B0, rho)
                + gt_decay * _sandwich(B1, rho)
                + (1 - decay - gt_decay) * _sandwich(b0b1, rho))

    return apply


def three_level_solution(e0: float, e1: float, e2: float, gamma: float,
                         rho0: DensityMatrix, t: float,
                         tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """
    Evaluate the zero-temperature three-level solution.

    Args:
        e0, e1, e2: Level energies
        gamma: Common decay rate of |2> -> |1> and |1> -> |0>
        rho0: Initial state
        t: Time

    Returns:
        rho(t) in the Schrodinger picture
    """
    rho = _state_array(rho0, 3)
    return DensityMatrix(three_level_map(e0, e1, e2, gamma, t)(rho), tolerances)


def two_level_map(params: TwoLevelParams, t: float) -> Superop:
    """Finite-temperature two-level solution (gamma_0 = 0) as a linear map."""
    if params.gamma_0 != 0:
        raise ValueError("two_level_map needs gamma_0 = 0; use two_level_dephasing_map")
    _check_time(t)
    gb = params.gamma_beta
    decay = math.exp(-gb * t)
    half = math.exp(-gb * t / 2)
    cos_t = math.cos(params.omega * t)
    sin_t = math.sin(params.omega * t)
    # Every gb-normalised term carries (1 - e^{-gb t}), which vanishes with gb.
    ratio = params.gamma / gb if gb > 0 else 0.0
    down = params.gamma_plus / gb if gb > 0 else 0.0
    up = params.gamma_minus / gb if gb > 0 else 0.0
    c_rho = 0.25 * (1 + decay + 2 * half * cos_t)
    c_zrz = 0.25 * (1 + decay - 2 * half * cos_t)
    c_rz = -0.25 * (ratio * (1 - decay) - 2j * half * sin_t)
    c_zr = -0.25 * (ratio * (1 - decay) + 2j * half * sin_t)

    def apply(rho: np.ndarray) -> np.ndarray:
        return (c_rho * rho
                + c_zrz * SIGMA_Z @ rho @ SIGMA_Z
                + c_rz * rho @ SIGMA_Z
                + c_zr * SIGMA_Z @ rho
                + (1 - decay) * (down * SIGMA_MINUS @ rho @ SIGMA_PLUS
                                 + up * SIGMA_PLUS @ rho @ SIGMA_MINUS))

    return apply


def two_level_solution(params: TwoLevelParams, rho0: DensityMatrix, t: float,
                       tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Evaluate the finite-temperature two-level solution (no dephasing)."""
    rho = _state_array(rho0, 2)
    return DensityMatrix(two_level_map(params, t)(rho), tolerances)


def p_z(rho: np.ndarray) -> np.ndarray:
    return SIGMA_Z @ rho @ SIGMA_Z


def p_minus(rho: np.ndarray) -> np.ndarray:
    return SIGMA_MINUS @ rho @ SIGMA_PLUS


def p_plus(rho: np.ndarray) -> np.ndarray:
    return SIGMA_PLUS @ rho @ SIGMA_MINUS


def two_level_dephasing_map(params: TwoLevelParams, t: float) -> Superop:
    """
    Two-level solution with sigma_z dephasing as a linear map on 2x2 arrays.

    The no-jump part is (cosh g0 t + P_z sinh g0 t) e^{At} rho e^{A^dagger t};
    the e^{-g0 t} carried by A is folded into the hyperbolic factors, giving
    ((1 + e^{-2 g0 t}) + (1 - e^{-2 g0 t}) P_z) / 2 on the dephasing-free
    propagation.
    """
    _check_time(t)
    gp, gm, gb = params.gamma_plus, params.gamma_minus, params.gamma_beta
    a_diag = (-0.25 * gb - 0.25 * (params.gamma + 2j * params.omega) * np.diag(SIGMA_Z))
    no_jump = np.diag(np.exp(a_diag * t))
    dephase = math.exp(-2 * params.gamma_0 * t)
    decay = math.exp(-gb * t)
    if gb > 0:
        c_minus = gp * (1 - decay) / gb
        c_minus_plus = (gp + gm * decay - gb * math.exp(-gm * t)) / gb
        c_plus = gm * (1 - decay) / gb
        c_plus_minus = (gm + gp * decay - gb * math.exp(-gp * t)) / gb
    else:
        c_minus = c_minus_plus = c_plus = c_plus_minus = 0.0

    def apply(rho: np.ndarray) -> np.ndarray:
        free = _sandwich(no_jump, rho)
        return (0.5 * (1 + dephase) * free
                + 0.5 * (1 - dephase) * p_z(free)
                + c_minus * p_minus(rho)
                + c_minus_plus * p_minus(p_plus(rho))
                + c_plus * p_plus(rho)
                + c_plus_minus * p_plus(p_minus(rho)))

    return apply


def two_level_dephasing_solution(params: TwoLevelParams, rho0: DensityMatrix, t: float,
                                 tolerances: Tolerances = DEFAULT_TOLERANCES) -> DensityMatrix:
    """Evaluate the dephasing two-level solution; reduces to two_level_solution at gamma_0 = 0."""
    rho = _state_array(rho0, 2)
    return DensityMatrix(two_level_dephasing_map(params, t)(rho), tolerances)


def _compose(*ops: Superop) -> Superop:
    def apply(rho):
        for op in reversed(ops):
            rho = op(rho)
        return rho
    return apply


def p_algebra_residuals() -> Dict[str, float]:
    """Max deviation of each P-superoperator relation over the 2x2 matrix units."""
    identity = lambda rho: rho  # noqa: E731
    zero = lambda rho: np.zeros_like(rho)  # noqa: E731
    relations = {
        "Pz^2 = 1": (_compose(p_z, p_z), identity),
        "P-^2 = 0": (_compose(p_minus, p_minus), zero),
        "P+^2 = 0": (_compose(p_plus, p_plus), zero),
        "Pz P- = P-": (_compose(p_z, p_minus), p_minus),
        "P- Pz = P-": (_compose(p_minus, p_z), p_minus),
        "Pz P+ = P+": (_compose(p_z, p_plus), p_plus),
        "P+ Pz = P+": (_compose(p_plus, p_z), p_plus),
        "P- P+ P- = P-": (_compose(p_minus, p_plus, p_minus), p_minus),
        "P+ P- P+ = P+": (_compose(p_plus, p_minus, p_plus), p_plus),
    }
    residuals = {}
    for name, (lhs, rhs) in relations.items():
        worst = 0.0
        for i in range(2):
            for j in range(2):
                unit = np.zeros((2, 2), dtype=np.complex128)
                unit[i, j] = 1.0
                worst = max(worst, float(np.max(np.abs(lhs(unit) - rhs(unit)))))
        residuals[name] = worst
    return residuals


def superop_p_algebra_check(tol: float = P_ALGEBRA_TOLERANCE) -> bool:
    """True iff every P-superoperator relation holds to ``tol``."""
    return all(r <= tol for r in p_algebra_residuals().values())
