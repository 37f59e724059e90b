"""
Lindblad Model Core Types

Domain types shared by the solver, the closed forms, the oracle and the
command line: dense complex matrices, density matrices, the Lindblad model
itself and the containers returned by the solver.

Conventions used everywhere in this package:

* hbar = 1; energies are angular frequencies and times are their inverse.
* Rate matrix orientation: ``rates[m, n]`` is the rate of the jump
  |n> -> |m>, i.e. the weight of X_mn rho X_mn^dagger with X_mn = |m><n|.
  Reading the matrix transposed flips the dynamics.
* Level 0 is the lowest level of the builtin models.
"""

import logging
from dataclasses import dataclass, field, fields, replace
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg as sla

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
RealMatrix = npt.NDArray[np.float64]


class LindKrausError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(LindKrausError, ValueError):
    """Input could not be parsed into a model or a state."""


class DimensionError(LindKrausError, ValueError):
    """Array shapes do not fit together."""


class InvalidStateError(LindKrausError, ValueError):
    """A matrix violates the density-matrix invariants."""


class ModelValidationError(LindKrausError, ValueError):
    """A LindbladModel failed validate_model."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid model")


class ChannelError(LindKrausError, ValueError):
    """A state index is not part of the channel set."""


class NonCompletelyPositiveError(LindKrausError):
    """The solved map is not completely positive beyond rounding noise."""


class OracleSizeError(LindKrausError):
    """The dense N^2 x N^2 oracle was requested above its size limit."""


class NumericalError(LindKrausError, ValueError):
    """A numerical kernel produced non-finite or inconsistent output."""


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used by checks across the package."""
    hermitian: float = 1e-12
    trace: float = 1e-12
    psd: float = 1e-10
    completeness: float = 1e-10
    negative_coefficient: float = 1e-10
    choi_negative: float = 1e-8
    choi_cutoff: float = 1e-12
    kraus_cutoff: float = 1e-14
    degeneracy: float = 1e-9
    oracle_agreement: float = 1e-8
    closed_form_agreement: float = 1e-12
    detailed_balance: float = 1e-12

    def with_overrides(self, overrides: Optional[Mapping[str, float]] = None) -> "Tolerances":
        """Return a copy with the named tolerances replaced."""
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise SchemaError(f"Unknown tolerance(s): {', '.join(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOLERANCES = Tolerances()

# Oracle outputs carry the rounding of a dense N^2 x N^2 exponential.
ORACLE_STATE_TOLERANCES = Tolerances(hermitian=1e-9, trace=1e-9, psd=1e-9)


def as_complex_matrix(data, name: str = "matrix", square: bool = True) -> ComplexMatrix:
    """
    Convert input to a finite 2-D complex array.

    Args:
        data: Anything numpy can turn into a 2-D array
        name: Label used in error messages
        square: Require rows == cols

    Returns:
        A new complex128 array
    """
    try:
        mat = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"{name} is not a numeric matrix: {exc}") from exc
    if mat.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {mat.shape}")
    if square and mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise DimensionError(f"{name} has non-finite entries")
    return mat


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite N x N matrix."""
    mat: ComplexMatrix
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES, repr=False)

    def __post_init__(self):
        mat = as_complex_matrix(self.mat, "density matrix")
        tol = self.tolerances
        asym = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
        if asym > tol.hermitian:
            raise InvalidStateError(f"density matrix is not Hermitian (deviation {asym:.3e})")
        trace_dev = abs(np.trace(mat) - 1.0)
        if trace_dev > tol.trace:
            raise InvalidStateError(f"density matrix trace deviates from 1 by {trace_dev:.3e}")
        min_eig = float(sla.eigvalsh(mat)[0])
        if min_eig < -tol.psd:
            raise InvalidStateError(f"density matrix has negative eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "mat", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def trace_deviation(self) -> float:
        return float(abs(np.trace(self.mat) - 1.0))

    @property
    def min_eigenvalue(self) -> float:
        return float(sla.eigvalsh(self.mat)[0])

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    @property
    def populations(self) -> RealMatrix:
        return np.real(np.diag(self.mat)).copy()


def basis_state(dim: int, level: int) -> DensityMatrix:
    """|level><level| in dimension dim."""
    if not 0 <= level < dim:
        raise DimensionError(f"level {level} outside 0..{dim - 1}")
    mat = np.zeros((dim, dim), dtype=np.complex128)
    mat[level, level] = 1.0
    return DensityMatrix(mat)


def plus_state(dim: int) -> DensityMatrix:
    """Projector on the uniform superposition; (1 + sigma_x)/2 for dim 2."""
    vec = np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)
    return DensityMatrix(np.outer(vec, vec.conj()))


def random_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Full-rank random state (Ginibre construction)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """
    Finite-level Lindblad problem with jump operators X_mn = |m><n|.

    ``rates[m, n]`` is the rate of |n> -> |m>. ``dephasing_rate`` is the
    sigma_z dephasing constant gamma_0, honoured only for N = 2.
    """
    energies: RealMatrix
    rates: RealMatrix
    dephasing_rate: float = 0.0

    def __post_init__(self):
        energies = np.array(self.energies, dtype=np.float64)
        rates = np.array(self.rates, dtype=np.float64)
        if energies.ndim != 1 or energies.size == 0:
            raise DimensionError("energies must be a non-empty list of numbers")
        n = energies.size
        if rates.shape != (n, n):
            raise DimensionError(f"rates must be {n}x{n}, got shape {rates.shape}")
        if not (np.all(np.isfinite(energies)) and np.all(np.isfinite(rates))):
            raise DimensionError("energies and rates must be finite")
        dephasing = float(self.dephasing_rate)
        if not np.isfinite(dephasing):
            raise DimensionError("dephasing_rate must be finite")
        object.__setattr__(self, "energies", _frozen(energies))
        object.__setattr__(self, "rates", _frozen(rates))
        object.__setattr__(self, "dephasing_rate", dephasing)

    def __eq__(self, other):
        if not isinstance(other, LindbladModel):
            return NotImplemented
        return (np.array_equal(self.energies, other.energies)
                and np.array_equal(self.rates, other.rates)
                and self.dephasing_rate == other.dephasing_rate)

    __hash__ = None

    @property
    def dim(self) -> int:
        return self.energies.size

    @property
    def channel_set(self) -> Tuple[int, ...]:
        """States touched by any positive rate, ascending."""
        coupled = (self.rates > 0).any(axis=0) | (self.rates > 0).any(axis=1)
        return tuple(int(i) for i in np.flatnonzero(coupled))

    def transition_frequency(self, m: int, n: int) -> float:
        """omega_mn = E_m - E_n."""
        return float(self.energies[m] - self.energies[n])

    def to_dict(self) -> Dict:
        return {
            "energies": [float(e) for e in self.energies],
            "rates": [[float(r) for r in row] for row in self.rates],
            "dephasing_rate": self.dephasing_rate,
        }


@dataclass(frozen=True, eq=False)
class GammaMatrix:
    """Gamma_m over the channel set; rows/columns follow ``states``."""
    target: int
    states: Tuple[int, ...]
    mat: RealMatrix

    def entry(self, n: int, n_prime: int) -> float:
        return float(self.mat[self.states.index(n), self.states.index(n_prime)])


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Operators K_k of the map rho -> sum_k K_k rho K_k^dagger (weights folded in)."""
    dim: int
    operators: Tuple[ComplexMatrix, ...]

    def __len__(self) -> int:
        return len(self.operators)

    def apply(self, rho) -> ComplexMatrix:
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (self.dim, self.dim):
            raise DimensionError(f"state must be {self.dim}x{self.dim}, got {rho.shape}")
        out = np.zeros_like(rho)
        for op in self.operators:
            out += op @ rho @ op.conj().T
        return out

    def completeness_residual(self) -> float:
        """max |sum_k K_k^dagger K_k - 1|."""
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for op in self.operators:
            total += op.conj().T @ op
        return float(np.max(np.abs(total - np.eye(self.dim))))


@dataclass(frozen=True, eq=False)
class Superoperator:
    """N^2 x N^2 generator acting on column-stacked density matrices."""
    dim: int
    mat: ComplexMatrix

    def trace_functional_residual(self) -> float:
        """max |vec(1)^dagger L|; zero for a trace-preserving generator."""
        identity_vec = np.eye(self.dim, dtype=np.complex128).T.reshape(-1)
        return float(np.max(np.abs(identity_vec.conj() @ self.mat)))


def _degenerate(a: float, b: float, scale: float, tol: float) -> bool:
    return abs(a - b) < tol * scale


def validate_model(model: LindbladModel, tolerances: Tolerances = DEFAULT_TOLERANCES) -> List[str]:
    """
    List everything that keeps ``model`` outside the solvable class.

    Args:
        model: Model to diagnose
        tolerances: ``degeneracy`` is the relative threshold for equal energies

    Returns:
        Human-readable violations, empty when the model is valid
    """
    violations = []
    rates = model.rates
    n = model.dim

    for m, k in zip(*np.nonzero(rates < 0)):
        violations.append(f"negative rate gamma[{m},{k}] = {rates[m, k]:g}")
    for k in np.flatnonzero(np.diag(rates) != 0):
        violations.append(f"diagonal rate gamma[{k},{k}] = {rates[k, k]:g} is not allowed")

    scale = max(1.0, float(np.max(np.abs(model.energies))))
    channels = model.channel_set
    for a, b in combinations(channels, 2):
        if _degenerate(model.energies[a], model.energies[b], scale, tolerances.degeneracy):
            violations.append(f"degenerate energies E[{a}] = E[{b}] = {model.energies[a]:g}")

    pairs = [(int(m), int(k)) for m, k in zip(*np.nonzero(rates > 0)) if m != k]
    for (m1, n1), (m2, n2) in combinations(pairs, 2):
        w1 = model.transition_frequency(m1, n1)
        w2 = model.transition_frequency(m2, n2)
        if _degenerate(w1, w2, scale, tolerances.degeneracy):
            violations.append(
                f"degenerate energy differences omega[{m1},{n1}] = omega[{m2},{n2}] = {w1:g}"
            )

    if model.dephasing_rate < 0:
        violations.append(f"negative dephasing_rate {model.dephasing_rate:g}")
    if model.dephasing_rate > 0 and n != 2:
        violations.append(f"dephasing_rate is only supported for N=2, model has N={n}")
    return violations


def ensure_valid(model: LindbladModel, tolerances: Tolerances = DEFAULT_TOLERANCES) -> LindbladModel:
    """Raise ModelValidationError unless validate_model is empty."""
    violations = validate_model(model, tolerances)
    if violations:
        logger.info("Model rejected: %s", violations)
        raise ModelValidationError(violations)
    return model


def random_model(dim: int,
                 channels: int,
                 rng: np.random.Generator,
                 energy_scale: float = 5.0,
                 max_attempts: int = 100) -> LindbladModel:
    """
    Draw a valid model with ``channels`` coupled level pairs.

    Each coupled pair (l, u), E_l < E_u, gets a downhill rate and the thermal
    uphill rate at a random inverse temperature, so detailed balance holds
    pair by pair.
    """
    all_pairs = list(combinations(range(dim), 2))
    if not 0 <= channels <= len(all_pairs):
        raise ValueError(f"cannot couple {channels} pairs among {dim} levels")
    for _ in range(max_attempts):
        energies = np.sort(rng.uniform(-energy_scale, energy_scale, size=dim))
        rates = np.zeros((dim, dim))
        chosen = rng.choice(len(all_pairs), size=channels, replace=False) if channels else []
        for idx in chosen:
            lower, upper = all_pairs[idx]
            down = rng.uniform(0.1, 1.0)
            beta = rng.uniform(0.2, 2.0)
            rates[lower, upper] = down
            rates[upper, lower] = down * np.exp(-beta * (energies[upper] - energies[lower]))
        model = LindbladModel(energies=energies, rates=rates)
        if not validate_model(model):
            return model
    raise RuntimeError(f"no valid random model after {max_attempts} attempts")

