"""
Microscopic Rate Construction

Decay constants of a finite-level system weakly coupled to a bosonic
reservoir, from on-shell spectral functions and the Bose occupation:

    gamma_mn = [1 + N(omega_nm)] Gamma_mn(omega_nm) + N(omega_mn) Gamma_nm(omega_mn)

plus builders for the two physical models the closed forms describe: the
triplet sector of two qubits in a common zero-temperature reservoir, and the
spin-boson model with sigma_z dephasing.
"""

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .closed_forms import TwoLevelParams, two_level_model
from .core import (
    DEFAULT_TOLERANCES,
    LindbladModel,
    Tolerances,
    ensure_valid,
)

logger = logging.getLogger(__name__)

SPECTRAL_FORMS = ("flat", "ohmic")


@dataclass(frozen=True)
class SpectralFunction:
    """
    On-shell coupling strength Gamma(omega), zero for omega <= 0.

    flat:  Gamma(omega) = g
    ohmic: Gamma(omega) = g * omega * exp(-omega / omega_c)
    """
    form: str
    g: float
    omega_c: float = math.inf

    def __post_init__(self):
        if self.form not in SPECTRAL_FORMS:
            raise ValueError(f"unknown spectral form {self.form!r}; expected one of {SPECTRAL_FORMS}")
        if not math.isfinite(self.g) or self.g < 0:
            raise ValueError(f"spectral strength g must be finite and non-negative, got {self.g}")
        if self.form == "ohmic" and not self.omega_c > 0:
            raise ValueError(f"ohmic cutoff omega_c must be positive, got {self.omega_c}")

    def __call__(self, omega: float) -> float:
        if omega <= 0:
            return 0.0
        if self.form == "flat":
            return self.g
        return self.g * omega * math.exp(-omega / self.omega_c)

    @property
    def right_slope_at_zero(self) -> float:
        """Gamma'(0+)."""
        return 0.0 if self.form == "flat" else self.g

    @classmethod
    def from_dict(cls, data: Mapping) -> "SpectralFunction":
        return cls(form=data["form"], g=float(data["g"]),
                   omega_c=float(data.get("omega_c") or math.inf))

    def to_dict(self) -> Dict:
        data = {"form": self.form, "g": self.g}
        if math.isfinite(self.omega_c):
            data["omega_c"] = self.omega_c
        return data


def bose_occupation(omega: float, beta: float) -> float:
    """
    Mean thermal occupation N(omega) = 1 / (e^{beta omega} - 1).

    Args:
        omega: Positive frequency
        beta: Inverse temperature, math.inf for zero temperature

    Returns:
        N(omega); exactly 0 at zero temperature
    """
    if not omega > 0:
        raise ValueError(f"Bose occupation needs omega > 0, got {omega}")
    if not beta > 0:
        raise ValueError(f"inverse temperature must be positive, got {beta}")
    if math.isinf(beta):
        return 0.0
    return 1.0 / math.expm1(beta * omega)


def rates_from_spectral(energies: Sequence[float],
                        spectral: Mapping[Tuple[int, int], SpectralFunction],
                        beta: float,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Thermal rate matrix from per-pair spectral functions.

    Each key couples two levels; with l the lower and u the upper level and
    omega = E_u - E_l, the pair contributes gamma[l, u] = (1 + N) Gamma(omega)
    (emission) and gamma[u, l] = N Gamma(omega) (absorption), which is the
    general formula with Gamma vanishing at negative frequencies.
    """
    energies = np.asarray(energies, dtype=np.float64)
    dim = energies.size
    scale = max(1.0, float(np.max(np.abs(energies)))) if dim else 1.0
    rates = np.zeros((dim, dim))
    frequencies = {}

    for (a, b), spec in spectral.items():
        if not (0 <= a < dim and 0 <= b < dim):
            raise ValueError(f"pair ({a}, {b}) outside 0..{dim - 1}")
        if a == b:
            raise ValueError(f"pair ({a}, {b}) couples a level to itself")
        lower, upper = (a, b) if energies[a] < energies[b] else (b, a)
        if (lower, upper) in frequencies:
            raise ValueError(f"pair ({a}, {b}) is listed twice; pairs are unordered")
        omega = float(energies[upper] - energies[lower])
        if omega < tolerances.degeneracy * scale:
            raise ValueError(f"levels {a} and {b} are degenerate")
        frequencies[(lower, upper)] = omega
        strength = spec(omega)
        occupation = bose_occupation(omega, beta)
        rates[lower, upper] += (1.0 + occupation) * strength
        rates[upper, lower] += occupation * strength

    for (p1, w1), (p2, w2) in combinations(frequencies.items(), 2):
        if abs(w1 - w2) < tolerances.degeneracy * scale:
            raise ValueError(f"coupled pairs {p1} and {p2} share the transition frequency {w1:g}")
    logger.debug("rates from %d spectral channel(s) at beta=%g", len(spectral), beta)
    return rates


def gibbs_populations(energies: Sequence[float], beta: float) -> np.ndarray:
    """e^{-beta E_n} / Z."""
    energies = np.asarray(energies, dtype=np.float64)
    weights = np.exp(-beta * (energies - energies.min()))
    return weights / weights.sum()


def two_qubit_triplet_model(omega: float, g: float, spectral: SpectralFunction,
                            shifts: Tuple[float, float] = (0.0, 0.0),
                            tolerances: Tolerances = DEFAULT_TOLERANCES) -> LindbladModel:
    """
    Triplet sector of two exchange-coupled qubits in a zero-temperature reservoir.

    The singlet is decoupled and dropped. Levels |0> = |dd>, |1> = triplet
    zero, |2> = |uu> with energies (-Omega, g + delta_1, Omega + delta_2) and
    rates gamma_01 = 2 Gamma(Omega + g), gamma_12 = 2 Gamma(Omega - g).

    Args:
        omega: Qubit frequency Omega
        g: Exchange coupling, 0 <= g < Omega
        spectral: Reservoir spectral function Gamma
        shifts: Caller-supplied energy shifts (delta_1, delta_2)
    """
    if not omega > g:
        raise ValueError(f"two-qubit model needs Omega > g, got Omega={omega}, g={g}")
    if g < 0:
        raise ValueError(f"exchange coupling g must be non-negative, got {g}")
    delta_1, delta_2 = shifts
    rates = np.zeros((3, 3))
    rates[0, 1] = 2 * spectral(omega + g)
    rates[1, 2] = 2 * spectral(omega - g)
    model = LindbladModel(energies=[-omega, g + delta_1, omega + delta_2], rates=rates)
    return ensure_valid(model, tolerances)


def dephasing_rate(spectral_0, beta: float) -> float:
    """gamma_0 = Gamma_0'(0+) / beta; zero at zero temperature."""
    slope = getattr(spectral_0, "right_slope_at_zero", None)
    if slope is None or not math.isfinite(slope):
        raise ValueError("dephasing spectral function has no finite right-derivative at 0")
    if math.isinf(beta):
        return 0.0
    return slope / beta


def spin_boson_model(omega: float, spectral_0: Optional[SpectralFunction],
                     spectral_1: SpectralFunction, beta: float) -> LindbladModel:
    """
    Two-level spin-boson model with sigma_z coupling Gamma_0 and sigma_x coupling Gamma_1.

    gamma_plus = [1 + N(Omega)] Gamma_1(Omega), gamma_minus = N(Omega) Gamma_1(Omega),
    gamma_0 = Gamma_0'(0+) / beta. Detailed balance gamma_minus = e^{-beta Omega} gamma_plus
    holds by construction.
    """
    if not omega > 0:
        raise ValueError(f"spin-boson splitting must be positive, got {omega}")
    occupation = bose_occupation(omega, beta)
    strength = spectral_1(omega)
    params = TwoLevelParams(
        omega=omega,
        gamma_plus=(1.0 + occupation) * strength,
        gamma_minus=occupation * strength,
        gamma_0=dephasing_rate(spectral_0, beta) if spectral_0 is not None else 0.0,
    )
    return ensure_valid(two_level_model(params))
