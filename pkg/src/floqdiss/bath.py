"""Thermal oscillator bath: temperature, spectral density, and the rate kernel.

The bath enters the transition rates only through the inverse temperature
``beta`` and the spectral density ``J``, combined into the kernel
``N(w) * J(|w|)`` with the two-branch thermal weight ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import ResonantDivergence, ZeroFrequency

# beyond this, exp(beta*w) overflows double precision
_EXP_GUARD = 700.0


@dataclass(frozen=True)
class SpectralDensity:
    """Spectral density J(w), evaluated at |w| >= 0.

    Two variants: ``constant`` (J = J0) and ``ohmic``
    (J = eta * w * exp(-w / omega_c)).
    """

    kind: str
    J0: float = 0.0
    eta: float = 0.0
    omega_c: float = 1.0

    @classmethod
    def constant(cls, J0):
        if J0 < 0:
            raise ValueError("J0 must be nonnegative")
        return cls(kind="constant", J0=float(J0))

    @classmethod
    def ohmic(cls, eta, omega_c):
        if eta < 0:
            raise ValueError("eta must be nonnegative")
        if omega_c <= 0:
            raise ValueError("omega_c must be positive")
        return cls(kind="ohmic", eta=float(eta), omega_c=float(omega_c))

    def value(self, abs_omega):
        """J evaluated at a nonnegative frequency."""
        if abs_omega < 0:
            raise ValueError("spectral density is evaluated at |w| only")
        if self.kind == "constant":
            return self.J0
        return self.eta * abs_omega * math.exp(-abs_omega / self.omega_c)


@dataclass(frozen=True)
class BathSpec:
    """Inverse temperature (may be ``math.inf`` for T = 0) plus spectral density."""

    beta: float
    density: SpectralDensity

    def __post_init__(self):
        if not (self.beta > 0):
            raise ValueError("beta must be positive (or +inf)")


def thermal_weight(omega_tilde, beta):
    """Thermally averaged occupation factor N(w).

    N(w) = 1/(exp(beta w) - 1) for w > 0 (phonon absorption) and
    N(w) = exp(-beta w)/(exp(-beta w) - 1) for w < 0 (stimulated + spontaneous
    emission).  Satisfies N(-w) - N(w) = 1.
    """
    if omega_tilde == 0:
        raise ZeroFrequency("thermal weight diverges at zero frequency")
    if math.isinf(beta):
        return 0.0 if omega_tilde > 0 else 1.0
    x = beta * omega_tilde
    if x > 0:
        if x > _EXP_GUARD:
            return math.exp(-x)
        return 1.0 / math.expm1(x)
    # x < 0: e^{-x}/(e^{-x}-1) = 1/(1 - e^{x})
    return 1.0 / (-math.expm1(x))


def rate_kernel(omega_tilde, bath, eps_freq=0.0):
    """Regularized kernel N(w) * J(|w|) entering every partial rate.

    Inside ``|w| <= eps_freq`` (and always at w = 0 exactly) the limit
    w -> 0 is taken: finite (eta/beta) for an Ohmic density, divergent for a
    constant one, in which case ResonantDivergence is raised and the caller
    must treat the channel as degenerate.
    """
    if abs(omega_tilde) <= eps_freq or omega_tilde == 0:
        if bath.density.kind == "ohmic":
            # N ~ 1/(beta w), J ~ eta |w|  ->  eta/beta from both sides
            if math.isinf(bath.beta):
                return 0.0
            return bath.density.eta / bath.beta
        raise ResonantDivergence(
            "kernel unbounded at zero frequency for constant spectral density"
        )
    return thermal_weight(omega_tilde, bath.beta) * bath.density.value(abs(omega_tilde))
