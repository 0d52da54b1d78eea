"""Closed-form solutions of the two exactly solvable driven models.

Both models serve as independent oracles for the generic numerical pipeline
and provide builders of their finite-matrix counterparts:

* a harmonically trapped particle under a sinusoidal force (all levels share
  one ac Stark shift, detailed balance holds, dissipation is purely
  pseudo-transitional);
* a two-level system in a circularly polarized field (Rabi physics, regime
  split at Omega = omega, generically broken detailed balance).

All formulas are written in exponentially rescaled form so they stay finite
for arbitrarily large beta, including beta = inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .floquet import FourierHamiltonian
from .rates import CouplingOperator

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _bose(beta, w):
    """1/(e^{beta w} - 1) for w > 0; zero at beta = inf."""
    if math.isinf(beta):
        return 0.0
    x = beta * w
    return math.exp(-x) if x > 700.0 else 1.0 / math.expm1(x)


def _bose_plus_one(beta, w):
    """e^{beta w}/(e^{beta w} - 1) for w > 0; one at beta = inf."""
    if math.isinf(beta):
        return 1.0
    return 1.0 / (-math.expm1(-beta * w))


def _exp_neg(beta, x):
    """e^{-beta x} for x >= 0, handling beta = inf (0, or 1 at x = 0)."""
    if math.isinf(beta):
        return 1.0 if x == 0.0 else 0.0
    return math.exp(-beta * x)


# ---------------------------------------------------------------------------
# Linearly forced harmonic oscillator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OscillatorParams:
    """Trap frequency omega0, drive (omega, F), mass M, coupling gamma."""

    M: float = 1.0
    omega0: float = 1.0
    omega: float = 2.0
    F: float = 1.0
    gamma: float = 1.0
    n_max: int = 40

    def __post_init__(self):
        if abs(self.omega - self.omega0) <= 1e-9 * self.omega0:
            raise ValueError("drive frequency must stay away from resonance")
        if self.omega0 <= 0 or self.omega <= 0 or self.M <= 0:
            raise ValueError("M, omega0, omega must be positive")


def osc_classical_orbit(p, t):
    """Periodic classical response xi(t) = F cos(w t) / (M (w^2 - w0^2))."""
    return p.F * math.cos(p.omega * t) / (p.M * (p.omega**2 - p.omega0**2))


def osc_quasienergy(p, n):
    """eps_n = w0 (n + 1/2) + F^2 / (4 M (w^2 - w0^2)): one shared ac Stark shift."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return p.omega0 * (n + 0.5) + p.F**2 / (4.0 * p.M * (p.omega**2 - p.omega0**2))


def osc_rates(p, beta, J_at_omega0, J_at_omega, n):
    """The four nonzero channel rates touching level n.

    Returns a dict with keys ``down`` (n -> n-1), ``up`` (n -> n+1),
    ``pseudo_plus`` (Gamma_nn^(+1)) and ``pseudo_minus`` (Gamma_nn^(-1)).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    pref = math.pi * p.gamma**2 * J_at_omega0 / (p.M * p.omega0)
    down = pref * n * _bose_plus_one(beta, p.omega0)
    up = pref * (n + 1) * _bose(beta, p.omega0)
    pseudo_pref = (
        math.pi
        * p.gamma**2
        * p.F**2
        * J_at_omega
        / (2.0 * p.M**2 * (p.omega**2 - p.omega0**2) ** 2)
    )
    return {
        "down": down,
        "up": up,
        "pseudo_plus": pseudo_pref * _bose(beta, p.omega),
        "pseudo_minus": pseudo_pref * _bose_plus_one(beta, p.omega),
    }


@dataclass(frozen=True)
class OscillatorSteady:
    p: np.ndarray
    ratio: float
    R_trans: float
    R_pseudo: float
    R_total: float


def osc_steady_and_R(p, bath):
    """Geometric Boltzmann steady state and the purely pseudo dissipation rate.

    p_n = (1 - e^{-beta w0}) e^{-n beta w0} (detailed balance);
    R = w pi gamma^2 F^2 J(w) / (2 M^2 (w^2 - w0^2)^2), independent of beta.
    """
    beta = bath.beta
    if math.isinf(beta):
        raise ValueError("the geometric steady state requires finite beta")
    q = math.exp(-beta * p.omega0)
    levels = np.arange(p.n_max + 1)
    probs = (1.0 - q) * q**levels
    J_w = bath.density.value(p.omega)
    R = (
        p.omega
        * math.pi
        * p.gamma**2
        * p.F**2
        * J_w
        / (2.0 * p.M**2 * (p.omega**2 - p.omega0**2) ** 2)
    )
    return OscillatorSteady(p=probs, ratio=q, R_trans=0.0, R_pseudo=R, R_total=R)


def osc_position_matrix(p):
    """Truncated position operator, x_{n,n+1} = sqrt((n+1) / (2 M w0))."""
    n = np.arange(p.n_max)
    off = np.sqrt((n + 1) / (2.0 * p.M * p.omega0))
    x = np.zeros((p.n_max + 1, p.n_max + 1), dtype=complex)
    x[n, n + 1] = off
    x[n + 1, n] = off
    return x


def build_osc_hamiltonian(p):
    """Truncated matrix form of the forced oscillator plus the x coupling."""
    if p.n_max < 10:
        raise ValueError("n_max must be at least 10")
    x = osc_position_matrix(p)
    H0 = np.diag(p.omega0 * (np.arange(p.n_max + 1) + 0.5)).astype(complex)
    H1 = 0.5 * p.F * x
    H = FourierHamiltonian(
        dim=p.n_max + 1, omega=p.omega, components={0: H0, 1: H1, -1: H1}
    )
    V = CouplingOperator(matrix=p.gamma * x)
    return H, V


# ---------------------------------------------------------------------------
# Two-level system in a circularly polarized field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoLevelParams:
    """Bare splitting omega0, drive (omega, muF), bath coupling gamma.

    Gamma0 = 2 pi gamma^2 J is the natural rate unit for a constant spectral
    density J.
    """

    omega0: float = 1.0
    omega: float = 1.5
    muF: float = 1.0
    gamma: float = 1.0
    J: float = 1.0

    def __post_init__(self):
        if self.omega0 <= 0 or self.omega <= 0:
            raise ValueError("omega0 and omega must be positive")
        if self.muF < 0:
            raise ValueError("muF must be nonnegative")

    @property
    def delta(self):
        return self.omega0 - self.omega

    @property
    def Omega(self):
        return math.hypot(self.delta, self.muF)

    @property
    def Gamma0(self):
        return 2.0 * math.pi * self.gamma**2 * self.J


@dataclass(frozen=True)
class TwoLevelFloquet:
    delta: float
    Omega: float
    eps_plus: float
    eps_minus: float
    eps_plus_bare: float
    eps_minus_bare: float
    # Fourier components of u_+/u_-: dict harmonic -> 2-vector
    u_plus: dict
    u_minus: dict


def tls_floquet(p):
    """Rabi quasienergies eps_+- = (w +- Omega)/2 and Floquet functions.

    u_+ = (sqrt(Omega+delta), sqrt(Omega-delta) e^{i w t}) / sqrt(2 Omega),
    u_- = (-sqrt(Omega-delta), sqrt(Omega+delta) e^{i w t}) / sqrt(2 Omega).
    ``eps_*_bare`` are the representatives connecting continuously to the bare
    levels +-omega0/2 as muF -> 0.
    """
    delta, Om = p.delta, p.Omega
    if Om == 0.0:
        raise ValueError("Omega vanishes (resonant with zero amplitude)")
    eps_plus = 0.5 * (p.omega + Om)
    eps_minus = 0.5 * (p.omega - Om)
    if delta >= 0:
        bare_plus, bare_minus = eps_plus, eps_minus - p.omega
    else:
        bare_plus, bare_minus = eps_plus - p.omega, eps_minus
    sp = math.sqrt((Om + delta) / (2.0 * Om))
    sm = math.sqrt((Om - delta) / (2.0 * Om))
    u_plus = {0: np.array([sp, 0.0], dtype=complex), 1: np.array([0.0, sm], dtype=complex)}
    u_minus = {0: np.array([-sm, 0.0], dtype=complex), 1: np.array([0.0, sp], dtype=complex)}
    return TwoLevelFloquet(
        delta=delta,
        Omega=Om,
        eps_plus=eps_plus,
        eps_minus=eps_minus,
        eps_plus_bare=bare_plus,
        eps_minus_bare=bare_minus,
        u_plus=u_plus,
        u_minus=u_minus,
    )


@dataclass(frozen=True)
class TwoLevelRates:
    """Partial rates keyed (final, initial, ell) over {+,-} x {+,-} x {+1,-1}."""

    rates: dict
    degenerate: bool

    def total(self, f, i):
        return self.rates[(f, i, 1)] + self.rates[(f, i, -1)]


def tls_rates(p, beta):
    """All eight nonzero partial rates, with the regime split at Omega = omega.

    At Omega = omega exactly (finite beta) the w_{+-}^(-1) channel frequency
    vanishes and, with a constant spectral density, its rate diverges; the
    affected rates are reported as inf and ``degenerate`` is set.
    """
    delta, Om, G0 = p.delta, p.Omega, p.Gamma0
    if Om == 0.0:
        raise ValueError("Omega vanishes")
    c_plus = (Om + delta) ** 2 / (4.0 * Om**2)
    c_minus = (Om - delta) ** 2 / (4.0 * Om**2)
    c_diag = (Om**2 - delta**2) / (4.0 * Om**2)

    rates = {
        ("+", "-", 1): c_plus * G0 * _bose(beta, p.omega + Om),
        ("-", "+", -1): c_plus * G0 * _bose_plus_one(beta, p.omega + Om),
        ("+", "+", 1): c_diag * G0 * _bose(beta, p.omega),
        ("+", "+", -1): c_diag * G0 * _bose_plus_one(beta, p.omega),
    }
    rates[("-", "-", 1)] = rates[("+", "+", 1)]
    rates[("-", "-", -1)] = rates[("+", "+", -1)]

    degenerate = Om == p.omega
    if degenerate and not math.isinf(beta):
        rates[("+", "-", -1)] = math.inf
        rates[("-", "+", 1)] = math.inf
    elif Om < p.omega or (degenerate and math.isinf(beta)):
        rates[("+", "-", -1)] = c_minus * G0 * _bose_plus_one(beta, p.omega - Om)
        rates[("-", "+", 1)] = c_minus * G0 * _bose(beta, p.omega - Om)
    else:
        rates[("+", "-", -1)] = c_minus * G0 * _bose(beta, Om - p.omega)
        rates[("-", "+", 1)] = c_minus * G0 * _bose_plus_one(beta, Om - p.omega)
    return TwoLevelRates(rates=rates, degenerate=degenerate)


def tls_population(p, beta):
    """Stationary occupation p_- of the state with downward ac Stark shift.

    Evaluated in a form rescaled by exp(-beta * max(Omega, omega)) so that it
    remains stable for any beta, including beta = inf.
    """
    delta, Om, w = p.delta, p.Omega, p.omega
    if p.muF == 0.0 and delta == 0.0:
        return 0.5
    if Om == w:
        # degenerate channel equalizes the populations (continuity limit)
        if math.isinf(beta):
            return 0.5 + Om * delta / (Om**2 + delta**2)
        return 0.5
    big, small = (w, Om) if Om < w else (Om, w)
    u = _exp_neg(beta, big - small)
    v = _exp_neg(beta, big + small)
    ww = _exp_neg(beta, 2.0 * big)
    denom = (Om**2 + delta**2) * (1.0 - ww) - 2.0 * Om * delta * (u - v)
    if Om < w:
        num = Om * delta * (1.0 + ww - u - v)
    else:
        num = 0.5 * (Om**2 + delta**2) * (1.0 + ww - u - v)
    return 0.5 + num / denom


def tls_dissipation(p, beta):
    """R_pseudo, R_trans and the total dissipation rate of the driven qubit.

    R_pseudo = (w Gamma0 / 4) (muF / Omega)^2 independent of beta;
    R_trans = (w Gamma0 / 4) (Omega^2 - delta^2)^2 sinh(beta w) / (Delta^2 Omega^2)
    with Delta^2 = (Omega^2 + delta^2) sinh(beta Omega_>) -
    2 Omega delta sinh(beta Omega_<).
    """
    delta, Om, w, G0 = p.delta, p.Omega, p.omega, p.Gamma0
    if p.muF == 0.0:
        return {"R_pseudo": 0.0, "R_trans": 0.0, "R_total": 0.0}
    R_pseudo = 0.25 * w * G0 * (p.muF / Om) ** 2

    if math.isinf(beta) and Om >= w:
        R_trans = 0.0
        if Om == w:
            # continuity limit from the Omega < omega side
            R_trans = 0.25 * w * G0 * p.muF**4 / (Om**2 * (Om**2 + delta**2))
    else:
        big, small = (w, Om) if Om <= w else (Om, w)
        u = _exp_neg(beta, big - small)
        v = _exp_neg(beta, big + small)
        ww = _exp_neg(beta, 2.0 * big)
        # sinh(beta w) and Delta^2, both rescaled by exp(-beta Omega_>)
        if Om <= w:
            sinh_scaled = 0.5 * (1.0 - ww)
        else:
            sinh_scaled = 0.5 * (u - v)
        delta2_scaled = 0.5 * (
            (Om**2 + delta**2) * (1.0 - ww) - 2.0 * Om * delta * (u - v)
        )
        R_trans = (
            0.25
            * w
            * G0
            * (Om**2 - delta**2) ** 2
            / (delta2_scaled * Om**2)
            * sinh_scaled
        )
    return {"R_pseudo": R_pseudo, "R_trans": R_trans, "R_total": R_pseudo + R_trans}


def build_tls_hamiltonian(p):
    """Matrix Fourier components of the circularly driven qubit plus V = gamma sigma_x."""
    H0 = 0.5 * p.omega0 * _SIGMA_Z
    H1 = 0.25 * p.muF * (_SIGMA_X - 1j * _SIGMA_Y)
    Hm1 = 0.25 * p.muF * (_SIGMA_X + 1j * _SIGMA_Y)
    H = FourierHamiltonian(dim=2, omega=p.omega, components={0: H0, 1: H1, -1: Hm1})
    V = CouplingOperator(matrix=p.gamma * _SIGMA_X)
    return H, V
