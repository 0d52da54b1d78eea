"""Golden-rule transition channels between Floquet states.

Each channel (f, i, ell) carries the frequency w_fi^ell = eps_f - eps_i + ell w
exchanged with the bath, the Fourier matrix element V_fi^(ell), and the partial
rate Gamma_fi^(ell) = 2 pi |V_fi^(ell)|^2 N(w_fi^ell) J(|w_fi^ell|).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .bath import rate_kernel, thermal_weight
from .exceptions import (
    DegenerateChannelWarning,
    NonHermitianInput,
    WindowTooSmall,
)
from .floquet import HERMITICITY_TOL

# |V|^2 below this resolves 0 * inf at degenerate channels to 0
ELEMENT_FLOOR = 1e-12
# rates below this underflow threshold are flushed to zero
RATE_FLOOR = 1e-300


@dataclass(frozen=True)
class CouplingOperator:
    """Hermitian system operator V in H_int = V (x) W, energy units."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        scale = max(1.0, np.abs(mat).max())
        if np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL * scale:
            raise NonHermitianInput("coupling operator is not Hermitian")
        object.__setattr__(self, "matrix", mat)


@dataclass
class RateTable:
    """Channel-resolved rate data for one (solution, coupling, bath) triple.

    Arrays are indexed [f, i, j] with harmonic ell = ells[j].
    """

    omega: float
    ells: np.ndarray
    freqs: np.ndarray
    elements: np.ndarray
    partials: np.ndarray
    degeneracy_flags: np.ndarray
    bath: object = None
    totals: np.ndarray | None = None

    @property
    def ell_max(self):
        return int(self.ells.max())

    def partial(self, f, i, ell):
        j = np.nonzero(self.ells == ell)[0]
        if j.size == 0:
            return 0.0
        return float(self.partials[f, i, j[0]])

    def element(self, f, i, ell):
        j = np.nonzero(self.ells == ell)[0]
        if j.size == 0:
            return 0.0 + 0.0j
        return complex(self.elements[f, i, j[0]])


def fourier_matrix_elements(sol, V, ell_max):
    """V_fi^(ell) = sum_k <u_f^(k)| V |u_i^(k+ell)> for |ell| <= ell_max.

    Returns (ells, elements) with elements indexed [f, i, j].
    """
    k_lo, k_hi = int(sol.harmonics.min()), int(sol.harmonics.max())
    if ell_max > k_hi - k_lo:
        raise WindowTooSmall(
            f"ell_max={ell_max} beyond the convolution support {k_hi - k_lo}"
        )
    C = sol.fourier_components  # (n, nk, dim)
    D = np.einsum("ab,nkb->nka", V.matrix, C)
    n, nk, _ = C.shape
    ells = np.arange(-ell_max, ell_max + 1)
    elements = np.zeros((n, n, len(ells)), dtype=complex)
    Cc = C.conj()
    for j, ell in enumerate(ells):
        if ell >= 0:
            lhs, rhs = Cc[:, : nk - ell, :], D[:, ell:, :]
        else:
            lhs, rhs = Cc[:, -ell:, :], D[:, : nk + ell, :]
        elements[:, :, j] = np.einsum("fka,ika->fi", lhs, rhs)
    return ells, elements


def transition_frequencies(sol, ell_max):
    """w_fi^ell = eps_f - eps_i + ell w; returns (ells, freqs[f, i, j])."""
    eps = sol.quasienergies
    ells = np.arange(-ell_max, ell_max + 1)
    diff = eps[:, None] - eps[None, :]
    return ells, diff[:, :, None] + ells[None, None, :] * sol.omega


def partial_rates(sol, V, bath, ell_max=None):
    """Populate the full rate table, totals included.

    Channels whose frequency is degenerate (|w| below 1e-9 w) with a constant
    spectral density and a non-negligible matrix element are flagged and
    excluded from the totals with a warning; the diagonal ell = 0 channel is
    excluded by construction (it carries zero energy weight and does not enter
    the master equation).
    """
    k_lo, k_hi = int(sol.harmonics.min()), int(sol.harmonics.max())
    if ell_max is None:
        ell_max = k_hi - k_lo
    ells, elements = fourier_matrix_elements(sol, V, ell_max)
    _, freqs = transition_frequencies(sol, ell_max)

    n = sol.n_states
    eps_freq = 1e-9 * sol.omega
    partials = np.zeros_like(freqs)
    flags = np.zeros(freqs.shape, dtype=bool)
    abs2 = np.abs(elements) ** 2

    flagged_channels = []
    for f in range(n):
        for i in range(n):
            for j, ell in enumerate(ells):
                w = freqs[f, i, j]
                v2 = abs2[f, i, j]
                if f == i and ell == 0:
                    continue  # zero energy weight, not a transition
                if v2 <= ELEMENT_FLOOR:
                    if abs(w) <= eps_freq:
                        continue  # 0 * inf resolved to 0
                    rate = 2.0 * np.pi * v2 * thermal_weight(w, bath.beta) * bath.density.value(abs(w))
                else:
                    if abs(w) <= eps_freq:
                        if bath.density.kind == "constant":
                            flags[f, i, j] = True
                            flagged_channels.append((f, i, int(ell)))
                            continue
                        rate = 2.0 * np.pi * v2 * rate_kernel(w, bath, eps_freq)
                    else:
                        rate = 2.0 * np.pi * v2 * thermal_weight(w, bath.beta) * bath.density.value(abs(w))
                partials[f, i, j] = rate if rate > RATE_FLOOR else 0.0

    if flagged_channels:
        warnings.warn(
            f"degenerate channels excluded from rate totals: {flagged_channels}",
            DegenerateChannelWarning,
        )

    table = RateTable(
        omega=sol.omega,
        ells=ells,
        freqs=freqs,
        elements=elements,
        partials=partials,
        degeneracy_flags=flags,
        bath=bath,
    )
    total_rates(table)
    return table


def total_rates(table):
    """Gamma_fi = sum_ell Gamma_fi^(ell); cached on the table."""
    totals = table.partials.sum(axis=2)
    np.fill_diagonal(totals, 0.0)
    table.totals = totals
    return totals


def first_order_probability(sol, V, f, i, t):
    """First-order probability of the Floquet transition i -> f after time t.

    Returns (exact, sinc_sum): the exact value of the first-order amplitude
    integral (the time integral is done analytically on the truncated Fourier
    series), and the cross-term-free approximation
    t^2 sum_ell sinc^2(w_fi^ell t / 2) |V_fi^(ell)|^2.
    """
    if f == i:
        raise ValueError("first_order_probability requires f != i")
    if not t > 0:
        raise ValueError("t must be positive")
    k_lo, k_hi = int(sol.harmonics.min()), int(sol.harmonics.max())
    ell_max = k_hi - k_lo
    ells, elements = fourier_matrix_elements(sol, V, ell_max)
    _, freqs = transition_frequencies(sol, ell_max)
    v = elements[f, i, :]
    w = freqs[f, i, :]

    # int_0^t exp(i w tau) d tau
    with np.errstate(divide="ignore", invalid="ignore"):
        integrals = np.where(
            np.abs(w) * t < 1e-12, t, (np.exp(1j * w * t) - 1.0) / (1j * w)
        )
    exact = abs(np.dot(v, integrals)) ** 2

    sinc_sum = t * t * float(np.sum(np.sinc(w * t / (2.0 * np.pi)) ** 2 * np.abs(v) ** 2))
    return exact, sinc_sum
