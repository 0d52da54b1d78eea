"""Quasistationary Floquet distribution and steady-state energy dissipation.

The Pauli-type master equation 0 = sum_m (Gamma_nm p_m - Gamma_mn p_n) is
solved by direct state elimination (GTH); the dissipation rate
R = -sum w_mn^ell Gamma_mn^(ell) p_n is split into the genuine-transition part
(m != n) and the pseudo-transition part (m == n, ell != 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import AccuracyFailure, InconsistentPseudoForms, NonErgodic

RESIDUAL_TOL = 1e-10
NEGATIVITY_TOL = 1e-12
# Golden-rule rates are nonnegative products, accurate in relative terms down
# to thermal suppressions of e^{-700}; the only spurious positives come from
# matrix-element noise (|V| ~ 1e-12 of scale, rate ~ 1e-24 of the maximum).
# The connectivity threshold sits well above that noise but far below genuine
# cold-bath rates.
EDGE_THRESHOLD = 1e-20
PSEUDO_CROSSCHECK_TOL = 1e-10


@dataclass(frozen=True)
class SteadyState:
    """Stationary occupation probabilities with the solver residual."""

    p: np.ndarray
    residual: float
    ergodic: bool


@dataclass(frozen=True)
class DissipationReport:
    """Total dissipation rate and its genuine/pseudo decomposition.

    ``channels`` lists (f, i, ell, rate, energy_weight, contribution) for
    every channel with a nonzero contribution.
    """

    R_total: float
    R_trans: float
    R_pseudo: float
    channels: list


def _generator(totals):
    """Column-stochastic generator: A_nm = Gamma_nm (n != m), columns sum to 0."""
    A = np.array(totals, dtype=float)
    np.fill_diagonal(A, 0.0)
    np.fill_diagonal(A, -A.sum(axis=0))
    return A


def _solve_component(totals):
    """Stationary distribution by GTH state elimination.

    Uses only additions and multiplications of nonnegative rates, so every
    component of p carries full relative accuracy even when the distribution
    spans many orders of magnitude (e.g. a Boltzmann tail).
    """
    n = totals.shape[0]
    A = _generator(totals)
    Q = np.array(totals.T, dtype=float)  # Q[i, j]: rate out of i into j
    np.fill_diagonal(Q, 0.0)
    s = np.zeros(n)
    for k in range(n - 1, 0, -1):
        s[k] = Q[k, :k].sum()
        if not s[k] > 0.0:
            raise AccuracyFailure("state elimination hit a zero outflow row")
        Q[:k, :k] += np.outer(Q[:k, k], Q[k, :k]) / s[k]
    p = np.zeros(n)
    p[0] = 1.0
    for k in range(1, n):
        p[k] = (p[:k] @ Q[:k, k]) / s[k]
    p /= p.sum()
    residual = float(np.abs(A @ p).max())
    return p, residual


def steady_state(totals):
    """Solve the master equation for the stationary distribution.

    ``totals[f, i]`` is the total rate of the transition i -> f.  Raises
    NonErgodic (with per-component solutions attached) when the directed rate
    graph is not strongly connected.
    """
    totals = np.asarray(totals, dtype=float)
    n = totals.shape[0]
    max_rate = totals.max()
    if max_rate <= 0.0:
        raise NonErgodic(
            "all transition rates vanish; no stationary distribution",
            components=[(np.array([i]), np.array([1.0])) for i in range(n)],
        )

    # edge i -> j iff the rate Gamma_ji out of i into j is significant
    adjacency = (totals.T > EDGE_THRESHOLD * max_rate).astype(np.int8)
    np.fill_diagonal(adjacency, 0)
    n_comp, labels = connected_components(
        csr_matrix(adjacency), directed=True, connection="strong"
    )
    if n_comp > 1:
        components = []
        for c in range(n_comp):
            idx = np.nonzero(labels == c)[0]
            if len(idx) == 1:
                components.append((idx, np.array([1.0])))
            else:
                sub = totals[np.ix_(idx, idx)]
                p_local, _ = _solve_component(sub)
                components.append((idx, p_local))
        raise NonErgodic(
            f"rate graph splits into {n_comp} strongly connected components",
            components=components,
        )

    p, residual = _solve_component(totals)
    if residual >= RESIDUAL_TOL * max_rate:
        raise AccuracyFailure(
            f"steady-state residual {residual:.3e} above {RESIDUAL_TOL} * max rate"
        )
    if p.min() < -NEGATIVITY_TOL:
        raise AccuracyFailure(f"steady state has negative probability {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    return SteadyState(p=p, residual=residual, ergodic=True)


def detailed_balance_defect(totals, ss):
    """max |Gamma_nm p_m - Gamma_mn p_n| / max Gamma; zero iff detailed balance."""
    totals = np.asarray(totals, dtype=float)
    max_rate = totals.max()
    if max_rate <= 0.0:
        return 0.0
    flux = totals * ss.p[None, :]
    return float(np.abs(flux - flux.T).max() / max_rate)


def channel_balance_defect(table, ss):
    """Channel-resolved balance defect.

    max over (m, n, ell), m != n, of |Gamma_mn^(ell) p_n - Gamma_nm^(-ell) p_m|
    normalized by the largest total rate.  For a stationary two-state system
    the pairwise total fluxes always balance, so breaking of detailed balance
    only shows at this per-channel level.
    """
    totals = table.totals
    max_rate = totals.max()
    if max_rate <= 0.0:
        return 0.0
    p = ss.p
    n = len(p)
    defect = 0.0
    for m in range(n):
        for i in range(n):
            if m == i:
                continue
            for ell in table.ells:
                flux = table.partial(m, i, ell) * p[i]
                back = table.partial(i, m, -ell) * p[m]
                defect = max(defect, abs(flux - back))
    return float(defect / max_rate)


def dissipation_rate(table, ss, omega=None):
    """Steady-state dissipation rate with genuine/pseudo decomposition.

    The pseudo part is computed twice: from the net diagonal rates
    -w sum_{n, ell>0} ell (Gamma_nn^(ell) - Gamma_nn^(-ell)) p_n and from the
    manifestly positive form w sum_{n, ell>0} 2 pi ell |V_nn^(ell)|^2 J(ell w)
    p_n; disagreement signals a rate-table bug.
    """
    if omega is None:
        omega = table.omega
    p = ss.p
    n = len(p)
    ells = table.ells
    channels = []

    R_trans = 0.0
    for f in range(n):
        for i in range(n):
            if f == i:
                continue
            for j, ell in enumerate(ells):
                rate = table.partials[f, i, j]
                if rate == 0.0:
                    continue
                wch = table.freqs[f, i, j]
                contrib = -wch * rate * p[i]
                R_trans += contrib
                channels.append((f, i, int(ell), rate, wch, contrib))

    R_pseudo_net = 0.0
    for m in range(n):
        for j, ell in enumerate(ells):
            if ell <= 0:
                continue
            gp = table.partial(m, m, ell)
            gm = table.partial(m, m, -ell)
            if gp == 0.0 and gm == 0.0:
                continue
            contrib = -omega * ell * (gp - gm) * p[m]
            R_pseudo_net += contrib
            channels.append((m, m, int(ell), gp - gm, ell * omega, contrib))

    R_pseudo_pos = 0.0
    if table.bath is not None:
        for m in range(n):
            for j, ell in enumerate(ells):
                if ell <= 0:
                    continue
                v2 = abs(table.elements[m, m, j]) ** 2
                if v2 == 0.0:
                    continue
                R_pseudo_pos += (
                    omega * 2.0 * np.pi * ell * v2 * table.bath.density.value(ell * omega) * p[m]
                )
        scale = max(abs(R_pseudo_net), abs(R_pseudo_pos))
        if scale > 0 and abs(R_pseudo_net - R_pseudo_pos) > PSEUDO_CROSSCHECK_TOL * scale:
            raise InconsistentPseudoForms(
                f"pseudo-rate forms disagree: net={R_pseudo_net!r} closed={R_pseudo_pos!r}"
            )
        R_pseudo = R_pseudo_pos
    else:
        R_pseudo = R_pseudo_net

    return DissipationReport(
        R_total=R_trans + R_pseudo,
        R_trans=R_trans,
        R_pseudo=R_pseudo,
        channels=channels,
    )
