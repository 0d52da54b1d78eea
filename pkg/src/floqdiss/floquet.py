"""Floquet states of finite-dimensional time-periodic Hamiltonians.

The period propagator (monodromy operator) is computed with a fourth-order
commutator-free exponential stepper on a uniform grid; its eigendecomposition
yields quasienergies in the first Brillouin zone and, via a DFT of the
propagated eigenvectors, the Fourier components of the Floquet functions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import (
    AccuracyFailure,
    DegenerateMonodromyWarning,
    NonHermitianInput,
    ShiftOverflow,
    TruncationFailure,
)

UNITARITY_TOL = 1e-10
HERMITICITY_TOL = 1e-14
DEGENERACY_GAP = 1e-9
DEFAULT_STEPS = 1024
DEFAULT_TAIL_TOL = 1e-12

# Gauss-Legendre nodes and the fourth-order commutator-free weights
_C1 = 0.5 - np.sqrt(3.0) / 6.0
_C2 = 0.5 + np.sqrt(3.0) / 6.0
_A1 = 0.25 + np.sqrt(3.0) / 6.0
_A2 = 0.25 - np.sqrt(3.0) / 6.0


@dataclass(frozen=True)
class FourierHamiltonian:
    """T-periodic Hermitian Hamiltonian H(t) = sum_k H^(k) exp(i k w t).

    ``components`` maps the integer harmonic index k to a dim x dim complex
    matrix; Hermiticity of H(t) requires H^(-k) = (H^(k))^dagger.
    """

    dim: int
    omega: float
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be at least 2")
        if not (self.omega > 0):
            raise ValueError("omega must be positive")
        comps = {}
        for k, mat in self.components.items():
            mat = np.asarray(mat, dtype=complex)
            if mat.shape != (self.dim, self.dim):
                raise ValueError(f"component k={k} has shape {mat.shape}")
            comps[int(k)] = mat
        object.__setattr__(self, "components", comps)
        scale = max(1.0, max((np.abs(m).max() for m in comps.values()), default=0.0))
        for k, mat in comps.items():
            partner = comps.get(-k)
            if partner is None:
                partner = np.zeros_like(mat)
            if np.abs(partner - mat.conj().T).max() > HERMITICITY_TOL * scale:
                raise NonHermitianInput(
                    f"H^({-k}) is not the conjugate transpose of H^({k})"
                )

    @property
    def period(self):
        return 2.0 * np.pi / self.omega

    @property
    def max_harmonic(self):
        return max((abs(k) for k in self.components), default=0)

    def at_time(self, t):
        """Evaluate H(t); t may be a scalar or 1-d array."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.dim, self.dim), dtype=complex)
        for k, mat in self.components.items():
            phase = np.exp(1j * k * self.omega * t)
            out += phase[..., None, None] * mat
        return out


@dataclass(frozen=True)
class MonodromyOperator:
    """One-period propagator U(T, 0) with its unitarity defect."""

    matrix: np.ndarray
    unitarity_defect: float


@dataclass(frozen=True)
class FloquetSolution:
    """Quasienergies and Floquet-function Fourier components of one system.

    ``fourier_components[n, j]`` is the dim-vector u_n^(k) for harmonic
    k = harmonics[j]; ``grid_samples[n, j]`` is u_n(t_j) on the propagation
    grid t_j = j T / steps.
    """

    dim: int
    omega: float
    quasienergies: np.ndarray
    harmonics: np.ndarray
    fourier_components: np.ndarray
    grid_samples: np.ndarray | None
    truncation_tail: np.ndarray
    degenerate: bool = False

    @property
    def period(self):
        return 2.0 * np.pi / self.omega

    @property
    def n_states(self):
        return len(self.quasienergies)

    @property
    def cutoff(self):
        """Largest stored |k| (the window is not necessarily symmetric after
        representative shifts)."""
        return int(max(self.harmonics.max(), -self.harmonics.min()))

    def component(self, n, k):
        """u_n^(k), zero outside the stored window."""
        idx = np.nonzero(self.harmonics == k)[0]
        if idx.size == 0:
            return np.zeros(self.dim, dtype=complex)
        return self.fourier_components[n, idx[0]]

    def state_at_zero(self, n):
        """u_n(0) = sum_k u_n^(k) (the monodromy eigenvector)."""
        return self.fourier_components[n].sum(axis=0)


def _unitarity_defect(U):
    d = U.shape[0]
    return float(np.linalg.norm(U.conj().T @ U - np.eye(d)))


def _check_steps(steps):
    if steps < 64 or steps & (steps - 1):
        raise ValueError("steps must be a power of two and at least 64")


def _cf4_steps(H, steps):
    """Per-step CF4 factors: exp(-i h B_j) exp(-i h A_j), as (expB, expA)."""
    h = H.period / steps
    t0 = np.arange(steps) * h
    H1 = H.at_time(t0 + _C1 * h)
    H2 = H.at_time(t0 + _C2 * h)
    A = _A1 * H1 + _A2 * H2
    B = _A2 * H1 + _A1 * H2

    def batched_expm(M):
        # M is a stack of Hermitian matrices; exp(-i h M) via eigh
        w, V = np.linalg.eigh(M)
        phases = np.exp(-1j * h * w)
        return (V * phases[..., None, :]) @ V.conj().swapaxes(-1, -2)

    return batched_expm(B), batched_expm(A)


def evolution_grid(H, steps=DEFAULT_STEPS):
    """Propagators U(t_j, 0) for t_j = j T / steps, j = 0 .. steps.

    The last entry is the monodromy operator.
    """
    _check_steps(steps)
    expB, expA = _cf4_steps(H, steps)
    grid = np.empty((steps + 1, H.dim, H.dim), dtype=complex)
    U = np.eye(H.dim, dtype=complex)
    grid[0] = U
    for j in range(steps):
        U = expB[j] @ (expA[j] @ U)
        grid[j + 1] = U
    if _unitarity_defect(grid[-1]) >= UNITARITY_TOL:
        raise AccuracyFailure("propagator lost unitarity")
    return grid


def propagate_period(H, steps=DEFAULT_STEPS):
    """Monodromy operator U(T, 0), retried with doubled steps on failure."""
    _check_steps(steps)
    last_defect = np.inf
    for trial_steps in (steps, 2 * steps, 4 * steps):
        expB, expA = _cf4_steps(H, trial_steps)
        U = np.eye(H.dim, dtype=complex)
        for j in range(trial_steps):
            U = expB[j] @ (expA[j] @ U)
        last_defect = _unitarity_defect(U)
        if last_defect < UNITARITY_TOL:
            return MonodromyOperator(matrix=U, unitarity_defect=last_defect)
    raise AccuracyFailure(
        f"unitarity defect {last_defect:.3e} above {UNITARITY_TOL} after step doubling"
    )


def _diagonalize_monodromy(U, T):
    """Eigenphases and orthonormalized eigenvectors; flags near-degeneracy."""
    lam, vecs = np.linalg.eig(U)
    eps = -np.angle(lam) / T  # angle in (-pi, pi] -> eps in [-w/2, w/2)
    order = np.argsort(eps)
    eps = eps[order]
    vecs = vecs[:, order]

    # group quasienergies closer than the degeneracy gap (incl. BZ wraparound)
    omega = 2.0 * np.pi / T
    n = len(eps)
    groups = []
    current = [0]
    for i in range(1, n):
        if eps[i] - eps[i - 1] < DEGENERACY_GAP:
            current.append(i)
        else:
            groups.append(current)
            current = [i]
    groups.append(current)
    if len(groups) > 1 and (eps[0] + omega) - eps[-1] < DEGENERACY_GAP:
        groups[0] = groups.pop() + groups[0]

    degenerate = False
    for grp in groups:
        if len(grp) > 1:
            degenerate = True
            block, _ = np.linalg.qr(vecs[:, grp])
            vecs[:, grp] = block
    if degenerate:
        warnings.warn(
            "monodromy eigenphases are (nearly) degenerate; state labels "
            "within the degenerate subspace are basis-dependent",
            DegenerateMonodromyWarning,
        )
    else:
        # eigenvectors of a normal matrix: polish orthonormality
        vecs, _ = np.linalg.qr(vecs)
    return eps, vecs, degenerate


def floquet_solve(H, steps=DEFAULT_STEPS, K=None, tail_tol=DEFAULT_TAIL_TOL):
    """Full Floquet solution: quasienergies, Fourier components, grid samples.

    The harmonic cutoff starts at max(K_H + 8, 16) (or the requested K) and is
    doubled until the per-state Fourier tail drops below ``tail_tol``, up to
    steps/4.
    """
    _check_steps(steps)
    grid = evolution_grid(H, steps)
    T = H.period
    eps, vecs, degenerate = _diagonalize_monodromy(grid[-1], T)

    tgrid = np.arange(steps) * (T / steps)
    # u_n(t_j) = exp(+i eps_n t_j) U(t_j, 0) v_n
    propagated = np.einsum("jab,bn->nja", grid[:steps], vecs)  # (n, steps, dim)
    phases = np.exp(1j * np.outer(eps, tgrid))
    samples = phases[:, :, None] * propagated

    coeffs = np.fft.fft(samples, axis=1) / steps  # index j <-> harmonic via fftfreq
    kvals = np.fft.fftfreq(steps, d=1.0 / steps).astype(int)
    norms2 = np.abs(coeffs) ** 2
    weight = norms2.sum(axis=2)  # (n, steps): ||u_n^(k)||^2 per fft bin

    k_min = H.max_harmonic
    cutoff = max(k_min + 8, 16) if K is None else int(K)
    if cutoff < k_min:
        raise ValueError(f"K must be at least the Hamiltonian cutoff {k_min}")
    max_cutoff = steps // 4
    cutoff = min(cutoff, max_cutoff)
    while True:
        tail = weight[:, np.abs(kvals) > cutoff].sum(axis=1)
        if tail.max() < tail_tol or cutoff >= max_cutoff:
            break
        cutoff = min(2 * cutoff, max_cutoff)
    if tail.max() >= tail_tol:
        raise TruncationFailure(
            f"Fourier tail {tail.max():.3e} above {tail_tol} at maximal cutoff {cutoff}"
        )

    harmonics = np.arange(-cutoff, cutoff + 1)
    sel = np.array([np.nonzero(kvals == k)[0][0] for k in harmonics])
    fourier_components = coeffs[:, sel, :]

    return FloquetSolution(
        dim=H.dim,
        omega=H.omega,
        quasienergies=eps,
        harmonics=harmonics,
        fourier_components=fourier_components,
        grid_samples=samples,
        truncation_tail=tail,
        degenerate=degenerate,
    )


def shift_representative(sol, n, r, max_window=None):
    """Relabel state n: eps_n -> eps_n + r w, u_n^(k) -> u_n^(k-r).

    The full Floquet state is unchanged; only the factorization into periodic
    function and multiplier moves.  The harmonic window grows as needed.
    """
    r = int(r)
    if r == 0:
        return sol
    k_lo, k_hi = int(sol.harmonics.min()), int(sol.harmonics.max())
    new_lo, new_hi = min(k_lo, k_lo + r), max(k_hi, k_hi + r)
    limit = max_window if max_window is not None else 4 * (k_hi - k_lo + 1) + abs(r)
    if new_hi - new_lo + 1 > limit:
        raise ShiftOverflow("shifted harmonics exceed the storage window")

    harmonics = np.arange(new_lo, new_hi + 1)
    nk = len(harmonics)
    comps = np.zeros((sol.n_states, nk, sol.dim), dtype=complex)
    old_pos = k_lo - new_lo
    comps[:, old_pos : old_pos + (k_hi - k_lo + 1), :] = sol.fourier_components
    # state n: u'^(k) = u^(k-r), i.e. every stored harmonic moves up by r
    shifted = np.zeros((nk, sol.dim), dtype=complex)
    shifted[old_pos + r : old_pos + r + (k_hi - k_lo + 1), :] = sol.fourier_components[n]
    comps[n] = shifted

    eps = sol.quasienergies.copy()
    eps[n] += r * sol.omega

    samples = sol.grid_samples
    if samples is not None:
        steps = samples.shape[1]
        tgrid = np.arange(steps) * (sol.period / steps)
        samples = samples.copy()
        samples[n] = samples[n] * np.exp(1j * r * sol.omega * tgrid)[:, None]

    return replace(
        sol,
        quasienergies=eps,
        harmonics=harmonics,
        fourier_components=comps,
        grid_samples=samples,
    )


def reconstruct_state(sol, n, t):
    """Floquet state sum_k u_n^(k) exp(i k w t) * exp(-i eps_n t)."""
    if not 0 <= n < sol.n_states:
        raise IndexError(f"state index {n} out of range")
    t_red = float(t) % sol.period  # harmonics are T-periodic
    phases = np.exp(1j * sol.harmonics * sol.omega * t_red)
    u = phases @ sol.fourier_components[n]
    return u * np.exp(-1j * sol.quasienergies[n] * float(t))
