import math

import numpy as np
import pytest

from conftest import solve_nondegenerate

from floqdiss.exceptions import (
    DegenerateMonodromyWarning,
    NonHermitianInput,
    ShiftOverflow,
)
from floqdiss.floquet import (
    FourierHamiltonian,
    evolution_grid,
    floquet_solve,
    propagate_period,
    reconstruct_state,
    shift_representative,
)
from floqdiss.models import (
    OscillatorParams,
    TwoLevelParams,
    build_osc_hamiltonian,
    build_tls_hamiltonian,
    osc_quasienergy,
    tls_floquet,
)

TLS = TwoLevelParams(omega0=1.0, omega=1.5, muF=1.0, gamma=0.3, J=1.0)


def _static_two_level(omega0=1.0, omega=2.0):
    H0 = np.diag([0.5 * omega0, -0.5 * omega0]).astype(complex)
    return FourierHamiltonian(dim=2, omega=omega, components={0: H0})


# ---------------------------------------------------------------------------
# FourierHamiltonian
# ---------------------------------------------------------------------------


def test_hamiltonian_rejects_non_hermitian_pair():
    H1 = np.array([[0.0, 0.3], [0.0, 0.0]], dtype=complex)
    with pytest.raises(NonHermitianInput):
        FourierHamiltonian(dim=2, omega=1.0, components={1: H1})  # missing H^(-1)
    with pytest.raises(NonHermitianInput):
        FourierHamiltonian(dim=2, omega=1.0, components={0: H1})  # H^(0) not Hermitian


def test_hamiltonian_validation():
    with pytest.raises(ValueError):
        FourierHamiltonian(dim=1, omega=1.0, components={})
    with pytest.raises(ValueError):
        FourierHamiltonian(dim=2, omega=-1.0, components={})
    with pytest.raises(ValueError):
        FourierHamiltonian(dim=2, omega=1.0, components={0: np.zeros((3, 3))})


def test_hamiltonian_at_time():
    H, _ = build_tls_hamiltonian(TLS)
    t = 0.37
    expected = 0.5 * TLS.omega0 * np.diag([1.0, -1.0]) + 0.5 * TLS.muF * np.array(
        [
            [0.0, np.exp(-1j * TLS.omega * t)],
            [np.exp(1j * TLS.omega * t), 0.0],
        ]
    )
    assert np.abs(H.at_time(t) - expected).max() < 1e-14


# ---------------------------------------------------------------------------
# propagate_period / evolution_grid
# ---------------------------------------------------------------------------


def test_propagate_static_diagonal():
    omega0, omega = 1.0, 2.0
    H = _static_two_level(omega0, omega)
    mono = propagate_period(H, steps=256)
    T = 2.0 * np.pi / omega
    expected = np.diag([np.exp(-1j * omega0 * T / 2.0), np.exp(1j * omega0 * T / 2.0)])
    assert np.abs(mono.matrix - expected).max() < 1e-12
    assert mono.unitarity_defect < 1e-10


def test_propagate_two_level_eigenphases():
    # eigenphases of U equal e^{-i eps T} with eps = (omega +- Omega)/2 mod omega
    H, _ = build_tls_hamiltonian(TLS)
    mono = propagate_period(H, steps=1024)
    T = H.period
    fl = tls_floquet(TLS)
    got = np.sort(np.angle(np.linalg.eigvals(mono.matrix)))
    expected = np.sort([np.angle(np.exp(-1j * fl.eps_plus * T)), np.angle(np.exp(-1j * fl.eps_minus * T))])
    assert np.abs(got - expected).max() < 1e-10


def test_propagate_step_doubling_consistency():
    weak = TwoLevelParams(omega0=1.0, omega=1.5, muF=0.4, gamma=0.3, J=1.0)
    H, _ = build_tls_hamiltonian(weak)
    U1 = propagate_period(H, steps=256).matrix
    U2 = propagate_period(H, steps=512).matrix
    assert np.abs(U1 - U2).max() < 1e-10
    # stronger driving needs one extra doubling for the same agreement
    H, _ = build_tls_hamiltonian(TLS)
    U1 = propagate_period(H, steps=512).matrix
    U2 = propagate_period(H, steps=1024).matrix
    assert np.abs(U1 - U2).max() < 1e-10


def test_evolution_grid_identity_and_static():
    H = _static_two_level()
    grid = evolution_grid(H, steps=128)
    assert np.abs(grid[0] - np.eye(2)).max() == 0.0
    T = H.period
    for j in (13, 64, 100):
        t = j * T / 128
        expected = np.diag([np.exp(-1j * 0.5 * t), np.exp(1j * 0.5 * t)])
        assert np.abs(grid[j] - expected).max() < 1e-12


def test_evolution_grid_group_property():
    # U(t_{2j}, 0) = U(t_{2j}, t_j) U(t_j, 0): compare a full run against the
    # same run restarted from half the grid resolution
    H, _ = build_tls_hamiltonian(TLS)
    coarse = evolution_grid(H, steps=256)
    fine = evolution_grid(H, steps=512)
    assert np.abs(fine[::2] - coarse).max() < 1e-9


def test_evolution_grid_unitarity():
    H, _ = build_tls_hamiltonian(TLS)
    grid = evolution_grid(H, steps=256)
    for U in grid[:: 32]:
        assert np.linalg.norm(U.conj().T @ U - np.eye(2)) < 1e-10


# ---------------------------------------------------------------------------
# floquet_solve
# ---------------------------------------------------------------------------


def test_solve_undriven_two_level():
    H = _static_two_level(omega0=1.0, omega=2.0)  # eigenvalues +-0.5
    sol = floquet_solve(H, steps=256)
    assert np.allclose(np.sort(sol.quasienergies), [-0.5, 0.5], atol=1e-10)
    # Fourier components concentrated at k = 0, equal to the eigenvectors
    for n in range(2):
        weights = np.abs(sol.fourier_components[n]) ** 2
        k0 = np.nonzero(sol.harmonics == 0)[0][0]
        off = weights.sum() - weights[k0].sum()
        assert off < 1e-20
    assert sol.truncation_tail.max() < 1e-12


def test_solve_two_level_closed_form():
    H, _ = build_tls_hamiltonian(TLS)
    sol = floquet_solve(H)
    fl = tls_floquet(TLS)
    w = TLS.omega

    def to_bz(e):
        return (e + w / 2.0) % w - w / 2.0

    expected = np.sort([to_bz(fl.eps_plus), to_bz(fl.eps_minus)])
    assert np.abs(np.sort(sol.quasienergies) - expected).max() < 1e-9
    # the Floquet functions have exactly two nonvanishing Fourier components
    for n in range(2):
        weights = (np.abs(sol.fourier_components[n]) ** 2).sum(axis=1)
        order = np.argsort(weights)[::-1]
        assert weights[order[2:]].sum() < 1e-18
        kept = np.sort(sol.harmonics[order[:2]])
        assert list(kept) in ([-1, 0], [0, 1])


def test_solve_oscillator_quasienergy_shift():
    # low amplitude: lowest quasienergies carry the shared ac Stark shift
    p = OscillatorParams(M=1.0, omega0=1.0, omega=1.0 + math.sqrt(2.0), F=0.3, gamma=1.0, n_max=30)
    H, _ = build_osc_hamiltonian(p)
    sol = floquet_solve(H, steps=1024)
    w = p.omega

    def to_bz(e):
        return (e + w / 2.0) % w - w / 2.0

    eps_sorted = np.sort(sol.quasienergies)
    for n in range(5):
        target = to_bz(osc_quasienergy(p, n))
        assert np.abs(eps_sorted - target).min() < 1e-6


def test_solve_orthonormality_and_dft_consistency(rng):
    _, _, sol = solve_nondegenerate(rng)
    C = sol.fourier_components  # (n, nk, dim)
    gram = np.einsum("mka,nka->mn", C.conj(), C)
    assert np.abs(gram - np.eye(sol.n_states)).max() < 1e-10
    # inverse transform reproduces the grid samples
    steps = sol.grid_samples.shape[1]
    tgrid = np.arange(steps) * (sol.period / steps)
    phases = np.exp(1j * np.outer(tgrid, sol.harmonics * sol.omega))  # (steps, nk)
    rebuilt = np.einsum("jk,nka->nja", phases, C)
    assert np.abs(rebuilt - sol.grid_samples).max() < 1e-10


def test_solve_quasienergy_step_doubling(rng):
    H, _, _ = solve_nondegenerate(rng)
    e1 = np.sort(floquet_solve(H, steps=512).quasienergies)
    e2 = np.sort(floquet_solve(H, steps=1024).quasienergies)
    assert np.abs(e1 - e2).max() < 1e-9


def test_solve_degenerate_monodromy_warns():
    H = FourierHamiltonian(dim=2, omega=1.0, components={0: np.zeros((2, 2), dtype=complex)})
    with pytest.warns(DegenerateMonodromyWarning):
        sol = floquet_solve(H, steps=64)
    assert sol.degenerate


# ---------------------------------------------------------------------------
# shift_representative / reconstruct_state
# ---------------------------------------------------------------------------


def test_shift_identity_and_roundtrip():
    H, _ = build_tls_hamiltonian(TLS)
    sol = floquet_solve(H)
    assert shift_representative(sol, 0, 0) is sol
    back = shift_representative(shift_representative(sol, 1, 1), 1, -1)
    assert np.abs(back.quasienergies - sol.quasienergies).max() < 1e-15
    for k in sol.harmonics:
        assert np.abs(back.component(1, k) - sol.component(1, k)).max() < 1e-15


def test_shift_preserves_reconstruction():
    H, _ = build_tls_hamiltonian(TLS)
    sol = floquet_solve(H)
    shifted = shift_representative(sol, 0, 2)
    assert shifted.quasienergies[0] == pytest.approx(sol.quasienergies[0] + 2 * TLS.omega)
    for t in (0.0, 0.3, 1.7, sol.period):
        a = reconstruct_state(sol, 0, t)
        b = reconstruct_state(shifted, 0, t)
        assert np.abs(a - b).max() < 1e-10


def test_shift_overflow():
    H, _ = build_tls_hamiltonian(TLS)
    sol = floquet_solve(H)
    with pytest.raises(ShiftOverflow):
        shift_representative(sol, 0, 10, max_window=len(sol.harmonics) + 2)


def test_reconstruct_trivial_points():
    H, _ = build_tls_hamiltonian(TLS)
    sol = floquet_solve(H)
    for n in range(2):
        psi0 = reconstruct_state(sol, n, 0.0)
        assert np.abs(psi0 - sol.fourier_components[n].sum(axis=0)).max() < 1e-12
        assert abs(np.linalg.norm(psi0) - 1.0) < 1e-9
        T = sol.period
        psiT = reconstruct_state(sol, n, T)
        assert np.abs(psiT - psi0 * np.exp(-1j * sol.quasienergies[n] * T)).max() < 1e-9


def test_reconstruct_matches_closed_form():
    H, _ = build_tls_hamiltonian(TLS)
    sol = floquet_solve(H)
    fl = tls_floquet(TLS)
    t = 0.4 * sol.period
    for u, eps in ((fl.u_plus, fl.eps_plus), (fl.u_minus, fl.eps_minus)):
        target = sum(v * np.exp(1j * k * TLS.omega * t) for k, v in u.items())
        target = target * np.exp(-1j * eps * t)
        best = min(
            np.abs(
                reconstruct_state(sol, n, t)
                - target * np.exp(1j * np.angle(np.vdot(target, reconstruct_state(sol, n, t))))
            ).max()
            for n in range(2)
        )
        assert best < 1e-9
