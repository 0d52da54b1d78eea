import numpy as np
import pytest

from floqdiss.floquet import FourierHamiltonian, floquet_solve
from floqdiss.rates import CouplingOperator


def _random_hermitian(rng, dim, scale=1.0):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (m + m.conj().T)


def make_random_system(rng, dim=None, omega=None, drive_scale=0.3):
    """A random driven system: Hermitian H0, one drive harmonic, Hermitian V."""
    if dim is None:
        dim = int(rng.integers(3, 6))
    if omega is None:
        omega = float(rng.uniform(1.5, 3.0))
    H0 = _random_hermitian(rng, dim)
    H1 = drive_scale * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    H = FourierHamiltonian(dim=dim, omega=omega, components={0: H0, 1: H1, -1: H1.conj().T})
    V = CouplingOperator(matrix=_random_hermitian(rng, dim, scale=0.5))
    return H, V


def solve_nondegenerate(rng, **kwargs):
    """Random system whose monodromy eigenphases are well separated."""
    for _ in range(20):
        H, V = make_random_system(rng, **kwargs)
        sol = floquet_solve(H, steps=256)
        if not sol.degenerate:
            return H, V, sol
    raise RuntimeError("could not draw a non-degenerate random system")


def make_osc_rate_table(params, bath):
    """RateTable assembled from the closed-form oscillator channel rates."""
    from floqdiss.models import osc_position_matrix, osc_quasienergy, osc_rates
    from floqdiss.rates import RateTable, total_rates

    n_states = params.n_max + 1
    eps = np.array([osc_quasienergy(params, n) for n in range(n_states)])
    ells = np.arange(-1, 2)
    freqs = eps[:, None, None] - eps[None, :, None] + ells[None, None, :] * params.omega
    elements = np.zeros((n_states, n_states, 3), dtype=complex)
    partials = np.zeros((n_states, n_states, 3))
    x = osc_position_matrix(params)
    elements[:, :, 1] = params.gamma * x
    np.fill_diagonal(elements[:, :, 1], 0.0)
    diag = params.gamma * params.F / (2.0 * params.M * (params.omega**2 - params.omega0**2))
    J0, Jw = bath.density.value(params.omega0), bath.density.value(params.omega)
    for n in range(n_states):
        elements[n, n, 0] = diag
        elements[n, n, 2] = diag
        r = osc_rates(params, bath.beta, J0, Jw, n)
        if n > 0:
            partials[n - 1, n, 1] = r["down"]
        if n + 1 < n_states:
            partials[n + 1, n, 1] = r["up"]
        partials[n, n, 2] = r["pseudo_plus"]
        partials[n, n, 0] = r["pseudo_minus"]
    table = RateTable(
        omega=params.omega,
        ells=ells,
        freqs=freqs,
        elements=elements,
        partials=partials,
        degeneracy_flags=np.zeros(partials.shape, dtype=bool),
        bath=bath,
    )
    total_rates(table)
    return table


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
