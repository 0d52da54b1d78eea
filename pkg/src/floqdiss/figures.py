"""Emitters for the four report figures (CSV data plus rendered PNG).

All quantities are written in the scaled units of the figures:
drive amplitude muF/omega0, temperature k_B T/omega0, quasienergies
eps/omega0, dissipation rate R0 = R/(omega0 Gamma0).

fig1  bare-connected quasienergy representatives vs muF, omega/omega0 = 0.5, 1.5
fig2  population p_minus vs muF for four temperatures, omega/omega0 = 1.5
fig3  R0 vs muF for the same temperatures
fig4  R0 vs omega/omega0 at k_B T/omega0 = 1 for five drive amplitudes
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from . import models
from .bath import BathSpec, SpectralDensity
from .exceptions import ValidationError
from .floquet import floquet_solve
from .kinetics import dissipation_rate, steady_state
from .pipeline import tls_minus_index, write_csv, _meta
from .rates import partial_rates

FIG2_TEMPERATURES = (0.1, 0.5, 1.0, 5.0)
FIG4_AMPLITUDES = (0.25, 0.5, 0.75, 1.0, 1.25)
FIG1_OMEGA_RATIOS = (0.5, 1.5)
MUF_MAX = 4.0
FIG4_OMEGA_RANGE = (0.2, 3.0)


def _tls_params(config):
    if config.system.kind != "two_level":
        raise ValidationError("figures are defined for the two_level system only")
    return config.system.params


def _unfold(eps_bz, omega, previous):
    """Representative eps + r*omega closest to the previous curve point."""
    r = round((previous - eps_bz) / omega)
    candidates = eps_bz + np.array([r - 1, r, r + 1]) * omega
    return candidates[np.argmin(np.abs(candidates - previous))]


def _numeric_tls_solution(params, solver):
    H, V = models.build_tls_hamiltonian(params)
    sol = floquet_solve(H, steps=solver.steps, K=solver.K, tail_tol=solver.tail_tol)
    return sol, V


def fig1_data(config):
    """Quasienergy representatives connected to the bare levels +-omega0/2."""
    params0 = _tls_params(config)
    w0 = params0.omega0
    muf_grid = np.linspace(0.0, MUF_MAX * w0, config.figure_points)
    columns = ["muF_scaled"]
    data = [muf_grid / w0]
    for ratio in FIG1_OMEGA_RATIOS:
        omega = ratio * w0
        plus, minus = [], []
        if config.engine == "analytic":
            for muf in muf_grid:
                fl = models.tls_floquet(replace(params0, omega=omega, muF=float(muf)))
                plus.append(fl.eps_plus_bare)
                minus.append(fl.eps_minus_bare)
        else:
            delta = w0 - omega
            prev_plus = 0.5 * w0 if delta > 0 else -0.5 * w0
            prev_minus = -prev_plus
            for muf in muf_grid:
                p = replace(params0, omega=omega, muF=float(muf))
                sol, _ = _numeric_tls_solution(p, config.solver)
                idx_minus = tls_minus_index(sol, p)
                idx_plus = 1 - idx_minus
                prev_plus = _unfold(sol.quasienergies[idx_plus], omega, prev_plus)
                prev_minus = _unfold(sol.quasienergies[idx_minus], omega, prev_minus)
                plus.append(prev_plus)
                minus.append(prev_minus)
        tag = format(ratio, "g")
        columns += [f"eps_plus_scaled_omega{tag}", f"eps_minus_scaled_omega{tag}"]
        data += [np.asarray(plus) / w0, np.asarray(minus) / w0]
    return columns, np.column_stack(data)


def _tls_point(params, beta, solver, engine, cache):
    """p_minus and dissipation at one (muF, omega, beta); numeric solutions
    are cached across temperatures."""
    if engine == "analytic":
        diss = models.tls_dissipation(params, beta)
        return models.tls_population(params, beta), diss["R_total"]
    key = (params.omega, params.muF)
    if key not in cache:
        cache[key] = _numeric_tls_solution(params, solver)
    sol, V = cache[key]
    bath = BathSpec(beta=beta, density=SpectralDensity.constant(params.J))
    table = partial_rates(sol, V, bath, ell_max=config_ell(solver))
    ss = steady_state(table.totals)
    report = dissipation_rate(table, ss)
    return float(ss.p[tls_minus_index(sol, params)]), report.R_total


def config_ell(solver):
    return solver.ell_max


def _fig23_data(config, want_population):
    params0 = _tls_params(config)
    w0 = params0.omega0
    omega = 1.5 * w0
    muf_grid = np.linspace(0.0, MUF_MAX * w0, config.figure_points)
    columns = ["muF_scaled"]
    data = [muf_grid / w0]
    cache = {}
    for temp in FIG2_TEMPERATURES:
        beta = 1.0 / (temp * w0)
        values = []
        for muf in muf_grid:
            p = replace(params0, omega=omega, muF=float(muf))
            p_minus, R = _tls_point(p, beta, config.solver, config.engine, cache)
            if want_population:
                values.append(p_minus)
            else:
                values.append(R / (w0 * p.Gamma0))
        tag = format(temp, "g")
        columns.append(f"{'p_minus' if want_population else 'R0'}_T{tag}")
        data.append(np.asarray(values))
    return columns, np.column_stack(data)


def fig2_data(config):
    """Population of the '-' Floquet state vs scaled drive amplitude."""
    return _fig23_data(config, want_population=True)


def fig3_data(config):
    """Normalized dissipation rate vs scaled drive amplitude."""
    return _fig23_data(config, want_population=False)


def fig4_data(config):
    """Normalized dissipation rate vs scaled drive frequency at k_B T/omega0 = 1."""
    params0 = _tls_params(config)
    w0 = params0.omega0
    beta = 1.0 / w0
    omega_grid = np.linspace(FIG4_OMEGA_RANGE[0] * w0, FIG4_OMEGA_RANGE[1] * w0, config.figure_points)
    columns = ["omega_scaled"]
    data = [omega_grid / w0]
    for amp in FIG4_AMPLITUDES:
        muf = amp * w0
        values = []
        cache = {}
        for omega in omega_grid:
            p = replace(params0, omega=float(omega), muF=muf)
            _, R = _tls_point(p, beta, config.solver, config.engine, cache)
            values.append(R / (w0 * p.Gamma0))
        columns.append(f"R0_muF{format(amp, 'g')}")
        data.append(np.asarray(values))
    return columns, np.column_stack(data)


_FIG_BUILDERS = {
    "fig1": fig1_data,
    "fig2": fig2_data,
    "fig3": fig3_data,
    "fig4": fig4_data,
}

_FIG_AXES = {
    "fig1": ("drive amplitude muF/omega0", "quasienergy / omega0"),
    "fig2": ("drive amplitude muF/omega0", "population p_minus"),
    "fig3": ("drive amplitude muF/omega0", "R / (omega0 Gamma0)"),
    "fig4": ("drive frequency omega/omega0", "R / (omega0 Gamma0)"),
}


def render_png(png_path, which, columns, table):
    """Render the emitted columns to a PNG next to the CSV."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = table[:, 0]
    for j, name in enumerate(columns[1:], start=1):
        ax.plot(x, table[:, j], label=name)
    xlabel, ylabel = _FIG_AXES[which]
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150, metadata={"Software": "floqdiss"})
    plt.close(fig)


def emit_figure(which, config, out_path, render=None):
    """Compute figure data, write the CSV, optionally render a PNG."""
    if which not in _FIG_BUILDERS:
        raise ValidationError(f"unknown figure '{which}'")
    columns, table = _FIG_BUILDERS[which](config)
    meta = _meta(config)
    meta["figure"] = which
    write_csv(out_path, columns, list(table), meta)
    paths = [out_path]
    if render is None:
        render = getattr(config, "render_figures", True)
    if render:
        png_path = out_path.rsplit(".", 1)[0] + ".png"
        render_png(png_path, which, columns, table)
        paths.append(png_path)
    return paths
