"""End-to-end execution: solve, rate table, steady state, dissipation, sweeps.

Two engines are available for the built-in models: ``numeric`` runs the
generic monodromy/DFT/golden-rule pipeline, ``analytic`` evaluates the
closed forms.  Custom systems run numerically only.
"""

from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import models
from .bath import BathSpec, SpectralDensity
from .config import apply_overrides, build_config, load_custom_system
from .exceptions import ValidationError
from .floquet import floquet_solve
from .kinetics import dissipation_rate, steady_state
from .rates import partial_rates


@dataclass
class PipelineResult:
    """Everything one parameter point produces."""

    quasienergies: np.ndarray
    p: np.ndarray
    residual: float
    R_total: float
    R_trans: float
    R_pseudo: float
    p_minus: float | None = None
    solution: object = None
    table: object = None
    channels: list | None = None


def solve_generic(H, V, bath, solver):
    """Generic pipeline: Floquet solve -> rates -> steady state -> dissipation."""
    sol = floquet_solve(H, steps=solver.steps, K=solver.K, tail_tol=solver.tail_tol)
    table = partial_rates(sol, V, bath, ell_max=solver.ell_max)
    ss = steady_state(table.totals)
    report = dissipation_rate(table, ss)
    return sol, table, ss, report


def tls_minus_index(sol, params):
    """Index of the Floquet state connected to the downward ac Stark shift,
    identified by overlap with the closed-form u_-(0)."""
    fl = models.tls_floquet(params)
    um0 = sum(fl.u_minus.values())
    overlaps = [abs(np.vdot(um0, sol.state_at_zero(n))) for n in range(sol.n_states)]
    return int(np.argmax(overlaps))


def run_two_level(params, bath, solver, engine):
    if bath.density.kind != "constant":
        if engine == "analytic":
            raise ValidationError("the analytic two-level engine requires a constant spectral density")
    if engine == "analytic":
        fl = models.tls_floquet(params)
        p_minus = models.tls_population(params, bath.beta)
        diss = models.tls_dissipation(params, bath.beta)
        return PipelineResult(
            quasienergies=np.array([fl.eps_minus, fl.eps_plus]),
            p=np.array([p_minus, 1.0 - p_minus]),
            residual=0.0,
            R_total=diss["R_total"],
            R_trans=diss["R_trans"],
            R_pseudo=diss["R_pseudo"],
            p_minus=p_minus,
        )
    H, V = models.build_tls_hamiltonian(params)
    sol, table, ss, report = solve_generic(H, V, bath, solver)
    idx = tls_minus_index(sol, params)
    return PipelineResult(
        quasienergies=sol.quasienergies,
        p=ss.p,
        residual=ss.residual,
        R_total=report.R_total,
        R_trans=report.R_trans,
        R_pseudo=report.R_pseudo,
        p_minus=float(ss.p[idx]),
        solution=sol,
        table=table,
        channels=report.channels,
    )


def run_oscillator(params, bath, solver, engine):
    if engine == "analytic":
        steady = models.osc_steady_and_R(params, bath)
        eps = np.array([models.osc_quasienergy(params, n) for n in range(params.n_max + 1)])
        return PipelineResult(
            quasienergies=eps,
            p=steady.p,
            residual=0.0,
            R_total=steady.R_total,
            R_trans=steady.R_trans,
            R_pseudo=steady.R_pseudo,
        )
    H, V = models.build_osc_hamiltonian(params)
    sol, table, ss, report = solve_generic(H, V, bath, solver)
    return PipelineResult(
        quasienergies=sol.quasienergies,
        p=ss.p,
        residual=ss.residual,
        R_total=report.R_total,
        R_trans=report.R_trans,
        R_pseudo=report.R_pseudo,
        solution=sol,
        table=table,
        channels=report.channels,
    )


def run_point(config):
    """Execute one parameter point of the configured system."""
    system = config.system
    if system.kind == "two_level":
        return run_two_level(system.params, config.bath, config.solver, config.engine)
    if system.kind == "driven_oscillator":
        return run_oscillator(system.params, config.bath, config.solver, config.engine)
    if config.engine == "analytic":
        raise ValidationError("custom systems have no analytic engine")
    H, V = load_custom_system(system.hamiltonian_file, system.coupling_file)
    sol, table, ss, report = solve_generic(H, V, config.bath, config.solver)
    return PipelineResult(
        quasienergies=sol.quasienergies,
        p=ss.p,
        residual=ss.residual,
        R_total=report.R_total,
        R_trans=report.R_trans,
        R_pseudo=report.R_pseudo,
        solution=sol,
        table=table,
        channels=report.channels,
    )


def _fmt(x):
    return format(float(x), ".12g")


def write_csv(path, columns, rows, meta):
    """Delimited output: '#'-prefixed metadata lines, header row, data rows."""
    lines = []
    for key in sorted(meta):
        lines.append(f"# {key}={meta[key]}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _meta(config):
    from . import __version__

    return {"generator": f"floqdiss {__version__}", "config_hash": config.config_hash(), "engine": config.engine}


def sweep_values(config):
    return config.sweep.values()


def _config_with_override(config, dotted, value):
    raw = apply_overrides(config.raw, [f"{dotted}={value!r}" if isinstance(value, str) else f"{dotted}={value}"])
    raw["task"] = "dissipation"
    raw.pop("sweep", None)
    return build_config(raw)


_SWEEP_SHORTHAND = {
    "muF": "system.params.muF",
    "omega": "system.params.omega",
    "omega0": "system.params.omega0",
    "F": "system.params.F",
    "gamma": "system.params.gamma",
    "beta": "bath.beta",
}


def run_sweep(config):
    """Evaluate the dissipation pipeline over a parameter grid.

    Points are computed concurrently; output order follows the grid.
    """
    dotted = _SWEEP_SHORTHAND.get(config.sweep.parameter, config.sweep.parameter)
    values = sweep_values(config)
    configs = [_config_with_override(config, dotted, float(v)) for v in values]

    def evaluate(cfg):
        return run_point(cfg)

    with ThreadPoolExecutor() as pool:
        results = list(pool.map(evaluate, configs))

    columns = [config.sweep.parameter, "R_total", "R_trans", "R_pseudo"]
    has_minus = results and results[0].p_minus is not None
    if has_minus:
        columns.append("p_minus")
    rows = []
    for v, res in zip(values, results):
        row = [v, res.R_total, res.R_trans, res.R_pseudo]
        if has_minus:
            row.append(res.p_minus)
        rows.append(row)
    return columns, rows


def summary_dict(result):
    out = {
        "quasienergies": [float(x) for x in result.quasienergies],
        "p": [float(x) for x in result.p],
        "residual": float(result.residual),
        "R": float(result.R_total),
        "R_trans": float(result.R_trans),
        "R_pseudo": float(result.R_pseudo),
    }
    if result.p_minus is not None:
        out["p_minus"] = float(result.p_minus)
    return out


def default_output(config):
    if config.output:
        return config.output
    if config.task == "figure":
        return f"{config.figure}.csv"
    return f"{config.task}.csv"


def run(config, stream=None):
    """Execute the configured task; write output files; print a JSON summary."""
    stream = stream or sys.stdout
    out_path = default_output(config)
    meta = _meta(config)

    if config.task == "figure":
        from .figures import emit_figure

        paths = emit_figure(config.figure, config, out_path)
        json.dump({"task": "figure", "figure": config.figure, "outputs": paths}, stream)
        stream.write("\n")
        return paths

    if config.task == "sweep":
        columns, rows = run_sweep(config)
        write_csv(out_path, columns, rows, meta)
        json.dump({"task": "sweep", "output": out_path, "points": len(rows)}, stream)
        stream.write("\n")
        return [out_path]

    result = run_point(config)
    if config.task == "quasienergies":
        rows = [[n, eps] for n, eps in enumerate(result.quasienergies)]
        write_csv(out_path, ["state", "quasienergy"], rows, meta)
    elif config.task == "rates":
        if result.table is None:
            raise ValidationError("task 'rates' requires the numeric engine")
        table = result.table
        rows = []
        n = len(result.p)
        for f in range(n):
            for i in range(n):
                for j, ell in enumerate(table.ells):
                    rate = table.partials[f, i, j]
                    elem = table.elements[f, i, j]
                    if rate == 0.0 and abs(elem) == 0.0 and not table.degeneracy_flags[f, i, j]:
                        continue
                    rows.append(
                        [f, i, ell, table.freqs[f, i, j], elem.real, elem.imag, rate,
                         1.0 if table.degeneracy_flags[f, i, j] else 0.0]
                    )
        write_csv(
            out_path,
            ["final", "initial", "ell", "frequency", "element_re", "element_im", "partial_rate", "degenerate"],
            rows,
            meta,
        )
    elif config.task == "steady":
        rows = [[n, pn] for n, pn in enumerate(result.p)]
        write_csv(out_path, ["state", "p"], rows, meta)
    elif config.task == "dissipation":
        rows = []
        if result.channels:
            for f, i, ell, rate, weight, contrib in result.channels:
                rows.append([f, i, ell, rate, weight, contrib])
        write_csv(
            out_path,
            ["final", "initial", "ell", "rate", "energy_weight", "contribution"],
            rows,
            meta,
        )
    else:
        raise ValidationError(f"unhandled task '{config.task}'")

    payload = summary_dict(result)
    payload["task"] = config.task
    payload["output"] = out_path
    json.dump(payload, stream)
    stream.write("\n")
    return [out_path]
