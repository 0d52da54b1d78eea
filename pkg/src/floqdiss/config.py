"""Run configuration: JSON ingestion, validation, defaults.

The configuration is a single JSON document; unknown keys are rejected and
validation errors name the offending field.  See the README for the schema
and for the file format of custom systems.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bath import BathSpec, SpectralDensity
from .exceptions import NonHermitianInput, ParseError, ValidationError
from .floquet import FourierHamiltonian
from .models import OscillatorParams, TwoLevelParams
from .rates import CouplingOperator

TASKS = ("quasienergies", "rates", "steady", "dissipation", "sweep", "figure")
ENGINES = ("numeric", "analytic")
FIGURES = ("fig1", "fig2", "fig3", "fig4")


@dataclass
class SolverConfig:
    steps: int = 1024
    K: int | None = None
    ell_max: int | None = None
    tail_tol: float = 1e-12


@dataclass
class SweepConfig:
    parameter: str
    start: float
    stop: float
    count: int

    def values(self):
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class SystemConfig:
    kind: str
    params: object = None  # TwoLevelParams | OscillatorParams
    hamiltonian_file: str | None = None
    coupling_file: str | None = None


@dataclass
class RunConfig:
    system: SystemConfig
    bath: BathSpec
    solver: SolverConfig
    task: str
    engine: str = "numeric"
    sweep: SweepConfig | None = None
    figure: str | None = None
    figure_points: int = 400
    output: str | None = None
    raw: dict = field(default_factory=dict, repr=False)

    def config_hash(self):
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _check_keys(d, allowed, context):
    for key in d:
        if key not in allowed:
            raise ValidationError(f"unknown key '{context}.{key}'" if context else f"unknown key '{key}'")


def _require(d, key, context):
    if key not in d:
        where = f"{context}.{key}" if context else key
        raise ValidationError(f"missing required field '{where}'")
    return d[key]


def _positive(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"field '{name}' must be a number") from None
    if not value > 0 or math.isnan(value):
        raise ValidationError(f"field '{name}' must be positive")
    return value


def _nonnegative(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"field '{name}' must be a number") from None
    if value < 0 or math.isnan(value):
        raise ValidationError(f"field '{name}' must be nonnegative")
    return value


def _parse_system(raw):
    if not isinstance(raw, dict):
        raise ValidationError("field 'system' must be an object")
    _check_keys(raw, {"type", "params", "hamiltonian_file", "coupling_file"}, "system")
    kind = _require(raw, "type", "system")
    params = raw.get("params", {})
    if kind == "two_level":
        _check_keys(params, {"omega0", "omega", "muF", "gamma", "J"}, "system.params")
        try:
            return SystemConfig(
                kind=kind,
                params=TwoLevelParams(
                    omega0=_positive(params.get("omega0", 1.0), "system.params.omega0"),
                    omega=_positive(params.get("omega", 1.5), "system.params.omega"),
                    muF=_nonnegative(params.get("muF", 1.0), "system.params.muF"),
                    gamma=_nonnegative(params.get("gamma", 1.0), "system.params.gamma"),
                    J=_nonnegative(params.get("J", 1.0), "system.params.J"),
                ),
            )
        except ValueError as exc:
            raise ValidationError(f"system.params: {exc}") from None
    if kind == "driven_oscillator":
        _check_keys(params, {"M", "omega0", "omega", "F", "gamma", "n_max"}, "system.params")
        try:
            return SystemConfig(
                kind=kind,
                params=OscillatorParams(
                    M=_positive(params.get("M", 1.0), "system.params.M"),
                    omega0=_positive(params.get("omega0", 1.0), "system.params.omega0"),
                    omega=_positive(params.get("omega", 2.0), "system.params.omega"),
                    F=_nonnegative(params.get("F", 1.0), "system.params.F"),
                    gamma=_nonnegative(params.get("gamma", 1.0), "system.params.gamma"),
                    n_max=int(params.get("n_max", 40)),
                ),
            )
        except ValueError as exc:
            raise ValidationError(f"system.params: {exc}") from None
    if kind == "custom":
        return SystemConfig(
            kind=kind,
            hamiltonian_file=str(_require(raw, "hamiltonian_file", "system")),
            coupling_file=str(_require(raw, "coupling_file", "system")),
        )
    raise ValidationError(f"system.type must be one of two_level, driven_oscillator, custom (got '{kind}')")


def _parse_bath(raw):
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValidationError("field 'bath' must be an object")
    _check_keys(raw, {"beta", "spectral_density"}, "bath")
    beta = raw.get("beta", 1.0)
    if beta in ("inf", "Infinity"):
        beta = math.inf
    beta = _positive(beta, "bath.beta") if not math.isinf(float(beta)) else math.inf
    sd_raw = raw.get("spectral_density", {"type": "constant", "J0": 1.0})
    _check_keys(sd_raw, {"type", "J0", "eta", "omega_c"}, "bath.spectral_density")
    sd_type = sd_raw.get("type", "constant")
    if sd_type == "constant":
        density = SpectralDensity.constant(_nonnegative(sd_raw.get("J0", 1.0), "bath.spectral_density.J0"))
    elif sd_type == "ohmic":
        density = SpectralDensity.ohmic(
            eta=_nonnegative(sd_raw.get("eta", 1.0), "bath.spectral_density.eta"),
            omega_c=_positive(sd_raw.get("omega_c", 10.0), "bath.spectral_density.omega_c"),
        )
    else:
        raise ValidationError(f"bath.spectral_density.type must be constant or ohmic (got '{sd_type}')")
    return BathSpec(beta=beta, density=density)


def _parse_solver(raw):
    if raw is None:
        raw = {}
    _check_keys(raw, {"steps", "K", "ell_max", "tail_tol"}, "solver")
    steps = int(raw.get("steps", 1024))
    if steps < 64 or steps & (steps - 1):
        raise ValidationError("solver.steps must be a power of two and at least 64")
    K = raw.get("K")
    ell_max = raw.get("ell_max")
    return SolverConfig(
        steps=steps,
        K=None if K is None else int(K),
        ell_max=None if ell_max is None else int(ell_max),
        tail_tol=_positive(raw.get("tail_tol", 1e-12), "solver.tail_tol"),
    )


def build_config(raw):
    """Validate a raw dict into a RunConfig with defaults filled in."""
    if not isinstance(raw, dict):
        raise ValidationError("configuration root must be an object")
    allowed = {"system", "bath", "solver", "task", "engine", "sweep", "figure", "figure_points", "output"}
    _check_keys(raw, allowed, "")
    system = _parse_system(_require(raw, "system", ""))
    bath = _parse_bath(raw.get("bath"))
    solver = _parse_solver(raw.get("solver"))
    task = _require(raw, "task", "")
    if task not in TASKS:
        raise ValidationError(f"task must be one of {', '.join(TASKS)} (got '{task}')")
    engine = raw.get("engine", "numeric")
    if engine not in ENGINES:
        raise ValidationError(f"engine must be numeric or analytic (got '{engine}')")

    sweep = None
    if task == "sweep":
        sw = _require(raw, "sweep", "")
        _check_keys(sw, {"parameter", "start", "stop", "count"}, "sweep")
        start = float(_require(sw, "start", "sweep"))
        stop = float(_require(sw, "stop", "sweep"))
        if not (math.isfinite(start) and math.isfinite(stop)):
            raise ValidationError("sweep.start and sweep.stop must be finite")
        count = int(_require(sw, "count", "sweep"))
        if count < 2:
            raise ValidationError("sweep.count must be at least 2")
        sweep = SweepConfig(parameter=str(_require(sw, "parameter", "sweep")), start=start, stop=stop, count=count)

    figure = raw.get("figure")
    if task == "figure":
        if figure not in FIGURES:
            raise ValidationError(f"figure must be one of {', '.join(FIGURES)} (got '{figure}')")
    figure_points = int(raw.get("figure_points", 400))
    if figure_points < 2:
        raise ValidationError("figure_points must be at least 2")

    output = raw.get("output")
    return RunConfig(
        system=system,
        bath=bath,
        solver=solver,
        task=task,
        engine=engine,
        sweep=sweep,
        figure=figure,
        figure_points=figure_points,
        output=None if output is None else str(output),
        raw=copy.deepcopy(raw),
    )


def load_raw(path):
    """Read a JSON configuration file into a raw dict (no validation)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def load_config(path):
    """Read and validate a JSON configuration file."""
    return build_config(load_raw(path))


def apply_overrides(raw, overrides):
    """Apply 'dotted.key=value' overrides to a raw config dict (in place copy).

    Values are parsed as JSON where possible and kept as strings otherwise.
    """
    raw = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise ValidationError(f"override '{item}' is not of the form key=value")
        key, _, text = item.partition("=")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        node = raw
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ValidationError(f"override '{key}' descends into a non-object")
        node[parts[-1]] = value
    return raw


def _complex_matrix(entries, name):
    try:
        arr = np.asarray(entries, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{name}: matrix entries must be [re, im] pairs") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name}: expected a square matrix of [re, im] pairs")
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def load_custom_system(ham_path, coupling_path):
    """Read a FourierHamiltonian and a CouplingOperator from JSON files."""
    try:
        with open(ham_path, "r", encoding="utf-8") as fh:
            ham_raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{ham_path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ParseError(f"{ham_path}: {exc.strerror}") from None
    _check_keys(ham_raw, {"dim", "omega", "components"}, "hamiltonian")
    dim = int(_require(ham_raw, "dim", "hamiltonian"))
    omega = _positive(_require(ham_raw, "omega", "hamiltonian"), "hamiltonian.omega")
    comps = {}
    for key, entries in _require(ham_raw, "components", "hamiltonian").items():
        try:
            k = int(key)
        except ValueError:
            raise ValidationError(f"hamiltonian.components: harmonic index '{key}' is not an integer") from None
        comps[k] = _complex_matrix(entries, f"hamiltonian.components[{key}]")
    try:
        H = FourierHamiltonian(dim=dim, omega=omega, components=comps)
    except NonHermitianInput as exc:
        raise NonHermitianInput(f"{ham_path}: {exc}") from None
    except ValueError as exc:
        raise ValidationError(f"hamiltonian: {exc}") from None

    try:
        with open(coupling_path, "r", encoding="utf-8") as fh:
            coup_raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{coupling_path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ParseError(f"{coupling_path}: {exc.strerror}") from None
    _check_keys(coup_raw, {"matrix"}, "coupling")
    V = CouplingOperator(matrix=_complex_matrix(_require(coup_raw, "matrix", "coupling"), "coupling.matrix"))
    if V.matrix.shape != (dim, dim):
        raise ValidationError("coupling.matrix dimension does not match the Hamiltonian")
    return H, V
