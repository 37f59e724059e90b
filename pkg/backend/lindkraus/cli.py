"""
Shared plumbing for the lindkraus management commands: model/state loading,
time grids, output writers and the mapping of domain errors to exit codes.
"""

import csv
import json
import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from django.core.management import CommandError
from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

from . import conf
from .closed_forms import TwoLevelParams, three_level_model, two_level_model
from .core import (
    DensityMatrix,
    InvalidStateError,
    LindbladModel,
    LindKrausError,
    ModelValidationError,
    NonCompletelyPositiveError,
    NumericalError,
    SchemaError,
    Tolerances,
    basis_state,
    ensure_valid,
    plus_state,
)
from .microscopic import SpectralFunction, spin_boson_model, two_qubit_triplet_model
from .serializers import STATE_PRESETS, DensityMatrixField, LindbladModelSerializer

logger = logging.getLogger(__name__)

PRESETS = ("three-level", "two-level", "spin-boson", "two-qubit")

EXIT_CHECK_FAILED = 1
EXIT_SCHEMA = 2
EXIT_INVALID_MODEL = 3
EXIT_NON_CP = 4

GRID_EPS = 1e-12


@dataclass(frozen=True)
class LoadedModel:
    """A model plus what is known about where it came from."""
    model: LindbladModel
    source: str
    beta: Optional[float] = None


def add_model_arguments(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--model", help="Path to a model JSON file")
    group.add_argument("--preset", choices=PRESETS, help="Builtin model")
    parser.add_argument("--gamma", type=float, default=1.0,
                        help="Decay rate (three-level, two-qubit) or sigma_x strength (spin-boson)")
    parser.add_argument("--omega", type=float, default=1.0, help="Level splitting Omega")
    parser.add_argument("--coupling", type=float, default=0.3, help="Exchange coupling g")
    parser.add_argument("--energies", help="Comma-separated energies E0,E1,E2 for three-level")
    parser.add_argument("--gamma-plus", type=float, default=1.0, help="Two-level downward rate")
    parser.add_argument("--gamma-minus", type=float, default=0.2, help="Two-level upward rate")
    parser.add_argument("--dephasing", type=float, default=0.0, help="Two-level gamma_0")
    parser.add_argument("--beta", type=float, default=1.0, help="Inverse temperature ('inf' allowed)")
    parser.add_argument("--dephasing-coupling", type=float, default=0.0,
                        help="Ohmic strength of the sigma_z coupling (spin-boson)")
    parser.add_argument("--omega-c", type=float, default=10.0, help="Ohmic cutoff frequency")


def add_common_arguments(parser, dump_model: bool = True):
    parser.add_argument("--out", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=0, help="Seed for random states and models")
    parser.add_argument("--tol-override", action="append", default=[], metavar="KEY=VALUE",
                        help="Override a tolerance, e.g. trace=1e-10")
    if dump_model:
        parser.add_argument("--dump-model", action="store_true",
                            help="Print the resolved model JSON and exit")


def add_state_arguments(parser):
    parser.add_argument("--rho0", choices=STATE_PRESETS + ("file",), default="excited")
    parser.add_argument("--rho0-file", help="JSON file of [re, im] pairs, used with --rho0 file")


def read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from exc


def parse_model(payload) -> LoadedModel:
    """Validate a JSON payload against the model schema."""
    serializer = LindbladModelSerializer(data=payload)
    if not serializer.is_valid():
        raise SchemaError(f"model schema error: {json.dumps(serializer.errors)}")
    spectral = serializer.validated_data.get("spectral")
    beta = None
    if spectral is not None:
        beta = spectral.get("beta")
        beta = math.inf if beta is None else beta
    return LoadedModel(model=serializer.save(), source="file", beta=beta)


def _preset_model(options) -> LoadedModel:
    preset = options["preset"]
    if preset == "three-level":
        if options.get("energies"):
            energies = parse_floats(options["energies"])
            if len(energies) != 3:
                raise SchemaError("--energies needs exactly three values")
        else:
            energies = [-options["omega"], options["coupling"], options["omega"]]
        return LoadedModel(three_level_model(*energies, options["gamma"]), preset, math.inf)
    if preset == "two-level":
        params = TwoLevelParams(options["omega"], options["gamma_plus"],
                                options["gamma_minus"], options["dephasing"])
        return LoadedModel(two_level_model(params), preset)
    if preset == "spin-boson":
        spectral_1 = SpectralFunction("flat", options["gamma"])
        spectral_0 = SpectralFunction("ohmic", options["dephasing_coupling"], options["omega_c"])
        model = spin_boson_model(options["omega"], spectral_0, spectral_1, options["beta"])
        return LoadedModel(model, preset, options["beta"])
    spectral = SpectralFunction("flat", options["gamma"] / 2)
    return LoadedModel(two_qubit_triplet_model(options["omega"], options["coupling"], spectral),
                       preset, math.inf)


def load_model(options, tolerances: Tolerances) -> LoadedModel:
    """Resolve --model/--preset and validate the result."""
    if options.get("model"):
        loaded = parse_model(read_json(options["model"]))
    else:
        try:
            loaded = _preset_model(options)
        except ModelValidationError:
            raise
        except ValueError as exc:
            raise SchemaError(f"preset {options['preset']}: {exc}") from exc
    ensure_valid(loaded.model, tolerances)
    logger.info("Loaded %s model with N=%d, channel set %s",
                loaded.source, loaded.model.dim, loaded.model.channel_set)
    return loaded


def load_state(options, dim: int) -> DensityMatrix:
    choice = options.get("rho0") or "excited"
    if choice == "excited":
        return basis_state(dim, dim - 1)
    if choice == "ground":
        return basis_state(dim, 0)
    if choice == "plus":
        return plus_state(dim)
    if not options.get("rho0_file"):
        raise SchemaError("--rho0 file needs --rho0-file")
    return parse_state(read_json(options["rho0_file"]), dim)


def parse_state(payload, dim: int) -> DensityMatrix:
    """A preset name or a matrix of [re, im] pairs."""
    if isinstance(payload, str):
        if payload not in STATE_PRESETS:
            raise SchemaError(f"unknown state preset {payload!r}")
        return load_state({"rho0": payload}, dim)
    field = DensityMatrixField()
    try:
        state = field.run_validation(payload)
    except serializers.ValidationError as exc:
        raise SchemaError(f"initial state: {exc.detail}") from exc
    if state.dim != dim:
        raise SchemaError(f"initial state has dimension {state.dim}, model has N={dim}")
    return state


def parse_floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise SchemaError(f"not a list of numbers: {text!r}") from exc


def parse_times(text: str) -> List[float]:
    """
    Parse 'start:stop:step' (endpoints inclusive within 1e-12), 't' or 't1,t2,...'.
    """
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SchemaError(f"time grid must be start:stop:step, got {text!r}")
        start, stop, step = parse_floats(",".join(parts))
        if step <= 0 or stop < start:
            raise SchemaError(f"invalid time grid {text!r}")
        count = int(math.floor((stop - start) / step + GRID_EPS)) + 1
        times = [start + k * step for k in range(count)]
    else:
        times = parse_floats(text)
    if not times or any(t < 0 or not math.isfinite(t) for t in times):
        raise SchemaError(f"times must be finite and non-negative, got {text!r}")
    return times


def parse_overrides(items: Sequence[str]) -> Dict[str, float]:
    overrides = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise SchemaError(f"tolerance override must be KEY=VALUE, got {item!r}")
        try:
            overrides[key.strip()] = float(value)
        except ValueError as exc:
            raise SchemaError(f"tolerance override {item!r} is not numeric") from exc
    return overrides


def tolerances_from_options(options) -> Tolerances:
    return conf.tolerances(parse_overrides(options.get("tol_override")))


def render_json(data) -> str:
    return JSONRenderer().render(data, renderer_context={"indent": 2}).decode("utf-8")


def write_csv(stream, header: Sequence[str], rows: Iterable[Sequence]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def matrix_columns(dim: int) -> List[str]:
    columns = []
    for i in range(dim):
        for j in range(dim):
            columns += [f"rho_{i}_{j}_re", f"rho_{i}_{j}_im"]
    return columns


def matrix_values(mat: np.ndarray) -> List[float]:
    values = []
    for z in np.asarray(mat).reshape(-1):
        values += [float(z.real), float(z.imag)]
    return values


@contextmanager
def exit_codes():
    """Translate domain errors into CommandError with the documented exit codes."""
    try:
        yield
    except SchemaError as exc:
        logger.error("Schema error: %s", exc)
        raise CommandError(str(exc), returncode=EXIT_SCHEMA)
    except ModelValidationError as exc:
        logger.error("Model validation failed: %s", exc.violations)
        raise CommandError(f"invalid model: {exc}", returncode=EXIT_INVALID_MODEL)
    except NonCompletelyPositiveError as exc:
        logger.error("Non-CP map: %s", exc)
        raise CommandError(str(exc), returncode=EXIT_NON_CP)
    except InvalidStateError as exc:
        logger.error("Solver output is not a density matrix: %s", exc)
        raise CommandError(str(exc), returncode=EXIT_CHECK_FAILED)
    except NumericalError as exc:
        logger.error("Numerical failure: %s", exc)
        raise CommandError(f"numerical failure: {exc}", returncode=EXIT_CHECK_FAILED)
    except LindKrausError as exc:
        logger.error("%s", exc)
        raise CommandError(str(exc), returncode=EXIT_SCHEMA)
    except ValueError as exc:
        logger.error("Rejected input: %s", exc)
        raise CommandError(str(exc), returncode=EXIT_SCHEMA)
