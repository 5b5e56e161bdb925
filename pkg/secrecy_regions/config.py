"""
Run configuration: line-oriented `key=value` text with `#` comments.

Values are first coerced to JSON-compatible types, then the whole document is
validated against `CONFIG_SCHEMA` and every problem is reported at once.
"""

import re
from collections.abc import Callable
from dataclasses import dataclass, fields
from enum import StrEnum
from typing import Any, Literal

import numpy as np
from jsonschema import Draft202012Validator

from .channels import CHANNEL_REGISTRY, WiretapChannel, make_channel
from .ensembles import Ensemble, beta_ensemble, custom_ensemble
from .errors import ConfigError, SecrecyError
from .rate_regions import DEFAULT_BETA_POINTS, DEFAULT_R_FLOOR, Model, default_beta_grid


class Command(StrEnum):
    REGION = "region"
    SWEEP = "sweep"
    COVERING = "covering"
    PERMUTATION = "permutation"


ModelChoice = Literal["interception", "passive", "both"]
KeyCount = int | Literal["full"]

ENCODER_KEY = re.compile(r"^encoder\.(\d+)$")
# alternative spellings of the built-in β family
ENSEMBLE_ALIASES = {"paper_iv_c": "beta"}


@dataclass(kw_only=True, frozen=True)
class RunConfig:
    command: Command
    # channel
    channel: str = "amplitude_damping"
    gamma: float = 0.3
    gamma_grid: tuple[float, ...] = (0.1, 0.3, 0.5)
    # ensemble
    ensemble: Literal["beta", "custom"] = "beta"
    beta: float = 1.0
    beta_points: int = DEFAULT_BETA_POINTS
    beta_grid: tuple[float, ...] | None = None
    p_x: tuple[float, ...] | None = None
    phi: tuple[complex, ...] | None = None
    phi_dims: tuple[int, int] | None = None
    encoders: tuple[tuple[tuple[complex, ...], ...], ...] | None = None
    # region
    model: ModelChoice = "both"
    r_floor: float = DEFAULT_R_FLOOR
    t_points: int = 101
    # covering
    n: int = 3
    rate: float = 0.0
    r0_grid: tuple[float, ...] = (0.0, 0.5, 1.0, 1.5, 2.0)
    seed: int = 0
    repetitions: int = 100
    key_counts: tuple[KeyCount, ...] = (1, 4, 16, "full")
    x_n: tuple[int, ...] = (0, 0)
    # permutation
    lam: float = 0.05
    perm_n: int = 4
    perm_rate: float = 1.0
    messages: int = 64
    excess_messages: int = 64
    spikes: int = 8
    fixtures: int = 20
    retry_budget: int = 100
    errors_path: str | None = None
    # guards
    max_n: int = 6
    max_codewords: int = 2**16
    max_exhaustive_keys: int = 2**14
    zeta_samples: int = 4096

    @property
    def models(self) -> tuple[Model, ...]:
        if self.model == "both":
            return (Model.INTERCEPTION, Model.PASSIVE)
        return (Model(self.model),)

    @property
    def seeds(self) -> tuple[int, ...]:
        return tuple(range(self.seed, self.seed + self.repetitions))

    def beta_values(self) -> list[float]:
        if self.ensemble == "custom":
            return [0.0]
        if self.beta_grid is not None:
            return list(self.beta_grid)
        return default_beta_grid(self.beta_points)

    def build_channel(self, gamma: float | None = None) -> WiretapChannel:
        return make_channel(self.channel, gamma=self.gamma if gamma is None else gamma)

    def ensemble_factory(self) -> Callable[[float], Ensemble]:
        if self.ensemble == "beta":
            return beta_ensemble
        ensemble = custom_ensemble(
            p_x=self.p_x,
            phi=self.phi,
            encoders=[np.array(f, dtype=np.complex128) for f in self.encoders],
            phi_dims=self.phi_dims,
        )
        return lambda _: ensemble


_unit = {"type": "number", "minimum": 0.0, "maximum": 1.0}
_positive_int = {"type": "integer", "minimum": 1}
_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command"],
    "properties": {
        "command": {"enum": [c.value for c in Command]},
        "channel": {"enum": sorted(CHANNEL_REGISTRY)},
        "gamma": _unit,
        "gamma_grid": {"type": "array", "items": _unit, "minItems": 1},
        "ensemble": {"enum": ["beta", "custom", *ENSEMBLE_ALIASES]},
        "beta": _unit,
        "beta_points": _positive_int,
        "beta_grid": {"type": "array", "items": _unit, "minItems": 1},
        "p_x": {"type": "array", "items": {"type": "number", "minimum": 0.0}, "minItems": 1},
        "phi": {"type": "array", "items": _complex, "minItems": 1},
        "phi_dims": {"type": "array", "items": _positive_int, "minItems": 2, "maxItems": 2},
        "model": {"enum": ["interception", "passive", "both"]},
        "r_floor": {"type": "number", "minimum": 0.0},
        "t_points": {"type": "integer", "minimum": 2},
        "n": _positive_int,
        "rate": {"type": "number", "minimum": 0.0},
        "r0_grid": {"type": "array", "items": {"type": "number", "minimum": 0.0}, "minItems": 1},
        "seed": {"type": "integer", "minimum": 0},
        "repetitions": _positive_int,
        "key_counts": {
            "type": "array",
            "items": {"anyOf": [_positive_int, {"const": "full"}]},
            "minItems": 1,
        },
        "x_n": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
        "lam": {"type": "number", "exclusiveMinimum": 0.0, "exclusiveMaximum": 1.0},
        "perm_n": _positive_int,
        "perm_rate": {"type": "number", "minimum": 0.0},
        "messages": _positive_int,
        "excess_messages": _positive_int,
        "spikes": _positive_int,
        "fixtures": _positive_int,
        "retry_budget": _positive_int,
        "errors_path": {"type": "string", "minLength": 1},
        "max_n": {"type": "integer", "minimum": 1, "maximum": 8},
        "max_codewords": _positive_int,
        "max_exhaustive_keys": _positive_int,
        "zeta_samples": _positive_int,
    },
    "patternProperties": {
        ENCODER_KEY.pattern: {
            "type": "array",
            "items": {"type": "array", "items": _complex, "minItems": 1},
            "minItems": 1,
        },
    },
    "additionalProperties": False,
}

_VALIDATOR = Draft202012Validator(CONFIG_SCHEMA)


def _float(text: str) -> float:
    value = float(text)
    if not np.isfinite(value):
        raise ValueError("value must be finite")
    return value


def _floats(text: str) -> list[float]:
    return [_float(s) for s in text.split(",") if s.strip()]


def _ints(text: str) -> list[int]:
    return [int(s) for s in text.split(",") if s.strip()]


def _complex_pair(text: str) -> list[float]:
    z = complex(text.strip().replace(" ", ""))
    return [z.real, z.imag]


def _complexes(text: str) -> list[list[float]]:
    return [_complex_pair(s) for s in text.split(",") if s.strip()]


def _matrix(text: str) -> list[list[list[float]]]:
    return [_complexes(row) for row in text.split(";") if row.strip()]


def _key_counts(text: str) -> list[int | str]:
    return [s.strip() if s.strip() == "full" else int(s) for s in text.split(",") if s.strip()]


_COERCERS: dict[str, Callable[[str], Any]] = {
    "gamma": _float,
    "gamma_grid": _floats,
    "beta": _float,
    "beta_points": int,
    "beta_grid": _floats,
    "p_x": _floats,
    "phi": _complexes,
    "phi_dims": _ints,
    "r_floor": _float,
    "t_points": int,
    "n": int,
    "rate": _float,
    "r0_grid": _floats,
    "seed": int,
    "repetitions": int,
    "key_counts": _key_counts,
    "x_n": _ints,
    "lam": _float,
    "perm_n": int,
    "perm_rate": _float,
    "messages": int,
    "excess_messages": int,
    "spikes": int,
    "fixtures": int,
    "retry_budget": int,
    "max_n": int,
    "max_codewords": int,
    "max_exhaustive_keys": int,
    "zeta_samples": int,
}


def _coercer(key: str) -> Callable[[str], Any]:
    if ENCODER_KEY.match(key):
        return _matrix
    return _COERCERS.get(key, str)


def _segments(line: str) -> list[str]:
    # `;` separates settings on one line, except inside encoder matrices where it separates rows
    if ENCODER_KEY.match(line.partition("=")[0].strip()):
        return [line]
    return [s.strip() for s in line.split(";") if s.strip()]


def _read_lines(text: str, problems: list[str]) -> dict[str, str]:
    raw: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for segment in _segments(line):
            key, sep, value = segment.partition("=")
            key = key.strip()
            if not sep or not key:
                problems.append(f"line {number}: expected key=value, got {segment!r}")
                continue
            if key in raw:
                problems.append(f"{key}: duplicate key (line {number})")
                continue
            raw[key] = value.strip()
    return raw


def _schema_problems(document: dict[str, Any]) -> list[str]:
    problems = []
    for error in _VALIDATOR.iter_errors(document):
        if error.validator == "additionalProperties":
            known = CONFIG_SCHEMA["properties"]
            problems.extend(
                f"{key}: unknown key" for key in document if key not in known and not ENCODER_KEY.match(key)
            )
        elif error.path:
            problems.append(f"{error.path[0]}: {error.message}")
        else:
            problems.append(error.message)
    return problems


def _cross_field_problems(document: dict[str, Any]) -> list[str]:
    problems = []
    encoder_keys = sorted((k for k in document if ENCODER_KEY.match(k)), key=lambda k: int(k.split(".")[1]))
    if document.get("ensemble") == "custom":
        for key in ("p_x", "phi"):
            if key not in document:
                problems.append(f"{key}: required when ensemble=custom")
        if "p_x" in document:
            expected = [f"encoder.{i}" for i in range(len(document["p_x"]))]
            if encoder_keys != expected:
                problems.append(f"encoders: expected keys {', '.join(expected)}, got {', '.join(encoder_keys) or 'none'}")
            if abs(sum(document["p_x"]) - 1.0) > 1e-12:
                problems.append("p_x: probabilities must sum to 1")
    elif encoder_keys or any(k in document for k in ("p_x", "phi", "phi_dims")):
        problems.append("ensemble: custom ensemble keys given but ensemble is not custom")
    max_n = document.get("max_n", RunConfig.max_n)
    if document.get("n", RunConfig.n) > max_n:
        problems.append(f"n: {document.get('n', RunConfig.n)} exceeds max_n={max_n}")
    if len(document.get("x_n", RunConfig.x_n)) > max_n:
        problems.append(f"x_n: length exceeds max_n={max_n}")
    return problems


def _to_complex(pairs: list[list[float]]) -> tuple[complex, ...]:
    return tuple(complex(re_, im) for re_, im in pairs)


def parse_config(text: str, command: Command | str | None = None) -> RunConfig:
    """
    Parse and validate a configuration. `command`, when given (from the
    command line), fills in a missing `command` key and must agree with a
    present one.
    """
    problems: list[str] = []
    raw = _read_lines(text, problems)
    if command is not None:
        command = Command(command)
        if "command" not in raw:
            raw["command"] = command.value
        elif raw["command"] != command.value:
            problems.append(f"command: config says {raw['command']!r} but {command.value!r} was requested")

    document: dict[str, Any] = {}
    for key, value in raw.items():
        try:
            document[key] = _coercer(key)(value)
        except ValueError as e:
            problems.append(f"{key}: type mismatch for {value!r} ({e})")

    schema_problems = _schema_problems(document)
    problems.extend(schema_problems)
    if not schema_problems:
        problems.extend(_cross_field_problems(document))
    if problems:
        raise ConfigError(problems)

    encoder_keys = sorted((k for k in document if ENCODER_KEY.match(k)), key=lambda k: int(k.split(".")[1]))
    values: dict[str, Any] = {}
    for key, value in document.items():
        if ENCODER_KEY.match(key):
            continue
        if key == "phi":
            values[key] = _to_complex(value)
        elif isinstance(value, list):
            values[key] = tuple(value)
        else:
            values[key] = value
    values["command"] = Command(values["command"])
    if "ensemble" in values:
        values["ensemble"] = ENSEMBLE_ALIASES.get(values["ensemble"], values["ensemble"])
    if encoder_keys:
        values["encoders"] = tuple(tuple(_to_complex(row) for row in document[k]) for k in encoder_keys)

    config = RunConfig(**values)
    if config.ensemble == "custom":
        try:
            config.ensemble_factory()
        except SecrecyError as e:
            raise ConfigError([f"ensemble: {e.message}"]) from e
        except ValueError as e:
            raise ConfigError([f"ensemble: {e}"]) from e
    return config


def _render(value: Any) -> str:
    if isinstance(value, complex):
        return repr(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return ";".join(_render(row) for row in value)
        return ",".join(_render(v) for v in value)
    return str(value)


def serialize_config(config: RunConfig) -> str:
    """Every set field in declaration order; parse_config reads it back to an equal config."""
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if value is None:
            continue
        if f.name == "encoders":
            lines.extend(f"encoder.{i}={_render(matrix)}" for i, matrix in enumerate(value))
            continue
        lines.append(f"{f.name}={_render(value)}")
    return "\n".join(lines) + "\n"
