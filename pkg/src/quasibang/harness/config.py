"""Experiment configuration: JSON schema validation and defaults."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from ..funcmodel import IntervalSet, model_from_dict
from ..sequences import Generator
from .suites import SUITE_NAMES

SCHEMA_VERSION = 1
DEFAULTS = {
    "schema_version": SCHEMA_VERSION,
    "J": 200,
    "functions": [],
    "interval_sets": [],
    "random_sets": {"count": 100, "max_components": 4, "min_measure": 0.05},
    "random_polynomials": 200,
    "random_sequences": 500,
    "propagation_sets": 5,
    "seed": 0,
    "spacing": 1e-3,
    "tolerances": {"residual": 1e-9},
    "variant": "standard",
}


class ConfigError(Exception):
    """Invalid configuration; ``pointer`` is the JSON pointer of the culprit."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def load_schema() -> dict:
    text = resources.files("quasibang.harness").joinpath("config_schema.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class ExperimentConfig:
    generator: Generator
    J: int
    functions: tuple
    interval_sets: tuple
    random_sets: dict
    random_polynomials: int
    random_sequences: int
    propagation_sets: int
    seed: int
    suites: tuple
    spacing: float
    tolerances: dict
    variant: str
    raw: dict


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _merge_defaults(raw: dict) -> dict:
    out = copy.deepcopy(DEFAULTS)
    for key, value in raw.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = {**out[key], **value}
        else:
            out[key] = value
    return out


def parse_config(raw) -> ExperimentConfig:
    """Validate a config mapping and fill in defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    validator = jsonschema.Draft202012Validator(load_schema())
    error = jsonschema.exceptions.best_match(validator.iter_errors(raw))
    if error is not None:
        raise ConfigError(error.message, _pointer(error.absolute_path))
    unknown = [s for s in raw["suites"] if s not in SUITE_NAMES]
    if unknown:
        raise ConfigError(f"unknown suite {unknown[0]!r}", "/suites")
    full = _merge_defaults(raw)
    try:
        gen = Generator.from_dict(full["generator"])
    except ValueError as exc:
        raise ConfigError(f"Generator invariant violated: {exc}", "/generator") from None
    functions = []
    for i, spec in enumerate(full["functions"]):
        try:
            functions.append(model_from_dict(spec))
        except ValueError as exc:
            raise ConfigError(str(exc), f"/functions/{i}") from None
    sets = []
    for i, spec in enumerate(full["interval_sets"]):
        try:
            sets.append(IntervalSet.from_dict(spec))
        except ValueError as exc:
            raise ConfigError(str(exc), f"/interval_sets/{i}") from None
    rs = full["random_sets"]
    return ExperimentConfig(
        generator=gen,
        J=full["J"],
        functions=tuple(functions),
        interval_sets=tuple(sets),
        random_sets=dict(rs),
        random_polynomials=full["random_polynomials"],
        random_sequences=full["random_sequences"],
        propagation_sets=full["propagation_sets"],
        seed=full["seed"],
        suites=tuple(full["suites"]),
        spacing=float(full["spacing"]),
        tolerances=dict(full["tolerances"]),
        variant=full["variant"],
        raw=full,
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc.msg} at line {exc.lineno}") from None
    return parse_config(raw)
