"""Flat ``key=value`` scenario configuration files."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..bounds import DEFAULT_SAMPLES, WitnessStrategy
from ..errors import EdrError, ParseError, ValidationError
from ..model import FIG3_LAMBDA, SCENARIOS, MeasurementModel

KNOWN_KEYS = (
    "scenario", "theta_count", "theta", "phi", "lambda",
    "witness.kind", "witness.samples", "witness.state",
    "seed", "output_path",
    "a.entries", "b.entries", "m.entries", "u.entries",
    "psi.amplitudes", "phi_p.amplitudes",
)
_CUSTOM_KEYS = ("a.entries", "b.entries", "m.entries", "u.entries", "psi.amplitudes", "phi_p.amplitudes")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "fig2"
    theta_count: int = 10000
    theta: float = 0.0
    phi: float = 0.0
    lam: float = FIG3_LAMBDA
    witness: WitnessStrategy = field(default_factory=WitnessStrategy)
    seed: int = 0
    output_path: Optional[str] = None
    custom_model: Optional[MeasurementModel] = field(default=None, repr=False, compare=False)


def parse_complex_list(text: str, key: str) -> np.ndarray:
    """Comma-separated numbers read as consecutive (re, im) pairs."""
    try:
        values = [float(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise ValidationError(key, f"not a list of numbers ({exc})") from None
    if not values or len(values) % 2:
        raise ValidationError(key, "expected a nonempty list of (re, im) pairs")
    pairs = np.asarray(values).reshape(-1, 2)
    return pairs[:, 0] + 1j * pairs[:, 1]


def parse_matrix(text: str, key: str) -> np.ndarray:
    flat = parse_complex_list(text, key)
    d = math.isqrt(flat.size)
    if d * d != flat.size:
        raise ValidationError(key, f"{flat.size} entries do not form a square matrix")
    return flat.reshape(d, d)


def _parse_lines(text: str) -> dict:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(lineno, f"expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ParseError(lineno, "empty key")
        if key in raw:
            raise ParseError(lineno, f"duplicate key {key!r}")
        raw[key] = value
    return raw


def _number(raw, key, kind, default):
    if key not in raw:
        return default
    try:
        return kind(raw[key])
    except ValueError:
        raise ValidationError(key, f"cannot parse {raw[key]!r} as {kind.__name__}") from None


def parse_config(text: str) -> ScenarioConfig:
    raw = _parse_lines(text)
    for key in raw:
        if key not in KNOWN_KEYS:
            raise ValidationError(key, "unknown key")

    scenario = raw.get("scenario", "fig2")
    if scenario not in SCENARIOS + ("custom",):
        raise ValidationError("scenario", f"expected one of {SCENARIOS + ('custom',)}")
    theta_count = _number(raw, "theta_count", int, 10000)
    if theta_count < 1:
        raise ValidationError("theta_count", "must be >= 1")
    seed = _number(raw, "seed", int, 0)

    kind = raw.get("witness.kind", "sampled")
    samples = _number(raw, "witness.samples", int, DEFAULT_SAMPLES)
    try:
        if kind == "sampled":
            witness = WitnessStrategy.sampled(samples, seed)
        elif kind == "optimal":
            witness = WitnessStrategy.optimal()
        elif kind == "explicit":
            if "witness.state" not in raw:
                raise ValidationError("witness.state", "required for witness.kind=explicit")
            witness = WitnessStrategy.explicit(parse_complex_list(raw["witness.state"], "witness.state"))
        else:
            raise ValidationError("witness.kind", f"unknown witness kind {kind!r}")
    except ValidationError:
        raise
    except (EdrError, ValueError) as exc:
        field_name = "witness.samples" if kind == "sampled" else "witness.state"
        raise ValidationError(field_name, str(exc)) from None

    custom = None
    if scenario == "custom":
        missing = [k for k in _CUSTOM_KEYS if k not in raw]
        if missing:
            raise ValidationError(missing[0], "required for scenario=custom")
        try:
            custom = MeasurementModel(
                system_state=parse_complex_list(raw["psi.amplitudes"], "psi.amplitudes"),
                probe_state=parse_complex_list(raw["phi_p.amplitudes"], "phi_p.amplitudes"),
                observable_a=parse_matrix(raw["a.entries"], "a.entries"),
                observable_b=parse_matrix(raw["b.entries"], "b.entries"),
                estimator_m=parse_matrix(raw["m.entries"], "m.entries"),
                coupling=parse_matrix(raw["u.entries"], "u.entries"),
            )
        except ValidationError:
            raise
        except (EdrError, ValueError) as exc:
            raise ValidationError("custom", str(exc)) from None

    return ScenarioConfig(
        scenario=scenario,
        theta_count=theta_count,
        theta=_number(raw, "theta", float, 0.0),
        phi=_number(raw, "phi", float, 0.0),
        lam=_number(raw, "lambda", float, FIG3_LAMBDA),
        witness=witness,
        seed=seed,
        output_path=raw.get("output_path"),
        custom_model=custom,
    )


def load_config(path) -> ScenarioConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
