"""Config-document parsing shared by the CLI and the HTTP service.

Documents are plain JSON-compatible dictionaries. Parsing is strict:
unknown keys are rejected, and every error carries the path of the
offending field. Two error classes separate *structural* problems
(missing/unknown keys, wrong types) from *domain* problems (values a
constructor rejects, e.g. a non-inferiority margin of 0.9); the service
maps them to 400 and 422 respectively, the CLI treats both as validation
failures.
"""

from __future__ import annotations

from typing import Any

from .design import DesignInputs, NonInferiority, Superiority
from .events import (
    FollowupWindow,
    TabulatedAccrual,
    TruncatedExponentialAccrual,
    UNIFORM_ACCRUAL,
)
from .models import Exponential, Gompertz, ModelPair, Weibull
from .simulator import FAMILIES, PilotSpec, ScenarioGrid, TrialSpec

__all__ = ["ConfigError", "DomainError", "parse_design", "parse_trial",
           "parse_grid", "parse_pilot", "parse_hypothesis"]


class ConfigError(ValueError):
    """Structural problem in a config document (schema violation)."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class DomainError(ValueError):
    """A structurally valid value was rejected by the domain layer."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _require_mapping(doc: Any, path: str) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError(path, f"expected an object, got {type(doc).__name__}")
    return doc


def _check_keys(doc: dict, path: str, allowed: set[str], required: set[str]):
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(path, f"unknown keys: {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise ConfigError(path, f"missing required keys: {sorted(missing)}")


def _number(doc: dict, path: str, key: str, default=None):
    if key not in doc:
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {value!r}")
    return float(value)


def _integer(doc: dict, path: str, key: str, default=None):
    if key not in doc:
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}", f"expected an integer, got {value!r}")
    return value


def _string(doc: dict, path: str, key: str, default=None):
    if key not in doc:
        return default
    value = doc[key]
    if not isinstance(value, str):
        raise ConfigError(f"{path}.{key}", f"expected a string, got {value!r}")
    return value


def _domain(path: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise DomainError(path, str(exc)) from exc


def parse_hypothesis(doc: Any, path: str = "hypothesis"):
    doc = _require_mapping(doc, path)
    kind = _string(doc, path, "type")
    if kind is None:
        raise ConfigError(path, "missing required keys: ['type']")
    if kind == "superiority":
        _check_keys(doc, path, {"type", "alt_hr"}, {"type", "alt_hr"})
        alt = _number(doc, path, "alt_hr")
        return _domain(path, Superiority, alt)
    if kind == "non_inferiority":
        _check_keys(doc, path, {"type", "margin", "alt_hr"}, {"type", "margin"})
        margin = _number(doc, path, "margin")
        alt = _number(doc, path, "alt_hr", 1.0)
        return _domain(path, NonInferiority, margin, alt)
    raise ConfigError(f"{path}.type", f"expected 'superiority' or 'non_inferiority', got {kind!r}")


def parse_accrual(doc: Any, path: str):
    if doc is None:
        return UNIFORM_ACCRUAL
    doc = _require_mapping(doc, path)
    kind = _string(doc, path, "type")
    if kind is None:
        raise ConfigError(path, "missing required keys: ['type']")
    if kind == "uniform":
        _check_keys(doc, path, {"type"}, {"type"})
        return UNIFORM_ACCRUAL
    if kind == "truncated_exponential":
        _check_keys(doc, path, {"type", "rate"}, {"type", "rate"})
        return _domain(path, TruncatedExponentialAccrual, _number(doc, path, "rate"))
    if kind == "tabulated":
        _check_keys(doc, path, {"type", "times", "density"}, {"type", "times", "density"})
        times, density = doc["times"], doc["density"]
        for key, seq in (("times", times), ("density", density)):
            if not isinstance(seq, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in seq
            ):
                raise ConfigError(f"{path}.{key}", "expected a list of numbers")
        return _domain(path, TabulatedAccrual, tuple(times), tuple(density))
    raise ConfigError(f"{path}.type", f"unknown accrual type {kind!r}")


def parse_model(doc: Any, path: str):
    """A control-arm model: family plus scale (and shape where it applies)."""
    doc = _require_mapping(doc, path)
    family = _string(doc, path, "family")
    if family is None:
        raise ConfigError(path, "missing required keys: ['family']")
    if family not in FAMILIES:
        raise ConfigError(f"{path}.family", f"expected one of {list(FAMILIES)}, got {family!r}")
    if family == "exponential":
        _check_keys(doc, path, {"family", "scale0"}, {"family", "scale0"})
        return _domain(path, Exponential, _number(doc, path, "scale0"))
    _check_keys(doc, path, {"family", "scale0", "shape"}, {"family", "scale0", "shape"})
    cls = Weibull if family == "weibull" else Gompertz
    return _domain(path, cls, _number(doc, path, "scale0"), _number(doc, path, "shape"))


def _censor(doc: dict, path: str):
    if "censor_hazard" not in doc:
        return 0.0
    value = doc["censor_hazard"]
    if isinstance(value, list):
        if len(value) != 2 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            raise ConfigError(f"{path}.censor_hazard", "expected a number or a pair of numbers")
        return (float(value[0]), float(value[1]))
    return _number(doc, path, "censor_hazard")


_DESIGN_KEYS = {
    "hypothesis", "alpha", "power", "followup", "accrual_duration",
    "censor_hazard", "accrual", "model",
}


def parse_design(doc: Any, path: str = "design", *, require_followup: bool = True) -> DesignInputs:
    """Build DesignInputs from a document.

    The experimental arm is derived by scaling the control model by the
    hypothesis' alternative hazard ratio. followup may be omitted only
    where the caller solves for it.
    """
    doc = _require_mapping(doc, path)
    required = {"hypothesis", "model", "accrual_duration"}
    if require_followup:
        required = required | {"followup"}
    _check_keys(doc, path, _DESIGN_KEYS, required)
    hypothesis = parse_hypothesis(doc["hypothesis"], f"{path}.hypothesis")
    control = parse_model(doc["model"], f"{path}.model")
    pair = _domain(
        f"{path}.model", ModelPair.from_hazard_ratio, control, hypothesis.alt_hazard_ratio
    )
    window = _domain(
        f"{path}.followup",
        FollowupWindow,
        _number(doc, path, "followup", 0.0),
        _number(doc, path, "accrual_duration"),
    )
    return _domain(
        path,
        DesignInputs,
        hypothesis=hypothesis,
        alpha=_number(doc, path, "alpha", 0.05),
        power=_number(doc, path, "power", 0.8),
        window=window,
        censor_hazard=_censor(doc, path),
        models=pair,
        accrual=parse_accrual(doc.get("accrual"), f"{path}.accrual"),
    )


_TRIAL_KEYS = {
    "n_per_group", "model", "hazard_ratio", "censor_hazard",
    "followup", "accrual_duration", "accrual",
}


def parse_trial(doc: Any, path: str = "trial") -> TrialSpec:
    """A trial generator: true control model, true hazard ratio, window."""
    doc = _require_mapping(doc, path)
    _check_keys(doc, path, _TRIAL_KEYS,
                {"n_per_group", "model", "followup", "accrual_duration"})
    control = parse_model(doc["model"], f"{path}.model")
    ratio = _number(doc, path, "hazard_ratio", 1.0)
    pair = _domain(f"{path}.hazard_ratio", ModelPair.from_hazard_ratio, control, ratio)
    window = _domain(
        f"{path}.followup",
        FollowupWindow,
        _number(doc, path, "followup"),
        _number(doc, path, "accrual_duration"),
    )
    n = _integer(doc, path, "n_per_group")
    return _domain(
        path,
        TrialSpec,
        n_per_group=n,
        models=pair,
        censor_hazard=_censor(doc, path),
        window=window,
        accrual=parse_accrual(doc.get("accrual"), f"{path}.accrual"),
    )


def parse_pilot(doc: Any, path: str = "pilot") -> PilotSpec:
    if doc is None:
        return PilotSpec()
    doc = _require_mapping(doc, path)
    _check_keys(doc, path, {"n_trials", "n_subjects", "seed"}, set())
    return _domain(
        path,
        PilotSpec,
        n_trials=_integer(doc, path, "n_trials", 20),
        n_subjects=_integer(doc, path, "n_subjects", 50),
        seed=_integer(doc, path, "seed", 0),
    )


_GRID_KEYS = {
    "true_family", "shapes", "scales", "censor_hazards",
    "followup", "accrual_duration", "hypotheses", "accrual",
}


def parse_grid(doc: Any, path: str = "grid") -> ScenarioGrid:
    doc = _require_mapping(doc, path)
    _check_keys(
        doc, path, _GRID_KEYS,
        {"true_family", "scales", "censor_hazards", "followup",
         "accrual_duration", "hypotheses"},
    )
    family = _string(doc, path, "true_family")
    shapes = doc.get("shapes", [1.0] if family == "exponential" else None)
    if shapes is None:
        raise ConfigError(f"{path}.shapes", "required for non-exponential families")
    for key in ("shapes", "scales", "censor_hazards"):
        seq = doc.get(key, shapes if key == "shapes" else None)
        if not isinstance(seq, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in seq
        ):
            if key == "shapes" and "shapes" not in doc:
                continue
            raise ConfigError(f"{path}.{key}", "expected a list of numbers")
    hyps = doc["hypotheses"]
    if not isinstance(hyps, list) or not hyps:
        raise ConfigError(f"{path}.hypotheses", "expected a nonempty list")
    hypotheses = tuple(
        parse_hypothesis(h, f"{path}.hypotheses[{i}]") for i, h in enumerate(hyps)
    )
    window = _domain(
        f"{path}.followup",
        FollowupWindow,
        _number(doc, path, "followup"),
        _number(doc, path, "accrual_duration"),
    )
    return _domain(
        path,
        ScenarioGrid,
        family=family,
        shapes=tuple(float(s) for s in shapes),
        scales=tuple(float(s) for s in doc["scales"]),
        censor_hazards=tuple(float(p) for p in doc["censor_hazards"]),
        window=window,
        hypotheses=hypotheses,
        accrual=parse_accrual(doc.get("accrual"), f"{path}.accrual"),
    )
