"""Command-line front door.

Subcommands: size, duration, power, curves, serve. Every command reads a
JSON config document, validates it fully before computing anything, and
exits with 0 on success, 2 on validation errors, 3 on computation
errors, 4 on an infeasible duration target and 5 on a port conflict.
Times are unit-agnostic: hazards, follow-up and accrual must simply use
one consistent time unit.
"""

from __future__ import annotations

import argparse
import json
import math
import socket
import sys

from . import __version__
from .config import (
    ConfigError,
    DomainError,
    parse_design,
    parse_grid,
    parse_hypothesis,
    parse_pilot,
    parse_trial,
)
from .design import (
    InfeasibleTargetError,
    NoObservableEventsError,
    required_sample_size,
    solve_followup_duration,
)
from .models import ModelPair
from .numerics import QuadratureError
from .simulator import (
    PilotSpec,
    TrialSpec,
    empirical_power,
    pilot_parameters,
    run_grid,
)

__all__ = ["main"]

CSV_HEADER = (
    "true_family,shape,scale0,phi,hypothesis,margin,alt_hr,formula_family,"
    "n_per_group,power,se,non_converged,replicates,seed"
)

_TOP_KEYS = {"design", "n_target", "power", "curves", "serve", "output"}


def _load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config", "top level must be an object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError("config", f"unknown keys: {sorted(unknown)}")
    return doc


def _require_section(doc: dict, key: str) -> dict:
    if key not in doc:
        raise ConfigError("config", f"missing required section {key!r}")
    return doc[key]


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    print(text)


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    if fmt == "csv":
        header = ",".join(report)
        row = ",".join(_csv_cell(value) for value in report.values())
        return f"{header}\n{row}"
    lines = [f"{key:>16}  {value}" for key, value in report.items()]
    return "\n".join(lines)


def cmd_size(doc: dict, args) -> int:
    design = parse_design(_require_section(doc, "design"))
    result = required_sample_size(design)
    report = {
        "n_per_group": result.n_per_group,
        "n_total": result.n_total,
        "e0": result.e0,
        "e1": result.e1,
        "ets": result.ets,
        "expected_events": result.expected_events,
    }
    _emit(_render(report, args.format), args.out)
    return 0


def cmd_duration(doc: dict, args) -> int:
    design = parse_design(_require_section(doc, "design"), require_followup=False)
    n_target = doc.get("n_target")
    if n_target is None:
        raise ConfigError("config.n_target", "missing required key for `duration`")
    if isinstance(n_target, bool) or not isinstance(n_target, (int, float)):
        raise ConfigError("config.n_target", f"expected a number, got {n_target!r}")
    followup = solve_followup_duration(float(n_target), design)
    report = {
        "followup": followup,
        "accrual_duration": design.window.accrual_duration,
        "total_duration": followup + design.window.accrual_duration,
        "n_target": float(n_target),
    }
    _emit(_render(report, args.format), args.out)
    return 0


def _power_section(doc: dict, args):
    section = _require_section(doc, "power")
    if not isinstance(section, dict):
        raise ConfigError("power", "expected an object")
    allowed = {
        "trial", "hypothesis", "alpha", "design_power", "formula_family",
        "replicates", "seed", "pilot", "use_true_params",
    }
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError("power", f"unknown keys: {sorted(unknown)}")
    if "trial" not in section or "hypothesis" not in section:
        missing = {"trial", "hypothesis"} - set(section)
        raise ConfigError("power", f"missing required keys: {sorted(missing)}")
    trial_doc = dict(section["trial"]) if isinstance(section["trial"], dict) else section["trial"]
    hypothesis = parse_hypothesis(section["hypothesis"], "power.hypothesis")
    alpha = section.get("alpha", 0.05)
    design_power = section.get("design_power", 0.8)
    replicates = args.replicates or section.get("replicates", 2000)
    seed = args.seed if args.seed is not None else section.get("seed", 0)
    use_true = args.true_params or bool(section.get("use_true_params", False))
    formula_family = section.get("formula_family")
    pilot = parse_pilot(section.get("pilot"), "power.pilot")
    return (trial_doc, hypothesis, float(alpha), float(design_power),
            int(replicates), int(seed), use_true, formula_family, pilot)


def cmd_power(doc: dict, args) -> int:
    (trial_doc, hypothesis, alpha, design_power, replicates, seed,
     use_true, formula_family, pilot) = _power_section(doc, args)

    sized_from = "explicit"
    if isinstance(trial_doc, dict) and trial_doc.get("n_per_group") is None:
        # size the trial first, from true or pilot-estimated parameters
        probe = dict(trial_doc)
        probe["n_per_group"] = 2
        spec_probe = parse_trial(probe, "power.trial")
        from .design import DesignInputs

        if use_true:
            sizing_control = spec_probe.models.control
            sized_from = "true_parameters"
        else:
            family = formula_family or spec_probe.models.family
            estimates = pilot_parameters(
                spec_probe.models, spec_probe.censor_hazard, spec_probe.window,
                pilot, spec_probe.accrual, families=(family,),
            )
            est = estimates[family]
            if not est.usable:
                raise NoObservableEventsError(
                    f"pilot estimation produced no usable {family} fits"
                )
            sizing_control = est.pair.control
            sized_from = f"pilot_{family}"
        pair = ModelPair.from_hazard_ratio(sizing_control, hypothesis.alt_hazard_ratio)
        design = DesignInputs(
            hypothesis=hypothesis,
            alpha=alpha,
            power=design_power,
            window=spec_probe.window,
            censor_hazard=spec_probe.censor_hazard,
            models=pair,
            accrual=spec_probe.accrual,
        )
        trial_doc = dict(trial_doc)
        trial_doc["n_per_group"] = required_sample_size(design).n_per_group

    spec = parse_trial(trial_doc, "power.trial")
    estimate = empirical_power(
        spec, hypothesis, alpha=alpha, replicates=replicates, master_seed=seed
    )
    report = {
        "n_per_group": spec.n_per_group,
        "sized_from": sized_from,
        "replicates": estimate.replicates,
        "rejections": estimate.rejections,
        "non_converged": estimate.non_converged,
        "power": estimate.power,
        "se": estimate.se,
        "seed": seed,
        "alpha": alpha,
    }
    _emit(_render(report, args.format), args.out)
    return 0


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                _csv_cell(v)
                for v in (
                    row.true_family, row.shape, row.scale0, row.phi,
                    row.hypothesis, row.margin, row.alt_hr, row.formula_family,
                    row.n_per_group, row.power, row.se, row.non_converged,
                    row.replicates, row.seed,
                )
            )
        )
    return "\n".join(lines)


def cmd_curves(doc: dict, args) -> int:
    section = _require_section(doc, "curves")
    if not isinstance(section, dict):
        raise ConfigError("curves", "expected an object")
    allowed = {
        "grid", "formula_families", "replicates", "seed", "alpha", "power",
        "pilot", "use_true_params",
    }
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError("curves", f"unknown keys: {sorted(unknown)}")
    if "grid" not in section:
        raise ConfigError("curves", "missing required keys: ['grid']")
    grid = parse_grid(section["grid"], "curves.grid")
    families = section.get("formula_families", ["exponential", "weibull", "gompertz"])
    if not isinstance(families, list) or not families:
        raise ConfigError("curves.formula_families", "expected a nonempty list")
    replicates = args.replicates or section.get("replicates", 2000)
    seed = args.seed if args.seed is not None else section.get("seed", 0)
    pilot = parse_pilot(section.get("pilot"), "curves.pilot")
    rows = run_grid(
        grid,
        families,
        int(replicates),
        int(seed),
        pilot,
        alpha=float(section.get("alpha", 0.05)),
        power=float(section.get("power", 0.8)),
        use_true_params=args.true_params or bool(section.get("use_true_params", False)),
    )
    _emit(rows_to_csv(rows), args.out)
    return 0


def cmd_serve(doc: dict, args) -> int:
    section = doc.get("serve", {})
    if not isinstance(section, dict):
        raise ConfigError("serve", "expected an object")
    unknown = set(section) - {"host", "port"}
    if unknown:
        raise ConfigError("serve", f"unknown keys: {sorted(unknown)}")
    host = args.addr or section.get("host", "127.0.0.1")
    port = int(section.get("port", 8710))
    if args.addr and ":" in args.addr:
        host, port_text = args.addr.rsplit(":", 1)
        port = int(port_text)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        print(f"error: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return 5
    finally:
        probe.close()

    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="info")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="survplan",
        description="Sample size and study duration for time-to-event trials.",
    )
    parser.add_argument("--version", action="version", version=f"survplan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("size", "required sample size for a design"),
        ("duration", "solve the follow-up duration for an enrollment target"),
        ("power", "empirical power by simulation"),
        ("curves", "power curves over a scenario grid (CSV)"),
        ("serve", "run the HTTP API"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to a JSON config document")
        cmd.add_argument("--seed", type=int, default=None, help="override the config seed")
        cmd.add_argument(
            "--replicates", type=int, default=None, help="override the replicate count"
        )
        cmd.add_argument("--out", default=None, help="also write the report to this path")
        cmd.add_argument(
            "--true-params",
            action="store_true",
            help="size from the true parameters instead of pilot estimates",
        )
        cmd.add_argument(
            "--format", choices=("table", "json", "csv"), default="table"
        )
        if name == "serve":
            cmd.add_argument("--addr", default=None, help="bind address host[:port]")
    return parser


_COMMANDS = {
    "size": cmd_size,
    "duration": cmd_duration,
    "power": cmd_power,
    "curves": cmd_curves,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        doc = _load_document(args.config)
        return _COMMANDS[args.command](doc, args)
    except (ConfigError, DomainError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleTargetError as exc:
        bound = "asymptotic lower bound" if exc.kind == "below" else "zero-follow-up upper bound"
        print(
            f"infeasible: {exc} (violated {bound}; solvable range "
            f"({exc.lower_bound:.6g}, {exc.upper_bound:.6g}))",
            file=sys.stderr,
        )
        return 4
    except (QuadratureError, NoObservableEventsError, ValueError, RuntimeError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
