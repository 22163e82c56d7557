"""Command-line surface tying the engine together.

Subcommands: validate, query, population-query, bounds, benefit,
simulate, stats.  Exit code 0 on success, 1 on a domain error (the
originating error name is preserved in the output), 2 on usage errors.
``--format json`` emits machine-readable reports carrying every field
at full double precision; text mode prints probabilities with 12
significant digits.  The DISCO_SEED environment variable overrides
``--seed`` for all simulate commands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from .bounds import (
    mediator_pns_upper,
    pn_bounds,
    pns_bounds,
    pns_point_icn,
    poc_worlds,
    stats_from_rct,
    unit_stats,
)
from .engine import conditional, layer1, layer2, population_query
from .errors import (
    DiscoError,
    ModelSyntaxError,
    OutOfDomainError,
    TypeMismatchError,
    UnknownVariableError,
)
from .model import DiscoModel, validate_model
from .modelfile import load_dataset, parse_model_file
from .rational import format_prob
from .selection import BenefitSpec, evaluate_benefit
from .simulate import (
    CORRELATED,
    DEFAULT_RHO,
    Example2Params,
    GaussianCouplingSpec,
    cross_world_csv,
    gen_example2,
    rct_csv,
    rct_table,
    read_cross_world_csv,
    sample_cross_world,
)
from .worlds import (
    EXPLICIT,
    INDEPENDENT,
    SHARED,
    World,
    do,
    factual_world,
    make_coupling,
)


def _parse_value(model: DiscoModel, name: str, raw: str):
    var = model.variables_by_name.get(name)
    if var is None:
        raise UnknownVariableError(f"unknown variable {name!r}")
    candidates = [raw]
    try:
        candidates.insert(0, int(raw))
    except ValueError:
        pass
    for candidate in candidates:
        if candidate in var.domain:
            return candidate
    raise OutOfDomainError(
        f"value {raw!r} is outside the domain of {name!r}")


def _parse_assignment(model: DiscoModel, item: str) -> tuple:
    if "=" not in item:
        raise TypeMismatchError(f"expected VAR=VALUE, got {item!r}")
    name, _, raw = item.partition("=")
    name = name.strip()
    return name, _parse_value(model, name, raw.strip())


def _parse_event(model: DiscoModel, text: str) -> dict:
    event = {}
    for item in text.split(","):
        item = item.strip()
        if item:
            name, value = _parse_assignment(model, item)
            event[name] = value
    return event


def _parse_scalar(model: DiscoModel, raw: str, default_var: str) -> tuple:
    """A --t/--y argument: bare value, or VAR=VALUE to pick the variable."""
    if "=" in raw:
        return _parse_assignment(model, raw)
    return default_var, _parse_value(model, default_var, raw)


def _load_coupling_file(path: str, worlds, model) -> "object":
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ModelSyntaxError(
                f"invalid coupling JSON at line {exc.lineno}, column "
                f"{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or data.get("schema") != 1:
        raise TypeMismatchError(
            "coupling files must be objects with \"schema\": 1")
    noises = data.get("noises", {})
    joint = {}
    try:
        for name, rows in noises.items():
            table = {}
            for row in rows:
                table[tuple(row["values"])] = row["p"]
            joint[name] = table
    except (KeyError, TypeError) as exc:
        raise TypeMismatchError(
            f"malformed coupling table: {exc}") from exc
    return make_coupling(EXPLICIT, worlds, model, joint=joint)


def _coupling_for(model: DiscoModel, worlds, kind: Optional[str]):
    if kind is None or kind == INDEPENDENT:
        return make_coupling(INDEPENDENT, worlds, model)
    if kind == SHARED:
        return make_coupling(SHARED, worlds, model)
    return _load_coupling_file(kind, worlds, model)


def _jsonable(value):
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(_jsonable(payload)))
        return
    for key, value in payload.items():
        if isinstance(value, (Fraction, float)):
            print(f"{key} {format_prob(value)}")
        elif isinstance(value, (list, tuple)):
            inner = ", ".join(
                format_prob(v) if isinstance(v, (Fraction, float)) else str(v)
                for v in value)
            print(f"{key} [{inner}]")
        elif isinstance(value, dict):
            for sub, item in value.items():
                if isinstance(item, (Fraction, float)):
                    print(f"{key}.{sub} {format_prob(item)}")
                else:
                    print(f"{key}.{sub} {item}")
        else:
            print(f"{key} {value}")


def _load_model_arg(path: str) -> DiscoModel:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_model_file(handle.read()).build()


class DiscoErrorWithReport(DiscoError):
    """Validation failure carrying the full issue list."""

    def __init__(self, code: str, message: str, report):
        super().__init__(message)
        self.code = code
        self.report = report


def _cmd_validate(args) -> dict:
    with open(args.model, "r", encoding="utf-8") as handle:
        text = handle.read()
    document = parse_model_file(text)
    report = validate_model(document.data)
    if not report.ok:
        first = report.issues[0]
        raise DiscoErrorWithReport(first.code, first.message, report)
    return {"ok": True, "model": args.model}


def _parse_multi(model: DiscoModel, items) -> dict:
    merged: dict = {}
    for item in items or []:
        merged.update(_parse_event(model, item))
    return merged


def _cmd_query(args) -> dict:
    model = _load_model_arg(args.model)
    unit = _resolve_unit(model, args.unit)
    event = _parse_event(model, args.event)
    assignments = _parse_multi(model, args.do)
    given = _parse_multi(model, args.given)

    d = factual_world(0)
    if assignments:
        target_world = World(1, do(assignments))
        worlds = [d, target_world]
    else:
        target_world = d
        worlds = [d]

    if given:
        coupling = _coupling_for(model, worlds, args.coupling)
        from .worlds import single_world_event

        value = conditional(
            model, unit, coupling,
            single_world_event(target_world.id, event),
            single_world_event(d.id, given))
    elif assignments:
        value = layer2(model, unit, target_world, event)
    else:
        value = layer1(model, unit, event)
    return {"probability": value}


def _resolve_unit(model: DiscoModel, raw: Optional[str]):
    if raw is None:
        raise TypeMismatchError("--unit is required")
    for unit in model.prior.units:
        if unit == raw or str(unit) == raw:
            return unit
    raise UnknownVariableError(f"unknown unit {raw!r}")


def _cmd_population_query(args) -> dict:
    model = _load_model_arg(args.model)
    event = _parse_event(model, args.event)
    evidence = _parse_event(model, args.evidence) if args.evidence else {}
    assignments = _parse_multi(model, args.do)
    world = World(1, do(assignments)) if assignments else factual_world(1)
    value = population_query(model, evidence, world, event)
    return {"probability": value}


def _bounds_payload(stats, mediator_upper=None) -> dict:
    pns_iv = pns_bounds(stats)
    payload = {
        "pns_interval": list(pns_iv),
        "pn_interval": list(pn_bounds(stats)),
        "pns_icn": pns_point_icn(stats),
        "stats": {
            "p_t": stats.p_t,
            "p_y_do_t": stats.p_y_t,
            "p_y_do_t_prime": stats.p_y_tp,
            "p_y": stats.p_y,
            "p_t_y": stats.p_t_y,
        },
    }
    if mediator_upper is not None:
        payload["mediator_upper"] = mediator_upper
        payload["pns_interval"] = [pns_iv[0], min(pns_iv[1], mediator_upper)]
    return payload


def _cmd_bounds(args) -> dict:
    if args.data:
        dataset = load_dataset(args.data)
        t = int(args.t) if args.t is not None else 1
        y = int(args.y) if args.y is not None else 1
        stats = stats_from_rct(dataset.observed(), t=t, y=y)
        return _bounds_payload(stats)
    if not args.model:
        raise TypeMismatchError("bounds needs --model or --data")
    model = _load_model_arg(args.model)
    unit = _resolve_unit(model, args.unit)
    treatment, t = _parse_scalar(model, args.t or "1", args.treatment)
    outcome, y = _parse_scalar(model, args.y or "1", args.outcome)
    stats = unit_stats(model, unit, t=t, y=y, treatment=treatment,
                       outcome=outcome)
    mediator_upper = None
    if args.mediator:
        mediator_upper = mediator_pns_upper(
            model, unit, t=t, y=y, mediator=args.mediator,
            treatment=treatment, outcome=outcome)
    return _bounds_payload(stats, mediator_upper)


def _cmd_benefit(args) -> dict:
    model = _load_model_arg(args.model)
    unit = _resolve_unit(model, args.unit)
    treatment, t = _parse_scalar(model, args.t or "1", args.treatment)
    outcome, y = _parse_scalar(model, args.y or "1", args.outcome)
    spec = BenefitSpec(args.beta, args.gamma, args.theta, args.delta)
    coupling = None
    if args.coupling:
        worlds = poc_worlds(model, t=t, treatment=treatment)
        coupling = _coupling_for(model, worlds, args.coupling)
    report = evaluate_benefit(model, unit, spec, t=t, y=y, coupling=coupling,
                              treatment=treatment, outcome=outcome)
    payload = {"w": report.w, "sigma": report.sigma}
    if report.f is not None:
        payload["f"] = report.f
        payload["pns"] = report.pns
    else:
        payload["f_interval"] = list(report.f_interval)
    payload["pns_interval"] = list(report.pns_interval)
    return payload


def _parse_rho(raw: Optional[str]) -> dict:
    if not raw:
        return dict(DEFAULT_RHO)
    rho = {}
    try:
        for item in raw.split(","):
            key, _, value = item.partition("=")
            rho[int(key.strip())] = float(value.strip())
    except ValueError as exc:
        raise TypeMismatchError(
            f"--rho expects K=R[,K=R...] with numeric entries: {exc}")
    return rho


def _effective_seed(args) -> int:
    env = os.environ.get("DISCO_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise TypeMismatchError(
                f"DISCO_SEED must be an integer, got {env!r}") from exc
    return args.seed


def _cmd_simulate(args) -> dict:
    seed = _effective_seed(args)
    regime = args.regime
    spec = GaussianCouplingSpec(
        regime, _parse_rho(args.rho) if regime == CORRELATED else None)
    written = []
    if args.generator == "example1":
        sample = sample_cross_world(spec, args.n, seed, p_x=args.p_x)
        _write(args.out, cross_world_csv(sample))
        written.append(args.out)
    elif args.generator == "example2":
        try:
            x2_domain = tuple(float(v) for v in args.x2.split(","))
        except ValueError as exc:
            raise TypeMismatchError(
                f"--x2 expects a comma-separated list of numbers: {exc}")
        params = Example2Params(
            n=args.n, p_x0=args.p_x0, p_x1=args.p_x1, x2_domain=x2_domain,
            assignment_prob=args.assignment_prob, seed=seed)
        sample, rct = gen_example2(params, spec)
        _write(args.out, cross_world_csv(sample))
        written.append(args.out)
        if args.rct_out:
            _write(args.rct_out, rct_csv(rct))
            written.append(args.rct_out)
    else:
        if not args.input:
            raise TypeMismatchError(
                "simulate rct needs --input with a cross-world CSV")
        with open(args.input, "r", encoding="utf-8") as handle:
            sample = read_cross_world_csv(handle.read())
        rct = rct_table(sample, args.assignment_prob, seed)
        _write(args.out, rct_csv(rct))
        written.append(args.out)
    return {"wrote": written, "seed": seed}


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _cmd_stats(args) -> dict:
    dataset = load_dataset(args.data)
    means = dataset.arm_means()
    observed = dataset.observed()
    return {
        "n": len(observed),
        "arm_means": {str(t): mean for t, mean in means.items()},
        "arm_counts": {
            str(t): sum(1 for row in observed if row[1] == t)
            for t in means
        },
    }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disco",
        description="Exact counterfactual inference for "
                    "distribution-consistency causal models")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("model")
    add_format(p)

    p = sub.add_parser("query", help="individual-level valuation")
    p.add_argument("--model", required=True)
    p.add_argument("--unit", required=True)
    p.add_argument("--do", action="append", metavar="VAR=V")
    p.add_argument("--given", action="append", metavar="VAR=V")
    p.add_argument("--event", required=True, metavar="VAR=V[,VAR=V...]")
    p.add_argument("--coupling", metavar="independent|shared|FILE")
    add_format(p)

    p = sub.add_parser("population-query",
                       help="abduction-valuation-reduction query")
    p.add_argument("--model", required=True)
    p.add_argument("--evidence", metavar="VAR=V[,VAR=V...]")
    p.add_argument("--do", action="append", metavar="VAR=V")
    p.add_argument("--event", required=True, metavar="VAR=V[,VAR=V...]")
    add_format(p)

    p = sub.add_parser("bounds", help="causation bounds and ICN points")
    p.add_argument("--model")
    p.add_argument("--unit")
    p.add_argument("--data", help="factual CSV instead of a model")
    p.add_argument("--t", metavar="VAL")
    p.add_argument("--y", metavar="VAL")
    p.add_argument("--mediator", metavar="Z")
    p.add_argument("--treatment", default="T")
    p.add_argument("--outcome", default="Y")
    add_format(p)

    p = sub.add_parser("benefit", help="unit-selection benefit report")
    p.add_argument("--model", required=True)
    p.add_argument("--unit", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--t", metavar="VAL")
    p.add_argument("--y", metavar="VAL")
    p.add_argument("--coupling", metavar="independent|shared|FILE")
    p.add_argument("--treatment", default="T")
    p.add_argument("--outcome", default="Y")
    add_format(p)

    p = sub.add_parser("simulate", help="write Monte Carlo CSVs")
    p.add_argument("generator", choices=("example1", "example2", "rct"))
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--regime", choices=("shared", "correlated", "independent"),
                   default="independent")
    p.add_argument("--rho", metavar="K=R[,K=R...]")
    p.add_argument("--p-x", type=float, default=0.5, dest="p_x")
    p.add_argument("--p-x0", type=float, default=0.5, dest="p_x0")
    p.add_argument("--p-x1", type=float, default=0.5, dest="p_x1")
    p.add_argument("--x2", default="0,1,2")
    p.add_argument("--assignment-prob", type=float, default=0.5,
                   dest="assignment_prob")
    p.add_argument("--input", help="cross-world CSV (rct generator)")
    p.add_argument("--out", required=True)
    p.add_argument("--rct-out", dest="rct_out")
    add_format(p)

    p = sub.add_parser("stats", help="arm means of a factual dataset")
    p.add_argument("--data", required=True)
    add_format(p)

    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "query": _cmd_query,
    "population-query": _cmd_population_query,
    "bounds": _cmd_bounds,
    "benefit": _cmd_benefit,
    "simulate": _cmd_simulate,
    "stats": _cmd_stats,
}


def run_command(argv) -> int:
    """Run one command; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "text")
    try:
        payload = _HANDLERS[args.command](args)
    except DiscoError as exc:
        if fmt == "json":
            body = {"error": exc.code, "message": exc.message}
            if isinstance(exc, DiscoErrorWithReport):
                body["issues"] = [
                    {"code": i.code, "message": i.message}
                    for i in exc.report.issues
                ]
            print(json.dumps(body))
        else:
            print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
            if isinstance(exc, DiscoErrorWithReport):
                for issue in exc.report.issues:
                    print(f"  {issue.code}: {issue.message}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        if fmt == "json":
            print(json.dumps({"error": "file-not-found",
                              "message": str(exc)}))
        else:
            print(f"error: file-not-found: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        if fmt == "json":
            print(json.dumps({"error": "io-error", "message": str(exc)}))
        else:
            print(f"error: io-error: {exc}", file=sys.stderr)
        return 1
    _emit(payload, fmt)
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
