"""Finite-domain causal models with per-unit structural functions.

A model bundles a unit prior, private noise variables, endogenous
variables and one structural function per endogenous variable.  Each
function maps (unit, parent values, noise value) to a target value
through an explicit total table, so deterministic mechanisms use a
one-point noise domain and everything evaluates through the same path.

Models are immutable after :func:`build_model` and safe to share across
threads; all downstream operations are pure functions of the model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Hashable, Mapping, Sequence

from .errors import (
    CycleError,
    ERROR_BY_CODE,
    TypeMismatchError,
)
from .rational import PROB_TOL, Prob, to_prob

Value = Hashable


@dataclass(frozen=True)
class VariableDef:
    """An endogenous variable and its ordered finite domain."""

    name: str
    domain: tuple

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))


@dataclass(frozen=True)
class NoiseDef:
    """A noise variable: ordered finite domain plus a pmf over it."""

    name: str
    domain: tuple
    pmf: tuple

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "pmf", tuple(to_prob(p) for p in self.pmf))

    def mass(self, value) -> Fraction:
        return self.pmf[self.domain.index(value)]


@dataclass(frozen=True)
class StructuralFn:
    """Total mapping (unit, parent values, noise value) -> target value."""

    target: str
    parents: tuple[str, ...]
    noise: str
    table: Mapping[tuple, Value]

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "table", dict(self.table))

    def __call__(self, unit, parent_values: tuple, noise_value) -> Value:
        return self.table[(unit, tuple(parent_values), noise_value)]


@dataclass(frozen=True)
class UnitPrior:
    """The unit selection law: identifiers plus a weight per unit."""

    units: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "weights", tuple(to_prob(w) for w in self.weights))

    @classmethod
    def uniform(cls, units: Sequence) -> "UnitPrior":
        n = len(units)
        return cls(tuple(units), tuple(Fraction(1, n) for _ in units))

    def weight(self, unit) -> Prob:
        return self.weights[self.units.index(unit)]


@dataclass(frozen=True)
class DiscoModel:
    """Validated model: prior, noises, endogenous variables, functions."""

    prior: UnitPrior
    noises: tuple[NoiseDef, ...]
    endogenous: tuple[VariableDef, ...]
    functions: tuple[StructuralFn, ...]

    @cached_property
    def noises_by_name(self) -> dict[str, NoiseDef]:
        return {n.name: n for n in self.noises}

    @cached_property
    def variables_by_name(self) -> dict[str, VariableDef]:
        return {v.name: v for v in self.endogenous}

    @cached_property
    def function_of(self) -> dict[str, StructuralFn]:
        return {f.target: f for f in self.functions}

    @cached_property
    def parent_map(self) -> dict[str, tuple[str, ...]]:
        return {f.target: f.parents for f in self.functions}

    @cached_property
    def order(self) -> tuple[str, ...]:
        return topological_order(self)

    def noise(self, name: str) -> NoiseDef:
        return self.noises_by_name[name]

    def variable(self, name: str) -> VariableDef:
        return self.variables_by_name[name]

    def domain_of(self, name: str) -> tuple:
        return self.variables_by_name[name].domain


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def codes(self) -> list[str]:
        return [i.code for i in self.issues]


def topological_order(model: DiscoModel) -> tuple[str, ...]:
    """Order endogenous names so every variable follows all its parents."""
    return _topo_sort(model.parent_map)


def _topo_sort(parent_map: Mapping[str, Sequence[str]]) -> tuple[str, ...]:
    remaining = {name: set(ps) for name, ps in parent_map.items()}
    order: list[str] = []
    while remaining:
        ready = sorted(n for n, ps in remaining.items() if not ps)
        if not ready:
            cycle = sorted(remaining)
            raise CycleError(f"parent graph has a cycle among {cycle}")
        for name in ready:
            order.append(name)
            del remaining[name]
        for ps in remaining.values():
            ps.difference_update(ready)
    return tuple(order)


def _check_pmf(name: str, pmf: Sequence[Prob], issues: list[ValidationIssue],
               kind: str = "noise") -> None:
    if any(p < 0 for p in pmf):
        issues.append(ValidationIssue(
            "unnormalized-pmf", f"{kind} {name!r} has a negative probability"))
        return
    total = sum(pmf)
    if abs(total - 1) > PROB_TOL:
        issues.append(ValidationIssue(
            "unnormalized-pmf",
            f"{kind} {name!r} probabilities sum to {float(total)!r}, not 1"))


def _validate_parts(prior: UnitPrior, noises: Sequence[NoiseDef],
                    variables: Sequence[VariableDef],
                    functions: Sequence[StructuralFn]) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []

    seen: set[str] = set()
    for name in ([n.name for n in noises] + [v.name for v in variables]):
        if name in seen:
            issues.append(ValidationIssue("duplicate-name",
                                          f"name {name!r} is declared twice"))
        seen.add(name)
    if len(set(prior.units)) != len(prior.units):
        issues.append(ValidationIssue("duplicate-name", "unit ids repeat"))

    for v in variables:
        if not v.domain:
            issues.append(ValidationIssue(
                "type-mismatch", f"variable {v.name!r} has an empty domain"))
        if len(set(v.domain)) != len(v.domain):
            issues.append(ValidationIssue(
                "duplicate-name", f"variable {v.name!r} repeats a domain value"))
    for n in noises:
        if not n.domain:
            issues.append(ValidationIssue(
                "type-mismatch", f"noise {n.name!r} has an empty domain"))
        if len(n.pmf) != len(n.domain):
            issues.append(ValidationIssue(
                "type-mismatch",
                f"noise {n.name!r} pmf length differs from its domain"))
            continue
        _check_pmf(n.name, n.pmf, issues)
    _check_pmf("units", prior.weights, issues, kind="prior over")

    var_names = {v.name for v in variables}
    noise_names = {n.name for n in noises}

    targets = [f.target for f in functions]
    for target in var_names - set(targets):
        issues.append(ValidationIssue(
            "partial-function-table", f"variable {target!r} has no function"))
    for target in set(targets):
        if targets.count(target) > 1:
            issues.append(ValidationIssue(
                "duplicate-name", f"variable {target!r} has several functions"))

    noise_uses: dict[str, int] = {name: 0 for name in noise_names}
    for f in functions:
        if f.target not in var_names:
            issues.append(ValidationIssue(
                "unknown-variable", f"function targets unknown {f.target!r}"))
            continue
        for p in f.parents:
            if p not in var_names:
                issues.append(ValidationIssue(
                    "unknown-variable",
                    f"function for {f.target!r} uses unknown parent {p!r}"))
        if f.noise not in noise_names:
            issues.append(ValidationIssue(
                "unknown-variable",
                f"function for {f.target!r} uses unknown noise {f.noise!r}"))
        else:
            noise_uses[f.noise] += 1
    for name, count in sorted(noise_uses.items()):
        if count != 1:
            issues.append(ValidationIssue(
                "privacy-constraint",
                f"noise {name!r} is consumed by {count} functions; "
                f"each noise must feed exactly one"))

    if issues:
        # Structural problems make the remaining checks meaningless.
        return issues

    parent_map = {f.target: f.parents for f in functions}
    try:
        _topo_sort(parent_map)
    except CycleError as exc:
        issues.append(ValidationIssue("cyclic-graph", exc.message))
        return issues

    domains = {v.name: v.domain for v in variables}
    noise_by_name = {n.name: n for n in noises}
    for f in functions:
        nd = noise_by_name[f.noise]
        parent_domains = [domains[p] for p in f.parents]
        expected = set()
        for unit in prior.units:
            for combo in product(*parent_domains):
                for e in nd.domain:
                    expected.add((unit, combo, e))
        missing = expected - set(f.table)
        if missing:
            unit, combo, e = sorted(missing, key=repr)[0]
            issues.append(ValidationIssue(
                "partial-function-table",
                f"function for {f.target!r} lacks a row for unit {unit!r}, "
                f"parents {combo!r}, noise {e!r} "
                f"({len(missing)} rows missing)"))
        extra = set(f.table) - expected
        if extra:
            issues.append(ValidationIssue(
                "type-mismatch",
                f"function for {f.target!r} has {len(extra)} rows outside "
                f"its (unit, parents, noise) grid"))
        out = set(f.table.values()) - set(domains[f.target])
        if out:
            issues.append(ValidationIssue(
                "out-of-domain-value",
                f"function for {f.target!r} outputs {sorted(out, key=repr)} "
                f"outside the target domain"))
    return issues


def _parse_units(spec: Mapping) -> UnitPrior:
    units = spec.get("units", ["u0"])
    if isinstance(units, Mapping):
        names = list(units.get("names", []))
        weights = units.get("weights")
        if weights is None:
            return UnitPrior.uniform(names)
        if len(weights) != len(names):
            raise TypeMismatchError("unit weights do not match unit names")
        return UnitPrior(tuple(names), tuple(to_prob(w) for w in weights))
    return UnitPrior.uniform(list(units))


def _parse_table(rows, parents: Sequence[str], units: Sequence) -> dict:
    """Expand table rows; a unit of "*" applies the row to every unit."""
    table: dict[tuple, Value] = {}
    for row in rows:
        if not isinstance(row, Mapping):
            raise TypeMismatchError(f"table row {row!r} is not a mapping")
        try:
            unit = row["unit"]
            combo = tuple(row["parents"])
            e = row["noise"]
            value = row["value"]
        except KeyError as exc:
            raise TypeMismatchError(f"table row {row!r} lacks key {exc}") from exc
        if len(combo) != len(parents):
            raise TypeMismatchError(
                f"table row {row!r} has {len(combo)} parent values, "
                f"expected {len(parents)}")
        row_units = list(units) if unit == "*" else [unit]
        for u in row_units:
            table[(u, combo, e)] = value
    return table


def build_model(spec: Mapping) -> DiscoModel:
    """Build and validate a model from a parsed description.

    The description is a mapping with keys ``units``, ``noises``,
    ``variables`` and ``functions`` (see the file format docs).  Raises
    the error matching the first violated invariant; the returned model
    satisfies all of them.
    """
    if not isinstance(spec, Mapping):
        raise TypeMismatchError("model description must be a mapping")
    prior = _parse_units(spec)
    try:
        noises = tuple(
            NoiseDef(n["name"], tuple(n["domain"]), tuple(n["pmf"]))
            for n in spec.get("noises", []))
        variables = tuple(
            VariableDef(v["name"], tuple(v["domain"]))
            for v in spec.get("variables", []))
        functions = tuple(
            StructuralFn(
                f["target"], tuple(f.get("parents", [])), f["noise"],
                _parse_table(f.get("table", []), f.get("parents", []),
                             prior.units))
            for f in spec.get("functions", []))
    except (KeyError, TypeError) as exc:
        raise TypeMismatchError(f"malformed model description: {exc}") from exc

    issues = _validate_parts(prior, noises, variables, functions)
    if issues:
        first = issues[0]
        raise ERROR_BY_CODE.get(first.code, TypeMismatchError)(first.message)
    return DiscoModel(prior, noises, variables, functions)


def validate_model(model) -> ValidationReport:
    """List every violated invariant; the report is empty iff legal.

    Accepts either a built :class:`DiscoModel` or a raw description
    mapping, so ill-formed inputs can still be diagnosed.
    """
    if isinstance(model, DiscoModel):
        issues = _validate_parts(model.prior, model.noises,
                                 model.endogenous, model.functions)
        return ValidationReport(tuple(issues))
    if not isinstance(model, Mapping):
        return ValidationReport((ValidationIssue(
            "type-mismatch", "model description must be a mapping"),))
    try:
        prior = _parse_units(model)
        noises = tuple(
            NoiseDef(n["name"], tuple(n["domain"]), tuple(n["pmf"]))
            for n in model.get("noises", []))
        variables = tuple(
            VariableDef(v["name"], tuple(v["domain"]))
            for v in model.get("variables", []))
        functions = tuple(
            StructuralFn(
                f["target"], tuple(f.get("parents", [])), f["noise"],
                _parse_table(f.get("table", []), f.get("parents", []),
                             prior.units))
            for f in model.get("functions", []))
    except (KeyError, TypeError, TypeMismatchError, ValueError) as exc:
        return ValidationReport((ValidationIssue(
            "type-mismatch", f"malformed model description: {exc}"),))
    return ValidationReport(tuple(_validate_parts(prior, noises,
                                                  variables, functions)))


def _prob_token(p: Prob):
    if isinstance(p, Fraction):
        if p.denominator == 1:
            return p.numerator
        return f"{p.numerator}/{p.denominator}"
    return p


def to_spec(model: DiscoModel) -> dict:
    """Serialize a model back to a description mapping.

    Rebuilding from the result reproduces the model exactly, including
    all tables and pmfs.
    """
    return {
        "units": {
            "names": list(model.prior.units),
            "weights": [_prob_token(w) for w in model.prior.weights],
        },
        "noises": [
            {"name": n.name, "domain": list(n.domain),
             "pmf": [_prob_token(p) for p in n.pmf]}
            for n in model.noises
        ],
        "variables": [
            {"name": v.name, "domain": list(v.domain)}
            for v in model.endogenous
        ],
        "functions": [
            {
                "target": f.target,
                "parents": list(f.parents),
                "noise": f.noise,
                "table": [
                    {"unit": unit, "parents": list(combo), "noise": e,
                     "value": value}
                    for (unit, combo, e), value in sorted(
                        f.table.items(), key=lambda kv: repr(kv[0]))
                ],
            }
            for f in model.functions
        ],
    }
