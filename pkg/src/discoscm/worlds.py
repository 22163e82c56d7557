"""Interventions, counterfactual worlds, and cross-world noise couplings.

Each intervention spawns a world whose structural equations replace the
intervened variables by constants and whose noise variables are fresh
copies of the base noises.  A coupling fixes the joint law of those
copies across worlds; every world's marginal is pinned to the base
noise law, so couplings only ever differ cross-world.  Two worlds with
the same intervention are still distinct worlds with distinct copies
(the "retake the test under identical conditions" reading).

Couplings come in three kinds:

* ``independent`` - copies of each noise are independent across worlds;
* ``shared`` - copies of each noise are identical across worlds, the
  classical single-noise limit;
* ``explicit`` - a per-noise joint table over world value tuples.
  Tables are given per noise variable (noises stay independent of each
  other); noises without a table default to independent copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    DuplicateNameError,
    MarginalMismatchError,
    OutOfDomainError,
    TypeMismatchError,
    UnknownVariableError,
)
from .model import DiscoModel, NoiseDef, Value
from .rational import Prob, prob_close, to_prob

INDEPENDENT = "independent"
SHARED = "shared"
EXPLICIT = "explicit"

KINDS = (INDEPENDENT, SHARED, EXPLICIT)


@dataclass(frozen=True)
class Intervention:
    """A set of variable assignments; empty means the factual world."""

    assignments: tuple[tuple[str, Value], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted(self.assignments))
        names = [name for name, _ in pairs]
        if len(set(names)) != len(names):
            raise DuplicateNameError(
                "an intervention may assign each variable at most once")
        object.__setattr__(self, "assignments", pairs)

    @property
    def empty(self) -> bool:
        return not self.assignments

    def as_dict(self) -> dict:
        return dict(self.assignments)

    def __repr__(self) -> str:
        if self.empty:
            return "do()"
        inner = ", ".join(f"{n}={v!r}" for n, v in self.assignments)
        return f"do({inner})"


def do(mapping: Optional[Mapping] = None, **assignments) -> Intervention:
    """Convenience constructor: ``do(T=1)`` or ``do({"T": 1})``."""
    pairs = dict(mapping or {})
    pairs.update(assignments)
    return Intervention(tuple(pairs.items()))


@dataclass(frozen=True)
class World:
    """A counterfactual world: an id plus the intervention creating it."""

    id: int
    intervention: Intervention

    @property
    def factual(self) -> bool:
        return self.intervention.empty


@dataclass(frozen=True)
class CrossWorldEvent:
    """A conjunction of (world id, variable, value) constraints."""

    constraints: tuple[tuple[int, str, Value], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "constraints",
            tuple((int(w), str(v), val) for w, v, val in self.constraints))

    @classmethod
    def of(cls, constraints: Iterable) -> "CrossWorldEvent":
        if isinstance(constraints, CrossWorldEvent):
            return constraints
        return cls(tuple(constraints))

    def world_ids(self) -> tuple[int, ...]:
        seen: list[int] = []
        for w, _, _ in self.constraints:
            if w not in seen:
                seen.append(w)
        return tuple(seen)

    def conjoin(self, other: "CrossWorldEvent") -> "CrossWorldEvent":
        return CrossWorldEvent(self.constraints + other.constraints)


def single_world_event(world_id: int, event: Mapping) -> CrossWorldEvent:
    return CrossWorldEvent(tuple((world_id, name, value)
                                 for name, value in dict(event).items()))


def make_world(model: DiscoModel, intervention: Intervention,
               world_id: int = 0) -> World:
    """Validate an intervention against the model and wrap it in a world."""
    if not isinstance(intervention, Intervention):
        intervention = do(intervention)
    for name, value in intervention.assignments:
        var = model.variables_by_name.get(name)
        if var is None:
            raise UnknownVariableError(
                f"intervention assigns unknown variable {name!r}")
        if value not in var.domain:
            raise OutOfDomainError(
                f"value {value!r} is outside the domain of {name!r}")
    return World(world_id, intervention)


def factual_world(world_id: int = 0) -> World:
    return World(world_id, Intervention())


@dataclass(frozen=True)
class Coupling:
    """The joint law of counterfactual noise copies across worlds."""

    worlds: tuple[World, ...]
    kind: str
    joint: Optional[Mapping[str, Mapping[tuple, Prob]]] = None

    @property
    def world_ids(self) -> tuple[int, ...]:
        return tuple(w.id for w in self.worlds)

    def world(self, world_id: int) -> World:
        for w in self.worlds:
            if w.id == world_id:
                return w
        raise UnknownVariableError(f"no world with id {world_id} in coupling")

    def has_world(self, world_id: int) -> bool:
        return any(w.id == world_id for w in self.worlds)

    def position(self, world_id: int) -> int:
        for i, w in enumerate(self.worlds):
            if w.id == world_id:
                return i
        raise UnknownVariableError(f"no world with id {world_id} in coupling")

    def find_world(self, intervention: Intervention) -> Optional[World]:
        for w in self.worlds:
            if w.intervention == intervention:
                return w
        return None


@dataclass(frozen=True)
class MarginalIssue:
    world_id: int
    noise: str
    value: Value
    expected: Prob
    actual: Prob


@dataclass(frozen=True)
class CouplingReport:
    ok: bool
    issues: tuple[MarginalIssue, ...] = ()


def _explicit_marginal_issues(model: DiscoModel, worlds: Sequence[World],
                              noise: NoiseDef,
                              table: Mapping[tuple, Prob]) -> list[MarginalIssue]:
    issues: list[MarginalIssue] = []
    k = len(worlds)
    for tup in table:
        if len(tup) != k:
            raise TypeMismatchError(
                f"joint tuple {tup!r} for noise {noise.name!r} has "
                f"{len(tup)} entries, expected one per world ({k})")
        for value in tup:
            if value not in noise.domain:
                raise OutOfDomainError(
                    f"joint for noise {noise.name!r} mentions {value!r} "
                    f"outside its domain")
    for pos, world in enumerate(worlds):
        for value, expected in zip(noise.domain, noise.pmf):
            actual = sum((p for tup, p in table.items() if tup[pos] == value),
                         start=Fraction(0))
            if not prob_close(actual, expected):
                issues.append(MarginalIssue(world.id, noise.name, value,
                                            expected, actual))
    return issues


def make_coupling(kind: str, worlds: Sequence[World], model: DiscoModel,
                  joint: Optional[Mapping] = None) -> Coupling:
    """Assemble a coupling, enforcing the per-world marginal constraint.

    ``joint`` is required for the explicit kind: a mapping from noise
    name to a table {world value tuple: probability}, tuples aligned
    with the order of ``worlds``.  Omitted noises couple independently.
    """
    if kind not in KINDS:
        raise TypeMismatchError(f"unknown coupling kind {kind!r}")
    worlds = tuple(worlds)
    ids = [w.id for w in worlds]
    if len(set(ids)) != len(ids):
        raise DuplicateNameError("world ids within a coupling must be unique")
    if kind == EXPLICIT:
        if joint is None:
            raise TypeMismatchError("explicit couplings require a joint table")
        normalized: dict[str, dict[tuple, Fraction]] = {}
        for name, table in joint.items():
            noise = model.noises_by_name.get(name)
            if noise is None:
                raise UnknownVariableError(
                    f"joint table names unknown noise {name!r}")
            norm = {tuple(tup): to_prob(p) for tup, p in table.items()}
            if any(p < 0 for p in norm.values()):
                raise TypeMismatchError(
                    f"joint for noise {name!r} has a negative probability")
            issues = _explicit_marginal_issues(model, worlds, noise, norm)
            if issues:
                first = issues[0]
                raise MarginalMismatchError(
                    f"world {first.world_id}, noise {first.noise!r}, value "
                    f"{first.value!r}: marginal {float(first.actual)!r} != "
                    f"base {float(first.expected)!r}")
            normalized[name] = norm
        return Coupling(worlds, EXPLICIT, normalized)
    if joint is not None:
        raise TypeMismatchError(
            f"{kind} couplings are fully determined; no joint table applies")
    return Coupling(worlds, kind)


def coupling_marginals_ok(coupling: Coupling,
                          model: DiscoModel) -> CouplingReport:
    """Check every world marginal against the base noise law."""
    if coupling.kind in (INDEPENDENT, SHARED):
        return CouplingReport(True)
    issues: list[MarginalIssue] = []
    for name, table in (coupling.joint or {}).items():
        noise = model.noises_by_name[name]
        issues.extend(_explicit_marginal_issues(
            model, coupling.worlds, noise, table))
    return CouplingReport(not issues, tuple(issues))


def noise_joint(coupling: Coupling, model: DiscoModel,
                noise_name: str) -> dict[tuple, Prob]:
    """Materialize one noise's cross-world joint as {tuple: probability}."""
    noise = model.noises_by_name[noise_name]
    k = len(coupling.worlds)
    if coupling.kind == SHARED:
        return {(value,) * k: p for value, p in zip(noise.domain, noise.pmf)}
    if coupling.kind == EXPLICIT and coupling.joint is not None \
            and noise_name in coupling.joint:
        return {tup: p for tup, p in coupling.joint[noise_name].items() if p}
    return {
        tup: _product(noise.mass(v) for v in tup)
        for tup in product(noise.domain, repeat=k)
    }


def marginal_options(coupling: Coupling, model: DiscoModel, noise_name: str,
                     world_ids: Sequence[int]) -> list[tuple[tuple, Prob]]:
    """Joint of one noise restricted to a subset of worlds.

    Returns (value tuple, weight) pairs with zero-weight tuples dropped;
    tuples align with ``world_ids``.  Marginalizing an explicit table
    sums out the hidden worlds exactly.
    """
    noise = model.noises_by_name[noise_name]
    if coupling.kind == SHARED:
        return [((value,) * len(world_ids), p)
                for value, p in zip(noise.domain, noise.pmf) if p]
    if coupling.kind == EXPLICIT and coupling.joint is not None \
            and noise_name in coupling.joint:
        positions = [coupling.position(w) for w in world_ids]
        agg: dict[tuple, Prob] = {}
        for tup, p in coupling.joint[noise_name].items():
            if not p:
                continue
            key = tuple(tup[i] for i in positions)
            agg[key] = agg.get(key, Fraction(0)) + p
        return sorted(agg.items(), key=lambda kv: repr(kv[0]))
    out = []
    for tup in product(noise.domain, repeat=len(world_ids)):
        p = _product(noise.mass(v) for v in tup)
        if p:
            out.append((tup, p))
    return out


def _product(values) -> Prob:
    result: Prob = Fraction(1)
    for v in values:
        result *= v
    return result


def copy_mixture_joint(noise: NoiseDef,
                       lambdas: Sequence) -> dict[tuple, Fraction]:
    """A marginal-preserving joint from per-world copy probabilities.

    Draw a hidden base value e from the noise law; each world copies e
    with probability lambda_w and redraws fresh otherwise.  Any lambda
    vector in [0, 1]^k yields base-law marginals: all zeros is the
    independent coupling, all ones the shared one, and intermediate
    values sweep a grid of couplings in between.
    """
    lams = [to_prob(l) for l in lambdas]
    for l in lams:
        if l < 0 or l > 1:
            raise TypeMismatchError("copy probabilities must lie in [0, 1]")
    table: dict[tuple, Fraction] = {}
    for tup in product(noise.domain, repeat=len(lams)):
        total = Fraction(0)
        for e, pe in zip(noise.domain, noise.pmf):
            term = pe
            for value, lam in zip(tup, lams):
                copy = lam if value == e else Fraction(0)
                term *= copy + (1 - lam) * noise.mass(value)
            total += term
        if total:
            table[tup] = total
    return table
