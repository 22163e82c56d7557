"""Exact layer valuations by enumeration over coupled noise tuples.

The three layers are probabilities of events in the factual world, in a
single intervened world, and jointly across several worlds.  All of
them reduce to summing coupling mass over the noise tuples whose
evaluation satisfies the event, per unit.  Enumeration is restricted to
noises that are ancestors of the event variables in each world, which
keeps it exact while skipping irrelevant dimensions.

Everything here is a pure function of immutable inputs, so concurrent
evaluation across units or queries is safe and schedule-independent.
Probabilities come back as exact ``Fraction`` values whenever the model
pmfs are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence, Union

from .errors import (
    InvariantViolationError,
    OutOfDomainError,
    UncoveredWorldError,
    UnknownVariableError,
    ZeroProbabilityConditioningError,
    ZeroProbabilityEvidenceError,
)
from .model import DiscoModel, Value
from .rational import PROB_TOL, Prob
from .worlds import (
    Coupling,
    CrossWorldEvent,
    INDEPENDENT,
    World,
    do,
    factual_world,
    make_coupling,
    marginal_options,
    single_world_event,
)

Event = Union[Mapping, Sequence]


def _as_event(event: Event) -> dict:
    if isinstance(event, Mapping):
        return dict(event)
    return dict(event)


@dataclass(frozen=True)
class Posterior:
    """Posterior law over units given factual evidence."""

    units: tuple
    weights: tuple

    def weight(self, unit) -> Prob:
        return self.weights[self.units.index(unit)]

    def as_dict(self) -> dict:
        return dict(zip(self.units, self.weights))


@dataclass(frozen=True)
class Theorem1Report:
    """The three matching valuations of one outcome for one unit."""

    counterfactual_given_evidence: Prob
    interventional: Prob
    observational: Prob

    @property
    def max_gap(self) -> float:
        values = (self.counterfactual_given_evidence, self.interventional,
                  self.observational)
        return float(max(values) - min(values))


def evaluate_unit_world(model: DiscoModel, unit, world: World,
                        noise_assignment: Mapping) -> dict:
    """Evaluate every endogenous variable for one unit in one world.

    Deterministic: intervened variables carry their forced values, the
    rest follow their tables in topological order.  The noise
    assignment must cover every noise variable.
    """
    forced = world.intervention.as_dict()
    values: dict[str, Value] = {}
    for name in model.order:
        if name in forced:
            values[name] = forced[name]
            continue
        fn = model.function_of[name]
        parent_values = tuple(values[p] for p in fn.parents)
        values[name] = fn.table[(unit, parent_values,
                                 noise_assignment[fn.noise])]
    return values


def _check_constraints(model: DiscoModel,
                       constraints: Sequence[tuple[str, Value]]) -> None:
    for name, value in constraints:
        var = model.variables_by_name.get(name)
        if var is None:
            raise UnknownVariableError(f"event names unknown variable {name!r}")
        if value not in var.domain:
            raise OutOfDomainError(
                f"value {value!r} is outside the domain of {name!r}")


def _ancestors(model: DiscoModel, names: Sequence[str],
               intervened: frozenset[str]) -> set[str]:
    """Ancestors of ``names`` in the world graph (intervened edges cut)."""
    seen: set[str] = set()
    stack = [n for n in names]
    while stack:
        name = stack.pop()
        if name in seen:
            continue
        seen.add(name)
        if name in intervened:
            continue
        stack.extend(model.parent_map[name])
    return seen


def _satisfaction_table(model: DiscoModel, unit, world: World,
                        constraints: Sequence[tuple[str, Value]]):
    """Relevant noises of one world plus the set of satisfying tuples.

    Enumerates assignments of the relevant noises only; irrelevant ones
    cannot change the event indicator, so they are summed out through
    the coupling marginals instead.
    """
    intervened = frozenset(world.intervention.as_dict())
    needed_vars = _ancestors(model, [name for name, _ in constraints],
                             intervened)
    eval_order = [n for n in model.order if n in needed_vars]
    rel_noises = tuple(sorted({
        model.function_of[n].noise
        for n in eval_order if n not in intervened
    }))
    forced = world.intervention.as_dict()
    satisfying: set[tuple] = set()
    domains = [model.noise(n).domain for n in rel_noises]
    for combo in product(*domains):
        noise_values = dict(zip(rel_noises, combo))
        values: dict[str, Value] = {}
        for name in eval_order:
            if name in forced:
                values[name] = forced[name]
                continue
            fn = model.function_of[name]
            parent_values = tuple(values[p] for p in fn.parents)
            values[name] = fn.table[(unit, parent_values,
                                     noise_values[fn.noise])]
        if all(values[name] == value for name, value in constraints):
            satisfying.add(combo)
    return rel_noises, satisfying


def layer3(model: DiscoModel, unit, coupling: Coupling,
           event: CrossWorldEvent) -> Prob:
    """Probability of a conjunction of constraints across coupled worlds."""
    event = CrossWorldEvent.of(event)
    per_world: dict[int, list[tuple[str, Value]]] = {}
    for world_id, name, value in event.constraints:
        if not coupling.has_world(world_id):
            raise UncoveredWorldError(
                f"event references world {world_id}, which the coupling "
                f"does not cover")
        per_world.setdefault(world_id, []).append((name, value))
    for constraints in per_world.values():
        _check_constraints(model, constraints)
    if not per_world:
        return Fraction(1)

    tables: dict[int, tuple[tuple[str, ...], set]] = {}
    need: dict[str, list[int]] = {}
    for world in coupling.worlds:
        if world.id not in per_world:
            continue
        rel_noises, satisfying = _satisfaction_table(
            model, unit, world, per_world[world.id])
        tables[world.id] = (rel_noises, satisfying)
        for noise_name in rel_noises:
            need.setdefault(noise_name, []).append(world.id)

    noise_names = sorted(need)
    options = [
        marginal_options(coupling, model, name, need[name])
        for name in noise_names
    ]
    # Index of each (noise, world) coordinate into the option tuples.
    extractors: dict[int, list[tuple[int, int]]] = {}
    for world_id, (rel_noises, _) in tables.items():
        coords = []
        for noise_name in rel_noises:
            i = noise_names.index(noise_name)
            j = need[noise_name].index(world_id)
            coords.append((i, j))
        extractors[world_id] = coords

    total: Prob = Fraction(0)
    for combo in product(*options):
        satisfied = True
        for world_id, (_, satisfying) in tables.items():
            key = tuple(combo[i][0][j] for i, j in extractors[world_id])
            if key not in satisfying:
                satisfied = False
                break
        if not satisfied:
            continue
        weight: Prob = Fraction(1)
        for _, p in combo:
            weight *= p
        total += weight
    return total


def layer2(model: DiscoModel, unit, world: World, event: Event) -> Prob:
    """Probability of an event under one intervention, fresh noise copy."""
    coupling = make_coupling(INDEPENDENT, [world], model)
    return layer3(model, unit, coupling,
                  single_world_event(world.id, _as_event(event)))


def layer1(model: DiscoModel, unit, event: Event) -> Prob:
    """Probability of an event in the factual world."""
    return layer2(model, unit, factual_world(), event)


def conditional(model: DiscoModel, unit, coupling: Coupling,
                target: CrossWorldEvent, evidence: CrossWorldEvent) -> Prob:
    """P(target | evidence) as a ratio of joint valuations."""
    target = CrossWorldEvent.of(target)
    evidence = CrossWorldEvent.of(evidence)
    denominator = layer3(model, unit, coupling, evidence)
    if denominator == 0:
        raise ZeroProbabilityEvidenceError(
            "conditioning event has probability zero")
    numerator = layer3(model, unit, coupling, target.conjoin(evidence))
    return numerator / denominator


def verify_theorem1(model: DiscoModel, unit, x: Mapping, y: Event,
                    evidence: Event, tol: float = PROB_TOL) -> Theorem1Report:
    """Compute the triple of valuations that must coincide per unit.

    Returns P(y under do(x) | evidence), P(y under do(x)), and the
    observational P(y | x), using the default independent coupling
    between the factual and the intervened world.  Raises if the three
    disagree beyond ``tol`` (exact rational models must match exactly).
    """
    x = dict(x)
    y = _as_event(y)
    evidence = _as_event(evidence)
    d = factual_world(0)
    wx = World(1, do(x))
    coupling = make_coupling(INDEPENDENT, [d, wx], model)

    p_cond = conditional(
        model, unit, coupling,
        single_world_event(wx.id, y), single_world_event(d.id, evidence))
    p_do = layer2(model, unit, wx, y)

    p_x = layer1(model, unit, x)
    if p_x == 0:
        raise ZeroProbabilityConditioningError(
            "the conditioning assignment has probability zero")
    joint = dict(x)
    joint.update(y)
    p_obs = layer1(model, unit, joint) / p_x

    report = Theorem1Report(p_cond, p_do, p_obs)
    if report.max_gap > tol:
        raise InvariantViolationError(
            f"layer valuations disagree: {report}")
    return report


def abduct(model: DiscoModel, evidence: Event) -> Posterior:
    """Posterior over units: weights proportional to prior times likelihood."""
    evidence = _as_event(evidence)
    likelihoods = [layer1(model, unit, evidence)
                   for unit in model.prior.units]
    joint = [w * l for w, l in zip(model.prior.weights, likelihoods)]
    total = sum(joint, start=Fraction(0))
    if total == 0:
        raise ZeroProbabilityEvidenceError(
            "evidence has probability zero under the prior mixture")
    return Posterior(model.prior.units, tuple(p / total for p in joint))


def population_query(model: DiscoModel, evidence: Event, world: World,
                     event: Event) -> Prob:
    """Population valuation: abduction, per-unit valuation, reduction."""
    posterior = abduct(model, evidence)
    total: Prob = Fraction(0)
    for unit, weight in zip(posterior.units, posterior.weights):
        if weight == 0:
            continue
        total += weight * layer2(model, unit, world, event)
    return total
