"""Probability-of-causation calculus for binary treatment and outcome.

Response types (complier, always-taker, never-taker, defier) come out
exactly when the cross-world coupling is known, via joint valuations
over the two intervened worlds.  When only the identifiable scalars
P(t), P(y under do(t)) and P(y under do(t')) are known, the module
produces the tight bounds on the complier probability and on the
necessity probability, the point value under independent counterfactual
noises, and a tighter upper bound when a mediator's structure is
available.  The same bound formulas apply unchanged to stats pooled at
the population level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .engine import conditional, layer1, layer2, layer3
from .errors import (
    NonBinaryVariableError,
    NotAMediatorError,
    TreatmentNotRootError,
    TypeMismatchError,
    UncoveredWorldError,
    UndefinedPnError,
    ZeroProbabilityEvidenceError,
)
from .model import DiscoModel
from .rational import Prob
from .worlds import (
    Coupling,
    CrossWorldEvent,
    INDEPENDENT,
    World,
    do,
    factual_world,
    single_world_event,
)

Interval = tuple[Prob, Prob]


@dataclass(frozen=True)
class UnitStats:
    """Identifiable scalar inputs to every bound formula.

    ``p_t`` is P(T=t), ``p_y_t`` is P(y under do(t)), ``p_y_tp`` is
    P(y under do(t')).  The observational joints follow from the
    individual-level equality of conditional and interventional
    outcome probabilities; :meth:`from_marginals` derives them, while
    :meth:`pooled` mixes fully-specified stats across units instead
    (population joints are mixtures, never products).
    """

    p_t: Prob
    p_y_t: Prob
    p_y_tp: Prob
    p_y: Prob
    p_t_y: Prob
    p_tp_yp: Prob
    p_t_yp: Prob
    p_tp_y: Prob

    @classmethod
    def from_marginals(cls, p_t: Prob, p_y_t: Prob, p_y_tp: Prob) -> "UnitStats":
        for name, value in (("p_t", p_t), ("p_y_t", p_y_t),
                            ("p_y_tp", p_y_tp)):
            if not 0 <= value <= 1:
                raise TypeMismatchError(
                    f"{name} = {float(value)!r} is not a probability")
        p_tp = 1 - p_t
        return cls(
            p_t=p_t,
            p_y_t=p_y_t,
            p_y_tp=p_y_tp,
            p_y=p_y_t * p_t + p_y_tp * p_tp,
            p_t_y=p_t * p_y_t,
            p_tp_yp=p_tp * (1 - p_y_tp),
            p_t_yp=p_t * (1 - p_y_t),
            p_tp_y=p_tp * p_y_tp,
        )

    @classmethod
    def pooled(cls, weighted: Sequence[tuple[Prob, "UnitStats"]]) -> "UnitStats":
        """Mix stats across units; every field is averaged separately."""
        total = sum(w for w, _ in weighted)
        if total == 0:
            raise ZeroProbabilityEvidenceError("pooled weights sum to zero")

        def mix(field: str) -> Prob:
            return sum((w * getattr(s, field) for w, s in weighted),
                       start=Fraction(0)) / total

        return cls(*(mix(f) for f in (
            "p_t", "p_y_t", "p_y_tp", "p_y",
            "p_t_y", "p_tp_yp", "p_t_yp", "p_tp_y")))


@dataclass(frozen=True)
class PoCReport:
    """Exact causation probabilities under one coupling, with intervals."""

    pns: Prob
    pn: Optional[Prob]
    ps: Optional[Prob]
    response_types: Mapping[str, Prob]
    pns_interval: Interval
    pn_interval: Optional[Interval]


def _binary(model: DiscoModel, name: str) -> tuple:
    var = model.variables_by_name.get(name)
    if var is None:
        raise NonBinaryVariableError(f"no variable named {name!r}")
    if len(var.domain) != 2:
        raise NonBinaryVariableError(
            f"variable {name!r} has {len(var.domain)} values; "
            f"the causation calculus needs a binary one")
    return var.domain


def _complement(domain: tuple, value):
    if value not in domain:
        raise NonBinaryVariableError(
            f"value {value!r} is not in the binary domain {domain!r}")
    a, b = domain
    return b if value == a else a


def unit_stats(model: DiscoModel, unit, t=1, y=1, treatment: str = "T",
               outcome: str = "Y") -> UnitStats:
    """Compute a unit's identifiable stats from layer valuations.

    The treatment must be assigned by its own noise alone (no
    endogenous parents); otherwise the derived observational joints
    would not match the factual law and every formula downstream
    would silently lie.
    """
    t_domain = _binary(model, treatment)
    _binary(model, outcome)
    _complement(t_domain, t)
    if model.function_of[treatment].parents:
        raise TreatmentNotRootError(
            f"treatment {treatment!r} has endogenous parents "
            f"{model.function_of[treatment].parents!r}")
    tp = _complement(t_domain, t)
    p_t = layer1(model, unit, {treatment: t})
    p_y_t = layer2(model, unit, World(0, do({treatment: t})), {outcome: y})
    p_y_tp = layer2(model, unit, World(0, do({treatment: tp})), {outcome: y})
    return UnitStats.from_marginals(p_t, p_y_t, p_y_tp)


def stats_from_rct(rows: Sequence[tuple], t=1, y=1) -> UnitStats:
    """Stats from factual (unit, arm, outcome) rows of a randomized trial.

    Arm shares estimate P(t); arm means estimate the interventional
    outcome probabilities.  Counts convert to exact Fractions so the
    derived report is exact for literal tables.
    """
    kept = [(row[1], row[2]) for row in rows if row[2] is not None]
    n = len(kept)
    if n == 0:
        raise ZeroProbabilityEvidenceError("dataset has no observed outcomes")
    t_rows = [outcome for arm, outcome in kept if arm == t]
    c_rows = [outcome for arm, outcome in kept if arm != t]
    if not t_rows or not c_rows:
        raise ZeroProbabilityEvidenceError("dataset lacks one of the two arms")
    p_t = Fraction(len(t_rows), n)
    p_y_t = Fraction(sum(1 for v in t_rows if v == y), len(t_rows))
    p_y_tp = Fraction(sum(1 for v in c_rows if v == y), len(c_rows))
    return UnitStats.from_marginals(p_t, p_y_t, p_y_tp)


def pns_bounds(stats: UnitStats) -> Interval:
    """Tight bounds on the complier probability from identifiable stats."""
    lower = max(
        Fraction(0),
        stats.p_y_t - stats.p_y_tp,
        stats.p_y - stats.p_y_tp,
        stats.p_y_t - stats.p_y,
    )
    upper = min(
        stats.p_y_t,
        1 - stats.p_y_tp,
        stats.p_t_y + stats.p_tp_yp,
        stats.p_y_t - stats.p_y_tp + stats.p_t_yp + stats.p_tp_y,
    )
    if lower > upper:
        raise UndefinedPnError(
            "inconsistent stats: complier lower bound exceeds upper bound")
    return (lower, upper)


def pn_bounds(stats: UnitStats) -> Interval:
    """Tight bounds on the necessity probability; needs P(t, y) > 0."""
    if stats.p_t_y == 0:
        raise UndefinedPnError(
            "necessity is conditioned on (t, y), which has probability zero")
    lower = max(Fraction(0), (stats.p_y - stats.p_y_tp) / stats.p_t_y)
    upper = min(Fraction(1),
                ((1 - stats.p_y_tp) - stats.p_tp_yp) / stats.p_t_y)
    lower = min(max(lower, Fraction(0)), Fraction(1))
    upper = min(max(upper, Fraction(0)), Fraction(1))
    if lower > upper:
        raise UndefinedPnError(
            "inconsistent stats: necessity lower bound exceeds upper bound")
    return (lower, upper)


def pns_point_icn(stats: UnitStats) -> Prob:
    """Complier probability under independent counterfactual noises.

    The joint factors into the product of the two interventional
    marginals; the value always lies inside :func:`pns_bounds`.
    """
    return stats.p_y_t * (1 - stats.p_y_tp)


def population_bounds(stats: UnitStats) -> tuple[Interval, Interval]:
    """The same bound formulas applied to population-level stats."""
    return pns_bounds(stats), pn_bounds(stats)


def poc_worlds(model: DiscoModel, t=1, treatment: str = "T",
               include_factual: bool = True) -> tuple[World, ...]:
    """Standard world layout for causation queries.

    World 0 intervenes with t, world 1 with the complementary value,
    and world 2 (optional) is the factual world used for conditioning.
    Explicit joint tuples for couplings over these worlds follow the
    same order.
    """
    t_domain = _binary(model, treatment)
    tp = _complement(t_domain, t)
    worlds = [World(0, do({treatment: t})), World(1, do({treatment: tp}))]
    if include_factual:
        worlds.append(factual_world(2))
    return tuple(worlds)


def exact_poc(model: DiscoModel, unit, coupling: Coupling, t=1, y=1,
              treatment: str = "T", outcome: str = "Y") -> PoCReport:
    """Exact response-type probabilities under a known coupling.

    The coupling must contain the worlds do(t) and do(t'); necessity
    and sufficiency additionally need the factual world and come back
    as None when it is absent.  All values land inside the intervals
    computed from the same model's stats.
    """
    t_domain = _binary(model, treatment)
    y_domain = _binary(model, outcome)
    tp = _complement(t_domain, t)
    yp = _complement(y_domain, y)

    w_t = coupling.find_world(do({treatment: t}))
    w_tp = coupling.find_world(do({treatment: tp}))
    if w_t is None or w_tp is None:
        raise UncoveredWorldError(
            f"coupling must contain the worlds do({treatment}={t!r}) and "
            f"do({treatment}={tp!r})")
    d = coupling.find_world(do())

    def joint(y_val_t, y_val_tp) -> Prob:
        event = CrossWorldEvent((
            (w_t.id, outcome, y_val_t),
            (w_tp.id, outcome, y_val_tp),
        ))
        return layer3(model, unit, coupling, event)

    complier = joint(y, yp)
    always = joint(y, y)
    never = joint(yp, yp)
    defier = joint(yp, y)

    pn = None
    ps = None
    if d is not None:
        evidence_ty = single_world_event(d.id, {treatment: t, outcome: y})
        p_t_y = layer3(model, unit, coupling, evidence_ty)
        if p_t_y == 0:
            raise ZeroProbabilityEvidenceError(
                "necessity is conditioned on (t, y), which has "
                "probability zero")
        pn = conditional(model, unit, coupling,
                         single_world_event(w_tp.id, {outcome: yp}),
                         evidence_ty)
        evidence_tpyp = single_world_event(d.id, {treatment: tp, outcome: yp})
        p_tp_yp = layer3(model, unit, coupling, evidence_tpyp)
        if p_tp_yp == 0:
            raise ZeroProbabilityEvidenceError(
                "sufficiency is conditioned on (t', y'), which has "
                "probability zero")
        ps = conditional(model, unit, coupling,
                         single_world_event(w_t.id, {outcome: y}),
                         evidence_tpyp)
    elif coupling.kind == INDEPENDENT:
        # Cross-world independence makes the conditioning vacuous.
        ps = layer2(model, unit, w_t, {outcome: y})

    stats = unit_stats(model, unit, t=t, y=y, treatment=treatment,
                       outcome=outcome)
    pns_iv = pns_bounds(stats)
    pn_iv = pn_bounds(stats) if stats.p_t_y != 0 else None

    return PoCReport(
        pns=complier,
        pn=pn,
        ps=ps,
        response_types={
            "complier": complier,
            "always_taker": always,
            "never_taker": never,
            "defier": defier,
        },
        pns_interval=pns_iv,
        pn_interval=pn_iv,
    )


def mediator_pns_upper(model: DiscoModel, unit, t=1, y=1,
                       mediator: str = "Z", treatment: str = "T",
                       outcome: str = "Y") -> Prob:
    """Upper bound on the complier probability through a partial mediator.

    Sums, over pairs of mediator values in the two worlds, the smaller
    of the two conditional outcome probabilities times the smaller of
    the two interventional mediator probabilities.  Mediator values
    with zero observational mass under the matching arm contribute
    nothing.  Requires the treatment among the mediator's parents and
    the mediator among the outcome's parents.
    """
    t_domain = _binary(model, treatment)
    y_domain = _binary(model, outcome)
    tp = _complement(t_domain, t)
    yp = _complement(y_domain, y)
    var = model.variables_by_name.get(mediator)
    if var is None:
        raise NotAMediatorError(f"no variable named {mediator!r}")
    if treatment not in model.parent_map.get(mediator, ()):
        raise NotAMediatorError(
            f"{mediator!r} is not a mediator: {treatment!r} is not among "
            f"its parents")
    if mediator not in model.parent_map.get(outcome, ()):
        raise NotAMediatorError(
            f"{mediator!r} is not a mediator: it is not a parent of "
            f"{outcome!r}")

    w_t = World(0, do({treatment: t}))
    w_tp = World(0, do({treatment: tp}))

    def cond_outcome(y_val, z_val, t_val) -> Optional[Prob]:
        denom = layer1(model, unit, {mediator: z_val, treatment: t_val})
        if denom == 0:
            return None
        num = layer1(model, unit,
                     {outcome: y_val, mediator: z_val, treatment: t_val})
        return num / denom

    total: Prob = Fraction(0)
    for z in var.domain:
        q = cond_outcome(y, z, t)
        if q is None:
            continue
        p_z_t = layer2(model, unit, w_t, {mediator: z})
        for zp in var.domain:
            r = cond_outcome(yp, zp, tp)
            if r is None:
                continue
            p_zp_tp = layer2(model, unit, w_tp, {mediator: zp})
            total += min(q, r) * min(p_z_t, p_zp_tp)
    return total
