"""Benefit-function evaluation and bounds for unit selection.

Selecting an individual pays beta, gamma, theta or delta depending on
whether they are a complier, always-taker, never-taker or defier.  The
expected benefit splits into an identifiable part W plus sigma times
the complier probability, with sigma = beta - gamma - theta + delta
forced by the algebra (it is computed here, never user-supplied).
When the coupling is unknown, the complier bounds translate directly
into benefit bounds with width |sigma| times the interval width.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import (
    Interval,
    UnitStats,
    exact_poc,
    pns_bounds,
    unit_stats,
)
from .model import DiscoModel
from .rational import Prob, to_prob
from .worlds import Coupling


@dataclass(frozen=True)
class BenefitSpec:
    """Payoffs for the four response types."""

    beta: Prob
    gamma: Prob
    theta: Prob
    delta: Prob

    def __post_init__(self):
        for name in ("beta", "gamma", "theta", "delta"):
            object.__setattr__(self, name, to_prob(getattr(self, name)))

    @property
    def sigma(self) -> Prob:
        return self.beta - self.gamma - self.theta + self.delta

    def shifted(self, c) -> "BenefitSpec":
        c = to_prob(c)
        return BenefitSpec(self.beta + c, self.gamma + c,
                           self.theta + c, self.delta + c)


@dataclass(frozen=True)
class BenefitReport:
    """Benefit of selecting one unit: exact or bounded."""

    w: Prob
    sigma: Prob
    f: Optional[Prob] = None
    f_interval: Optional[Interval] = None
    pns: Optional[Prob] = None
    pns_interval: Optional[Interval] = None


def benefit_decompose(stats: UnitStats, spec: BenefitSpec) -> tuple[Prob, Prob]:
    """Split the benefit into its identifiable part W and the slope sigma.

    For every coupling, the exact benefit equals W + sigma times the
    exact complier probability.
    """
    w = ((spec.gamma - spec.delta) * stats.p_y_t
         + spec.delta * stats.p_y_tp
         + spec.theta * (1 - stats.p_y_tp))
    return w, spec.sigma


def benefit_exact(model: DiscoModel, unit, coupling: Coupling,
                  spec: BenefitSpec, t=1, y=1, treatment: str = "T",
                  outcome: str = "Y") -> Prob:
    """Payoff-weighted sum of the four exact response-type probabilities."""
    report = exact_poc(model, unit, coupling, t=t, y=y,
                       treatment=treatment, outcome=outcome)
    types = report.response_types
    return (spec.beta * types["complier"]
            + spec.gamma * types["always_taker"]
            + spec.theta * types["never_taker"]
            + spec.delta * types["defier"])


def benefit_bounds(stats: UnitStats, spec: BenefitSpec) -> Interval:
    """Benefit interval induced by the complier bounds."""
    w, sigma = benefit_decompose(stats, spec)
    lo, hi = pns_bounds(stats)
    if sigma >= 0:
        return (w + sigma * lo, w + sigma * hi)
    return (w + sigma * hi, w + sigma * lo)


def evaluate_benefit(model: DiscoModel, unit, spec: BenefitSpec, t=1, y=1,
                     coupling: Optional[Coupling] = None,
                     treatment: str = "T", outcome: str = "Y") -> BenefitReport:
    """Full benefit report: exact when a coupling is known, else bounded."""
    stats = unit_stats(model, unit, t=t, y=y, treatment=treatment,
                       outcome=outcome)
    w, sigma = benefit_decompose(stats, spec)
    if coupling is not None:
        report = exact_poc(model, unit, coupling, t=t, y=y,
                           treatment=treatment, outcome=outcome)
        f = benefit_exact(model, unit, coupling, spec, t=t, y=y,
                          treatment=treatment, outcome=outcome)
        return BenefitReport(w=w, sigma=sigma, f=f, pns=report.pns,
                             pns_interval=report.pns_interval)
    lo, hi = benefit_bounds(stats, spec)
    return BenefitReport(w=w, sigma=sigma, f_interval=(lo, hi),
                         pns_interval=pns_bounds(stats))


def rank_by_benefit(model: DiscoModel, spec: BenefitSpec, t=1, y=1,
                    coupling: Optional[Coupling] = None,
                    units: Optional[Sequence] = None,
                    treatment: str = "T", outcome: str = "Y") -> list[tuple]:
    """Units sorted by benefit, best first.

    Exact values rank directly; without a coupling, interval midpoints
    rank instead.  Returns (unit, score, report) triples.
    """
    chosen = model.prior.units if units is None else units
    ranked = []
    for unit in chosen:
        report = evaluate_benefit(model, unit, spec, t=t, y=y,
                                  coupling=coupling, treatment=treatment,
                                  outcome=outcome)
        if report.f is not None:
            score = report.f
        else:
            lo, hi = report.f_interval
            score = (lo + hi) / 2
        ranked.append((unit, score, report))
    ranked.sort(key=lambda item: item[1], reverse=True)
    return ranked
