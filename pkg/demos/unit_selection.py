"""Rank heterogeneous units by the expected benefit of selecting them.

Payoffs reward compliers, tolerate always-takers, ignore never-takers
and penalize defiers.  The benefit of a unit splits into an
identifiable part W plus sigma times the complier probability, so
units can be ranked exactly under a known coupling or by interval
midpoints without one.
"""

from fractions import Fraction

from discoscm import (
    BenefitSpec,
    benefit_bounds,
    benefit_decompose,
    evaluate_benefit,
    fixture_path,
    load_model,
    make_coupling,
    poc_worlds,
    rank_by_benefit,
    unit_stats,
)

model = load_model(str(fixture_path("fiveunits.model.json")))
spec = BenefitSpec(beta=2, gamma=Fraction(1, 2), theta=0, delta=-1)
print("payoffs: beta=2 gamma=1/2 theta=0 delta=-1  -> sigma =", spec.sigma)

print()
print("== Per-unit decomposition (no coupling needed)")
for unit in model.prior.units:
    stats = unit_stats(model, unit)
    w, sigma = benefit_decompose(stats, spec)
    lo, hi = benefit_bounds(stats, spec)
    print(f"{unit}: W={w}  benefit in [{lo}, {hi}]")

print()
print("== Exact ranking under independent counterfactual noises")
coupling = make_coupling("independent", poc_worlds(model), model)
for unit, score, report in rank_by_benefit(model, spec, coupling=coupling):
    print(f"{unit}: f = {score} = {report.w} + {report.sigma}*{report.pns}")

print()
print("== Shifting all payoffs by a constant cannot change the ranking")
shifted = spec.shifted(Fraction(5, 2))
before = [u for u, _, _ in rank_by_benefit(model, spec, coupling=coupling)]
after = [u for u, _, _ in rank_by_benefit(model, shifted, coupling=coupling)]
print("before:", " > ".join(before))
print("after :", " > ".join(after))
assert before == after

print()
print("== Without a coupling, rank by interval midpoint")
for unit, score, report in rank_by_benefit(model, spec):
    lo, hi = report.f_interval
    print(f"{unit}: midpoint {score}  interval [{lo}, {hi}]")

print()
print("== A complier-only payoff turns the benefit into the complier "
      "probability")
pns_spec = BenefitSpec(1, 0, 0, 0)
report = evaluate_benefit(model, "u1", pns_spec, coupling=coupling)
print("u1: f =", report.f, " equals its complier probability")
