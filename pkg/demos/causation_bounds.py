"""Probability-of-causation: exact values under known couplings, bounds
without them, and the mediator refinement.

Sweeping a family of marginal-preserving couplings shows the exact
complier probability filling out its theoretical interval; the interval
itself needs nothing beyond the three identifiable scalars P(t),
P(y under do t) and P(y under do t').
"""

from fractions import Fraction

from discoscm import (
    exact_poc,
    fixture_path,
    load_model,
    make_coupling,
    mediator_pns_upper,
    pn_bounds,
    pns_bounds,
    pns_point_icn,
    poc_worlds,
    unit_stats,
)

model = load_model(str(fixture_path("table1.model.json")))
stats = unit_stats(model, "u1")

print("== Identifiable stats of the trial-table model")
print("P(t) =", stats.p_t, " P(y_t) =", stats.p_y_t,
      " P(y_t') =", stats.p_y_tp, " P(y) =", stats.p_y)

print()
print("== Bounds from stats alone")
print("complier probability in", pns_bounds(stats))
print("necessity  probability in", pn_bounds(stats))
print("independent-noise point value:", pns_point_icn(stats))

print()
print("== Exact values once a coupling is known")
worlds = poc_worlds(model)
for kind in ("independent", "shared"):
    coupling = make_coupling(kind, worlds, model)
    report = exact_poc(model, "u1", coupling)
    print(f"{kind:11s}: complier={report.pns} necessity={report.pn} "
          f"sufficiency={report.ps}")
    print(" " * 13 + "response types:",
          {k: str(v) for k, v in report.response_types.items()})

print()
print("== Sweeping the coupling: mu, q = P(Y(1)=1, Y(0)=1), complier")
noise = model.noise("e_y")
quarter = Fraction(1, 4)
anti = {(noise.domain[i], noise.domain[3 - i]): quarter for i in range(4)}
diag = {(e, e): quarter for e in noise.domain}
print("mu,q,complier")
for i in range(11):
    mu = Fraction(i, 10)
    pair = {}
    for key in set(anti) | set(diag):
        p = mu * diag.get(key, 0) + (1 - mu) * anti.get(key, 0)
        if p:
            pair[key] = p
    three = {}
    for (a, b), p in pair.items():
        for e, pe in zip(noise.domain, noise.pmf):
            three[(a, b, e)] = p * pe
    coupling = make_coupling("explicit", worlds, model, joint={"e_y": three})
    report = exact_poc(model, "u1", coupling)
    q = Fraction(1, 4) + mu / 4
    print(f"{float(mu)},{float(q)},{float(report.pns)}")

print()
print("== A mediator can tighten the upper bound")
tight = load_model(str(fixture_path("mediator_tight.model.json")))
generic = pns_bounds(unit_stats(tight, "u"))[1]
refined = mediator_pns_upper(tight, "u")
print("generic upper bound :", generic)
print("mediator upper bound:", refined)

plugin = load_model(str(fixture_path("mediator_plugin.model.json")))
print("plug-in mediator instance:", mediator_pns_upper(plugin, "u"),
      "=", float(mediator_pns_upper(plugin, "u")))
