"""Walk through the three valuation layers on a small causal model.

The model behind this demo is an eight-unit trial: a fair-coin
treatment T and a binary outcome Y that succeeds with chance 3/4 under
treatment and 1/2 under control, identically for every unit.  All
probabilities below are exact rationals.
"""

from fractions import Fraction

from discoscm import (
    CrossWorldEvent,
    World,
    abduct,
    do,
    fixture_path,
    layer1,
    layer2,
    layer3,
    load_model,
    make_coupling,
    population_query,
    verify_theorem1,
)

model = load_model(str(fixture_path("table1.model.json")))
unit = "u1"

print("== Layer 1: the factual world")
print("P(Y=1)        =", layer1(model, unit, {"Y": 1}))
print("P(T=1, Y=1)   =", layer1(model, unit, {"T": 1, "Y": 1}))

print()
print("== Layer 2: one intervention, fresh noise copy")
treated = World(1, do(T=1))
control = World(1, do(T=0))
print("P(Y=1 | do T=1) =", layer2(model, unit, treated, {"Y": 1}))
print("P(Y=1 | do T=0) =", layer2(model, unit, control, {"Y": 1}))

print()
print("== Layer 3: joint events across coupled worlds")
worlds = (World(0, do(T=1)), World(1, do(T=0)))
for kind in ("independent", "shared"):
    coupling = make_coupling(kind, worlds, model)
    complier = layer3(model, unit, coupling,
                      CrossWorldEvent(((0, "Y", 1), (1, "Y", 0))))
    print(f"P(Y(1)=1, Y(0)=0) under {kind:11s} coupling =", complier)

print()
print("== Retaking the test under identical conditions")
# Two worlds with the same intervention are distinct worlds with
# distinct noise copies: a lucky outcome need not repeat.
retake = (World(0, do(T=1)), World(1, do(T=1)))
coupling = make_coupling("independent", retake, model)
both_pass = layer3(model, unit, coupling,
                   CrossWorldEvent(((0, "Y", 1), (1, "Y", 1))))
print("P(pass twice | do T=1 twice, independent copies) =", both_pass)

print()
print("== The three valuations that coincide per unit")
report = verify_theorem1(model, unit, {"T": 1}, {"Y": 1}, {"T": 0, "Y": 1})
print("P(Y(1)=1 | T=0, Y=1) =", report.counterfactual_given_evidence)
print("P(Y(1)=1)            =", report.interventional)
print("P(Y=1 | T=1)         =", report.observational)

print()
print("== Population queries: abduction, valuation, reduction")
posterior = abduct(model, {"T": 0, "Y": 1})
print("posterior over units given (T=0, Y=1):",
      {u: str(w) for u, w in list(posterior.as_dict().items())[:3]}, "...")
value = population_query(model, {"T": 0, "Y": 1}, World(1, do(T=1)), {"Y": 1})
print("P(Y(1)=1 | T=0, Y=1) at population level =", value)
assert value == Fraction(3, 4)
