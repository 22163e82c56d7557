"""Randomized small-model corpus shared by the property suites.

Models have a root binary treatment T, an optional binary covariate or
mediator X, and a binary outcome Y, each with a private noise of two
or three values and exact rational pmfs.  Treatments are roots on
purpose: the identities under test (the triple equality, the mixture
law for P(y), the derived observational joints) require the treatment
assignment to depend on nothing but its own noise.
"""

import random
from fractions import Fraction
from itertools import product

from discoscm import build_model, copy_mixture_joint, make_coupling, poc_worlds


def _rand_pmf(rng: random.Random, k: int) -> list[str]:
    weights = [rng.randint(1, 4) for _ in range(k)]
    total = sum(weights)
    return [str(Fraction(w, total)) for w in weights]


def _rand_table(rng: random.Random, units, parent_domains, noise_domain,
                target_domain) -> list[dict]:
    rows = []
    for unit in units:
        for combo in product(*parent_domains):
            for e in noise_domain:
                rows.append({"unit": unit, "parents": list(combo), "noise": e,
                             "value": rng.choice(target_domain)})
    return rows


def random_model(rng: random.Random, with_covariate=None,
                 covariate_into_y=None, mediated=False, x_values=None):
    """One random model; T is always a root binary variable."""
    n_units = rng.randint(1, 2)
    units = [f"u{i}" for i in range(n_units)]
    binary = [0, 1]

    if with_covariate is None:
        with_covariate = rng.random() < 0.6
    noises = [{"name": "e_t", "domain": binary, "pmf": _rand_pmf(rng, 2)}]
    variables = [{"name": "T", "domain": binary}]
    functions = [{
        "target": "T", "parents": [], "noise": "e_t",
        "table": [{"unit": "*", "parents": [], "noise": e, "value": e}
                  for e in binary],
    }]

    y_parents = ["T"]
    if with_covariate:
        k = x_values if x_values is not None else rng.randint(2, 3)
        x_domain = list(range(k))
        x_parents = ["T"] if (mediated or rng.random() < 0.5) else []
        noises.append({"name": "e_x", "domain": x_domain,
                       "pmf": _rand_pmf(rng, k)})
        variables.append({"name": "X", "domain": x_domain})
        functions.append({
            "target": "X", "parents": x_parents, "noise": "e_x",
            "table": _rand_table(
                rng, units, [binary] * len(x_parents), x_domain, x_domain),
        })
        if covariate_into_y is None:
            covariate_into_y = mediated or rng.random() < 0.7
        if covariate_into_y:
            y_parents = y_parents + ["X"]

    ky = rng.randint(2, 3)
    y_noise_domain = list(range(ky))
    noises.append({"name": "e_y", "domain": y_noise_domain,
                   "pmf": _rand_pmf(rng, ky)})
    variables.append({"name": "Y", "domain": binary})
    parent_domains = [binary if p == "T" else variables[1]["domain"]
                      for p in y_parents]
    functions.append({
        "target": "Y", "parents": y_parents, "noise": "e_y",
        "table": _rand_table(rng, units, parent_domains, y_noise_domain,
                             binary),
    })
    return build_model({
        "units": units,
        "noises": noises,
        "variables": variables,
        "functions": functions,
    })


def random_mediator_model(rng: random.Random):
    """T -> X -> Y with X forced to mediate and feed Y."""
    return random_model(rng, with_covariate=True, covariate_into_y=True,
                        mediated=True)


def corpus(seed: int, count: int, **kwargs) -> list:
    rng = random.Random(seed)
    return [random_model(rng, **kwargs) for _ in range(count)]


def lambda_grid(n_worlds: int, count: int, seed: int = 0) -> list[tuple]:
    """Copy-probability vectors spanning marginal-preserving couplings."""
    rng = random.Random(seed)
    grid = [tuple(Fraction(0) for _ in range(n_worlds)),
            tuple(Fraction(1) for _ in range(n_worlds))]
    levels = [Fraction(0), Fraction(1, 4), Fraction(1, 2),
              Fraction(3, 4), Fraction(1)]
    while len(grid) < count:
        cand = tuple(rng.choice(levels) for _ in range(n_worlds))
        if cand not in grid:
            grid.append(cand)
    return grid


def poc_coupling_grid(model, count: int = 21, seed: int = 0,
                      include_factual: bool = True) -> list:
    """Explicit marginal-preserving couplings over the causation worlds."""
    worlds = poc_worlds(model, include_factual=include_factual)
    couplings = []
    for lambdas in lambda_grid(len(worlds), count, seed):
        joint = {
            noise.name: copy_mixture_joint(noise, lambdas)
            for noise in model.noises
        }
        couplings.append(make_coupling("explicit", worlds, model,
                                       joint=joint))
    return couplings
