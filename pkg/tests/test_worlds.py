import random
from fractions import Fraction

import pytest

from discoscm import (
    build_model,
    copy_mixture_joint,
    coupling_marginals_ok,
    do,
    factual_world,
    make_coupling,
    make_world,
    noise_joint,
)
from discoscm.errors import (
    MarginalMismatchError,
    OutOfDomainError,
    UnknownVariableError,
)
from discoscm.worlds import World

from _corpus import lambda_grid, random_model
from conftest import identity_spec


@pytest.fixture()
def coin_model():
    return build_model(identity_spec())


def test_make_world_replaces_equation(table1_model):
    world = make_world(table1_model, do(T=1), world_id=1)
    assert world.intervention.as_dict() == {"T": 1}
    from discoscm import evaluate_unit_world

    values = evaluate_unit_world(table1_model, "u1", world,
                                 {"e_t": 0, "e_y": 3})
    assert values["T"] == 1


def test_make_world_empty_is_factual(table1_model):
    world = make_world(table1_model, do(), world_id=0)
    assert world.factual


def test_make_world_multi_assignment(table1_model):
    world = make_world(table1_model, do(Y=1, T=0), world_id=2)
    assert world.intervention.as_dict() == {"T": 0, "Y": 1}
    from discoscm import evaluate_unit_world

    values = evaluate_unit_world(table1_model, "u1", world,
                                 {"e_t": 1, "e_y": 0})
    assert values == {"T": 0, "Y": 1}


def test_make_world_unknown_variable(table1_model):
    with pytest.raises(UnknownVariableError):
        make_world(table1_model, do(Q=1))


def test_make_world_out_of_domain(table1_model):
    with pytest.raises(OutOfDomainError):
        make_world(table1_model, do(T=7))


def test_independent_coupling_is_product(coin_model):
    worlds = (factual_world(0), World(1, do(Y=1)))
    coupling = make_coupling("independent", worlds, coin_model)
    joint = noise_joint(coupling, coin_model, "e")
    assert joint == {
        (0, 0): Fraction(1, 4), (0, 1): Fraction(1, 4),
        (1, 0): Fraction(1, 4), (1, 1): Fraction(1, 4),
    }


def test_shared_coupling_is_diagonal(coin_model):
    worlds = (factual_world(0), World(1, do(Y=1)))
    coupling = make_coupling("shared", worlds, coin_model)
    joint = noise_joint(coupling, coin_model, "e")
    assert joint == {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}


def test_explicit_marginal_mismatch_reported():
    spec = identity_spec()
    spec["noises"][0]["pmf"] = ["3/5", "2/5"]
    model = build_model(spec)
    worlds = (factual_world(0), World(1, do(Y=1)))
    table = {(0, 0): "1/2", (1, 1): "1/2"}
    with pytest.raises(MarginalMismatchError) as err:
        make_coupling("explicit", worlds, model, joint={"e": table})
    message = str(err.value)
    assert "e" in message and "world" in message


def test_marginals_ok_for_builtin_kinds(table1_model):
    worlds = (factual_world(0), World(1, do(T=1)))
    for kind in ("independent", "shared"):
        coupling = make_coupling(kind, worlds, table1_model)
        assert coupling_marginals_ok(coupling, table1_model).ok


def test_marginals_report_per_value_deviation():
    spec = identity_spec()
    spec["noises"][0]["pmf"] = ["3/5", "2/5"]
    model = build_model(spec)
    worlds = (factual_world(0), World(1, do(Y=1)))
    from discoscm.worlds import Coupling

    bad = Coupling(worlds, "explicit",
                   {"e": {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}})
    report = coupling_marginals_ok(bad, model)
    assert not report.ok
    issue = report.issues[0]
    assert issue.noise == "e"
    assert issue.expected == Fraction(3, 5)
    assert issue.actual == Fraction(1, 2)


def test_unique_world_ids_required(coin_model):
    worlds = (factual_world(0), World(0, do(Y=1)))
    from discoscm.errors import DuplicateNameError

    with pytest.raises(DuplicateNameError):
        make_coupling("independent", worlds, coin_model)


@pytest.mark.parametrize("n_worlds", [2, 3])
def test_copy_mixture_preserves_marginals_and_mass(n_worlds):
    rng = random.Random(7)
    for _ in range(10):
        model = random_model(rng)
        worlds = tuple(World(i, do(T=1) if i else do())
                       for i in range(n_worlds))
        for lambdas in lambda_grid(n_worlds, 5, seed=3):
            joint = {
                noise.name: copy_mixture_joint(noise, lambdas)
                for noise in model.noises
            }
            coupling = make_coupling("explicit", worlds, model, joint=joint)
            assert coupling_marginals_ok(coupling, model).ok
            for noise in model.noises:
                total = sum(noise_joint(coupling, model, noise.name).values())
                assert total == 1


def test_every_kind_sums_to_one(table1_model):
    worlds = (factual_world(0), World(1, do(T=1)), World(2, do(T=0)))
    for kind in ("independent", "shared"):
        coupling = make_coupling(kind, worlds, table1_model)
        for noise in table1_model.noises:
            assert sum(noise_joint(coupling, table1_model,
                                   noise.name).values()) == 1


def test_single_world_marginal_matches_base_law(table1_model):
    # Couplings differ only cross-world: any kind marginalizes to the
    # base pmf on a single world.
    from discoscm.worlds import marginal_options

    worlds = (factual_world(0), World(1, do(T=1)))
    noise = table1_model.noise("e_y")
    explicit = make_coupling(
        "explicit", worlds, table1_model,
        joint={"e_y": copy_mixture_joint(noise, (Fraction(1, 3),
                                                 Fraction(2, 3)))})
    for coupling in (
        make_coupling("independent", worlds, table1_model),
        make_coupling("shared", worlds, table1_model),
        explicit,
    ):
        for world_id in (0, 1):
            options = dict(marginal_options(coupling, table1_model, "e_y",
                                            [world_id]))
            assert options == {
                (value,): mass
                for value, mass in zip(noise.domain, noise.pmf)
            }
