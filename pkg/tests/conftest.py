from fractions import Fraction

import pytest

from discoscm import build_model, fixture_path, load_model


def table1_spec() -> dict:
    """Homogeneous eight-unit binary model behind the trial table.

    T is a fair coin; Y responds to one of four equally likely noise
    values, succeeding on three of them under treatment and two under
    control.
    """
    t_table = [
        {"unit": "*", "parents": [], "noise": 0, "value": 0},
        {"unit": "*", "parents": [], "noise": 1, "value": 1},
    ]
    y_table = []
    for t in (0, 1):
        threshold = 3 if t == 1 else 2
        for e in range(4):
            y_table.append({"unit": "*", "parents": [t], "noise": e,
                            "value": 1 if e < threshold else 0})
    return {
        "units": [f"u{i}" for i in range(1, 9)],
        "noises": [
            {"name": "e_t", "domain": [0, 1], "pmf": ["1/2", "1/2"]},
            {"name": "e_y", "domain": [0, 1, 2, 3], "pmf": ["1/4"] * 4},
        ],
        "variables": [
            {"name": "T", "domain": [0, 1]},
            {"name": "Y", "domain": [0, 1]},
        ],
        "functions": [
            {"target": "T", "parents": [], "noise": "e_t", "table": t_table},
            {"target": "Y", "parents": ["T"], "noise": "e_y",
             "table": y_table},
        ],
    }


def identity_spec() -> dict:
    """Smallest legal model: one binary Y set by a fair coin."""
    return {
        "units": ["u"],
        "noises": [{"name": "e", "domain": [0, 1], "pmf": ["1/2", "1/2"]}],
        "variables": [{"name": "Y", "domain": [0, 1]}],
        "functions": [{"target": "Y", "parents": [], "noise": "e", "table": [
            {"unit": "*", "parents": [], "noise": 0, "value": 0},
            {"unit": "*", "parents": [], "noise": 1, "value": 1},
        ]}],
    }


def deterministic_yt_spec(p_t="1/2") -> dict:
    """Y copies T exactly; T is a coin with P(T=1) = p_t."""
    return {
        "units": ["u"],
        "noises": [
            {"name": "e_t", "domain": [0, 1],
             "pmf": [str(1 - Fraction(p_t)), str(Fraction(p_t))]},
            {"name": "e_y", "domain": [0], "pmf": [1]},
        ],
        "variables": [
            {"name": "T", "domain": [0, 1]},
            {"name": "Y", "domain": [0, 1]},
        ],
        "functions": [
            {"target": "T", "parents": [], "noise": "e_t", "table": [
                {"unit": "*", "parents": [], "noise": 0, "value": 0},
                {"unit": "*", "parents": [], "noise": 1, "value": 1},
            ]},
            {"target": "Y", "parents": ["T"], "noise": "e_y", "table": [
                {"unit": "*", "parents": [0], "noise": 0, "value": 0},
                {"unit": "*", "parents": [1], "noise": 0, "value": 1},
            ]},
        ],
    }


@pytest.fixture(scope="session")
def table1_model():
    return build_model(table1_spec())


@pytest.fixture(scope="session")
def identity_model():
    return build_model(identity_spec())


@pytest.fixture(scope="session")
def deterministic_model():
    return build_model(deterministic_yt_spec())


@pytest.fixture(scope="session")
def fiveunits_model():
    return load_model(str(fixture_path("fiveunits.model.json")))


@pytest.fixture(scope="session")
def mediator_plugin_model():
    return load_model(str(fixture_path("mediator_plugin.model.json")))


@pytest.fixture(scope="session")
def mediator_tight_model():
    return load_model(str(fixture_path("mediator_tight.model.json")))
