import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from discoscm import (
    UnitStats,
    build_model,
    exact_poc,
    make_coupling,
    mediator_pns_upper,
    pn_bounds,
    pns_bounds,
    pns_point_icn,
    poc_worlds,
    population_bounds,
    stats_from_rct,
    unit_stats,
)
from discoscm.errors import (
    NonBinaryVariableError,
    NotAMediatorError,
    TreatmentNotRootError,
    TypeMismatchError,
    UndefinedPnError,
)

from _corpus import poc_coupling_grid, random_model
from conftest import deterministic_yt_spec

_probs = st.fractions(min_value=0, max_value=1, max_denominator=60)


def test_unit_stats_table1(table1_model):
    s = unit_stats(table1_model, "u1")
    assert (s.p_t, s.p_y_t, s.p_y_tp) == (
        Fraction(1, 2), Fraction(3, 4), Fraction(1, 2))
    assert s.p_y == Fraction(5, 8)
    assert s.p_t_y == Fraction(3, 8)
    assert s.p_tp_yp == Fraction(1, 4)
    assert s.p_t_yp == Fraction(1, 8)
    assert s.p_tp_y == Fraction(1, 4)


def test_unit_stats_deterministic(deterministic_model):
    s = unit_stats(deterministic_model, "u")
    assert (s.p_y_t, s.p_y_tp, s.p_y) == (1, 0, Fraction(1, 2))


@given(p_t=_probs, q=_probs)
def test_unit_stats_lemma_degenerate(p_t, q):
    s = UnitStats.from_marginals(p_t, q, q)
    assert s.p_y == q


def test_unit_stats_requires_binary(table1_model):
    with pytest.raises(NonBinaryVariableError):
        unit_stats(table1_model, "u1", treatment="e_t")


def test_unit_stats_requires_root_treatment(mediator_tight_model):
    with pytest.raises(TreatmentNotRootError):
        unit_stats(mediator_tight_model, "u", treatment="Z")


def test_pns_bounds_table1(table1_model):
    s = unit_stats(table1_model, "u1")
    assert pns_bounds(s) == (Fraction(1, 4), Fraction(1, 2))


def test_pns_bounds_deterministic(deterministic_model):
    s = unit_stats(deterministic_model, "u")
    assert pns_bounds(s) == (1, 1)


@given(p_t=_probs, q=_probs)
def test_pns_bounds_no_effect_lower_zero(p_t, q):
    s = UnitStats.from_marginals(p_t, q, q)
    assert pns_bounds(s)[0] == 0


def test_pn_bounds_table1(table1_model):
    s = unit_stats(table1_model, "u1")
    assert pn_bounds(s) == (Fraction(1, 3), Fraction(2, 3))


def test_pn_bounds_deterministic(deterministic_model):
    s = unit_stats(deterministic_model, "u")
    assert pn_bounds(s) == (1, 1)


def test_pn_bounds_undefined():
    s = UnitStats.from_marginals(Fraction(0), Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(UndefinedPnError):
        pn_bounds(s)


def test_pns_point_icn_table1(table1_model):
    s = unit_stats(table1_model, "u1")
    assert pns_point_icn(s) == Fraction(3, 8)


@given(p_t=_probs, a=_probs, b=_probs)
def test_pns_point_icn_inside_bounds(p_t, a, b):
    s = UnitStats.from_marginals(p_t, a, b)
    lo, hi = pns_bounds(s)
    point = pns_point_icn(s)
    assert lo <= point <= hi


def test_pns_point_icn_extremes(deterministic_model):
    s = unit_stats(deterministic_model, "u")
    assert pns_point_icn(s) == 1
    s0 = UnitStats.from_marginals(Fraction(1, 2), Fraction(0), Fraction(1, 3))
    assert pns_point_icn(s0) == 0


@given(p_t=_probs, a=_probs, b=_probs)
def test_pn_bounds_interval_valid(p_t, a, b):
    s = UnitStats.from_marginals(p_t, a, b)
    if s.p_t_y == 0:
        with pytest.raises(UndefinedPnError):
            pn_bounds(s)
        return
    lo, hi = pn_bounds(s)
    assert 0 <= lo <= hi <= 1


def test_exact_poc_shared_deterministic(deterministic_model):
    worlds = poc_worlds(deterministic_model)
    coupling = make_coupling("shared", worlds, deterministic_model)
    report = exact_poc(deterministic_model, "u", coupling)
    assert report.response_types == {
        "complier": 1, "always_taker": 0, "never_taker": 0, "defier": 0}
    assert report.pns == 1
    assert report.pn == 1
    assert report.ps == 1


def test_exact_poc_independent_table1(table1_model):
    worlds = poc_worlds(table1_model)
    coupling = make_coupling("independent", worlds, table1_model)
    report = exact_poc(table1_model, "u1", coupling)
    assert report.pns == Fraction(3, 8)
    assert report.response_types["always_taker"] == Fraction(3, 8)
    assert report.response_types["never_taker"] == Fraction(1, 8)
    assert report.response_types["defier"] == Fraction(1, 8)
    # Cross-world independence: necessity equals 1 - P(y under do(t')),
    # sufficiency equals P(y under do(t)).
    assert report.pn == Fraction(1, 2)
    assert report.ps == Fraction(3, 4)


def _antitone_table(domain, mass):
    k = len(domain)
    return {(domain[i], domain[k - 1 - i]): mass for i in range(k)}


def _table1_sweep_coupling(model, mu: Fraction):
    """Two do-worlds plus factual; outcome joint q = 1/4 + mu/4."""
    worlds = poc_worlds(model)
    noise = model.noise("e_y")
    quarter = Fraction(1, 4)
    anti = _antitone_table(noise.domain, quarter)
    diag = {(e, e): quarter for e in noise.domain}
    pair = {}
    for key in set(anti) | set(diag):
        pair[key] = mu * diag.get(key, 0) + (1 - mu) * anti.get(key, 0)
    three = {}
    for (a, b), p in pair.items():
        if p == 0:
            continue
        for e, pe in zip(noise.domain, noise.pmf):
            three[(a, b, e)] = p * pe
    return make_coupling("explicit", worlds, model, joint={"e_y": three})


def test_frechet_sweep_attains_both_endpoints(table1_model):
    values = []
    for mu in [Fraction(i, 8) for i in range(9)]:
        coupling = _table1_sweep_coupling(table1_model, mu)
        report = exact_poc(table1_model, "u1", coupling)
        q = Fraction(1, 4) + mu / 4
        assert report.pns == Fraction(3, 4) - q
        lo, hi = report.pns_interval
        assert lo <= report.pns <= hi
        values.append(report.pns)
    assert min(values) == Fraction(1, 4)
    assert max(values) == Fraction(1, 2)


def test_exact_poc_response_types_partition_on_grid():
    rng = random.Random(23)
    for _ in range(6):
        model = random_model(rng)
        unit = model.prior.units[0]
        for coupling in poc_coupling_grid(model, count=5, seed=1):
            report_possible = True
            s = unit_stats(model, unit)
            if s.p_t_y == 0 or s.p_tp_yp == 0:
                report_possible = False
            if not report_possible:
                continue
            report = exact_poc(model, unit, coupling)
            total = sum(report.response_types.values())
            assert total == 1


def test_exact_poc_containment_on_grid():
    rng = random.Random(41)
    checked = 0
    for _ in range(8):
        model = random_model(rng)
        unit = model.prior.units[0]
        s = unit_stats(model, unit)
        if s.p_t_y == 0 or s.p_tp_yp == 0:
            continue
        pns_lo, pns_hi = pns_bounds(s)
        pn_iv = pn_bounds(s)
        for coupling in poc_coupling_grid(model, count=8, seed=2):
            report = exact_poc(model, unit, coupling)
            assert pns_lo <= report.pns <= pns_hi
            assert pn_iv[0] <= report.pn <= pn_iv[1]
            checked += 1
    assert checked >= 20


def test_icn_consistency_exact():
    rng = random.Random(5)
    for _ in range(8):
        model = random_model(rng)
        unit = model.prior.units[0]
        worlds = poc_worlds(model, include_factual=False)
        coupling = make_coupling("independent", worlds, model)
        report = exact_poc(model, unit, coupling)
        assert report.pns == pns_point_icn(unit_stats(model, unit))


def test_mediator_plugin_value(mediator_plugin_model):
    upper = mediator_pns_upper(mediator_plugin_model, "u")
    assert upper == Fraction(37, 50)


def test_mediator_constant_collapses_to_generic():
    spec = {
        "units": ["u"],
        "noises": [
            {"name": "e_t", "domain": [0, 1], "pmf": ["1/2", "1/2"]},
            {"name": "e_z", "domain": [0], "pmf": [1]},
            {"name": "e_y", "domain": [0, 1, 2, 3], "pmf": ["1/4"] * 4},
        ],
        "variables": [
            {"name": "T", "domain": [0, 1]},
            {"name": "Z", "domain": [0]},
            {"name": "Y", "domain": [0, 1]},
        ],
        "functions": [
            {"target": "T", "parents": [], "noise": "e_t", "table": [
                {"unit": "*", "parents": [], "noise": e, "value": e}
                for e in (0, 1)]},
            {"target": "Z", "parents": ["T"], "noise": "e_z", "table": [
                {"unit": "*", "parents": [t], "noise": 0, "value": 0}
                for t in (0, 1)]},
            {"target": "Y", "parents": ["T", "Z"], "noise": "e_y", "table": [
                {"unit": "*", "parents": [t, 0], "noise": e,
                 "value": 1 if e < (3 if t else 2) else 0}
                for t in (0, 1) for e in range(4)]},
        ],
    }
    model = build_model(spec)
    upper = mediator_pns_upper(model, "u")
    s = unit_stats(model, "u")
    assert upper == min(s.p_y_t, 1 - s.p_y_tp)


def test_mediator_deterministic_chain():
    # Z copies T and Y copies Z: the bound degenerates to one.
    spec = {
        "units": ["u"],
        "noises": [
            {"name": "e_t", "domain": [0, 1], "pmf": ["1/2", "1/2"]},
            {"name": "e_z", "domain": [0], "pmf": [1]},
            {"name": "e_y", "domain": [0], "pmf": [1]},
        ],
        "variables": [
            {"name": "T", "domain": [0, 1]},
            {"name": "Z", "domain": [0, 1]},
            {"name": "Y", "domain": [0, 1]},
        ],
        "functions": [
            {"target": "T", "parents": [], "noise": "e_t", "table": [
                {"unit": "*", "parents": [], "noise": e, "value": e}
                for e in (0, 1)]},
            {"target": "Z", "parents": ["T"], "noise": "e_z", "table": [
                {"unit": "*", "parents": [t], "noise": 0, "value": t}
                for t in (0, 1)]},
            {"target": "Y", "parents": ["Z"], "noise": "e_y", "table": [
                {"unit": "*", "parents": [z], "noise": 0, "value": z}
                for z in (0, 1)]},
        ],
    }
    model = build_model(spec)
    assert mediator_pns_upper(model, "u") == 1


def test_mediator_strictly_below_generic(mediator_tight_model):
    upper = mediator_pns_upper(mediator_tight_model, "u")
    s = unit_stats(mediator_tight_model, "u")
    assert upper == Fraction(9, 20)
    assert upper < pns_bounds(s)[1] == Fraction(3, 5)


def test_mediator_dominates_exact_pns(mediator_tight_model,
                                      mediator_plugin_model):
    for model in (mediator_tight_model, mediator_plugin_model):
        upper = mediator_pns_upper(model, "u")
        for coupling in poc_coupling_grid(model, count=6, seed=9,
                                          include_factual=False):
            report = exact_poc(model, "u", coupling)
            assert report.pns <= upper


def test_mediator_structure_checks(table1_model, mediator_tight_model):
    with pytest.raises(NotAMediatorError):
        mediator_pns_upper(table1_model, "u1", mediator="Y")
    with pytest.raises(NotAMediatorError):
        mediator_pns_upper(mediator_tight_model, "u", mediator="T")


def test_exact_poc_zero_probability_conditionings():
    from discoscm.errors import ZeroProbabilityEvidenceError

    # P(T=1) = 1 makes the (t', y') conditioning set empty.
    model = build_model(deterministic_yt_spec(p_t="1"))
    worlds = poc_worlds(model)
    coupling = make_coupling("independent", worlds, model)
    with pytest.raises(ZeroProbabilityEvidenceError):
        exact_poc(model, "u", coupling)
    # Without the factual world, response types still come out.
    coupling = make_coupling(
        "independent", poc_worlds(model, include_factual=False), model)
    report = exact_poc(model, "u", coupling)
    assert report.pns == 1
    assert report.pn is None


def test_stats_from_marginals_validates_range():
    with pytest.raises(TypeMismatchError):
        UnitStats.from_marginals(Fraction(1, 2), Fraction(3, 2), Fraction(0))


def test_population_bounds_formula_identity(table1_model):
    s = unit_stats(table1_model, "u1")
    assert population_bounds(s) == (pns_bounds(s), pn_bounds(s))


def test_population_bounds_homogeneous(table1_model):
    per_unit = [unit_stats(table1_model, u) for u in table1_model.prior.units]
    pooled = UnitStats.pooled([(w, s) for w, s in
                               zip(table1_model.prior.weights, per_unit)])
    assert population_bounds(pooled) == population_bounds(per_unit[0])


def test_population_bounds_mixture_not_interval_average():
    sure = UnitStats.from_marginals(Fraction(1, 2), Fraction(1), Fraction(0))
    never = UnitStats.from_marginals(Fraction(1, 2), Fraction(0), Fraction(0))
    pooled = UnitStats.pooled([(Fraction(1, 2), sure),
                               (Fraction(1, 2), never)])
    # Mixed stats first, then bounds: pooled joints are mixtures.
    assert pooled.p_y_t == Fraction(1, 2)
    assert pooled.p_t_y == Fraction(1, 4)
    pns_iv, _ = population_bounds(pooled)
    assert pns_iv == (Fraction(1, 2), Fraction(1, 2))

    # Oracle: pooled enumeration over a two-unit model with these units.
    t_rows = [{"unit": "*", "parents": [], "noise": e, "value": e}
              for e in (0, 1)]
    y_rows = (
        [{"unit": "sure", "parents": [t], "noise": 0, "value": t}
         for t in (0, 1)]
        + [{"unit": "never", "parents": [t], "noise": 0, "value": 0}
           for t in (0, 1)]
    )
    model = build_model({
        "units": ["sure", "never"],
        "noises": [
            {"name": "e_t", "domain": [0, 1], "pmf": ["1/2", "1/2"]},
            {"name": "e_y", "domain": [0], "pmf": [1]},
        ],
        "variables": [
            {"name": "T", "domain": [0, 1]},
            {"name": "Y", "domain": [0, 1]},
        ],
        "functions": [
            {"target": "T", "parents": [], "noise": "e_t", "table": t_rows},
            {"target": "Y", "parents": ["T"], "noise": "e_y", "table": y_rows},
        ],
    })
    pooled_oracle = UnitStats.pooled([
        (w, unit_stats(model, u))
        for u, w in zip(model.prior.units, model.prior.weights)
    ])
    assert pooled_oracle == pooled


def test_stats_from_rct_table1_counts():
    rows = [(i, 0, y) for i, y in enumerate([1, 0, 0, 1], start=1)]
    rows += [(i, 1, y) for i, y in enumerate([0, 1, 1, 1], start=5)]
    s = stats_from_rct(rows)
    assert (s.p_t, s.p_y_t, s.p_y_tp) == (
        Fraction(1, 2), Fraction(3, 4), Fraction(1, 2))
