import math

import numpy as np
import pytest

from coexist import fixtures
from coexist.canonical import (
    dwedge_closed_form,
    factorization_triples,
    max_eigenvalue,
    meet_witness,
    meet_witness_check,
    pair_witness_candidates,
    pair_witness_condition,
    pair_witness_search,
    product_factorization_check,
    product_witness,
    projection_set_coexistence,
)
from coexist.errors import NotCommuting, NotMV, NotProjections, UnsupportedCarrier
from coexist.witness import BetaTable, GroundSet, all_pairs, d_value, verify_witness

from conftest import commuting_family


def test_meet_witness_values(c2xc3):
    S = [c2xc3.effect((1, 1)), c2xc3.effect((0, 2))]
    beta = meet_witness(c2xc3, S)
    assert beta(0) == c2xc3.unit
    assert beta(0b11).value == (0, 1)


@pytest.mark.parametrize("name", ["C2xC3", "CHAIN4", "BOOL2"])
def test_meet_witness_verifies(name):
    E = fixtures.load(name)
    assert verify_witness(meet_witness(E, E.elements())).passed


def test_meet_witness_needs_mv(penta):
    with pytest.raises(NotMV):
        meet_witness(penta, penta.elements()[1:3])


def test_closed_form_examples(c2xc3, bool2):
    S = GroundSet(c2xc3, (c2xc3.effect((1, 1)), c2xc3.effect((0, 2))))
    beta = meet_witness(c2xc3, S)
    assert dwedge_closed_form(S, 0b01, 0b11).value == (1, 0)
    assert d_value(beta, 0b01, 0b11).value == (1, 0)
    for x in range(4):
        assert dwedge_closed_form(S, x, x) == beta(x)
    B = GroundSet(bool2, (bool2.effect((1, 0)), bool2.effect((0, 1))))
    assert dwedge_closed_form(B, 0, 0b11) == bool2.zero()


@pytest.mark.parametrize("name,ground", [
    ("C2xC3", [(1, 1), (0, 2), (1, 0)]),
    ("CHAIN4", [1, 2, 3]),
])
def test_meet_witness_check(name, ground):
    E = fixtures.load(name)
    rep = meet_witness_check(E, [E.effect(x) for x in ground])
    assert rep.passed and rep.comparisons == 27


def test_meet_witness_check_negative_control(c2xc3):
    S = GroundSet(c2xc3, (c2xc3.effect((1, 1)), c2xc3.effect((0, 2)), c2xc3.effect((1, 0))))
    good = meet_witness(c2xc3, S)
    vals = list(good.values)
    vals[0b111] = c2xc3.effect((0, 1))
    rep = meet_witness_check(c2xc3, S, BetaTable(S, tuple(vals)))
    assert not rep.passed
    assert all(set(f["A"]) == {0, 1, 2} for f in rep.failures)


def test_product_witness_example(qubit):
    a = qubit.effect(np.diag([0.5, 1.0]))
    b = qubit.effect(np.diag([0.5, 0.5]))
    beta = product_witness([a, b])
    assert beta(0) == qubit.unit
    expected = np.eye(2) - a.value - b.value + a.value @ b.value
    assert np.allclose(expected, np.diag([0.25, 0.0]))
    assert np.allclose(d_value(beta, 0, 0b11).value, np.diag([0.25, 0.0]), atol=1e-15)


def test_product_witness_four_diagonal(qubit):
    S = [qubit.effect(np.diag(d)) for d in ([0.5, 1.0], [0.5, 0.5], [0.25, 0.75], [0.9, 0.1])]
    rep = verify_witness(product_witness(S))
    assert rep.passed and rep.a3_checks == 81


def test_product_requires_commuting(qubit):
    P = qubit.effect([[1, 0], [0, 0]])
    Q = qubit.effect([[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(NotCommuting) as info:
        product_witness([P, Q])
    assert info.value.pair == (0, 1)
    assert abs(info.value.residual - 0.5) <= 1e-12


def test_factorization(qubit):
    S = [qubit.effect(np.diag(d)) for d in ([0.5, 1.0], [0.5, 0.5], [0.25, 0.75])]
    beta = product_witness(S)
    r = product_factorization_check(beta, 0, 0, 0)
    assert r.passed
    assert np.allclose(d_value(beta, 0, 1).value, np.eye(2) - S[0].value)
    assert all(product_factorization_check(beta, *t).passed for t in factorization_triples(3))


def test_factorization_conjugated(qubit):
    rng = np.random.default_rng(3)
    S = commuting_family(rng, qubit, 3)
    beta = product_witness(S)
    worst = max(product_factorization_check(beta, *t).residual for t in factorization_triples(3))
    assert worst <= 1e-12


def test_pair_condition(chain4, penta):
    assert pair_witness_condition(chain4.effect(1), chain4.effect(2), chain4.zero())
    assert not pair_witness_condition(penta.effect((1, 0)), penta.effect((1, 1)), penta.zero())
    a = chain4.effect(2)
    assert pair_witness_condition(a, a, a)


def test_pair_search(chain4, penta):
    r = pair_witness_search(chain4, chain4.effect(1), chain4.effect(2))
    assert [c.value for c in r.witnesses] == [(0,), (1,)] and r.exhaustive
    r = pair_witness_search(penta, penta.effect((1, 0)), penta.effect((1, 1)))
    assert r.witnesses == [] and r.exhaustive and r.verdict == "no witness"
    for E in (chain4, penta):
        for a in E.elements():
            assert a in pair_witness_search(E, a, a).witnesses


def test_pair_search_hermitian(qubit):
    a = qubit.effect(np.diag([0.5, 1.0]))
    b = qubit.effect(np.diag([0.5, 0.5]))
    with pytest.raises(UnsupportedCarrier):
        pair_witness_search(qubit, a, b)
    r = pair_witness_candidates(qubit, a, b, [qubit.zero(), a.value @ b.value])
    assert not r.exhaustive and len(r.witnesses) == 1
    r = pair_witness_candidates(qubit, a, b, [qubit.zero()])
    assert r.verdict == "none among candidates" and r.to_json()["coexistent"] is None


@pytest.mark.parametrize("name", ["CHAIN4", "BOOL2", "C2xC3", "PENTA"])
def test_pair_bridge(name):
    """A table on {a, b} is a witness iff beta({a, b}) is a witness element."""
    E = fixtures.load(name)
    els = E.elements()
    for i, a in enumerate(els):
        for b in els[i + 1:]:
            g = GroundSet(E, (a, b))
            for c in els:
                beta = BetaTable.from_mapping(g, {0b11: c})[0]
                assert verify_witness(beta).passed == pair_witness_condition(a, b, c)


def test_projection_criterion(qubit):
    P = qubit.effect([[1, 0], [0, 0]])
    Q = qubit.effect([[0.5, 0.5], [0.5, 0.5]])
    rep = projection_set_coexistence([P, Q])
    assert not rep.coexistent and abs(rep.commutator_norm - 0.5) <= 1e-12
    assert abs(max_eigenvalue(P + Q) - (1 + math.sqrt(2) / 2)) <= 1e-9
    assert projection_set_coexistence([P]).coexistent
    D = [qubit.effect(np.diag(d)) for d in ([1, 0], [0, 1], [1, 1], [0, 0])]
    assert projection_set_coexistence(D).coexistent
    with pytest.raises(NotProjections):
        projection_set_coexistence([qubit.effect(np.diag([0.5, 1]))])
