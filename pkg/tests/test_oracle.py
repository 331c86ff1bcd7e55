import itertools

import pytest

from coexist import fixtures
from coexist.effects import decomposition_check
from coexist.errors import SizeExceeded, TimeBudgetExceeded, UnsupportedCarrier
from coexist.oracle import (
    OracleConfig,
    coexistent_bruteforce,
    enumerate_decompositions,
    theoremmain_harness,
    witness_bruteforce,
)
from coexist.witness import verify_witness, BetaTable


def partitions(n, largest=None):
    """Integer partitions, counted by plain recursion."""
    largest = n if largest is None else largest
    if n == 0:
        return 1
    return sum(partitions(n - k, k) for k in range(1, min(n, largest) + 1))


def values(decomps):
    return sorted(tuple(p.value for p in d) for d in decomps)


def test_decompositions(chain4, penta, bool2):
    got = values(enumerate_decompositions(chain4))
    assert got == sorted([((3,),), ((1,), (2,)), ((1,), (1,), (1,))])
    assert len(got) == partitions(3) == 3
    assert values(enumerate_decompositions(penta)) == sorted(
        [((2, 2),), ((1, 0), (1, 2)), ((1, 1), (1, 1))])
    assert values(enumerate_decompositions(bool2)) == sorted([((1, 1),), ((0, 1), (1, 0))])


def test_decompositions_sound(c2xc3):
    ds = list(enumerate_decompositions(c2xc3))
    assert all(decomposition_check(c2xc3, d) for d in ds)
    assert len({tuple(p.value for p in d) for d in ds}) == len(ds)


def test_decomposition_cap(chain4):
    with pytest.raises(SizeExceeded):
        list(enumerate_decompositions(chain4, max_parts=2))
    assert len(list(enumerate_decompositions(chain4, max_parts=3))) == 3


def test_coexistent_bruteforce(chain4, penta):
    v = coexistent_bruteforce(chain4, [chain4.effect(1), chain4.effect(2)])
    assert v.coexistent and [p.value for p in v.decomposition] == [(1,), (1,), (1,)]
    assert len(v.subsums[0]) == 1 and len(v.subsums[1]) == 2
    v = coexistent_bruteforce(penta, [penta.effect((1, 0)), penta.effect((1, 1))])
    assert not v.coexistent and v.decompositions_tried == 3
    for E in (chain4, penta):
        for s in E.elements():
            assert coexistent_bruteforce(E, [s]).coexistent


def test_witness_bruteforce(chain4, penta):
    v = witness_bruteforce(chain4, [chain4.effect(1), chain4.effect(2)])
    assert v.exists and v.beta(0b11).value == (0,)
    assert verify_witness(v.beta).passed
    alt = BetaTable(v.beta.ground, v.beta.values[:3] + (chain4.effect(1),))
    assert verify_witness(alt).passed
    v = witness_bruteforce(penta, [penta.effect((1, 0)), penta.effect((1, 1))])
    assert not v.exists and v.search_space == 5 and v.pruned == 5
    v = witness_bruteforce(chain4, [])
    assert v.exists and v.beta.values == (chain4.unit,)


@pytest.mark.parametrize("name", ["CHAIN4", "BOOL2", "C2xC3", "PENTA"])
def test_pruning_does_not_change_verdicts(name):
    E = fixtures.load(name)
    off = OracleConfig(prune=False)
    for S in itertools.combinations(E.elements(), 2):
        assert witness_bruteforce(E, S).exists == witness_bruteforce(E, S, off).exists


def test_harness_chain_and_bool(chain4, bool2):
    for E in (chain4, bool2):
        rep = theoremmain_harness(E)
        assert rep.agree and rep.complete
        assert all(e.coexistence.coexistent for e in rep.entries)
        assert all(e.certified for e in rep.entries)


def test_harness_penta_false_set(penta):
    rep = theoremmain_harness(penta, OracleConfig(max_ground=2))
    assert rep.agree
    false = {tuple(s.value for s in e.S) for e in rep.entries if not e.coexistence.coexistent}
    assert false == {((1, 0), (1, 1)), ((1, 1), (1, 2))}


def test_harness_singletons(c2xc3):
    rep = theoremmain_harness(c2xc3, OracleConfig(max_ground=1))
    assert len(rep.entries) == 7 and rep.agree


def test_time_budget(c2xc3):
    with pytest.raises(TimeBudgetExceeded) as info:
        theoremmain_harness(c2xc3, OracleConfig(time_budget=1e-6))
    assert info.value.partial.complete is False


def test_ground_cap(chain4):
    with pytest.raises(SizeExceeded):
        witness_bruteforce(chain4, chain4.elements(), OracleConfig(max_ground=3))


def test_hermitian_unsupported(qubit):
    with pytest.raises(UnsupportedCarrier):
        theoremmain_harness(qubit)
