import numpy as np
import pytest

from coexist.canonical import meet_witness, product_witness
from coexist.errors import SizeExceeded, UnverifiedWitness
from coexist.observables import (
    SimpleObservable,
    check_projective,
    certify_coexistent,
    observable_eval,
    observable_from_witness,
    projective_system_from_witness,
    range_contains,
    range_witness,
)
from coexist.witness import BetaTable, GroundSet, d_value, mask_of, submasks


def chain_beta(E, top):
    g = GroundSet(E, (E.effect(1), E.effect(2)))
    return BetaTable.from_mapping(g, {0b11: E.effect(top)})[0]


def test_singleton_observable(c2xc3):
    beta = meet_witness(c2xc3, c2xc3.elements()[1:4])
    for i, a in enumerate(beta.ground):
        alpha = observable_from_witness(beta, 1 << i)
        assert alpha.outcomes == (0, 1 << i)
        assert alpha([1 << i]) == a


def test_full_and_empty(c2xc3):
    beta = meet_witness(c2xc3, c2xc3.elements()[1:4])
    for A in range(8):
        alpha = observable_from_witness(beta, A)
        assert alpha(alpha.outcomes) == c2xc3.unit
        assert alpha([]) == c2xc3.zero()


def test_eval_complement_and_additivity(chain4):
    alpha = observable_from_witness(chain_beta(chain4, 1), 0b11)
    omega = alpha.outcomes
    for bits in range(1 << len(omega)):
        fam = [w for i, w in enumerate(omega) if bits >> i & 1]
        rest = [w for w in omega if w not in fam]
        assert observable_eval(alpha, rest) == chain4.unit - observable_eval(alpha, fam)
        for bits2 in submasks((1 << len(omega)) - 1 & ~bits):
            other = [w for i, w in enumerate(omega) if bits2 >> i & 1]
            assert observable_eval(alpha, fam + other) == chain4.oplus(
                observable_eval(alpha, fam), observable_eval(alpha, other))
    with pytest.raises(KeyError):
        observable_eval(alpha, [0b100])


def test_atoms_must_decompose_unit(chain4):
    with pytest.raises(ValueError):
        SimpleObservable(chain4, (0, 1), (chain4.effect(1), chain4.effect(1)))


def test_gate_on_verification(penta):
    g = GroundSet(penta, (penta.effect((1, 0)), penta.effect((1, 1))))
    bad = BetaTable.from_mapping(g, {0b11: penta.zero()})[0]
    with pytest.raises(UnverifiedWitness):
        observable_from_witness(bad, 0b11)
    with pytest.raises(UnverifiedWitness):
        projective_system_from_witness(bad)
    result = certify_coexistent(bad)
    assert not result.passed and result.certificate is None
    assert [v.axiom for v in result.report.violations] == ["A3"]


def test_single_element_system(chain4):
    g = GroundSet(chain4, (chain4.effect(2),))
    beta = BetaTable.from_mapping(g, {})[0]
    sys = projective_system_from_witness(beta)
    assert sys.index_set() == [0, 1]
    assert sys.observables[0].outcomes == (0,)
    assert sys.observables[0].atoms[0] == chain4.unit
    assert check_projective(sys).passed


def test_c2xc3_pair_system(c2xc3):
    beta = meet_witness(c2xc3, [c2xc3.effect((1, 1)), c2xc3.effect((0, 2))])
    rep = check_projective(projective_system_from_witness(beta))
    assert rep.passed and rep.compatibility_mode == "all_families"
    # (iii): sum over pairs U <= V of 2^(2^|U|) families
    assert rep.compatibility_checks == 1 * 4 * 2 + 2 * 2 * 4 + 1 * 1 * 16


def test_chain4_system(chain4):
    rep = check_projective(projective_system_from_witness(chain_beta(chain4, 1)))
    assert rep.passed and rep.max_residual == 0


def test_preimage_matches_union_form(c2xc3):
    beta = meet_witness(c2xc3, c2xc3.elements()[1:4])
    sys = projective_system_from_witness(beta)
    for V in range(8):
        for U in submasks(V):
            for X in submasks(U):
                union_form = sorted(X | c0 for c0 in submasks(V & ~U))
                assert sorted(sys.preimage(U, V, [X])) == union_form
                total = c2xc3.group.zero()
                for y in union_form:
                    total = total + d_value(beta, y, V)
                assert total == d_value(beta, X, U)


def test_range(chain4):
    beta = chain_beta(chain4, 0)
    alpha = observable_from_witness(beta, 0b11)
    values = {observable_eval(alpha, [w for i, w in enumerate(alpha.outcomes) if b >> i & 1]).value
              for b in range(16)}
    assert values == {(0,), (1,), (2,), (3,)}
    for v in range(4):
        assert range_contains(alpha, chain4.effect(v))
    for i, s in enumerate(beta.ground):
        assert range_contains(observable_from_witness(beta, 1 << i), s)
    assert range_witness(alpha, chain4.zero()) == []


def test_range_cap(c2xc3):
    beta = meet_witness(c2xc3, c2xc3.elements()[:5])
    alpha = observable_from_witness(beta, 0b11111)
    with pytest.raises(SizeExceeded):
        range_contains(alpha, c2xc3.unit)


def test_certify_meet(c2xc3, bool2):
    for E in (c2xc3, bool2):
        els = E.elements()
        beta = meet_witness(E, els[1:4])
        result = certify_coexistent(beta)
        assert result.passed
        cert = result.certificate
        for i, A, fam in cert.range_witnesses:
            assert observable_eval(cert.system.observables[A], fam) == beta.ground[i]
        doc = cert.to_json()
        assert set(doc) >= {"S", "beta", "observables", "projective_checks", "range_witnesses"}


def test_certify_qubit_product(qubit):
    S = [qubit.effect(np.diag(d)) for d in ([0.5, 1.0], [0.5, 0.5], [0.25, 0.75])]
    result = certify_coexistent(product_witness(S))
    assert result.passed
    assert result.certificate.projective.tolerance == qubit.group.eq_tolerance
    assert result.certificate.projective.max_residual <= 1e-12
