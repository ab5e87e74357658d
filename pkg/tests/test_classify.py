import pytest
from hypothesis import given, settings, strategies as st

from unitgroups.abelian import cyclic, groups_of_order, normalize, parse_group
from unitgroups.classify import (
    DEFAULT_RULES,
    NOT_REALIZABLE,
    REALIZABLE,
    UNKNOWN,
    RuleSet,
    Verdict,
    classify_char0,
    classify_cyclic,
    classify_domain,
    classify_general,
    classify_reduced,
    classify_torsion_free,
    ditor_cardinality,
    splittings,
)
from unitgroups.density import enumerate_odd_realizable
from unitgroups.polyring import an_ring, finite_field, zmod_presentation
from unitgroups.witness import verify_certificate

# worked out by hand from the four cyclic forms, n <= 50
CYCLIC_NOT_REALIZABLE_50 = {5, 9, 11, 13, 17, 19, 23, 25, 27, 29, 32, 33, 35, 37, 39, 41, 43, 44, 45, 47, 49}

F2 = DEFAULT_RULES.enable("F2")


def _sound(v, G):
    assert v.status == REALIZABLE
    ok, rep = verify_certificate(v.certificate)
    assert ok and rep.structure == G


def test_verdict_invariants():
    with pytest.raises(ValueError):
        Verdict(REALIZABLE)
    with pytest.raises(ValueError):
        Verdict(NOT_REALIZABLE)
    with pytest.raises(ValueError):
        Verdict(UNKNOWN)
    with pytest.raises(ValueError):
        RuleSet().enable("F9")


def test_domain():
    v = classify_domain(cyclic(2))
    assert v.status == REALIZABLE and v.witness.base == "Z"
    v = classify_domain(cyclic(7))
    assert v.witness == finite_field(2, 3)
    _sound(v, cyclic(7))
    assert classify_domain(normalize([2, 2])).status == NOT_REALIZABLE
    for n in (4, 6):
        _sound(classify_domain(cyclic(n)), cyclic(n))
    assert classify_domain(cyclic(14)).status == NOT_REALIZABLE


def test_torsion_free_examples():
    v = classify_torsion_free(normalize([2, 3]))
    assert v.witness == an_ring(0)
    v = classify_torsion_free(normalize([4, 3]))
    assert v.status == NOT_REALIZABLE and any("a >= 1 when c >= 1" in o for o in v.obstructions)
    v = classify_torsion_free(cyclic(5))
    assert v.status == NOT_REALIZABLE and any("order p" in o for o in v.obstructions)


def test_torsion_free_exhaustive():
    for a in range(6):
        for b in range(6):
            for c in range(6):
                G = normalize([2] * a + [4] * b + [3] * c)
                expected = (a + b >= 1) and (c == 0 or a >= 1)
                assert (classify_torsion_free(G).status == REALIZABLE) == expected


def test_cyclic_examples():
    assert classify_cyclic(44).status == NOT_REALIZABLE
    v = classify_cyclic(12)
    _sound(v, cyclic(12))
    v = classify_cyclic(1)
    assert v.status == REALIZABLE and v.witness == zmod_presentation(2)


def test_cyclic_hand_checked():
    for n in range(1, 51):
        v = classify_cyclic(n)
        assert (v.status == NOT_REALIZABLE) == (n in CYCLIC_NOT_REALIZABLE_50), n
        if v.status == REALIZABLE:
            _sound(v, cyclic(n))
    assert classify_cyclic(100).status == REALIZABLE


def test_cyclic_completeness_against_other_engines():
    # no other route may realize a cyclic group that the cyclic classification rules out
    for n in range(1, 2001):
        if classify_cyclic(n).status == NOT_REALIZABLE:
            G = cyclic(n)
            assert classify_reduced(G).status != REALIZABLE
            assert classify_char0(G).status != REALIZABLE
        assert (classify_cyclic(n).status == REALIZABLE) == (classify_general(cyclic(n)).status != NOT_REALIZABLE)


def test_ditor():
    for n in (10, 21, 105):
        assert ditor_cardinality(n).status == REALIZABLE
    assert ditor_cardinality(5).status == NOT_REALIZABLE
    for n in range(2, 10001, 2):
        assert ditor_cardinality(n).status == REALIZABLE
    odd = {n for n in range(1, 10001, 2) if ditor_cardinality(n).status == REALIZABLE}
    assert odd == set(enumerate_odd_realizable(10**4))


@pytest.mark.parametrize("n", [1, 7, 15, 21, 63, 105, 255])
def test_ditor_witness_order(n):
    v = ditor_cardinality(n)
    ok, rep = verify_certificate(v.certificate)
    assert ok and rep.unit_count == n


def test_reduced_examples():
    v = classify_reduced(normalize([8, 3]))
    _sound(v, normalize([8, 3]))
    assert v.certificate.verification == "FiniteBruteForce"
    v = classify_reduced(normalize([2, 4, 3]))
    assert "(1, 1, 1)" in v.notes
    _sound(v, normalize([2, 4, 3]))
    assert classify_reduced(cyclic(5)).status == NOT_REALIZABLE
    assert classify_reduced(cyclic(10**6), bound=100).status == UNKNOWN


def test_char0_examples():
    G = normalize([4, 11, 11])
    _sound(classify_char0(G), G)
    assert classify_char0(cyclic(3)).status == NOT_REALIZABLE
    assert classify_char0(normalize([8, 8])).status == NOT_REALIZABLE
    G = parse_group("C2 x C9^3")
    v = classify_char0(G)
    assert v.certificate.citation == "z2-times-h"
    _sound(v, G)


def test_f2_closes_every_splitting():
    G = normalize([4, 4, 11])
    assert classify_general(G).status == UNKNOWN
    v = classify_general(G, F2)
    assert v.status == NOT_REALIZABLE
    assert len(v.obstructions) == len(list(splittings(G)))


def test_unknown_notes_are_honest():
    v = classify_char0(normalize([4, 4, 11]))
    assert v.status == UNKNOWN and "no complete classification" in v.notes


def test_general_examples():
    _sound(classify_general(cyclic(6)), cyclic(6))
    assert classify_general(cyclic(11)).status == NOT_REALIZABLE
    G = normalize([2, 16, 9, 5, 5])
    _sound(classify_general(G), G)


def test_c4_times_c16_is_realizable_in_two_ways():
    G = normalize([4, 16])
    _sound(classify_reduced(G), G)
    _sound(classify_char0(G), G)


def test_soundness_sweep_order_200():
    seen = 0
    for n in range(1, 201):
        for G in groups_of_order(n):
            v = classify_general(G)
            if v.status == REALIZABLE:
                _sound(v, G)
                seen += 1
    assert seen > 200


small_groups = st.lists(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 16, 3]), min_size=1, max_size=4).map(normalize)


@settings(max_examples=80)
@given(small_groups)
def test_monotone_rule_sets(G):
    base = classify_general(G)
    more = classify_general(G, F2)
    if base.status != UNKNOWN:
        assert more.status == base.status
    assert not (base.status == UNKNOWN and more.status == REALIZABLE)
