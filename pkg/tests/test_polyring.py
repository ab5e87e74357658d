import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import totient

from unitgroups.abelian import normalize
from unitgroups.gaussian import GaussianInt, quotient_additive_structure
from unitgroups.oracle import enumerate_additive
from unitgroups.polyring import (
    IntPolynomial,
    PresentationError,
    RingPresentation,
    an_ring,
    build_module_ring,
    content_primitive,
    cyclotomic,
    direct_product_presentation,
    finite_field,
    irreducible_polynomial,
    nilpotent_extension,
    nonsplit_example,
    zmod_presentation,
)

PRIMES = [2, 3, 5, 7, 11, 13]


def test_cyclotomic_examples():
    assert cyclotomic(2, 1).coefficients == (1, 1)
    assert cyclotomic(3, 1).coefficients == (1, 1, 1)
    assert cyclotomic(2, 2).coefficients == (1, 0, 1)


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_cyclotomic_value_and_degree(p, k):
    f = cyclotomic(p, k)
    assert f(1) == p
    assert f.degree == totient(p**k)


def test_content_primitive_examples():
    assert content_primitive(IntPolynomial((2, 4, 6))) == (2, IntPolynomial((1, 2, 3)))
    assert content_primitive(IntPolynomial((1, 1))) == (1, IntPolynomial((1, 1)))
    assert content_primitive(IntPolynomial((0, -4))) == (4, IntPolynomial((0, -1)))


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=6).filter(any))
def test_content_primitive_reconstructs(coeffs):
    f = IntPolynomial(tuple(coeffs))
    c, g = content_primitive(f)
    assert c > 0
    assert content_primitive(g)[0] == 1
    assert IntPolynomial((c,)) * g == f


def test_irreducible_polynomial():
    assert irreducible_polynomial(2, 2).coefficients == (1, 1, 1)
    f = irreducible_polynomial(3, 2)
    assert all(f(x) % 3 for x in range(3))


def test_an0_is_eisenstein():
    R = build_module_ring(an_ring(0))
    assert R.rank == 2 and R.relations.size == 0
    # x^2 = -x - 1 in the basis (1, x)
    assert R.mult[1, 1].tolist() == [-1, -1]


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_an_rank_and_torsion_free(n):
    R = build_module_ring(an_ring(n))
    G, free = R.additive_group
    assert free == 2 ** (n + 1) and G.order == 1


def test_nilpotent_extension_z2():
    R = build_module_ring(nilpotent_extension("Z", [2]))
    assert R.rank == 2
    assert R.mult[1, 1].tolist() == [0, 0]
    G, free = R.additive_group
    assert free == 1 and G == normalize([2])


@pytest.mark.parametrize(
    "base,moduli",
    [("Z", [2, 3]), ("Z", [4, 4, 9]), ("Zi", [3]), ("Zi", [GaussianInt(2, 1), GaussianInt(1, 1) ** 3])],
)
def test_nilradical_cardinality(base, moduli):
    R = build_module_ring(nilpotent_extension(base, moduli))
    N = enumerate_additive(R, subset="nilradical")
    if base == "Z":
        expected = int(np.prod(moduli))
    else:
        expected = int(np.prod([quotient_additive_structure(a).order for a in moduli]))
    assert len(N) == expected


def test_nonsplit_presentation_shape():
    P = nonsplit_example()
    R = build_module_ring(P)
    # Z[i]-rank 6 (basis 1, x, ..., x^5) restricted to Z
    assert R.rank == 12
    G, free = R.additive_group
    # free part 1, x over Z[i]; torsion y, xy, y^2, xy^2, each Z[i]/(1+i)
    assert free == 4
    assert G == normalize([2] * 4)


def test_finite_field_and_products():
    R = build_module_ring(finite_field(3, 2))
    assert R.normalized.size == 9
    P = direct_product_presentation([zmod_presentation(4), finite_field(2, 2)])
    assert P.family == "DirectProduct"
    assert direct_product_presentation([zmod_presentation(5)]) == zmod_presentation(5)


@pytest.mark.parametrize(
    "P",
    [
        zmod_presentation(12),
        finite_field(5, 3),
        nilpotent_extension("Zi", [GaussianInt(4, 4), 3]),
        an_ring(2),
        nonsplit_example(),
        direct_product_presentation([nilpotent_extension("Z", [9]), an_ring(1)]),
    ],
)
def test_json_round_trip(P):
    assert RingPresentation.from_json(P.to_json()) == P
    assert RingPresentation.from_json(P.to_json()).dumps() == P.dumps()


@pytest.mark.parametrize(
    "data",
    [
        {"base": "Q", "family": "NilpotentExtension", "params": {"moduli": []}},
        {"base": "Z", "family": "Weird", "params": {}},
        {"base": "Z", "family": "NilpotentExtension", "params": {"moduli": [0]}},
        {"base": "Z", "family": "AnRing", "params": {"n": -1}},
        {"base": "Zmod:0", "family": "NilpotentExtension", "params": {"moduli": []}},
    ],
)
def test_bad_presentations(data):
    with pytest.raises((PresentationError, ValueError)):
        P = RingPresentation.from_json(data)
        build_module_ring(P)
