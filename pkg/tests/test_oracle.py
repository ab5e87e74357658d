from math import gcd

import numpy as np
import pytest

from unitgroups import _kernels as K
from unitgroups.abelian import normalize
from unitgroups.gaussian import GaussianInt
from unitgroups.oracle import (
    OracleError,
    an_bounds,
    an_verify,
    crt_unit_group,
    enumerate_additive,
    exact_sequence_check,
    unit_group,
    unit_group_char0_witness,
    unit_group_finite,
)
from unitgroups.polyring import (
    an_ring,
    build_module_ring,
    direct_product_presentation,
    finite_field,
    nilpotent_extension,
    nonsplit_example,
    zmod_presentation,
)
from unitgroups.ring import BoundExceeded, zmod


def _brute_zmod_units(n):
    """Element-order census of (Z/n)* by repeated multiplication, no group theory."""
    units = [x for x in range(n) if gcd(x, n) == 1] if n > 1 else [0]
    counts = {}
    for x in units:
        o, y = 1, x % n
        while y != 1 % n:
            y, o = y * x % n, o + 1
        counts[o] = counts.get(o, 0) + 1
    return counts


def test_enumerate_additive():
    assert len(enumerate_additive(zmod(6))) == 6
    R = build_module_ring(nilpotent_extension("Z", [2, 3]))
    assert len(enumerate_additive(R, subset="nilradical")) == 6
    with pytest.raises(ValueError):
        enumerate_additive(R)
    with pytest.raises(BoundExceeded):
        enumerate_additive(zmod(1000), bound=100)


@pytest.mark.parametrize(
    "P,expected",
    [
        (zmod_presentation(8), [2, 2]),
        (finite_field(3, 2), [8]),
        (zmod_presentation(13), [12]),
        (zmod_presentation(2), []),
        (finite_field(2, 4), [15]),
    ],
)
def test_finite_examples(P, expected):
    rep = unit_group(P)
    assert rep.structure == normalize(expected)
    assert rep.exact_sequence_ok


def test_crt_formula_agrees_with_brute_force():
    from unitgroups.abelian import order_statistics

    for n in range(1, 400):
        assert order_statistics(crt_unit_group(n)) == _brute_zmod_units(n)


@pytest.mark.parametrize("n", list(range(1, 301)))
def test_zmod_oracle_matches_crt(n):
    assert unit_group_finite(zmod(n)).structure == crt_unit_group(n)


@pytest.mark.parametrize(
    "base,moduli,expected",
    [
        ("Z", [5], [2, 5]),
        ("Z", [2, 4], [2, 2, 4]),
        ("Z", [], [2]),
        ("Zi", [3], [4, 3, 3]),
        ("Zi", [GaussianInt(2, 1)], [4, 5]),
        ("Zi", [GaussianInt(4, 4)], [4, 8, 4]),
    ],
)
def test_char0_examples(base, moduli, expected):
    rep = unit_group(nilpotent_extension(base, moduli))
    assert rep.structure == normalize(expected)
    assert exact_sequence_check(nilpotent_extension(base, moduli))


def test_nonsplit_oracle():
    rep = unit_group(nonsplit_example())
    # (y) is spanned over Z[i] by y, xy, y^2, xy^2, each a copy of Z[i]/(1+i)
    assert rep.nilradical_size == 16
    assert rep.quotient_unit_count == 8
    assert rep.unit_count == 128
    assert rep.structure == normalize([8, 4, 2, 2])
    assert exact_sequence_check(nonsplit_example())


def test_nonsplit_x_has_order_8_and_one_plus_y_order_4():
    R = build_module_ring(nonsplit_example())
    nf = R.normalized
    k = R.rank
    # original Z-basis: Z[i]-basis 1, x, ..., x^5 restricted as (b, i*b)
    x = np.zeros(k, dtype=np.int64)
    x[2] = 1
    y = np.zeros(k, dtype=np.int64)
    y[4], y[0] = 1, -1  # y = x^2 - 1
    for elem, order in ((x, 8), (R.one + y, 4)):
        v = R.to_normal(elem)
        p = v.copy()
        t = 1
        while not (p == nf.one).all():
            p = nf.mul(p, v)
            t += 1
        assert t == order


def test_char0_route_rejects_bad_lifts():
    R = build_module_ring(nilpotent_extension("Z", [2]))
    R.unit_lifts = np.array([[1, 0], [3, 0]])  # 3 is not a unit of Z
    with pytest.raises(OracleError):
        unit_group_char0_witness(R)


def test_nilradical_nilpotent_and_one_plus_n_units():
    for P in (zmod_presentation(72), finite_field(2, 3), direct_product_presentation([zmod_presentation(27), zmod_presentation(16)])):
        R = build_module_ring(P)
        nf = R.normalized
        orders = K.unit_orders(nf.mult, nf.moduli, int(K.encode(nf.one, nf.moduli)))
        E = K.decode_all(nf.moduli)
        nil = E[orders == K.NILPOTENT]
        for n in nil:
            p, k = n.copy(), 1
            while p.any():
                p = nf.mul(p, n)
                k += 1
            assert k <= int(nf.size).bit_length()
        ones = K.encode(nf.reduce(nil + nf.one), nf.moduli)
        assert (orders[ones] > 0).all()
        assert exact_sequence_check(R)


def test_exact_sequence_examples():
    rep = unit_group(zmod_presentation(4))
    assert (rep.unit_count, rep.nilradical_size, rep.quotient_unit_count) == (2, 2, 1)
    rep = unit_group(zmod_presentation(15))
    assert (rep.unit_count, rep.nilradical_size, rep.quotient_unit_count) == (8, 1, 8)


@pytest.mark.parametrize("n,order", [(0, 6), (1, 18), (2, 54), (3, 162), (4, 486)])
def test_an_verify(n, order):
    rep = an_verify(n)
    assert rep.unit_count == order
    assert rep.structure == normalize([2] + [3] * (n + 1))
    b = an_bounds(n)
    assert b.upper_3 == b.lower_3 == 3 ** (n + 1)
    assert b.dim_vw == n + 1


def test_an_bound_enforced():
    with pytest.raises(BoundExceeded):
        an_verify(3, bound=2)


def test_products_factorwise():
    P = direct_product_presentation([an_ring(1), nilpotent_extension("Zi", []), finite_field(2, 2)])
    assert unit_group(P).structure == normalize([2, 3, 3, 4, 3])


def test_bound_exceeded_finite():
    with pytest.raises(BoundExceeded):
        unit_group(zmod_presentation(5000), bound=1000)


def test_eisenstein_times_gaussian_has_order_12_unit():
    rep = unit_group(direct_product_presentation([an_ring(0), nilpotent_extension("Zi", [])]))
    assert rep.structure == normalize([2, 3, 4])
    assert max(rep.structure.invariant_factors()) == 12
