import csv
import io
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from unitgroups.abelian import groups_of_order
from unitgroups.classify import REALIZABLE, classify_reduced
from unitgroups.density import (
    CSV_COLUMNS,
    decimal_string,
    density_scan,
    enumerate_odd_realizable,
    enumerate_reduced_cardinalities,
    odd_factorization,
)


def test_odd_small():
    assert enumerate_odd_realizable(10) == [1, 3, 7, 9]
    assert enumerate_odd_realizable(0) == []


def test_odd_certificates_and_closure():
    N = 20000
    odd = enumerate_odd_realizable(N)
    S = set(odd)
    for m in odd:
        fac = odd_factorization(m)
        assert fac is not None
        prod = 1
        for f in fac:
            assert (f + 1) & f == 0  # f = 2^k - 1
            prod *= f
        assert prod == m
    small = [m for m in odd if m <= 150]
    for a in small:
        for b in small:
            if a * b <= N:
                assert a * b in S
    for m in range(1, 400, 2):
        assert (odd_factorization(m) is not None) == (m in S)


@given(st.integers(1, 5000))
def test_count_all_identity(n):
    row = density_scan(n).checkpoints[0]
    lhs = Fraction(row.count_all, n) - Fraction(1, 2)
    rhs = Fraction(row.count_odd, n) - Fraction(n - 2 * (n // 2), 2 * n)
    assert lhs == rhs


def test_reduced_contains_odd_and_torsion_free_orders():
    N = 50000
    red = set(enumerate_reduced_cardinalities(N))
    assert set(enumerate_odd_realizable(N)) <= red
    for d in range(1, 16):
        for c in range(0, 10):
            n = 2**d * 3**c
            if n <= N:
                assert n in red


def test_reduced_cardinalities_match_group_engine():
    # dual route: the cardinality closure against the group-level reduced classifier
    N = 256
    red = set(enumerate_reduced_cardinalities(N))
    for n in range(1, N + 1):
        engine = any(classify_reduced(G).status == REALIZABLE for G in groups_of_order(n))
        assert engine == (n in red), n


def test_scan_shape_and_csv():
    rep = density_scan(10**4, [1e3, 1e4])
    assert [c.n for c in rep.checkpoints] == [1000, 10000]
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[0]["count_odd"] == "40" and rows[0]["density_odd"] == "0.0400000000"
    assert rows[1]["count_all"] == str(5000 + 103)
    assert rep.to_csv() == density_scan(10**4, [1e4, 1e3, 1e3]).to_csv()


def test_scan_subsets():
    rep = density_scan(1000, sets=["odd"])
    row = rep.checkpoints[0].row()
    assert row["count_all"] == "" and row["count_reduced"] == "" and row["count_odd"] == 40


def test_reduced_density_decreasing_small():
    rep = density_scan(10**5, [10**3, 10**4, 10**5], sets=["reduced"])
    d = [Fraction(c.count_reduced, c.n) for c in rep.checkpoints]
    assert d[0] > d[1] > d[2]


def test_scan_errors():
    with pytest.raises(ValueError):
        density_scan(10**6, limit=1000)
    with pytest.raises(ValueError):
        density_scan(100, sets=["even"])
    with pytest.raises(ValueError):
        density_scan(0)


def test_decimal_string():
    assert decimal_string(Fraction(1, 3)) == "0.3333333333"
    assert decimal_string(Fraction(1, 2)) == "0.5000000000"
