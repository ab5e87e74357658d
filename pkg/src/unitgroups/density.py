"""Counting realizable unit-group orders up to N.

Three sets of positive integers: orders of finite unit groups of arbitrary
rings (every even number plus the odd set), the odd ones (products of
numbers 2^k - 1), and the orders realized by reduced rings (products of
q - 1 over prime powers q, times a torsion-free block of order 2^i 3^j).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from sympy import primerange

from . import _kernels as K

DEFAULT_LIMIT = 10**8
SETS = ("all", "odd", "reduced")
CSV_COLUMNS = ("n", "count_all", "count_odd", "count_reduced", "density_all", "density_odd", "density_reduced")

_CTX = Context(prec=40)
_TEN_DIGITS = Decimal("1e-10")


def decimal_string(x: Fraction) -> str:
    d = _CTX.divide(Decimal(x.numerator), Decimal(x.denominator))
    return str(d.quantize(_TEN_DIGITS, rounding=ROUND_HALF_EVEN, context=_CTX))


def mersenne_numbers(N: int) -> list[int]:
    out, k = [], 2
    while (1 << k) - 1 <= N:
        out.append((1 << k) - 1)
        k += 1
    return out


def enumerate_odd_realizable(N: int) -> list[int]:
    """Products of numbers 2^k - 1 (k >= 2, repetition allowed) up to N; 1 included."""
    if N < 1:
        return []
    factors = mersenne_numbers(N)
    found = set()
    stack = [(1, 0)]  # (product, index of the smallest factor still allowed)
    while stack:
        m, i = stack.pop()
        found.add(m)
        for j in range(i, len(factors)):
            nxt = m * factors[j]
            if nxt > N:
                break
            stack.append((nxt, j))
    return sorted(found)


def odd_factorization(m: int) -> list[int] | None:
    """A certificate m = prod (2^k - 1), smallest factors first."""
    if m == 1:
        return []
    for f in mersenne_numbers(m):
        if m % f == 0:
            rest = odd_factorization(m // f)
            if rest is not None:
                return [f] + rest
    return None


def reduced_factors(N: int) -> np.ndarray:
    """q - 1 for prime powers q <= N + 1 (q - 1 >= 2), plus 2, 3, 4."""
    qs = []
    for p in primerange(2, N + 2):
        q = p
        while q <= N + 1:
            qs.append(q - 1)
            q *= p
    facs = np.array(qs + [2, 3, 4], dtype=np.int64)
    return np.unique(facs[facs >= 2])


def reduced_mask(N: int) -> np.ndarray:
    """Boolean mask over 0..N of reduced-ring unit group orders."""
    return K.multiplicative_closure(reduced_factors(N), N)


def enumerate_reduced_cardinalities(N: int) -> list[int]:
    if N < 1:
        return []
    return np.flatnonzero(reduced_mask(N)).tolist()


@dataclass(frozen=True)
class Checkpoint:
    n: int
    count_all: int | None
    count_odd: int | None
    count_reduced: int | None

    def _density(self, count: int | None) -> str:
        return "" if count is None else decimal_string(Fraction(count, self.n))

    @property
    def density_all(self) -> str:
        return self._density(self.count_all)

    @property
    def density_odd(self) -> str:
        return self._density(self.count_odd)

    @property
    def density_reduced(self) -> str:
        return self._density(self.count_reduced)

    def row(self) -> dict:
        return {
            "n": self.n,
            "count_all": "" if self.count_all is None else self.count_all,
            "count_odd": "" if self.count_odd is None else self.count_odd,
            "count_reduced": "" if self.count_reduced is None else self.count_reduced,
            "density_all": self.density_all,
            "density_odd": self.density_odd,
            "density_reduced": self.density_reduced,
        }


@dataclass(frozen=True)
class DensityReport:
    N: int
    checkpoints: tuple[Checkpoint, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for c in self.checkpoints:
            w.writerow(c.row())
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"N": self.N, "checkpoints": [c.row() for c in self.checkpoints]}


def density_scan(
    N: int,
    checkpoints: Iterable[int] | None = None,
    sets: Sequence[str] = SETS,
    limit: int = DEFAULT_LIMIT,
) -> DensityReport:
    if N < 1:
        raise ValueError("N must be positive")
    if N > limit:
        raise ValueError(f"N = {N} exceeds the density limit {limit}")
    bad = set(sets) - set(SETS)
    if bad:
        raise ValueError(f"unknown set(s): {', '.join(sorted(bad))}")
    cps = sorted({int(c) for c in (checkpoints or [N]) if 1 <= int(c) <= N})
    want_odd = "odd" in sets or "all" in sets
    odd = np.array(enumerate_odd_realizable(N), dtype=np.int64) if want_odd else None
    red = np.cumsum(reduced_mask(N)) if "reduced" in sets else None
    rows = []
    for n in cps:
        n_odd = int(np.searchsorted(odd, n, side="right")) if odd is not None else None
        rows.append(
            Checkpoint(
                n=n,
                count_all=n // 2 + n_odd if "all" in sets else None,
                count_odd=n_odd if "odd" in sets else None,
                count_reduced=int(red[n]) if red is not None else None,
            )
        )
    return DensityReport(N, tuple(rows))
