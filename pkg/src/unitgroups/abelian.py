"""Finite abelian groups in primary-decomposition form."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import prod
from typing import Iterable, Iterator, Mapping

from sympy import factorint, isprime
from sympy.utilities.iterables import partitions


@dataclass(frozen=True)
class AbelianGroup:
    """Direct sum of Z/p^e over the (p, e) pairs in ``parts``.

    ``parts`` is a tuple of ``(p, exponents)`` sorted by prime, exponents
    sorted descending. Use :func:`normalize` or :meth:`from_parts` rather
    than building one by hand.
    """

    parts: tuple[tuple[int, tuple[int, ...]], ...] = ()

    @classmethod
    def from_parts(cls, parts: Mapping[int, Iterable[int]]) -> "AbelianGroup":
        clean = []
        for p in sorted(parts):
            exps = tuple(sorted((e for e in parts[p] if e > 0), reverse=True))
            if exps:
                if not isprime(p):
                    raise ValueError(f"{p} is not prime")
                clean.append((p, exps))
        return cls(tuple(clean))

    @cached_property
    def order(self) -> int:
        return prod(p**e for p, exps in self.parts for e in exps)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.parts)

    def exponents(self, p: int) -> tuple[int, ...]:
        for q, exps in self.parts:
            if q == p:
                return exps
        return ()

    def as_dict(self) -> dict[int, list[int]]:
        return {p: list(exps) for p, exps in self.parts}

    def is_trivial(self) -> bool:
        return not self.parts

    def is_cyclic(self) -> bool:
        return all(len(exps) == 1 for _, exps in self.parts)

    def invariant_factors(self) -> list[int]:
        """Invariant factors, largest first (d_1 multiple of d_2 ...)."""
        width = max((len(e) for _, e in self.parts), default=0)
        return [
            prod(p ** exps[i] for p, exps in self.parts if i < len(exps))
            for i in range(width)
        ]

    def cyclic_factors(self) -> list[int]:
        """Orders p^e of the primary cyclic summands, in canonical order."""
        return [p**e for p, exps in self.parts for e in exps]

    def remove(self, other: "AbelianGroup") -> "AbelianGroup":
        """Complement of a direct factor given as a sub-multiset of parts."""
        parts = self.as_dict()
        for p, exps in other.parts:
            have = Counter(parts.get(p, []))
            need = Counter(exps)
            if need - have:
                raise ValueError(f"{other} is not a direct factor of {self}")
            parts[p] = list((have - need).elements())
        return AbelianGroup.from_parts(parts)

    def __str__(self) -> str:
        return format_group(self)

    def __repr__(self) -> str:
        return f"AbelianGroup({format_group(self)!r})"


TRIVIAL = AbelianGroup()


def normalize(orders: Iterable[int]) -> AbelianGroup:
    """Primary decomposition of Z/a_1 x ... x Z/a_n. Order-1 factors are dropped."""
    parts: dict[int, list[int]] = {}
    for a in orders:
        a = int(a)
        if a <= 0:
            raise ValueError(f"cyclic factor order must be positive, got {a}")
        for p, e in factorint(a).items():
            parts.setdefault(p, []).append(e)
    return AbelianGroup.from_parts(parts)


def cyclic(n: int) -> AbelianGroup:
    return normalize([n])


def direct_product(*groups: AbelianGroup) -> AbelianGroup:
    parts: dict[int, list[int]] = {}
    for g in groups:
        for p, exps in g.parts:
            parts.setdefault(p, []).extend(exps)
    return AbelianGroup.from_parts(parts)


def sylow(G: AbelianGroup, p: int) -> AbelianGroup:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    exps = G.exponents(p)
    return AbelianGroup(((p, exps),)) if exps else TRIVIAL


def is_square(G: AbelianGroup) -> bool:
    """True iff G = K x K for some K (every exponent has even multiplicity)."""
    return all(c % 2 == 0 for _, exps in G.parts for c in Counter(exps).values())


def min_two_exponent(G: AbelianGroup) -> int:
    exps = G.exponents(2)
    return min(exps) if exps else 0


# -- order statistics ------------------------------------------------------

def _pgroup_order_counts(p: int, exps: tuple[int, ...]) -> dict[int, int]:
    # elements of order dividing p^k: prod p^min(e, k)
    top = max(exps)
    below = [prod(p ** min(e, k) for e in exps) for k in range(top + 1)]
    return {p**k: below[k] - (below[k - 1] if k else 0) for k in range(top + 1)}


def order_statistics(G: AbelianGroup) -> dict[int, int]:
    """Map element order -> number of elements of that order."""
    counts = {1: 1}
    for p, exps in G.parts:
        local = _pgroup_order_counts(p, exps)
        counts = {a * b: ca * cb for a, ca in counts.items() for b, cb in local.items()}
    return counts


def pgroups(p: int, e: int) -> Iterator[tuple[int, ...]]:
    """Exponent multisets of the abelian groups of order p^e."""
    for part in partitions(e):
        yield tuple(sorted((k for k, m in part.items() for _ in range(m)), reverse=True))


def groups_of_order(n: int) -> list[AbelianGroup]:
    """All abelian groups of order n up to isomorphism."""
    fac = sorted(factorint(n).items())
    choices = [[(p, exps) for exps in pgroups(p, e)] for p, e in fac]
    return [AbelianGroup(tuple(c)) for c in product(*choices)]


def structure_from_order_statistics(order_counts: Mapping[int, int], n: int) -> AbelianGroup:
    """Recover the abelian group of order n with the given element-order counts.

    Candidates are matched one Sylow subgroup at a time (the elements of
    p-power order form the p-Sylow), then the full statistics are checked.
    """
    counts = {int(k): int(v) for k, v in order_counts.items() if v}
    if sum(counts.values()) != n:
        raise ValueError(f"order counts sum to {sum(counts.values())}, expected {n}")
    parts = []
    for p, e in sorted(factorint(n).items()):
        local = {1: 1}
        for k in range(1, e + 1):
            c = counts.get(p**k, 0)
            if c:
                local[p**k] = c
        for exps in pgroups(p, e):
            if _pgroup_order_counts(p, exps) == local:
                parts.append((p, exps))
                break
        else:
            raise ValueError(f"no abelian {p}-group of order {p}^{e} matches {local}")
    G = AbelianGroup(tuple(parts))
    if order_statistics(G) != counts:
        raise ValueError("order statistics are not those of an abelian group")
    return G


# -- text format -----------------------------------------------------------

_TERM = re.compile(r"^C(\d+)(?:\^(\d+))?$")


def parse_group(text: str) -> AbelianGroup:
    """Parse ``"C4 x C11^2"``; non-canonical terms like ``C12`` are accepted."""
    s = "".join(text.split())
    if s in ("", "1", "C1", "trivial"):
        return TRIVIAL
    orders = []
    for term in s.split("x"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"bad group term {term!r} in {text!r}")
        d, e = int(m.group(1)), int(m.group(2) or 1)
        if d == 0:
            raise ValueError("C0 is not a finite cyclic group")
        orders.extend([d] * e)
    return normalize(orders)


@lru_cache(maxsize=4096)
def format_group(G: AbelianGroup) -> str:
    if not G.parts:
        return "C1"
    terms = []
    for p, exps in G.parts:
        for e, m in sorted(Counter(exps).items(), reverse=True):
            terms.append(f"C{p**e}" + (f"^{m}" if m > 1 else ""))
    return " x ".join(terms)
