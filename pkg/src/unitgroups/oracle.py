"""Brute-force and certificate-style unit group computations.

Finite rings are enumerated outright. For the characteristic-zero families
the unit group is infinite-looking but finite: every unit is a lift of a
unit of A/N times an element of 1+N, so the candidates are enumerated,
checked to be invertible and closed, and the count is certified against
|A*| = |1+N| |(A/N)*|.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable

import numpy as np
from sympy import factorint

from . import _kernels as K
from .abelian import AbelianGroup, direct_product, normalize, structure_from_order_statistics
from .polyring import RingPresentation, build_module_ring, monomial_index
from .ring import DEFAULT_BOUND, BoundExceeded, ModuleRing, NormalForm


class OracleError(RuntimeError):
    """A certificate check failed: non-invertible candidate, no closure, bad count."""


@dataclass(frozen=True)
class UnitGroupReport:
    unit_count: int
    structure: AbelianGroup
    nilradical_size: int
    quotient_unit_count: int
    exact_sequence_ok: bool

    def to_json(self) -> dict:
        return {
            "unit_count": self.unit_count,
            "structure": str(self.structure),
            "nilradical_size": self.nilradical_size,
            "quotient_unit_count": self.quotient_unit_count,
            "exact_sequence_ok": self.exact_sequence_ok,
        }


def _structure(orders: Iterable[int], n: int) -> AbelianGroup:
    vals, counts = np.unique(np.asarray(list(orders), dtype=np.int64), return_counts=True)
    return structure_from_order_statistics(dict(zip(vals.tolist(), counts.tolist())), n)


# -- additive enumeration --------------------------------------------------

def _span(gens: np.ndarray, moduli: np.ndarray, bound: int) -> np.ndarray:
    """Subgroup of the torsion coordinates generated by ``gens`` (normalized coords)."""
    k = len(moduli)
    elems = np.zeros((1, k), dtype=np.int64)
    seen = {elems[0].tobytes()}
    for g in gens:
        if g.tobytes() in seen:
            continue
        layer = elems
        grown = [elems]
        while True:
            layer = (layer + g) % np.where(moduli > 0, moduli, 1)
            fresh = [row for row in layer if row.tobytes() not in seen]
            if not fresh:
                break
            for row in fresh:
                seen.add(row.tobytes())
            if len(seen) > bound:
                raise BoundExceeded(f"subgroup exceeds bound {bound}")
            grown.append(np.array(fresh))
            layer = np.array(fresh)
        elems = np.concatenate(grown)
    return elems


def enumerate_additive(R: ModuleRing, bound: int = DEFAULT_BOUND, subset: str | None = None) -> np.ndarray:
    """Coset representatives in normalized coordinates.

    ``subset`` is None (the whole ring, which must be finite), ``"torsion"``
    or ``"nilradical"`` (needs designated generators).
    """
    nf = R.normalized
    m = nf.moduli
    if subset is None:
        if not nf.is_finite:
            raise ValueError("additive group is infinite; request a finite subset")
        if nf.size > bound:
            raise BoundExceeded(f"ring has {nf.size} elements, bound is {bound}")
        return K.decode_all(m)
    if subset == "torsion":
        tors = m > 0
        size = int(np.prod(m[tors], dtype=object)) if tors.any() else 1
        if size > bound:
            raise BoundExceeded(f"torsion has {size} elements, bound is {bound}")
        sub = K.decode_all(m[tors])
        out = np.zeros((len(sub), len(m)), dtype=np.int64)
        out[:, tors] = sub
        return out
    if subset == "nilradical":
        if R.nil_gens is None:
            return np.zeros((1, len(m)), dtype=np.int64)
        G = R.to_normal(R.nil_gens)
        # ideal generated: all g * f_b, as an additive span
        gens = nf.reduce(np.einsum("ni,ijl->njl", G, nf.mult).reshape(-1, len(m)))
        gens = np.concatenate([G, gens])
        if (gens[:, m == 0] != 0).any():
            raise ValueError("nilradical is infinite")
        gens = gens[gens.any(axis=1)]
        return _span(np.unique(gens, axis=0), m, bound)
    raise ValueError(f"unknown subset {subset!r}")


def _nilpotency_ok(nf: NormalForm, N: np.ndarray) -> bool:
    # index of a nilpotent element of a finite ideal N is at most log2|N| + 1
    steps = len(N).bit_length() + 1
    P = N.copy()
    for _ in range(steps):
        P = nf.mul(P, N)
    return not P.any()


# -- finite rings ----------------------------------------------------------

def _finite_orders(nf: NormalForm) -> np.ndarray:
    one = int(K.encode(nf.one, nf.moduli)) if nf.rank else 0
    if nf.rank == 0:
        return np.array([1], dtype=np.int64)
    return K.unit_orders(nf.mult, nf.moduli, one)


def _generators_of(idx: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """A small generating set of the subgroup whose elements have these indices."""
    elems = K.decode_all(moduli)
    target = set(idx.tolist())
    inside = np.zeros(len(elems), dtype=bool)
    inside[0] = True
    gens = []
    mod = np.where(moduli > 0, moduli, 1)
    for j in idx:
        if inside[j]:
            continue
        gens.append(elems[j])
        cur = np.flatnonzero(inside)
        layer = cur
        while True:
            layer = K.encode((elems[layer] + elems[j]) % mod, moduli)
            layer = layer[~inside[layer]]
            if not len(layer):
                break
            inside[layer] = True
        if int(inside.sum()) == len(target):
            break
    return np.array(gens, dtype=np.int64).reshape(-1, len(moduli))


def unit_group_finite(R: ModuleRing, bound: int = DEFAULT_BOUND) -> UnitGroupReport:
    nf = R.normalized
    if not nf.is_finite:
        raise ValueError("ring is infinite; use unit_group_char0_witness")
    if nf.size > bound:
        raise BoundExceeded(f"ring has {nf.size} elements, bound is {bound}")
    orders = _finite_orders(nf)
    units = orders[orders > 0]
    nil_idx = np.flatnonzero(orders == K.NILPOTENT)
    if nf.rank == 0:
        nil_idx = np.array([0])
    n_nil = len(nil_idx)
    # the quotient A/N as its own ring, then its units by the same kernel
    gens = _generators_of(nil_idx, nf.moduli) if nf.rank else np.zeros((0, 0), np.int64)
    if len(gens):
        Q = ModuleRing(
            base=R.base,
            rank=R.rank,
            mult=R.mult,
            relations=np.concatenate([R.relations, R.from_normal(gens)]),
            one=R.one,
            check=False,
        )
        q_orders = _finite_orders(Q.normalized)
        q_units = int((q_orders > 0).sum())
        if (q_orders == K.NILPOTENT).sum() != 1:
            raise OracleError("quotient by the nilradical is not reduced")
    else:
        q_units = len(units)
    return UnitGroupReport(
        unit_count=len(units),
        structure=_structure(units, len(units)),
        nilradical_size=n_nil,
        quotient_unit_count=q_units,
        exact_sequence_ok=len(units) == n_nil * q_units,
    )


# -- characteristic zero ---------------------------------------------------

def _pow_rows(nf: NormalForm, X: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Row-wise X[n] ** e[n] by square-and-multiply."""
    R = np.repeat(nf.one[None, :], len(X), axis=0)
    B, e = X.copy(), np.asarray(e, dtype=np.int64).copy()
    while (e > 0).any():
        odd = (e & 1).astype(bool)
        if odd.any():
            R[odd] = nf.mul(R[odd], B[odd])
        e >>= 1
        if (e > 0).any():
            B = nf.mul(B, B)
    return R


def _exact_orders(nf: NormalForm, C: np.ndarray, n: int) -> np.ndarray:
    """Orders of rows already known to satisfy c^n = 1."""
    order = np.full(len(C), n, dtype=np.int64)
    for p in factorint(n):
        while True:
            idx = np.flatnonzero(order % p == 0)
            if not len(idx):
                break
            hit = (_pow_rows(nf, C[idx], order[idx] // p) == nf.one).all(axis=1)
            if not hit.any():
                break
            order[idx[hit]] //= p
    return order


class _RowIndex:
    """Membership of integer row vectors in a fixed set, by mixed-radix keys."""

    def __init__(self, X: np.ndarray):
        self.lo = X.min(axis=0)
        self.span = X.max(axis=0) - self.lo + 1
        if float(np.prod(self.span.astype(np.float64))) >= 2.0**62:
            raise BoundExceeded("row keys do not fit in 64 bits")
        self.radix = np.concatenate([[1], np.cumprod(self.span[:-1])]).astype(np.int64)
        self.keys = np.sort(self._encode(X))

    def _encode(self, X: np.ndarray) -> np.ndarray:
        return (X - self.lo) @ self.radix

    def distinct(self) -> int:
        return int(len(np.unique(self.keys)))

    def contains_all(self, X: np.ndarray) -> bool:
        Y = X - self.lo
        if (Y < 0).any() or (Y >= self.span).any():
            return False
        k = Y @ self.radix
        pos = np.minimum(np.searchsorted(self.keys, k), len(self.keys) - 1)
        return bool((self.keys[pos] == k).all())


def unit_group_char0_witness(R: ModuleRing, bound: int = DEFAULT_BOUND) -> UnitGroupReport:
    """Units as lifts of (A/N)* times 1+N, certified by invertibility, closure and count.

    N is checked to be an ideal of nilpotents, so 1+N is a group. Then
    C = L(1+N) is closed under multiplication as soon as C*l lies in C for
    every lift l. Every c then satisfies c^|C| = 1, so C is a group of units.
    """
    nf = R.normalized
    lifts = getattr(R, "unit_lifts", None)
    if lifts is None:
        raise ValueError("ring carries no lifts of the units of A/N")
    N = enumerate_additive(R, bound, subset="nilradical")
    if not _nilpotency_ok(nf, N):
        raise OracleError("designated nilradical contains a non-nilpotent element")
    L = R.to_normal(lifts)
    total = len(L) * len(N)
    if total > bound:
        raise BoundExceeded(f"{total} candidate units, bound is {bound}")
    one_plus_n = nf.reduce(N + nf.one)
    C = nf.mul(np.repeat(L, len(N), axis=0), np.tile(one_plus_n, (len(L), 1)))
    index = _RowIndex(C)
    if index.distinct() != total:
        raise OracleError("lifts are not distinct modulo the nilradical")
    n_index = _RowIndex(N)
    for b in range(nf.rank):
        if not n_index.contains_all(nf.reduce(N @ nf.mult[:, b, :])):
            raise OracleError("designated nilradical is not an ideal")
    for M in np.tensordot(L, nf.mult, axes=([1], [0])):  # left multiplication by each lift
        if not index.contains_all(nf.reduce(C @ M)):
            raise OracleError("candidate set is not closed under multiplication")
    if not (_pow_rows(nf, C, np.full(total, total)) == nf.one).all():
        raise OracleError("a candidate is not a unit")
    orders = _exact_orders(nf, C, total)
    return UnitGroupReport(
        unit_count=total,
        structure=_structure(orders, total),
        nilradical_size=len(N),
        quotient_unit_count=len(L),
        exact_sequence_ok=True,
    )


# -- A_n via linear algebra over F_3 ---------------------------------------

def _rank_mod3(M: np.ndarray) -> int:
    A = np.array(M, dtype=np.int64) % 3
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * A[r, c]) % 3  # 1 and 2 are their own inverses mod 3
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % 3
        r += 1
        if r == rows:
            break
    return r


def _an_images(n: int) -> np.ndarray:
    """Images in B/3B of the basis monomials x^e0 y_T of A_n.

    B = prod_S Z[zeta_3] with y_i -> x^2 for i in S, x otherwise; each factor
    mod 3 is F_3[x]/(x-1)^2 with basis (1, x-1), where x^m -> (1, m mod 3).
    """
    subsets = range(2**n)
    rows = []
    for idx in range(2 ** (n + 1)):
        e0 = (idx >> n) & 1
        T = idx & (2**n - 1)
        v = []
        for S in subsets:
            m = e0 + bin(T).count("1") + bin(T & S).count("1")
            v.extend((1, m % 3))
        rows.append(v)
    return np.array(rows, dtype=np.int64)


@dataclass(frozen=True)
class AnBounds:
    n: int
    dim_v: int
    dim_vw: int
    upper_3: int  # |V meet W|
    lower_3: int  # |U|
    two_part: int


def an_bounds(n: int, bound: int = 6) -> AnBounds:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > bound:
        raise BoundExceeded(f"A_{n} exceeds the index bound {bound}")
    img = _an_images(n)
    dim_v = _rank_mod3(img)
    # W: constant coordinate 1 in every factor. V meet W is a coset of the
    # subspace of V with all constant coordinates 0, when it is non-empty.
    const = img[:, 0::2]
    aug = np.concatenate([const, np.ones((1, const.shape[1]), np.int64)])
    if _rank_mod3(aug) != _rank_mod3(const):
        raise OracleError("V does not meet W")
    dim_vw = dim_v - _rank_mod3(const)
    # 2-part: sign vectors (a_S) with a_S - a_T in I_S + I_T for all S, T.
    # I_S + I_T = (3, x-1, y_1-1, ..., y_n-1) meets Z in 3Z, and a_S - a_T is
    # 0 or +-2, so each pair is forced to agree; count the agreement classes.
    ideal_meets_z = 3
    parent = list(range(2**n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for S in range(2**n):
        for T in range(S + 1, 2**n):
            if 2 % ideal_meets_z:
                parent[find(T)] = find(S)
    two_part = 2 ** len({find(S) for S in range(2**n)})
    lower = _an_lower_bound(n)
    return AnBounds(n, dim_v, dim_vw, 3**dim_vw, lower, two_part)


def _an_lower_bound(n: int) -> int:
    """|U| for U = {x^e0 y_1^e1 ... y_n^en}, checked inside A_n itself."""
    R = build_module_ring(RingPresentation("Z", "AnRing", {"n": n}))
    nf = R.normalized
    k = nf.rank
    gens = []
    for j in range(n + 1):
        g = np.zeros(k, dtype=np.int64)
        g[monomial_index(n, [int(i == j) for i in range(n + 1)])] = 1
        gens.append(g)
    U = nf.one[None, :].copy()
    for g in gens:
        g2 = nf.mul(g, g)[0]
        U = np.concatenate([U, nf.mul(U, np.repeat(g[None], len(U), 0)), nf.mul(U, np.repeat(g2[None], len(U), 0))])
    cubes = nf.mul(nf.mul(U, U), U)
    if not (cubes == nf.one).all():
        raise OracleError("an element of U is not of order dividing 3")
    return len({row.tobytes() for row in U})


def an_verify(n: int, bound: int = 6) -> UnitGroupReport:
    b = an_bounds(n, bound)
    if b.upper_3 != b.lower_3:
        raise OracleError(f"A_{n}: 3-part bounds disagree ({b.lower_3} <= |G| <= {b.upper_3})")
    count = b.two_part * b.lower_3
    G = normalize([2] * (b.two_part.bit_length() - 1) + [3] * (b.dim_vw))
    return UnitGroupReport(count, G, 1, count, True)


# -- dispatch --------------------------------------------------------------

def unit_group(P: RingPresentation, bound: int = DEFAULT_BOUND, an_bound: int = 6) -> UnitGroupReport:
    """Unit group of any supported presentation; products are handled factorwise."""
    if P.family == "DirectProduct":
        reports = [unit_group(c, bound, an_bound) for c in P.params["components"]]
        return UnitGroupReport(
            unit_count=prod(r.unit_count for r in reports),
            structure=direct_product(*(r.structure for r in reports)),
            nilradical_size=prod(r.nilradical_size for r in reports),
            quotient_unit_count=prod(r.quotient_unit_count for r in reports),
            exact_sequence_ok=all(r.exact_sequence_ok for r in reports),
        )
    if P.family == "AnRing":
        return an_verify(int(P.params["n"]), an_bound)
    R = build_module_ring(P)
    if R.normalized.is_finite:
        return unit_group_finite(R, bound)
    return unit_group_char0_witness(R, bound)


def exact_sequence_check(R: ModuleRing | RingPresentation, bound: int = DEFAULT_BOUND) -> bool:
    if isinstance(R, RingPresentation):
        rep = unit_group(R, bound)
    elif R.normalized.is_finite:
        rep = unit_group_finite(R, bound)
    else:
        rep = unit_group_char0_witness(R, bound)
    return rep.unit_count == rep.nilradical_size * rep.quotient_unit_count


def crt_unit_group(n: int) -> AbelianGroup:
    """(Z/n)* from the prime-power formula, without touching any ring."""
    if n < 1:
        raise ValueError("n must be positive")
    orders = []
    for p, e in factorint(n).items():
        if p == 2:
            if e >= 2:
                orders.append(2)
            if e >= 3:
                orders.append(2 ** (e - 2))
        else:
            orders.append((p - 1) * p ** (e - 1))
    return normalize(orders)
