"""Commutative rings presented as finitely generated Z-modules with structure constants.

Rings over Z[i] or Z/nZ are stored after restriction of scalars to Z: a
Z[i]-basis b_1..b_k becomes the Z-basis b_1, i*b_1, ..., b_k, i*b_k, and
Z/nZ contributes the relations n*b_j = 0. Every ring is therefore one
shape: Z^k modulo a relation lattice, with an integer multiplication tensor.

:meth:`ModuleRing.normalized` puts the additive group in Smith form so that
elements have canonical coordinates (free coordinates, then torsion
coordinates reduced modulo their invariant factors).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .abelian import AbelianGroup, normalize
from .gaussian import smith_normal_form_full


class RingStructureError(ValueError):
    """The data does not define a commutative ring with identity."""


class BoundExceeded(RuntimeError):
    """An enumeration would exceed its configured size bound."""


DEFAULT_BOUND = 1 << 20


def reduce_mod(Y: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """Canonical coordinates: torsion entries reduced, free entries untouched."""
    out = np.array(Y, dtype=np.int64, copy=True)
    tors = moduli > 0
    out[..., tors] %= moduli[tors]
    return out


@dataclass(frozen=True)
class NormalForm:
    moduli: np.ndarray  # 0 for free coordinates, else the invariant factor (> 1)
    mult: np.ndarray  # structure constants in normalized coordinates
    one: np.ndarray
    to_normal: np.ndarray  # x (original coords, row) -> x @ to_normal
    from_normal: np.ndarray  # y -> y @ from_normal

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def is_finite(self) -> bool:
        return bool((self.moduli > 0).all())

    @property
    def size(self) -> int | None:
        return int(np.prod(self.moduli, dtype=object)) if self.is_finite else None

    def reduce(self, Y: np.ndarray) -> np.ndarray:
        return reduce_mod(Y, self.moduli)

    def mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Row-wise product of element arrays."""
        X = np.atleast_2d(X)
        Y = np.atleast_2d(Y)
        return self.reduce(np.einsum("ni,nj,ijl->nl", X, Y, self.mult, optimize=True))

    def left_matrices(self, X: np.ndarray) -> np.ndarray:
        """M[n] with y @ M[n] = x_n * y (unreduced)."""
        return np.einsum("ni,ijl->njl", np.atleast_2d(X), self.mult)


def _change_basis(mult: np.ndarray, F: np.ndarray, T: np.ndarray) -> np.ndarray:
    """sum_ijl F[a,i] F[b,j] mult[i,j,l] T[l,m], as three tensordots.

    int64 when every partial sum provably fits, exact Python ints otherwise.
    """
    k = mult.shape[0]
    bound = float(np.abs(F).max(initial=0)) ** 2 * float(np.abs(mult).max(initial=0)) * float(np.abs(T).max(initial=0)) * k**4
    dtype = np.int64 if bound < 2.0**62 else object
    M, F, T = mult.astype(dtype), F.astype(dtype), T.astype(dtype)
    X = np.tensordot(F, M, axes=([1], [0]))  # a, j, l
    X = np.tensordot(X, F, axes=([1], [1]))  # a, l, b
    X = np.tensordot(X, T, axes=([1], [0]))  # a, b, m
    return X


@dataclass
class ModuleRing:
    """Z^rank / rowspan(relations) with multiplication ``mult[i, j, :]``.

    ``nil_gens`` are elements (original coordinates) designated as
    generating the nilradical as an ideal; families that know their
    nilradical supply them.
    """

    base: str
    rank: int
    mult: np.ndarray
    relations: np.ndarray
    one: np.ndarray
    nil_gens: np.ndarray | None = None
    labels: Sequence[str] = field(default_factory=tuple)
    check: bool = True

    def __post_init__(self):
        self.mult = np.asarray(self.mult, dtype=np.int64).reshape(self.rank, self.rank, self.rank)
        self.relations = np.asarray(self.relations, dtype=np.int64).reshape(-1, self.rank)
        self.one = np.asarray(self.one, dtype=np.int64).reshape(self.rank)
        if self.nil_gens is not None:
            self.nil_gens = np.asarray(self.nil_gens, dtype=np.int64).reshape(-1, self.rank)
        if self.check:
            self.validate()

    @cached_property
    def normalized(self) -> NormalForm:
        k = self.rank
        rows = [list(map(int, r)) for r in self.relations if any(r)]
        if rows:
            D, _, Q, _, Qinv = smith_normal_form_full(rows, "Z")
            diag = [abs(D[i][i]) if i < len(D) else 0 for i in range(k)]
        else:
            Q = [[int(i == j) for j in range(k)] for i in range(k)]
            Qinv = Q
            diag = [0] * k
        keep = [i for i in range(k) if diag[i] != 1]
        Q = np.array(Q, dtype=object)
        Qinv = np.array(Qinv, dtype=object)
        to_normal = Q[:, keep]
        from_normal = Qinv[keep, :]
        moduli = np.array([diag[i] for i in keep], dtype=np.int64)
        # structure constants of the new basis f_a = from_normal[a]
        if len(keep) == k and not rows:
            mult = self.mult.copy()
        else:
            mult = reduce_mod(_change_basis(self.mult, from_normal, to_normal).astype(np.int64), moduli)
        one = reduce_mod((self.one.astype(object) @ to_normal).astype(np.int64), moduli)
        return NormalForm(
            moduli=moduli,
            mult=mult.reshape(len(keep), len(keep), len(keep)),
            one=one.reshape(len(keep)),
            to_normal=to_normal.astype(np.int64).reshape(k, len(keep)),
            from_normal=from_normal.astype(np.int64).reshape(len(keep), k),
        )

    @property
    def additive_group(self) -> tuple[AbelianGroup, int]:
        """(torsion subgroup, free rank) of the additive group."""
        m = self.normalized.moduli
        return normalize([int(d) for d in m if d > 0]), int((m == 0).sum())

    def to_normal(self, X) -> np.ndarray:
        nf = self.normalized
        return nf.reduce(np.asarray(X, dtype=np.int64) @ nf.to_normal)

    def from_normal(self, Y) -> np.ndarray:
        return np.asarray(Y, dtype=np.int64) @ self.normalized.from_normal

    def validate(self) -> None:
        """Relations form an ideal; multiplication commutative, associative, unital.

        Exhaustive on basis elements up to rank 64, else on random triples.
        """
        nf = self.normalized
        k = nf.rank
        if k == 0:
            return
        T = nf.mult
        tors = nf.moduli > 0
        # the torsion relations must annihilate products: d_a * f_a * f_b = 0
        for a in np.flatnonzero(tors):
            if nf.reduce(nf.moduli[a] * T[a]).any():
                raise RingStructureError("relation lattice is not an ideal")
        if nf.reduce(T - T.transpose(1, 0, 2)).any():
            raise RingStructureError("multiplication is not commutative")
        exact = float(np.abs(T).max()) ** 2 * k < 2.0**52
        Tf = T.astype(np.float64) if exact else T.astype(object)

        def _int(X):
            return np.rint(X).astype(np.int64) if exact else X.astype(np.int64)

        if k <= 64:
            # (f_a f_b) f_c against f_a (f_b f_c), one a at a time
            flat_right = Tf.reshape(k, k * k)
            flat_left = Tf.reshape(k * k, k)
            for a in range(k):
                lhs = (Tf[a] @ flat_right).reshape(k, k, k)
                rhs = (flat_left @ Tf[a]).reshape(k, k, k)
                if nf.reduce(_int(lhs - rhs)).any():
                    raise RingStructureError("multiplication is not associative")
        else:
            rng = np.random.default_rng(0)
            idx = rng.integers(0, k, size=(100_000, 3))
            a, b, c = idx.T
            lhs = np.empty((len(idx), k), dtype=Tf.dtype)
            rhs = np.empty((len(idx), k), dtype=Tf.dtype)
            # group by the outer factor so each block is a single matrix product
            for j in range(k):
                sel = c == j
                lhs[sel] = Tf[a[sel], b[sel]] @ Tf[:, j, :]
                sel = a == j
                rhs[sel] = Tf[b[sel], c[sel]] @ Tf[j]
            if nf.reduce(_int(lhs - rhs)).any():
                raise RingStructureError("multiplication is not associative")
        # one * f_b = f_b for every basis element
        left_one = np.tensordot(nf.one, T, axes=([0], [0]))
        if nf.reduce(left_one - np.eye(k, dtype=np.int64)).any():
            raise RingStructureError("declared identity is not an identity")


def direct_sum(rings: Sequence[ModuleRing], base: str | None = None) -> ModuleRing:
    """Product ring: block-diagonal structure constants and relations."""
    k = sum(r.rank for r in rings)
    mult = np.zeros((k, k, k), dtype=np.int64)
    rels = []
    one = np.zeros(k, dtype=np.int64)
    nil = []
    labels = []
    off = 0
    for j, r in enumerate(rings):
        s = slice(off, off + r.rank)
        mult[s, s, s] = r.mult
        for row in r.relations:
            v = np.zeros(k, dtype=np.int64)
            v[s] = row
            rels.append(v)
        one[s] = r.one
        if r.nil_gens is not None:
            for row in r.nil_gens:
                v = np.zeros(k, dtype=np.int64)
                v[s] = row
                nil.append(v)
        labels.extend(f"{lab}@{j}" for lab in (r.labels or [f"e{i}" for i in range(r.rank)]))
        off += r.rank
    if base is None:
        bases = {r.base for r in rings}
        base = bases.pop() if len(bases) == 1 else "Z"
    return ModuleRing(
        base=base,
        rank=k,
        mult=mult,
        relations=np.array(rels, dtype=np.int64).reshape(-1, k),
        one=one,
        nil_gens=np.array(nil, dtype=np.int64).reshape(-1, k) if nil else None,
        labels=tuple(labels),
    )


def zmod(n: int) -> ModuleRing:
    """Z/nZ (n = 0 gives Z)."""
    return ModuleRing(
        base=f"Zmod:{n}" if n else "Z",
        rank=1,
        mult=[[[1]]],
        relations=[[n]] if n else np.zeros((0, 1)),
        one=[1],
        labels=("1",),
    )
