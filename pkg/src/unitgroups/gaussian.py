"""Gaussian integers, their factorization, and Smith normal form over Z and Z[i]."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Sequence

from sympy import factorint, isprime

from .abelian import AbelianGroup, direct_product, normalize


@dataclass(frozen=True, order=True)
class GaussianInt:
    re: int = 0
    im: int = 0

    @classmethod
    def coerce(cls, z) -> "GaussianInt":
        if isinstance(z, GaussianInt):
            return z
        if isinstance(z, int):
            return cls(z, 0)
        if isinstance(z, complex) and z.real.is_integer() and z.imag.is_integer():
            return cls(int(z.real), int(z.imag))
        raise TypeError(f"cannot make a Gaussian integer from {z!r}")

    def __add__(self, other):
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianInt.coerce(other) - self

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not Gaussian integers in general")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.re or self.im)

    def __divmod__(self, other):
        return gdivmod(self, other)

    def __floordiv__(self, other):
        return gdivmod(self, other)[0]

    def __mod__(self, other):
        return gdivmod(self, other)[1]

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def is_unit(self) -> bool:
        return norm(self) == 1

    def __str__(self) -> str:
        return format_gaussian(self)


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS = (ONE, I, -ONE, -I)


def norm(z: GaussianInt) -> int:
    return z.re * z.re + z.im * z.im


def _round_div(a: int, n: int) -> int:
    # nearest integer to a/n for n > 0, halves rounded up
    return (2 * a + n) // (2 * n)


def gdivmod(a, b) -> tuple[GaussianInt, GaussianInt]:
    """Euclidean division: a = q*b + r with norm(r) < norm(b)."""
    a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
    n = norm(b)
    if n == 0:
        raise ZeroDivisionError("Gaussian division by zero")
    num = a * b.conjugate()
    q = GaussianInt(_round_div(num.re, n), _round_div(num.im, n))
    return q, a - q * b


def divides(a: GaussianInt, b: GaussianInt) -> bool:
    return not gdivmod(b, a)[1]


def ggcd(a, b) -> GaussianInt:
    a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
    while b:
        a, b = b, gdivmod(a, b)[1]
    return canonical_associate(a) if a else a


def canonical_associate(z: GaussianInt) -> GaussianInt:
    """Associate with re > 0 and re >= |im|; on the diagonal pick im >= 0."""
    if not z:
        return z
    best = None
    for u in UNITS:
        w = z * u
        if w.re > 0 and w.re >= abs(w.im):
            if best is None or w.im > best.im:
                best = w
    return best


def unit_part(z: GaussianInt) -> GaussianInt:
    """The unit u with z = u * canonical_associate(z)."""
    c = canonical_associate(z)
    for u in UNITS:
        if u * c == z:
            return u
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class GaussianFactorization:
    unit: GaussianInt
    factors: tuple[tuple[GaussianInt, int], ...]

    def expand(self) -> GaussianInt:
        out = self.unit
        for p, e in self.factors:
            out = out * p**e
        return out


@lru_cache(maxsize=None)
def split_prime(p: int) -> GaussianInt:
    """A Gaussian prime over p = 1 (mod 4), found by searching x^2 + y^2 = p.

    Brute force is plenty for the moduli used here; Cornacchia would be the
    upgrade if large p ever matter. Returns the canonical prime with im > 0.
    """
    if p % 4 != 1:
        raise ValueError(f"{p} does not split in Z[i]")
    for x in range(1, isqrt(p) + 1):
        y2 = p - x * x
        y = isqrt(y2)
        if y * y == y2:
            a, b = max(x, y), min(x, y)
            return GaussianInt(a, b)
    raise ValueError(f"{p} is not a sum of two squares")


def gaussian_primes_over(p: int) -> list[GaussianInt]:
    if p == 2:
        return [GaussianInt(1, 1)]
    if p % 4 == 3:
        return [GaussianInt(p, 0)]
    pi = split_prime(p)
    return [pi, canonical_associate(pi.conjugate())]


def factor(z) -> GaussianFactorization:
    z = GaussianInt.coerce(z)
    if not z:
        raise ValueError("cannot factor zero")
    rest = z
    found = []
    for p in sorted(factorint(norm(z))):
        for pi in gaussian_primes_over(p):
            e = 0
            while True:
                q, r = gdivmod(rest, pi)
                if r:
                    break
                rest, e = q, e + 1
            if e:
                found.append((pi, e))
    if not rest.is_unit():
        raise AssertionError(f"factorization of {z} left non-unit {rest}")
    return GaussianFactorization(rest, tuple(found))


def is_gaussian_prime(z: GaussianInt) -> bool:
    f = factor(z)
    return len(f.factors) == 1 and f.factors[0][1] == 1


def quotient_additive_structure(z) -> AbelianGroup:
    """Additive group of Z[i]/(z), assembled prime power by prime power."""
    z = GaussianInt.coerce(z)
    if not z or z.is_unit():
        raise ValueError(f"Z[i]/({z}) needs a non-zero non-unit modulus")
    pieces = []
    for pi, h in factor(z).factors:
        n = norm(pi)
        if n == 2:
            k, odd = divmod(h, 2)
            pieces.append(normalize([2 ** (k + odd), 2**k]))
        elif isprime(n):
            pieces.append(normalize([n**h]))
        else:
            p = pi.re  # inert: pi is the rational prime itself
            pieces.append(normalize([p**h, p**h]))
    return direct_product(*pieces)


def multiplication_lattice(z) -> list[list[int]]:
    """Rows z*1 and z*i written in the Z-basis {1, i}."""
    z = GaussianInt.coerce(z)
    zi = z * I
    return [[z.re, z.im], [zi.re, zi.im]]


# -- text format -----------------------------------------------------------

_GAUSS = re.compile(r"^(?:([+-]?\d+)(?=[+-]|$))?(?:([+-]?)(\d*)i)?$")


def parse_gaussian(text: str) -> GaussianInt:
    s = "".join(str(text).split())
    m = _GAUSS.match(s)
    if not s or not m or (m.group(1) is None and m.group(2) is None and m.group(3) is None):
        raise ValueError(f"bad Gaussian integer {text!r}")
    re_part = int(m.group(1)) if m.group(1) is not None else 0
    im_part = 0
    if s.endswith("i"):
        mag = int(m.group(3)) if m.group(3) else 1
        im_part = -mag if m.group(2) == "-" else mag
    return GaussianInt(re_part, im_part)


def format_gaussian(z: GaussianInt) -> str:
    if not z.im:
        return str(z.re)
    mag = "" if abs(z.im) == 1 else str(abs(z.im))
    if not z.re:
        return ("-" if z.im < 0 else "") + mag + "i"
    return f"{z.re}{'-' if z.im < 0 else '+'}{mag}i"


# -- Smith normal form -----------------------------------------------------

class _IntDomain:
    name = "Z"
    zero, one = 0, 1

    @staticmethod
    def size(a):
        return abs(a)

    @staticmethod
    def divmod(a, b):
        return divmod(a, b)

    @staticmethod
    def normal_unit(a):
        return -1 if a < 0 else 1

    @staticmethod
    def inv_unit(u):
        return u


class _GaussDomain:
    name = "Zi"
    zero, one = ZERO, ONE

    @staticmethod
    def size(a):
        return norm(a)

    @staticmethod
    def divmod(a, b):
        return gdivmod(a, b)

    @staticmethod
    def normal_unit(a):
        return unit_part(a)

    @staticmethod
    def inv_unit(u):
        return u.conjugate()


def _domain(name: str):
    if name == "Z":
        return _IntDomain
    if name in ("Zi", "Z[i]"):
        return _GaussDomain
    raise ValueError(f"unsupported base domain {name!r}")


def _identity(n, dom):
    return [[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)]


def smith_normal_form_full(M: Sequence[Sequence], domain: str = "Z"):
    """Return (D, P, Q, Pinv, Qinv) with P*M*Q = D and M = Pinv*D*Qinv.

    Pivots are always the non-zero entry of least size (|.| or norm), which
    terminates in any Euclidean domain. Diagonal entries are unit-normalized
    (non-negative over Z, canonical associate over Z[i]) and form a
    divisibility chain.
    """
    dom = _domain(domain)
    A = [[GaussianInt.coerce(x) if dom is _GaussDomain else int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    P, Pinv = _identity(m, dom), _identity(m, dom)
    Q, Qinv = _identity(n, dom), _identity(n, dom)

    def row_add(i, j, c):  # row_i += c row_j
        if not c:
            return
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        P[i] = [a + c * b for a, b in zip(P[i], P[j])]
        for r in Pinv:
            r[j] = r[j] - c * r[i]

    def row_swap(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]
        for r in Pinv:
            r[i], r[j] = r[j], r[i]

    def row_scale(i, u):
        A[i] = [u * a for a in A[i]]
        P[i] = [u * a for a in P[i]]
        ui = dom.inv_unit(u)
        for r in Pinv:
            r[i] = r[i] * ui

    def col_add(i, j, c):  # col_i += c col_j
        if not c:
            return
        for r in A:
            r[i] = r[i] + c * r[j]
        for r in Q:
            r[i] = r[i] + c * r[j]
        Qinv[j] = [a - c * b for a, b in zip(Qinv[j], Qinv[i])]

    def col_swap(i, j):
        if i == j:
            return
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in Q:
            r[i], r[j] = r[j], r[i]
        Qinv[i], Qinv[j] = Qinv[j], Qinv[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or dom.size(A[i][j]) < best[0]):
                    best = (dom.size(A[i][j]), i, j)
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        while True:
            # bring the smallest entry of row t / column t to the pivot
            cand = [(dom.size(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(dom.size(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            _, i0, j0 = min(cand)
            row_swap(t, i0)
            col_swap(t, j0)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q, r = dom.divmod(A[i][t], piv)
                    row_add(i, t, -q)
                    clean = clean and not r
            for j in range(t + 1, n):
                if A[t][j]:
                    q, r = dom.divmod(A[t][j], piv)
                    col_add(j, t, -q)
                    clean = clean and not r
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if dom.divmod(A[i][j], piv)[1]),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, dom.one)
        u = dom.normal_unit(A[t][t])
        if u != dom.one:
            row_scale(t, dom.inv_unit(u))
    return A, P, Q, Pinv, Qinv


def smith_normal_form(M: Sequence[Sequence], domain: str = "Z"):
    """(D, left, right) with M = left * D * right, left/right invertible."""
    D, _, _, Pinv, Qinv = smith_normal_form_full(M, domain)
    return D, Pinv, Qinv


def diagonal(D) -> list:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def matmul(A, B):
    if not A:
        return []
    return [[sum((a * b for a, b in zip(row, col)), start=type(row[0])(0) if row else 0)
             for col in zip(*B)] for row in A]


def lattice_quotient(rows: Sequence[Sequence[int]], rank: int) -> tuple[AbelianGroup, int]:
    """Z^rank / rowspan(rows) as (torsion subgroup, free rank)."""
    if not rows:
        return AbelianGroup(), rank
    D = smith_normal_form(rows, "Z")[0]
    diag = [abs(d) for d in diagonal(D)]
    nonzero = [d for d in diag if d]
    return normalize(nonzero), rank - len(nonzero)
