"""Integer polynomials and the ring presentations used as witnesses.

A :class:`RingPresentation` is the JSON-serializable description of a ring;
:func:`build_module_ring` turns it into a :class:`~unitgroups.ring.ModuleRing`
by a hand-written elimination per family. There is no general Groebner
machinery: each family reduces to a module presentation directly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from math import gcd
from typing import Any, Sequence

import numpy as np
import sympy
from sympy import Poly, Symbol, isprime
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from .gaussian import GaussianInt, format_gaussian, parse_gaussian
from .ring import ModuleRing, direct_sum

BASES = ("Z", "Zi")
FAMILIES = ("DirectProduct", "NilpotentExtension", "AnRing", "EliminatedQuotient")


class PresentationError(ValueError):
    """A presentation is malformed or outside the supported families."""


@dataclass(frozen=True)
class IntPolynomial:
    coefficients: tuple[int, ...] = ()  # lowest degree first, no trailing zeros

    def __post_init__(self):
        c = list(self.coefficients)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return IntPolynomial(tuple(out))

    def to_string(self, var: str = "x") -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for d in range(self.degree, -1, -1):
            c = self.coefficients[d]
            if not c:
                continue
            mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            terms.append(("-" if c < 0 else "+", body))
        s = " ".join(f"{sign} {body}" for sign, body in terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __str__(self) -> str:
        return self.to_string()


def cyclotomic(p: int, k: int) -> IntPolynomial:
    """Phi_{p^k}(x) = sum_{j<p} x^(j p^(k-1))."""
    if not isprime(p) or k < 1:
        raise ValueError("cyclotomic(p, k) needs p prime and k >= 1")
    step = p ** (k - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for j in range(p):
        coeffs[j * step] = 1
    return IntPolynomial(tuple(coeffs))


def content_primitive(f: IntPolynomial) -> tuple[int, IntPolynomial]:
    if not f.coefficients:
        raise ValueError("the zero polynomial has no primitive part")
    c = reduce(gcd, f.coefficients, 0)
    return c, IntPolynomial(tuple(x // c for x in f.coefficients))


def irreducible_polynomial(p: int, degree: int) -> IntPolynomial:
    """First monic irreducible polynomial of the given degree over F_p (lex order)."""
    x = Symbol("x")
    for tail in product(range(p), repeat=degree):
        coeffs = list(reversed(tail)) + [1]
        if coeffs[0] == 0 and degree > 1:
            continue
        poly = Poly(list(reversed(coeffs)), x, modulus=p)
        if poly.is_irreducible:
            return IntPolynomial(tuple(coeffs))
    raise ValueError(f"no irreducible polynomial of degree {degree} over F_{p}")


# -- presentations ---------------------------------------------------------

@dataclass(frozen=True)
class RingPresentation:
    base: str
    family: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        _check_base(self.base)
        if self.family not in FAMILIES:
            raise PresentationError(f"unknown family {self.family!r}")
        p = dict(self.params)
        object.__setattr__(self, "params", p)
        if self.family == "NilpotentExtension":
            p["moduli"] = [GaussianInt.coerce(a) if self.base == "Zi" else int(a) for a in p.get("moduli", [])]
            if not all(p["moduli"]):
                raise PresentationError("nilpotent-extension moduli must be non-zero")
        elif self.family == "AnRing":
            if int(p.get("n", -1)) < 0:
                raise PresentationError("A_n needs n >= 0")
        elif self.family == "EliminatedQuotient":
            if not 1 <= len(p.get("generators", [])) <= 2:
                raise PresentationError("eliminated quotients take one or two generators")
        elif self.family == "DirectProduct":
            comps = p.get("components", [])
            if not comps or not all(isinstance(c, RingPresentation) for c in comps):
                raise PresentationError("direct product needs component presentations")

    def to_json(self) -> dict:
        params = dict(self.params)
        if self.family == "DirectProduct":
            params["components"] = [c.to_json() for c in params["components"]]
        if self.family == "NilpotentExtension":
            params["moduli"] = [_scalar_to_json(self.base, a) for a in params.get("moduli", [])]
        return {"base": self.base, "family": self.family, "params": params}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "RingPresentation":
        try:
            base, family, params = data["base"], data["family"], dict(data.get("params", {}))
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"bad presentation JSON: {exc}") from None
        if family == "DirectProduct":
            params["components"] = [cls.from_json(c) for c in params.get("components", [])]
        if family == "NilpotentExtension":
            params["moduli"] = [_scalar_from_json(base, a) for a in params.get("moduli", [])]
        return cls(base, family, params)

    def describe(self) -> str:
        p = self.params
        base = {"Z": "Z", "Zi": "Z[i]"}.get(self.base, self.base.replace("Zmod:", "Z/") + "Z")
        if self.family == "NilpotentExtension":
            mods = p.get("moduli", [])
            if not mods:
                return base
            return f"{base}[x_1..x_{len(mods)}]/(a_j x_j, x_j x_k), a = [{', '.join(map(str, mods))}]"
        if self.family == "AnRing":
            return f"A_{p['n']}"
        if self.family == "EliminatedQuotient":
            return f"{base}[{','.join(p['generators'])}]/({', '.join(p['relations'])})"
        return " x ".join(c.describe() for c in p["components"])


def _check_base(base: str) -> None:
    if base in BASES:
        return
    if base.startswith("Zmod:"):
        try:
            n = int(base[5:])
        except ValueError:
            raise PresentationError(f"bad base {base!r}") from None
        if n >= 2:
            return
    raise PresentationError(f"unsupported base {base!r}")


def _modulus(base: str) -> int:
    return int(base[5:]) if base.startswith("Zmod:") else 0


def _base_scalar(base: str, a):
    if base == "Zi":
        return GaussianInt.coerce(a)
    return int(a) % _modulus(base) if base.startswith("Zmod:") else int(a)


def _scalar_to_json(base: str, a):
    return format_gaussian(GaussianInt.coerce(a)) if base == "Zi" else int(a)


def _scalar_from_json(base: str, a):
    if base == "Zi":
        return parse_gaussian(a) if isinstance(a, str) else GaussianInt.coerce(int(a))
    return int(a)


# convenience constructors

def Z() -> RingPresentation:
    return RingPresentation("Z", "NilpotentExtension", {"moduli": []})


def Zi() -> RingPresentation:
    return RingPresentation("Zi", "NilpotentExtension", {"moduli": []})


def zmod_presentation(n: int) -> RingPresentation:
    return RingPresentation(f"Zmod:{n}", "NilpotentExtension", {"moduli": []})


def nilpotent_extension(base: str, moduli: Sequence) -> RingPresentation:
    return RingPresentation(base, "NilpotentExtension", {"moduli": list(moduli)})


def an_ring(n: int) -> RingPresentation:
    return RingPresentation("Z", "AnRing", {"n": int(n)})


def finite_field(p: int, degree: int = 1) -> RingPresentation:
    if degree == 1:
        return zmod_presentation(p)
    f = irreducible_polynomial(p, degree)
    return RingPresentation(
        f"Zmod:{p}",
        "EliminatedQuotient",
        {"generators": ["t"], "relations": [f.to_string("t")]},
    )


def direct_product_presentation(components: Sequence[RingPresentation]) -> RingPresentation:
    comps = list(components)
    if len(comps) == 1:
        return comps[0]
    bases = {c.base for c in comps}
    return RingPresentation(bases.pop() if len(bases) == 1 else "Z", "DirectProduct", {"components": comps})


def nonsplit_example() -> RingPresentation:
    """Z[i][x,y]/(x^2-y-1, (1+i)y, y^3) with y eliminated as x^2 - 1."""
    return RingPresentation(
        "Zi",
        "EliminatedQuotient",
        {
            "generators": ["x", "y"],
            "substitutions": {"y": "x^2 - 1"},
            "relations": ["x^2 - y - 1", "(1+i)*y", "y^3"],
            "nilradical": ["y"],
            "quotient_units": ["1", "-1", "i", "-i", "x", "-x", "i*x", "-i*x"],
        },
    )


# -- building module rings -------------------------------------------------

class _BaseData:
    """A ring over its base: structure constants and relations with base scalars."""

    def __init__(self, base, rank, mult, relations, one, nil=(), lifts=(), labels=()):
        self.base, self.rank = base, rank
        self.mult = mult  # dict (a, b) -> {l: coeff}
        self.relations = relations  # list of coefficient lists
        self.one = one
        self.nil = list(nil)
        self.lifts = list(lifts)
        self.labels = list(labels) or [f"e{j}" for j in range(rank)]


def _restrict(d: _BaseData) -> ModuleRing:
    """Restriction of scalars to Z."""
    if d.base == "Zi":
        k = 2 * d.rank
        mult = np.zeros((k, k, k), dtype=np.int64)
        powers = [GaussianInt(1, 0), GaussianInt(0, 1)]
        for (a, b), terms in d.mult.items():
            for s in (0, 1):
                for t in (0, 1):
                    for l, c in terms.items():
                        w = GaussianInt.coerce(c) * powers[s] * powers[t]
                        mult[2 * a + s, 2 * b + t, 2 * l] += w.re
                        mult[2 * a + s, 2 * b + t, 2 * l + 1] += w.im

        def vec(coeffs, twist=False):
            v = np.zeros(k, dtype=np.int64)
            for l, c in enumerate(coeffs):
                w = GaussianInt.coerce(c) * (powers[1] if twist else powers[0])
                v[2 * l], v[2 * l + 1] = w.re, w.im
            return v

        rels = [vec(r, tw) for r in d.relations for tw in (False, True)]
        nil = [vec(r, tw) for r in d.nil for tw in (False, True)]
        lifts = [vec(r) for r in d.lifts]
        labels = [lab for l in d.labels for lab in (l, f"i*{l}")]
        one = vec(d.one)
    else:
        k = d.rank
        m = _modulus(d.base)
        mult = np.zeros((k, k, k), dtype=np.int64)
        for (a, b), terms in d.mult.items():
            for l, c in terms.items():
                mult[a, b, l] += int(c)
        rels = [np.array([int(c) for c in r], dtype=np.int64) for r in d.relations]
        if m:
            rels += [m * np.eye(k, dtype=np.int64)[j] for j in range(k)]
        nil = [np.array([int(c) for c in r], dtype=np.int64) for r in d.nil]
        lifts = [np.array([int(c) for c in r], dtype=np.int64) for r in d.lifts]
        labels = list(d.labels)
        one = np.array([int(c) for c in d.one], dtype=np.int64)
    ring = ModuleRing(
        base=d.base,
        rank=k,
        mult=mult,
        relations=np.array(rels, dtype=np.int64).reshape(-1, k),
        one=one,
        nil_gens=np.array(nil, dtype=np.int64).reshape(-1, k) if nil else None,
        labels=tuple(labels),
    )
    ring.unit_lifts = np.array(lifts, dtype=np.int64).reshape(-1, k) if lifts else None
    return ring


def _nilpotent_extension(P: RingPresentation) -> ModuleRing:
    base = P.base
    mods = [_base_scalar(base, a) for a in P.params.get("moduli", [])]
    n = len(mods)
    k = n + 1
    zero = GaussianInt(0, 0) if base == "Zi" else 0
    one_s = GaussianInt(1, 0) if base == "Zi" else 1
    mult = {(0, 0): {0: one_s}}
    for j in range(1, k):
        mult[(0, j)] = {j: one_s}
        mult[(j, 0)] = {j: one_s}
    rels = []
    for j, a in enumerate(mods, start=1):
        r = [zero] * k
        r[j] = a
        rels.append(r)
    nil = []
    for j in range(1, k):
        r = [zero] * k
        r[j] = one_s
        nil.append(r)
    if base == "Zi":
        roots = [GaussianInt(1, 0), GaussianInt(-1, 0), GaussianInt(0, 1), GaussianInt(0, -1)]
    elif base == "Z":
        roots = [1, -1]
    else:
        roots = []  # finite base: the oracle enumerates everything
    lifts = [[u] + [zero] * n for u in roots]
    labels = ["1"] + [f"x{j}" for j in range(1, k)]
    one = [one_s] + [zero] * n
    return _restrict(_BaseData(base, k, mult, rels, one, nil, lifts, labels))


def _an_ring(P: RingPresentation) -> ModuleRing:
    n = int(P.params["n"])
    # Z[zeta_3] on basis (1, v): v^2 = -1 - v; A_n is its (n+1)-fold tensor power
    t1 = np.zeros((2, 2, 2), dtype=np.int64)
    t1[0, 0, 0] = 1
    t1[0, 1, 1] = t1[1, 0, 1] = 1
    t1[1, 1, 0] = t1[1, 1, 1] = -1
    T = t1
    for _ in range(n):
        k = T.shape[0]
        T = np.einsum("abc,def->adbecf", T, t1).reshape(2 * k, 2 * k, 2 * k)
    k = 2 ** (n + 1)
    one = np.zeros(k, dtype=np.int64)
    one[0] = 1
    names = ["x"] + [f"y{i}" for i in range(1, n + 1)]
    labels = []
    for idx in range(k):
        bits = [(idx >> (n - j)) & 1 for j in range(n + 1)]
        labels.append("*".join(nm for nm, b in zip(names, bits) if b) or "1")
    ring = ModuleRing(base="Z", rank=k, mult=T, relations=np.zeros((0, k), np.int64), one=one, labels=tuple(labels))
    ring.unit_lifts = None
    return ring


def monomial_index(n: int, exponents: Sequence[int]) -> int:
    """Basis index in A_n of x^e0 y_1^e1 ... y_n^en with every e in {0, 1}."""
    idx = 0
    for e in exponents:
        idx = 2 * idx + int(e)
    return idx


def _parse_poly(text: str, symbols: dict[str, Symbol]):
    local = dict(symbols)
    local["i"] = sympy.I
    try:
        return sympy.expand(parse_expr(str(text).replace("^", "**"), local_dict=local,
                                       transformations=standard_transformations))
    except Exception as exc:  # sympy raises a zoo of types here
        raise PresentationError(f"cannot parse polynomial {text!r}: {exc}") from None


def _coeff(base: str, c):
    c = sympy.nsimplify(c)
    re, im = sympy.re(c), sympy.im(c)
    if not (re.is_integer and im.is_integer):
        raise PresentationError(f"coefficient {c} is not in the base ring")
    if base == "Zi":
        return GaussianInt(int(re), int(im))
    if im != 0:
        raise PresentationError(f"coefficient {c} needs Z[i]")
    m = _modulus(base)
    return int(re) % m if m else int(re)


def _is_base_unit(base: str, c) -> bool:
    if base == "Zi":
        return GaussianInt.coerce(c).is_unit()
    m = _modulus(base)
    return gcd(int(c), m) == 1 if m else abs(int(c)) == 1


def _unit_inverse(base: str, c):
    if base == "Zi":
        return GaussianInt.coerce(c).conjugate()
    m = _modulus(base)
    return pow(int(c), -1, m) if m else int(c)


def _poly_coeffs(base, expr, var) -> list:
    """Coefficients lowest degree first."""
    if expr == 0:
        return []
    poly = Poly(expr, var)
    coeffs = [_coeff(base, c) for c in reversed(poly.all_coeffs())]
    zero = GaussianInt(0, 0) if base == "Zi" else 0
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs or [zero][:0]


def _reduce_monic(coeffs: list, f: list, base: str) -> list:
    """Remainder of coeffs modulo the monic polynomial f (lowest degree first)."""
    m = _modulus(base)
    c = list(coeffs)
    d = len(f) - 1
    for top in range(len(c) - 1, d - 1, -1):
        lead = c[top]
        if not lead:
            continue
        for j in range(d + 1):
            c[top - d + j] = c[top - d + j] - lead * f[j]
    zero = GaussianInt(0, 0) if base == "Zi" else 0
    out = (c + [zero] * d)[:d]
    if m:
        out = [x % m for x in out]
    return out


def _eliminated_quotient(P: RingPresentation) -> ModuleRing:
    base = P.base
    p = P.params
    gens = list(p["generators"])
    syms = {g: Symbol(g) for g in gens}
    subs = {syms[v]: _parse_poly(e, syms) for v, e in p.get("substitutions", {}).items()}
    if any(v not in syms for v in p.get("substitutions", {})):
        raise PresentationError("substitution for an unknown generator")
    remaining = [syms[g] for g in gens if syms[g] not in subs]
    if len(remaining) != 1:
        raise PresentationError("elimination must leave exactly one generator")
    var = remaining[0]
    rels = [_parse_poly(r, syms) for r in p["relations"]]
    for v, e in subs.items():
        if (e.free_symbols - {var}) or not any(
            sympy.expand(r - (v - e)) == 0 or sympy.expand(r + (v - e)) == 0 for r in rels
        ):
            raise PresentationError(f"substitution {v} = {e} is not a relation of the presentation")

    def univariate(expr):
        return _poly_coeffs(base, sympy.expand(expr.subs(subs)), var)

    polys = [c for c in (univariate(r) for r in rels) if c]
    monic = [c for c in polys if _is_base_unit(base, c[-1]) and len(c) >= 2]
    if not monic:
        raise PresentationError("elimination failed: no relation with unit leading coefficient")
    f = min(monic, key=len)
    inv = _unit_inverse(base, f[-1])
    f = [x * inv for x in f]
    if _modulus(base):
        f = [x % _modulus(base) for x in f]
    d = len(f) - 1
    zero = GaussianInt(0, 0) if base == "Zi" else 0
    powers = []
    for e in range(2 * d - 1):
        mono = [zero] * e + [GaussianInt(1, 0) if base == "Zi" else 1]
        powers.append(_reduce_monic(mono, f, base))
    mult = {}
    for a in range(d):
        for b in range(d):
            mult[(a, b)] = {l: c for l, c in enumerate(powers[a + b]) if c}
    relations = []
    for r in polys:
        for j in range(d):
            shifted = [zero] * j + list(r)
            red = _reduce_monic(shifted, f, base)
            if any(red):
                relations.append(red)
    nil = [_reduce_monic(univariate(_parse_poly(s, syms)) or [zero], f, base) for s in p.get("nilradical", [])]
    lifts = [_reduce_monic(univariate(_parse_poly(s, syms)) or [zero], f, base) for s in p.get("quotient_units", [])]
    one = [GaussianInt(1, 0) if base == "Zi" else 1] + [zero] * (d - 1)
    labels = ["1"] + [str(var) if e == 1 else f"{var}^{e}" for e in range(1, d)]
    return _restrict(_BaseData(base, d, mult, relations, one, nil, lifts, labels))


def build_module_ring(P: RingPresentation) -> ModuleRing:
    if P.family == "NilpotentExtension":
        return _nilpotent_extension(P)
    if P.family == "AnRing":
        return _an_ring(P)
    if P.family == "EliminatedQuotient":
        return _eliminated_quotient(P)
    if P.family == "DirectProduct":
        parts = [build_module_ring(c) for c in P.params["components"]]
        ring = direct_sum(parts)
        ring.unit_lifts = _product_lifts(parts)
        return ring
    raise PresentationError(f"unsupported family {P.family!r}")


def _product_lifts(parts: Sequence[ModuleRing]):
    if any(getattr(r, "unit_lifts", None) is None for r in parts):
        return None
    blocks = [r.unit_lifts for r in parts]
    out = []
    for combo in product(*blocks):
        out.append(np.concatenate(combo))
    return np.array(out, dtype=np.int64)
