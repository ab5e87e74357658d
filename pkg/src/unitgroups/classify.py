"""Realizability verdicts for finite abelian groups as unit groups of commutative rings.

Every verdict is three-valued. ``Realizable`` carries a witness certificate
that the oracle can replay; ``NotRealizable`` carries the rules that rule
it out; ``Unknown`` is an honest answer in the characteristic zero,
epsilon = 2 region where only partial results are available.

Rule identifiers used in obstruction traces:

T1  a type-2 factor (torsion inside the nilradical, characteristic 0) has
    unit group Z/2^e x H with e in {1, 2}
T2  for odd p the p-part of a type-2 unit group is 1 + N_p; this is what
    lets T3 speak about the whole Sylow subgroup
T3  with e = 2 and p = 3 (mod 4), that Sylow subgroup has square order and
    is not cyclic when non-trivial
F1  the unit group of a finite ring of odd order has order a product of
    numbers 2^k - 1
F2  (extrapolated, off by default) each odd prime l dividing the unit group
    order of a finite ring needs a cyclic direct factor of order q - 1
    with l | q - 1 or q a power of l
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations, product
from math import prod

from sympy import factorint

from .abelian import TRIVIAL, AbelianGroup, cyclic, min_two_exponent
from .witness import (
    WitnessCertificate,
    combine,
    h2_eligible,
    is_prime_power,
    registry_lookup,
    witness_cyclic_form,
    witness_finite_product,
    witness_h2,
    witness_torsion_free,
    witness_z2_times_h,
)

REALIZABLE = "Realizable"
NOT_REALIZABLE = "NotRealizable"
UNKNOWN = "Unknown"

TYPE2_RULES = frozenset({"T1", "T2", "T3"})
FINITE_RULES = frozenset({"F1", "F2"})
EXTRAPOLATED = frozenset({"F2"})
DEFAULT_SEARCH_BOUND = 1 << 16

INCOMPLETE = "no sufficient construction or obstruction applies; the epsilon = 2 case has no complete classification"
FILTRATION = "a p = 3 (mod 4) Sylow subgroup meets the square condition, which is conjectured but not known to suffice"


@dataclass(frozen=True)
class Verdict:
    status: str
    certificate: WitnessCertificate | None = None
    obstructions: tuple[str, ...] = ()
    notes: str = ""

    def __post_init__(self):
        if self.status == REALIZABLE and self.certificate is None:
            raise ValueError("a Realizable verdict needs a witness")
        if self.status == NOT_REALIZABLE and not self.obstructions:
            raise ValueError("a NotRealizable verdict needs an obstruction")
        if self.status == UNKNOWN and not self.notes:
            raise ValueError("an Unknown verdict needs notes")

    @property
    def witness(self):
        return self.certificate.presentation if self.certificate else None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": self.certificate.to_json() if self.certificate else None,
            "obstructions": list(self.obstructions),
            "notes": self.notes,
        }


@dataclass(frozen=True)
class RuleSet:
    type2_rules: frozenset = TYPE2_RULES
    finite_rules: frozenset = frozenset({"F1"})
    search_bound: int = DEFAULT_SEARCH_BOUND

    def __post_init__(self):
        unknown = (set(self.type2_rules) - TYPE2_RULES) | (set(self.finite_rules) - FINITE_RULES)
        if unknown:
            raise ValueError(f"unknown rule(s): {', '.join(sorted(unknown))}")

    def enable(self, *rules: str) -> "RuleSet":
        t2 = set(self.type2_rules) | {r for r in rules if r in TYPE2_RULES}
        fin = set(self.finite_rules) | {r for r in rules if r in FINITE_RULES}
        bad = set(rules) - TYPE2_RULES - FINITE_RULES
        if bad:
            raise ValueError(f"unknown rule(s): {', '.join(sorted(bad))}")
        return replace(self, type2_rules=frozenset(t2), finite_rules=frozenset(fin))


DEFAULT_RULES = RuleSet()


def _realizable(cert: WitnessCertificate, notes: str = "") -> Verdict:
    return Verdict(REALIZABLE, cert, (), notes)


def _not_realizable(*obs: str) -> Verdict:
    return Verdict(NOT_REALIZABLE, None, tuple(obs))


# -- cyclic forms ----------------------------------------------------------

def form_field(m: int) -> bool:
    """m = q - 1 for a prime power q."""
    return is_prime_power(m + 1)


def form_prime_power_residues(m: int) -> bool:
    """m = (p - 1) p^k with p an odd prime and k >= 1."""
    return any(p > 2 and m // p**k == p - 1 for p, k in factorint(m).items())


def form_twice_odd(m: int) -> bool:
    return m % 4 == 2


def form_gaussian(m: int) -> bool:
    """m = 4d with d odd and every prime factor of d congruent to 1 mod 4."""
    return m % 8 == 4 and all(p % 4 == 1 for p in factorint(m // 4))


def cyclic_form(m: int) -> bool:
    return form_field(m) or form_prime_power_residues(m) or form_twice_odd(m) or form_gaussian(m)


def finite_form(m: int) -> bool:
    return form_field(m) or form_prime_power_residues(m)


def _coprime_blocks(components: tuple[int, ...]) -> list[int] | None:
    """Group prime-power components into blocks whose products are cyclic forms."""

    @lru_cache(maxsize=None)
    def search(rest: tuple[int, ...]):
        if not rest:
            return ()
        head, tail = rest[0], rest[1:]
        for r in range(len(tail) + 1):
            for extra in combinations(range(len(tail)), r):
                m = head * prod(tail[j] for j in extra)
                if not cyclic_form(m):
                    continue
                sub = search(tuple(t for j, t in enumerate(tail) if j not in extra))
                if sub is not None:
                    return (m,) + sub
        return None

    found = search(components)
    return None if found is None else list(found)


def classify_cyclic(n: int) -> Verdict:
    if n < 1:
        raise ValueError("n must be positive")
    comps = tuple(sorted(p**e for p, e in factorint(n).items()))
    blocks = _coprime_blocks(comps)
    if blocks is None:
        return _not_realizable("cyclic: no coprime factorization into q-1, (p-1)p^k, 2d, 4d forms")
    if not blocks:
        return _realizable(witness_finite_product([]), "empty product")
    cert = combine([witness_cyclic_form(m) for m in blocks], "cyclic-forms")
    return _realizable(cert, " * ".join(map(str, blocks)))


# -- cardinalities ---------------------------------------------------------

@lru_cache(maxsize=None)
def mersenne_factorization(n: int) -> tuple[int, ...] | None:
    """n as a product of numbers 2^k - 1 (k >= 2), largest factors first."""
    if n == 1:
        return ()
    k = n.bit_length()
    while k >= 2:
        m = (1 << k) - 1
        if m <= n and n % m == 0:
            sub = mersenne_factorization(n // m)
            if sub is not None:
                return (m,) + sub
        k -= 1
    return None


def ditor_cardinality(n: int) -> Verdict:
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        return _realizable(witness_z2_times_h(cyclic(n // 2)), "even order")
    fac = mersenne_factorization(n)
    if fac is None:
        return _not_realizable("cardinality: odd and not a product of numbers 2^k - 1")
    return _realizable(witness_finite_product(list(fac)), " * ".join(map(str, fac)) or "empty product")


# -- group splittings ------------------------------------------------------

def _cyclic_direct_factors(G: AbelianGroup):
    """Orders of the cyclic direct factors of G (including 1)."""
    choices = [[1] + [p**e for e in sorted(set(exps))] for p, exps in G.parts]
    for pick in product(*choices):
        yield prod(pick)


def decompose(G: AbelianGroup, allowed) -> list[int] | None:
    """Write G as a product of cyclic groups whose orders satisfy ``allowed``."""
    return _decompose(G, allowed)


@lru_cache(maxsize=65536)
def _decompose(G: AbelianGroup, allowed) -> list[int] | None:
    if G.is_trivial():
        return []
    (p, exps), others = G.parts[0], G.parts[1:]
    head = p ** exps[0]
    choices = [[1] + [q**e for e in sorted(set(ex))] for q, ex in others]
    for pick in product(*choices):
        m = head * prod(pick)
        if not allowed(m):
            continue
        sub = _decompose(G.remove(cyclic(m)), allowed)
        if sub is not None:
            return [m] + sub
    return None


def splittings(G: AbelianGroup):
    """All (G1, G2) with G = G1 x G2, up to the order of equal summands."""
    slots = []
    for p, exps in G.parts:
        for e in sorted(set(exps), reverse=True):
            slots.append((p, e, exps.count(e)))
    for counts in product(*(range(c + 1) for _, _, c in slots)):
        g1: dict[int, list[int]] = {}
        g2: dict[int, list[int]] = {}
        for (p, e, c), j in zip(slots, counts):
            g1.setdefault(p, []).extend([e] * j)
            g2.setdefault(p, []).extend([e] * (c - j))
        yield AbelianGroup.from_parts(g1), AbelianGroup.from_parts(g2)


def type2_obstructions(G2: AbelianGroup, rules: RuleSet) -> list[str]:
    out = []
    eps = min_two_exponent(G2)
    if "T1" in rules.type2_rules and eps not in (1, 2):
        out.append(f"T1: epsilon of the type-2 factor is {eps}, not 1 or 2")
    if {"T2", "T3"} <= rules.type2_rules and eps == 2:
        for p in G2.primes:
            if p % 4 != 3:
                continue
            exps = G2.exponents(p)
            if sum(exps) % 2:
                out.append(f"T3: the {p}-part of the type-2 factor has order {p}^{sum(exps)}, not a square")
            elif len(exps) == 1:
                out.append(f"T3: the {p}-part of the type-2 factor is cyclic")
    return out


def finite_obstructions(G1: AbelianGroup, rules: RuleSet) -> list[str]:
    out = []
    n = G1.order
    if "F1" in rules.finite_rules and n % 2 and mersenne_factorization(n) is None:
        out.append(f"F1: odd order {n} of the finite factor is not a product of numbers 2^k - 1")
    if "F2" in rules.finite_rules:
        qs = [m + 1 for m in _cyclic_direct_factors(G1) if form_field(m)]
        for l in (p for p in G1.primes if p > 2):
            if not any((q - 1) % l == 0 or factorint(q).get(l) for q in qs):
                out.append(f"F2: no cyclic direct factor q-1 of the finite factor accounts for the prime {l}")
    return out


def type2_witness(G2: AbelianGroup) -> WitnessCertificate | None:
    eps = min_two_exponent(G2)
    if eps == 1:
        return witness_z2_times_h(G2.remove(cyclic(2)))
    if eps == 2 and h2_eligible(G2.remove(cyclic(4))):
        return witness_h2(G2.remove(cyclic(4)))
    return registry_lookup(G2)


def _square_sylow_note(G2: AbelianGroup) -> bool:
    return min_two_exponent(G2) == 2 and any(
        p % 4 == 3 and sum(G2.exponents(p)) % 2 == 0 and len(G2.exponents(p)) > 1 for p in G2.primes
    )


def _split_search(G: AbelianGroup, rules: RuleSet, finite_part_only_ok: bool) -> Verdict:
    if G.order > rules.search_bound:
        return Verdict(UNKNOWN, notes=f"bound: group order {G.order} exceeds the search bound {rules.search_bound}")
    trace, open_splits = [], []
    for G1, G2 in splittings(G):
        obs = []
        if G2.is_trivial():
            if not finite_part_only_ok:
                obs.append("T1: characteristic 0 needs a non-trivial type-2 factor")
        else:
            obs += type2_obstructions(G2, rules)
        obs += finite_obstructions(G1, rules)
        label = f"[{G1} | {G2}]"
        if obs:
            trace.append(f"{label} " + "; ".join(obs))
            continue
        fin = decompose(G1, finite_form)
        t2 = type2_witness(G2) if not G2.is_trivial() else None
        if fin is not None and (t2 is not None or G2.is_trivial()):
            parts = [witness_finite_product(fin)] if fin else []
            if t2 is not None:
                parts.append(t2)
            return _realizable(combine(parts, "finite-times-type2"), label)
        open_splits.append((label, G2))
    if not open_splits:
        return _not_realizable(*trace)
    notes = f"{INCOMPLETE}; open splittings: " + ", ".join(lbl for lbl, _ in open_splits[:8])
    if len(open_splits) > 8:
        notes += f" and {len(open_splits) - 8} more"
    if any(_square_sylow_note(g2) for _, g2 in open_splits):
        notes += f"; {FILTRATION}"
    return Verdict(UNKNOWN, None, tuple(trace), notes)


# -- ring classes ----------------------------------------------------------

def classify_domain(G: AbelianGroup) -> Verdict:
    if not G.is_cyclic():
        return _not_realizable("domain: finite subgroups of the units of a domain are cyclic")
    n = G.order
    if n == 2:
        return _realizable(witness_z2_times_h(TRIVIAL), "Z")
    if n == 4:
        return _realizable(witness_h2(TRIVIAL), "Z[i]")
    if n == 6:
        return _realizable(witness_torsion_free(1, 0, 1), "Z[zeta_6]")
    if form_field(n):
        return _realizable(witness_cyclic_form(n), f"F_{n + 1}")
    return _not_realizable("domain: order is not q-1 for a prime power q and not 2, 4 or 6")


def classify_torsion_free(G: AbelianGroup) -> Verdict:
    obs = []
    if any(p > 3 for p in G.primes):
        obs.append("torsion-free: no elements of order p for primes p >= 5")
    if any(e > 2 for e in G.exponents(2)):
        obs.append("torsion-free: no elements of order 8")
    if any(e > 1 for e in G.exponents(3)):
        obs.append("torsion-free: no elements of order 9")
    if obs:
        return _not_realizable(*obs)
    a = G.exponents(2).count(1)
    b = G.exponents(2).count(2)
    c = len(G.exponents(3))
    if a + b < 1:
        obs.append("torsion-free: needs a + b >= 1 (-1 is a unit of order 2)")
    if c >= 1 and a < 1:
        obs.append("torsion-free: needs a >= 1 when c >= 1")
    if obs:
        return _not_realizable(*obs)
    return _realizable(witness_torsion_free(a, b, c), f"a={a}, b={b}, c={c}")


def classify_reduced(G: AbelianGroup, bound: int = DEFAULT_SEARCH_BOUND) -> Verdict:
    if G.order > bound:
        return Verdict(UNKNOWN, notes=f"bound: group order {G.order} exceeds the search bound {bound}")
    twos, fours, threes = G.exponents(2).count(1), G.exponents(2).count(2), G.exponents(3).count(1)
    # largest torsion-free block first, the pure finite-field product last
    blocks = sorted(
        (
            (a, b, c)
            for a in range(twos + 1)
            for b in range(fours + 1)
            for c in range(threes + 1)
            if a + b >= 1 and (c == 0 or a >= 1)
        ),
        key=lambda t: (-sum(t), t),
    ) + [(0, 0, 0)]
    for a, b, c in blocks:
        block = AbelianGroup.from_parts({2: [1] * a + [2] * b, 3: [1] * c})
        fields = decompose(G.remove(block), form_field)
        if fields is None:
            continue
        parts = [witness_finite_product(fields)] if fields or not (a or b) else []
        if a or b:
            parts.append(witness_torsion_free(a, b, c))
        return _realizable(combine(parts, "reduced-product"), f"fields {fields}, block (a, b, c) = ({a}, {b}, {c})")
    return _not_realizable("reduced: not a product of finite-field unit groups and one torsion-free block")


def classify_char0(G: AbelianGroup, rules: RuleSet = DEFAULT_RULES) -> Verdict:
    eps = min_two_exponent(G)
    if eps == 0:
        return _not_realizable("char0: -1 has order 2, so the order must be even")
    if eps >= 3:
        return _not_realizable(f"char0: epsilon is {eps}, but a unit of order 8 squaring to -1 cannot exist")
    if eps == 1:
        return _realizable(witness_z2_times_h(G.remove(cyclic(2))), "Z/2 direct factor")
    H = G.remove(cyclic(4))
    if h2_eligible(H):
        return _realizable(witness_h2(H), "Gaussian nilpotent extension")
    cert = registry_lookup(G)
    if cert is not None:
        return _realizable(cert, "registered certificate")
    return _split_search(G, rules, finite_part_only_ok=False)


def classify_general(G: AbelianGroup, rules: RuleSet = DEFAULT_RULES) -> Verdict:
    if G.is_cyclic():
        return classify_cyclic(G.order)
    v = classify_reduced(G, rules.search_bound)
    if v.status == REALIZABLE:
        return v
    v = classify_char0(G, rules)
    if v.status == REALIZABLE:
        return v
    fin = decompose(G, finite_form) if G.order <= rules.search_bound else None
    if fin is not None:
        return _realizable(witness_finite_product(fin), "finite ring")
    return _split_search(G, rules, finite_part_only_ok=True)


RING_CLASSES = {
    "domain": lambda G, rules: classify_domain(G),
    "torsion-free": lambda G, rules: classify_torsion_free(G),
    "reduced": lambda G, rules: classify_reduced(G, rules.search_bound),
    "char0": classify_char0,
    "any": classify_general,
}

