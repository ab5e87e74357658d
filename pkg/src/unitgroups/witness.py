"""Witness rings for the sufficient rules, each paired with how to check it."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

from sympy import factorint

from .abelian import AbelianGroup, cyclic, direct_product, format_group, normalize, parse_group
from .gaussian import GaussianInt, canonical_associate, split_prime
from .oracle import UnitGroupReport, unit_group
from .polyring import (
    RingPresentation,
    Z,
    Zi,
    an_ring,
    direct_product_presentation,
    finite_field,
    nilpotent_extension,
    zmod_presentation,
)
from .ring import DEFAULT_BOUND

VERIFICATIONS = ("FiniteBruteForce", "Char0Lift", "AnLinearAlgebra")


class WitnessError(ValueError):
    """The requested group does not meet the hypotheses of the construction."""


@dataclass(frozen=True)
class WitnessCertificate:
    presentation: RingPresentation
    claimed_group: AbelianGroup
    verification: str
    citation: str

    def __post_init__(self):
        if self.verification not in VERIFICATIONS:
            raise WitnessError(f"unknown verification method {self.verification!r}")
        if self.verification != _method_for(self.presentation):
            raise WitnessError(f"{self.verification} does not apply to this presentation")

    def to_json(self) -> dict:
        return {
            "presentation": self.presentation.to_json(),
            "claimed_group": format_group(self.claimed_group),
            "verification": self.verification,
            "citation": self.citation,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WitnessCertificate":
        P = RingPresentation.from_json(data["presentation"])
        return cls(
            presentation=P,
            claimed_group=parse_group(data["claimed_group"]),
            verification=data.get("verification") or _method_for(P),
            citation=data.get("citation", ""),
        )


def _is_finite(P: RingPresentation) -> bool:
    if P.family == "DirectProduct":
        return all(_is_finite(c) for c in P.params["components"])
    return P.base.startswith("Zmod:")


def _has_an(P: RingPresentation) -> bool:
    if P.family == "DirectProduct":
        return any(_has_an(c) for c in P.params["components"])
    return P.family == "AnRing"


def _method_for(P: RingPresentation) -> str:
    if _is_finite(P):
        return "FiniteBruteForce"
    return "AnLinearAlgebra" if _has_an(P) else "Char0Lift"


def certificate(P: RingPresentation, claim: AbelianGroup, citation: str) -> WitnessCertificate:
    return WitnessCertificate(P, claim, _method_for(P), citation)


def verify_certificate(cert: WitnessCertificate, bound: int = DEFAULT_BOUND, an_bound: int = 6) -> tuple[bool, UnitGroupReport]:
    report = unit_group(cert.presentation, bound, an_bound)
    ok = report.structure == cert.claimed_group and report.exact_sequence_ok
    return ok, report


# -- constructions ---------------------------------------------------------

def witness_z2_times_h(H: AbelianGroup) -> WitnessCertificate:
    """Z[x_1..x_n]/(a_j x_j, x_j x_k) with a = invariant factors of H."""
    moduli = H.invariant_factors()
    P = nilpotent_extension("Z", moduli) if moduli else Z()
    return certificate(P, direct_product(cyclic(2), H), "z2-times-h")


def h2_eligible(H: AbelianGroup) -> bool:
    return _h2_two_part(H) is not None and all(
        _even_multiplicities(H.exponents(p)) for p in H.primes if p % 4 == 3
    )


def _even_multiplicities(exps: Sequence[int]) -> bool:
    return all(exps.count(e) % 2 == 0 for e in set(exps))


def _h2_two_part(H: AbelianGroup):
    """(pairs, extra_z4) when the 2-part is P or Z/4 x P with P paired, else None."""
    exps = sorted(H.exponents(2))
    extra = len(exps) % 2 == 1
    if extra:
        if 2 not in exps:
            return None
        exps.remove(2)
    pairs = [(exps[j], exps[j + 1]) for j in range(0, len(exps), 2)]
    if any(a < 2 or b - a > 1 for a, b in pairs):
        return None
    return pairs, extra


def witness_h2(H: AbelianGroup) -> WitnessCertificate:
    """Z[i][x_1..x_n]/(a_j x_j, x_j x_k), with Z[i]/(a_j) assembling H."""
    two = _h2_two_part(H)
    if two is None or not h2_eligible(H):
        raise WitnessError(f"{H} does not satisfy the Gaussian nilpotent-extension conditions")
    pairs, extra = two
    moduli: list[GaussianInt] = []
    for e1, e2 in pairs:
        moduli.append(GaussianInt(1, 1) ** (2 * e1 + (e2 - e1)))
    for p in H.primes:
        if p == 2:
            continue
        exps = H.exponents(p)
        if p % 4 == 1:
            pi = split_prime(p)
            moduli.extend(pi**e for e in exps)
        else:
            moduli.extend(GaussianInt(p**e, 0) for e in exps[::2])
    moduli = [canonical_associate(a) for a in moduli]
    base = nilpotent_extension("Zi", moduli) if moduli else Zi()
    P = direct_product_presentation([base, Zi()]) if extra else base
    return certificate(P, direct_product(cyclic(4), H), "gaussian-nilpotent-extension")


def witness_torsion_free(a: int, b: int, c: int) -> WitnessCertificate:
    """Z^a x Z[i]^b, or Z^(a-1) x Z[i]^b x A_(c-1) when c >= 1."""
    if min(a, b, c) < 0 or a + b < 1 or (c >= 1 and a < 1):
        raise WitnessError(f"(a, b, c) = ({a}, {b}, {c}) violates a+b >= 1 or a >= 1 when c >= 1")
    comps = [Z()] * (a - (1 if c else 0)) + [Zi()] * b
    if c:
        comps.append(an_ring(c - 1))
    claim = normalize([2] * a + [4] * b + [3] * c)
    return certificate(direct_product_presentation(comps), claim, "torsion-free-product")


def witness_cyclic_form(m: int) -> WitnessCertificate:
    """A ring with cyclic unit group of order m for a single form q-1, (p-1)p^k, 2d or 4d."""
    if is_prime_power(m + 1):
        p, lam = _prime_power(m + 1)
        return certificate(finite_field(p, lam), cyclic(m), "finite-field")
    for p, k in factorint(m).items():
        if p > 2 and m // p**k == p - 1:
            return certificate(zmod_presentation(p ** (k + 1)), cyclic(m), "prime-power-residues")
    if m % 4 == 2:
        return witness_z2_times_h(cyclic(m // 2))
    if m % 8 == 4 and all(p % 4 == 1 for p in factorint(m // 4)):
        return witness_h2(cyclic(m // 4))
    raise WitnessError(f"{m} is not of a single cyclic form")


def witness_finite_product(orders: Sequence[int]) -> WitnessCertificate:
    """Product of finite fields and Z/p^(k+1) realizing prod Z/m for these m."""
    comps = [witness_cyclic_form(m).presentation for m in orders]
    for m, c in zip(orders, comps):
        if not _is_finite(c):
            raise WitnessError(f"{m} has no finite witness")
    if not comps:
        comps = [zmod_presentation(2)]
    return certificate(direct_product_presentation(comps), normalize(orders), "finite-product")


def combine(certs: Sequence[WitnessCertificate], citation: str) -> WitnessCertificate:
    comps = [c.presentation for c in certs]
    P = direct_product_presentation(comps)
    return certificate(P, direct_product(*(c.claimed_group for c in certs)), citation)


def is_prime_power(q: int) -> bool:
    return q >= 2 and len(factorint(q)) == 1


def _prime_power(q: int) -> tuple[int, int]:
    ((p, lam),) = factorint(q).items()
    return p, lam


# -- registry --------------------------------------------------------------

@lru_cache(maxsize=1)
def _registry() -> tuple[WitnessCertificate, ...]:
    text = resources.files("unitgroups").joinpath("data/registry.json").read_text(encoding="utf-8")
    return tuple(WitnessCertificate.from_json(e) for e in json.loads(text)["certificates"])


def registry_entries() -> tuple[WitnessCertificate, ...]:
    return _registry()


def registry_lookup(G: AbelianGroup) -> WitnessCertificate | None:
    for cert in _registry():
        if cert.claimed_group == G:
            return cert
    return None


def nonsplit_certificate() -> WitnessCertificate:
    return next(c for c in _registry() if c.citation == "registry:nonsplit")

