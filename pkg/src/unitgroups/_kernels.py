"""Hot loops: unit search in finite rings and multiplicative closure of factor sets.

Each kernel has a numba implementation and a pure-numpy one. The backend is
chosen once at import from ``UNITGROUPS_BACKEND`` (``numba`` or ``numpy``);
``numba`` is the default and silently falls back to numpy when numba is not
importable. Both implementations are always importable by name so tests and
the benchmark can compare them.

Finite rings are passed in normalized form: elements are coordinate vectors
over Z/moduli[0] x ... x Z/moduli[k-1], encoded as a mixed-radix index
(coordinate 0 least significant), and ``mult[a, b, :]`` holds the product of
basis elements a and b.

``unit_orders`` returns, per element index, its multiplicative order if it is
a unit, ``NILPOTENT`` (-1) if some power is zero, else ``OTHER`` (-2).
"""
from __future__ import annotations

import os

import numpy as np

NILPOTENT = -1
OTHER = -2

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_requested = os.environ.get("UNITGROUPS_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"UNITGROUPS_BACKEND must be 'numba' or 'numpy', not {_requested!r}")
BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"


def _radix(moduli: np.ndarray) -> np.ndarray:
    r = np.ones(len(moduli), dtype=np.int64)
    for i in range(1, len(moduli)):
        r[i] = r[i - 1] * moduli[i - 1]
    return r


def decode_all(moduli: np.ndarray) -> np.ndarray:
    """Coordinates of every element, shape (size, k)."""
    moduli = np.asarray(moduli, dtype=np.int64)
    size = int(np.prod(moduli)) if len(moduli) else 1
    idx = np.arange(size, dtype=np.int64)
    radix = _radix(moduli)
    return (idx[:, None] // radix[None, :]) % moduli[None, :] if len(moduli) else np.zeros((1, 0), np.int64)


def encode(coords: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    return np.asarray(coords, dtype=np.int64) @ _radix(np.asarray(moduli, dtype=np.int64))


# -- numpy implementations -------------------------------------------------

def _mul_rows(X: np.ndarray, Y: np.ndarray, mult: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """Row-wise products X[n] * Y[n]."""
    return np.einsum("ni,nj,ijl->nl", X, Y, mult, optimize=True) % moduli


def _prime_divisors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _pow_rows(X: np.ndarray, e: np.ndarray, one_vec: np.ndarray, mult: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """Row-wise X[n] ** e[n] by square-and-multiply."""
    R = np.broadcast_to(one_vec, X.shape).copy()
    B = X.copy()
    e = e.copy()
    while (e > 0).any():
        odd = (e & 1).astype(bool)
        if odd.any():
            R[odd] = _mul_rows(R[odd], B[odd], mult, moduli)
        e >>= 1
        if (e > 0).any():
            B = _mul_rows(B, B, mult, moduli)
    return R


def unit_orders_numpy(mult: np.ndarray, moduli: np.ndarray, one: int) -> np.ndarray:
    moduli = np.asarray(moduli, dtype=np.int64)
    mult = np.asarray(mult, dtype=np.int64)
    elems = decode_all(moduli)
    size, k = elems.shape
    one_vec = elems[one]
    out = np.full(size, OTHER, dtype=np.int64)

    # unit iff some v has u*v = 1; products computed a chunk of u's at a time
    left = np.einsum("ui,ijl->ujl", elems, mult)  # multiplication-by-u matrices
    chunk = max(1, (1 << 22) // max(1, size * max(k, 1)))
    is_unit = np.zeros(size, dtype=bool)
    for s in range(0, size, chunk):
        prods = np.matmul(elems, left[s : s + chunk]) % moduli
        is_unit[s : s + chunk] = (prods == one_vec).all(axis=2).any(axis=1)

    # nilpotent iff u^(2^t) = 0 with 2^t >= size
    P = elems.copy()
    t = 1
    while t < size:
        P = _mul_rows(P, P, mult, moduli)
        t *= 2
    out[(P == 0).all(axis=1)] = NILPOTENT

    # order of u divides |U|; strip prime factors while u^(order/p) = 1
    units = np.flatnonzero(is_unit)
    U = elems[units]
    n_units = len(units)
    order = np.full(n_units, n_units, dtype=np.int64)
    for p in _prime_divisors(n_units):
        while True:
            cand = (order % p == 0)
            if not cand.any():
                break
            idx = np.flatnonzero(cand)
            ok = (_pow_rows(U[idx], order[idx] // p, one_vec, mult, moduli) == one_vec).all(axis=1)
            if not ok.any():
                break
            order[idx[ok]] //= p
    out[units] = order
    return out


def multiplicative_closure_numpy(factors: np.ndarray, limit: int) -> np.ndarray:
    reach = np.zeros(limit + 1, dtype=bool)
    if limit >= 1:
        reach[1] = True
    for f in np.unique(np.asarray(factors, dtype=np.int64)):
        if f < 2 or f > limit:
            continue
        top = limit // f
        while True:
            src = np.flatnonzero(reach[1 : top + 1]) + 1
            dst = src * f
            fresh = ~reach[dst]
            if not fresh.any():
                break
            reach[dst[fresh]] = True
    return reach


# -- numba implementations -------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _gcd(a, b):
        while b:
            a, b = b, a % b
        return a

    @njit(cache=True)
    def _unit_orders_jit(mult, moduli, one):
        k = moduli.shape[0]
        size = 1
        for m in moduli:
            size *= m
        radix = np.ones(k, dtype=np.int64)
        for i in range(1, k):
            radix[i] = radix[i - 1] * moduli[i - 1]
        coords = np.empty((size, k), dtype=np.int64)
        for u in range(size):
            for i in range(k):
                coords[u, i] = (u // radix[i]) % moduli[i]

        out = np.zeros(size, dtype=np.int64)
        seen = np.full(size, -1, dtype=np.int64)
        powers = np.empty(size + 1, dtype=np.int64)
        mu = np.empty((k, k), dtype=np.int64)
        acc = np.empty(k, dtype=np.int64)
        for u in range(size):
            if out[u] != 0:
                continue
            # mu[a, l] = sum_b u_b mult[a, b, l]
            for a in range(k):
                for l in range(k):
                    s = 0
                    for b in range(k):
                        s += coords[u, b] * mult[a, b, l]
                    mu[a, l] = s
            p = u
            j = 1
            powers[0] = u
            seen[u] = u
            verdict = 0
            while True:
                if p == one:
                    verdict = j
                    break
                if p == 0:
                    verdict = -1
                    break
                if p != u and out[p] < 0:
                    verdict = out[p]
                    break
                for l in range(k):
                    s = 0
                    for a in range(k):
                        s += coords[p, a] * mu[a, l]
                    acc[l] = s % moduli[l]
                q = 0
                for l in range(k):
                    q += acc[l] * radix[l]
                p = q
                j += 1
                if seen[p] == u:
                    verdict = -2
                    break
                seen[p] = u
                powers[j - 1] = p
            if verdict > 0:
                for t in range(1, j + 1):
                    out[powers[t - 1]] = j // _gcd(t, j)
            else:
                for t in range(j - 1):
                    out[powers[t]] = verdict
                out[u] = verdict
        return out

    @njit(cache=True)
    def _closure_jit(factors, limit):
        reach = np.zeros(limit + 1, dtype=np.bool_)
        if limit >= 1:
            reach[1] = True
        for f in factors:
            if f < 2 or f > limit:
                continue
            for m in range(1, limit // f + 1):
                if reach[m]:
                    reach[m * f] = True
        return reach

    def unit_orders_numba(mult: np.ndarray, moduli: np.ndarray, one: int) -> np.ndarray:
        return _unit_orders_jit(
            np.ascontiguousarray(mult, dtype=np.int64),
            np.ascontiguousarray(moduli, dtype=np.int64),
            np.int64(one),
        )

    def multiplicative_closure_numba(factors: np.ndarray, limit: int) -> np.ndarray:
        f = np.unique(np.asarray(factors, dtype=np.int64))
        return _closure_jit(f, np.int64(limit))

else:  # pragma: no cover
    unit_orders_numba = unit_orders_numpy
    multiplicative_closure_numba = multiplicative_closure_numpy


if BACKEND == "numba":
    unit_orders = unit_orders_numba
    multiplicative_closure = multiplicative_closure_numba
else:
    unit_orders = unit_orders_numpy
    multiplicative_closure = multiplicative_closure_numpy
