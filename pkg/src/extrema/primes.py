"""Deterministic prime enumeration helpers.

Everything here is sieve based; primality is never probabilistic.
"""

from __future__ import annotations

import numpy as np

_SIEVE_HARD_CAP = 200_000_000


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending, as an int64 array."""
    if limit > _SIEVE_HARD_CAP:
        raise ValueError(f"sieve limit {limit} exceeds hard cap {_SIEVE_HARD_CAP}")
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def primes_in_range(lo: float, hi: float) -> np.ndarray:
    """Primes p with lo <= p <= hi, ascending."""
    if hi < 2 or hi < lo:
        return np.empty(0, dtype=np.int64)
    ps = sieve_primes(int(np.floor(hi)))
    return ps[ps >= lo]


def smallest_prime_factor(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n for 0 <= n <= limit (spf[0]=spf[1]=0)."""
    if limit > _SIEVE_HARD_CAP:
        raise ValueError(f"sieve limit {limit} exceeds hard cap {_SIEVE_HARD_CAP}")
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 2:
        for p in range(2, int(limit**0.5) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]  # strided view: in-place assignment
                block[block == 0] = p
        unmarked = spf == 0
        spf[unmarked] = np.arange(limit + 1, dtype=np.int64)[unmarked]
        spf[:2] = 0
    return spf


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as [(p, exponent)] by trial division."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out
