"""Desk-scale sieve experiments over digit classes.

Everything here is empirical: exact counts over ranges small enough for a
workstation, reported against the asymptotic predictions they are meant to
illustrate. Nothing in this module is a certified bound.

Covered: the discrepancy sum over progressions

    sum_{q < x^t} max_z max_{1 <= h <= q}
        | #{k < z : s_G(k) = r (mod s), k = h (mod q)}
          - (1/q) #{k < z : s_G(k) = r (mod s)} |,

counts of primes and semiprimes in a digit class, and sums of the
generalized von Mangoldt function Lambda_l = mu * log^l over a digit class,
compared with the main term (l/s) x (log x)^{l-1}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import gcd

import numpy as np

from .base import BaseContext, CostGuardError, PreconditionError

SIEVE_GUARD = 10**8
COUNT_GUARD = 10**7
_CHUNK = 1 << 20


class GcdPreconditionWarning(UserWarning):
    """The coprimality hypothesis gcd(a_1 + ... + a_d - 1, s) = 1 fails."""


@dataclass
class SieveCache:
    """Smallest-prime-factor table for 2..limit (spf[0] = spf[1] = 0)."""

    limit: int
    spf: np.ndarray

    def is_prime(self, n: int) -> bool:
        return n >= 2 and int(self.spf[n]) == n


def sieve_spf(x: int) -> SieveCache:
    if x > SIEVE_GUARD:
        raise CostGuardError(f"sieve limit {x} exceeds the memory guard {SIEVE_GUARD}")
    if x < 2:
        return SieveCache(x, np.zeros(max(x + 1, 2), dtype=np.int64))
    spf = np.zeros(x + 1, dtype=np.int64)
    for i in range(2, math.isqrt(x) + 1):
        if spf[i] == 0:
            sl = spf[i * i :: i]
            sl[sl == 0] = i
    untouched = spf == 0
    untouched[:2] = False
    spf[untouched] = np.nonzero(untouched)[0]
    return SieveCache(x, spf)


def _digit_sums_of(ctx: BaseContext, values: np.ndarray) -> np.ndarray:
    """Greedy digit sums of an arbitrary int64 array, via floor division."""
    if len(values) == 0:
        return values.copy()
    terms = ctx.terms_upto(max(int(values.max()), 1))
    rem = values.copy()
    out = np.zeros_like(values)
    for g in reversed(terms):
        d = rem // g
        out += d
        rem -= d * g
    return out


def _digit_class_mask(ctx: BaseContext, lo: int, hi: int, r: int, s: int) -> np.ndarray:
    """Boolean mask over k in [lo, hi) for s_G(k) = r (mod s)."""
    ks = np.arange(lo, hi, dtype=np.int64)
    return _digit_sums_of(ctx, ks) % s == r % s


def class_progression_count(
    ctx: BaseContext, z: int, r: int, s: int, h: int, q: int
) -> int:
    """#{k < z : s_G(k) = r (mod s), k = h (mod q)}, exactly."""
    if z > COUNT_GUARD:
        raise CostGuardError(f"z = {z} exceeds the single-pass guard {COUNT_GUARD}")
    if not 1 <= h <= q:
        raise PreconditionError("need 1 <= h <= q")
    total = 0
    for lo in range(0, z, _CHUNK):
        hi = min(lo + _CHUNK, z)
        mask = _digit_class_mask(ctx, lo, hi, r, s)
        ks = np.arange(lo, hi, dtype=np.int64)
        total += int(np.count_nonzero(mask & (ks % q == h % q)))
    return total


@dataclass
class DiscrepancyReport:
    x: int
    q_max: int
    r: int
    s: int
    exponent: float
    A: float
    z_samples: list[int]
    per_q: list[float]
    total: float
    normalized: float

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "q_max": self.q_max,
            "r": self.r,
            "s": self.s,
            "exponent": self.exponent,
            "A": self.A,
            "z_samples": self.z_samples,
            "per_q": self.per_q,
            "total": self.total,
            "normalized": self.normalized,
        }


def _check_gcd_hypothesis(ctx: BaseContext, s: int) -> bool:
    return gcd(sum(ctx.coeffs) - 1, s) == 1


def geometric_z_samples(x: int) -> list[int]:
    """{ceil(x / 2^i)} down to 1, plus x itself, ascending."""
    zs = {x}
    z = x
    while z > 1:
        z = -(-z // 2)
        zs.add(z)
        if z == 1:
            break
    return sorted(zs)


def bv_discrepancy(
    ctx: BaseContext, x: int, r: int, s: int, exponent: float, A: float = 1.0
) -> DiscrepancyReport:
    """The discrepancy sum over moduli q < x^exponent, with the max over z
    restricted to the geometric sample set (a lower bound for the full max;
    the decay comparison across x remains meaningful)."""
    if x > COUNT_GUARD:
        raise CostGuardError(f"x = {x} exceeds the guard {COUNT_GUARD}")
    if not _check_gcd_hypothesis(ctx, s):
        raise PreconditionError(
            f"gcd(a_1 + ... + a_d - 1, s) = gcd({sum(ctx.coeffs) - 1}, {s}) != 1"
        )
    q_max = max(1, math.ceil(x**exponent) - 1)
    z_samples = geometric_z_samples(x)
    # all k < x in the digit class, sorted; per-z restriction by searchsorted
    in_class = []
    for lo in range(0, x, _CHUNK):
        hi = min(lo + _CHUNK, x)
        mask = _digit_class_mask(ctx, lo, hi, r, s)
        in_class.append(np.arange(lo, hi, dtype=np.int64)[mask])
    ks = np.concatenate(in_class) if in_class else np.zeros(0, dtype=np.int64)
    per_q = [0.0] * (q_max + 1)
    for z in z_samples:
        sub = ks[: int(np.searchsorted(ks, z))]
        n_sub = len(sub)
        for q in range(1, q_max + 1):
            counts = np.bincount(sub % q, minlength=q)
            dev = float(np.max(np.abs(counts - n_sub / q)))
            if dev > per_q[q]:
                per_q[q] = dev
    total = float(sum(per_q[1:]))
    normalized = total * math.log(2 * x) ** A / x
    return DiscrepancyReport(
        x=x,
        q_max=q_max,
        r=r,
        s=s,
        exponent=exponent,
        A=A,
        z_samples=z_samples,
        per_q=per_q[1:],
        total=total,
        normalized=normalized,
    )


def residue_histogram(ctx: BaseContext, x: int, s: int) -> np.ndarray:
    """Counts of s_G(k) mod s for k < x (length-s int64 array)."""
    if x > SIEVE_GUARD:
        raise CostGuardError(f"x = {x} exceeds the streaming guard {SIEVE_GUARD}")
    if s < 1:
        raise PreconditionError("modulus s must be >= 1")
    counts = np.zeros(s, dtype=np.int64)
    for lo in range(0, x, _CHUNK):
        hi = min(lo + _CHUNK, x)
        sums = _digit_sums_of(ctx, np.arange(lo, hi, dtype=np.int64))
        counts += np.bincount(sums % s, minlength=s)
    return counts


def almost_prime_count(
    ctx: BaseContext, x: int, r: int, s: int, sieve: SieveCache
) -> int:
    """#{k <= x : s_G(k) = r (mod s), k prime or a product of two primes}.

    Semiprimes include squares p^2 (the two prime factors need not differ).
    """
    if sieve.limit < x:
        raise PreconditionError("sieve limit is smaller than x")
    total = 0
    spf = sieve.spf
    for lo in range(2, x + 1, _CHUNK):
        hi = min(lo + _CHUNK, x + 1)
        ks = np.arange(lo, hi, dtype=np.int64)
        p = spf[lo:hi]
        quotient = ks // p
        prime = quotient == 1
        semiprime = (quotient > 1) & (spf[quotient] == quotient)
        mask = (prime | semiprime) & (_digit_sums_of(ctx, ks) % s == r % s)
        total += int(np.count_nonzero(mask))
    return total


def von_mangoldt_table(x: int, sieve: SieveCache) -> np.ndarray:
    """Lambda(n) for n <= x: log p at prime powers p^k, else 0."""
    if sieve.limit < x:
        raise PreconditionError("sieve limit is smaller than x")
    lam = np.zeros(x + 1)
    spf = sieve.spf
    primes = np.nonzero(spf[: x + 1] == np.arange(x + 1))[0]
    primes = primes[primes >= 2]
    for p in primes:
        logp = math.log(p)
        pk = int(p)
        while pk <= x:
            lam[pk] = logp
            pk *= int(p)
    return lam


def generalized_von_mangoldt(x: int, ell: int, sieve: SieveCache) -> np.ndarray:
    """Lambda_l(n) = (mu * log^l)(n) for n <= x, via the recursion
    Lambda_l = Lambda_{l-1} . log + Lambda_{l-1} * Lambda, seeded with
    Lambda_1 = Lambda. The convolution runs only over prime-power second
    arguments, so each step costs O(x log log x)."""
    if ell < 1:
        raise PreconditionError("need ell >= 1")
    lam = von_mangoldt_table(x, sieve)
    cur = lam.copy()
    logs = np.zeros(x + 1)
    logs[1:] = np.log(np.arange(1, x + 1))
    support = np.nonzero(lam)[0]
    for _ in range(ell - 1):
        nxt = cur * logs
        for e in support:
            top = x // int(e)
            nxt[e :: e] += cur[1 : top + 1] * lam[e]
        cur = nxt
    return cur


@dataclass
class VonMangoldtReport:
    x: int
    ell: int
    r: int
    s: int
    lhs: float
    main_term: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.main_term

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "ell": self.ell,
            "r": self.r,
            "s": self.s,
            "lhs": self.lhs,
            "main_term": self.main_term,
            "ratio": self.ratio,
        }


def von_mangoldt_sum(
    ctx: BaseContext, x: int, ell: int, r: int, s: int, sieve: SieveCache
) -> VonMangoldtReport:
    """sum_{k < x, s_G(k) = r (mod s)} Lambda_l(k) against (l/s) x (log x)^{l-1}.

    The coprimality hypothesis gcd(a_1 + ... + a_d - 1, s) = 1 is reported as
    a warning rather than an error: the sum is still well defined without it,
    only the main-term comparison loses its theoretical backing.
    """
    if ell < 2:
        raise PreconditionError("need ell >= 2")
    if x > COUNT_GUARD:
        raise CostGuardError(f"x = {x} exceeds the guard {COUNT_GUARD}")
    if not _check_gcd_hypothesis(ctx, s):
        warnings.warn(
            f"gcd(a_1 + ... + a_d - 1, s) = gcd({sum(ctx.coeffs) - 1}, {s}) != 1; "
            "the main-term comparison is heuristic for this base",
            GcdPreconditionWarning,
            stacklevel=2,
        )
    lam_ell = generalized_von_mangoldt(x - 1, ell, sieve)
    lhs = 0.0
    for lo in range(0, x, _CHUNK):
        hi = min(lo + _CHUNK, x)
        mask = _digit_class_mask(ctx, lo, hi, r, s)
        lhs += float(np.sum(lam_ell[lo:hi][mask]))
    main = (ell / s) * x * math.log(x) ** (ell - 1)
    return VonMangoldtReport(x=x, ell=ell, r=r, s=s, lhs=lhs, main_term=main)
