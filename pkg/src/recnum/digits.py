"""Greedy digit expansions and the sum-of-digits function.

Every integer nu >= 1 has a unique expansion nu = eps_0 G_0 + ... + eps_l G_l
with G_l <= nu < G_{l+1}, obtained by repeatedly subtracting the largest
fitting term. Digits are stored little-endian (eps_0 first). The sum of
digits s_G(nu) = eps_0 + ... + eps_l, with s_G(0) = 0 by convention; 0 itself
gets the empty expansion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import BaseContext, PreconditionError


@dataclass(frozen=True)
class Expansion:
    """Little-endian digit string together with its value."""

    digits: tuple[int, ...]
    value: int

    def __len__(self) -> int:
        return len(self.digits)


def expand(ctx: BaseContext, nu: int) -> Expansion:
    """Greedy expansion of nu >= 0; expand(0) is the empty expansion."""
    if nu < 0:
        raise PreconditionError("can only expand non-negative integers")
    if nu == 0:
        return Expansion((), 0)
    terms = ctx.terms_upto(nu)
    digits = [0] * len(terms)
    rem = nu
    for j in range(len(terms) - 1, -1, -1):
        digits[j], rem = divmod(rem, terms[j])
    assert rem == 0
    return Expansion(tuple(digits), nu)


def value_of(ctx: BaseContext, e: Expansion | tuple[int, ...]) -> int:
    """Exact value sum(eps_j * G_j) of a digit string."""
    digits = e.digits if isinstance(e, Expansion) else tuple(e)
    if any(d < 0 for d in digits):
        raise PreconditionError("digits must be non-negative")
    return sum(d * ctx.term(j) for j, d in enumerate(digits))


def sum_of_digits(ctx: BaseContext, nu: int) -> int:
    return sum(expand(ctx, nu).digits)


def digit_sums_range(ctx: BaseContext, n: int) -> np.ndarray:
    """s_G(k) for all k in [0, n) as an int64 array.

    Works digit position by digit position over the whole range at once;
    floor division from the top term downward is exactly the greedy rule.
    """
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    terms = ctx.terms_upto(max(n - 1, 1))
    rem = np.arange(n, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    for g in reversed(terms):
        d = rem // g
        out += d
        rem -= d * g
    return out


def is_parry_admissible(ctx: BaseContext, digits) -> bool:
    """Window criterion for digit strings, read from the top digit down.

    A string is accepted iff every window of d consecutive digits, starting
    at the most significant position and padded below with d-1 zeros, is
    lexicographically strictly smaller than (a_1, ..., a_d).

    For strengthened bases (condition (1) tight up to +1) this is exactly the
    set of greedy digit strings; for other bases it is only a necessary
    condition on greedy strings.
    """
    digits = digits.digits if isinstance(digits, Expansion) else tuple(digits)
    if any(d < 0 for d in digits):
        raise PreconditionError("digits must be non-negative")
    d = ctx.d
    a = ctx.coeffs
    # big-endian with d-1 zeros below the least significant digit
    seq = tuple(reversed(digits)) + (0,) * (d - 1)
    for j in range(len(digits)):
        if seq[j : j + d] >= a:
            return False
    return True
