"""Exponential sums over digit expansions.

The central object is

    S_n(y, beta) = sum_{k < G_n} e(beta * s_G(k) + y * k),   e(z) = exp(2 pi i z),

together with the coefficient sums

    A_{n,j}(y, beta) = sum_{l=0}^{a_j - 1}
        e(y * (a_1 G_{n-1} + ... + a_{j-1} G_{n-j+1} + l G_{n-j})
          + beta * (a_1 + ... + a_{j-1} + l)),

which satisfy S_n = sum_{j : a_j != 0} A_{n,j} S_{n-j} for n >= d. The modulus
|A_{k,j}| equals the Dirichlet-kernel ratio |sin(pi a_j x)/sin(pi x)| at
x = beta + y G_{k-j}.

1-norms of S_n and of dS_n/dy over y in [0,1) are estimated by composite
midpoint quadrature with node density tied to G_n, since the integrand
oscillates on the scale 1/G_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .base import BaseContext, CostGuardError, PreconditionError
from .digits import digit_sums_range

DIRECT_SUM_GUARD = 10**7
ONE_NORM_GUARD = 10**5
SINGULARITY_TOL = 1e-12


def parse_rational(text: str) -> Fraction:
    """Parse 'H/Q' (or a plain number) into an exact fraction."""
    return Fraction(text)


@dataclass(frozen=True)
class ExpSumParams:
    """Frequencies y (on k) and beta (on the digit sum), both taken mod 1.

    Exact fractions, when available, let the direct sum reduce phases
    exactly mod 1 before any floating-point rounding.
    """

    y: float
    beta: float
    y_frac: Fraction | None = None
    beta_frac: Fraction | None = None

    @classmethod
    def make(cls, y, beta) -> "ExpSumParams":
        y_frac = y if isinstance(y, Fraction) else None
        beta_frac = beta if isinstance(beta, Fraction) else None
        yf = float(y) % 1.0
        bf = float(beta) % 1.0
        return cls(yf, bf, y_frac, beta_frac)


@dataclass
class ExpSumTable:
    params: ExpSumParams
    values: list[complex]  # S_0 .. S_n


def _e(phase: np.ndarray | float) -> np.ndarray | complex:
    return np.exp(2j * np.pi * np.asarray(phase))


def _phase_mod1(y: float, ints) -> np.ndarray | float:
    """y * ints mod 1 in extended precision.

    The products reach y * G_n; reducing mod 1 before rounding to double
    keeps the phase error near 1e-19 * G_n instead of 1e-16 * G_n.
    """
    out = (np.asarray(y, dtype=np.longdouble) * ints) % 1.0
    return float(out) if out.shape == () else out.astype(float)


def exp_sum_direct(ctx: BaseContext, n: int, params: ExpSumParams) -> complex:
    """S_n(y, beta) by summation over all k < G_n (pairwise-ordered)."""
    g_n = ctx.term(n)
    if g_n > DIRECT_SUM_GUARD:
        raise CostGuardError(f"G_{n} = {g_n} exceeds the direct summation guard")
    s = digit_sums_range(ctx, g_n)
    ks = np.arange(g_n, dtype=np.int64)
    if params.y_frac is not None and params.beta_frac is not None:
        h, q = params.y_frac.numerator, params.y_frac.denominator
        r, sden = params.beta_frac.numerator, params.beta_frac.denominator
        mod = q * sden
        num = (h * ks % mod) * sden + (r * s % mod) * q
        phase = (num % mod) / mod
    else:
        phase = _phase_mod1(params.beta, s) + _phase_mod1(params.y, ks)
    # np.sum reduces pairwise, so the rounding pattern is deterministic
    return complex(np.sum(_e(phase)))


def coefficient_A(ctx: BaseContext, n: int, j: int, params: ExpSumParams) -> complex:
    """The coefficient sum A_{n,j}(y, beta); |A_{n,j}| <= a_j."""
    if j not in ctx.index_set:
        raise PreconditionError(f"j={j} has a_j = 0; not in the index set")
    if n < j:
        raise PreconditionError(f"need n >= j, got n={n}, j={j}")
    a = ctx.coeffs
    pre_g = sum(a[k - 1] * ctx.term(n - k) for k in range(1, j))
    pre_a = sum(a[k - 1] for k in range(1, j))
    y, beta = params.y, params.beta
    total = 0j
    for ell in range(a[j - 1]):
        phase = _phase_mod1(y, pre_g + ell * ctx.term(n - j)) + beta * (pre_a + ell)
        total += complex(_e(phase))
    return total


def exp_sum_recurrent(ctx: BaseContext, n: int, params: ExpSumParams) -> ExpSumTable:
    """The table S_0..S_n via the order-d coefficient recurrence."""
    values: list[complex] = []
    for k in range(min(ctx.d, n + 1)):
        g_k = ctx.term(k)
        s = digit_sums_range(ctx, g_k)
        values.append(complex(np.sum(_e(params.beta * s + params.y * np.arange(g_k)))))
    for k in range(ctx.d, n + 1):
        values.append(
            sum(coefficient_A(ctx, k, j, params) * values[k - j] for j in ctx.index_set)
        )
    return ExpSumTable(params=params, values=values)


def kernel_f(ctx: BaseContext, k: int, j: int, y: float, beta: float) -> float:
    """|sin(pi a_j x)/sin(pi x)| at x = beta + y G_{k-j}, equal to |A_{k,j}|.

    Returns a_j exactly when x is within 1e-12 of an integer (removable
    singularity).
    """
    if j not in ctx.index_set:
        raise PreconditionError(f"j={j} not in the index set")
    if k < j:
        raise PreconditionError(f"need k >= j, got k={k}, j={j}")
    a_j = ctx.coeffs[j - 1]
    x = beta + y * ctx.term(k - j)
    frac = x - math.floor(x)
    if min(frac, 1.0 - frac) < SINGULARITY_TOL:
        return float(a_j)
    return abs(math.sin(math.pi * a_j * frac) / math.sin(math.pi * frac))


def _exp_sum_vec(ctx: BaseContext, n: int, ys: np.ndarray, beta: float) -> np.ndarray:
    """S_n(y, beta) for an array of y values, via the recurrence."""
    a = ctx.coeffs
    values: list[np.ndarray] = []
    for k in range(min(ctx.d, n + 1)):
        g_k = ctx.term(k)
        s = digit_sums_range(ctx, g_k)
        acc = np.zeros(len(ys), dtype=complex)
        for kk in range(g_k):
            acc += _e(beta * s[kk] + _phase_mod1(ys, kk))
        values.append(acc)
    for k in range(ctx.d, n + 1):
        acc = np.zeros(len(ys), dtype=complex)
        for j in ctx.index_set:
            pre_g = sum(a[m - 1] * ctx.term(k - m) for m in range(1, j))
            pre_a = sum(a[m - 1] for m in range(1, j))
            coeff = np.zeros(len(ys), dtype=complex)
            for ell in range(a[j - 1]):
                phase = _phase_mod1(ys, pre_g + ell * ctx.term(k - j))
                coeff += _e(phase + beta * (pre_a + ell))
            acc += coeff * values[k - j]
        values.append(acc)
    return values[n]


@dataclass
class QuadratureEstimate:
    value: float
    nodes: int


def one_norm(
    ctx: BaseContext, n: int, beta: float, samples_per_oscillation: int = 16
) -> QuadratureEstimate:
    """Midpoint-rule estimate of the integral of |S_n(y, beta)| over [0, 1)."""
    g_n = ctx.term(n)
    if g_n > ONE_NORM_GUARD:
        raise CostGuardError(f"G_{n} = {g_n} exceeds the 1-norm oscillation guard")
    nodes = max(64, samples_per_oscillation * g_n)
    ys = (np.arange(nodes) + 0.5) / nodes
    vals = np.abs(_exp_sum_vec(ctx, n, ys, beta))
    return QuadratureEstimate(value=float(np.mean(vals)), nodes=nodes)


def derivative_one_norm(
    ctx: BaseContext, n: int, beta: float, samples_per_oscillation: int = 16
) -> QuadratureEstimate:
    """Midpoint-rule estimate of the 1-norm of dS_n/dy over [0, 1).

    The integrand |sum_{k < G_n} 2 pi k e(beta s_G(k) + y k)| is assembled
    directly; the cost is O(G_n * nodes), so keep n small.
    """
    g_n = ctx.term(n)
    if g_n > ONE_NORM_GUARD:
        raise CostGuardError(f"G_{n} = {g_n} exceeds the 1-norm oscillation guard")
    nodes = max(64, samples_per_oscillation * g_n)
    ys = (np.arange(nodes) + 0.5) / nodes
    s = digit_sums_range(ctx, g_n)
    acc = np.zeros(nodes, dtype=complex)
    chunk = max(1, 10**6 // max(nodes, 1))
    for start in range(0, g_n, chunk):
        ks = np.arange(start, min(start + chunk, g_n), dtype=np.int64)
        phases = beta * s[ks][:, None] + np.outer(ks, ys)
        acc += (ks[:, None] * _e(phases)).sum(axis=0)
    vals = 2.0 * np.pi * np.abs(acc)
    return QuadratureEstimate(value=float(np.mean(vals)), nodes=nodes)


def farey_fractions(q_max: int) -> list[Fraction]:
    """All reduced fractions h/q in [0, 1) with q <= q_max."""
    pts = {Fraction(0, 1)}
    for q in range(1, q_max + 1):
        for h in range(1, q):
            if gcd(h, q) == 1:
                pts.add(Fraction(h, q))
    return sorted(pts)


@dataclass
class GallagherReport:
    lhs: float
    rhs: float
    ok: bool
    n_points: int
    delta: float
    one_norm: float
    derivative_one_norm: float


def gallagher_check(ctx: BaseContext, n: int, beta: float, q_max: int) -> GallagherReport:
    """Numeric check of the well-spaced-points inequality.

    Sums |S_n| over the Farey fractions of order q_max (pairwise spacing at
    least delta = 1/q_max^2) and compares with
    delta^{-1} * ||S_n||_1 + (1/2) * ||dS_n/dy||_1 over one full period.
    """
    if q_max * q_max > 10**4:
        raise CostGuardError("Farey order guard: need Q^2 <= 10^4")
    pts = farey_fractions(q_max)
    ys = np.array([float(p) for p in pts])
    lhs = float(np.sum(np.abs(_exp_sum_vec(ctx, n, ys, beta))))
    delta = 1.0 / (q_max * q_max)
    nrm = one_norm(ctx, n, beta)
    dnrm = derivative_one_norm(ctx, n, beta)
    rhs = nrm.value / delta + 0.5 * dnrm.value
    return GallagherReport(
        lhs=lhs,
        rhs=rhs,
        ok=lhs <= rhs * (1.0 + 1e-6),
        n_points=len(pts),
        delta=delta,
        one_norm=nrm.value,
        derivative_one_norm=dnrm.value,
    )
