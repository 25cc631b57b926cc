"""Certified suprema of Dirichlet-kernel ratios and the distribution exponent.

For g(y) = sin(pi a_j y)/sin(pi y) and the partition of [0, 1) into the a = a_1
intervals (b/a, (b+1)/a), the quantities

    m(j, b) = sup over (b/a, (b+1)/a) of |g|,
    m(j)    = (1/a) * sum_{b=0}^{a-1} m(j, b),
    m_G     = max over j with a_j != 0 of m(j)

control the 1-norm of S_n(., beta): the averaged interval suprema propagate
through the coefficient recurrence one step at a time. A shifted refinement
m^(r) replaces the intervals by ((b+t)/a, (b+t+1)/a) for t in {0, 1/r, ...,
(r-1)/r} and takes the worst shift, gaining one unit in the resulting base.

All suprema here are certified from above: a uniform grid maximum plus a
Lipschitz term covering the gaps. Intervals whose closure meets an integer
short-circuit to the exact supremum a_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .base import BaseContext, PreconditionError

DEFAULT_SUP_SLACK = 1e-3
THETA_FLOOR_EXPONENT = 0.5  # Parseval route always gives this
SHIFT_EPS_SLACK = 1e-6


def dirichlet_kernel_abs(x: np.ndarray, a: int, tol: float = 1e-12) -> np.ndarray:
    """|sin(pi a x)/sin(pi x)|, with the removable singularities set to a."""
    x = np.asarray(x, dtype=float)
    f = x - np.floor(x)
    near = np.minimum(f, 1.0 - f) < tol
    out = np.empty_like(f)
    sf = np.sin(np.pi * f)
    np.divide(np.abs(np.sin(np.pi * a * f)), np.abs(sf), out=out, where=~near)
    out[near] = a
    return out


def kernel_derivative_cap(a: int) -> float:
    """Global bound pi a (a-1) on |g'|, from the exponential-series expansion."""
    return math.pi * a * (a - 1)


def dirichlet_kernel_deriv_abs(x: np.ndarray, a: int, tol: float = 1e-9) -> np.ndarray:
    """|g'(x)| for g = sin(pi a x)/sin(pi x), capped at pi a (a-1).

    g is even around every integer, so g' vanishes there; the sup of |g'|
    near an integer sits at the first oscillation (about 0.436 pi a^2), well
    below the global cap.
    """
    x = np.asarray(x, dtype=float)
    f = x - np.floor(x)
    cap = kernel_derivative_cap(a)
    near = np.minimum(f, 1.0 - f) < tol
    s = np.sin(np.pi * f)
    c = np.cos(np.pi * f)
    sa = np.sin(np.pi * a * f)
    ca = np.cos(np.pi * a * f)
    out = np.zeros_like(f)
    num = np.abs(np.pi * (a * ca * s - c * sa))
    np.divide(num, s * s, out=out, where=~near)
    return np.minimum(out, cap)


def kernel_second_derivative_cap(a: int) -> float:
    """Bound (2 pi)^2 a (a^2 - 1) / 12 on |g''| (centered-series coefficients)."""
    return (2.0 * math.pi) ** 2 * a * (a * a - 1) / 12.0


@dataclass(frozen=True)
class SupremumCertificate:
    lo: float
    hi: float
    bound: float
    grid_step: float
    lipschitz: float
    note: str


def _contains_integer(lo: float, hi: float) -> bool:
    return math.floor(hi) >= math.ceil(lo)


def _local_lipschitz(a: int, lo: float, hi: float) -> float:
    """Per-interval bound on |g'|: pi (a + min(a, 1/m)) / m with m = min |sin pi y|.

    |sin pi y| attains its minimum over an integer-free interval at an
    endpoint. Falls back to the global cap when that is smaller.
    """
    m = min(abs(math.sin(math.pi * lo)), abs(math.sin(math.pi * hi)))
    cap = kernel_derivative_cap(a)
    if m <= 0.0:
        return cap
    return min(cap, math.pi * (a + min(a, 1.0 / m)) / m)


_GRID_POINT_CAP = 6 * 10**6


@lru_cache(maxsize=200_000)
def dirichlet_sup(
    a_j: int, lo: float, hi: float, slack: float = DEFAULT_SUP_SLACK
) -> SupremumCertificate:
    """Certified upper bound for sup over (lo, hi) of |sin(pi a_j y)/sin(pi y)|.

    Grid maximum plus (step/2) times a Lipschitz constant; the result never
    exceeds a_j. Intervals touching an integer return a_j exactly, since the
    supremum there is attained in the limit.
    """
    if not hi > lo:
        raise PreconditionError("degenerate interval")
    if a_j < 1:
        raise PreconditionError("a_j must be a positive integer")
    if _contains_integer(lo, hi):
        return SupremumCertificate(lo, hi, float(a_j), 0.0, 0.0, "integer-endpoint")
    if a_j == 1:
        return SupremumCertificate(lo, hi, 1.0, 0.0, 0.0, "unit-coefficient")
    lip = _local_lipschitz(a_j, lo, hi)
    npts = int(math.ceil((hi - lo) * lip / slack)) + 2
    npts = min(npts, _GRID_POINT_CAP)
    ys = np.linspace(lo, hi, npts)
    step = (hi - lo) / (npts - 1)
    bound = float(np.max(dirichlet_kernel_abs(ys, a_j))) + 0.5 * step * lip
    return SupremumCertificate(
        lo, hi, min(bound, float(a_j)), step, lip, "grid+lipschitz"
    )


def interval_sup_deriv(a: int, lo: float, hi: float, slack: float = 0.005) -> float:
    """Certified upper bound for sup over (lo, hi) of |g'|, g the kernel ratio.

    Grid maximum plus (step/2) times the |g''| cap. Valid across integers as
    well: g' extends continuously through the removable singularities (with
    value 0 at the integers themselves), and the |g''| cap is global.
    """
    lip2 = kernel_second_derivative_cap(a)
    npts = int(math.ceil((hi - lo) * lip2 / (2.0 * slack))) + 2
    npts = min(npts, _GRID_POINT_CAP)
    ys = np.linspace(lo, hi, npts)
    step = (hi - lo) / (npts - 1)
    bound = float(np.max(dirichlet_kernel_deriv_abs(ys, a))) + 0.5 * step * lip2
    return min(bound, kernel_derivative_cap(a))


def m_table(
    ctx: BaseContext, j: int, shift: float = 0.0, slack: float = DEFAULT_SUP_SLACK
) -> list[SupremumCertificate]:
    """Certificates for m(j, b) (or its shifted variant) over b = 0..a-1."""
    if j not in ctx.index_set:
        raise PreconditionError(f"j={j} not in the index set")
    a = ctx.coeffs[0]
    a_j = ctx.coeffs[j - 1]
    return [
        dirichlet_sup(a_j, (b + shift) / a, (b + shift + 1) / a, slack)
        for b in range(a)
    ]


def m_of_j(ctx: BaseContext, j: int, shift: float = 0.0,
           slack: float = DEFAULT_SUP_SLACK) -> float:
    certs = m_table(ctx, j, shift=shift, slack=slack)
    a = ctx.coeffs[0]
    return sum(c.bound for c in certs) / a


def m_value(ctx: BaseContext, slack: float = DEFAULT_SUP_SLACK) -> float:
    """The base quantity m_G = max over the index set of the averaged suprema."""
    return max(m_of_j(ctx, j, slack=slack) for j in ctx.index_set)


def m_closed_form(a1: int) -> float:
    """Closed-form bound 2 + 2/(a sin(pi/a)) - (2/pi) log tan(pi/(2a)), a >= 3."""
    if a1 < 3:
        raise PreconditionError("closed-form bound requires a_1 >= 3")
    a = float(a1)
    return (
        2.0
        + 2.0 / (a * math.sin(math.pi / a))
        - (2.0 / math.pi) * math.log(math.tan(math.pi / (2.0 * a)))
    )


def shift_modulus_limit(ctx: BaseContext, eps_slack: float = SHIFT_EPS_SLACK) -> float:
    """u = floor(alpha) + 1 - alpha - eps: the eventual gap of G_n/G_{n-1} below
    the next integer. A shift modulus r is usable when 1/r < u."""
    return math.floor(ctx.alpha) + 1.0 - ctx.alpha - eps_slack


def m_shifted(ctx: BaseContext, r: int, slack: float = DEFAULT_SUP_SLACK) -> float:
    """m^(r): worst shifted average over shifts t in {0, 1/r, ..., (r-1)/r}."""
    if r < 1:
        raise PreconditionError("shift modulus r must be >= 1")
    u = shift_modulus_limit(ctx)
    if 1.0 / r >= u:
        raise PreconditionError(
            f"shift modulus r={r} violates 1/r < u (u = {u:.6g} for this base)"
        )
    return max(
        m_of_j(ctx, j, shift=t / r, slack=slack)
        for j in ctx.index_set
        for t in range(r)
    )


@dataclass
class MBoundReport:
    coeffs: tuple[int, ...]
    m_jb: dict[int, list[float]]
    m_j: dict[int, float]
    m: float
    closed_form: float | None
    shift_r: int | None
    m_shifted: float | None
    theta: float

    def to_dict(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "m_jb": {str(j): v for j, v in self.m_jb.items()},
            "m_j": {str(j): v for j, v in self.m_j.items()},
            "m": self.m,
            "closed_form": self.closed_form,
            "shift_r": self.shift_r,
            "m_shifted": self.m_shifted,
            "theta": self.theta,
        }


@dataclass
class ThetaReport:
    theta: float
    eta: float
    winner: str
    candidates: dict[str, float] = field(default_factory=dict)


def theta_lower_bound(
    ctx: BaseContext,
    use_shifted: bool = False,
    shift_r: int = 2,
    block_kappa: float | None = None,
    block_width: int = 2,
    slack: float = DEFAULT_SUP_SLACK,
) -> ThetaReport:
    """Lower bound for the level-of-distribution exponent theta = 1 - eta.

    eta is the best available decay exponent for the 1-norm of S_n:
    1/2 from Parseval, log_alpha(m_G + 3) from the interval suprema,
    log_alpha(m^(r) + 2) from the shifted refinement, and kappa/w - 1 from a
    width-w block certificate with exponent kappa.
    """
    log_alpha = math.log(ctx.alpha)
    candidates = {
        "parseval": THETA_FLOOR_EXPONENT,
        "interval-sup": math.log(m_value(ctx, slack=slack) + 3.0) / log_alpha,
    }
    if use_shifted:
        candidates["shifted-sup"] = (
            math.log(m_shifted(ctx, shift_r, slack=slack) + 2.0) / log_alpha
        )
    if block_kappa is not None:
        candidates["block"] = block_kappa / block_width - 1.0
    winner = min(candidates, key=candidates.get)
    eta = candidates[winner]
    return ThetaReport(theta=1.0 - eta, eta=eta, winner=winner, candidates=candidates)


def compute_mbound_report(
    ctx: BaseContext, shift_r: int | None = None, slack: float = DEFAULT_SUP_SLACK
) -> MBoundReport:
    m_jb = {
        j: [c.bound for c in m_table(ctx, j, slack=slack)] for j in ctx.index_set
    }
    m_j = {j: m_of_j(ctx, j, slack=slack) for j in ctx.index_set}
    m = max(m_j.values())
    a1 = ctx.coeffs[0]
    closed = m_closed_form(a1) if a1 >= 3 else None
    shifted = m_shifted(ctx, shift_r, slack=slack) if shift_r else None
    theta = theta_lower_bound(
        ctx, use_shifted=shift_r is not None, shift_r=shift_r or 2, slack=slack
    ).theta
    return MBoundReport(
        coeffs=ctx.coeffs,
        m_jb=m_jb,
        m_j=m_j,
        m=m,
        closed_form=closed,
        shift_r=shift_r,
        m_shifted=shifted,
        theta=theta,
    )
