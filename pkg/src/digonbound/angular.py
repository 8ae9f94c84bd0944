"""Radial estimation of angular limits and angular derivatives.

Samples a map along the radius toward a boundary point at geometric radii
r_m = 1 - 2^-m and Richardson-extrapolates, assuming an asymptotic expansion
in powers of (1 - r).  Boundary derivatives combine two independent
sequences (difference quotients and radial derivative values) under a
consensus rule, so a broken estimate is flagged instead of silently
averaged.  Also provides the boundary Schwarz (Julia) admissibility check
used by the verification harness.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import InfiniteDerivativeError, NoLimitError
from .maps import CirclePoint, MapExpr

EPS = 2.220446049250313e-16

M_FIRST = 3
M_LAST = 48
SETTLE_TOL = 1e-12


@dataclass(frozen=True)
class AngularEstimate:
    """An extrapolated boundary value with its observed residual."""

    value: complex
    error_bound: float
    radii_used: int
    flags: tuple = field(default_factory=tuple)


def extrapolate_geometric(values, noise_floors=None, settle_tol=SETTLE_TOL):
    """Richardson extrapolation for samples at h_m = 2^-m, m increasing.

    Consumes `values` lazily, building the extrapolation diagonal and
    stopping once successive diagonal entries differ by less than
    `settle_tol`, the noise floor of the inputs takes over, or the supply
    runs out.  Returns (estimate, residual, samples_used).

    `noise_floors`, when given, holds a per-sample bound on the input's
    rounding error; the reported residual never drops below the floor of
    the deepest sample actually used.
    """
    rows = []  # rows[k][i]: k-th column of the Richardson table
    best = None
    best_res = math.inf
    used = 0
    floor_used = 0.0
    prev_diag = None
    for m, v in enumerate(values):
        used += 1
        if noise_floors is not None:
            floor_used = max(floor_used, noise_floors[m])
        # extend the table by one anti-diagonal
        new_row = [complex(v)]
        for k in range(len(rows)):
            fac = 2.0 ** (k + 1)
            new_row.append((fac * new_row[k] - rows[k][-1]) / (fac - 1.0))
        for k, entry in enumerate(new_row):
            if k < len(rows):
                rows[k].append(entry)
            else:
                rows.append([entry])
        diag = new_row[-1]
        if prev_diag is not None:
            res = abs(diag - prev_diag)
            if res < best_res:
                best, best_res = diag, res
            if res < settle_tol or res < floor_used:
                break
        prev_diag = diag
    if best is None:
        best, best_res = prev_diag, math.inf
    return best, max(best_res, floor_used), used


def _radii(m_first=M_FIRST, m_last=M_LAST):
    return [1.0 - 2.0 ** (-m) for m in range(m_first, m_last + 1)]


def angular_limit(expr: MapExpr, at: CirclePoint | float) -> AngularEstimate:
    """Radial limit of `expr` at the boundary point e^{i at}.

    Raises NoLimitError when the extrapolated sequence keeps oscillating
    above tolerance.
    """
    angle = at.angle if isinstance(at, CirclePoint) else float(at)
    direction = cmath.exp(1j * angle)
    values = (expr.eval(r * direction) for r in _radii())
    est, res, used = extrapolate_geometric(values)
    if res > 1e-6:
        raise NoLimitError(
            f"radial values at angle {angle} did not settle (residual {res:.3e})"
        )
    return AngularEstimate(est, res, used)


def _probe_divergence(samples, what, angle):
    """Blow-up test on a shallow-radius prefix.

    A power-law divergence (1-r)^-p shows up as a steady slope p in
    log2|value| against m; convergent sequences flatten out.  Requiring the
    slope to persist over the last three doublings avoids tripping on maps
    whose quotients merely start small.
    """
    mags = [max(abs(v), 1e-300) for v in samples]
    slopes = [math.log2(b / a) for a, b in zip(mags[:-1], mags[1:])]
    if len(slopes) >= 3 and min(slopes[-3:]) > 0.15:
        raise InfiniteDerivativeError(
            f"{what} diverge at angle {angle} "
            f"(growth exponent ~ {slopes[-1]:.2f} per halving)"
        )


def angular_derivative(
    expr: MapExpr, at: CirclePoint | float, limit: complex | None = None
) -> AngularEstimate:
    """Angular derivative of `expr` at e^{i at}.

    Extrapolates the difference quotient (f(r*eta) - limit)/(r*eta - eta)
    and, independently, the radial values of the exact derivative; returns
    the estimate with the smaller residual.  If the two disagree beyond 10x
    the larger residual the result carries a "disagreement" flag.  Divergent
    quotients raise InfiniteDerivativeError.  Radii are consumed lazily, so
    a sequence that settles early never probes the cancellation-dominated
    zone near the boundary.
    """
    angle = at.angle if isinstance(at, CirclePoint) else float(at)
    direction = cmath.exp(1j * angle)
    if limit is None:
        limit = angular_limit(expr, angle).value

    def quotient(r: float) -> complex:
        z = r * direction
        return (expr.eval(z) - limit) / (z - direction)

    _probe_divergence([quotient(r) for r in _radii(M_FIRST, 14)], "difference quotients", angle)
    _probe_divergence([expr.deriv(r * direction) for r in _radii(M_FIRST, 14)],
                      "radial derivatives", angle)

    # cancellation floor: f(r) - limit loses ~eps/(1-r) relative accuracy
    q_floors = [EPS * 3.0 * 2.0**m for m in range(M_FIRST, M_LAST + 1)]
    q_est, q_res, q_used = extrapolate_geometric(
        (quotient(r) for r in _radii()), q_floors
    )
    d_est, d_res, d_used = extrapolate_geometric(
        (expr.deriv(r * direction) for r in _radii())
    )

    gap = abs(q_est - d_est)
    tol = 10.0 * max(q_res, d_res, SETTLE_TOL)
    flags = () if gap <= tol else ("disagreement",)
    if d_res <= q_res:
        value, res, used = d_est, d_res, d_used
    else:
        value, res, used = q_est, q_res, q_used
    return AngularEstimate(value, max(res, gap if flags else res), used, flags)


def julia_quotient_check(
    expr: MapExpr, at: CirclePoint | float, beta: float, sample: complex
) -> float:
    """Slack in the boundary Schwarz inequality at a fixed boundary point.

    For a self-map fixing eta = e^{i at} with angular derivative beta, every
    z in the disk satisfies
        |eta - f(z)|^2 / (1 - |f(z)|^2) <= beta * |eta - z|^2 / (1 - |z|^2).
    Returns RHS - LHS; admissible maps give nonnegative slack, automorphisms
    give zero.
    """
    angle = at.angle if isinstance(at, CirclePoint) else float(at)
    eta = cmath.exp(1j * angle)
    z = complex(sample)
    fz = expr.eval(z)
    lhs = abs(eta - fz) ** 2 / (1.0 - abs(fz) ** 2)
    rhs = beta * abs(eta - z) ** 2 / (1.0 - abs(z) ** 2)
    return rhs - lhs
