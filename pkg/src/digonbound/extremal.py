"""Extremal functions: closed form for one anchor, trajectory ODE for several.

The equality map for the single-anchor bound is the explicit composition
B_w^{-1} . P_alpha . B_z.  For n anchors the equality map w = phi*(zeta)
solves

    dw/dzeta = w * prod_j (zeta - e^{i delta_j}) * prod_k (w - e^{i theta_k})
             / (zeta * prod_j (w - e^{i delta_j}) * prod_k (zeta - e^{i theta_k})),

which transports the quadratic differential exactly: Q(zeta) = Q(w) (dw/dzeta)^2.
Each ray from the origin is integrated independently with an adaptive
embedded Dormand-Prince pair, seeded near 0 by the two-term series expansion
of the solution with slope c.  The boundary derivatives beta_j are outputs,
recovered by extrapolating difference quotients along the anchor rays; the
equality audit then checks c = prod beta_j^(-2 alpha_j^2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import bounds, maps
from .angular import AngularEstimate, angular_derivative, extrapolate_geometric
from .errors import DomainError, InsufficientDataError, IntegrationError
from .partition import ExtremalConfig

TWO_PI = 2.0 * math.pi

SERIES_RADIUS = 1e-3
LOCAL_TOL = 1e-10
STEP_FLOOR = 1e-12
CHECKPOINT_M_FIRST = 3
CHECKPOINT_M_LAST = 16

# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (
    5179 / 57600,
    0.0,
    7571 / 16695,
    393 / 640,
    -92097 / 339200,
    187 / 2100,
    1 / 40,
)


def extremal_single(z: complex, w: complex, beta: float) -> maps.MapExpr:
    """Closed-form equality map for the single-anchor bound.

    Returns B_w^{-1} . P_alpha . B_z with alpha solved from the anchor data,
    then verifies its own contract: phi(z) = w to 1e-12, measured boundary
    derivative at 1 equal to beta to 1e-6, and |phi'(z)| equal to the
    derived-consistent bound to 1e-9.
    """
    alpha = bounds.extremal_alpha(z, w, beta)
    phi = maps.compose(
        maps.b_normalized(z), maps.Pick(alpha), maps.Inverse(maps.b_normalized(w))
    )
    if abs(phi.eval(z) - w) > 1e-12:
        raise IntegrationError("constructed map misses its interior datum")
    measured = angular_derivative(phi, 0.0, limit=1.0 + 0j)
    if abs(measured.value - beta) > 1e-6 * max(1.0, beta):
        raise IntegrationError(
            f"constructed map has boundary derivative {measured.value}, wanted {beta}"
        )
    target = bounds.bound_single(z, w, beta, bounds.Variant.DERIVED_CONSISTENT)
    if abs(abs(phi.deriv(z)) - target) > 1e-9 * max(1.0, target):
        raise IntegrationError("constructed map does not attain the bound")
    return phi


@dataclass(frozen=True)
class RaySamples:
    """Accepted integration samples along one ray from the origin."""

    angle: float
    radii: np.ndarray
    ws: np.ndarray
    steps: np.ndarray
    qd_residuals: np.ndarray
    checkpoint_radii: tuple
    checkpoint_ws: tuple
    truncated: bool = False

    @property
    def zetas(self) -> np.ndarray:
        return self.radii * cmath.exp(1j * self.angle)


@dataclass(frozen=True)
class SampledMap:
    """An extremal map realized as per-ray trajectory samples."""

    rays: tuple
    origin_slope: float
    config: ExtremalConfig

    def ray_toward(self, angle: float) -> RaySamples:
        for ray in self.rays:
            if abs((ray.angle - angle + math.pi) % TWO_PI - math.pi) < 1e-12:
                return ray
        raise InsufficientDataError(f"no integrated ray toward angle {angle}")


def _ode_field(config: ExtremalConfig):
    zeros = config.zeros
    taus = config.anchors.points

    def f(zeta: complex, w: complex) -> complex:
        num = w * np.prod(zeta - zeros) * np.prod(w - taus)
        den = zeta * np.prod(w - zeros) * np.prod(zeta - taus)
        return complex(num / den)

    return f


def _series_seed(config: ExtremalConfig, c: float, zeta: complex) -> complex:
    """Two-term series w = c*zeta*(1 + w1*zeta + w2*zeta^2) at the origin.

    The first-order coefficient is forced by the field's expansion; the
    second keeps the seed's relative error at O(|zeta|^3), which the
    integration tolerance budget needs (relative errors persist along the
    flow, so an O(r0^2) seed would cap global accuracy at ~1e-6).
    """
    s1 = sum(a * cmath.exp(-1j * t) for a, t in zip(config.alphas, config.thetas))
    s2 = sum(a * cmath.exp(-2j * t) for a, t in zip(config.alphas, config.thetas))
    w1 = 2.0 * s1 * (1.0 - c)
    w2 = 3.0 * s1**2 * (1.0 - c) ** 2 - 2.0 * c * s1**2 * (1.0 - c) + (s2 - s1**2) * (
        1.0 - c**2
    )
    return c * zeta * (1.0 + w1 * zeta + w2 * zeta**2)


def _qd_residual(config: ExtremalConfig, zeta: complex, w: complex, dwdz: complex) -> float:
    from .partition import q_eval

    qz = q_eval(config, zeta)
    qw = q_eval(config, w)
    return abs(qz - qw * dwdz * dwdz) / max(abs(qz), 1e-300)


def _integrate_ray(config, c, angle, r_max, checkpoints, local_tol):
    field = _ode_field(config)
    phase = cmath.exp(1j * angle)

    def f(r: float, w: complex) -> complex:
        return phase * field(r * phase, w)

    r = SERIES_RADIUS
    w = _series_seed(config, c, r * phase)
    radii, ws, steps = [r], [w], [0.0]
    resids = [_qd_residual(config, r * phase, w, field(r * phase, w))]
    cp_radii, cp_ws = [], []
    pending = [rc for rc in checkpoints if rc > r]
    h = 1e-3
    truncated = False
    k_last = f(r, w)  # FSAL
    while r < r_max - 1e-12:
        target = pending[0] if pending else r_max
        clamped = target - r < h
        h_eff = min(h, target - r)
        ks = [k_last]
        for i in range(1, 7):
            wi = w + h_eff * sum(a * k for a, k in zip(_DP_A[i], ks))
            ks.append(f(r + _DP_C[i] * h_eff, wi))
        w5 = w + h_eff * sum(b * k for b, k in zip(_DP_B5, ks))
        w4 = w + h_eff * sum(b * k for b, k in zip(_DP_B4, ks))
        err = abs(w5 - w4)
        tol = local_tol * (1.0 + abs(w))
        accepted = err <= tol
        if accepted:
            r += h_eff
            w = w5
            k_last = ks[-1]  # stage 7 sits at (r+h, w5)
            if abs(w) >= 1.0 + 1e-9:
                raise IntegrationError(
                    f"trajectory left the disk at r={r:.6f} on ray {angle:.4f}"
                )
            radii.append(r)
            ws.append(w)
            steps.append(h_eff)
            resids.append(_qd_residual(config, r * phase, w, field(r * phase, w)))
            while pending and r >= pending[0] - 1e-12:
                cp_radii.append(pending.pop(0))
                cp_ws.append(w)
        factor = min(5.0, max(0.2, 0.9 * (tol / max(err, 1e-300)) ** 0.2))
        if accepted and clamped:
            h = max(h, h_eff * factor)  # a target-clamped step says nothing new
        else:
            h = h_eff * factor
        if h < STEP_FLOOR:
            truncated = True  # step collapse, typically near a slit tip
            break
    return RaySamples(
        angle,
        np.asarray(radii),
        np.asarray(ws),
        np.asarray(steps),
        np.asarray(resids),
        tuple(cp_radii),
        tuple(cp_ws),
        truncated,
    )


def integrate_extremal_ode(
    config: ExtremalConfig,
    c: float,
    ray_angles=None,
    r_max: float = 0.999,
    local_tol: float = LOCAL_TOL,
    extra_checkpoints=(),
) -> SampledMap:
    """Integrate the trajectory ODE with origin slope c along the given rays.

    Defaults to the anchor rays plus eight uniformly spaced ones.  Rays are
    independent; each starts from the common series seed at |zeta| = 1e-3.
    Checkpoints -- the geometric radii 1 - 2^-m plus any `extra_checkpoints`
    -- are hit exactly and recorded separately for extrapolation work.
    """
    if not 0.0 < c <= 1.0:
        raise DomainError("origin slope must lie in (0, 1]")
    if not SERIES_RADIUS < r_max < 1.0:
        raise DomainError("r_max must lie in (series radius, 1)")
    if ray_angles is None:
        ray_angles = sorted(
            set(config.thetas) | {k * TWO_PI / 8 for k in range(8)}
        )
    checkpoints = sorted(
        {
            1.0 - 2.0 ** (-m)
            for m in range(CHECKPOINT_M_FIRST, CHECKPOINT_M_LAST + 1)
        }
        | set(extra_checkpoints)
    )
    checkpoints = [rc for rc in checkpoints if rc <= r_max]
    rays = tuple(
        _integrate_ray(config, c, a, r_max, checkpoints, local_tol) for a in ray_angles
    )
    return SampledMap(rays, c, config)


def measure_beta(sampled: SampledMap, j: int) -> AngularEstimate:
    """Boundary derivative at the j-th anchor, extrapolated along its ray.

    Uses the checkpoint samples at radii 1 - 2^-m and Richardson
    extrapolation of the difference quotient (zeta_j - w)/(zeta_j - zeta).
    """
    theta = sampled.config.thetas[j]
    ray = sampled.ray_toward(theta)
    if ray.truncated or (ray.radii[-1] < 0.99):
        raise InsufficientDataError(
            f"ray toward anchor {j} only reaches r={ray.radii[-1]:.4f}"
        )
    anchor = cmath.exp(1j * theta)
    quots = [
        (anchor - w) / (anchor - r * anchor)
        for r, w in zip(ray.checkpoint_radii, ray.checkpoint_ws)
    ]
    if len(quots) < 3:
        raise InsufficientDataError("too few checkpoints for extrapolation")
    est, res, used = extrapolate_geometric(quots, settle_tol=1e-14)
    return AngularEstimate(est, res, used)


def equality_audit(sampled: SampledMap) -> dict:
    """Check the equality identity c = prod beta_j^(-2 alpha_j^2) on a sampled map."""
    cfg = sampled.config
    betas = [measure_beta(sampled, j).value.real for j in range(cfg.n)]
    product = math.exp(
        -2.0 * sum(a * a * math.log(b) for a, b in zip(cfg.alphas, betas))
    )
    return {
        "c": sampled.origin_slope,
        "measured_betas": betas,
        "bound_product": product,
        "residual": abs(sampled.origin_slope - product),
    }


def write_ray_csv(sampled: SampledMap, dirpath) -> list:
    """Write one CSV per ray (r, zeta, w, step, transport residual); returns paths."""
    from pathlib import Path

    from .jsonio import format_float

    out = Path(dirpath)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, ray in enumerate(sampled.rays):
        lines = ["r,zeta_re,zeta_im,w_re,w_im,step,qd_residual"]
        phase = cmath.exp(1j * ray.angle)
        for r, w, h, q in zip(ray.radii, ray.ws, ray.steps, ray.qd_residuals):
            zeta = r * phase
            lines.append(
                ",".join(
                    format_float(float(x))
                    for x in (r, zeta.real, zeta.imag, w.real, w.imag, h, q)
                )
            )
        path = out / f"ray_{k:03d}.csv"
        path.write_text("\n".join(lines) + "\n")
        paths.append(path)
    return paths


def slope_for_betas(config: ExtremalConfig, betas, refine: bool = False) -> float:
    """Origin slope realizing given target boundary derivatives, when one exists.

    The equality identity pins c = prod beta_j^(-2 alpha_j^2) directly; with
    `refine` the value is polished by bisection on the measured residual.
    For n >= 3 a single slope cannot realize arbitrary derivative tuples --
    the returned c matches the product, not each beta individually.
    """
    alphas = config.alphas
    c = math.exp(-2.0 * sum(a * a * math.log(b) for a, b in zip(alphas, betas)))
    if not refine:
        return c

    def residual(cc):
        sm = integrate_extremal_ode(config, cc, ray_angles=list(config.thetas))
        audit = equality_audit(sm)
        return audit["bound_product"] - c

    lo, hi = max(c - 0.05, 1e-6), min(c + 0.05, 1.0)
    flo, fhi = residual(lo), residual(hi)
    if flo * fhi > 0:
        return c
    for _ in range(20):
        mid = 0.5 * (lo + hi)
        fm = residual(mid)
        if flo * fm <= 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)
