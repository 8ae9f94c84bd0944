"""Extremal-partition configurations on the punctured disk.

Given boundary anchors e^{i theta_j} and a height vector alpha on the
simplex, the trajectory structure that minimizes the weighted sum of
reduced digon moduli is governed by the quadratic differential

    Q(z) dz^2 = A * prod_k (z - e^{i delta_k})^2 / (z^2 prod_j (z - e^{i theta_j})^2) dz^2,

with A = 1/(4 pi^2).  The zero angles delta_k satisfy a residue system that
collapses, through a partial-fraction identity, to a single monic polynomial

    P(z) = prod_k (z - e^{i theta_k}) + 2 sum_k alpha_k e^{i theta_k} prod_{l != k} (z - e^{i theta_l})

whose roots are exactly the e^{i delta_k}.  This module solves that
polynomial (companion matrix, then Newton polish on the circle), labels the
roots by cyclic interlacing, evaluates Q, and builds the strip maps g_j of
the extremal digons with continuous branch tracking.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, LabelingError, PathError

TWO_PI = 2.0 * math.pi
COEFF_A = 1.0 / (4.0 * math.pi**2)


@dataclass(frozen=True)
class BoundaryAnchorSet:
    """Strictly increasing anchor angles, optionally with boundary derivatives."""

    angles: tuple
    betas: tuple | None = None

    def __post_init__(self):
        angles = tuple(float(t) for t in self.angles)
        if len(angles) < 1:
            raise ConfigurationError("need at least one anchor")
        if any(not 0.0 <= t < TWO_PI for t in angles):
            raise ConfigurationError("anchor angles must lie in [0, 2pi)")
        if any(lo >= hi for lo, hi in zip(angles[:-1], angles[1:])):
            raise ConfigurationError("anchor angles must be strictly increasing")
        object.__setattr__(self, "angles", angles)
        if self.betas is not None:
            betas = tuple(float(b) for b in self.betas)
            if len(betas) != len(angles):
                raise ConfigurationError("one beta per anchor required")
            if any(b <= 0 for b in betas):
                raise ConfigurationError("boundary derivatives must be positive")
            object.__setattr__(self, "betas", betas)

    def __len__(self):
        return len(self.angles)

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.angles))


@dataclass(frozen=True)
class HeightVector:
    """Nonnegative weights summing to 1."""

    alphas: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if any(a < 0 for a in alphas):
            raise ConfigurationError("heights must be nonnegative")
        if abs(sum(alphas) - 1.0) > 1e-12:
            raise ConfigurationError(f"heights must sum to 1, got {sum(alphas)!r}")
        object.__setattr__(self, "alphas", alphas)

    def __len__(self):
        return len(self.alphas)


@dataclass(frozen=True)
class ExtremalConfig:
    anchors: BoundaryAnchorSet
    heights: HeightVector
    deltas: tuple
    coefficient_A: float = COEFF_A

    @property
    def thetas(self) -> tuple:
        return self.anchors.angles

    @property
    def alphas(self) -> tuple:
        return self.heights.alphas

    @property
    def n(self) -> int:
        return len(self.deltas)

    @property
    def zeros(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.deltas))

    def to_json_obj(self) -> dict:
        return {
            "theta": list(self.thetas),
            "alpha": list(self.alphas),
            "delta": list(self.deltas),
            "A": self.coefficient_A,
            "residuals": [float(r) for r in residue_check(self)],
        }


def config_from_json_obj(obj) -> ExtremalConfig:
    return ExtremalConfig(
        BoundaryAnchorSet(tuple(obj["theta"])),
        HeightVector(tuple(obj["alpha"])),
        tuple(obj["delta"]),
    )


def _zero_polynomial(thetas, alphas) -> np.ndarray:
    """Monic coefficients of P(z) whose roots are the differential's circle zeros."""
    taus = np.exp(1j * np.asarray(thetas))
    coeffs = np.poly(taus)
    for k, (a, tau) in enumerate(zip(alphas, taus)):
        others = np.atleast_1d(np.poly(np.delete(taus, k)))
        coeffs = coeffs + np.concatenate([[0.0], 2.0 * a * tau * others])
    return coeffs


def _polish_complex(coeffs, roots, sweeps=3):
    dcoeffs = np.polyder(coeffs)
    for _ in range(sweeps):
        vals = np.polyval(coeffs, roots)
        dvals = np.polyval(dcoeffs, roots)
        roots = roots - vals / dvals
    return roots


def _polish_on_circle(coeffs, angles, sweeps=3):
    """Newton in the circle parameter t for roots known to satisfy |root| = 1."""
    dcoeffs = np.polyder(coeffs)
    for _ in range(sweeps):
        pts = np.exp(1j * angles)
        step = np.polyval(coeffs, pts) / (1j * pts * np.polyval(dcoeffs, pts))
        angles = angles - step.real
    return angles % TWO_PI


def cyclic_gap(lo: float, hi: float) -> float:
    """Arc length from lo to hi going counterclockwise, in [0, 2pi)."""
    return (hi - lo) % TWO_PI


def solve_deltas(anchors: BoundaryAnchorSet, heights: HeightVector) -> ExtremalConfig:
    """Solve for the zero angles delta_k and assemble the configuration.

    Anchors with height exactly zero are dropped (their digons degenerate
    and contribute nothing); the polynomial degree falls accordingly and
    the returned configuration covers the reduced anchor set.

    Raises ConfigurationError when a polynomial root strays from the unit
    circle by more than 1e-6 or the roots fail to interlace the anchors.
    """
    if len(anchors) != len(heights):
        raise ConfigurationError("anchor and height counts differ")
    keep = [k for k, a in enumerate(heights.alphas) if a > 0.0]
    if not keep:
        raise ConfigurationError("all heights are zero")
    if len(keep) < len(heights):
        anchors = BoundaryAnchorSet(
            tuple(anchors.angles[k] for k in keep),
            None if anchors.betas is None else tuple(anchors.betas[k] for k in keep),
        )
        heights = HeightVector(tuple(heights.alphas[k] for k in keep))

    thetas = np.asarray(anchors.angles)
    alphas = np.asarray(heights.alphas)
    n = len(thetas)

    coeffs = _zero_polynomial(thetas, alphas)
    roots = np.roots(coeffs)
    roots = _polish_complex(coeffs, roots)
    off = np.max(np.abs(np.abs(roots) - 1.0))
    if off > 1e-6:
        raise ConfigurationError(f"root strayed {off:.3e} from the unit circle")

    # label: exactly one zero on each cyclic arc [theta_k, theta_{k+1})
    root_angles = np.sort(np.angle(roots) % TWO_PI)
    deltas = np.full(n, np.nan)
    for d in root_angles:
        rel = (d - thetas) % TWO_PI
        k = int(np.argmin(rel))  # arc whose left endpoint is nearest behind d
        if n > 1 and not np.isnan(deltas[k]):
            raise LabelingError("zeros do not interlace the anchors")
        deltas[k] = thetas[k] + rel[k]
    if np.any(np.isnan(deltas)):
        raise LabelingError("an anchor arc received no zero")

    deltas = _polish_on_circle(coeffs, np.asarray(deltas) % TWO_PI)
    # report each delta as theta_k + cyclic gap so the labeling stays explicit;
    # a zero polished to fractionally below its anchor is a degenerate gap of 0
    gaps = [cyclic_gap(thetas[k], deltas[k]) for k in range(n)]
    gaps = [0.0 if g > TWO_PI - 1e-9 else g for g in gaps]
    deltas = tuple(thetas[k] + gaps[k] for k in range(n))

    config = ExtremalConfig(anchors, heights, deltas)
    _verify(config)
    return config


def _verify(config: ExtremalConfig):
    gaps = sum(d - t for d, t in zip(config.deltas, config.thetas))
    if abs(gaps - math.pi) > 1e-10:
        raise ConfigurationError(f"zero-anchor gaps sum to {gaps}, expected pi")
    res = residue_check(config)
    if max(res) > 1e-9:
        raise ConfigurationError(f"residue system residual {max(res):.3e} too large")


def residue_check(config: ExtremalConfig):
    """Per-anchor residuals |2 alpha_j - R_j| of the residue system.

    R_j = prod_k (tau_j - e^{i delta_k}) / (tau_j prod_{k != j} (tau_j - tau_k))
    must be real, positive, and equal to 2 alpha_j.
    """
    taus = config.anchors.points
    zeros = config.zeros
    out = []
    for j, tau in enumerate(taus):
        num = np.prod(tau - zeros)
        den = tau * np.prod(tau - np.delete(taus, j))
        out.append(abs(num / den - 2.0 * config.alphas[j]))
    return out


def q_eval(config: ExtremalConfig, point: complex) -> complex:
    """Pointwise value of the quadratic differential's coefficient Q."""
    z = complex(point)
    taus = config.anchors.points
    if abs(z) < 1e-13 or np.min(np.abs(z - taus)) < 1e-13:
        raise DomainError(f"{z} is a pole of the differential")
    num = np.prod(z - config.zeros) ** 2
    den = z**2 * np.prod(z - taus) ** 2
    return complex(config.coefficient_A * num / den)


def circle_trajectory_value(config: ExtremalConfig, t: float) -> float:
    """-e^{2it} Q(e^{it}), positive when the circle is a trajectory arc."""
    z = cmath.exp(1j * t)
    return (-(z**2) * q_eval(config, z)).real


# --- strip maps ---------------------------------------------------------------


@dataclass(frozen=True)
class StripMap:
    """The conformal map g_j of the j-th extremal digon onto C minus [0, inf).

    g_j(z) = e^{i kappa} * z^{1/alpha_j} * prod_k (z - e^{i theta_k})^(-2 alpha_k / alpha_j),

    branches tracked continuously from a base point inside the digon; kappa
    rotates the digon's circle arc onto the positive real axis.
    """

    config: ExtremalConfig
    index: int
    kappa: float


def _tracked_log(config: ExtremalConfig, j: int, path) -> complex:
    """Continuously tracked value of log of the strip-map product along `path`.

    Each factor's log is unwrapped separately; steps are subdivided until no
    hop exceeds half the distance to the factor's singularity, which keeps
    every argument increment well under pi.
    """
    alphas = config.alphas
    taus = config.anchors.points
    e0 = 1.0 / alphas[j]
    eks = [-2.0 * a / alphas[j] for a in alphas]

    z0 = path[0]
    logs = [cmath.log(z0)] + [cmath.log(z0 - tau) for tau in taus]

    def advance(z_from, z_to):
        nonlocal logs
        stack = [(z_from, z_to)]
        while stack:
            a, b = stack.pop()
            centers = [0j] + list(taus)
            dmin = min(abs(a - c) for c in centers)
            if dmin < 1e-12:
                raise PathError(f"branch-tracking path touched a vertex near {a}")
            if abs(b - a) > 0.5 * dmin:
                mid = 0.5 * (a + b)
                stack.append((mid, b))
                stack.append((a, mid))
                continue
            new_logs = []
            for c, prev in zip(centers, logs):
                w = b - c
                if abs(w) < 1e-300:
                    raise PathError(f"branch-tracking path touched a vertex at {b}")
                principal = cmath.log(w)
                k = round((prev.imag - principal.imag) / TWO_PI)
                new_logs.append(principal + 1j * TWO_PI * k)
            logs = new_logs

    for a, b in zip(path[:-1], path[1:]):
        advance(a, b)
    return e0 * logs[0] + sum(e * lg for e, lg in zip(eks, logs[1:]))


def _path_to(config: ExtremalConfig, j: int, z: complex):
    """Base point on the j-th radius, arc at radius 1/2, then radial to z.

    The arc sweeps in the direction the digon itself reaches the target's
    angle: counterclockwise toward the zero at delta_j, clockwise toward the
    zero behind theta_j.  Taking the shortest arc instead could wind the
    wrong way around the origin and land on a different branch.
    """
    theta_j = config.thetas[j]
    base = 0.5 * cmath.exp(1j * theta_j)
    r, phi = abs(z), cmath.phase(z)
    if r < 1e-12:
        raise PathError("the origin is a vertex of every digon")
    off_ccw = cyclic_gap(theta_j, phi)
    if off_ccw <= cyclic_gap(theta_j, config.deltas[j]) + 1e-12:
        sweep = off_ccw
    else:
        sweep = -cyclic_gap(phi, theta_j)
    n_arc = max(2, int(abs(sweep) / 0.1) + 1)
    arc = [0.5 * cmath.exp(1j * (theta_j + sweep * i / n_arc)) for i in range(n_arc + 1)]
    n_rad = max(2, int(abs(r - 0.5) / 0.05) + 1)
    radial = [
        (0.5 + (r - 0.5) * i / n_rad) * cmath.exp(1j * phi) for i in range(1, n_rad + 1)
    ]
    return [base] + arc[1:] + radial


def make_strip_map(config: ExtremalConfig, j: int) -> StripMap:
    """Construct g_j, solving the rotation from an interior arc sample."""
    if not 0 <= j < config.n:
        raise ConfigurationError(f"digon index {j} out of range")
    # arc of digon j runs from delta_{j-1} to delta_j and contains theta_j;
    # probe halfway between theta_j and delta_j (never a vertex)
    t_probe = config.thetas[j] + 0.5 * cyclic_gap(config.thetas[j], config.deltas[j] % TWO_PI)
    probe = cmath.exp(1j * t_probe)
    raw = _tracked_log(config, j, _path_to(config, j, probe))
    kappa = (-raw.imag) % TWO_PI
    return StripMap(config, j, kappa)


def strip_map_eval(strip: StripMap, point: complex) -> complex:
    """Evaluate g_j at a point of the closed digon (vertices excluded)."""
    lg = _tracked_log(strip.config, strip.index, _path_to(strip.config, strip.index, complex(point)))
    return cmath.exp(1j * strip.kappa + lg)


def strip_map_dlog(strip: StripMap, point: complex) -> complex:
    """Closed-form logarithmic derivative g_j'/g_j (branch-free)."""
    z = complex(point)
    cfg = strip.config
    aj = cfg.alphas[strip.index]
    s = 1.0 / z
    for a, tau in zip(cfg.alphas, cfg.anchors.points):
        s -= 2.0 * a / (z - tau)
    return s / aj
