"""Exact algebra of the building-block self-maps of the unit disk.

Three primitive map kinds — normalized Moebius maps, general disk
automorphisms, and radial-slit (Pick) maps — plus formal inverses and
compositions.  Every map evaluates exactly, differentiates exactly by the
chain rule, and inverts pointwise, so numerical audits always have an
analytic side to compare against.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

from .errors import DomainError, RangeError

_DISK_TOL = 1e-12

TWO_PI = 2.0 * math.pi


def _require_closed_disk(z: complex) -> complex:
    z = complex(z)
    if abs(z) > 1.0 + _DISK_TOL:
        raise DomainError(f"point {z} lies outside the closed unit disk")
    return z


def _require_open_disk(z: complex) -> complex:
    z = complex(z)
    if abs(z) >= 1.0 - _DISK_TOL:
        raise DomainError(f"point {z} must lie strictly inside the unit disk")
    return z


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk."""

    value: complex

    def __post_init__(self):
        _require_open_disk(self.value)

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class CirclePoint:
    """A unit-circle point e^{i angle}, angle normalized to [0, 2pi)."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle) % TWO_PI)

    @property
    def value(self) -> complex:
        return cmath.exp(1j * self.angle)

    def __complex__(self) -> complex:
        return self.value


def koebe(z: complex) -> complex:
    """k(z) = z/(1-z)^2, univalent on the disk onto C minus (-inf, -1/4]."""
    return z / (1.0 - z) ** 2


def koebe_deriv(z: complex) -> complex:
    return (1.0 + z) / (1.0 - z) ** 3


def _koebe_inverse_in_disk(t: complex) -> complex:
    """Solve k(w) = t for the unique root in the closed disk.

    The quadratic t*w^2 - (2t+1)*w + t = 0 has roots w and 1/w; exactly one
    lies in the open disk unless t is real <= -1/4, in which case both sit on
    the unit circle and there is no interior preimage.
    """
    if t == 0:
        return 0j
    disc = cmath.sqrt(4.0 * t + 1.0)
    r1 = ((2.0 * t + 1.0) + disc) / (2.0 * t)
    r2 = ((2.0 * t + 1.0) - disc) / (2.0 * t)
    w = r1 if abs(r1) <= abs(r2) else r2
    if abs(w) >= 1.0 + 1e-9:
        raise RangeError(f"no preimage in the disk for Koebe value {t}")
    return w


class MapExpr:
    """Immutable composition tree of disk self-maps.

    Subclasses implement `eval`, `deriv` and `inverse_eval` at single complex
    points.  Values are hashable and safe to share across threads.
    """

    def eval(self, z: complex) -> complex:
        raise NotImplementedError

    def deriv(self, z: complex) -> complex:
        raise NotImplementedError

    def inverse_eval(self, w: complex) -> complex:
        raise NotImplementedError

    def __call__(self, z: complex) -> complex:
        return self.eval(z)

    def then(self, other: "MapExpr") -> "Compose":
        """Composition applying `self` first, then `other`."""
        mine = self.steps if isinstance(self, Compose) else (self,)
        theirs = other.steps if isinstance(other, Compose) else (other,)
        return Compose(mine + theirs)

    def inverse(self) -> "MapExpr":
        return self.inner if isinstance(self, Inverse) else Inverse(self)

    def to_json_obj(self):
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def _cnum(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _from_cnum(obj) -> complex:
    return complex(obj["re"], obj["im"])


@dataclass(frozen=True)
class Moebius(MapExpr):
    """Normalized Moebius map sending `base` to 0 and fixing 1.

    B(w) = ((1 - conj(base))/(1 - base)) * (w - base)/(1 - w*conj(base)).
    The leading unimodular factor pins B(1) = 1.
    """

    base: complex

    def __post_init__(self):
        object.__setattr__(self, "base", _require_open_disk(self.base))

    @property
    def _phase(self) -> complex:
        return (1.0 - self.base.conjugate()) / (1.0 - self.base) if self.base != 0 else 1.0 + 0j

    def eval(self, z: complex) -> complex:
        z = _require_closed_disk(z)
        return self._phase * (z - self.base) / (1.0 - z * self.base.conjugate())

    def deriv(self, z: complex) -> complex:
        z = _require_closed_disk(z)
        return self._phase * (1.0 - abs(self.base) ** 2) / (1.0 - z * self.base.conjugate()) ** 2

    def inverse_eval(self, w: complex) -> complex:
        w = _require_closed_disk(w)
        u = w / self._phase
        return (u + self.base) / (1.0 + u * self.base.conjugate())

    def to_json_obj(self):
        return {"kind": "moebius", "base": _cnum(self.base)}


@dataclass(frozen=True)
class Automorphism(MapExpr):
    """General disk automorphism T(z) = e^{i rotation} (z - a)/(1 - z conj(a))."""

    a: complex = 0j
    rotation: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", _require_open_disk(self.a))
        object.__setattr__(self, "rotation", float(self.rotation))

    @property
    def _phase(self) -> complex:
        return cmath.exp(1j * self.rotation)

    def eval(self, z: complex) -> complex:
        z = _require_closed_disk(z)
        return self._phase * (z - self.a) / (1.0 - z * self.a.conjugate())

    def deriv(self, z: complex) -> complex:
        z = _require_closed_disk(z)
        return self._phase * (1.0 - abs(self.a) ** 2) / (1.0 - z * self.a.conjugate()) ** 2

    def inverse_eval(self, w: complex) -> complex:
        w = _require_closed_disk(w)
        u = w / self._phase
        return (u + self.a) / (1.0 + u * self.a.conjugate())

    def to_json_obj(self):
        return {"kind": "automorphism", "a": _cnum(self.a), "rotation": float(self.rotation)}


@dataclass(frozen=True)
class Pick(MapExpr):
    """Radial-slit map fixing 0 with derivative alpha in (0, 1].

    Conjugate of w -> alpha*w under the Koebe map: k(P(z)) = alpha*k(z).
    Maps the disk onto the disk minus the radial slit
    (-1, -alpha/(1+sqrt(1-alpha))^2].  Evaluation goes through the Koebe
    quadratic transfer with in-disk root selection, which is branch-safe
    everywhere in the closed disk; the printed square-root formula is kept
    only as a cross-check on the positive radius (see tests).
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not 0.0 < a <= 1.0:
            raise DomainError(f"pick parameter must be in (0, 1], got {a}")
        object.__setattr__(self, "alpha", a)

    def eval(self, z: complex) -> complex:
        z = _require_closed_disk(z)
        if abs(1.0 - z) < 1e-14:
            return 1.0 + 0j  # continuous extension at the anchor
        return _koebe_inverse_in_disk(self.alpha * koebe(z))

    def deriv(self, z: complex) -> complex:
        z = _require_closed_disk(z)
        if z == 0:
            return complex(self.alpha)
        if abs(1.0 - z) < 1e-14:
            # continuous extension at the anchor: the boundary derivative
            return complex(1.0 / math.sqrt(self.alpha))
        w = self.eval(z)
        return self.alpha * koebe_deriv(z) / koebe_deriv(w)

    def inverse_eval(self, w: complex) -> complex:
        w = _require_closed_disk(w)
        if abs(1.0 - w) < 1e-14:
            return 1.0 + 0j
        z = _koebe_inverse_in_disk(koebe(w) / self.alpha)
        if abs(w) < 1.0 - 1e-10 and abs(z) >= 1.0 - 1e-10:
            # interior target whose only candidate preimage sits on the circle:
            # w lies on the omitted radial slit
            raise RangeError(f"{w} is not attained (omitted slit)")
        return z

    @property
    def slit_tip(self) -> float:
        return -self.alpha / (1.0 + math.sqrt(1.0 - self.alpha)) ** 2

    def to_json_obj(self):
        return {"kind": "pick", "alpha": float(self.alpha)}


@dataclass(frozen=True)
class Inverse(MapExpr):
    """Formal inverse of a univalent node; evaluation solves the forward map."""

    inner: MapExpr

    def eval(self, z: complex) -> complex:
        return self.inner.inverse_eval(z)

    def deriv(self, z: complex) -> complex:
        pre = self.inner.inverse_eval(z)
        d = self.inner.deriv(pre)
        if d == 0:
            raise DomainError("inverse derivative at a critical value")
        return 1.0 / d

    def inverse_eval(self, w: complex) -> complex:
        return self.inner.eval(w)

    def to_json_obj(self):
        return {"kind": "inverse", "of": self.inner.to_json_obj()}


@dataclass(frozen=True)
class Compose(MapExpr):
    """Pipeline composition: steps[0] is applied first."""

    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def eval(self, z: complex) -> complex:
        for step in self.steps:
            z = step.eval(z)
        return z

    def deriv(self, z: complex) -> complex:
        d = 1.0 + 0j
        for step in self.steps:
            d *= step.deriv(z)
            z = step.eval(z)
        return d

    def inverse_eval(self, w: complex) -> complex:
        for step in reversed(self.steps):
            w = step.inverse_eval(w)
        return w

    def to_json_obj(self):
        return [step.to_json_obj() for step in self.steps]


IDENTITY = Automorphism(0j, 0.0)


def compose(*steps: MapExpr) -> MapExpr:
    """Build a pipeline; single maps pass through unchanged."""
    flat = []
    for s in steps:
        flat.extend(s.steps if isinstance(s, Compose) else (s,))
    if len(flat) == 1:
        return flat[0]
    return Compose(tuple(flat))


def rotation(angle: float) -> Automorphism:
    return Automorphism(0j, angle)


def b_normalized(z: complex) -> Moebius:
    """The Moebius map with B(z) = 0 and B(1) = 1."""
    return Moebius(complex(z))


def automorphism_fixing(a: complex, anchor_angle: float) -> Automorphism:
    """Automorphism with Moebius parameter `a` fixing the boundary point e^{i anchor_angle}.

    The rotation is solved from the fixed-point condition
    e^{i rot} (eta - a)/(1 - eta conj(a)) = eta.
    """
    a = _require_open_disk(a)
    eta = cmath.exp(1j * anchor_angle)
    lam = eta * (1.0 - eta * a.conjugate()) / (eta - a)
    return Automorphism(a, cmath.phase(lam))


def boundary_fixed_derivative(auto: Automorphism, anchor_angle: float) -> float:
    """Closed-form derivative of an automorphism at a boundary point it fixes.

    Equals (1 - |a|^2)/|eta - a|^2, always real and positive.
    """
    eta = cmath.exp(1j * anchor_angle)
    return (1.0 - abs(auto.a) ** 2) / abs(eta - auto.a) ** 2


# --- the spec'd operation surface -------------------------------------------

def map_eval(expr: MapExpr, point: complex) -> complex:
    return expr.eval(complex(point))


def map_deriv(expr: MapExpr, point: complex) -> complex:
    return expr.deriv(complex(point))


def map_inverse_eval(expr: MapExpr, image: complex) -> complex:
    return expr.inverse_eval(complex(image))


# --- JSON (de)serialization ---------------------------------------------------

def expr_from_json_obj(obj) -> MapExpr:
    if isinstance(obj, list):
        return compose(*(expr_from_json_obj(o) for o in obj))
    kind = obj["kind"]
    if kind == "moebius":
        return Moebius(_from_cnum(obj["base"]))
    if kind == "automorphism":
        return Automorphism(_from_cnum(obj["a"]), float(obj["rotation"]))
    if kind == "pick":
        return Pick(float(obj["alpha"]))
    if kind == "inverse":
        return Inverse(expr_from_json_obj(obj["of"]))
    raise ValueError(f"unknown map node kind {kind!r}")


def expr_from_json(text: str) -> MapExpr:
    return expr_from_json_obj(json.loads(text))
