"""Reduced moduli of digons and their conformal transfer rules.

A digon's reduced modulus changes under a conformal map f with finite
nonzero angular derivatives at the vertices by

    m(f(D), f(a), f(b)) = m(D, a, b) + log|f'(a)|/psi_a + log|f'(b)|/psi_b,

and under maps given by power expansions at the vertices by the analogous
rule with the leading coefficients.  Two closed-form families matter here:
the modulus of the extremal digon attached to the origin, and its transfer
to an arbitrary interior basepoint z.  For the latter the literature's
displayed formula disagrees with the mechanical application of the transfer
rule; both variants are exposed as first-class citizens and the bounds
module audits which one is operative.  Reduced moduli can be negative.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .partition import ExtremalConfig

TWO_PI = 2.0 * math.pi


class Variant(str, enum.Enum):
    """The two readings of the basepoint-transfer formulas."""

    AS_PRINTED = "as_printed"
    DERIVED_CONSISTENT = "derived_consistent"


@dataclass(frozen=True)
class DigonVertexSpec:
    """A digon vertex: its location and inner angle (2*pi*alpha interior, pi boundary)."""

    location: complex
    inner_angle: float

    def __post_init__(self):
        if not 0.0 < self.inner_angle <= TWO_PI:
            raise DomainError(f"inner angle must be in (0, 2pi], got {self.inner_angle}")


@dataclass(frozen=True)
class DigonModulus:
    """A reduced-modulus value tagged with its formula variant."""

    value: float
    variant: Variant = Variant.DERIVED_CONSISTENT
    vertices: tuple | None = None


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Leading power-expansion data of a map at the two digon vertices.

    c1 and d1 are the leading coefficients of (z - a)^(psi_a/phi_a) and
    (z - b)^(psi_b/phi_b) respectively; the exponent pairs record the
    source and image inner angles.
    """

    c1: complex
    d1: complex
    exponents_a: tuple = (TWO_PI, TWO_PI)
    exponents_b: tuple = (TWO_PI, TWO_PI)

    def __post_init__(self):
        if self.c1 == 0 or self.d1 == 0:
            raise DomainError("leading expansion coefficients must be nonzero")


def change_of_variable(m: DigonModulus, angles, derivs) -> DigonModulus:
    """Transfer a reduced modulus through a map with known vertex derivatives.

    `angles` are the image inner angles (psi_a, psi_b), `derivs` the moduli
    of the angular derivatives at the two vertices.
    """
    (psi_a, psi_b), (da, db) = angles, derivs
    if not (0.0 < da < math.inf and 0.0 < db < math.inf):
        raise DomainError("vertex derivatives must be finite and nonzero")
    value = m.value + math.log(da) / psi_a + math.log(db) / psi_b
    return DigonModulus(value, m.variant, m.vertices)


def change_of_variable_expansion(m: DigonModulus, image_angles, coeffs) -> DigonModulus:
    """Transfer via leading expansion coefficients at the vertices.

    `coeffs` is an ExpansionCoefficients value or a plain (c1, d1) pair.
    """
    (psi_a, psi_b) = image_angles
    if isinstance(coeffs, ExpansionCoefficients):
        c1, d1 = coeffs.c1, coeffs.d1
    else:
        c1, d1 = coeffs
    if c1 == 0 or d1 == 0:
        raise DomainError("leading expansion coefficients must be nonzero")
    value = m.value + math.log(abs(c1)) / psi_a + math.log(abs(d1)) / psi_b
    return DigonModulus(value, m.variant, m.vertices)


def origin_modulus(thetas, alphas, j: int) -> float:
    """Reduced modulus of the j-th extremal digon with interior vertex at 0.

    m = (1/(alpha_j pi)) * sum_{k != j} alpha_k log|e^{i theta_j} - e^{i theta_k}|.
    """
    tau_j = cmath.exp(1j * thetas[j])
    s = sum(
        alphas[k] * math.log(abs(tau_j - cmath.exp(1j * thetas[k])))
        for k in range(len(thetas))
        if k != j
    )
    return s / (alphas[j] * math.pi)


def reduced_modulus_origin(config: ExtremalConfig, j: int) -> float:
    return origin_modulus(config.thetas, config.alphas, j)


def _moebius_to_origin(z: complex):
    """The shift M(w) = (w - z)/(1 - w conj(z)) sending z to 0."""

    def m(w: complex) -> complex:
        return (w - z) / (1.0 - w * z.conjugate())

    return m


def reduced_modulus_general(
    config: ExtremalConfig, z: complex, j: int, variant: Variant
) -> float:
    """Reduced modulus of the j-th extremal digon with interior vertex at z.

    DERIVED_CONSISTENT routes the origin modulus of the Moebius-shifted
    anchors through the transfer rule with the derivatives of the inverse
    shift; AS_PRINTED evaluates the displayed closed form, which differs in
    the sign of the interior-vertex corrections.  Both are exact closed
    forms; neither is silently corrected.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("basepoint must lie inside the disk")
    variant = Variant(variant)
    alphas, thetas = config.alphas, config.thetas
    aj = alphas[j]
    zeta_j = cmath.exp(1j * thetas[j])
    mz = _moebius_to_origin(z)
    shifted = [mz(cmath.exp(1j * t)) for t in thetas]
    cross = sum(
        alphas[k] * math.log(abs(shifted[j] - shifted[k]))
        for k in range(len(thetas))
        if k != j
    )
    one_minus = 1.0 - abs(z) ** 2
    pin = abs(1.0 - zeta_j * z.conjugate()) ** 2
    if variant is Variant.DERIVED_CONSISTENT:
        # transfer with |(M^-1)'(0)| = 1-|z|^2 and |(M^-1)'(M(zeta_j))| = pin/(1-|z|^2)
        extra = 0.5 * math.log(one_minus) + aj * math.log(pin / one_minus)
    else:
        extra = (aj + 0.5) * math.log(one_minus) - aj * math.log(pin)
    return (cross + extra) / (aj * math.pi)


def general_modulus_via_transfer(config: ExtremalConfig, z: complex, j: int) -> float:
    """The DERIVED_CONSISTENT general modulus, computed by the explicit two-step route.

    Shift the anchors to the origin problem, take its closed-form modulus,
    and transfer back through the inverse Moebius map.  Must agree with
    reduced_modulus_general(..., DERIVED_CONSISTENT) to roundoff; the pair
    forms the two-route consistency audit.
    """
    z = complex(z)
    alphas, thetas = config.alphas, config.thetas
    mz = _moebius_to_origin(z)
    shifted_angles = [cmath.phase(mz(cmath.exp(1j * t))) % TWO_PI for t in thetas]
    base = DigonModulus(origin_modulus(shifted_angles, alphas, j))
    zeta_j = cmath.exp(1j * thetas[j])
    one_minus = 1.0 - abs(z) ** 2
    d_interior = one_minus
    d_boundary = abs(1.0 - zeta_j * z.conjugate()) ** 2 / one_minus
    out = change_of_variable(
        base, (TWO_PI * alphas[j], math.pi), (d_interior, d_boundary)
    )
    return out.value


def weighted_sum(alphas, moduli) -> float:
    """The partition objective: sum of alpha_j^2 * m_j."""
    alphas = list(alphas)
    moduli = list(moduli)
    if len(alphas) != len(moduli):
        raise ValueError("one modulus per digon required")
    return sum(a * a * m for a, m in zip(alphas, moduli))


def weighted_sum_at(config: ExtremalConfig, z: complex, variant: Variant) -> float:
    return weighted_sum(
        config.alphas,
        [
            reduced_modulus_general(config, z, j, variant)
            for j in range(len(config.alphas))
        ],
    )
