"""Generation of admissible test maps and verification of the bounds against them.

Admissibility is verified, not trusted: every generated map's anchors and
boundary derivatives are re-measured by radial extrapolation before its
bound is checked, so a generator bug surfaces as a rejection rather than a
fake violation.  The one deliberately inadmissible map -- the squaring map,
which fixes 1 with boundary derivative 2 yet has phi'(0) = 0 -- is
quarantined behind an explicit flag; the negative slack it produces is
reported as confirmation that dropping univalence kills the bound, never
as a counterexample.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds, extremal, maps
from .angular import angular_derivative, angular_limit, julia_quotient_check
from .errors import DomainError
from .moduli import Variant
from .partition import BoundaryAnchorSet, HeightVector, solve_deltas

VIOLATION_TOL = 1e-8
EQUALITY_TOL = 1e-4

FAMILY_KINDS = (
    "automorphism_fixing_anchors",
    "pick_conjugate",
    "ode_extremal",
    "composition",
    "nonunivalent_square",
)


class SquareMap:
    """The squaring map z -> z^2: not univalent, hence outside MapExpr.

    Fixes 1 with boundary derivative 2, but phi'(0) = 0.
    """

    def eval(self, z: complex) -> complex:
        return z * z

    def deriv(self, z: complex) -> complex:
        return 2.0 * z

    def __call__(self, z: complex) -> complex:
        return self.eval(z)


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    seed: int = 0
    count: int = 1
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")


@dataclass(frozen=True)
class GeneratedCase:
    label: str
    kind: str
    map_obj: object  # MapExpr, SquareMap, or extremal.SampledMap
    context: str  # "single" | "origin" | "general"
    anchor_angles: tuple
    z: complex | None = None
    heights: tuple | None = None
    quarantined: bool = False


@dataclass
class CheckResult:
    label: str
    context: str
    verdict: str
    inputs: dict
    measured: dict
    bound: dict
    slack: dict
    julia_slack: float | None = None

    def to_json_obj(self) -> dict:
        out = {
            "label": self.label,
            "context": self.context,
            "verdict": self.verdict,
            "inputs": self.inputs,
            "measured": self.measured,
            "bound": self.bound,
            "slack": self.slack,
        }
        if self.julia_slack is not None:
            out["julia_slack"] = self.julia_slack
        return out


def _random_interior(rng, rad=0.7) -> complex:
    r = rad * math.sqrt(rng.uniform(0.0, 1.0))
    t = rng.uniform(0.0, 2.0 * math.pi)
    return r * cmath.exp(1j * t)


def _two_anchor_automorphism(angles, lam: float) -> maps.Automorphism:
    """Disk automorphism fixing two boundary points, multiplier lam > 0.

    Conjugate of w -> lam*w under the Moebius map sending the fixed points
    to 0 and infinity; recovered in (a, rotation) form from its values.
    """
    e1, e2 = (cmath.exp(1j * t) for t in angles)

    def m(z):
        return (z - e1) / (z - e2)

    def m_inv(w):
        return (e2 * w - e1) / (w - 1.0)

    def f(z):
        return m_inv(lam * m(z))

    a = m_inv(m(0j) / lam)  # preimage of 0
    if abs(a) < 1e-14:
        phase = f(0.5 * e1 + 0.0) / (0.5 * e1)  # fallback never hit for lam != 1
        rot = cmath.phase(phase)
    else:
        rot = cmath.phase(-f(0j) / a)
    auto = maps.Automorphism(a, rot)
    for probe in (0.2 + 0.1j, -0.3j):
        if abs(auto.eval(probe) - f(probe)) > 1e-10:
            raise DomainError("two-anchor automorphism construction failed")
    return auto


def generate_family(spec: FamilySpec):
    """Deterministic, seed-reproducible list of GeneratedCase."""
    rng = np.random.default_rng(spec.seed)
    params = dict(spec.parameters)
    out = []
    kind = spec.kind

    if kind == "automorphism_fixing_anchors":
        angles = tuple(params.get("anchors", (0.0,)))
        if len(angles) > 2:
            raise DomainError(
                "an automorphism fixing three boundary points is the identity"
            )
        c_lo, c_hi = params.get("c_range", (-0.95, 0.95))
        for i in range(spec.count):
            if len(angles) == 1:
                a = _random_interior(rng, rad=0.8)
                expr = maps.automorphism_fixing(a, angles[0])
                context = "single" if angles[0] == 0.0 else "general"
            else:
                lam = math.exp(rng.uniform(math.log(0.2), math.log(5.0)))
                expr = _two_anchor_automorphism(angles, lam)
                context = "general"
            z = _random_interior(rng)
            out.append(
                GeneratedCase(
                    f"{kind}[{spec.seed}]#{i}", kind, expr, context, angles, z=z
                )
            )
        # the canonical family member used in the worked examples
        if params.get("include_canonical", False):
            c = (c_lo + c_hi) / 2 if "c" not in params else params["c"]
            out.append(
                GeneratedCase(
                    f"{kind}[canonical c={c}]",
                    kind,
                    maps.Automorphism(-c, 0.0),
                    "single",
                    (0.0,),
                    z=0j,
                )
            )

    elif kind == "pick_conjugate":
        anchor = float(params.get("anchor", 0.0))
        for i in range(spec.count):
            alpha = rng.uniform(0.05, 1.0)
            expr = maps.compose(
                maps.rotation(-anchor), maps.Pick(alpha), maps.rotation(anchor)
            )
            out.append(
                GeneratedCase(
                    f"{kind}[{spec.seed}]#{i}",
                    kind,
                    expr,
                    "origin",
                    (anchor,),
                    heights=(1.0,),
                )
            )

    elif kind == "ode_extremal":
        thetas = tuple(params.get("theta", (0.0,)))
        alphas = tuple(params.get("alpha", (1.0,) * len(thetas)))
        cs = params.get("c", (0.25, 0.5))
        config = solve_deltas(BoundaryAnchorSet(thetas), HeightVector(alphas))
        for i, c in enumerate(cs if isinstance(cs, (list, tuple)) else (cs,)):
            sampled = extremal.integrate_extremal_ode(
                config,
                float(c),
                ray_angles=list(config.thetas),
                r_max=1.0 - 2.0**-16,
                local_tol=1e-12,
            )
            out.append(
                GeneratedCase(
                    f"{kind}[n={len(thetas)}]#{i}",
                    kind,
                    sampled,
                    "origin",
                    thetas,
                    heights=alphas,
                )
            )

    elif kind == "composition":
        for i in range(spec.count):
            pieces = []
            for _ in range(int(rng.integers(2, 4))):
                if rng.uniform() < 0.5:
                    pieces.append(maps.automorphism_fixing(_random_interior(rng, 0.6), 0.0))
                else:
                    pieces.append(maps.Pick(rng.uniform(0.1, 1.0)))
            expr = maps.compose(*pieces)
            z = _random_interior(rng)
            out.append(
                GeneratedCase(f"{kind}[{spec.seed}]#{i}", kind, expr, "single", (0.0,), z=z)
            )

    elif kind == "nonunivalent_square":
        out.append(
            GeneratedCase(
                "nonunivalent_square",
                kind,
                SquareMap(),
                "origin",
                (0.0,),
                heights=(1.0,),
                quarantined=True,
            )
        )

    return out


def _measure_anchor(map_obj, angle: float):
    """Measured boundary derivative at one anchor; None on admissibility failure.

    A consensus flag with a sub-1e-6 branch gap is measurement jitter, not a
    generator bug, so only material disagreements reject the map.
    """
    eta = cmath.exp(1j * angle)
    lim = angular_limit(map_obj, angle)
    if abs(lim.value - eta) > 1e-8:
        return None
    est = angular_derivative(map_obj, angle, limit=eta)
    if "disagreement" in est.flags and est.error_bound > 1e-6 * max(1.0, abs(est.value)):
        return None
    beta = est.value
    if abs(beta.imag) > 1e-7 or beta.real <= 0:
        return None
    return beta.real


def verify_bound(case: GeneratedCase, variant_tols=None) -> CheckResult:
    """Measure a generated map's anchors, evaluate its bound, compute slacks."""
    tols = {"violation": VIOLATION_TOL, "equality": EQUALITY_TOL}
    if variant_tols:
        tols.update(variant_tols)

    inputs = {"anchors": list(case.anchor_angles)}
    if case.z is not None:
        inputs["z"] = [case.z.real, case.z.imag]
    if case.heights is not None:
        inputs["alpha"] = list(case.heights)

    if isinstance(case.map_obj, extremal.SampledMap):
        sampled = case.map_obj
        betas = [
            extremal.measure_beta(sampled, j).value.real
            for j in range(sampled.config.n)
        ]
        actual = sampled.origin_slope
        b = bounds.bound_origin(betas, HeightVector(case.heights))
        slack = {v.value: actual - b for v in Variant}
        measured = {"betas": betas, "actual": actual}
        bound = {v.value: b for v in Variant}
        julia = None
    else:
        betas = []
        for angle in case.anchor_angles:
            beta = _measure_anchor(case.map_obj, angle)
            if beta is None and not case.quarantined:
                return CheckResult(
                    case.label, case.context, "rejected: anchor not admissible",
                    inputs, {}, {}, {},
                )
            if beta is None:
                beta = angular_derivative(case.map_obj, angle).value.real
            betas.append(beta)
        measured = {"betas": betas}

        if case.context == "single":
            z = case.z
            w = case.map_obj.eval(z)
            actual = abs(case.map_obj.deriv(z))
            bound = {
                v.value: bounds.bound_single(z, w, betas[0], v) for v in Variant
            }
            julia = julia_quotient_check(case.map_obj, case.anchor_angles[0], betas[0], z)
        elif case.context == "origin":
            if abs(case.map_obj.eval(0j)) > 1e-12 and not case.quarantined:
                return CheckResult(
                    case.label, case.context, "rejected: does not fix the origin",
                    inputs, {}, {}, {},
                )
            actual = abs(case.map_obj.deriv(0j))
            heights = HeightVector(case.heights)
            try:
                b = bounds.bound_origin(betas, heights)
            except DomainError:
                # quarantined witness may carry beta < 1 after measurement noise
                b = math.exp(
                    -2.0 * sum(a * a * math.log(b_) for a, b_ in zip(heights.alphas, betas))
                )
            bound = {v.value: b for v in Variant}
            julia = None
        elif case.context == "general":
            z = case.z
            w = case.map_obj.eval(z)
            actual = abs(case.map_obj.deriv(z))
            anchors = BoundaryAnchorSet(case.anchor_angles, tuple(betas))
            n = len(case.anchor_angles)
            heights = HeightVector(case.heights or (1.0 / n,) * n)
            bound = {
                v.value: bounds.bound_general(z, w, anchors, heights, v)
                for v in Variant
            }
            julia = min(
                julia_quotient_check(case.map_obj, t, b_, z)
                for t, b_ in zip(case.anchor_angles, betas)
            )
        else:
            raise ValueError(f"unknown context {case.context!r}")
        measured["actual"] = actual
        slack = {k: actual - v for k, v in bound.items()}

    op = bounds.OPERATIVE_VARIANT.value
    if case.quarantined:
        verdict = (
            "non-univalent witness confirmed"
            if slack[op] < -tols["violation"]
            else "non-univalent witness inconclusive"
        )
    elif slack[op] < -tols["violation"]:
        verdict = "violation"
    elif abs(slack[op]) < tols["equality"]:
        verdict = "equality"
    else:
        verdict = "ok"
    return CheckResult(
        case.label, case.context, verdict, inputs, measured, bound, slack, julia
    )


DEFAULT_TOLERANCES = {"violation": VIOLATION_TOL, "equality": EQUALITY_TOL}


def default_suite(seed: int = 7, cases: int = 10_000) -> dict:
    """The stock suite description: closed-form families, a few trajectory
    members, and the quarantined squaring witness."""
    n_auto = int(cases * 0.4)
    n_pick = int(cases * 0.3)
    n_two = int(cases * 0.1)
    n_comp = cases - n_auto - n_pick - n_two - 5
    return {
        "seed": seed,
        "tolerances": dict(DEFAULT_TOLERANCES),
        "families": [
            {"kind": "automorphism_fixing_anchors", "count": n_auto,
             "parameters": {"anchors": [0.0]}},
            {"kind": "automorphism_fixing_anchors", "count": n_two,
             "parameters": {"anchors": [0.0, math.pi]}},
            {"kind": "pick_conjugate", "count": n_pick, "parameters": {"anchor": 0.0}},
            {"kind": "composition", "count": n_comp, "parameters": {}},
            {"kind": "ode_extremal", "count": 2,
             "parameters": {"theta": [0.0], "alpha": [1.0], "c": [0.25, 0.6]}},
            {"kind": "ode_extremal", "count": 2,
             "parameters": {"theta": [0.0, math.pi], "alpha": [0.5, 0.5],
                            "c": [0.5, 0.8]}},
            {"kind": "nonunivalent_square", "count": 1, "parameters": {}},
        ],
    }


def run_suite(suite: dict):
    """Execute a suite description; returns (report dict, exit status).

    Exit status 0 means no operative-variant violations among admissible
    maps and the operative variant passed its audit; the expected failure
    of the other variant is recorded in the report without affecting the
    status.
    """
    seed = int(suite.get("seed", 7))
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(suite.get("tolerances", {}))
    results = []
    counts = {"violation": 0, "equality": 0, "ok": 0, "rejected": 0, "witness": 0}
    for fam_index, fam in enumerate(suite["families"]):
        spec = FamilySpec(
            fam["kind"],
            seed=seed * 1009 + fam_index,
            count=int(fam.get("count", 1)),
            parameters=fam.get("parameters", {}),
        )
        for case in generate_family(spec):
            res = verify_bound(case, tols)
            results.append(res.to_json_obj())
            if res.verdict == "violation":
                counts["violation"] += 1
            elif res.verdict == "equality":
                counts["equality"] += 1
            elif res.verdict.startswith("rejected"):
                counts["rejected"] += 1
            elif res.verdict.startswith("non-univalent"):
                counts["witness"] += 1
            else:
                counts["ok"] += 1
    audit = bounds.audit_variants()
    op = bounds.OPERATIVE_VARIANT.value
    ap_failures = sum(
        1 for chk in audit[Variant.AS_PRINTED.value]["checks"] if not chk["passed"]
    )
    report = {
        "suite": {"seed": seed, "tolerances": tols,
                  "families": suite["families"]},
        "summary": {**counts, "cases": len(results),
                    "as_printed_audit_failures": ap_failures},
        "audit": audit,
        "cases": results,
    }
    status = 0 if counts["violation"] == 0 and audit[op]["passed"] else 1
    return report, status
