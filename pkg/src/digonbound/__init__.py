"""Sharp lower bounds for derivatives of univalent self-maps of the unit disk.

Library surface:

* maps       -- exact algebra of disk automorphisms, slit maps, compositions
* angular    -- radial estimation of boundary limits and derivatives
* partition  -- extremal-partition configurations (zero angles, Q, strip maps)
* moduli     -- reduced digon moduli and their conformal transfer rules
* bounds     -- the bound evaluators, height optimization, variant audit
* extremal   -- equality maps (closed form and trajectory ODE)
* harness    -- map generation and bound verification suites
* cli        -- command-line front end
"""

from .angular import AngularEstimate, angular_derivative, angular_limit, julia_quotient_check
from .bounds import (
    BoundReport,
    audit_variants,
    bound_general,
    bound_origin,
    bound_single,
    corollary_slack,
    extremal_alpha,
    optimal_alpha,
)
from .extremal import (
    SampledMap,
    equality_audit,
    extremal_single,
    integrate_extremal_ode,
    measure_beta,
)
from .maps import (
    Automorphism,
    CirclePoint,
    Compose,
    DiskPoint,
    Inverse,
    MapExpr,
    Moebius,
    Pick,
    b_normalized,
    compose,
    map_deriv,
    map_eval,
    map_inverse_eval,
)
from .moduli import (
    DigonModulus,
    DigonVertexSpec,
    ExpansionCoefficients,
    Variant,
    change_of_variable,
    change_of_variable_expansion,
    reduced_modulus_general,
    reduced_modulus_origin,
    weighted_sum,
)
from .partition import (
    BoundaryAnchorSet,
    ExtremalConfig,
    HeightVector,
    StripMap,
    make_strip_map,
    q_eval,
    residue_check,
    solve_deltas,
    strip_map_eval,
)

__version__ = "0.1.0"
