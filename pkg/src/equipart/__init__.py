"""Equipartitions of masses by affine hyperplanes: bounds, F2 index certificates,
exact moment-curve constructions and a numerical search."""

from .bounds import (
    BoundsRecord,
    BoundsTable,
    build_table,
    mani_upper,
    propagate,
    ramos_lower,
    render_table,
    seeded_exact_values,
)
from .f2 import (
    PolyF2,
    PowerIdealCap,
    binom_mod2,
    certify_upper_bound,
    dickson_top,
    kummer_carries,
    poly_mul,
    poly_pow,
)
from .model import (
    AffineHyperplane,
    Arrangement,
    GroupElement,
    MomentIntervals,
    PointCloud,
    TestVector,
    act_on_arrangement,
    act_on_test_vector,
    eval_test_map,
    is_equipartition,
    orthant_measure,
)
from .moment import (
    EquipartitionCertificate,
    StandardConfiguration,
    decide_ramos_two,
    degree_magnitude,
    enumerate_standard,
    hyperplane_through,
    verify_certificate,
)
from .poly import RationalPoly, real_roots_in_interval
from .solver import SolveResult, SolverConfig, ham_sandwich, objective, solve

__version__ = "0.1.0"
