"""Exact lattice, Cremona-orbit and Kodaira-dimension tools for symplectic -4-spheres."""

from .lattice import (
    DimensionError,
    DomainError,
    LatticeClass,
    RationalClass,
    adjunction_genus,
    canonical_std,
    is_sphere_class,
    k_dot,
    normalize_trivial,
    pair,
    parse_class,
    square,
)
from .weyl import (
    Reflection,
    enumerate_exceptional,
    enumerate_reduced,
    orbit_equivalent,
    reduce,
    reflect,
)
from .spheres import load_table, screen, value_set, verify_table
from .surgery import (
    BlowdownScenario,
    InvariantState,
    Kappa,
    classify_minus4,
    kappa4,
    kred_solve,
    minimality_of_sum,
    run_pipeline,
)

__version__ = "0.1.0"
