"""Perfect Lee codes and translational tilings of Z^n.

Constructions, torus tiling search and verification, and exact
nonexistence certificates (splitting homomorphisms, character sums,
sector counting, and the linear-programming witness).
"""
__version__ = "0.1.0"

from .geometry import (OrbitRep, Tile, blowout, double_sphere, lee_distance, lee_sphere,
                       orbit_rep, orbit_size, semicross, shell, sphere_size, special_tiles)
from .torus import (TorusCode, VerificationReport, blowout_check, detect_periods, is_lattice,
                    shift_exclusion_check, t_functional, verify_diameter_perfect,
                    verify_perfect, verify_quasi_perfect)
from .search import SearchOptions, SearchResult, search_tiling

__all__ = [
    "OrbitRep", "Tile", "blowout", "double_sphere", "lee_distance", "lee_sphere",
    "orbit_rep", "orbit_size", "semicross", "shell", "sphere_size", "special_tiles",
    "TorusCode", "VerificationReport", "blowout_check", "detect_periods", "is_lattice",
    "shift_exclusion_check", "t_functional", "verify_diameter_perfect", "verify_perfect",
    "verify_quasi_perfect", "SearchOptions", "SearchResult", "search_tiling",
]
