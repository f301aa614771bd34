"""Exact lower central series quotients of graded associative rings over Z."""

__version__ = "0.1.0"
ENGINE = f"lcsq-{__version__}"

from .intlat import AbGroup, IntLattice, hermite_normal_form, lattice_quotient, smith_invariant_factors  # noqa: E402
from .ncalg import NcPoly, Presentation, parse_poly  # noqa: E402
from .series import SeriesQuery, TotalDegree, compute, quotient_structure, sweep  # noqa: E402

__all__ = [
    "AbGroup", "IntLattice", "NcPoly", "Presentation", "SeriesQuery", "TotalDegree",
    "compute", "hermite_normal_form", "lattice_quotient", "parse_poly",
    "quotient_structure", "smith_invariant_factors", "sweep",
]
