"""Persistent Laplacians, persistent Betti numbers and persistent eigenvalues of
weight preserving simplicial maps, computed in exact rational arithmetic."""
from .chains import check_weight_preserving
from .complex import (
    SimplicialComplex,
    SimplicialMap,
    collapse_map,
    identity_map,
    image_complex,
    parse_complex,
    random_complex,
    validate_map,
)
from .errors import (
    InvariantError,
    MapError,
    ParseError,
    PlapError,
    ValidationError,
    WeightPreservationError,
)
from .io import load_complex, load_map
from .persistent import (
    down_persistent_laplacian,
    essential_up_laplacian,
    laplacian_report,
    persistent_betti,
    persistent_laplacian,
    spectrum,
    up_persistent_laplacian,
)

__version__ = "0.1.0"

__all__ = [
    "InvariantError",
    "MapError",
    "ParseError",
    "PlapError",
    "SimplicialComplex",
    "SimplicialMap",
    "ValidationError",
    "WeightPreservationError",
    "check_weight_preserving",
    "collapse_map",
    "down_persistent_laplacian",
    "essential_up_laplacian",
    "identity_map",
    "image_complex",
    "laplacian_report",
    "load_complex",
    "load_map",
    "parse_complex",
    "persistent_betti",
    "persistent_laplacian",
    "random_complex",
    "spectrum",
    "up_persistent_laplacian",
    "validate_map",
]
