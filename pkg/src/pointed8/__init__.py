"""Exact classification of pointed fusion categories Vect(H, eta) with |H| = 8."""

__version__ = "0.1.0"

from .cohomology import (  # noqa: E402
    Cochain,
    CohomologyGroup,
    class_coordinates,
    coboundary,
    cohomology_group,
    inflation,
    pullback,
    q8_periodic_h4,
    restriction,
    torus_h3,
)
from .config import Config  # noqa: E402
from .groups import (  # noqa: E402
    FiniteGroup,
    FiniteModule,
    GroupMap,
    automorphisms,
    catalog_group,
    catalog_order8,
    dual_module,
    find_isomorphism,
    make_group,
    make_module,
)

__all__ = [
    "Cochain",
    "CohomologyGroup",
    "Config",
    "FiniteGroup",
    "FiniteModule",
    "GroupMap",
    "automorphisms",
    "catalog_group",
    "catalog_order8",
    "class_coordinates",
    "coboundary",
    "cohomology_group",
    "dual_module",
    "find_isomorphism",
    "inflation",
    "make_group",
    "make_module",
    "pullback",
    "q8_periodic_h4",
    "restriction",
    "torus_h3",
]
