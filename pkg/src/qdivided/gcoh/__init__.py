"""Finite-group cohomology with F_ell coefficients and the algebra E."""
from .cohomology import Engine, GModule, cohomology, induced_map
from .ealg import EAlgebra, verify_free_D, verify_inflation_transfer, verify_leibniz, verify_mid_portion
from .groups import PermGroup, family, group_from_spec

__all__ = [
    "Engine",
    "GModule",
    "cohomology",
    "induced_map",
    "EAlgebra",
    "verify_leibniz",
    "verify_free_D",
    "verify_mid_portion",
    "verify_inflation_transfer",
    "PermGroup",
    "family",
    "group_from_spec",
]
