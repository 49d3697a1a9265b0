"""Pegg-Barnett phase states: Fock-space tools, Wigner functions, heralding, estimation."""

from ._pbphase import (
    HeraldResult,
    alpha_roots,
    effective_radius,
    herald,
    interference_probs,
    negativity_volume,
    pb_eigenstate,
    symmetric_factors,
    wigner_grid,
    wigner_point,
)

__all__ = [
    "HeraldResult",
    "alpha_roots",
    "effective_radius",
    "herald",
    "interference_probs",
    "negativity_volume",
    "pb_eigenstate",
    "symmetric_factors",
    "wigner_grid",
    "wigner_point",
]
