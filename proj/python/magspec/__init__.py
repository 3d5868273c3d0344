"""Magnetic lattice operators on Z^d: cocycles, twisted symbols, spectra."""

from ._core import (  # noqa: F401
    Box,
    CochainPolicy,
    CocycleField,
    CoefficientField,
    GaugeFunction,
    MagneticPotential,
    OneCochain,
    Symbol,
    TwoCocycle,
    __version__,
    assemble,
    bloch_bands_harper,
    cochain_direct,
    cochain_transversal,
    cocycle_from_potential,
    constant_cocycle_field,
    eigenvalues,
    gaps,
    gauge_transform_potential,
    gauge_unitary,
    harper_flux_scan,
    hausdorff,
    homomorphism_defect,
    involution,
    is_selfadjoint,
    norm_1_inf,
    potential_from_cocycle,
    resolvent_norm,
    scaled_cocycle_field,
    triangle_area,
    twisted_product,
)
