"""Schwarzschild horizon backend: coframe, tables, regularity and harmonic search."""

from pycarroll.horizon.bundle import HorizonBundle, HorizonForm, make_horizon_bundle
from pycarroll.horizon.harmonics import (
    SphericalHarmonicSpec,
    harmonics,
    measure_s2_eigenvalue,
    spherical_harmonic,
)
from pycarroll.horizon.scan import (
    HarmonicHit,
    RegularityError,
    RegularityVerdict,
    ZeroSectionLimit,
    extend_to_zero,
    harmonic_scan,
    regularity_check,
)
from pycarroll.horizon.tables import table_laplacian, verify_hodge_table, verify_laplacian_table

__all__ = [
    "HarmonicHit",
    "HorizonBundle",
    "HorizonForm",
    "RegularityError",
    "RegularityVerdict",
    "SphericalHarmonicSpec",
    "ZeroSectionLimit",
    "extend_to_zero",
    "harmonic_scan",
    "harmonics",
    "make_horizon_bundle",
    "measure_s2_eigenvalue",
    "regularity_check",
    "spherical_harmonic",
    "table_laplacian",
    "verify_hodge_table",
    "verify_laplacian_table",
]
