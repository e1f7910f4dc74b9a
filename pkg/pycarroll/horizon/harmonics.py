"""Real spherical harmonics up to l = 4 in the angular chart (x1 = ϑ, x2 = φ).

Unnormalised: Y_lm ∝ sin^|m|ϑ · P_l^(|m|)(cosϑ) · (cos mφ for m ≥ 0, sin |m|φ for m < 0).
"""

from dataclasses import dataclass
import logging
from typing import Dict, List, Tuple

import numpy as np
import sympy as sp

from pycarroll.const import MAX_HARMONIC_DEGREE
from pycarroll.forms import Form, Monomial
from pycarroll.hodge import laplacian
from pycarroll.horizon.bundle import PHI_SYMBOL, THETA_SYMBOL, make_horizon_bundle
from pycarroll.scalar_field import ScalarExpr

_LOGGER = logging.getLogger(__name__)

_C = sp.cos(THETA_SYMBOL)
_S = sp.sin(THETA_SYMBOL)

# m-th derivative of the Legendre polynomial up to a constant, in c = cosϑ
_LEGENDRE_DERIVATIVES: Dict[Tuple[int, int], sp.Expr] = {
    (0, 0): sp.S.One,
    (1, 0): _C,
    (1, 1): sp.S.One,
    (2, 0): 3 * _C**2 - 1,
    (2, 1): _C,
    (2, 2): sp.S.One,
    (3, 0): 5 * _C**3 - 3 * _C,
    (3, 1): 5 * _C**2 - 1,
    (3, 2): _C,
    (3, 3): sp.S.One,
    (4, 0): 35 * _C**4 - 30 * _C**2 + 3,
    (4, 1): 7 * _C**3 - 3 * _C,
    (4, 2): 7 * _C**2 - 1,
    (4, 3): _C,
    (4, 4): sp.S.One,
}


@dataclass(frozen=True)
class SphericalHarmonicSpec:
    l: int  # noqa: E741
    m: int

    def __post_init__(self) -> None:
        if self.l < 0 or self.l > MAX_HARMONIC_DEGREE:
            raise ValueError(f"Harmonic degree must be in 0..{MAX_HARMONIC_DEGREE}, got {self.l}")
        if abs(self.m) > self.l:
            raise ValueError(f"Order |m| must not exceed l = {self.l}, got {self.m}")

    def __str__(self) -> str:
        return f"Y[{self.l},{self.m}]"

    def expression(self) -> ScalarExpr:
        return spherical_harmonic(self.l, self.m)


def spherical_harmonic(l: int, m: int) -> ScalarExpr:  # noqa: E741
    SphericalHarmonicSpec(l, m)
    order = abs(m)
    angular = sp.cos(order * PHI_SYMBOL) if m >= 0 else sp.sin(order * PHI_SYMBOL)
    return ScalarExpr(_S**order * _LEGENDRE_DERIVATIVES[(l, order)] * angular, check=False)


def harmonics(l_max: int, l_min: int = 0) -> List[SphericalHarmonicSpec]:
    """All (l, m) with l_min ≤ l ≤ l_max, in (l, m) order."""
    if l_max > MAX_HARMONIC_DEGREE:
        raise ValueError(f"l_max must be at most {MAX_HARMONIC_DEGREE}, got {l_max}")
    return [SphericalHarmonicSpec(l, m) for l in range(l_min, l_max + 1) for m in range(-l, l + 1)]


def measure_s2_eigenvalue(spec: SphericalHarmonicSpec, kappa: float) -> float:
    """μ with Δ_{S²}Y = μY, where Δ_{S²} is what the Laplacian does to t-independent functions."""
    bundle = make_horizon_bundle(kappa)
    samples = bundle.samples()
    harmonic = spec.expression()
    image = laplacian(Form.scalar(2, harmonic), bundle).coefficient(Monomial())
    values = harmonic.evaluate_many(samples)
    mask = np.abs(values) > 1e-3
    ratios = image.evaluate_many(samples)[mask] / values[mask]
    if ratios.size == 0:
        raise ValueError(f"{spec} vanishes on the sample set")
    spread = float(np.max(ratios) - np.min(ratios))
    if spread > 1e-6 * max(1.0, float(np.max(np.abs(ratios)))):
        raise ValueError(f"{spec} is not an eigenfunction (ratio spread {spread:.3e})")
    return float(np.median(ratios))
