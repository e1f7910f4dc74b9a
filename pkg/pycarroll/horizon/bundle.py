"""Schwarzschild horizon S²×ℝ× in the orthonormal coframe (e¹, e², θ).

Angular chart: x1 = ϑ, x2 = φ. With a = (2κ)⁻¹ the coframe is e¹ = a dϑ,
e² = a sinϑ dφ and the base metric is a²(dϑ² + sin²ϑ dφ²).
"""

from fractions import Fraction
from itertools import combinations
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp

from pycarroll.const import ANGULAR_BOX, REGULAR_COMPONENTS
from pycarroll.forms import BundleError, CarrollBundle, Form, FormError, Monomial
from pycarroll.helpers import permutation_sign
from pycarroll.scalar_field import ScalarExpr, ScalarLike, as_scalar, coordinate_symbol

_LOGGER = logging.getLogger(__name__)

FrameIndices = Tuple[int, ...]
FRAME_LABELS = ("e1", "e2")
GENERATORS = {"e1": 0, "e2": 1, "th": 2}

THETA_SYMBOL = coordinate_symbol(0)
PHI_SYMBOL = coordinate_symbol(1)


def polar() -> ScalarExpr:
    return ScalarExpr.coordinate(0)


def azimuth() -> ScalarExpr:
    return ScalarExpr.coordinate(1)


def scale(kappa: float) -> sp.Expr:
    """a = (2κ)⁻¹, exact when κ is a simple fraction."""
    fraction = Fraction(kappa).limit_denominator(1000)
    if float(fraction) == float(kappa):
        value = sp.Rational(fraction.numerator, fraction.denominator)
    else:
        value = sp.Float(kappa)
    return 1 / (2 * value)


class HorizonBundle(CarrollBundle):
    """Base metric (2κ)⁻²g_{S²}, A = 0, explicit density (2κ)⁻² sinϑ."""

    def __init__(self, kappa: float) -> None:
        if kappa <= 0:
            raise BundleError(f"Surface gravity must be positive, got {kappa}")
        a = scale(kappa)
        sin = sp.sin(THETA_SYMBOL)
        super().__init__(
            [[a**2, 0], [0, a**2 * sin**2]],
            connection=[0, 0],
            volume_density=ScalarExpr(a**2 * sin, check=False),
            box=list(ANGULAR_BOX),
            name=f"horizon(kappa={kappa:g})",
        )
        self.kappa = kappa


def make_horizon_bundle(kappa: float) -> HorizonBundle:
    return HorizonBundle(kappa)


def frame_factor(indices: FrameIndices, kappa: float) -> ScalarExpr:
    """Coefficient of dx^I in e^I: a for e¹, a sinϑ for e²."""
    a = scale(kappa)
    factor = sp.S.One
    for index in indices:
        factor *= a if index == 0 else a * sp.sin(THETA_SYMBOL)
    return ScalarExpr(factor, check=False)


def _component_name(degree: int, vertical: bool) -> str:
    if vertical:
        return f"T{degree - 1}"
    return "f" if degree == 0 else f"S{degree}"


class HorizonForm:
    """ξ = S + θ∧T with S, T written in the orthonormal base coframe (e¹, e²).

    ``horizontal`` and ``vertical`` map increasing 0-based frame index tuples
    to coefficients; note θ stands in front of T.
    """

    def __init__(
        self,
        degree: int,
        horizontal: Optional[Mapping[FrameIndices, ScalarLike]] = None,
        vertical: Optional[Mapping[FrameIndices, ScalarLike]] = None,
    ) -> None:
        if not 0 <= degree <= 3:
            raise FormError(f"Horizon forms have degree 0..3, got {degree}")
        self.degree = degree
        self.horizontal: Dict[FrameIndices, ScalarExpr] = {}
        self.vertical: Dict[FrameIndices, ScalarExpr] = {}
        for target, entries, size in (
            (self.horizontal, horizontal, degree),
            (self.vertical, vertical, degree - 1),
        ):
            for indices, coefficient in (entries or {}).items():
                indices = tuple(indices)
                if size < 0 or len(indices) != size or indices not in combinations(range(2), size):
                    raise FormError(f"Frame indices {indices} do not fit degree {degree}")
                coefficient = as_scalar(coefficient)
                if not coefficient.is_zero:
                    target[indices] = coefficient

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        parts = [f"({c})*{_frame_label(i)}" for i, c in sorted(self.horizontal.items())]
        parts += [f"th^(({c})*{_frame_label(i)})" for i, c in sorted(self.vertical.items())]
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other) -> bool:
        if not isinstance(other, HorizonForm):
            return NotImplemented
        return (self.degree, self.horizontal, self.vertical) == (
            other.degree,
            other.horizontal,
            other.vertical,
        )

    @classmethod
    def monomial(cls, *generators: str, coefficient: ScalarLike = 1) -> "HorizonForm":
        """Build c·g₁∧...∧g_k from generator names ``e1``, ``e2``, ``th``."""
        codes = [GENERATORS[g] for g in generators]
        sign = permutation_sign(codes)
        degree = len(codes)
        coefficient = as_scalar(coefficient)
        if sign == 0:
            return cls(degree)
        base = tuple(sorted(c for c in codes if c != 2))
        if 2 not in codes:
            return cls(degree, {base: coefficient if sign > 0 else -coefficient})
        # sorted order puts θ last; θ∧T needs θ moved in front past len(base) factors
        if len(base) % 2:
            sign = -sign
        return cls(degree, vertical={base: coefficient if sign > 0 else -coefficient})

    def components(self) -> List[Tuple[str, FrameIndices, ScalarExpr]]:
        """(component name, frame indices, coefficient) for each stored entry."""
        items = [
            (_component_name(self.degree, False), i, c) for i, c in sorted(self.horizontal.items())
        ]
        items += [
            (_component_name(self.degree, True), i, c) for i, c in sorted(self.vertical.items())
        ]
        return items

    def constrained_components(self) -> List[Tuple[str, FrameIndices, ScalarExpr]]:
        return [item for item in self.components() if item[0] in REGULAR_COMPONENTS]

    def to_form(self, kappa: float) -> Form:
        """Mixed-coframe form on ``make_horizon_bundle(kappa)``."""
        terms: Dict[Monomial, ScalarExpr] = {}
        for indices, coefficient in self.horizontal.items():
            terms[Monomial(indices)] = coefficient * frame_factor(indices, kappa)
        for indices, coefficient in self.vertical.items():
            value = coefficient * frame_factor(indices, kappa)
            terms[Monomial(indices, True)] = -value if len(indices) % 2 else value
        return Form(2, self.degree, terms)

    @classmethod
    def from_form(cls, form: Form, kappa: float) -> "HorizonForm":
        if form.n != 2:
            raise FormError(f"Horizon forms live on n = 2, got n = {form.n}")
        horizontal: Dict[FrameIndices, ScalarExpr] = {}
        vertical: Dict[FrameIndices, ScalarExpr] = {}
        for mono, coefficient in form:
            value = coefficient / frame_factor(mono.indices, kappa)
            if mono.theta:
                vertical[mono.indices] = -value if len(mono.indices) % 2 else value
            else:
                horizontal[mono.indices] = value
        return cls(form.degree, horizontal, vertical)

    def frame_form(self) -> Form:
        """Bookkeeping form whose coefficients are the frame components, θ last."""
        terms: Dict[Monomial, ScalarExpr] = dict(
            (Monomial(i), c) for i, c in self.horizontal.items()
        )
        for indices, coefficient in self.vertical.items():
            terms[Monomial(indices, True)] = -coefficient if len(indices) % 2 else coefficient
        return Form(2, self.degree, terms)

    def horizontal_form(self, kappa: float) -> Form:
        """S as a base form in coordinates (dϑ, dφ)."""
        return Form(
            2,
            self.degree,
            {Monomial(i): c * frame_factor(i, kappa) for i, c in self.horizontal.items()},
        )

    def vertical_form(self, kappa: float) -> Form:
        """T as a base form in coordinates (dϑ, dφ)."""
        if self.degree == 0:
            raise FormError("A 0-form has no vertical component")
        return Form(
            2,
            self.degree - 1,
            {Monomial(i): c * frame_factor(i, kappa) for i, c in self.vertical.items()},
        )


def _frame_label(indices: Sequence[int]) -> str:
    return "^".join(FRAME_LABELS[i] for i in indices) if indices else "1"
