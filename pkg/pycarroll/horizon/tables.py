"""Hodge-star and Laplacian tables of the horizon, checked against the operator stack."""

import logging
from typing import List, Optional, Tuple

from pycarroll.checks.base import CheckBase, EqualFormsCheck, Report, run_checks
from pycarroll.const import HORIZON_SAMPLE_COUNT, HORIZON_TOLERANCE, TABLE_TOLERANCE
from pycarroll.forms import Form, FormError, wedge
from pycarroll.hodge import hodge_star, laplacian
from pycarroll.horizon.bundle import HorizonForm, azimuth, make_horizon_bundle, polar
from pycarroll.horizon.operators import (
    codifferential_s2,
    d_s2,
    div_s2,
    euler,
    laplacian_s2,
)
from pycarroll.scalar_field import ScalarExpr

_LOGGER = logging.getLogger(__name__)

HODGE_SUITE = "horizon-star"
LAPLACIAN_SUITE = "horizon-laplacian"

# (source generators, image generators, image sign), orientation e¹∧e²∧θ
HODGE_TABLE: List[Tuple[Tuple[str, ...], Tuple[str, ...], int]] = [
    ((), ("e1", "e2", "th"), 1),
    (("e1",), ("e2", "th"), 1),
    (("e2",), ("th", "e1"), 1),
    (("th",), ("e1", "e2"), -1),
    (("e1", "e2"), ("th",), 1),
    (("e1", "th"), ("e2",), 1),
    (("e2", "th"), ("e1",), -1),
    (("e1", "e2", "th"), (), -1),
]


def _generator_label(generators: Tuple[str, ...]) -> str:
    return "^".join(generators) if generators else "1"


class HodgeTableCheck(CheckBase):
    """⋆ of one coframe monomial against its tabulated image."""

    suite = HODGE_SUITE

    def __init__(
        self,
        source: Tuple[str, ...],
        image: Tuple[str, ...],
        sign: int,
        kappa: float,
        tolerance: float = TABLE_TOLERANCE,
    ) -> None:
        super().__init__(f"*{_generator_label(source)} (kappa={kappa:g})", tolerance)
        self.source = HorizonForm.monomial(*source)
        self.expected = HorizonForm.monomial(*image, coefficient=sign)
        self.kappa = kappa
        self.computed: Optional[HorizonForm] = None

    def evaluate(self) -> Tuple[float, Optional[str]]:
        bundle = make_horizon_bundle(self.kappa)
        image = hodge_star(self.source.to_form(self.kappa), bundle)
        self.computed = HorizonForm.from_form(image, self.kappa)
        difference = self.computed.frame_form() - self.expected.frame_form()
        return difference.max_abs(bundle.samples(HORIZON_SAMPLE_COUNT))

    def describe(self) -> Tuple[Optional[str], Optional[str]]:
        return str(self.expected), None if self.computed is None else str(self.computed)


def verify_hodge_table(kappa: float, tolerance: float = TABLE_TOLERANCE) -> Report:
    """All eight entries of the horizon star table."""
    _LOGGER.info("Verifying the horizon Hodge table at kappa=%g", kappa)
    return run_checks(
        [HodgeTableCheck(source, image, sign, kappa, tolerance) for source, image, sign in HODGE_TABLE]
    )


def _theta_wedge(vertical: Form) -> Form:
    return wedge(Form.theta(2), vertical)


def table_laplacian(form: HorizonForm, kappa: float) -> Form:
    """Δ(S + θ∧T) from the angular operators, degree by degree."""
    s = form.horizontal_form(kappa)
    if form.degree == 0:
        return laplacian_s2(s, kappa) - euler(euler(s))
    t = form.vertical_form(kappa)
    if form.degree == 1:
        horizontal = -(laplacian_s2(s, kappa) - euler(euler(s))) + d_s2(
            div_s2(s, kappa) - euler(t)
        ) * 2
        vertical = euler(div_s2(s, kappa)) * 2 - laplacian_s2(t, kappa) - euler(euler(t))
    elif form.degree == 2:
        horizontal = -(laplacian_s2(s, kappa) + euler(euler(s))) + d_s2(euler(t)) * 2
        vertical = (
            euler(codifferential_s2(s, kappa)) * 2
            + laplacian_s2(t, kappa)
            - d_s2(div_s2(t, kappa)) * 2
            + euler(euler(t))
        )
    elif form.degree == 3:
        horizontal = Form.zero(2, 3)
        vertical = laplacian_s2(t, kappa) - euler(euler(t))
    else:
        raise FormError(f"Horizon forms have degree 0..3, got {form.degree}")
    return horizontal + _theta_wedge(vertical)


def verify_laplacian_table(
    form: HorizonForm, kappa: float, tolerance: float = HORIZON_TOLERANCE
) -> Report:
    """Stack Laplacian against the angular-operator expressions."""
    bundle = make_horizon_bundle(kappa)

    def build() -> Tuple[Form, Form]:
        return laplacian(form.to_form(kappa), bundle), table_laplacian(form, kappa)

    check = EqualFormsCheck(
        LAPLACIAN_SUITE,
        f"degree {form.degree}: {form} (kappa={kappa:g})",
        build,
        bundle.samples(HORIZON_SAMPLE_COUNT),
        tolerance,
    )
    return run_checks([check])


def reference_forms() -> List[HorizonForm]:
    """One or two representative forms per degree for the table report."""
    t = ScalarExpr.fibre()
    theta = polar()
    phi = azimuth()
    return [
        HorizonForm(0, {(): t**2 * theta.cos()}),
        HorizonForm(0, {(): 1}),
        HorizonForm(1, {(0,): t * theta.sin(), (1,): t**2 * theta.cos() * phi.sin()}, {(): t**2 * theta.cos()}),
        HorizonForm(2, {(0, 1): t * theta.cos()}, {(0,): t**2 * phi.cos(), (1,): t * theta.sin()}),
        HorizonForm(3, vertical={(0, 1): t}),
    ]
