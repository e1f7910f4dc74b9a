"""Explicit angular-coordinate operators on the horizon base (2κ)⁻²S².

Forms here are horizontal forms on the n = 2 chart (x1 = ϑ, x2 = φ) whose
coefficients may depend on t; every operator acts fibre-wise. Sign
conventions: Δ_{S²} is the Laplace–Beltrami operator (non-positive
spectrum), δ_{S²} = −div on 1-forms.
"""

import logging

import sympy as sp

from pycarroll.forms import Form, FormError, Monomial
from pycarroll.horizon.bundle import THETA_SYMBOL, scale
from pycarroll.scalar_field import ScalarExpr, euler_derivative

_LOGGER = logging.getLogger(__name__)

_SIN = ScalarExpr(sp.sin(THETA_SYMBOL), check=False)
_DTHETA = Monomial((0,))
_DPHI = Monomial((1,))
_AREA = Monomial((0, 1))


def _check(form: Form, *degrees: int) -> None:
    if form.n != 2 or not form.is_horizontal:
        raise FormError("Angular operators act on horizontal forms of the n = 2 chart")
    if form.degree not in degrees:
        raise FormError(f"Degree {form.degree} not supported here (expected {degrees})")


def _inverse_scale_squared(kappa: float) -> ScalarExpr:
    """(2κ)² = a⁻²."""
    return ScalarExpr(1 / scale(kappa) ** 2, check=False)


def _density(kappa: float) -> ScalarExpr:
    return ScalarExpr(scale(kappa) ** 2, check=False) * _SIN


def scalar_laplacian_s2(f: ScalarExpr, kappa: float) -> ScalarExpr:
    """(2κ)²[(1/sinϑ)∂_ϑ(sinϑ ∂_ϑ f) + (1/sin²ϑ)∂²_φ f]."""
    angular = (_SIN * f.partial(0)).partial(0) / _SIN + f.partial(1).partial(1) / _SIN**2
    return _inverse_scale_squared(kappa) * angular


def d_s2(form: Form) -> Form:
    """Base exterior derivative in angular coordinates."""
    _check(form, 0, 1, 2)
    if form.degree == 0:
        f = form.coefficient(Monomial())
        return Form(2, 1, {_DTHETA: f.partial(0), _DPHI: f.partial(1)})
    if form.degree == 1:
        s_theta = form.coefficient(_DTHETA)
        s_phi = form.coefficient(_DPHI)
        return Form(2, 2, {_AREA: s_phi.partial(0) - s_theta.partial(1)})
    return Form.zero(2, 3)


def div_s2(form: Form, kappa: float) -> Form:
    """(2κ)²[(1/sinϑ)∂_ϑ(sinϑ S_ϑ) + (1/sin²ϑ)∂_φ S_φ] as a 0-form."""
    _check(form, 1)
    s_theta = form.coefficient(_DTHETA)
    s_phi = form.coefficient(_DPHI)
    angular = (_SIN * s_theta).partial(0) / _SIN + s_phi.partial(1) / _SIN**2
    return Form.scalar(2, _inverse_scale_squared(kappa) * angular)


def codifferential_s2(form: Form, kappa: float) -> Form:
    """δ_{S²}: −div on 1-forms; on h·vol, (1/sinϑ)∂_φh dϑ − sinϑ ∂_ϑh dφ."""
    _check(form, 1, 2)
    if form.degree == 1:
        return -div_s2(form, kappa)
    h = form.coefficient(_AREA) / _density(kappa)
    return Form(2, 1, {_DTHETA: h.partial(1) / _SIN, _DPHI: -(_SIN * h.partial(0))})


def laplacian_s2(form: Form, kappa: float) -> Form:
    """Laplace–Beltrami Δ_{S²} = −(dδ + δd) on 0-, 1- and 2-forms."""
    _check(form, 0, 1, 2)
    if form.degree == 0:
        return Form.scalar(2, scalar_laplacian_s2(form.coefficient(Monomial()), kappa))
    if form.degree == 1:
        return d_s2(div_s2(form, kappa)) - codifferential_s2(d_s2(form), kappa)
    density = _density(kappa)
    h = form.coefficient(_AREA) / density
    return Form(2, 2, {_AREA: scalar_laplacian_s2(h, kappa) * density})


def euler(form: Form) -> Form:
    """L = t∂_t coefficient-wise."""
    return form.map_coefficients(euler_derivative)
