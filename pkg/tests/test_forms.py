"""Tests for the exterior calculus in the mixed coframe."""

import numpy as np
import pytest

from pycarroll.checks.generators import random_bundle, random_form, random_scalar
from pycarroll.const import WEIGHT_ANY, WEIGHT_NON_HOMOGENEOUS
from pycarroll.forms import (
    BundleError,
    CarrollBundle,
    Form,
    FormError,
    Monomial,
    basis,
    coordinate_components,
    covariant_derivative,
    curvature,
    decompose,
    exterior_derivative,
    interior_euler,
    lie_euler,
    parse_form,
    wedge,
    weight_of,
)
from pycarroll.scalar_field import ExpressionSyntaxError
from tests.common import fixed_samples, t, x

TOLERANCE = 1e-9


def _same(left: Form, right: Form, n: int) -> bool:
    return (left - right).vanishes_on(fixed_samples(n), TOLERANCE)


def test_basis_orders_horizontal_first():
    assert basis(2, 1) == [Monomial((0,)), Monomial((1,)), Monomial((), True)]
    assert basis(2, 3) == [Monomial((0, 1), True)]
    assert basis(1, 0) == [Monomial()]


def test_monomial_rejects_unsorted_indices():
    with pytest.raises(FormError):
        Monomial((1, 0))
    with pytest.raises(FormError):
        Monomial((0, 0))


def test_form_rejects_mismatched_monomial():
    with pytest.raises(FormError):
        Form(2, 1, {Monomial((0, 1)): 1})
    with pytest.raises(FormError):
        Form.dx(2, 0) + Form.scalar(2, 1)
    with pytest.raises(FormError):
        Form.dx(2, 0) + Form.dx(3, 0)


def test_wedge_examples():
    n = 2
    dx1, dx2, theta = Form.dx(n, 0), Form.dx(n, 1), Form.theta(n)
    assert wedge(dx1, dx1).is_zero
    assert wedge(dx1, dx2) == -wedge(dx2, dx1)
    assert wedge(wedge(theta, dx1), dx2) == Form.monomial(n, Monomial((0, 1), True))
    assert wedge(theta, dx1) == -Form.monomial(n, Monomial((0,), True))


def test_wedge_beyond_top_degree_is_zero():
    top = Form.monomial(1, Monomial((0,), True))
    assert wedge(top, Form.dx(1, 0)).is_zero


def test_wedge_is_associative_and_graded_commutative(rng):
    n = 3
    alpha = random_form(rng, n, 1)
    beta = random_form(rng, n, 2)
    gamma = random_form(rng, n, 1)
    assert _same(wedge(wedge(alpha, beta), gamma), wedge(alpha, wedge(beta, gamma)), n)
    assert _same(wedge(alpha, beta), wedge(beta, alpha), n)
    assert _same(wedge(alpha, gamma), -wedge(gamma, alpha), n)


def test_decompose_examples():
    n = 1
    f = x(0) * t()
    theta_dx = wedge(Form.theta(n), Form.dx(n, 0))
    assert decompose(theta_dx) == (Form.zero(n, 2), theta_dx)

    mixed = Form.dx(n, 0) + Form.theta(n) * f
    assert decompose(mixed) == (Form.dx(n, 0), Form.theta(n) * f)

    scalar = Form.scalar(n, f)
    assert decompose(scalar) == (scalar, Form.zero(n, 0))


def test_decompose_reconstructs(rng):
    xi = random_form(rng, 3, 2, density=1.0)
    horizontal, vertical = decompose(xi)
    assert horizontal + vertical == xi
    assert horizontal.is_horizontal
    assert all(m.theta for m, _ in vertical)
    assert interior_euler(horizontal).is_zero
    assert decompose(horizontal) == (horizontal, Form.zero(3, 2))


def test_interior_euler_examples():
    n = 2
    assert interior_euler(Form.theta(n)) == Form.scalar(n, 1)
    assert interior_euler(Form.dx(n, 0)).is_zero
    assert interior_euler(wedge(Form.theta(n), Form.dx(n, 0))) == Form.dx(n, 0)
    with pytest.raises(FormError):
        interior_euler(Form.scalar(n, t()))


def test_exterior_derivative_of_fibre_coordinate(flat_bundle):
    n = flat_bundle.n
    assert exterior_derivative(Form.scalar(n, t()), flat_bundle) == Form.theta(n) * t()


def test_dt_with_connection(twisted2):
    # dt = tθ − t A_a dx^a with A = x1 dx2
    expected = Form.theta(2) * t() - Form.dx(2, 1) * (t() * x(0))
    assert _same(exterior_derivative(Form.scalar(2, t()), twisted2), expected, 2)


def test_d_theta_is_curvature(twisted2):
    d_theta = exterior_derivative(Form.theta(2), twisted2)
    assert d_theta == curvature(twisted2)
    assert d_theta == Form.monomial(2, Monomial((0, 1)))


def test_curvature_examples(twisted2):
    assert curvature(CarrollBundle.flat(3)).is_zero
    assert CarrollBundle.flat(2).is_flat_connection
    assert not twisted2.is_flat_connection
    field_strength = curvature(twisted2)
    assert field_strength.is_horizontal
    assert interior_euler(field_strength).is_zero
    assert lie_euler(field_strength).is_zero


def test_exterior_derivative_above_top_degree(flat_bundle):
    n = flat_bundle.n
    top = Form.monomial(n, Monomial(tuple(range(n)), True), t())
    assert exterior_derivative(top, flat_bundle).is_zero


@pytest.mark.parametrize("n", [1, 2, 3])
def test_d_squared_vanishes(n):
    rng = np.random.default_rng(n)
    bundle = random_bundle(rng, n)
    for degree in range(n):
        xi = random_form(rng, n, degree)
        dd = exterior_derivative(exterior_derivative(xi, bundle), bundle)
        assert dd.vanishes_on(fixed_samples(n), TOLERANCE), f"degree {degree}"


def test_lie_euler_examples(flat_bundle):
    n = flat_bundle.n
    assert lie_euler(Form.theta(n)).is_zero
    f = x(0).sin() * t() ** 3
    assert lie_euler(Form.dx(n, 0) * f) == Form.dx(n, 0) * (3 * f)
    theta_dx = wedge(Form.theta(n), Form.dx(n, 0))
    assert lie_euler(theta_dx * t() ** 2, flat_bundle) == theta_dx * (2 * t() ** 2)


def test_lie_euler_rejects_other_bundle():
    with pytest.raises(FormError):
        lie_euler(Form.theta(2), CarrollBundle.flat(3))


@pytest.mark.parametrize("degree", [1, 2])
def test_cartan_formula_and_commutation(twisted2, rng, degree):
    xi = random_form(rng, 2, degree)
    d = lambda form: exterior_derivative(form, twisted2)  # noqa: E731
    cartan = interior_euler(d(xi)) + d(interior_euler(xi))
    assert _same(lie_euler(xi), cartan, 2)
    assert _same(lie_euler(d(xi)), d(lie_euler(xi)), 2)


@pytest.mark.parametrize("degree", [2, 3])
def test_interior_euler_squares_to_zero(rng, degree):
    assert interior_euler(interior_euler(random_form(rng, 2, degree, density=1.0))).is_zero


def test_lie_euler_respects_split(rng):
    alpha = random_form(rng, 2, 2, horizontal=True)
    beta = random_form(rng, 2, 1, horizontal=True)
    combined = alpha + wedge(Form.theta(2), beta)
    assert _same(
        lie_euler(combined), lie_euler(alpha) + wedge(Form.theta(2), lie_euler(beta)), 2
    )


def test_covariant_derivative_examples(twisted2):
    flat = CarrollBundle.flat(2)
    f = x(0) ** 2 * x(1).cos()
    expected = Form.dx(2, 0) * f.partial(0) + Form.dx(2, 1) * f.partial(1)
    assert covariant_derivative(Form.scalar(2, f), flat) == expected

    d_t = covariant_derivative(Form.scalar(2, t()), twisted2)
    assert d_t.is_horizontal
    assert _same(d_t, Form.dx(2, 1) * (-t() * x(0)), 2)


def test_covariant_derivative_rejects_vertical(twisted2):
    with pytest.raises(FormError):
        covariant_derivative(Form.theta(2), twisted2)


@pytest.mark.parametrize("degree", [0, 1])
def test_d_splits_into_covariant_and_euler_parts(twisted2, rng, degree):
    xi = random_form(rng, 2, degree, horizontal=True)
    split = covariant_derivative(xi, twisted2) + wedge(Form.theta(2), lie_euler(xi))
    assert _same(exterior_derivative(xi, twisted2), split, 2)


def test_weight_examples(twisted2):
    assert weight_of(Form.dx(2, 0) * t() ** 3) == 3.0
    assert weight_of(Form.theta(2) * x(0).cos(), twisted2) == 0.0
    assert weight_of(Form.dx(2, 0) * (t() + t() ** 2)) == WEIGHT_NON_HOMOGENEOUS
    assert weight_of(Form.zero(2, 1)) == WEIGHT_ANY
    assert weight_of(Form.scalar(2, t() ** -2 * x(1))) == -2.0


def test_weight_of_random_homogeneous_form(rng):
    xi = random_form(rng, 3, 2, weight=2)
    assert weight_of(xi, CarrollBundle.flat(3)) == 2.0


def test_coordinate_components():
    flat = CarrollBundle.flat(1)
    components = coordinate_components(Form.theta(1), flat)
    assert components == {"dt": 1 / t()}

    twisted = CarrollBundle.flat(2, connection=[0, x(0)])
    components = coordinate_components(Form.theta(2), twisted)
    assert set(components) == {"dx2", "dt"}
    assert components["dx2"] == x(0)

    # f dx1∧θ = f t⁻¹ dx1∧dt on the flat bundle
    components = coordinate_components(Form.monomial(1, Monomial((0,), True), t() ** 2), flat)
    assert components == {"dx1^dt": t()}


def test_parse_form():
    xi = parse_form("t^2 * dx1^dx2 + x1*th^dx1", 2)
    expected = Form(2, 2, {Monomial((0, 1)): t() ** 2, Monomial((0,), True): -x(0)})
    assert xi.degree == 2
    assert _same(xi, expected, 2)
    assert parse_form("th", 3) == Form.theta(3)
    expected = Form.dx(2, 0) * x(0).sin() + Form.dx(2, 1) * t()
    assert _same(parse_form("sin(x1) * dx1 + t*dx2", 2), expected, 2)


@pytest.mark.parametrize("text", ["", "dx1*dx2", "dx3", "dx1 + dx1^dx2"])
def test_parse_form_rejects(text):
    with pytest.raises((ExpressionSyntaxError, FormError)):
        parse_form(text, 2)


def test_bundle_validation():
    with pytest.raises(BundleError):
        CarrollBundle([[1, x(0)], [0, 1]])
    with pytest.raises(BundleError):
        CarrollBundle([[1 + t() ** 2]])
    with pytest.raises(BundleError):
        CarrollBundle([[1]], [t()])
    with pytest.raises(BundleError):
        CarrollBundle([[1, 0]])


def test_random_scalar_has_requested_weight(rng):
    assert weight_of(Form.scalar(2, random_scalar(rng, 2, 3))) == 3.0
