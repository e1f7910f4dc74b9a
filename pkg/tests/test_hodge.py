"""Tests for the Lorentzian metric, Hodge star, codifferential and Laplacian."""

import numpy as np
import pytest
import sympy as sp

from pycarroll.checks.generators import random_bundle, random_form
from pycarroll.forms import (
    CarrollBundle,
    Form,
    FormError,
    Monomial,
    basis,
    exterior_derivative,
    lie_euler,
    wedge,
    weight_of,
)
from pycarroll.hodge import (
    base_hodge_star,
    classify,
    codifferential,
    coordinate_metric,
    hodge_star,
    inner_product,
    laplacian,
    metric_g,
    star_sign,
    star_table,
    star_table_rows,
    volume_form,
)
from pycarroll.scalar_field import T, Point
from tests.common import fixed_samples, t, x

TOLERANCE = 1e-9


def _same(left: Form, right: Form, tolerance: float = TOLERANCE) -> bool:
    return (left - right).vanishes_on(fixed_samples(left.n), tolerance)


def test_inner_product_examples():
    flat = CarrollBundle.flat(2)
    point = Point((0.3, -0.2), 1.5)
    theta = Form.theta(2)
    dx1 = Form.dx(2, 0)
    assert inner_product(theta, theta, flat, point) == -1.0
    assert inner_product(dx1, dx1, flat, point) == 1.0
    dx1_theta = wedge(dx1, theta)
    assert inner_product(dx1_theta, dx1_theta, flat, point) == -1.0
    assert inner_product(dx1, theta, flat, point) == 0.0
    with pytest.raises(FormError):
        inner_product(dx1, Form.scalar(2, 1), flat, point)


def test_inner_product_uses_inverse_metric(twisted2):
    point = Point((0.5, 0.1), -1.0)
    dx1 = Form.dx(2, 0)
    assert inner_product(dx1, dx1, twisted2, point) == pytest.approx(1 / 1.25)


def test_metric_g_blocks(twisted2):
    G = metric_g(twisted2)
    assert G.signature == (2, 1)
    assert G.matrix[2, 2] == -1
    assert G.inverse[2, 2] == -1
    assert G.matrix[0, 2] == 0
    assert sp.simplify(G.determinant.expr + twisted2.determinant.expr) == 0
    assert G.gram(Monomial((), True), Monomial((), True)) == -1
    assert G.gram(Monomial((0,)), Monomial((), True)).is_zero


def test_coordinate_metric_is_inverse_pair(twisted2):
    G, G_inv = coordinate_metric(twisted2)
    assert sp.simplify(G * G_inv - sp.eye(3)) == sp.zeros(3, 3)
    assert sp.simplify(G.det() + twisted2.determinant.expr / T**2) == 0


def test_volume_form_star_one(twisted2):
    vol = volume_form(twisted2)
    assert vol.coefficient(Monomial((0, 1), True)) == twisted2.volume_density
    assert _same(hodge_star(Form.scalar(2, 1), twisted2), vol)
    assert _same(hodge_star(vol, twisted2), Form.scalar(2, -1))


def test_flat_three_dimensional_star_table(flat3):
    n = 3
    dx, dy, dz = (Form.dx(n, a) for a in range(n))
    theta = Form.theta(n)
    table = [
        (wedge(dx, dy), -wedge(theta, dz)),
        (wedge(dx, dz), wedge(theta, dy)),
        (wedge(dy, dz), -wedge(theta, dx)),
        (wedge(theta, dx), wedge(dy, dz)),
        (wedge(theta, dy), -wedge(dx, dz)),
        (wedge(theta, dz), wedge(dx, dy)),
    ]
    for source, expected in table:
        assert _same(hodge_star(source, flat3), expected, 1e-12), str(source)


def test_star_table_lists_every_monomial(flat_bundle):
    n = flat_bundle.n
    rows = star_table(flat_bundle)
    assert len(rows) == 2 ** (n + 1)
    assert [mono for mono, _ in rows] == [m for k in range(n + 2) for m in basis(n, k)]
    assert star_table_rows(flat_bundle)[0][0] == "1"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_double_star_sign(n):
    rng = np.random.default_rng([7, n])
    bundle = random_bundle(rng, n)
    for k in range(n + 2):
        xi = random_form(rng, n, k)
        twice = hodge_star(hodge_star(xi, bundle), bundle)
        assert _same(twice, xi * star_sign(n, k)), f"k={k}"


def test_random_bundle_has_off_diagonal_metric():
    bundle = random_bundle(np.random.default_rng(5), 3)
    matrix = bundle.metric_matrix()
    assert matrix[0, 1] != 0 and matrix[1, 2] != 0
    assert matrix == matrix.T
    assert matrix[0, 2] == 0


def test_star_sign_values():
    assert star_sign(3, 0) == -1
    assert star_sign(3, 2) == -1
    assert star_sign(2, 1) == -1
    assert star_sign(1, 1) == 1


def test_defining_relation(twisted2, rng):
    G = metric_g(twisted2)
    vol = volume_form(twisted2)
    for k in range(4):
        xi = random_form(rng, 2, k)
        star_xi = hodge_star(xi, twisted2)
        for eta in basis(2, k):
            inner = sum((c * G.gram(eta, m) for m, c in xi), 0 * t())
            assert _same(wedge(Form.monomial(2, eta), star_xi), vol * inner), str(eta)


def test_base_hodge_star(flat3):
    assert base_hodge_star(Form.dx(3, 0), flat3) == wedge(Form.dx(3, 1), Form.dx(3, 2))
    assert base_hodge_star(Form.scalar(3, 1), flat3) == Form.monomial(3, Monomial((0, 1, 2)))
    with pytest.raises(FormError):
        base_hodge_star(Form.theta(3), flat3)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_local_star_formulas(twisted2, rng, k):
    n = 2
    s = random_form(rng, n, k, horizontal=True)
    theta = Form.theta(n)
    star_m = base_hodge_star(s, twisted2)
    assert _same(hodge_star(s, twisted2), wedge(theta, star_m) * (-1) ** (n + k))
    assert _same(hodge_star(wedge(theta, s), twisted2), star_m * (-1) ** (n + 1))


def test_codifferential_examples(twisted2, rng):
    assert codifferential(Form.scalar(2, x(0) * t()), twisted2) == Form.zero(2, 0)
    vol = volume_form(twisted2)
    assert codifferential(vol, twisted2).vanishes_on(fixed_samples(2), TOLERANCE)
    for k in (2, 3):
        xi = random_form(rng, 2, k)
        assert codifferential(codifferential(xi, twisted2), twisted2).vanishes_on(
            fixed_samples(2), TOLERANCE
        )


def test_laplacian_of_constant(flat_bundle):
    assert laplacian(Form.scalar(flat_bundle.n, 3), flat_bundle).is_zero


def test_laplacian_of_fibre_monomial():
    # Δ t^λ = −L² t^λ on a flat bundle
    flat = CarrollBundle.flat(1)
    image = laplacian(Form.scalar(1, t() ** 2), flat)
    assert _same(image, Form.scalar(1, -4 * t() ** 2))


@pytest.mark.parametrize("name", ["d", "star", "delta", "laplacian"])
def test_operators_commute_with_lie_derivative(twisted2, rng, name):
    operators = {
        "d": exterior_derivative,
        "star": hodge_star,
        "delta": codifferential,
        "laplacian": laplacian,
    }
    op = operators[name]
    xi = random_form(rng, 2, 1, weight=2)
    assert _same(lie_euler(op(xi, twisted2)), op(lie_euler(xi), twisted2))
    image = op(xi, twisted2)
    assert image.is_zero or weight_of(image, twisted2) == 2.0


def test_star_swaps_horizontal_and_vertical(twisted2, rng):
    s = random_form(rng, 2, 1, horizontal=True)
    assert all(m.theta for m, _ in hodge_star(s, twisted2))
    assert hodge_star(wedge(Form.theta(2), s), twisted2).is_horizontal


def test_classify_examples():
    flat = CarrollBundle.flat(2)
    constant = classify(Form.scalar(2, 5), flat)
    assert (constant.closed, constant.coclosed, constant.harmonic) == (True, True, True)

    assert classify(Form.theta(2), flat).closed

    vol = classify(volume_form(flat), flat)
    assert (vol.closed, vol.coclosed, vol.harmonic) == (True, True, True)


def test_harmonic_does_not_imply_closed():
    line = CarrollBundle.flat(1)
    verdict = classify(Form.scalar(1, x(0)), line)
    assert verdict.harmonic
    assert not verdict.closed
    assert verdict.closed_residual > 0.1


def test_star_rejects_degree_above_top(flat_bundle):
    n = flat_bundle.n
    with pytest.raises(FormError):
        hodge_star(Form.zero(n, n + 2), flat_bundle)
