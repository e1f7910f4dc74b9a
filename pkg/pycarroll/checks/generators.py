"""Seeded random inputs for the property suites."""

import logging
from typing import Optional

import numpy as np
import sympy as sp

from pycarroll.forms import CarrollBundle, Form, basis
from pycarroll.scalar_field import T, ScalarExpr, coordinate_symbol

_LOGGER = logging.getLogger(__name__)

MAX_WEIGHT = 3


def _small_rational(rng: np.random.Generator) -> sp.Rational:
    numerator = int(rng.integers(1, 5)) * (1 if rng.random() < 0.5 else -1)
    return sp.Rational(numerator, int(rng.integers(1, 4)))


def random_base_function(rng: np.random.Generator, n: int) -> sp.Expr:
    """Trig-polynomial in x1..xn with small rational coefficients."""
    x = [coordinate_symbol(a) for a in range(n)]
    expr = _small_rational(rng)
    for _ in range(int(rng.integers(1, 3))):
        a = int(rng.integers(0, n))
        b = int(rng.integers(0, n))
        kind = int(rng.integers(0, 4))
        if kind == 0:
            factor = x[a]
        elif kind == 1:
            factor = x[a] * x[b]
        elif kind == 2:
            factor = sp.sin(x[a])
        else:
            factor = sp.cos(x[a] + x[b])
        expr += _small_rational(rng) * factor
    return expr


def random_scalar(
    rng: np.random.Generator, n: int, weight: Optional[int] = None
) -> ScalarExpr:
    """b(x)·t^λ; λ drawn from 0..3 unless given."""
    if weight is None:
        weight = int(rng.integers(0, MAX_WEIGHT + 1))
    return ScalarExpr(random_base_function(rng, n) * T**weight, check=False)


def random_form(
    rng: np.random.Generator,
    n: int,
    degree: int,
    weight: Optional[int] = None,
    horizontal: Optional[bool] = None,
    density: float = 0.6,
) -> Form:
    """Non-zero random form of fixed degree; ``horizontal`` restricts the monomials."""
    monomials = basis(n, degree)
    if horizontal is not None:
        monomials = [m for m in monomials if m.theta != horizontal]
    if not monomials:
        return Form.zero(n, degree)
    if weight is None:
        weight = int(rng.integers(0, MAX_WEIGHT + 1))
    chosen = [m for m in monomials if rng.random() < density]
    if not chosen:
        chosen = [monomials[int(rng.integers(0, len(monomials)))]]
    return Form(n, degree, {m: random_scalar(rng, n, weight) for m in chosen})


def random_bundle(rng: np.random.Generator, n: int, name: str = "random") -> CarrollBundle:
    """Non-flat base metric and a connection with curvature when n ≥ 2.

    The metric is diag(1 + c_a x_a²) plus constant 1/4 couplings of neighbouring
    axes when n ≥ 2; it stays diagonally dominant, so positive definite everywhere.
    """
    x = [coordinate_symbol(a) for a in range(n)]
    metric = [[sp.S.Zero] * n for _ in range(n)]
    for a in range(n):
        metric[a][a] = 1 + sp.Rational(int(rng.integers(1, 4)), 4) * x[a] ** 2
    for a in range(n - 1):
        metric[a][a + 1] = metric[a + 1][a] = sp.Rational(1, 4)
    connection = [
        _small_rational(rng) * x[(a + 1) % n] + _small_rational(rng) * sp.sin(x[a])
        for a in range(n)
    ]
    bundle = CarrollBundle(metric, connection, name=f"{name}(n={n})")
    _LOGGER.debug("Random bundle %s with A = %s", bundle, connection)
    return bundle
