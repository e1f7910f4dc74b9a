"""Hodge theory of the Lorentzian metric G = g_M − θ⊗θ.

In the mixed coframe G is block-diagonal with inverse blockdiag(g_M⁻¹, −1),
the total space is oriented by dx¹∧...∧dxⁿ∧θ and the volume form is
√det g_M dx¹∧...∧dxⁿ∧θ = (−1)ⁿ θ∧Vol_M.
"""

from dataclasses import dataclass
from itertools import combinations
import logging
from typing import Dict, List, Optional, Tuple

import sympy as sp

from pycarroll.const import DEFAULT_TOLERANCE
from pycarroll.forms import (
    CarrollBundle,
    Form,
    FormError,
    Monomial,
    basis,
    exterior_derivative,
)
from pycarroll.helpers import SampleSet, permutation_sign
from pycarroll.scalar_field import T, Point, ScalarExpr, evaluate

_LOGGER = logging.getLogger(__name__)


class MetricG:
    """Blocks of G and G⁻¹ in the mixed coframe."""

    def __init__(self, bundle: CarrollBundle) -> None:
        self.bundle = bundle
        n = bundle.n
        self.matrix = sp.diag(bundle.metric_matrix(), -1)
        self.inverse = sp.diag(bundle.inverse_metric(), -1)
        self.determinant = ScalarExpr(-bundle.determinant.expr, check=False)
        self.signature = (n, 1)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(bundle={self.bundle!r})"

    def gram(self, left: Monomial, right: Monomial) -> ScalarExpr:
        """Induced inner product ⟨e^I, e^J⟩ = det(G⁻¹[I, J])."""
        if left.degree != right.degree or left.theta != right.theta:
            return ScalarExpr(0, check=False)
        block = self.bundle.inverse_metric()
        value = block.extract(list(left.indices), list(right.indices)).det() if left.indices else 1
        return ScalarExpr(-value if left.theta else value, check=False)


def metric_g(bundle: CarrollBundle) -> MetricG:
    if "metric_g" not in bundle._cache:
        bundle._cache["metric_g"] = MetricG(bundle)
    return bundle._cache["metric_g"]


def coordinate_metric(bundle: CarrollBundle) -> Tuple[sp.Matrix, sp.Matrix]:
    """G and G⁻¹ in the coordinate coframe {dx^a, dt}; singular at t = 0."""
    g = bundle.metric_matrix()
    g_inv = bundle.inverse_metric()
    a = sp.Matrix([c.expr for c in bundle.connection])
    n = bundle.n
    G = sp.zeros(n + 1, n + 1)
    G[:n, :n] = g - a * a.T
    G[:n, n] = -a / T
    G[n, :n] = -a.T / T
    G[n, n] = -1 / T**2
    G_inv = sp.zeros(n + 1, n + 1)
    G_inv[:n, :n] = g_inv
    G_inv[:n, n] = -T * g_inv * a
    G_inv[n, :n] = -T * (g_inv * a).T
    G_inv[n, n] = -(T**2) + T**2 * (a.T * g_inv * a)[0, 0]
    return G, G_inv


def volume_form(bundle: CarrollBundle) -> Form:
    return Form.monomial(bundle.n, Monomial(tuple(range(bundle.n)), True), bundle.volume_density)


def _complement(mono: Monomial, n: int) -> Monomial:
    indices = tuple(a for a in range(n) if a not in mono.indices)
    return Monomial(indices, not mono.theta)


def _star_images(bundle: CarrollBundle) -> Dict[Monomial, Form]:
    """⋆e^J = √g Σ_I ⟨e^I, e^J⟩ σ(I, I^c) e^{I^c} for every basis monomial J."""
    if "star_images" in bundle._cache:
        return bundle._cache["star_images"]
    n = bundle.n
    G = metric_g(bundle)
    images: Dict[Monomial, Form] = {}
    for k in range(n + 2):
        for target in basis(n, k):
            result = Form.zero(n, n + 1 - k)
            for source in basis(n, k):
                inner = G.gram(source, target)
                if inner.is_zero:
                    continue
                rest = _complement(source, n)
                sign = permutation_sign(source.sequence(n) + rest.sequence(n))
                coefficient = inner * bundle.volume_density
                result = result + Form.monomial(n, rest, coefficient if sign > 0 else -coefficient)
            images[target] = result
    bundle._cache["star_images"] = images
    _LOGGER.debug("Computed %d Hodge star images for %s", len(images), bundle)
    return images


def _check(xi: Form, bundle: CarrollBundle) -> None:
    if xi.n != bundle.n:
        raise FormError(f"Form lives on n = {xi.n}, bundle has n = {bundle.n}")
    if xi.degree > bundle.n + 1:
        raise FormError(f"Degree {xi.degree} exceeds n + 1 = {bundle.n + 1}")


def hodge_star(xi: Form, bundle: CarrollBundle) -> Form:
    """Hodge star of G, characterised by η∧⋆ξ = ⟨η, ξ⟩_G Vol_P."""
    _check(xi, bundle)
    images = _star_images(bundle)
    result = Form.zero(bundle.n, bundle.n + 1 - xi.degree)
    for mono, coefficient in xi:
        result = result + images[mono] * coefficient
    return result


def base_hodge_star(xi: Form, bundle: CarrollBundle) -> Form:
    """Riemannian star ⋆_M of g_M applied fibre-wise to a horizontal form."""
    _check(xi, bundle)
    if not xi.is_horizontal:
        raise FormError("Base Hodge star needs a horizontal form")
    n = bundle.n
    key = "base_star_images"
    if key not in bundle._cache:
        inverse = bundle.inverse_metric()
        images: Dict[Monomial, Form] = {}
        for k in range(n + 1):
            for target in combinations(range(n), k):
                result = Form.zero(n, n - k)
                for source in combinations(range(n), k):
                    inner = inverse.extract(list(source), list(target)).det() if k else 1
                    if inner == 0:
                        continue
                    rest = tuple(a for a in range(n) if a not in source)
                    sign = permutation_sign(source + rest)
                    coefficient = ScalarExpr(inner, check=False) * bundle.volume_density
                    result = result + Form.monomial(
                        n, Monomial(rest), coefficient if sign > 0 else -coefficient
                    )
                images[Monomial(target)] = result
        bundle._cache[key] = images
    images = bundle._cache[key]
    result = Form.zero(n, n - xi.degree)
    for mono, coefficient in xi:
        result = result + images[mono] * coefficient
    return result


def inner_product(xi: Form, eta: Form, bundle: CarrollBundle, point: Point) -> float:
    """Pointwise ⟨ξ, η⟩_G; indefinite, so ⟨θ, θ⟩ = −1."""
    _check(xi, bundle)
    _check(eta, bundle)
    if xi.degree != eta.degree:
        raise FormError(f"Inner product of degrees {xi.degree} and {eta.degree}")
    G = metric_g(bundle)
    total = ScalarExpr(0, check=False)
    for left, a in xi:
        for right, b in eta:
            total = total + a * b * G.gram(left, right)
    return evaluate(total, point)


def star_sign(n: int, k: int) -> int:
    """⋆⋆ = (−1)^{1 + k(n+1−k)} on k-forms of the (n+1)-dimensional total space."""
    return -1 if (1 + k * (n + 1 - k)) % 2 else 1


def codifferential(xi: Form, bundle: CarrollBundle) -> Form:
    """δ = (−1)^{1 + k(n+1−k)} ⋆d⋆; zero on functions."""
    _check(xi, bundle)
    k = xi.degree
    if k == 0:
        return Form.zero(bundle.n, 0)
    result = hodge_star(exterior_derivative(hodge_star(xi, bundle), bundle), bundle)
    return result if star_sign(bundle.n, k) > 0 else -result


def laplacian(xi: Form, bundle: CarrollBundle) -> Form:
    """Hodge–de Rham Laplacian Δ = dδ + δd."""
    _check(xi, bundle)
    k = xi.degree
    result = Form.zero(bundle.n, k)
    if k >= 1:
        result = result + exterior_derivative(codifferential(xi, bundle), bundle)
    if k <= bundle.n:
        result = result + codifferential(exterior_derivative(xi, bundle), bundle)
    return result


@dataclass
class Classification:
    closed: bool
    coclosed: bool
    harmonic: bool
    closed_residual: float
    coclosed_residual: float
    harmonic_residual: float


def classify(
    xi: Form,
    bundle: CarrollBundle,
    samples: Optional[SampleSet] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Classification:
    """Sample-based closed / coclosed / harmonic verdicts."""
    samples = samples or bundle.samples()
    closed_residual = exterior_derivative(xi, bundle).max_abs(samples)[0]
    coclosed_residual = codifferential(xi, bundle).max_abs(samples)[0]
    harmonic_residual = laplacian(xi, bundle).max_abs(samples)[0]
    closed = closed_residual < tolerance
    coclosed = coclosed_residual < tolerance
    harmonic = harmonic_residual < tolerance
    if closed and coclosed and not harmonic:
        _LOGGER.warning(
            "Closed and coclosed form with Laplacian residual %.3e above tolerance",
            harmonic_residual,
        )
        harmonic = True
    return Classification(
        closed, coclosed, harmonic, closed_residual, coclosed_residual, harmonic_residual
    )


def star_table(bundle: CarrollBundle) -> List[Tuple[Monomial, Form]]:
    """⋆ of every basis monomial, degree by degree."""
    images = _star_images(bundle)
    return [(mono, images[mono]) for k in range(bundle.n + 2) for mono in basis(bundle.n, k)]


def star_table_rows(bundle: CarrollBundle) -> List[List[str]]:
    return [[str(mono), str(image)] for mono, image in star_table(bundle)]
