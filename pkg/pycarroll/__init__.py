"""Initialize pycarroll."""

import logging
from typing import Optional

from pycarroll.const import DEFAULT_SAMPLE_COUNT, DEFAULT_SEED, DEFAULT_TOLERANCE
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
from pycarroll.helpers import SampleSet
from pycarroll.hodge import (
    Classification,
    MetricG,
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
    volume_form,
)
from pycarroll.scalar_field import (
    EvaluationError,
    ExpressionSyntaxError,
    Point,
    ScalarExpr,
    evaluate,
    parse_scalar,
    partial,
)
from pycarroll.version import __version__

_LOGGER = logging.getLogger(__name__)

__all__ = [
    "BundleError",
    "Carroll",
    "CarrollBundle",
    "Classification",
    "EvaluationError",
    "ExpressionSyntaxError",
    "Form",
    "FormError",
    "MetricG",
    "Monomial",
    "Point",
    "ScalarExpr",
    "__version__",
    "base_hodge_star",
    "basis",
    "classify",
    "codifferential",
    "coordinate_components",
    "coordinate_metric",
    "covariant_derivative",
    "curvature",
    "decompose",
    "evaluate",
    "exterior_derivative",
    "hodge_star",
    "inner_product",
    "interior_euler",
    "laplacian",
    "lie_euler",
    "metric_g",
    "parse_form",
    "parse_scalar",
    "partial",
    "star_sign",
    "star_table",
    "volume_form",
    "wedge",
    "weight_of",
]


class Carroll:
    """Operators of one bundle, with its sample set and tolerance bound in."""

    def __init__(
        self,
        bundle: CarrollBundle,
        sample_count: int = DEFAULT_SAMPLE_COUNT,
        seed: int = DEFAULT_SEED,
        tolerance: float = DEFAULT_TOLERANCE,
    ) -> None:
        self.bundle = bundle
        self.sample_count = sample_count
        self.seed = seed
        self.tolerance = tolerance

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.__dict__})"

    def __eq__(self, other) -> bool:
        return self is other or self.__dict__ == other.__dict__

    @classmethod
    def flat(cls, n: int, **kwargs) -> "Carroll":
        return cls(CarrollBundle.flat(n), **kwargs)

    @property
    def n(self) -> int:
        return self.bundle.n

    @property
    def samples(self) -> SampleSet:
        return self.bundle.samples(self.sample_count, self.seed)

    def form(self, text: str) -> Form:
        return parse_form(text, self.n)

    def d(self, xi: Form) -> Form:
        return exterior_derivative(xi, self.bundle)

    def star(self, xi: Form) -> Form:
        return hodge_star(xi, self.bundle)

    def delta(self, xi: Form) -> Form:
        return codifferential(xi, self.bundle)

    def laplacian(self, xi: Form) -> Form:
        return laplacian(xi, self.bundle)

    def classify(self, xi: Form) -> Classification:
        return classify(xi, self.bundle, self.samples, self.tolerance)

    def weight(self, xi: Form):
        return weight_of(xi, self.bundle, self.tolerance)

    def is_zero(self, xi: Form, tolerance: Optional[float] = None) -> bool:
        return xi.vanishes_on(self.samples, self.tolerance if tolerance is None else tolerance)
