"""Exterior calculus on a Carrollian bundle in the mixed coframe {dx^a, θ}.

A k-form is a finite sum of coefficients times basis monomials
dx^{a_1}∧...∧dx^{a_j} (∧θ), base indices increasing and θ last. The
connection form θ = t⁻¹dt + A_a dx^a is closed only when the curvature
F = dA vanishes: dθ = F.
"""

from dataclasses import dataclass
from itertools import combinations
import logging
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr as sympy_parse_expr,
    standard_transformations,
)

from pycarroll.const import (
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DT_LABEL,
    THETA_LABEL,
    WEIGHT_ANY,
    WEIGHT_NON_HOMOGENEOUS,
)
from pycarroll.helpers import (
    Box,
    SampleSet,
    max_abs_with_witness,
    permutation_sign,
    sample_points,
)
from pycarroll.scalar_field import (
    T,
    ExpressionSyntaxError,
    LogAbs,
    ScalarExpr,
    ScalarLike,
    as_scalar,
    coordinate_symbol,
    euler_derivative,
    evaluate_many,
)

_LOGGER = logging.getLogger(__name__)

Weight = Union[float, str]


class FormError(ValueError):
    """Raised on degree, dimension or horizontality violations."""


class BundleError(ValueError):
    """Raised on invalid bundle data."""


@dataclass(frozen=True)
class Monomial:
    """Basis monomial: strictly increasing base axes (0-based) and a θ flag."""

    indices: Tuple[int, ...] = ()
    theta: bool = False

    def __post_init__(self) -> None:
        indices = tuple(int(i) for i in self.indices)
        if any(i < 0 for i in indices) or any(a >= b for a, b in zip(indices, indices[1:])):
            raise FormError(f"Monomial indices must be increasing and non-negative: {indices}")
        object.__setattr__(self, "indices", indices)

    @property
    def degree(self) -> int:
        return len(self.indices) + int(self.theta)

    def sort_key(self) -> Tuple[bool, Tuple[int, ...]]:
        return self.theta, self.indices

    def sequence(self, n: int) -> Tuple[int, ...]:
        """Generator sequence with θ encoded as axis n."""
        return self.indices + ((n,) if self.theta else ())

    @classmethod
    def from_sequence(cls, sequence: Sequence[int], n: int) -> Tuple[int, Optional["Monomial"]]:
        """Sort a generator sequence into a monomial; returns (sign, monomial)."""
        sign = permutation_sign(sequence)
        if sign == 0:
            return 0, None
        ordered = sorted(sequence)
        theta = bool(ordered) and ordered[-1] == n
        return sign, cls(tuple(ordered[:-1] if theta else ordered), theta)

    def label(self, theta_label: str = THETA_LABEL) -> str:
        parts = [f"dx{i + 1}" for i in self.indices]
        if self.theta:
            parts.append(theta_label)
        return "^".join(parts) if parts else "1"

    def __str__(self) -> str:
        return self.label()


def basis(n: int, k: int) -> List[Monomial]:
    """Basis monomials of degree k: horizontal first, then those ending in θ."""
    horizontal = [Monomial(c) for c in combinations(range(n), k)] if k <= n else []
    vertical = [Monomial(c, True) for c in combinations(range(n), k - 1)] if k >= 1 else []
    return horizontal + vertical


class Form:
    """A k-form on the total space of a bundle with n-dimensional base."""

    __slots__ = ("n", "degree", "_terms")

    def __init__(
        self, n: int, degree: int, terms: Optional[Mapping[Monomial, ScalarLike]] = None
    ) -> None:
        if n < 1:
            raise FormError(f"Base dimension must be at least 1, got {n}")
        if degree < 0:
            raise FormError(f"Degree must be non-negative, got {degree}")
        self.n = n
        self.degree = degree
        self._terms: Dict[Monomial, ScalarExpr] = {}
        for mono, coefficient in (terms or {}).items():
            if mono.degree != degree:
                raise FormError(f"Monomial {mono} has degree {mono.degree}, form has {degree}")
            if mono.indices and mono.indices[-1] >= n:
                raise FormError(f"Monomial {mono} uses an axis outside n = {n}")
            coefficient = as_scalar(coefficient)
            if not coefficient.is_zero:
                self._terms[mono] = coefficient

    @classmethod
    def zero(cls, n: int, degree: int) -> "Form":
        return cls(n, degree)

    @classmethod
    def scalar(cls, n: int, value: ScalarLike) -> "Form":
        return cls(n, 0, {Monomial(): value})

    @classmethod
    def monomial(cls, n: int, mono: Monomial, coefficient: ScalarLike = 1) -> "Form":
        return cls(n, mono.degree, {mono: coefficient})

    @classmethod
    def dx(cls, n: int, axis: int) -> "Form":
        return cls.monomial(n, Monomial((axis,)))

    @classmethod
    def theta(cls, n: int) -> "Form":
        return cls.monomial(n, Monomial((), True))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, degree={self.degree}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{m}" for m, c in self.terms())

    def terms(self) -> List[Tuple[Monomial, ScalarExpr]]:
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def __iter__(self) -> Iterator[Tuple[Monomial, ScalarExpr]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, mono: Monomial) -> ScalarExpr:
        return self._terms.get(mono, ScalarExpr(0, check=False))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_horizontal(self) -> bool:
        return not any(m.theta for m in self._terms)

    def _check_compatible(self, other: "Form") -> None:
        if self.n != other.n:
            raise FormError(f"Mismatched bundle dimension: {self.n} and {other.n}")
        if self.degree != other.degree:
            raise FormError(f"Cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        terms = dict(self._terms)
        for mono, coefficient in other._terms.items():
            terms[mono] = terms[mono] + coefficient if mono in terms else coefficient
        return Form(self.n, self.degree, terms)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.n, self.degree, {m: -c for m, c in self._terms.items()})

    def __mul__(self, factor: ScalarLike) -> "Form":
        factor = as_scalar(factor)
        return Form(self.n, self.degree, {m: c * factor for m, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.n == other.n and self.degree == other.degree and self._terms == other._terms
        )

    def map_coefficients(self, fn) -> "Form":
        return Form(self.n, self.degree, {m: fn(c) for m, c in self._terms.items()})

    def evaluate(self, samples: SampleSet) -> Dict[Monomial, np.ndarray]:
        return {m: evaluate_many(c, samples) for m, c in self._terms.items()}

    def max_abs(self, samples: SampleSet) -> Tuple[float, Optional[str]]:
        """Largest |coefficient| over the sample set, with a witness point."""
        worst: Tuple[float, Optional[str]] = (0.0, None)
        for values in self.evaluate(samples).values():
            candidate = max_abs_with_witness(values, samples)
            if candidate[0] > worst[0]:
                worst = candidate
        return worst

    def vanishes_on(self, samples: SampleSet, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.max_abs(samples)[0] < tolerance


def _check_same_base(*forms: Form) -> int:
    dims = {f.n for f in forms}
    if len(dims) != 1:
        raise FormError(f"Mismatched bundle dimension: {sorted(dims)}")
    return dims.pop()


class CarrollBundle:
    """Local data (g_M, A) of a Carrollian ℝ×-bundle over an n-dimensional chart.

    ``metric`` is the Riemannian base metric, ``connection`` the components
    A_a of θ = t⁻¹dt + A_a dx^a. Neither may depend on t. The volume density
    √det g_M is computed unless given explicitly (it must then square to the
    determinant and stay positive on the sampling box).
    """

    def __init__(
        self,
        metric: Sequence[Sequence[ScalarLike]],
        connection: Optional[Sequence[ScalarLike]] = None,
        volume_density: Optional[ScalarLike] = None,
        box: Optional[Box] = None,
        name: str = "bundle",
    ) -> None:
        n = len(metric)
        if n < 1:
            raise BundleError("Base dimension must be at least 1")
        if any(len(row) != n for row in metric):
            raise BundleError(f"Metric must be a square {n}x{n} matrix")
        self.n = n
        self.name = name
        self.metric: Tuple[Tuple[ScalarExpr, ...], ...] = tuple(
            tuple(as_scalar(entry) for entry in row) for row in metric
        )
        if connection is None:
            connection = [0] * n
        if len(connection) != n:
            raise BundleError(f"Connection needs {n} components, got {len(connection)}")
        self.connection: Tuple[ScalarExpr, ...] = tuple(as_scalar(a) for a in connection)
        self.box = list(box) if box is not None else None
        self._cache: Dict[str, object] = {}

        for a in range(n):
            for b in range(n):
                if self.metric[a][b].depends_on_fibre:
                    raise BundleError(f"g_M[{a + 1}][{b + 1}] depends on t")
                if b > a and self.metric[a][b].expr - self.metric[b][a].expr != 0:
                    raise BundleError(f"Metric is not symmetric at ({a + 1}, {b + 1})")
        for a, component in enumerate(self.connection):
            if component.depends_on_fibre:
                raise BundleError(f"A_{a + 1} depends on t")

        matrix = self.metric_matrix()
        self._determinant = ScalarExpr(matrix.det(), check=False)
        if volume_density is None:
            density = sp.sqrt(self._determinant.expr)
            if density.has(sp.Abs):
                raise BundleError(
                    "Volume density needs an absolute value; pass it explicitly"
                )
            self.volume_density = ScalarExpr(density, check=False)
        else:
            self.volume_density = as_scalar(volume_density)
        self._validate()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, n={self.n})"

    @classmethod
    def flat(
        cls, n: int, connection: Optional[Sequence[ScalarLike]] = None, name: str = "flat"
    ) -> "CarrollBundle":
        metric = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        return cls(metric, connection, volume_density=1, name=name)

    def metric_matrix(self) -> sp.Matrix:
        return sp.Matrix(self.n, self.n, lambda a, b: self.metric[a][b].expr)

    def inverse_metric(self) -> sp.Matrix:
        if "inverse" not in self._cache:
            matrix = self.metric_matrix()
            if matrix.is_diagonal():
                inverse = sp.diag(*[1 / matrix[a, a] for a in range(self.n)])
            else:
                inverse = matrix.inv()
            self._cache["inverse"] = inverse
        return self._cache["inverse"]

    @property
    def determinant(self) -> ScalarExpr:
        return self._determinant

    @property
    def is_flat_connection(self) -> bool:
        return curvature(self).is_zero

    def samples(self, count: int = DEFAULT_SAMPLE_COUNT, seed: int = DEFAULT_SEED) -> SampleSet:
        key = f"samples:{count}:{seed}"
        if key not in self._cache:
            self._cache[key] = sample_points(self.n, count, seed, self.box)
        return self._cache[key]

    def _validate(self) -> None:
        samples = self.samples()
        values = np.empty((len(samples), self.n, self.n))
        for a in range(self.n):
            for b in range(self.n):
                values[:, a, b] = evaluate_many(self.metric[a][b], samples)
        eigenvalues = np.linalg.eigvalsh(values)
        if np.any(eigenvalues <= 0):
            index = int(np.argmin(eigenvalues.min(axis=1)))
            raise BundleError(
                f"Metric is not positive definite at x={tuple(samples.x[index])}"
            )
        density = evaluate_many(self.volume_density, samples)
        determinant = evaluate_many(self._determinant, samples)
        if np.any(density <= 0) or not np.allclose(
            density**2, determinant, rtol=1e-9, atol=1e-12
        ):
            raise BundleError("Volume density must be the positive root of det g_M")
        _LOGGER.debug("Validated %s on %d sample points", self, len(samples))


def wedge(xi: Form, eta: Form) -> Form:
    """Exterior product; signs from the permutation sorting the generators."""
    n = _check_same_base(xi, eta)
    degree = xi.degree + eta.degree
    terms: Dict[Monomial, ScalarExpr] = {}
    for left, a in xi:
        for right, b in eta:
            sign, mono = Monomial.from_sequence(left.sequence(n) + right.sequence(n), n)
            if mono is None:
                continue
            product = a * b if sign > 0 else -(a * b)
            terms[mono] = terms[mono] + product if mono in terms else product
    return Form(n, degree, terms)


def decompose(xi: Form) -> Tuple[Form, Form]:
    """Split ξ = S + T with S horizontal and T = (part containing θ)."""
    horizontal = {m: c for m, c in xi if not m.theta}
    vertical = {m: c for m, c in xi if m.theta}
    return Form(xi.n, xi.degree, horizontal), Form(xi.n, xi.degree, vertical)


def interior_euler(xi: Form) -> Form:
    """Contraction with Δ_P = t∂_t: i(dx^I∧θ) = (−1)^|I| dx^I."""
    if xi.degree == 0:
        raise FormError("Interior product needs a form of degree at least 1")
    terms = {
        Monomial(m.indices): c if len(m.indices) % 2 == 0 else -c for m, c in xi if m.theta
    }
    return Form(xi.n, xi.degree - 1, terms)


def lie_euler(xi: Form, bundle: Optional[CarrollBundle] = None) -> Form:
    """Lie derivative along Δ_P; acts coefficient-wise since L θ = 0 = L dx^a."""
    if bundle is not None:
        _check_bundle(xi, bundle)
    return xi.map_coefficients(euler_derivative)


def _check_bundle(xi: Form, bundle: CarrollBundle) -> None:
    if xi.n != bundle.n:
        raise FormError(f"Form lives on n = {xi.n}, bundle has n = {bundle.n}")


def curvature(bundle: CarrollBundle) -> Form:
    """F = dA = Σ_{a<b} (∂_a A_b − ∂_b A_a) dx^a∧dx^b."""
    if "curvature" not in bundle._cache:
        A = bundle.connection
        terms = {
            Monomial((a, b)): A[b].partial(a) - A[a].partial(b)
            for a, b in combinations(range(bundle.n), 2)
        }
        bundle._cache["curvature"] = Form(bundle.n, 2, terms)
    return bundle._cache["curvature"]


def function_differential(f: ScalarLike, bundle: CarrollBundle) -> Form:
    """df = (∂_a f − A_a t∂_t f) dx^a + (t∂_t f) θ."""
    f = as_scalar(f)
    lf = euler_derivative(f)
    terms: Dict[Monomial, ScalarExpr] = {
        Monomial((a,)): f.partial(a) - bundle.connection[a] * lf for a in range(bundle.n)
    }
    terms[Monomial((), True)] = lf
    return Form(bundle.n, 1, terms)


def exterior_derivative(xi: Form, bundle: CarrollBundle) -> Form:
    """d on the total space; d(f dx^I∧θ) = df∧dx^I∧θ + (−1)^|I| f dx^I∧F."""
    _check_bundle(xi, bundle)
    n = bundle.n
    result = Form.zero(n, xi.degree + 1)
    if xi.degree > n:
        return result
    field_strength = curvature(bundle)
    for mono, coefficient in xi:
        result = result + wedge(function_differential(coefficient, bundle), Form.monomial(n, mono))
        if mono.theta and not field_strength.is_zero:
            base = Form.monomial(n, Monomial(mono.indices), coefficient)
            term = wedge(base, field_strength)
            result = result + (term if len(mono.indices) % 2 == 0 else -term)
    return result


def covariant_derivative(xi: Form, bundle: CarrollBundle) -> Form:
    """D = d − θ∧L_Δ on horizontal forms; the result is horizontal."""
    _check_bundle(xi, bundle)
    if not xi.is_horizontal:
        raise FormError("Covariant derivative is defined on horizontal forms only")
    result = exterior_derivative(xi, bundle) - wedge(Form.theta(bundle.n), lie_euler(xi))
    if not result.is_horizontal:
        raise FormError("Covariant derivative produced a vertical component")
    return result


def monomial_weight(expr: sp.Expr) -> Optional[sp.Expr]:
    """Exponent λ when every term is (t-free)·t^λ with the same λ."""
    weight: Optional[sp.Expr] = None
    for term in sp.Add.make_args(sp.expand(expr)):
        _, dependent = term.as_independent(T, as_Add=False)
        if dependent == 1:
            power = sp.S.Zero
        elif dependent == T:
            power = sp.S.One
        elif dependent.is_Pow and dependent.base == T and dependent.exp.is_Number:
            power = dependent.exp
        else:
            return None
        if weight is None:
            weight = power
        elif weight != power:
            return None
    return weight


def weight_of(
    xi: Form, bundle: Optional[CarrollBundle] = None, tolerance: float = DEFAULT_TOLERANCE
) -> Weight:
    """Homogeneity λ with L_Δ ξ = λ ξ, ``"any"`` for 0, else ``"non-homogeneous"``."""
    if xi.is_zero:
        return WEIGHT_ANY
    weight: Optional[sp.Expr] = None
    for _, coefficient in xi:
        candidate = monomial_weight(coefficient.expr)
        if candidate is None or (weight is not None and candidate != weight):
            return WEIGHT_NON_HOMOGENEOUS
        weight = candidate
    if bundle is not None:
        residual = lie_euler(xi) - xi * ScalarExpr(weight, check=False)
        if not residual.vanishes_on(bundle.samples(), tolerance):
            return WEIGHT_NON_HOMOGENEOUS
    return float(weight)


def coordinate_components(xi: Form, bundle: CarrollBundle) -> Dict[str, ScalarExpr]:
    """Components in the coordinate coframe {dx^a, dt} with θ = t⁻¹dt + A_a dx^a.

    Keys are labels such as ``dx1^dt``; dt is carried in the θ slot.
    """
    _check_bundle(xi, bundle)
    n = bundle.n
    theta_in_coordinates = Form(
        n,
        1,
        {
            Monomial((), True): ScalarExpr(1 / T, check=False),
            **{Monomial((a,)): bundle.connection[a] for a in range(n)},
        },
    )
    result = Form.zero(n, xi.degree)
    for mono, coefficient in xi:
        base = Form.monomial(n, Monomial(mono.indices), coefficient)
        result = result + (wedge(base, theta_in_coordinates) if mono.theta else base)
    return {m.label(DT_LABEL): c for m, c in result}


def parse_form(text: str, n: int) -> Form:
    """Parse ``t^2 * dx1^dx2 + x1*th^dx1``; ``^`` between generators is the wedge."""
    generators = {f"dx{a + 1}": a for a in range(n)}
    generators[THETA_LABEL] = n
    symbols = {name: sp.Symbol(f"__gen_{name}") for name in generators}
    lookup = {symbol: generators[name] for name, symbol in symbols.items()}

    local: Dict[str, object] = {
        "t": T,
        "sin": sp.sin,
        "cos": sp.cos,
        "exp": sp.exp,
        "ln": LogAbs,
        "sqrt": sp.sqrt,
        "pi": sp.pi,
        **{f"x{a + 1}": coordinate_symbol(a) for a in range(n)},
        **symbols,
    }
    if not text.strip():
        raise ExpressionSyntaxError("Empty form expression")
    try:
        tree = sympy_parse_expr(
            text,
            local_dict=local,
            transformations=standard_transformations + (convert_xor,),
            evaluate=False,
        )
    except (SyntaxError, TypeError, ValueError, AttributeError) as err:
        raise ExpressionSyntaxError(f"Cannot parse form '{text}': {err}") from err

    def has_generator(node: sp.Expr) -> bool:
        return any(s in lookup for s in node.free_symbols)

    def decode(node: sp.Expr) -> Form:
        if node in lookup:
            axis = lookup[node]
            return Form.theta(n) if axis == n else Form.dx(n, axis)
        if not has_generator(node):
            return Form.scalar(n, ScalarExpr(node.doit()))
        if node.is_Add:
            parts = [decode(arg) for arg in node.args]
            total = parts[0]
            for part in parts[1:]:
                total = total + part
            return total
        if node.is_Mul:
            form_factors = [arg for arg in node.args if has_generator(arg)]
            if len(form_factors) > 1:
                raise ExpressionSyntaxError(f"Use '^' for the wedge product in '{node}'")
            scalar = sp.Mul(*[arg for arg in node.args if not has_generator(arg)]).doit()
            return decode(form_factors[0]) * ScalarExpr(scalar)
        if node.is_Pow and has_generator(node.exp):
            return wedge(decode(node.base), decode(node.exp))
        raise ExpressionSyntaxError(f"Cannot read '{node}' as a form")

    return decode(tree)
