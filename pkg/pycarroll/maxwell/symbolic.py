"""Carrollian electromagnetism on ℝ³×ℝ× with the trivial connection.

The field strength is 𝔽 = 𝔹 + θ∧𝔼 with
𝔹 = B_z dx∧dy − B_y dx∧dz + B_x dy∧dz and 𝔼 = E_x dx + E_y dy + E_z dz.
In logarithmic time u = ln|t| (so ∂_u = t∂_t) the equations d𝔽 = d⋆𝔽 = 0
read ∇·B = 0, ∇×E = ∂_u B, ∇·E = 0, ∇×B = −∂_u E.
"""

from dataclasses import dataclass
from functools import lru_cache
import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from pycarroll.const import DEFAULT_SAMPLE_COUNT, DEFAULT_SEED, DEFAULT_TOLERANCE
from pycarroll.forms import (
    CarrollBundle,
    Form,
    Monomial,
    covariant_derivative,
    exterior_derivative,
    wedge,
)
from pycarroll.helpers import SampleSet, max_abs_with_witness
from pycarroll.hodge import base_hodge_star, hodge_star
from pycarroll.scalar_field import (
    T,
    Point,
    ScalarExpr,
    ScalarLike,
    as_scalar,
    coordinate_symbol,
    evaluate,
    parse_scalar,
)

_LOGGER = logging.getLogger(__name__)

DIM = 3
Vector = Tuple[ScalarExpr, ScalarExpr, ScalarExpr]

# dx^a∧dx^b coefficient of 𝔹 as (sign, B component)
_TWO_FORM_DICTIONARY = {(0, 1): (1, 2), (0, 2): (-1, 1), (1, 2): (1, 0)}


class FieldConfigError(ValueError):
    """Raised on invalid field data or simulation configuration."""


class FormulationMismatch(ValueError):
    """Raised when the form and vector residuals disagree on vanishing."""

    def __init__(self, form_residual: float, vector_residual: float) -> None:
        super().__init__(
            f"Form residual {form_residual:.3e} and vector residual "
            f"{vector_residual:.3e} disagree"
        )
        self.form_residual = form_residual
        self.vector_residual = vector_residual


def _vector(components: Sequence[ScalarLike]) -> Vector:
    if len(components) != DIM:
        raise FieldConfigError(f"Expected {DIM} components, got {len(components)}")
    return tuple(as_scalar(c) for c in components)  # type: ignore[return-value]


@lru_cache(maxsize=None)
def flat_space() -> CarrollBundle:
    """ℝ³×ℝ× with the Euclidean metric and A = 0."""
    return CarrollBundle.flat(DIM, name="R3")


class EMFieldSymbolic:
    """Electric and magnetic fields as expressions in (x1, x2, x3, t)."""

    def __init__(self, e: Sequence[ScalarLike], b: Sequence[ScalarLike]) -> None:
        self.e = _vector(e)
        self.b = _vector(b)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(E={[str(c) for c in self.e]}, B={[str(c) for c in self.b]})"

    def __eq__(self, other) -> bool:
        return isinstance(other, EMFieldSymbolic) and (self.e, self.b) == (other.e, other.b)

    @classmethod
    def zero(cls) -> "EMFieldSymbolic":
        return cls([0, 0, 0], [0, 0, 0])

    @classmethod
    def parse(cls, e: Sequence[str], b: Sequence[str]) -> "EMFieldSymbolic":
        return cls([parse_scalar(c, DIM) for c in e], [parse_scalar(c, DIM) for c in b])

    def map(self, fn) -> "EMFieldSymbolic":
        return EMFieldSymbolic([fn(c) for c in self.e], [fn(c) for c in self.b])

    def energy_density(self) -> ScalarExpr:
        return sum((c * c for c in self.e + self.b), ScalarExpr(0, check=False)) / 2


def divergence(v: Vector) -> ScalarExpr:
    return v[0].partial(0) + v[1].partial(1) + v[2].partial(2)


def curl(v: Vector) -> Vector:
    return (
        v[2].partial(1) - v[1].partial(2),
        v[0].partial(2) - v[2].partial(0),
        v[1].partial(0) - v[0].partial(1),
    )


def magnetic_form(b: Vector) -> Form:
    """Horizontal 2-form 𝔹."""
    terms = {}
    for indices, (sign, component) in _TWO_FORM_DICTIONARY.items():
        terms[Monomial(indices)] = b[component] if sign > 0 else -b[component]
    return Form(DIM, 2, terms)


def electric_form(e: Vector) -> Form:
    """Horizontal 1-form 𝔼 (θ is added by assembly)."""
    return Form(DIM, 1, {Monomial((a,)): e[a] for a in range(DIM)})


def assemble_field_strength(f: EMFieldSymbolic) -> Form:
    """𝔽 = 𝔹 + θ∧𝔼."""
    return magnetic_form(f.b) + wedge(Form.theta(DIM), electric_form(f.e))


def star_field_strength(f: EMFieldSymbolic) -> Form:
    """Local formula ⋆𝔽 = (−1)^{n+1}⋆_M𝔼 + (−1)ⁿ θ∧⋆_M𝔹 with n = 3."""
    bundle = flat_space()
    star_e = base_hodge_star(electric_form(f.e), bundle)
    star_b = base_hodge_star(magnetic_form(f.b), bundle)
    return star_e - wedge(Form.theta(DIM), star_b)


@dataclass
class MaxwellResidual:
    """Form residuals of d𝔽 = d⋆𝔽 = 0 and the matching vector residuals."""

    d_field: Form
    d_star_field: Form
    div_b: ScalarExpr
    faraday: Vector
    div_e: ScalarExpr
    ampere: Vector
    form_residual: float = 0.0
    vector_residual: float = 0.0
    witness: Optional[str] = None
    consistent: bool = True

    def vector_components(self) -> Dict[str, ScalarExpr]:
        components = {"div_b": self.div_b, "div_e": self.div_e}
        for axis, name in enumerate("xyz"):
            components[f"faraday_{name}"] = self.faraday[axis]
            components[f"ampere_{name}"] = self.ampere[axis]
        return components

    def vanishes(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.form_residual < tolerance and self.vector_residual < tolerance


def vector_residuals(f: EMFieldSymbolic) -> Tuple[ScalarExpr, Vector, ScalarExpr, Vector]:
    """∇·B, ∇×E − L B, ∇·E, ∇×B + L E with L = t∂_t = ∂_u."""
    curl_e = curl(f.e)
    curl_b = curl(f.b)
    faraday = tuple(curl_e[a] - f.b[a].euler_derivative() for a in range(DIM))
    ampere = tuple(curl_b[a] + f.e[a].euler_derivative() for a in range(DIM))
    return divergence(f.b), faraday, divergence(f.e), ampere  # type: ignore[return-value]


def _max_scalar(exprs: Sequence[ScalarExpr], samples: SampleSet) -> Tuple[float, Optional[str]]:
    worst: Tuple[float, Optional[str]] = (0.0, None)
    for expr in exprs:
        candidate = max_abs_with_witness(expr.evaluate_many(samples), samples)
        if candidate[0] > worst[0]:
            worst = candidate
    return worst


def maxwell_residual(
    f: EMFieldSymbolic,
    samples: Optional[SampleSet] = None,
    tolerance: float = DEFAULT_TOLERANCE,
    strict: bool = True,
) -> MaxwellResidual:
    """Residuals of both formulations on the sample set; they must vanish together.

    A disagreement raises FormulationMismatch, or with strict=False is logged and
    reported through ``consistent``.
    """
    bundle = flat_space()
    samples = samples or bundle.samples(DEFAULT_SAMPLE_COUNT, DEFAULT_SEED)
    field_strength = assemble_field_strength(f)
    d_field = exterior_derivative(field_strength, bundle)
    d_star_field = exterior_derivative(hodge_star(field_strength, bundle), bundle)
    div_b, faraday, div_e, ampere = vector_residuals(f)

    form_value, form_witness = max(
        d_field.max_abs(samples), d_star_field.max_abs(samples), key=lambda item: item[0]
    )
    vector_value, vector_witness = _max_scalar([div_b, *faraday, div_e, *ampere], samples)
    consistent = (form_value < tolerance) == (vector_value < tolerance)
    if not consistent:
        if strict:
            raise FormulationMismatch(form_value, vector_value)
        _LOGGER.error(
            "Form residual %.3e and vector residual %.3e disagree", form_value, vector_value
        )
    return MaxwellResidual(
        d_field,
        d_star_field,
        div_b,
        faraday,
        div_e,
        ampere,
        form_residual=form_value,
        vector_residual=vector_value,
        witness=form_witness or vector_witness,
        consistent=consistent,
    )


def field_strength_residual(
    field_strength: Form, bundle: CarrollBundle, samples: Optional[SampleSet] = None
) -> Tuple[float, Optional[str]]:
    """max |d𝔽|, |d⋆𝔽| for a 2-form on any bundle (curved base and A ≠ 0 allowed)."""
    samples = samples or bundle.samples()
    d_field = exterior_derivative(field_strength, bundle)
    d_star_field = exterior_derivative(hodge_star(field_strength, bundle), bundle)
    return max(d_field.max_abs(samples), d_star_field.max_abs(samples), key=lambda i: i[0])


@dataclass
class LocalResidual:
    d_magnetic: Form
    d_electric: Form
    d_star_magnetic: Form
    d_star_electric: Form
    residual: float = 0.0

    def forms(self) -> Dict[str, Form]:
        return {
            "dB": self.d_magnetic,
            "dE": self.d_electric,
            "d*B": self.d_star_magnetic,
            "d*E": self.d_star_electric,
        }


def local_maxwell_residual(
    f: EMFieldSymbolic, samples: Optional[SampleSet] = None
) -> LocalResidual:
    """Flat local system d𝔹 = d𝔼 = d⋆_M𝔹 = d⋆_M𝔼 = 0 with d on the total space.

    It implies d𝔽 = d⋆𝔽 = 0; the converse fails for t-dependent fields.
    """
    bundle = flat_space()
    samples = samples or bundle.samples()
    magnetic = magnetic_form(f.b)
    electric = electric_form(f.e)
    result = LocalResidual(
        exterior_derivative(magnetic, bundle),
        exterior_derivative(electric, bundle),
        exterior_derivative(base_hodge_star(magnetic, bundle), bundle),
        exterior_derivative(base_hodge_star(electric, bundle), bundle),
    )
    result.residual = max(form.max_abs(samples)[0] for form in result.forms().values())
    return result


def base_differential_of(f: EMFieldSymbolic) -> Tuple[Form, Form]:
    """d_M𝔹 and d_M𝔼 (covariant derivative with A = 0)."""
    bundle = flat_space()
    return (
        covariant_derivative(magnetic_form(f.b), bundle),
        covariant_derivative(electric_form(f.e), bundle),
    )


def plane_wave(
    k: Sequence[float], e0: Sequence[float], normalize: bool = False
) -> EMFieldSymbolic:
    """E = E₀ cos(k·x − ωu), B = −(k×E₀)/ω cos(k·x − ωu), ω = |k|, u = ln|t|."""
    k_vec = np.asarray(k, dtype=float)
    e_vec = np.asarray(e0, dtype=float)
    if k_vec.shape != (DIM,) or e_vec.shape != (DIM,):
        raise FieldConfigError("Wave vector and amplitude need three components")
    omega = float(np.linalg.norm(k_vec))
    if omega == 0.0:
        raise FieldConfigError("Wave vector must be non-zero")
    if abs(float(k_vec @ e_vec)) > DEFAULT_TOLERANCE * max(1.0, omega * np.linalg.norm(e_vec)):
        raise FieldConfigError(f"Amplitude {tuple(e0)} is not transverse to k = {tuple(k)}")
    if normalize:
        norm = float(np.linalg.norm(e_vec))
        if norm == 0.0:
            raise FieldConfigError("Cannot normalise a zero amplitude")
        e_vec = e_vec / norm
    b_vec = -np.cross(k_vec, e_vec) / omega

    phase = sum(
        (_number(k_vec[a]) * coordinate_symbol(a) for a in range(DIM)), sp.S.Zero
    ) - _number(omega) * ScalarExpr(T).log_abs().expr
    wave = sp.cos(phase)
    return EMFieldSymbolic(
        [ScalarExpr(_number(v) * wave, check=False) for v in e_vec],
        [ScalarExpr(_number(v) * wave, check=False) for v in b_vec],
    )


def _number(value: float) -> sp.Expr:
    """Exact integer when the float is integral; avoids -0.0 noise."""
    if float(value).is_integer():
        return sp.Integer(int(value))
    return sp.Float(value)


def duality(f: EMFieldSymbolic) -> EMFieldSymbolic:
    """(E, B) ↦ (B, −E)."""
    return EMFieldSymbolic(f.b, [-c for c in f.e])


def rescale_time(f: EMFieldSymbolic, factor: float) -> EMFieldSymbolic:
    """Pull back along t ↦ φ₀ t, φ₀ ≠ 0."""
    if factor == 0:
        raise FieldConfigError("Time rescaling factor must be non-zero")
    return f.map(lambda c: c.subs_fibre(ScalarExpr(_number(factor) * T, check=False)))


def wave_residual(f: EMFieldSymbolic, samples: Optional[SampleSet] = None) -> float:
    """max |∂²_u c − ∇²c| over all six components."""
    samples = samples or flat_space().samples()
    residuals = []
    for component in f.e + f.b:
        laplace = sum(
            (component.partial(a).partial(a) for a in range(DIM)), ScalarExpr(0, check=False)
        )
        residuals.append(component.euler_derivative().euler_derivative() - laplace)
    return _max_scalar(residuals, samples)[0]


def vector_residuals_at_zero(f: EMFieldSymbolic, x: Sequence[float]) -> Dict[str, float]:
    """Vector residuals on the zero section t = 0; components must be polynomial in t."""
    for component in f.e + f.b:
        if not component.expr.is_polynomial(T):
            raise FieldConfigError(f"Component '{component}' is not polynomial in t")
    div_b, faraday, div_e, ampere = vector_residuals(f)
    point = Point.zero_section(x)
    values = {"div_b": div_b, "div_e": div_e}
    for axis, name in enumerate("xyz"):
        values[f"faraday_{name}"] = faraday[axis]
        values[f"ampere_{name}"] = ampere[axis]
    return {name: evaluate(expr, point) for name, expr in values.items()}
