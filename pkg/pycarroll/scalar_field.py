"""Exact scalar expressions on an adapted chart (x^1, ..., x^n, t).

Expressions are sympy trees restricted to a closed grammar: constants, the
chart coordinates, t, sums, products, quotients, integer powers (and
half-integer powers of metric densities), sin, cos, exp and ln|.|. Every
derivative of a grammar expression stays inside the grammar.
"""

from dataclasses import dataclass
from functools import lru_cache
import logging
import re
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr as sympy_parse_expr,
    standard_transformations,
)
from sympy.printing.str import StrPrinter

from pycarroll.const import FIBRE
from pycarroll.helpers import SampleSet, format_point

_LOGGER = logging.getLogger(__name__)

T = sp.Symbol("t", real=True, nonzero=True)
_COORDINATE_NAME = re.compile(r"^x([1-9][0-9]*)$")

Axis = Union[int, str]
ScalarLike = Union["ScalarExpr", sp.Expr, int, float]


class EvaluationError(ValueError):
    """Raised when an expression hits a domain error at a point."""


class ExpressionSyntaxError(ValueError):
    """Raised when text or a sympy tree falls outside the expression grammar."""


class LogAbs(sp.Function):
    """ln|u|; its derivative is u'/u on both signs of u."""

    nargs = 1

    @classmethod
    def eval(cls, arg):
        if arg in (sp.S.One, sp.S.NegativeOne):
            return sp.S.Zero
        if arg.could_extract_minus_sign():
            return cls(-arg)
        return None

    def fdiff(self, argindex=1):
        return 1 / self.args[0]

    def _eval_is_real(self):
        return True


@lru_cache(maxsize=None)
def coordinate_symbol(axis: int) -> sp.Symbol:
    """Symbol of the base coordinate x^(axis + 1)."""
    if axis < 0:
        raise ValueError(f"Coordinate axis must be non-negative, got {axis}")
    return sp.Symbol(f"x{axis + 1}", real=True)


def _coordinate_axis(symbol: sp.Symbol) -> Optional[int]:
    match = _COORDINATE_NAME.match(symbol.name)
    if match is None or symbol != coordinate_symbol(int(match.group(1)) - 1):
        return None
    return int(match.group(1)) - 1


def check_grammar(expr: sp.Expr) -> sp.Expr:
    """Raise ExpressionSyntaxError unless every node belongs to the grammar."""
    for node in sp.preorder_traversal(expr):
        if node.is_Symbol:
            if node != T and _coordinate_axis(node) is None:
                raise ExpressionSyntaxError(f"Unknown symbol '{node}'")
        elif node in (sp.nan, sp.zoo, sp.oo, -sp.oo):
            raise ExpressionSyntaxError(f"Non-finite constant '{node}'")
        elif node.is_Number or isinstance(node, sp.NumberSymbol):
            if not node.is_real:
                raise ExpressionSyntaxError(f"Non-real constant '{node}'")
        elif node.is_Add or node.is_Mul:
            continue
        elif node.is_Pow:
            exponent = node.exp
            if not (exponent.is_Integer or (exponent.is_Rational and exponent.q == 2)):
                raise ExpressionSyntaxError(
                    f"Only integer and half-integer powers are allowed, got '{node}'"
                )
        elif isinstance(node, (sp.sin, sp.cos, sp.exp, LogAbs)):
            continue
        else:
            raise ExpressionSyntaxError(f"Node '{node}' is outside the expression grammar")
    return expr


class _ExprPrinter(StrPrinter):
    def _print_LogAbs(self, expr):
        return f"ln({self._print(expr.args[0])})"


_PRINTER = _ExprPrinter()


def _log_abs(value):
    return np.log(np.abs(value))


_NUMPY_EXTRA = {"LogAbs": _log_abs}


@lru_cache(maxsize=4096)
def _compile(expr: sp.Expr, n: int) -> Callable:
    arguments = [coordinate_symbol(axis) for axis in range(n)] + [T]
    return sp.lambdify(arguments, expr, modules=[_NUMPY_EXTRA, "numpy"])


@dataclass(frozen=True)
class Point:
    """A point of the chart; t = 0 only for the zero-section closure."""

    x: Tuple[float, ...]
    t: float
    on_zero_section: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "t", float(self.t))
        if self.on_zero_section:
            if self.t != 0.0:
                raise ValueError("A zero-section point has t = 0")
        elif self.t == 0.0:
            raise ValueError("t must be non-zero on the punctured fibre")

    @classmethod
    def zero_section(cls, x: Sequence[float]) -> "Point":
        return cls(tuple(x), 0.0, on_zero_section=True)

    def __str__(self) -> str:
        return format_point(self.x, self.t)


class ScalarExpr:
    """Immutable wrapper around a grammar-checked sympy expression."""

    __slots__ = ("_expr",)

    def __init__(self, expr: ScalarLike = 0, check: bool = True) -> None:
        if isinstance(expr, ScalarExpr):
            expr = expr.expr
        elif isinstance(expr, float):
            expr = sp.Float(expr)
        else:
            expr = sp.sympify(expr)
        if check:
            check_grammar(expr)
        self._expr = expr

    @classmethod
    def constant(cls, value: Union[int, float, sp.Expr]) -> "ScalarExpr":
        return cls(value)

    @classmethod
    def coordinate(cls, axis: int) -> "ScalarExpr":
        return cls(coordinate_symbol(axis), check=False)

    @classmethod
    def fibre(cls) -> "ScalarExpr":
        return cls(T, check=False)

    @property
    def expr(self) -> sp.Expr:
        return self._expr

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        return _PRINTER.doprint(self._expr).replace("**", "^")

    def __eq__(self, other) -> bool:
        if isinstance(other, ScalarExpr):
            return self._expr == other._expr
        if isinstance(other, (int, float, sp.Expr)):
            return self._expr == sp.sympify(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._expr)

    @staticmethod
    def _unwrap(value: ScalarLike) -> sp.Expr:
        if isinstance(value, ScalarExpr):
            return value.expr
        return ScalarExpr(value).expr

    def __add__(self, other: ScalarLike) -> "ScalarExpr":
        return ScalarExpr(self._expr + self._unwrap(other), check=False)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "ScalarExpr":
        return ScalarExpr(self._expr - self._unwrap(other), check=False)

    def __rsub__(self, other: ScalarLike) -> "ScalarExpr":
        return ScalarExpr(self._unwrap(other) - self._expr, check=False)

    def __mul__(self, other: ScalarLike) -> "ScalarExpr":
        return ScalarExpr(self._expr * self._unwrap(other), check=False)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "ScalarExpr":
        return ScalarExpr(self._expr / self._unwrap(other), check=False)

    def __rtruediv__(self, other: ScalarLike) -> "ScalarExpr":
        return ScalarExpr(self._unwrap(other) / self._expr, check=False)

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr(-self._expr, check=False)

    def __pow__(self, exponent: int) -> "ScalarExpr":
        if not isinstance(exponent, int):
            raise ExpressionSyntaxError(f"Only integer powers are allowed, got {exponent!r}")
        return ScalarExpr(self._expr**exponent, check=False)

    def sin(self) -> "ScalarExpr":
        return ScalarExpr(sp.sin(self._expr), check=False)

    def cos(self) -> "ScalarExpr":
        return ScalarExpr(sp.cos(self._expr), check=False)

    def exp(self) -> "ScalarExpr":
        return ScalarExpr(sp.exp(self._expr), check=False)

    def log_abs(self) -> "ScalarExpr":
        return ScalarExpr(LogAbs(self._expr), check=False)

    @property
    def is_zero(self) -> bool:
        """Structural test: true only when sympy canonicalises to 0."""
        return self._expr == 0

    @property
    def depends_on_fibre(self) -> bool:
        return T in self._expr.free_symbols

    @property
    def base_axes(self) -> Tuple[int, ...]:
        axes = (_coordinate_axis(s) for s in self._expr.free_symbols if s != T)
        return tuple(sorted(axis for axis in axes if axis is not None))

    def partial(self, axis: Axis) -> "ScalarExpr":
        return partial(self, axis)

    def euler_derivative(self) -> "ScalarExpr":
        return euler_derivative(self)

    def simplify(self) -> "ScalarExpr":
        return simplify(self)

    def subs_fibre(self, value: ScalarLike) -> "ScalarExpr":
        return ScalarExpr(self._expr.subs(T, self._unwrap(value)), check=False)

    def evaluate(self, point: Point) -> float:
        return evaluate(self, point)

    def evaluate_many(self, samples: SampleSet) -> np.ndarray:
        return evaluate_many(self, samples)


def as_scalar(value: ScalarLike) -> ScalarExpr:
    return value if isinstance(value, ScalarExpr) else ScalarExpr(value)


def partial(expr: ScalarLike, axis: Axis) -> ScalarExpr:
    """∂/∂x^(axis + 1), or ∂/∂t when ``axis`` is ``"t"``."""
    expr = as_scalar(expr)
    symbol = T if axis == FIBRE else coordinate_symbol(int(axis))
    return ScalarExpr(sp.diff(expr.expr, symbol), check=False)


def euler_derivative(expr: ScalarLike) -> ScalarExpr:
    """Euler derivative t ∂/∂t."""
    expr = as_scalar(expr)
    return ScalarExpr(T * sp.diff(expr.expr, T), check=False)


def simplify(expr: ScalarLike) -> ScalarExpr:
    """Like-term merge for the polynomial fragment; other trees are returned as is."""
    expr = as_scalar(expr)
    symbols = [s for s in expr.expr.free_symbols]
    if expr.expr.is_polynomial(*symbols):
        return ScalarExpr(sp.expand(expr.expr), check=False)
    return expr


def structurally_equal(a: ScalarLike, b: ScalarLike) -> bool:
    """Decide equality on the polynomial / trigonometric fragment."""
    difference = sp.expand(as_scalar(a).expr - as_scalar(b).expr)
    if difference == 0:
        return True
    return sp.simplify(sp.expand_trig(difference)) == 0


def _check_chart(expr: ScalarExpr, n: int) -> None:
    axes = expr.base_axes
    if axes and axes[-1] >= n:
        raise EvaluationError(
            f"Expression uses x{axes[-1] + 1} but the point has {n} base coordinates"
        )


def _offending_node(expr: sp.Expr, n: int, columns: Sequence[np.ndarray]) -> sp.Expr:
    """Innermost quotient or logarithm whose argument vanishes at the point."""
    for node in sp.postorder_traversal(expr):
        if node.is_Pow and node.exp.is_negative:
            argument = node.base
        elif node.is_Pow and not node.exp.is_Integer:
            argument = node.base
        elif isinstance(node, LogAbs):
            argument = node.args[0]
        else:
            continue
        with np.errstate(all="ignore"):
            value = np.asarray(_compile(argument, n)(*columns), dtype=float)
        if node.is_Pow and node.exp.is_positive:
            if np.any(value < 0):
                return node
        elif np.any(value == 0) or not np.all(np.isfinite(value)):
            return node
    return expr


def evaluate(expr: ScalarLike, point: Point) -> float:
    """Evaluate at a point; domain errors name the offending node."""
    expr = as_scalar(expr)
    n = len(point.x)
    _check_chart(expr, n)
    columns = [np.float64(v) for v in point.x] + [np.float64(point.t)]
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            value = float(_compile(expr.expr, n)(*columns))
    except (ZeroDivisionError, FloatingPointError, TypeError) as err:
        node = _offending_node(expr.expr, n, columns)
        raise EvaluationError(f"Cannot evaluate '{node}' at {point}: {err}") from err
    if not np.isfinite(value):
        node = _offending_node(expr.expr, n, columns)
        raise EvaluationError(f"Cannot evaluate '{node}' at {point}: non-finite value")
    return value


def evaluate_many(expr: ScalarLike, samples: SampleSet) -> np.ndarray:
    """Vectorised evaluation over a sample set."""
    expr = as_scalar(expr)
    _check_chart(expr, samples.dim)
    with np.errstate(all="ignore"):
        values = _compile(expr.expr, samples.dim)(*samples.columns())
    values = np.broadcast_to(np.asarray(values, dtype=float), (len(samples),))
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        x, t = samples.point(int(bad[0]))
        # Re-evaluate the first bad point to get the diagnostic message.
        evaluate(expr, Point(x, t))
        raise EvaluationError(f"Non-finite value of '{expr}' at {format_point(x, t)}")
    return values


def parse_scalar(text: str, n: Optional[int] = None) -> ScalarExpr:
    """Parse an expression over x1..xn and t (``^`` is power, ``ln`` is ln|.|)."""
    local: Dict[str, object] = {
        "t": T,
        "sin": sp.sin,
        "cos": sp.cos,
        "exp": sp.exp,
        "ln": LogAbs,
        "sqrt": sp.sqrt,
        "pi": sp.pi,
    }
    for name in set(re.findall(r"\bx([1-9][0-9]*)\b", text)):
        local[f"x{name}"] = coordinate_symbol(int(name) - 1)
    try:
        expr = sympy_parse_expr(
            text,
            local_dict=local,
            transformations=standard_transformations + (convert_xor,),
        )
    except (SyntaxError, TypeError, ValueError, AttributeError) as err:
        raise ExpressionSyntaxError(f"Cannot parse '{text}': {err}") from err
    if not isinstance(expr, sp.Expr):
        raise ExpressionSyntaxError(f"'{text}' is not a scalar expression")
    scalar = ScalarExpr(expr)
    if n is not None:
        axes = scalar.base_axes
        if axes and axes[-1] >= n:
            raise ExpressionSyntaxError(f"'{text}' uses x{axes[-1] + 1} on a chart with n = {n}")
    return scalar
