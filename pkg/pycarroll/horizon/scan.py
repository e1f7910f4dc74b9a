"""Regularity at the zero section, extension of Δ to t = 0 and the harmonic scan."""

from dataclasses import dataclass, field
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from pycarroll.const import HORIZON_SAMPLE_COUNT, HORIZON_TOLERANCE
from pycarroll.forms import Form, coordinate_components, monomial_weight
from pycarroll.hodge import laplacian
from pycarroll.horizon.bundle import FRAME_LABELS, HorizonForm, make_horizon_bundle
from pycarroll.horizon.harmonics import SphericalHarmonicSpec, harmonics
from pycarroll.horizon.tables import table_laplacian
from pycarroll.scalar_field import T, ScalarExpr

_LOGGER = logging.getLogger(__name__)

UNCONSTRAINED_NOTE = "f and S2 carry no regularity condition"

# (degree, component, frame indices, vertical) in scan order
SLOTS: List[Tuple[int, str, Tuple[int, ...], bool]] = [
    (0, "f", (), False),
    (1, "S1", (0,), False),
    (1, "S1", (1,), False),
    (1, "T0", (), True),
    (2, "S2", (0, 1), False),
    (2, "T1", (0,), True),
    (2, "T1", (1,), True),
    (3, "T2", (0, 1), True),
]


class RegularityError(ValueError):
    """Raised when a horizon form is not regular at the zero section."""

    def __init__(self, offending: Sequence[str], explanation: str = "") -> None:
        self.offending = list(offending)
        message = f"Form is not regular at t = 0 (offending: {', '.join(self.offending) or '-'})"
        super().__init__(f"{message}; {explanation}" if explanation else message)


@dataclass
class RegularityVerdict:
    regular: Optional[bool]
    offending: List[str] = field(default_factory=list)
    explanation: str = ""


def _slot_label(name: str, indices: Tuple[int, ...]) -> str:
    if not indices:
        return name
    return f"{name}[{'^'.join(FRAME_LABELS[i] for i in indices)}]"


def regularity_check(form: HorizonForm) -> RegularityVerdict:
    """Regular iff every S1, T0, T1, T2 coefficient is t^λ times an angular factor with λ ≥ 1.

    ``regular`` is None when some constrained coefficient is not a single t-monomial.
    """
    offending: List[str] = []
    undecided: List[str] = []
    for name, indices, coefficient in form.constrained_components():
        weight = monomial_weight(coefficient.expr)
        label = _slot_label(name, indices)
        if weight is None:
            undecided.append(label)
        elif weight < 1:
            offending.append(label)
    if offending:
        explanation = f"components below linear order in t: {', '.join(offending)}"
        return RegularityVerdict(False, offending, f"{explanation}; {UNCONSTRAINED_NOTE}")
    if undecided:
        explanation = f"t-dependence is not monomial in {', '.join(undecided)}"
        return RegularityVerdict(None, undecided, f"{explanation}; {UNCONSTRAINED_NOTE}")
    return RegularityVerdict(True, [], UNCONSTRAINED_NOTE)


@dataclass
class ZeroSectionLimit:
    finite_limit: bool
    limit: Dict[str, ScalarExpr]
    laplacian: Form

    @property
    def vanishes(self) -> bool:
        return self.finite_limit and all(value.is_zero for value in self.limit.values())


def extend_to_zero(form: HorizonForm, kappa: float) -> ZeroSectionLimit:
    """Δ of a regular form in the coordinate coframe {dϑ, dφ, dt} and its value at t = 0."""
    verdict = regularity_check(form)
    if verdict.regular is not True:
        raise RegularityError(verdict.offending, verdict.explanation)
    bundle = make_horizon_bundle(kappa)
    image = laplacian(form.to_form(kappa), bundle)
    limit: Dict[str, ScalarExpr] = {}
    for label, coefficient in coordinate_components(image, bundle).items():
        expr = sp.expand(sp.powsimp(coefficient.expr))
        if not expr.is_polynomial(T):
            _LOGGER.info("Coefficient of %s is not polynomial in t: %s", label, coefficient)
            return ZeroSectionLimit(False, {}, image)
        limit[label] = ScalarExpr(expr.subs(T, 0), check=False)
    return ZeroSectionLimit(True, limit, image)


@dataclass
class HarmonicHit:
    degree: int
    l: int  # noqa: E741
    m: int
    lam: int
    pattern: str
    residual: float
    table_residual: float

    def as_row(self) -> List[object]:
        return [self.degree, self.l, self.m, self.lam, self.pattern, self.residual, self.table_residual]


def separable_form(
    slot: Tuple[int, str, Tuple[int, ...], bool], spec: SphericalHarmonicSpec, lam: int
) -> HorizonForm:
    """t^λ·Y_lm inserted in a single component slot."""
    degree, _, indices, vertical = slot
    coefficient = ScalarExpr.fibre() ** lam * spec.expression()
    if vertical:
        return HorizonForm(degree, vertical={indices: coefficient})
    return HorizonForm(degree, {indices: coefficient})


def harmonic_scan(
    kappa: float,
    l_max: int,
    lambda_max: int,
    degrees: Sequence[int] = (0, 1, 2, 3),
    tolerance: float = HORIZON_TOLERANCE,
) -> List[HarmonicHit]:
    """Separable ansätze with vanishing stack Laplacian, in (degree, l, m, λ) order."""
    bundle = make_horizon_bundle(kappa)
    samples = bundle.samples(HORIZON_SAMPLE_COUNT)
    hits: List[Tuple[Tuple[int, int, int, int, int], HarmonicHit]] = []
    for position, slot in enumerate(SLOTS):
        if slot[0] not in degrees:
            continue
        for spec in harmonics(l_max):
            for lam in range(lambda_max + 1):
                form = separable_form(slot, spec, lam)
                residual, _ = laplacian(form.to_form(kappa), bundle).max_abs(samples)
                if residual >= tolerance:
                    continue
                table_residual, _ = table_laplacian(form, kappa).max_abs(samples)
                if table_residual >= tolerance:
                    _LOGGER.warning(
                        "Stack reports %s harmonic but the table residual is %.3e", form, table_residual
                    )
                    continue
                pattern = _slot_label(slot[1], slot[2])
                _LOGGER.debug("Harmonic: %s with %s t^%d", pattern, spec, lam)
                hit = HarmonicHit(slot[0], spec.l, spec.m, lam, pattern, residual, table_residual)
                hits.append(((slot[0], spec.l, spec.m, lam, position), hit))
    hits.sort(key=lambda item: item[0])
    _LOGGER.info("Harmonic scan at kappa=%g found %d separable harmonic forms", kappa, len(hits))
    return [hit for _, hit in hits]
