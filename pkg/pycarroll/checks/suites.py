"""Property suites over the exterior calculus and Hodge theory of a bundle."""

import logging
from typing import Callable, Dict, List

import numpy as np

from pycarroll.checks.base import (
    CheckBase,
    EqualFormsCheck,
    PredicateCheck,
    Report,
    ZeroFormCheck,
    run_checks,
)
from pycarroll.checks.generators import random_bundle, random_form, random_scalar
from pycarroll.const import DEFAULT_SAMPLE_COUNT, DEFAULT_SEED, DEFAULT_TOLERANCE, WEIGHT_ANY
from pycarroll.forms import (
    CarrollBundle,
    Form,
    Monomial,
    basis,
    covariant_derivative,
    curvature,
    decompose,
    exterior_derivative,
    interior_euler,
    lie_euler,
    wedge,
    weight_of,
)
from pycarroll.hodge import (
    base_hodge_star,
    classify,
    codifferential,
    hodge_star,
    laplacian,
    metric_g,
    star_sign,
    volume_form,
)
from pycarroll.helpers import SampleSet
from pycarroll.scalar_field import ScalarExpr

_LOGGER = logging.getLogger(__name__)

SUITE_FORMS = "forms"
SUITE_HODGE = "hodge"
DEFAULT_DIMENSIONS = (1, 2, 3)


def _inner_times_volume(eta: Monomial, xi: Form, bundle: CarrollBundle) -> Form:
    G = metric_g(bundle)
    total = ScalarExpr(0, check=False)
    for mono, coefficient in xi:
        total = total + coefficient * G.gram(eta, mono)
    return volume_form(bundle) * total


def forms_checks(
    bundle: CarrollBundle,
    rng: np.random.Generator,
    samples: SampleSet,
    tolerance: float = DEFAULT_TOLERANCE,
) -> List[CheckBase]:
    n = bundle.n

    def d(xi: Form) -> Form:
        return exterior_derivative(xi, bundle)

    checks: List[CheckBase] = []
    for k in range(n):
        xi = random_form(rng, n, k)
        checks.append(
            ZeroFormCheck(SUITE_FORMS, f"n={n}: d^2 = 0 (k={k})", lambda xi=xi: d(d(xi)), samples, tolerance)
        )
    for k in range(2, n + 2):
        xi = random_form(rng, n, k)
        checks.append(
            ZeroFormCheck(
                SUITE_FORMS,
                f"n={n}: i^2 = 0 (k={k})",
                lambda xi=xi: interior_euler(interior_euler(xi)),
                samples,
                tolerance,
            )
        )
    for k in range(n + 2):
        xi = random_form(rng, n, k)

        def cartan(xi: Form = xi):
            homotopy = interior_euler(d(xi))
            if xi.degree > 0:
                homotopy = homotopy + d(interior_euler(xi))
            return lie_euler(xi, bundle), homotopy

        checks.append(EqualFormsCheck(SUITE_FORMS, f"n={n}: Cartan formula (k={k})", cartan, samples, tolerance))

        def split(xi: Form = xi):
            horizontal, vertical = decompose(xi)
            return horizontal + vertical, xi

        checks.append(EqualFormsCheck(SUITE_FORMS, f"n={n}: decompose reconstructs (k={k})", split, samples, tolerance))
        checks.append(
            EqualFormsCheck(
                SUITE_FORMS,
                f"n={n}: L commutes with d (k={k})",
                lambda xi=xi: (lie_euler(d(xi)), d(lie_euler(xi))),
                samples,
                tolerance,
            )
        )
    for k in range(n + 1):
        xi = random_form(rng, n, k, horizontal=True)
        checks.append(
            EqualFormsCheck(
                SUITE_FORMS,
                f"n={n}: d = D + th^L on horizontal forms (k={k})",
                lambda xi=xi: (
                    d(xi),
                    covariant_derivative(xi, bundle) + wedge(Form.theta(n), lie_euler(xi)),
                ),
                samples,
                tolerance,
            )
        )
    checks.append(
        EqualFormsCheck(
            SUITE_FORMS,
            f"n={n}: d(theta) = F",
            lambda: (d(Form.theta(n)), curvature(bundle)),
            samples,
            tolerance,
        )
    )
    f = random_scalar(rng, n)
    checks.append(
        ZeroFormCheck(
            SUITE_FORMS,
            f"n={n}: D f horizontal",
            lambda: decompose(covariant_derivative(Form.scalar(n, f), bundle))[1],
            samples,
            tolerance,
        )
    )
    return checks


def _preserves_weight(op: Callable[[Form], Form], xi: Form, bundle: CarrollBundle) -> bool:
    before = weight_of(xi, bundle)
    after = weight_of(op(xi), bundle)
    return after == WEIGHT_ANY or after == before


def hodge_checks(
    bundle: CarrollBundle,
    rng: np.random.Generator,
    samples: SampleSet,
    tolerance: float = DEFAULT_TOLERANCE,
) -> List[CheckBase]:
    n = bundle.n
    operators: Dict[str, Callable[[Form], Form]] = {
        "d": lambda xi: exterior_derivative(xi, bundle),
        "star": lambda xi: hodge_star(xi, bundle),
        "delta": lambda xi: codifferential(xi, bundle),
        "laplacian": lambda xi: laplacian(xi, bundle),
    }
    theta = Form.theta(n)

    checks: List[CheckBase] = []
    for k in range(n + 2):
        xi = random_form(rng, n, k)
        sign = star_sign(n, k)
        checks.append(
            EqualFormsCheck(
                SUITE_HODGE,
                f"n={n}: star star = {sign:+d} (k={k})",
                lambda xi=xi, sign=sign: (hodge_star(hodge_star(xi, bundle), bundle), xi * sign),
                samples,
                tolerance,
            )
        )
        for eta in basis(n, k):
            checks.append(
                EqualFormsCheck(
                    SUITE_HODGE,
                    f"n={n}: {eta}^*xi = <{eta},xi> vol (k={k})",
                    lambda xi=xi, eta=eta: (
                        wedge(Form.monomial(n, eta), hodge_star(xi, bundle)),
                        _inner_times_volume(eta, xi, bundle),
                    ),
                    samples,
                    tolerance,
                )
            )
    for k in range(2, n + 2):
        xi = random_form(rng, n, k)
        checks.append(
            ZeroFormCheck(
                SUITE_HODGE,
                f"n={n}: delta^2 = 0 (k={k})",
                lambda xi=xi: codifferential(codifferential(xi, bundle), bundle),
                samples,
                tolerance,
            )
        )
    for k in range(n + 1):
        s = random_form(rng, n, k, horizontal=True)
        checks.append(
            EqualFormsCheck(
                SUITE_HODGE,
                f"n={n}: star S = (-1)^(n+k) th^star_M S (k={k})",
                lambda s=s, k=k: (
                    hodge_star(s, bundle),
                    wedge(theta, base_hodge_star(s, bundle)) * (-1) ** (n + k),
                ),
                samples,
                tolerance,
            )
        )
        checks.append(
            EqualFormsCheck(
                SUITE_HODGE,
                f"n={n}: star(th^S) = (-1)^(n+1) star_M S (k={k + 1})",
                lambda s=s: (
                    hodge_star(wedge(theta, s), bundle),
                    base_hodge_star(s, bundle) * (-1) ** (n + 1),
                ),
                samples,
                tolerance,
            )
        )
        checks.append(
            ZeroFormCheck(
                SUITE_HODGE,
                f"n={n}: star maps horizontal to vertical (k={k})",
                lambda s=s: decompose(hodge_star(s, bundle))[0],
                samples,
                tolerance,
            )
        )
        checks.append(
            ZeroFormCheck(
                SUITE_HODGE,
                f"n={n}: star maps vertical to horizontal (k={k + 1})",
                lambda s=s: decompose(hodge_star(wedge(theta, s), bundle))[1],
                samples,
                tolerance,
            )
        )
    for k in range(n + 2):
        weight = int(rng.integers(0, 4))
        xi = random_form(rng, n, k, weight=weight)
        for name, op in operators.items():
            if name == "d" and k > n:
                continue
            checks.append(
                EqualFormsCheck(
                    SUITE_HODGE,
                    f"n={n}: L commutes with {name} (k={k})",
                    lambda xi=xi, op=op: (lie_euler(op(xi)), op(lie_euler(xi))),
                    samples,
                    tolerance,
                )
            )
            checks.append(
                PredicateCheck(
                    SUITE_HODGE,
                    f"n={n}: {name} preserves weight {weight} (k={k})",
                    lambda xi=xi, op=op: _preserves_weight(op, xi, bundle),
                )
            )
    vol = volume_form(bundle)
    checks.append(
        PredicateCheck(
            SUITE_HODGE,
            f"n={n}: volume form is harmonic",
            lambda: classify(vol, bundle, samples, tolerance).harmonic,
        )
    )
    return checks


def harmonic_not_closed_check(tolerance: float = DEFAULT_TOLERANCE) -> CheckBase:
    """x1 on the flat line bundle: harmonic, yet dx1 ≠ 0."""
    flat = CarrollBundle.flat(1, name="flat(n=1)")

    def predicate() -> bool:
        verdict = classify(Form.scalar(1, ScalarExpr.coordinate(0)), flat, flat.samples(), tolerance)
        return verdict.harmonic and not verdict.closed

    return PredicateCheck(SUITE_HODGE, "n=1: harmonic does not imply closed", predicate)


def property_suite(
    dimensions=DEFAULT_DIMENSIONS,
    seed: int = DEFAULT_SEED,
    tolerance: float = DEFAULT_TOLERANCE,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
) -> Report:
    """Forms and Hodge properties on one random bundle per base dimension."""
    report = Report()
    for n in dimensions:
        _LOGGER.info("Running the property suite for n=%d (seed %d)", n, seed)
        rng = np.random.default_rng([seed, n])
        bundle = random_bundle(rng, n)
        samples = bundle.samples(sample_count, seed)
        checks = forms_checks(bundle, rng, samples, tolerance) + hodge_checks(
            bundle, rng, samples, tolerance
        )
        if n == 1:
            checks.append(harmonic_not_closed_check(tolerance))
        report.extend(run_checks(checks))
    return report
