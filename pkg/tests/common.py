"""Helpers shared by the test modules."""

from pycarroll.helpers import SampleSet, sample_points
from pycarroll.scalar_field import ScalarExpr

TEST_SAMPLE_COUNT = 40


def x(axis: int) -> ScalarExpr:
    """Coordinate x^(axis + 1)."""
    return ScalarExpr.coordinate(axis)


def t() -> ScalarExpr:
    return ScalarExpr.fibre()


def fixed_samples(n: int, count: int = TEST_SAMPLE_COUNT, seed: int = 3) -> SampleSet:
    return sample_points(n, count, seed)
