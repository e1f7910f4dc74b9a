"""Verification checks and the reports they produce."""

from abc import abstractmethod
import csv
import io
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import jsonpickle

from pycarroll.const import DEFAULT_TOLERANCE, STATUS_ERROR, STATUS_FAIL, STATUS_PASS
from pycarroll.forms import Form
from pycarroll.helpers import SampleSet

_LOGGER = logging.getLogger(__name__)

REPORT_FIELDS = ["suite", "case", "status", "max_deviation", "witness", "expected", "computed"]


class CheckResult:
    """Outcome of one check."""

    def __init__(
        self,
        suite: str,
        case: str,
        status: str,
        max_deviation: float,
        witness: Optional[str] = None,
        expected: Optional[str] = None,
        computed: Optional[str] = None,
    ) -> None:
        self.suite = suite
        self.case = case
        self.status = status
        self.max_deviation = max_deviation
        self.witness = witness
        self.expected = expected
        self.computed = computed

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.__dict__})"

    def __eq__(self, other) -> bool:
        return self is other or self.__dict__ == other.__dict__

    @property
    def passed(self) -> bool:
        return self.status == STATUS_PASS

    def as_dict(self) -> Dict[str, Any]:
        data = dict(self.__dict__)
        if isinstance(data["max_deviation"], float) and math.isnan(data["max_deviation"]):
            data["max_deviation"] = None
        return data


class CheckBase:
    """Base check: ``evaluate`` returns (max deviation, witness)."""

    suite = "base"

    def __init__(self, case: str, tolerance: float = DEFAULT_TOLERANCE) -> None:
        self.case = case
        self.tolerance = tolerance

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.__dict__})"

    def __eq__(self, other) -> bool:
        return self is other or self.__dict__ == other.__dict__

    @abstractmethod
    def evaluate(self) -> Tuple[float, Optional[str]]:
        """Return the deviation from the expected value and a witness point."""

    def describe(self) -> Tuple[Optional[str], Optional[str]]:
        """Expected and computed values for the report, when meaningful."""
        return None, None

    def run(self) -> CheckResult:
        try:
            deviation, witness = self.evaluate()
        except Exception as err:
            _LOGGER.error("Check %s failed: %s", self.case, err)
            return CheckResult(self.suite, self.case, STATUS_ERROR, math.nan, str(err))
        status = STATUS_PASS if deviation < self.tolerance else STATUS_FAIL
        expected, computed = self.describe()
        return CheckResult(self.suite, self.case, status, deviation, witness, expected, computed)


class ZeroFormCheck(CheckBase):
    """Passes when the built form vanishes on the sample set."""

    def __init__(
        self,
        suite: str,
        case: str,
        build: Callable[[], Form],
        samples: SampleSet,
        tolerance: float = DEFAULT_TOLERANCE,
    ) -> None:
        super().__init__(case, tolerance)
        self.suite = suite
        self._build = build
        self._samples = samples

    def evaluate(self) -> Tuple[float, Optional[str]]:
        return self._build().max_abs(self._samples)


class EqualFormsCheck(CheckBase):
    """Passes when two built forms agree on the sample set."""

    def __init__(
        self,
        suite: str,
        case: str,
        build: Callable[[], Tuple[Form, Form]],
        samples: SampleSet,
        tolerance: float = DEFAULT_TOLERANCE,
    ) -> None:
        super().__init__(case, tolerance)
        self.suite = suite
        self._build = build
        self._samples = samples
        self._pair: Optional[Tuple[Form, Form]] = None

    def evaluate(self) -> Tuple[float, Optional[str]]:
        self._pair = self._build()
        left, right = self._pair
        return (left - right).max_abs(self._samples)

    def describe(self) -> Tuple[Optional[str], Optional[str]]:
        if self._pair is None:
            return None, None
        return str(self._pair[1]), str(self._pair[0])


class PredicateCheck(CheckBase):
    """Structural check: deviation 0 when the predicate holds, 1 otherwise."""

    def __init__(self, suite: str, case: str, predicate: Callable[[], bool]) -> None:
        super().__init__(case, 0.5)
        self.suite = suite
        self._predicate = predicate

    def evaluate(self) -> Tuple[float, Optional[str]]:
        return (0.0 if self._predicate() else 1.0), None


class Report:
    """Ordered check results of one run."""

    def __init__(self, results: Optional[Sequence[CheckResult]] = None) -> None:
        self.results: List[CheckResult] = list(results or [])

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self.results)} results)"

    def __iter__(self):
        return iter(self.results)

    def __len__(self) -> int:
        return len(self.results)

    def extend(self, other: "Report") -> None:
        self.results.extend(other.results)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def first_failure(self) -> Optional[CheckResult]:
        return next((result for result in self.results if not result.passed), None)

    def rows(self) -> List[List[Any]]:
        return [[result.as_dict()[key] for key in REPORT_FIELDS] for result in self.results]

    def to_json(self) -> str:
        return jsonpickle.encode([r.as_dict() for r in self.results], unpicklable=False)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=REPORT_FIELDS, lineterminator="\n")
        writer.writeheader()
        for result in self.results:
            writer.writerow(result.as_dict())
        return buffer.getvalue()


def run_checks(checks: Sequence[CheckBase]) -> Report:
    """Run checks in order; exceptions are recorded, not raised."""
    results = []
    for check in checks:
        result = check.run()
        _LOGGER.debug("%s %s: %s (%.3e)", result.suite, result.case, result.status, result.max_deviation)
        results.append(result)
    report = Report(results)
    _LOGGER.info(
        "%d of %d checks passed", sum(1 for r in report if r.passed), len(report)
    )
    return report
