"""pycarroll helper functions."""

from itertools import combinations
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import qmc

from pycarroll.const import DEFAULT_BOX, FIBRE_RANGE

_LOGGER = logging.getLogger(__name__)

Box = Sequence[Tuple[float, float]]


class SampleSet:
    """Points (x, t) of a chart stored column-wise for vectorised evaluation."""

    def __init__(self, x: np.ndarray, t: np.ndarray) -> None:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t = np.asarray(t, dtype=float).reshape(-1)
        if x.shape[0] != t.shape[0]:
            raise ValueError(
                f"Sample set has {x.shape[0]} base points but {t.shape[0]} fibre values"
            )
        self.x = x
        self.t = t

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.dim}, count={len(self)})"

    def __len__(self) -> int:
        return self.t.shape[0]

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    def columns(self) -> List[np.ndarray]:
        """Return x^1, ..., x^n, t as separate arrays."""
        return [self.x[:, axis] for axis in range(self.dim)] + [self.t]

    def point(self, index: int) -> Tuple[Tuple[float, ...], float]:
        return tuple(float(v) for v in self.x[index]), float(self.t[index])

    def with_fibre(self, t: np.ndarray) -> "SampleSet":
        return SampleSet(self.x, np.broadcast_to(np.asarray(t, dtype=float), self.t.shape))


def sample_points(
    n: int,
    count: int,
    seed: int,
    box: Optional[Box] = None,
    fibre_range: Tuple[float, float] = FIBRE_RANGE,
) -> SampleSet:
    """Draw a scrambled Halton sample over box x (±[lo, hi]) for the fibre.

    Both components of the punctured fibre are covered: the extra Halton
    coordinate picks the sign of t.
    """
    if box is None:
        box = [DEFAULT_BOX] * n
    if len(box) != n:
        raise ValueError(f"Sampling box has {len(box)} axes, chart has {n}")

    sampler = qmc.Halton(d=n + 2, scramble=True, seed=seed)
    unit = sampler.random(count)

    lower = np.array([lo for lo, _ in box], dtype=float)
    upper = np.array([hi for _, hi in box], dtype=float)
    x = lower + unit[:, :n] * (upper - lower)

    lo, hi = fibre_range
    magnitude = lo + unit[:, n] * (hi - lo)
    sign = np.where(unit[:, n + 1] < 0.5, -1.0, 1.0)
    return SampleSet(x, sign * magnitude)


def max_abs_with_witness(
    values: np.ndarray, samples: SampleSet
) -> Tuple[float, Optional[str]]:
    """Return the largest |value| and a formatted witness point."""
    values = np.abs(np.broadcast_to(np.asarray(values, dtype=float), (len(samples),)))
    if values.size == 0:
        return 0.0, None
    index = int(np.argmax(values))
    return float(values[index]), format_point(*samples.point(index))


def format_point(x: Sequence[float], t: float) -> str:
    coordinates = ", ".join(f"{v:.10g}" for v in x)
    return f"x=({coordinates}), t={t:.10g}"


def permutation_sign(sequence: Sequence[int]) -> int:
    """Sign of the permutation sorting ``sequence``; 0 on a repeated entry."""
    if len(set(sequence)) != len(sequence):
        return 0
    inversions = sum(
        1 for i, j in combinations(range(len(sequence)), 2) if sequence[i] > sequence[j]
    )
    return -1 if inversions % 2 else 1


def parse_key_value_text(text: str) -> Dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    entries: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"Line {number}: expected 'key = value', got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"Line {number}: empty key")
        if key in entries:
            raise ValueError(f"Line {number}: duplicate key '{key}'")
        entries[key] = value
    return entries


def read_key_value_file(path: Union[str, Path]) -> Dict[str, str]:
    return parse_key_value_text(Path(path).read_text())


def parse_float_vector(text: str, size: Optional[int] = None) -> Tuple[float, ...]:
    """Parse ``"a, b, c"`` (brackets optional) into floats."""
    stripped = text.strip().strip("()[]")
    try:
        values = tuple(float(part) for part in stripped.split(",") if part.strip())
    except ValueError as err:
        raise ValueError(f"Not a numeric vector: '{text}'") from err
    if size is not None and len(values) != size:
        raise ValueError(f"Expected {size} components, got {len(values)} in '{text}'")
    return values


def split_top_level(text: str, separator: str) -> List[str]:
    """Split on ``separator`` outside parentheses."""
    parts: List[str] = []
    depth = 0
    current = ""
    for char in text:
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        if char == separator and depth == 0:
            parts.append(current.strip())
            current = ""
        else:
            current += char
    parts.append(current.strip())
    return [part for part in parts if part]


def order_of_convergence(errors: Iterable[float], ratio: float = 2.0) -> List[float]:
    """Observed orders log_ratio(e_i / e_{i+1}) for successively refined grids."""
    errors = list(errors)
    return [
        float(np.log(coarse / fine) / np.log(ratio))
        for coarse, fine in zip(errors, errors[1:])
    ]
