"""Simulation configuration read from ``key = value`` files."""

from dataclasses import dataclass, field
import logging
from math import pi, sqrt
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from pycarroll.const import (
    BRANCHES,
    CONFIG_KEYS,
    DEFAULT_TOLERANCE,
    INIT_CUSTOM,
    INIT_PLANE_WAVE,
    INIT_ZERO,
    MIN_GRID_POINTS,
)
from pycarroll.helpers import parse_float_vector, parse_key_value_text
from pycarroll.maxwell.symbolic import EMFieldSymbolic, FieldConfigError, plane_wave

_LOGGER = logging.getLogger(__name__)

_CUSTOM_KEYS = ("init.ex", "init.ey", "init.ez", "init.bx", "init.by", "init.bz")


class CFLViolation(FieldConfigError):
    """Raised when Δu exceeds the stability bound Δx/√3."""

    def __init__(self, du: float, bound: float) -> None:
        super().__init__(f"Time step du={du:.6g} exceeds the CFL bound {bound:.6g}")
        self.du = du
        self.bound = bound


def cfl_bound(n: int, l_box: float) -> float:
    return (l_box / n) / sqrt(3.0)


@dataclass
class SimConfig:
    n: int
    l_box: float
    du: float
    steps: int
    branch: int = 1
    u0: float = 0.0
    init_kind: str = INIT_PLANE_WAVE
    k: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    e0: Tuple[float, float, float] = (1.0, 0.0, 0.0)
    custom: Dict[str, str] = field(default_factory=dict)
    cadence: int = 1
    dump_dir: Optional[Path] = None

    def __post_init__(self) -> None:
        self.validate()

    @property
    def dx(self) -> float:
        return self.l_box / self.n

    def validate(self) -> None:
        if self.n < MIN_GRID_POINTS:
            raise FieldConfigError(f"n must be at least {MIN_GRID_POINTS}, got {self.n}")
        if self.l_box <= 0:
            raise FieldConfigError(f"l_box must be positive, got {self.l_box}")
        if self.du <= 0:
            raise FieldConfigError(f"du must be positive, got {self.du}")
        if self.steps < 0:
            raise FieldConfigError(f"steps must be non-negative, got {self.steps}")
        if self.cadence < 1:
            raise FieldConfigError(f"output.cadence must be at least 1, got {self.cadence}")
        if self.branch not in (1, -1):
            raise FieldConfigError(f"branch must be +1 or -1, got {self.branch}")
        bound = cfl_bound(self.n, self.l_box)
        if self.du > bound * (1 + 1e-12):
            raise CFLViolation(self.du, bound)
        if self.init_kind == INIT_PLANE_WAVE:
            modes = np.asarray(self.k) * self.l_box / (2 * pi)
            if not np.allclose(modes, np.round(modes), atol=1e-9):
                raise FieldConfigError(
                    f"Wave vector {self.k} is not periodic on a box of size {self.l_box}"
                )
            k_vec, e_vec = np.asarray(self.k), np.asarray(self.e0)
            if not k_vec.any():
                raise FieldConfigError("init.k must be non-zero")
            scale = max(1.0, float(np.linalg.norm(k_vec) * np.linalg.norm(e_vec)))
            if abs(float(k_vec @ e_vec)) > DEFAULT_TOLERANCE * scale:
                raise FieldConfigError(
                    f"init.e0 = {self.e0} is not transverse to init.k = {self.k}"
                )
        elif self.init_kind == INIT_CUSTOM:
            missing = [key for key in _CUSTOM_KEYS if key not in self.custom]
            if missing:
                raise FieldConfigError(f"Custom initial data needs {', '.join(missing)}")
        elif self.init_kind != INIT_ZERO:
            raise FieldConfigError(f"Unknown init.kind '{self.init_kind}'")

    def initial_field(self) -> EMFieldSymbolic:
        if self.init_kind == INIT_PLANE_WAVE:
            return plane_wave(self.k, self.e0)
        if self.init_kind == INIT_CUSTOM:
            return EMFieldSymbolic.parse(
                [self.custom[key] for key in _CUSTOM_KEYS[:3]],
                [self.custom[key] for key in _CUSTOM_KEYS[3:]],
            )
        return EMFieldSymbolic.zero()


def parse_config(text: str) -> SimConfig:
    try:
        entries = parse_key_value_text(text)
    except ValueError as err:
        raise FieldConfigError(str(err)) from err

    unknown = sorted(set(entries) - CONFIG_KEYS)
    if unknown:
        raise FieldConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
    for required in ("n", "l_box", "du", "steps"):
        if required not in entries:
            raise FieldConfigError(f"Missing configuration key '{required}'")

    try:
        branch_text = entries.get("branch", "+").lower()
        if branch_text not in BRANCHES:
            raise FieldConfigError(f"branch must be one of {sorted(BRANCHES)}")
        config = SimConfig(
            n=int(entries["n"]),
            l_box=_float(entries["l_box"]),
            du=_float(entries["du"]),
            steps=int(entries["steps"]),
            branch=BRANCHES[branch_text],
            u0=_float(entries.get("u0", "0")),
            init_kind=entries.get("init.kind", INIT_PLANE_WAVE),
            k=parse_float_vector(entries.get("init.k", "0, 0, 1"), 3),
            e0=parse_float_vector(entries.get("init.e0", "1, 0, 0"), 3),
            custom={key: entries[key] for key in _CUSTOM_KEYS if key in entries},
            cadence=int(entries.get("output.cadence", "1")),
            dump_dir=Path(entries["output.dump_dir"]) if "output.dump_dir" in entries else None,
        )
    except FieldConfigError:
        raise
    except ValueError as err:
        raise FieldConfigError(f"Invalid configuration value: {err}") from err
    _LOGGER.debug("Parsed %s", config)
    return config


def load_config(path: Union[str, Path]) -> SimConfig:
    return parse_config(Path(path).read_text())


def _float(text: str) -> float:
    """Float with ``pi`` allowed as a factor, e.g. ``2*pi``."""
    cleaned = text.replace(" ", "")
    if "pi" in cleaned:
        factor = cleaned.replace("*pi", "").replace("pi", "")
        return (float(factor) if factor else 1.0) * pi
    return float(cleaned)
