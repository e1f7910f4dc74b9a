"""Staggered-grid leapfrog solver for ∇×E = ∂_u B, ∇×B = −∂_u E on a periodic box.

Yee layout with spacing h = L/N, array index [i, j, k] ↔ (x, y, z):
E_x at ((i+½)h, jh, kh), E_y at (ih, (j+½)h, kh), E_z at (ih, jh, (k+½)h);
B_x at (ih, (j+½)h, (k+½)h), B_y at ((i+½)h, jh, (k+½)h), B_z at ((i+½)h, (j+½)h, kh).
E is stored at log-time u, B at u − Δu/2.
"""

import csv
from dataclasses import dataclass, field
import logging
from math import exp
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from pycarroll.const import CSV_COLUMNS, DUMP_FIELDS, DUMP_MAGIC, DUMP_VERSION
from pycarroll.helpers import SampleSet, read_key_value_file
from pycarroll.maxwell.config import CFLViolation, SimConfig, cfl_bound
from pycarroll.maxwell.symbolic import EMFieldSymbolic, FieldConfigError

_LOGGER = logging.getLogger(__name__)

_E_OFFSETS = ((0.5, 0.0, 0.0), (0.0, 0.5, 0.0), (0.0, 0.0, 0.5))
_B_OFFSETS = ((0.0, 0.5, 0.5), (0.5, 0.0, 0.5), (0.5, 0.5, 0.0))

_DUMP_HEADER = np.dtype(
    [("magic", "S4"), ("version", "<u4"), ("n", "<u4"), ("l_box", "<f8"), ("u", "<f8")]
)


@dataclass(eq=False)
class EMGridState:
    n: int
    l_box: float
    e: np.ndarray
    b: np.ndarray
    u: float
    du: float
    step: int = 0
    branch: int = 1
    residuals: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        shape = (3, self.n, self.n, self.n)
        if self.e.shape != shape or self.b.shape != shape:
            raise FieldConfigError(f"Field arrays must have shape {shape}")
        bound = cfl_bound(self.n, self.l_box)
        if self.du > bound * (1 + 1e-12):
            raise CFLViolation(self.du, bound)

    @property
    def h(self) -> float:
        return self.l_box / self.n

    @property
    def t(self) -> float:
        """Carrollian time σe^u on the chosen branch."""
        return self.branch * exp(self.u)


def _forward(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    return (np.roll(values, -1, axis=axis) - values) / h


def _backward(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    return (values - np.roll(values, 1, axis=axis)) / h


def curl_e(e: np.ndarray, h: float) -> np.ndarray:
    """Curl of edge-centred E, located on faces."""
    ex, ey, ez = e
    return np.stack(
        [
            _forward(ez, 1, h) - _forward(ey, 2, h),
            _forward(ex, 2, h) - _forward(ez, 0, h),
            _forward(ey, 0, h) - _forward(ex, 1, h),
        ]
    )


def curl_b(b: np.ndarray, h: float) -> np.ndarray:
    """Curl of face-centred B, located on edges."""
    bx, by, bz = b
    return np.stack(
        [
            _backward(bz, 1, h) - _backward(by, 2, h),
            _backward(bx, 2, h) - _backward(bz, 0, h),
            _backward(by, 0, h) - _backward(bx, 1, h),
        ]
    )


def divergence_e(e: np.ndarray, h: float) -> np.ndarray:
    return sum(_backward(e[a], a, h) for a in range(3))


def divergence_b(b: np.ndarray, h: float) -> np.ndarray:
    return sum(_forward(b[a], a, h) for a in range(3))


def fdtd_step(state: EMGridState, du: Optional[float] = None) -> EMGridState:
    """One leapfrog step; returns a new state."""
    du = state.du if du is None else du
    bound = cfl_bound(state.n, state.l_box)
    if du > bound * (1 + 1e-12):
        raise CFLViolation(du, bound)
    if not np.isclose(du, state.du, rtol=1e-12, atol=0.0):
        raise FieldConfigError(
            f"Time step {du} differs from the staggering step {state.du} of the state"
        )
    h = state.h
    curl_old_e = curl_e(state.e, h)
    b_new = state.b + du * curl_old_e
    curl_new_b = curl_b(b_new, h)
    e_new = state.e - du * curl_new_b

    faraday = float(np.max(np.abs(curl_old_e - (b_new - state.b) / du)))
    ampere = float(np.max(np.abs(curl_new_b + (e_new - state.e) / du)))
    return EMGridState(
        state.n,
        state.l_box,
        e_new,
        b_new,
        state.u + du,
        du,
        state.step + 1,
        state.branch,
        (faraday, ampere),
    )


def energy(state: EMGridState) -> float:
    """½Σ(|E^n|² + B^{n−½}·B^{n+½})h³, the quadratic form the leapfrog conserves.

    It differs from ½∫(|E|² + |B|²) by O(Δu²).
    """
    b_ahead = state.b + state.du * curl_e(state.e, state.h)
    total = np.sum(state.e * state.e) + np.sum(state.b * b_ahead)
    return float(0.5 * total * state.h**3)


def _grid_samples(n: int, l_box: float, offset: Tuple[float, float, float], t: float) -> SampleSet:
    h = l_box / n
    axes = [(np.arange(n) + offset[a]) * h for a in range(3)]
    x, y, z = np.meshgrid(*axes, indexing="ij")
    points = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)
    return SampleSet(points, np.full(points.shape[0], t))


def sample_electric(
    field_: EMFieldSymbolic, n: int, l_box: float, u: float, branch: int = 1
) -> np.ndarray:
    t = branch * exp(u)
    return np.stack(
        [
            field_.e[a].evaluate_many(_grid_samples(n, l_box, _E_OFFSETS[a], t)).reshape(n, n, n)
            for a in range(3)
        ]
    )


def sample_magnetic(
    field_: EMFieldSymbolic, n: int, l_box: float, u: float, branch: int = 1
) -> np.ndarray:
    t = branch * exp(u)
    return np.stack(
        [
            field_.b[a].evaluate_many(_grid_samples(n, l_box, _B_OFFSETS[a], t)).reshape(n, n, n)
            for a in range(3)
        ]
    )


def initial_state(
    field_: EMFieldSymbolic, n: int, l_box: float, du: float, u0: float = 0.0, branch: int = 1
) -> EMGridState:
    """E sampled at u0, B at u0 − Δu/2."""
    bound = cfl_bound(n, l_box)
    if du > bound * (1 + 1e-12):
        raise CFLViolation(du, bound)
    e = sample_electric(field_, n, l_box, u0, branch)
    b = sample_magnetic(field_, n, l_box, u0 - du / 2, branch)
    return EMGridState(n, l_box, e, b, u0, du, 0, branch)


def max_error(state: EMGridState, exact: EMFieldSymbolic) -> float:
    """L∞ error of E against an exact solution at the state's u."""
    reference = sample_electric(exact, state.n, state.l_box, state.u, state.branch)
    return float(np.max(np.abs(state.e - reference)))


def diagnostics(state: EMGridState) -> Dict[str, float]:
    h = state.h
    return {
        "step": state.step,
        "u": state.u,
        "t": state.t,
        "energy": energy(state),
        "max_divE": float(np.max(np.abs(divergence_e(state.e, h)))),
        "max_divB": float(np.max(np.abs(divergence_b(state.b, h)))),
        "max_residual_faraday": state.residuals[0],
        "max_residual_ampere": state.residuals[1],
    }


@dataclass
class SimulationResult:
    rows: List[Dict[str, float]]
    state: EMGridState
    dumps: List[Path] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows])

    def relative_energy_drift(self) -> float:
        energies = self.column("energy")
        reference = abs(energies[0])
        if reference == 0.0:
            return float(np.max(np.abs(energies)))
        return float(np.max(np.abs(energies - energies[0])) / reference)


def run_simulation(
    config: SimConfig, csv_path: Optional[Union[str, Path]] = None
) -> SimulationResult:
    """March ``config.steps`` leapfrog steps; one row per output cadence and at the end."""
    state = initial_state(
        config.initial_field(), config.n, config.l_box, config.du, config.u0, config.branch
    )
    _LOGGER.info(
        "Running %d steps on a %d^3 grid (du=%g, branch %+d)",
        config.steps,
        config.n,
        config.du,
        config.branch,
    )
    rows = [diagnostics(state)]
    dumps: List[Path] = []
    if config.dump_dir is not None:
        dumps.append(write_field_dump(state, _dump_path(config.dump_dir, state.step)))
    for _ in range(config.steps):
        state = fdtd_step(state, config.du)
        if state.step % config.cadence == 0 or state.step == config.steps:
            rows.append(diagnostics(state))
            _LOGGER.debug("Step %d: %s", state.step, rows[-1])
            if config.dump_dir is not None:
                dumps.append(write_field_dump(state, _dump_path(config.dump_dir, state.step)))

    result = SimulationResult(rows, state, dumps)
    if csv_path is not None:
        write_csv(result.rows, csv_path)
    return result


def write_csv(rows: List[Dict[str, float]], path: Union[str, Path]) -> None:
    with open(path, "w", newline="") as handle:
        write_csv_stream(rows, handle)


def write_csv_stream(rows: List[Dict[str, float]], handle) -> None:
    writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(
            {key: (row[key] if key == "step" else repr(float(row[key]))) for key in CSV_COLUMNS}
        )


def _dump_path(directory: Path, step: int) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    return directory / f"field_{step:06d}.carr"


def write_field_dump(state: EMGridState, path: Union[str, Path]) -> Path:
    """Binary header + six N³ float64 arrays (x fastest) and a ``.meta`` sidecar."""
    path = Path(path)
    header = np.array(
        [(DUMP_MAGIC, DUMP_VERSION, state.n, state.l_box, state.u)], dtype=_DUMP_HEADER
    )
    with open(path, "wb") as handle:
        handle.write(header.tobytes())
        for array in (*state.e, *state.b):
            handle.write(np.asarray(array, dtype="<f8").ravel(order="F").tobytes())
    metadata = {
        "format": "CARR",
        "version": DUMP_VERSION,
        "n": state.n,
        "l_box": repr(state.l_box),
        "u": repr(state.u),
        "t": repr(state.t),
        "step": state.step,
        "du": repr(state.du),
        "branch": "+" if state.branch > 0 else "-",
        "fields": ",".join(DUMP_FIELDS),
        "layout": "yee",
        "b_time": "u - du/2",
    }
    path.with_suffix(".meta").write_text(
        "".join(f"{key} = {value}\n" for key, value in metadata.items())
    )
    return path


def read_field_dump(path: Union[str, Path]) -> Tuple[Dict[str, object], Dict[str, np.ndarray]]:
    """Return (header, arrays); the sidecar, when present, is merged into the header."""
    path = Path(path)
    raw = path.read_bytes()
    header = np.frombuffer(raw[: _DUMP_HEADER.itemsize], dtype=_DUMP_HEADER)[0]
    if bytes(header["magic"]) != DUMP_MAGIC:
        raise FieldConfigError(f"{path} is not a field dump")
    n = int(header["n"])
    size = n**3
    body = np.frombuffer(raw[_DUMP_HEADER.itemsize :], dtype="<f8")
    if body.size != 6 * size:
        raise FieldConfigError(f"{path} holds {body.size} values, expected {6 * size}")
    arrays = {
        name: body[i * size : (i + 1) * size].reshape((n, n, n), order="F")
        for i, name in enumerate(DUMP_FIELDS)
    }
    info: Dict[str, object] = {
        "version": int(header["version"]),
        "n": n,
        "l_box": float(header["l_box"]),
        "u": float(header["u"]),
    }
    sidecar = path.with_suffix(".meta")
    if sidecar.exists():
        for key, value in read_key_value_file(sidecar).items():
            info.setdefault(key, value)
    return info, arrays
