"""Grid sweeps over model parameters with per-point fault isolation.

A sweep point is a pure function of (params, n_max); points run serially or on
a thread pool and either way land in the same coordinate-ordered table, so a
sweep is reproducible bit for bit. A point that fails (for example zeta > 0
with zero detuning) is recorded as an error row, never an abort.
"""

from __future__ import annotations

import csv
import dataclasses
import datetime
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .dynamics import SpectrumResult, g2_zero_from_state, pl_spectrum
from .hilbert import CompositeBasis, annihilation, qubit_lowering
from .liouvillian import build_liouvillian
from .manifold import TransitionLine, transition_lines
from .model import ModelParams
from .steadystate import expectation, steady_state

SCALAR_OBSERVABLES = ("n_cavity", "n_qd1", "n_qd2", "g2_zero")
ALLOWED_OBSERVABLES = SCALAR_OBSERVABLES + ("transition_lines", "spectrum")

_PARAM_NAMES = tuple(f.name for f in dataclasses.fields(ModelParams))


@dataclass(frozen=True)
class SweepAxis:
    """Log-spaced scan of one ModelParams field."""

    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in _PARAM_NAMES:
            raise ValueError(
                f"unknown sweep parameter {self.name!r}; expected one of {', '.join(_PARAM_NAMES)}"
            )
        if not (self.start > 0.0 and self.stop > 0.0):
            raise ValueError(f"log axis {self.name!r} needs strictly positive range")
        if self.count < 2:
            raise ValueError(f"axis {self.name!r} needs count >= 2, got {self.count}")

    def values(self) -> np.ndarray:
        return np.geomspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep and what to record at each grid point."""

    params: ModelParams
    axis1: SweepAxis
    axis2: SweepAxis
    observables: tuple[str, ...] = ("n_cavity", "n_qd1", "n_qd2")
    n_max: int = 3
    omega_grid: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "observables", tuple(self.observables))
        for name in self.observables:
            if name not in ALLOWED_OBSERVABLES:
                raise ValueError(
                    f"unknown observable {name!r}; expected one of {', '.join(ALLOWED_OBSERVABLES)}"
                )
        if not self.observables:
            raise ValueError("at least one observable is required")
        if self.axis1.name == self.axis2.name:
            raise ValueError(f"both axes sweep {self.axis1.name!r}; axes must differ")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.omega_grid is not None:
            grid = np.asarray(self.omega_grid, dtype=float).copy()
            grid.setflags(write=False)
            object.__setattr__(self, "omega_grid", grid)

    def columns(self) -> tuple[str, ...]:
        cols = [self.axis1.name, self.axis2.name]
        cols += [name for name in SCALAR_OBSERVABLES if name in self.observables]
        if "transition_lines" in self.observables:
            for k in (1, 2, 3):
                cols += [f"line{k}_frequency_mev", f"line{k}_hwhm_mev"]
        cols += ["status", "error"]
        return tuple(cols)


@dataclass(frozen=True)
class SweepResult:
    """Coordinate-ordered sweep table plus run metadata.

    rows hold one dict per grid point (axis1-major order) with every column
    present; errored points carry None values, a status code, and the error
    text. Spectra, when requested, are kept out of the flat table and keyed by
    (i, j) grid indices.
    """

    spec: SweepSpec
    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    metadata: dict
    spectra: dict | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(row[c]) for c in self.columns])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(self.to_csv())


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _scalar_values(rho, wanted: tuple[str, ...]) -> dict:
    basis = rho.basis
    out = {}
    if "n_cavity" in wanted:
        a = annihilation(basis)
        out["n_cavity"] = expectation(rho, a.dag() @ a).real
    if "n_qd1" in wanted:
        s1 = qubit_lowering(basis, 1)
        out["n_qd1"] = expectation(rho, s1.dag() @ s1).real
    if "n_qd2" in wanted:
        s2 = qubit_lowering(basis, 2)
        out["n_qd2"] = expectation(rho, s2.dag() @ s2).real
    if "g2_zero" in wanted:
        out["g2_zero"] = g2_zero_from_state(rho)
    return out


def evaluate_point(spec: SweepSpec, value1: float, value2: float):
    """One grid point: (row dict, SpectrumResult or None). Errors become data."""
    row = {c: None for c in spec.columns()}
    row[spec.axis1.name] = float(value1)
    row[spec.axis2.name] = float(value2)
    spectrum = None
    try:
        point = spec.params.replace(
            **{spec.axis1.name: float(value1), spec.axis2.name: float(value2)}
        )
        if any(name in spec.observables for name in SCALAR_OBSERVABLES):
            basis = CompositeBasis(spec.n_max)
            rho = steady_state(build_liouvillian(point, basis))
            row.update(_scalar_values(rho, spec.observables))
        if "transition_lines" in spec.observables:
            for k, line in enumerate(transition_lines(point), start=1):
                row[f"line{k}_frequency_mev"] = line.frequency
                row[f"line{k}_hwhm_mev"] = line.hwhm
        if "spectrum" in spec.observables:
            spectrum = pl_spectrum(point, spec.omega_grid, n_max=spec.n_max)
        row["status"] = "ok"
        row["error"] = ""
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        row["status"] = f"error:{type(exc).__name__}"
        row["error"] = str(exc)
    return row, spectrum


def _run_metadata(spec: SweepSpec) -> dict:
    return {
        "params": spec.params.as_dict(),
        "axis1": dataclasses.asdict(spec.axis1),
        "axis2": dataclasses.asdict(spec.axis2),
        "observables": list(spec.observables),
        "n_max": spec.n_max,
        "package_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def run_sweep(spec: SweepSpec, *, parallelism: int = 1) -> SweepResult:
    """Evaluate the full grid; identical output for any parallelism degree.

    The timestamp lives only in metadata, never in the CSV table, so repeated
    runs of the same spec diff clean.
    """
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    v1s = spec.axis1.values()
    v2s = spec.axis2.values()
    tasks = [(i, j, float(a), float(b)) for i, a in enumerate(v1s) for j, b in enumerate(v2s)]

    def work(task):
        _, _, a, b = task
        return evaluate_point(spec, a, b)

    if parallelism == 1:
        outs = [work(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            outs = list(pool.map(work, tasks))

    rows = tuple(row for row, _ in outs)
    spectra = None
    if "spectrum" in spec.observables:
        spectra = {
            (i, j): spectrum for (i, j, _, _), (_, spectrum) in zip(tasks, outs)
        }
    return SweepResult(
        spec=spec,
        columns=spec.columns(),
        rows=rows,
        metadata=_run_metadata(spec),
        spectra=spectra,
    )


@dataclass(frozen=True)
class SpectraPanel:
    """Spectra stacked over zeta at one tunneling amplitude, with line overlays."""

    tunneling: float
    zetas: np.ndarray
    statuses: tuple[str, ...]
    spectra: tuple[SpectrumResult | None, ...]
    lines: tuple[tuple[TransitionLine, ...] | None, ...]

    def __post_init__(self):
        z = np.asarray(self.zetas, dtype=float).copy()
        z.setflags(write=False)
        object.__setattr__(self, "zetas", z)


def run_spectra_panel(
    params: ModelParams,
    tunneling_values,
    zeta_values,
    *,
    omega_grid=None,
    n_max: int = 3,
    parallelism: int = 1,
) -> list[SpectraPanel]:
    """One SpectraPanel per tunneling amplitude over a shared zeta scan."""
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    zeta_values = np.asarray(zeta_values, dtype=float)

    def point(task):
        tun, z = task
        try:
            p = params.replace(tunneling_T=float(tun), zeta=float(z))
            spectrum = pl_spectrum(p, omega_grid, n_max=n_max)
            lines = transition_lines(p)
            return "ok", spectrum, lines
        except (ValueError, RuntimeError, ArithmeticError) as exc:
            return f"error:{type(exc).__name__}: {exc}", None, None

    panels = []
    for tun in tunneling_values:
        tasks = [(float(tun), float(z)) for z in zeta_values]
        if parallelism == 1:
            outs = [point(t) for t in tasks]
        else:
            with ThreadPoolExecutor(max_workers=parallelism) as pool:
                outs = list(pool.map(point, tasks))
        panels.append(
            SpectraPanel(
                tunneling=float(tun),
                zetas=zeta_values,
                statuses=tuple(o[0] for o in outs),
                spectra=tuple(o[1] for o in outs),
                lines=tuple(o[2] for o in outs),
            )
        )
    return panels


def panel_spectra_csv(panel: SpectraPanel) -> str:
    """Long-format table (zeta, omega, offset, intensity) for one panel."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["tunneling_T", "zeta", "omega_mev", "offset_mev", "intensity"])
    for z, status, spectrum in zip(panel.zetas, panel.statuses, panel.spectra):
        if status != "ok" or spectrum is None:
            continue
        for w, off, inten in zip(spectrum.frequencies, spectrum.offsets, spectrum.intensities):
            writer.writerow(
                [
                    _format_cell(float(panel.tunneling)),
                    _format_cell(float(z)),
                    _format_cell(float(w)),
                    _format_cell(float(off)),
                    _format_cell(float(inten)),
                ]
            )
    return buf.getvalue()


def panel_lines_csv(panel: SpectraPanel) -> str:
    """Long-format transition-line table (zeta, line index, frequency, width)."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["tunneling_T", "zeta", "line_index", "frequency_mev", "offset_mev", "hwhm_mev"]
    )
    for z, status, lines in zip(panel.zetas, panel.statuses, panel.lines):
        if status != "ok" or lines is None:
            continue
        for k, line in enumerate(lines, start=1):
            writer.writerow(
                [
                    _format_cell(float(panel.tunneling)),
                    _format_cell(float(z)),
                    str(k),
                    _format_cell(line.frequency),
                    _format_cell(line.offset),
                    _format_cell(line.hwhm),
                ]
            )
    return buf.getvalue()
