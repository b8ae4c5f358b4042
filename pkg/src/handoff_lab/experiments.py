"""Parameter sweeps over the closed-form model, with optional sampling overlay.

Three sweep kinds cover the quantities worth plotting:

    false_vs_overlap   false-handoff probability vs overlap, one series per
                       cell radius
    failure_vs_speed   failure probability vs speed, one series per overlap
    failure_vs_delay   failure probability vs signaling delay, one series
                       per overlap

Every grid point's analytic value is a direct call into the analytic module.
When Monte Carlo controls are attached, each point gets an estimate and
standard error from its own derived substream, so the whole table is a pure
function of the sweep spec.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from . import __version__
from .analytic import false_handoff_probability, handoff_failure_probability
from .errors import InvalidParameterError
from .geometry import CellGeometry
from .montecarlo import SimControls, derive_seed, estimate_failure, estimate_false_handoff

SWEEP_KINDS = ("false_vs_overlap", "failure_vs_speed", "failure_vs_delay")


@dataclass(frozen=True)
class Axis:
    """Linearly spaced sweep axis with at least two points."""

    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if not (isinstance(self.steps, int) and self.steps >= 2):
            raise InvalidParameterError(f"axis needs steps >= 2, got {self.steps!r}")
        if not self.stop > self.start:
            raise InvalidParameterError(
                f"axis needs stop > start, got [{self.start!r}, {self.stop!r}]"
            )

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep, what to hold fixed, and whether to overlay sampling.

    Per kind:
      false_vs_overlap   series = cell_radius_m values, axis sweeps overlap_m
      failure_vs_speed   series = overlap_m values, axis sweeps speed;
                         cell_radius_m and delay_s fixed
      failure_vs_delay   series = overlap_m values, axis sweeps delay;
                         cell_radius_m and speed_mps fixed
    """

    kind: str
    axis: Axis
    cell_radius_m: Tuple[float, ...] = ()
    overlap_m: Tuple[float, ...] = (0.0,)
    speed_mps: Optional[float] = None
    delay_s: Optional[float] = None
    mc: Optional[SimControls] = None

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise InvalidParameterError(
                f"kind must be one of {', '.join(SWEEP_KINDS)}, got {self.kind!r}"
            )
        if self.kind == "false_vs_overlap":
            if not self.cell_radius_m:
                raise InvalidParameterError("false_vs_overlap needs at least one cell_radius_m")
            if self.axis.start < 0:
                raise InvalidParameterError("overlap axis must start at 0 or above")
        else:
            if len(self.cell_radius_m) != 1:
                raise InvalidParameterError(f"{self.kind} needs exactly one cell_radius_m")
            if not self.overlap_m:
                raise InvalidParameterError(f"{self.kind} needs at least one overlap_m")
        if self.kind == "failure_vs_speed":
            if self.delay_s is None or not self.delay_s >= 0:
                raise InvalidParameterError("failure_vs_speed needs a nonnegative fixed delay_s")
            if self.axis.start <= 0:
                raise InvalidParameterError("speed axis must be positive")
        if self.kind == "failure_vs_delay":
            if self.speed_mps is None or not self.speed_mps > 0:
                raise InvalidParameterError("failure_vs_delay needs a positive fixed speed_mps")
            if self.axis.start < 0:
                raise InvalidParameterError("delay axis must start at 0 or above")


@dataclass(frozen=True)
class SweepTable:
    """Column-named rows in deterministic grid order, plus provenance."""

    columns: Tuple[str, ...]
    rows: Tuple[Tuple[float, ...], ...]
    provenance: Dict[str, str] = field(compare=False)

    def series_count(self) -> int:
        return len({row[0] for row in self.rows}) if self.rows else 0


def _provenance(spec: SweepSpec) -> Dict[str, str]:
    prov = {
        "kind": spec.kind,
        "axis": f"{spec.axis.start:.9g}:{spec.axis.stop:.9g}:{spec.axis.steps}",
        "cell_radius_m": ",".join(f"{a:.9g}" for a in spec.cell_radius_m),
        "overlap_m": ",".join(f"{o:.9g}" for o in spec.overlap_m),
        "version": __version__,
    }
    if spec.speed_mps is not None:
        prov["speed_mps"] = f"{spec.speed_mps:.9g}"
    if spec.delay_s is not None:
        prov["delay_s"] = f"{spec.delay_s:.9g}"
    if spec.mc is not None:
        prov["mc_samples"] = str(spec.mc.samples)
        prov["mc_seed"] = str(spec.mc.seed)
        prov["mc_batches"] = str(spec.mc.batches)
    return prov


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Evaluate one sweep spec into a table.

    Rows are emitted series-major, then along the axis.  Invalid grid points
    (an overlap beyond a radius' bound, say) raise with the offending point
    named rather than being skipped.
    """
    axis_values = [float(x) for x in spec.axis.points()]
    rows = []
    point_index = 0

    def mc_controls() -> SimControls:
        return SimControls(
            samples=spec.mc.samples,
            seed=derive_seed(spec.mc.seed, point_index),
            batches=spec.mc.batches,
        )

    if spec.kind == "false_vs_overlap":
        columns = ["cell_radius_m", "overlap_m", "false_handoff_probability"]
        if spec.mc is not None:
            columns += ["estimate", "std_err"]
        for a in spec.cell_radius_m:
            for x in axis_values:
                try:
                    geom = CellGeometry(a, x)
                except InvalidParameterError as exc:
                    raise InvalidParameterError(
                        f"grid point (cell_radius_m={a:.9g}, overlap_m={x:.9g}): {exc}"
                    ) from exc
                row = [a, x, false_handoff_probability(geom)]
                if spec.mc is not None:
                    est = estimate_false_handoff(geom, mc_controls())
                    row += [est.p_hat, est.std_err]
                rows.append(tuple(row))
                point_index += 1
        return SweepTable(tuple(columns), tuple(rows), _provenance(spec))

    a = spec.cell_radius_m[0]
    swept_name = "speed_mps" if spec.kind == "failure_vs_speed" else "delay_s"
    columns = ["overlap_m", swept_name, "failure_probability"]
    if spec.mc is not None:
        columns += ["estimate", "std_err"]
    for ov in spec.overlap_m:
        try:
            geom = CellGeometry(a, ov)
        except InvalidParameterError as exc:
            raise InvalidParameterError(
                f"grid series (cell_radius_m={a:.9g}, overlap_m={ov:.9g}): {exc}"
            ) from exc
        for x in axis_values:
            if spec.kind == "failure_vs_speed":
                v, tau = x, spec.delay_s
            else:
                v, tau = spec.speed_mps, x
            row = [ov, x, handoff_failure_probability(geom, v, tau)]
            if spec.mc is not None:
                est = estimate_failure(geom, v, tau, mc_controls())
                row += [est.p_hat, est.std_err]
            rows.append(tuple(row))
            point_index += 1
    return SweepTable(tuple(columns), tuple(rows), _provenance(spec))
