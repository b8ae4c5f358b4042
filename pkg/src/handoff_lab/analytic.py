"""Closed-form handoff model built on the overlap geometry.

A mobile sitting at the trigger point picks a heading uniformly at random.
Write reach for the trigger-to-chord distance and half_angle for the
chord's half-angle as seen from the trigger point.  Headings more than
half_angle off the chord's midpoint never reach the new cell, so the
handoff was triggered falsely; headings inside cross the chord after
reach*sec(heading) meters.  Dividing by the speed v gives the crossing
time, and everything below follows from its law:

    false handoff:   1 - half_angle/pi
    crossing time:   t in (t_min, t_max), with t_min = reach/v
                     and t_max = t_min*sec(half_angle)
    density:         f(t) = t_min / (half_angle * t * sqrt(t^2 - t_min^2))
    distribution:    F(tau) = arccos(t_min/tau) / half_angle on the support

A handoff fails when the mobile crosses the chord before the signaling
delay tau has elapsed, so the failure probability is exactly F(tau).
"""

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .errors import InvalidParameterError, NotBracketedError, OutOfDomainError
from .geometry import CellGeometry, derive_geometry

SQRT3_HALF = math.sqrt(3.0) / 2.0

# Residual tolerance for the overlap solver and width floor for its bracket.
_ADAPT_TOL = 1e-9
_ADAPT_MAX_ITER = 200


@dataclass(frozen=True)
class SpeedModel:
    """Mobile speed: either a fixed value or uniform on [vmin, vmax] m/s."""

    kind: str
    v_mps: float = 0.0
    vmin_mps: float = 0.0
    vmax_mps: float = 0.0

    def __post_init__(self):
        if self.kind == "fixed":
            if not (math.isfinite(self.v_mps) and self.v_mps > 0):
                raise InvalidParameterError(f"fixed speed must be positive, got {self.v_mps!r}")
        elif self.kind == "uniform":
            ok = (
                math.isfinite(self.vmin_mps)
                and math.isfinite(self.vmax_mps)
                and 0 < self.vmin_mps < self.vmax_mps
            )
            if not ok:
                raise InvalidParameterError(
                    f"uniform speed needs 0 < vmin < vmax, got [{self.vmin_mps!r}, {self.vmax_mps!r}]"
                )
        else:
            raise InvalidParameterError(f"unknown speed model kind {self.kind!r}")

    @classmethod
    def fixed(cls, v_mps: float) -> "SpeedModel":
        return cls(kind="fixed", v_mps=v_mps)

    @classmethod
    def uniform(cls, vmin_mps: float, vmax_mps: float) -> "SpeedModel":
        return cls(kind="uniform", vmin_mps=vmin_mps, vmax_mps=vmax_mps)


@dataclass(frozen=True)
class CrossingTimeSupport:
    """Support of the chord-crossing time at one speed."""

    t_min_s: float
    t_max_s: float

    def __post_init__(self):
        if not (0 < self.t_min_s < self.t_max_s):
            raise InvalidParameterError(
                f"support needs 0 < t_min < t_max, got [{self.t_min_s!r}, {self.t_max_s!r}]"
            )


def _check_speed(v_mps: float):
    if not (math.isfinite(v_mps) and v_mps > 0):
        raise OutOfDomainError(f"speed must be positive, got {v_mps!r}")


def crossing_time_support(geom: CellGeometry, v_mps: float) -> CrossingTimeSupport:
    """Earliest and latest possible chord-crossing times at a fixed speed.

    The earliest crossing heads straight for the chord's midpoint; the
    latest grazes a chord endpoint, longer by the secant of the chord
    half-angle.
    """
    _check_speed(v_mps)
    dg = derive_geometry(geom)
    t_min = dg.trigger_to_chord_m / v_mps
    t_max = math.hypot(dg.trigger_to_chord_m, dg.half_chord_m) / v_mps
    return CrossingTimeSupport(t_min_s=t_min, t_max_s=t_max)


def speed_pdf(v_mps: float, model: SpeedModel) -> float:
    """Density of a uniform speed model at v_mps; zero outside [vmin, vmax]."""
    if model.kind != "uniform":
        raise InvalidParameterError("speed_pdf is defined for uniform speed models only")
    if model.vmin_mps <= v_mps <= model.vmax_mps:
        return 1.0 / (model.vmax_mps - model.vmin_mps)
    return 0.0


def direction_pdf(theta_rad: float) -> float:
    """Density of the uniform heading law: 1/(2*pi) on (-pi, pi], else 0."""
    if -math.pi < theta_rad <= math.pi:
        return 1.0 / (2.0 * math.pi)
    return 0.0


def false_handoff_probability(geom: CellGeometry) -> float:
    """Probability that a uniformly headed mobile never enters the new cell.

    Only the arc of headings within the chord half-angle of the midpoint
    direction crosses the chord, so the miss probability is
    1 - half_angle/pi.  Scale-free: it depends on overlap only through
    that angle.
    """
    dg = derive_geometry(geom)
    return 1.0 - dg.chord_half_angle_rad / math.pi


def crossing_time(geom: CellGeometry, v_mps: float, heading_rad: float) -> float:
    """Time to reach the chord along one heading.

    Equals the trigger-to-chord distance times sec(heading), divided by
    the speed.  Defined only for headings strictly inside the chord
    half-angle on either side; anything else never crosses and raises
    OutOfDomainError.
    """
    _check_speed(v_mps)
    dg = derive_geometry(geom)
    if not (math.isfinite(heading_rad) and abs(heading_rad) < dg.chord_half_angle_rad):
        raise OutOfDomainError(
            f"heading {heading_rad!r} does not cross the chord (|heading| >= {dg.chord_half_angle_rad:.9g})"
        )
    return dg.trigger_to_chord_m / math.cos(heading_rad) / v_mps


def crossing_time_pdf(geom: CellGeometry, v_mps: float, t_s: float) -> float:
    """Density of the chord-crossing time at a fixed speed.

    Supported on the open interval (t_min, t_max) with an integrable
    1/sqrt singularity at t_min; returns 0 outside, including at t_min
    itself.
    """
    _check_speed(v_mps)
    dg = derive_geometry(geom)
    span = dg.mirror_span_m
    t_min = dg.trigger_to_chord_m / v_mps
    t_max = math.hypot(dg.trigger_to_chord_m, dg.half_chord_m) / v_mps
    if not math.isfinite(t_s) or t_s <= t_min or t_s >= t_max:
        return 0.0
    return span / (dg.chord_half_angle_rad * t_s * math.sqrt((2.0 * v_mps * t_s) ** 2 - span ** 2))


def crossing_time_cdf(geom: CellGeometry, v_mps: float, tau_s: float) -> float:
    """Probability that the chord is crossed within tau_s seconds.

    Piecewise: 0 up to t_min, arccos(t_min/tau) over the chord half-angle
    across the support, 1 from t_max on.  The branches meet continuously
    at both ends.
    """
    _check_speed(v_mps)
    if not (math.isfinite(tau_s) and tau_s >= 0):
        raise OutOfDomainError(f"tau_s must be finite and nonnegative, got {tau_s!r}")
    dg = derive_geometry(geom)
    t_min = dg.trigger_to_chord_m / v_mps
    t_max = math.hypot(dg.trigger_to_chord_m, dg.half_chord_m) / v_mps
    if tau_s <= t_min:
        return 0.0
    if tau_s >= t_max:
        return 1.0
    value = math.acos(dg.mirror_span_m / (2.0 * v_mps * tau_s)) / dg.chord_half_angle_rad
    # clamp only after the branch logic; roundoff can nudge past the ends
    return min(1.0, max(0.0, value))


def handoff_failure_probability(geom: CellGeometry, v_mps: float, tau_s: float) -> float:
    """Probability that signaling delay tau_s outlasts the crossing time.

    The handoff fails exactly when the mobile crosses into the new cell
    before signaling completes, so this is the crossing-time distribution
    evaluated at tau_s.
    """
    return crossing_time_cdf(geom, v_mps, tau_s)


def expected_failure_over_speed(geom: CellGeometry, model: SpeedModel, tau_s: float) -> float:
    """Failure probability averaged over a uniform speed model.

    Integrates handoff_failure_probability over [vmin, vmax] and normalizes.
    The integrand is 0 for speeds too slow to reach the chord within tau_s
    and 1 for speeds that cross even along the grazing heading; the
    quadrature runs only over the smooth middle piece, so the absolute error
    stays well under 1e-6.
    """
    if model.kind != "uniform":
        raise InvalidParameterError("expected_failure_over_speed needs a uniform speed model")
    if not (math.isfinite(tau_s) and tau_s >= 0):
        raise OutOfDomainError(f"tau_s must be finite and nonnegative, got {tau_s!r}")
    if tau_s == 0.0:
        return 0.0
    dg = derive_geometry(geom)
    v_all_slow = dg.trigger_to_chord_m / tau_s                                  # below: never fails
    v_all_fast = math.hypot(dg.trigger_to_chord_m, dg.half_chord_m) / tau_s    # above: always fails
    vmin, vmax = model.vmin_mps, model.vmax_mps

    total = 0.0
    mid_lo = min(max(vmin, v_all_slow), vmax)
    mid_hi = max(min(vmax, v_all_fast), vmin)
    if mid_hi > mid_lo:
        part, _ = quad(
            lambda v: handoff_failure_probability(geom, v, tau_s),
            mid_lo,
            mid_hi,
            epsabs=1e-9,
            epsrel=1e-9,
            limit=200,
        )
        total += part
    if vmax > v_all_fast:
        total += vmax - max(vmin, v_all_fast)
    value = total / (vmax - vmin)
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class OverlapSolution:
    """Overlap returned by adapt_overlap plus the probabilities it yields."""

    overlap_m: float
    failure_probability: float
    false_handoff_probability: float


def adapt_overlap(
    cell_radius_m: float, v_mps: float, tau_s: float, target_pf: float
) -> OverlapSolution:
    """Find the overlap depth whose failure probability matches target_pf.

    The failure probability is nonincreasing in the overlap (a deeper chord
    means a longer ride to it), so bisection on [0, sqrt(3)/2*a) converges.
    Raises NotBracketedError when no overlap in that range can reach the
    target.  Ties at a bracket edge return the edge.
    """
    if not (math.isfinite(cell_radius_m) and cell_radius_m > 0):
        raise InvalidParameterError(f"cell_radius_m must be positive, got {cell_radius_m!r}")
    _check_speed(v_mps)
    if not (math.isfinite(tau_s) and tau_s >= 0):
        raise OutOfDomainError(f"tau_s must be finite and nonnegative, got {tau_s!r}")
    if not (math.isfinite(target_pf) and target_pf > 0):
        raise NotBracketedError(f"target_pf must be positive, got {target_pf!r}")

    def pf(overlap: float) -> float:
        return handoff_failure_probability(
            CellGeometry(cell_radius_m, overlap), v_mps, tau_s
        )

    def solution(overlap: float) -> OverlapSolution:
        geom = CellGeometry(cell_radius_m, overlap)
        return OverlapSolution(
            overlap_m=overlap,
            failure_probability=handoff_failure_probability(geom, v_mps, tau_s),
            false_handoff_probability=false_handoff_probability(geom),
        )

    lo, hi = 0.0, SQRT3_HALF * cell_radius_m - 1e-9 * cell_radius_m
    pf_lo, pf_hi = pf(lo), pf(hi)
    if target_pf > pf_lo:
        raise NotBracketedError(
            f"target_pf={target_pf:.9g} exceeds the zero-overlap failure probability "
            f"{pf_lo:.9g}; no overlap can raise it further"
        )
    if abs(pf_lo - target_pf) <= _ADAPT_TOL:
        return solution(lo)
    if target_pf < pf_hi - _ADAPT_TOL:
        raise NotBracketedError(
            f"target_pf={target_pf:.9g} is below {pf_hi:.9g}, the failure probability "
            f"at the maximum overlap; the target is unreachable"
        )
    if abs(pf_hi - target_pf) <= _ADAPT_TOL:
        return solution(hi)

    mid = lo
    for _ in range(_ADAPT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        resid = pf(mid) - target_pf
        if abs(resid) <= _ADAPT_TOL and hi - lo <= 1e-7 * cell_radius_m:
            break
        if resid > 0.0:
            lo = mid
        else:
            hi = mid
    return solution(mid)
