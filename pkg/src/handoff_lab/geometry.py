"""Planar geometry of a handoff region between two overlapping hexagonal cells.

Adjacent cells are modeled as congruent regular hexagons whose circumradius
equals the cell radius.  When two neighboring cells overlap, their
boundaries cross at two points; the segment joining those points is the
common chord.  The overlap depth is the distance from a hexagon side to
that chord, so tangent (non-overlapping) cells have zero overlap and the
chord coincides with the shared side.

A mobile triggers handoff at the point where it first enters the target
cell's coverage disc, which sits (2 - sqrt(3))/2 * radius in front of the
hexagon side.  Everything downstream works in a local frame holding that
trigger point, the chord endpoints, and the chord midpoint:

    trigger_to_chord = side_to_trigger + overlap
    half_chord       = radius/2 + overlap/sqrt(3)   (adjacent hexagon sides
                       meet at 120 degrees, so the chord widens by
                       overlap*tan(30deg) on each end)
    chord_half_angle = atan(half_chord / trigger_to_chord)

Angles are radians everywhere; headings are measured from the axis running
from the trigger point to the chord midpoint.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import InvalidParameterError

Point = Tuple[float, float]

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class CellGeometry:
    """Cell radius and chord overlap, both in meters.

    The overlap must satisfy 0 <= overlap_m < sqrt(3)/2 * cell_radius_m so
    the chord stays strictly between the hexagon side and the cell center.
    """

    cell_radius_m: float
    overlap_m: float = 0.0

    def __post_init__(self):
        a = self.cell_radius_m
        if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0):
            raise InvalidParameterError(f"cell_radius_m must be finite and positive, got {a!r}")
        bound = SQRT3 / 2.0 * a
        ov = self.overlap_m
        if not (isinstance(ov, (int, float)) and math.isfinite(ov) and 0.0 <= ov < bound):
            raise InvalidParameterError(
                f"overlap_m must lie in [0, {bound:.6g}) for cell_radius_m={a:.6g}, got {ov!r}"
            )


@dataclass(frozen=True)
class DerivedGeometry:
    """Lengths and the half-angle derived from a CellGeometry."""

    side_to_trigger_m: float     # hexagon side to the trigger point
    trigger_to_chord_m: float    # trigger point to the chord, perpendicular
    half_chord_m: float          # half the chord length
    mirror_span_m: float         # trigger point to its mirror image across the chord
    chord_half_angle_rad: float  # half-angle the chord subtends at the trigger point


@dataclass(frozen=True)
class LocalFrame:
    """Concrete coordinates for the trigger point and the chord."""

    trigger_point: Point
    chord_start: Point
    chord_end: Point
    chord_midpoint: Point

    def __post_init__(self):
        mx = 0.5 * (self.chord_start[0] + self.chord_end[0])
        my = 0.5 * (self.chord_start[1] + self.chord_end[1])
        span = math.dist(self.chord_start, self.chord_end)
        depth = math.dist(self.trigger_point, self.chord_midpoint)
        tol = 1e-9 * max(span, depth, 1.0)
        if span <= 0.0 or depth <= 0.0:
            raise InvalidParameterError("degenerate frame: chord or trigger-to-midpoint has zero length")
        if math.dist((mx, my), self.chord_midpoint) > tol:
            raise InvalidParameterError("chord_midpoint is not the midpoint of the chord")
        # The trigger point must face the chord: its line to the midpoint is
        # perpendicular to the chord.
        ex = self.chord_end[0] - self.chord_start[0]
        ey = self.chord_end[1] - self.chord_start[1]
        ax = self.chord_midpoint[0] - self.trigger_point[0]
        ay = self.chord_midpoint[1] - self.trigger_point[1]
        if abs(ex * ax + ey * ay) > tol * max(span, depth):
            raise InvalidParameterError("trigger-to-midpoint is not perpendicular to the chord")


def derive_geometry(geom: CellGeometry) -> DerivedGeometry:
    """Compute the local handoff-region measurements for one cell pair.

    Invalid geometry raises at CellGeometry construction; nothing is clamped
    here.
    """
    a = geom.cell_radius_m
    overlap = geom.overlap_m
    standoff = (2.0 - SQRT3) / 2.0 * a
    reach = standoff + overlap
    half_chord = a / 2.0 + overlap / SQRT3
    return DerivedGeometry(
        side_to_trigger_m=standoff,
        trigger_to_chord_m=reach,
        half_chord_m=half_chord,
        mirror_span_m=2.0 * reach,
        chord_half_angle_rad=math.atan2(half_chord, reach),
    )


def local_frame(geom: CellGeometry) -> LocalFrame:
    """Canonical frame: trigger point at the origin, chord vertical.

    The chord sits at x = trigger_to_chord_m; chord_start is the +y endpoint,
    chord_end the -y endpoint.  Headings are measured from the +x axis, which
    points from the trigger point to the chord midpoint.
    """
    dg = derive_geometry(geom)
    pr, w = dg.trigger_to_chord_m, dg.half_chord_m
    return LocalFrame(
        trigger_point=(0.0, 0.0),
        chord_start=(pr, w),
        chord_end=(pr, -w),
        chord_midpoint=(pr, 0.0),
    )


def overlap_from_spacing(cell_radius_m: float, center_spacing_m: float) -> float:
    """Overlap depth for two cells whose centers sit center_spacing_m apart.

    Tangent hexagons (spacing = sqrt(3) * radius) give zero overlap; closer
    centers overlap more.  Spacing must be positive and at most that bound.
    """
    a = cell_radius_m
    if not (math.isfinite(a) and a > 0):
        raise InvalidParameterError(f"cell_radius_m must be finite and positive, got {a!r}")
    s = center_spacing_m
    if not (math.isfinite(s) and 0.0 < s <= SQRT3 * a):
        raise InvalidParameterError(
            f"center_spacing_m must lie in (0, {SQRT3 * a:.6g}] so the cells overlap or touch, got {s!r}"
        )
    return (SQRT3 * a - s) / 2.0


def ray_chord_crossing(frame: LocalFrame, heading_rad: float) -> Optional[float]:
    """Distance from the trigger point to where a ray crosses the chord.

    The heading is measured from the trigger-to-midpoint axis and must lie
    in (-pi, pi].  Returns None when the ray misses the chord segment.  A
    ray exactly through a chord endpoint counts as crossing (measure-zero
    convention, fixed for determinism).
    """
    if not (math.isfinite(heading_rad) and -math.pi < heading_rad <= math.pi):
        raise InvalidParameterError(f"heading_rad must lie in (-pi, pi], got {heading_rad!r}")
    out = ray_chord_crossing_many(frame, np.array([heading_rad]))
    dist = float(out[0])
    return None if math.isnan(dist) else dist


def ray_chord_crossing_many(frame: LocalFrame, headings_rad: np.ndarray) -> np.ndarray:
    """Vectorized ray/segment intersection; NaN marks a miss.

    Solves trigger + t*dir = start + s*(end - start) per heading and accepts
    t >= 0, 0 <= s <= 1.  Same endpoint convention as the scalar form.
    """
    px, py = frame.trigger_point
    ax = frame.chord_start[0] - px
    ay = frame.chord_start[1] - py
    ex = frame.chord_end[0] - frame.chord_start[0]
    ey = frame.chord_end[1] - frame.chord_start[1]
    # heading 0 points at the chord midpoint; +pi/2 is 90 deg CCW from that
    ux = frame.chord_midpoint[0] - px
    uy = frame.chord_midpoint[1] - py
    norm = math.hypot(ux, uy)
    ux, uy = ux / norm, uy / norm

    headings_rad = np.asarray(headings_rad, dtype=float)
    c = np.cos(headings_rad)
    sn = np.sin(headings_rad)
    dx = c * ux - sn * uy
    dy = c * uy + sn * ux

    den = dx * ey - dy * ex
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (ax * ey - ay * ex) / den
        s = (ax * dy - ay * dx) / den
    hit = (den != 0.0) & (t >= 0.0) & (s >= 0.0) & (s <= 1.0)
    return np.where(hit, t, np.nan)


def cluster_centers(cell_radius_m: float) -> List[Point]:
    """Centers of a seven-cell cluster: one cell ringed by six neighbors.

    The first element is the origin; the six neighbors sit at distance
    sqrt(3)*a (twice the hexagon apothem) at multiples of 60 degrees.
    """
    if not (math.isfinite(cell_radius_m) and cell_radius_m > 0):
        raise InvalidParameterError(
            f"cell_radius_m must be finite and positive, got {cell_radius_m!r}"
        )
    spacing = SQRT3 * cell_radius_m
    centers: List[Point] = [(0.0, 0.0)]
    for k in range(6):
        ang = math.radians(60.0 * k)
        centers.append((spacing * math.cos(ang), spacing * math.sin(ang)))
    return centers
