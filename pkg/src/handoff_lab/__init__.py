"""Handoff analysis for overlapping hexagonal cells.

Closed-form false-handoff and handoff-failure probabilities, Monte Carlo
cross-checks, an agent-hierarchy classifier for handoff delays, parameter
sweeps, and a small CLI.
"""

__version__ = "0.1.0"

from .analytic import (
    CrossingTimeSupport,
    OverlapSolution,
    SpeedModel,
    adapt_overlap,
    crossing_time,
    crossing_time_cdf,
    crossing_time_pdf,
    crossing_time_support,
    direction_pdf,
    expected_failure_over_speed,
    false_handoff_probability,
    handoff_failure_probability,
    speed_pdf,
)
from .errors import (
    HandoffLabError,
    InvalidParameterError,
    NotBracketedError,
    OutOfDomainError,
    ScenarioParseError,
    ScenarioValidationError,
    UnknownBaseStationError,
    UnsupportedHandoffTypeError,
)
from .experiments import Axis, SweepSpec, SweepTable, run_sweep
from .geometry import (
    CellGeometry,
    DerivedGeometry,
    LocalFrame,
    cluster_centers,
    derive_geometry,
    local_frame,
    overlap_from_spacing,
    ray_chord_crossing,
)
from .montecarlo import (
    EcdfReport,
    Estimate,
    SimControls,
    crossing_time_ecdf,
    derive_seed,
    estimate_failure,
    estimate_false_handoff,
)
from .topology import (
    AccessSystem,
    DelayProfile,
    ForeignAgent,
    HandoffType,
    NetworkTopology,
    classify_handoff,
    delay_for,
)

__all__ = [
    "__version__",
    "AccessSystem",
    "Axis",
    "CellGeometry",
    "CrossingTimeSupport",
    "DelayProfile",
    "DerivedGeometry",
    "EcdfReport",
    "Estimate",
    "ForeignAgent",
    "HandoffLabError",
    "HandoffType",
    "InvalidParameterError",
    "LocalFrame",
    "NetworkTopology",
    "NotBracketedError",
    "OutOfDomainError",
    "OverlapSolution",
    "ScenarioParseError",
    "ScenarioValidationError",
    "SimControls",
    "SpeedModel",
    "SweepSpec",
    "SweepTable",
    "UnknownBaseStationError",
    "UnsupportedHandoffTypeError",
    "adapt_overlap",
    "classify_handoff",
    "cluster_centers",
    "crossing_time",
    "crossing_time_cdf",
    "crossing_time_ecdf",
    "crossing_time_pdf",
    "crossing_time_support",
    "delay_for",
    "derive_geometry",
    "derive_seed",
    "direction_pdf",
    "estimate_failure",
    "estimate_false_handoff",
    "expected_failure_over_speed",
    "false_handoff_probability",
    "handoff_failure_probability",
    "local_frame",
    "overlap_from_spacing",
    "ray_chord_crossing",
    "run_sweep",
    "speed_pdf",
]
