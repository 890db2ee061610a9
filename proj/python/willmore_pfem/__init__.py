"""Energy-stable parametric finite element solver for Willmore flow."""

from ._willmore import (  # noqa: F401
    FlowState,
    InitialState,
    PolygonalCurve,
    StepReport,
    Trajectory,
    check_identities,
    exact_circle_curvature,
    exact_circle_radius,
    exact_circle_velocity,
    manifold_distance,
    run_flow,
    sample_preset,
    willmore_energy,
)
