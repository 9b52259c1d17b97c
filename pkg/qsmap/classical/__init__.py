"""Classical standard map: iteration, manifolds, homoclinic invariants."""

from qsmap.classical.estimates import k_break, lobe_area_estimate, n_break
from qsmap.classical.export import homoclinic_orbit_frame, homoclinic_payload, manifold_frame
from qsmap.classical.homoclinic import (
    HomoclinicRecord,
    NoIntersectionFound,
    NonConvergentActionSum,
    TangencyDetected,
    find_primary_homoclinic,
    homoclinic_action,
    lobe_area,
    locate_primary_pair,
)
from qsmap.classical.manifolds import (
    ManifoldCurve,
    ManifoldParametrization,
    RefinementBudgetExceeded,
    distance_to_polyline,
    trace_manifold,
)
from qsmap.classical.standard_map import (
    FIXED_POINT,
    ClassicalError,
    LiftedOrbit,
    MapParams,
    PhasePoint,
    advance,
    chaotic_layer,
    eigendirections,
    generating_function,
    lift_step,
    monodromy,
    reversal,
    stability_exponent,
    tangent_map,
)

__all__ = [
    # Map
    "MapParams",
    "PhasePoint",
    "LiftedOrbit",
    "FIXED_POINT",
    "advance",
    "lift_step",
    "tangent_map",
    "monodromy",
    "stability_exponent",
    "eigendirections",
    "reversal",
    "generating_function",
    "chaotic_layer",
    # Manifolds
    "ManifoldCurve",
    "ManifoldParametrization",
    "trace_manifold",
    "distance_to_polyline",
    # Homoclinic orbits
    "HomoclinicRecord",
    "find_primary_homoclinic",
    "locate_primary_pair",
    "homoclinic_action",
    "lobe_area",
    # Estimates
    "lobe_area_estimate",
    "k_break",
    "n_break",
    # Export
    "manifold_frame",
    "homoclinic_orbit_frame",
    "homoclinic_payload",
    # Errors
    "ClassicalError",
    "RefinementBudgetExceeded",
    "NoIntersectionFound",
    "TangencyDetected",
    "NonConvergentActionSum",
]
