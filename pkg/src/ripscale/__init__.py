"""Vietoris-Rips persistence under axis scaling, with bound audits.

The pipeline: point clouds and scaling transforms (:mod:`ripscale.geometry`),
Rips filtrations (:mod:`ripscale.rips`), persistence diagrams over Z/2
(:mod:`ripscale.persistence`), exact bottleneck and Wasserstein distances
(:mod:`ripscale.metrics`), closed-form stability bounds
(:mod:`ripscale.bounds`), and a scenario harness that measures distances
against bounds and records PASS/FAIL/VACUOUS verdicts
(:mod:`ripscale.harness`).
"""

from .bounds import (
    BoundSet,
    ExpectedBound,
    ScalingStats,
    classical_stability_bound,
    dimension_bound,
    expected_bound,
    iterative_bound,
    range_upper_bound,
    refined_lower_bound,
    scaling_stats,
    wasserstein_upper_bound,
)
from .geometry import (
    DistanceMatrix,
    PointCloud,
    ScalingTransform,
    apply_scaling,
    compose_scalings,
    diameter,
    distance_matrix,
    generate_circle,
    generate_hypercube,
    generate_random_cloud,
    k_diameter,
    load_point_cloud,
    metric_perturbation,
    save_point_cloud,
)
from .harness import (
    AUDIT_TOLERANCE,
    CLAIM_IDS,
    AuditVerdict,
    InternalInvariantError,
    Scenario,
    case_study_suite,
    compare_diagram_lists,
    run_audit,
    run_montecarlo,
    run_scenario,
    scenarios_from_obj,
)
from .metrics import (
    MatchingProblem,
    bottleneck,
    bottleneck_bruteforce,
    wasserstein,
    wasserstein_bruteforce,
)
from .persistence import (
    PersistenceDiagram,
    PersistencePair,
    betti_at,
    compute_persistence,
    load_diagrams,
    save_diagrams,
    scale_diagram,
)
from .reduction import backend as reduction_backend
from .reports import dumps_report, emit_report, load_report, loads_report
from .rips import (
    FilteredComplex,
    Simplex,
    build_rips,
    default_eps_cap,
    dump_filtration,
    simplex_count,
)

__version__ = "0.1.0"
