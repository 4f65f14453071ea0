"""Time-granulated formal concept analysis with amplitude belief states."""

from .context import (
    FormalContext,
    QualityDimension,
    add_object,
    new_context,
    parse_context,
    serialize_context,
)
from .ensemble import (
    BeliefState,
    Observable,
    ProjectionVector,
    inner_product,
    measure,
    normalize,
    object_state,
    project_vector,
    reinforce_from_support,
    uniform_prior,
)
from .lattice import (
    Concept,
    ConceptLattice,
    Implication,
    Verdict,
    VerdictKind,
    closure,
    derive_extent,
    derive_intent,
    enumerate_concepts,
    export_dot,
    hasse_edges,
    holds,
    insert_object,
    serialize_lattice,
)
from .scaling import (
    Perspective,
    ScaleReport,
    Scenario,
    TimelineEntry,
    scale_scenario,
    validate_scenario,
)
from .session import (
    OracleAnswer,
    Phase,
    ScriptedOracle,
    Session,
    TraceEvent,
    is_conscious,
    pose_cue,
    replay,
    resolve,
    serialize_trace,
    snapshot,
    start_session,
    suggest_cue,
    terminate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
