"""Execution engine and verifier for dynamic condition response graphs."""

from .buchi import (
    TAU,
    BuchiAutomaton,
    BuchiState,
    BuchiTransition,
    ComparisonReport,
    build_buchi,
    buchi_accepts_finite,
    buchi_accepts_lasso,
    compare_acceptance,
)
from .errors import (
    ConditionsUnmet,
    DcrError,
    DocumentError,
    ExecutionError,
    GraphValidationError,
    InvalidRun,
    LassoNotReplayable,
    NotIncluded,
    OrderNotPermutation,
    RepeatedEvent,
    StateBoundExceeded,
    Unauthorized,
    UnknownEvent,
    UnknownPrincipal,
)
from .eventstructures import (
    Cres,
    PrimeEventStructure,
    cres_run_accepting,
    cres_to_dcrg,
    is_configuration,
    pes_run_maximal,
    pes_run_valid,
    pes_to_cres_fair,
    pes_to_cres_plain,
    validate_cres,
    validate_pes,
)
from .io import (
    graph_from_dict,
    graph_to_dict,
    load_graph,
    loads_graph,
    validate_document,
)
from .model import (
    DcrGraph,
    DistributedDcrGraph,
    Finding,
    Marking,
    ValidationReport,
    validate_distributed,
    validate_graph,
)
from .semantics import (
    FiniteRun,
    LassoRun,
    Lts,
    TransitionLabel,
    blocking_conditions,
    enabled_events,
    enabled_for,
    execute,
    execute_as,
    explore_lts,
    finite_run_accepting,
    is_accepting_marking,
    lasso_run_accepting,
    replay,
    replay_as,
)

__version__ = "0.1.0"
