"""Glauber dynamics for random proper colourings of simple k-uniform hypergraphs."""

from .diagnostics import (
    ConditionReport,
    EpsilonSequence,
    GoodnessReport,
    PersistenceTrace,
    check_conditions,
    epsilon_sequence,
    goodness,
    goodness_trace,
    y_counts,
)
from .exact import (
    BudgetExceeded,
    ComponentReport,
    count_proper,
    enumerate_proper,
    gamma_q_components,
    gamma_q_degree,
    mixing_profile,
    stationarity_check,
    transition_step_exact,
    tv_to_uniform_proper,
)
from .glauber import (
    ChainState,
    CoalescenceResult,
    CoupledPair,
    CoupledStepRecord,
    StepRecord,
    available_colours,
    blocked_colours,
    coalescence_run,
    coupled_step,
    expected_hamming_one_step,
    glauber_step,
    hamming,
    init_chain,
    run,
)
from .hypergraph import (
    BlockedInstance,
    Colouring,
    FailedToGenerate,
    Hypergraph,
    SimplicityReport,
    build_h1,
    generate_blocked_instance,
    generate_random_simple,
    is_proper,
    max_degree,
    validate_simple,
)
from .io import ParseError, RangeError, read_colouring, read_hypergraph, write_colouring, write_hypergraph

__version__ = "0.1.0"
