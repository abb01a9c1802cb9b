"""Worst-case sequential search over Lipschitz quality landscapes."""

from .adversary import AdversarySchedule, bifurcation_index, run_adversarial, schedule_for, worst_case_response
from .core import (
    History,
    Observation,
    QualityIndex,
    SearchWindow,
    canonical_index,
    evaluate,
    is_consistent,
    is_ordered,
    lower_envelope,
    max_feasible_quality,
    search_window,
    upper_envelope,
)
from .errors import (
    BudgetExceeded,
    Infeasible,
    InfeasibleHistory,
    InvalidIndex,
    NonTerminating,
    NotBifurcated,
    NotLToRReachable,
    OutOfRange,
    UndefinedThreshold,
    UnsupportedHistory,
)
from .oracle import DiscreteInstance, GameValue, dynamic_consistency_check, solve, value_of_policy
from .policy import (
    STOP,
    Search,
    Stop,
    act,
    ball_partition,
    left_to_right,
    max_searches,
    search_location,
    stop_threshold,
    value_guarantee,
)
from .scripted import ScriptedPolicy
from .trace import Step, Trace, run_policy, simulate, trace_problems
from .two_period import RiskClass, classify, m_curve, optimal_two_period

__version__ = "0.1.0"
