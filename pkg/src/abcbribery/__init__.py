"""Approval-based committee elections: winners and bribery margins."""

from .core import (
    FORBIDDEN,
    ApprovalBallot,
    AtomicAction,
    BriberyInstance,
    BriberySolution,
    Candidate,
    Election,
    ElectionError,
    InfeasibleActionError,
    InvalidActionError,
    Op,
    ParseError,
    PriceTable,
    Rational,
    ResourceGuardError,
    apply_action,
    apply_actions,
    candidate_types,
    make_election,
    parse_election,
    parse_solution,
    serialize_election,
    solution_cost,
)
from .rules import (
    Rule,
    av_scores,
    ccav_coverage,
    gav_committee,
    is_cowinner,
    iter_winning_committees,
    pav_score,
    rav_committee,
    rav_marginals,
    sav_scores,
    type_cowinner_ccav_gav,
    winning_committees,
)

__version__ = "0.1.0"
