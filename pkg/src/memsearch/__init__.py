"""Memory-bounded greedy best-first search: GBFS, GBFS-U/R and GONDOR."""

from .bloom import BloomFilter, BloomParams, params_for
from .core import (
    BloomClosedList,
    ClosedList,
    Counters,
    ExactClosedList,
    Limits,
    OpenList,
    SearchNode,
    SearchOutcome,
    Status,
    closed_reset_to,
    gbfs,
    make_closed,
    open_pop,
)
from .gondor import (
    CleanupEvent,
    OutpostPolicy,
    beacons_in_order,
    gondor,
    reconstruct_via_beacons,
    remove_non_outposts,
)
from .statespace import (
    HeuristicError,
    Plan,
    PlanRevisitWarning,
    StateSpace,
    ValidationReport,
    canonical_bytes,
    fingerprint,
    validate_plan,
)
from .variants import UnlimitedOutcome, gbfs_retrace, gbfs_unlimited

__version__ = "0.1.0"
