"""GBFS under a live-node cap: oldest-first eviction and iterated retracing."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable

from .core import (
    ClosedList,
    Counters,
    Effort,
    ExactClosedList,
    Limits,
    OpenList,
    SearchNode,
    SearchOutcome,
    Status,
)
from .statespace import Heuristic, Plan, StateSpace, checked_h


@dataclass
class UnlimitedOutcome:
    status: str  # SUCCESS, FAILURE or TIME_LIMIT
    terminal: SearchNode | None = None
    stats: Counters = field(default_factory=Counters)

    @property
    def evicted(self) -> int:
        return self.stats.evicted


def live_parent(node: SearchNode) -> SearchNode | None:
    parent = node.parent
    if parent is None or not parent.alive:
        return None
    return parent


def surviving_suffix(node: SearchNode) -> tuple[list[str], SearchNode]:
    """Actions from the earliest surviving ancestor of ``node`` down to it."""
    actions = []
    while (parent := live_parent(node)) is not None:
        actions.append(node.action)
        node = parent
    actions.reverse()
    return actions, node


def gbfs_unlimited(space: StateSpace, goal: Callable[[Any], bool] | None, h: Heuristic,
                   L: int | None, limits: Limits = Limits(), *, start=None,
                   closed: ClosedList | None = None, effort: Effort | None = None,
                   trace: list | None = None, on_expand: Callable[[int], None] | None = None
                   ) -> UnlimitedOutcome:
    """GBFS that evicts the oldest live nodes whenever more than ``L`` are alive.

    The node being expanded and its fresh children are never evicted in the
    same step. Evicted nodes leave OPEN and CLOSED; a parent link to an
    evicted node reads as no parent. ``on_expand`` receives the live count
    after each expansion step.
    """
    if L is not None and L < 1:
        raise ValueError("L must be >= 1")
    start = space.initial if start is None else start
    is_goal = space.is_goal if goal is None else goal
    closed = ExactClosedList() if closed is None else closed
    effort = Effort(limits) if effort is None else effort
    stats = Counters()

    root = SearchNode(start, space.fingerprint(start), checked_h(h, start))
    open_list = OpenList([root])
    closed.add(root.fp)
    fifo = deque([root])  # generation order == seq order
    live = 1
    seq = 1
    stats.peak_live_nodes = 1

    def finish(status, terminal=None):
        stats.wall_time = effort.elapsed()
        stats.closed_bytes = closed.nbytes
        return UnlimitedOutcome(status, terminal, stats)

    while open_list:
        if effort.exhausted():
            return finish("TIME_LIMIT")
        node = open_list.pop()
        if is_goal(node.state):
            return finish("SUCCESS", node)
        if trace is not None:
            trace.append(node.state)
        stats.expanded += 1
        effort.expansions += 1
        first_child = seq
        for label, succ in space.successors(node.state):
            fp = space.fingerprint(succ)
            if fp in closed:
                stats.duplicates_pruned += 1
                continue
            child = SearchNode(succ, fp, checked_h(h, succ), node, label, seq)
            seq += 1
            open_list.push(child)
            closed.add(fp)
            fifo.append(child)
            live += 1
            stats.generated += 1
        if live > stats.peak_live_nodes:
            stats.peak_live_nodes = live
        if L is not None:
            while live > L and open_list:
                oldest = fifo[0]
                if oldest is node or oldest.seq >= first_child:
                    break
                fifo.popleft()
                oldest.alive = False
                oldest.parent = None
                open_list.discard(oldest)
                closed.discard(oldest.fp)
                live -= 1
                stats.evicted += 1
        if on_expand is not None:
            on_expand(live)
    return finish("FAILURE")


def gbfs_retrace(space: StateSpace, h: Heuristic, L: int | None, limits: Limits = Limits(),
                 *, closed_factory: Callable[[], ClosedList] = ExactClosedList,
                 on_expand: Callable[[int], None] | None = None) -> SearchOutcome:
    """Rebuild a full plan from repeated :func:`gbfs_unlimited` runs.

    Each run starts at the initial state; after the first, its goal is the
    earliest surviving ancestor recovered by the previous run. Runs continue
    until that ancestor is the initial state.
    """
    start = space.initial
    effort = Effort(limits)
    total = Counters()
    suffix: list[str] = []
    goal = None
    seen_targets = set()
    iterations = 0

    def finish(status, plan=None, detail=""):
        total.wall_time = effort.elapsed()
        return SearchOutcome(status, plan, total, detail)

    while True:
        iterations += 1
        res = gbfs_unlimited(space, goal, h, L, limits, start=start, closed=closed_factory(),
                             effort=effort, on_expand=on_expand)
        _accumulate(total, res.stats, first=iterations == 1)
        if res.status == "TIME_LIMIT":
            return finish(Status.TIME_LIMIT)
        if res.status == "FAILURE":
            if iterations == 1 and res.stats.evicted == 0:
                return finish(Status.EXHAUSTED)
            return finish(Status.INCOMPLETE, detail=f"iteration {iterations} failed after eviction")
        actions, ancestor = surviving_suffix(res.terminal)
        suffix = actions + suffix
        if ancestor.state == start:
            return finish(Status.SOLVED, Plan(suffix), detail=f"iterations={iterations}")
        if not actions:
            return finish(Status.NO_PROGRESS,
                          detail=f"iteration {iterations} recovered an empty suffix")
        target_fp = ancestor.fp
        if target_fp in seen_targets:
            return finish(Status.NO_PROGRESS, detail="retrace target repeated")
        seen_targets.add(target_fp)
        goal = _equals(ancestor.state)


def _equals(target):
    return lambda s: s == target


def _accumulate(total: Counters, part: Counters, *, first: bool) -> None:
    total.expanded += part.expanded
    total.generated += part.generated
    total.duplicates_pruned += part.duplicates_pruned
    total.evicted += part.evicted
    total.peak_live_nodes = max(total.peak_live_nodes, part.peak_live_nodes)
    total.closed_bytes = max(total.closed_bytes, part.closed_bytes)
    if not first:
        total.reconstruction_expanded += part.expanded
