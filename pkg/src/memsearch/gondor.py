"""GBFS with outpost retention, memory cleanup and beacon-based reconstruction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

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
    gbfs,
)
from .statespace import Heuristic, Plan, StateSpace, checked_h, zero_heuristic

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def uniform(seed: int, counter: int) -> float:
    """Counter-based uniform draw in [0, 1) for ``(seed, counter)``."""
    return (splitmix64(splitmix64(seed & _MASK64) ^ counter) >> 11) / float(1 << 53)


@dataclass(frozen=True)
class OutpostPolicy:
    """Decides at generation time whether a node becomes an outpost.

    ``kind`` is one of ``bernoulli``, ``always``, ``never`` or ``custom``.
    Bernoulli draws are keyed on the node's sequence number, so equal seeds
    and equal generation orders give equal outpost sets.
    """

    kind: str = "bernoulli"
    p: float = 0.01
    seed: int = 0
    predicate: Callable[[SearchNode], bool] | None = None

    def __post_init__(self):
        if self.kind not in ("bernoulli", "always", "never", "custom"):
            raise ValueError(f"unknown outpost policy {self.kind!r}")
        if self.kind == "bernoulli" and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.kind == "custom" and self.predicate is None:
            raise ValueError("custom policy needs a predicate")

    @classmethod
    def bernoulli(cls, p: float, seed: int = 0) -> OutpostPolicy:
        return cls("bernoulli", p, seed)

    @classmethod
    def never(cls) -> OutpostPolicy:
        return cls("never", 0.0)

    @classmethod
    def always(cls) -> OutpostPolicy:
        return cls("always", 1.0)

    def __call__(self, node: SearchNode) -> bool:
        if self.kind == "bernoulli":
            return self.p > 0.0 and uniform(self.seed, node.seq) < self.p
        if self.kind == "always":
            return True
        if self.kind == "never":
            return False
        return bool(self.predicate(node))

    def derive(self, index: int) -> OutpostPolicy:
        """Policy for the ``index``-th sub-search, with an independent stream."""
        if self.kind != "bernoulli":
            return self
        return OutpostPolicy(self.kind, self.p, splitmix64(self.seed ^ (index * 0x9E37)), None)


@dataclass
class CleanupEvent:
    trigger_seq: int
    survivors: int
    dropped: int
    generated_in_phase: int
    live_after: int


def remove_non_outposts(arena: Iterable[SearchNode], closed: ClosedList,
                        trigger_seq: int = 0) -> tuple[OpenList, list[SearchNode], CleanupEvent]:
    """Keep only the outposts of ``arena``.

    Survivors lose their ordinary parent link but keep ``parent_outpost``;
    all of them go back on OPEN, expanded or not. CLOSED is rebuilt from the
    surviving states. Returns the new OPEN, the surviving arena and the event.
    """
    survivors = []
    dropped = 0
    for node in arena:
        if node.is_outpost:
            node.parent = None
            node.action = None
            survivors.append(node)
        else:
            node.alive = False
            node.in_open = False
            dropped += 1
    open_list = OpenList(survivors)
    closed.reset_to(n.fp for n in survivors)
    event = CleanupEvent(trigger_seq, len(survivors), dropped, 0, len(survivors))
    return open_list, survivors, event


def outpost_chain(node: SearchNode) -> list[SearchNode]:
    chain = []
    while node is not None:
        chain.append(node)
        node = node.parent_outpost
    return chain


def beacons_in_order(path: Sequence, beacons: Sequence) -> bool:
    """True when every beacon occurs in ``path`` at strictly increasing indices."""
    i = 0
    for state in path:
        if i < len(beacons) and state == beacons[i]:
            i += 1
    return i == len(beacons)


@dataclass
class _Config:
    policy: OutpostPolicy
    closed: ClosedList
    L: int | None
    limits: Limits
    reconstruct: str
    segment_heuristic: str
    effort: Effort
    depth: int = 0


def gondor(space: StateSpace, h: Heuristic, policy: OutpostPolicy | None = None,
           closed: ClosedList | None = None, L: int | None = None, limits: Limits = Limits(),
           *, start=None, goal: Callable[[Any], bool] | None = None,
           reconstruct: str = "gondor", segment_heuristic: str = "goal",
           trace: list | None = None, effort: Effort | None = None,
           goal_test: str = "pop", _depth: int = 0) -> SearchOutcome:
    """Memory-bounded GBFS that keeps outposts across cleanups.

    Before expanding a node, if generating its new children would push the
    live-node count above ``L``, all non-outposts are dropped and the search
    resumes from the outposts. At least one expansion runs between two
    cleanups. Once the outposts alone fill ``L`` the run is flagged
    ``saturated`` and continues without further cleanups. On reaching a goal
    the plan is rebuilt segment by segment between beacons.

    ``reconstruct`` selects the segment solver (``gondor`` or ``plain``
    GBFS); ``segment_heuristic`` is ``goal`` (reuse ``h``) or ``zero``.
    Segment searches test for their target beacon at generation time;
    ``goal_test`` sets this for the top-level search (default ``pop``).
    """
    if goal_test not in ("pop", "generate"):
        raise ValueError(f"unknown goal test {goal_test!r}")
    at_generation = goal_test == "generate"
    if L is not None and L < 2:
        raise ValueError("L must be >= 2")
    if reconstruct not in ("gondor", "plain"):
        raise ValueError(f"unknown reconstruct mode {reconstruct!r}")
    if segment_heuristic not in ("goal", "zero"):
        raise ValueError(f"unknown segment heuristic {segment_heuristic!r}")
    policy = OutpostPolicy.bernoulli(0.01) if policy is None else policy
    closed = ExactClosedList() if closed is None else closed
    effort = Effort(limits) if effort is None else effort
    cfg = _Config(policy, closed, L, limits, reconstruct, segment_heuristic, effort, _depth)
    start = space.initial if start is None else start
    is_goal = space.is_goal if goal is None else goal
    stats = Counters()
    events: list[CleanupEvent] = []
    saturated = False

    root = SearchNode(start, space.fingerprint(start), checked_h(h, start),
                      is_outpost=True)
    open_list = OpenList([root])
    closed.reset_to([root.fp])
    arena = [root]
    seq = 1
    phase_generated = 0
    stats.peak_live_nodes = 1

    def finish(status, plan=None, detail="", beacons=()):
        stats.wall_time = effort.elapsed()
        stats.closed_bytes = max(stats.closed_bytes, closed.nbytes)
        return SearchOutcome(status, plan, stats, detail, list(beacons), events, saturated)

    while open_list:
        if effort.exhausted():
            return finish(Status.TIME_LIMIT)
        node = open_list.pop()
        if is_goal(node.state):
            return _finish_with_plan(node, space, h, cfg, stats, finish)

        fresh = []
        pending = set()
        for label, succ in space.successors(node.state):
            fp = space.fingerprint(succ)
            if fp in closed or fp in pending:
                stats.duplicates_pruned += 1
                continue
            pending.add(fp)
            fresh.append((label, succ, fp))

        if (L is not None and not saturated and phase_generated > 0
                and len(arena) + len(fresh) > L):
            open_list, arena, event = remove_non_outposts(arena, closed, seq)
            event.generated_in_phase = phase_generated
            events.append(event)
            stats.cleanups += 1
            phase_generated = 0
            if len(arena) >= L:
                saturated = True
            if policy.kind == "never":
                # only the root survives; the next phase would replay this one
                return finish(Status.NO_PROGRESS, detail="cleanup without outposts")
            # The popped node is either back on OPEN (outpost) or dropped.
            continue

        if trace is not None:
            trace.append(node.state)
        stats.expanded += 1
        effort.expansions += 1
        po = node if node.is_outpost else node.parent_outpost
        for label, succ, fp in fresh:
            if fp in closed:  # only reachable after a Bloom false positive on a sibling
                stats.duplicates_pruned += 1
                continue
            child = SearchNode(succ, fp, checked_h(h, succ), node, label, seq,
                               parent_outpost=po)
            seq += 1
            if policy(child):
                child.is_outpost = True
                stats.outposts_created += 1
            open_list.push(child)
            closed.add(fp)
            arena.append(child)
            stats.generated += 1
            phase_generated += 1
            if at_generation and is_goal(succ):
                stats.peak_live_nodes = max(stats.peak_live_nodes, len(arena))
                return _finish_with_plan(child, space, h, cfg, stats, finish)
        if len(arena) > stats.peak_live_nodes:
            stats.peak_live_nodes = len(arena)
    return finish(Status.EXHAUSTED)


def _finish_with_plan(node, space, h, cfg, stats, finish):
    try:
        plan, beacons = reconstruct_via_beacons(
            node, space, h, cfg.L, cfg.limits, policy=cfg.policy, closed=cfg.closed,
            reconstruct=cfg.reconstruct, segment_heuristic=cfg.segment_heuristic,
            effort=cfg.effort, stats=stats, _depth=cfg.depth)
    except SegmentFailure as exc:
        return finish(exc.status, detail=str(exc))
    return finish(Status.SOLVED, plan, beacons=beacons)


class SegmentFailure(RuntimeError):
    def __init__(self, index: int, status: Status):
        super().__init__(f"segment {index} ended with {status}")
        self.index = index
        self.status = Status.TIME_LIMIT if status is Status.TIME_LIMIT else Status.SEGMENT_FAILURE


def reconstruct_via_beacons(goal_node: SearchNode, space: StateSpace, h: Heuristic,
                            L: int | None, limits: Limits = Limits(), *,
                            policy: OutpostPolicy | None = None,
                            closed: ClosedList | None = None, reconstruct: str = "gondor",
                            segment_heuristic: str = "goal", effort: Effort | None = None,
                            stats: Counters | None = None, _depth: int = 0
                            ) -> tuple[Plan, list]:
    """Rebuild the full plan ending at ``goal_node``.

    Returns the plan and the beacons in initial-state-first order. Raises
    :class:`SegmentFailure` if a segment search does not reach its beacon.
    """
    policy = OutpostPolicy.bernoulli(0.01) if policy is None else policy
    closed = ExactClosedList() if closed is None else closed
    effort = Effort(limits) if effort is None else effort
    stats = Counters() if stats is None else stats

    suffix = []
    node = goal_node
    while node.parent is not None:
        suffix.append(node.action)
        node = node.parent
    suffix.reverse()
    # Collected goal side first; segment i runs from beacons[i + 1] to beacons[i].
    beacons = [n.state for n in outpost_chain(node)]

    seg_h = h if segment_heuristic == "goal" else zero_heuristic
    actions = suffix
    for i in range(len(beacons) - 1):
        target = beacons[i]
        seg_goal = _equals(target)
        if reconstruct == "plain":
            res = gbfs(space, seg_h, closed.fresh(), Limits(), start=beacons[i + 1],
                       goal=seg_goal, effort=effort, goal_test="generate")
        else:
            res = gondor(space, seg_h, policy.derive(_depth * 1_000_003 + i + 1),
                         closed.fresh(), L, limits, start=beacons[i + 1], goal=seg_goal,
                         reconstruct=reconstruct, segment_heuristic=segment_heuristic,
                         effort=effort, goal_test="generate", _depth=_depth + 1)
        stats.reconstruction_expanded += res.stats.expanded + res.stats.reconstruction_expanded
        stats.closed_bytes = max(stats.closed_bytes, res.stats.closed_bytes)
        if not res.solved:
            raise SegmentFailure(i, res.status)
        actions = list(res.plan.actions) + actions
    beacons.reverse()
    return Plan(actions), beacons


def _equals(target):
    return lambda s: s == target
