"""Shared search machinery and plain greedy best-first search."""

from __future__ import annotations

import enum
import heapq
import time
from dataclasses import dataclass, field, fields
from typing import Any, Callable, Iterable

from .bloom import BloomFilter, params_for
from .statespace import Heuristic, Plan, StateSpace, checked_h


class Status(str, enum.Enum):
    SOLVED = "SOLVED"
    EXHAUSTED = "EXHAUSTED"
    NODE_BUDGET = "NODE_BUDGET"
    TIME_LIMIT = "TIME_LIMIT"
    # OPEN emptied after evictions; solvability is unknown.
    INCOMPLETE = "INCOMPLETE"
    # Solution existence verified but the plan was lost to eviction.
    VERIFIED = "VERIFIED"
    SEGMENT_FAILURE = "SEGMENT_FAILURE"
    NO_PROGRESS = "NO_PROGRESS"
    ERROR = "ERROR"

    def __str__(self) -> str:
        return self.value


class SearchError(RuntimeError):
    pass


@dataclass(slots=True, eq=False)
class SearchNode:
    state: Any
    fp: int
    h: float
    parent: SearchNode | None = None
    action: str | None = None
    seq: int = 0
    is_outpost: bool = False
    parent_outpost: SearchNode | None = None
    alive: bool = True
    in_open: bool = False

    def __repr__(self) -> str:
        return f"SearchNode(seq={self.seq}, h={self.h}, state={self.state!r})"


class OpenList:
    """Min-heap on ``(h, seq)``; FIFO among equal heuristic values.

    Removal is lazy: :meth:`discard` flags the node and :meth:`pop` skips it.
    """

    def __init__(self, nodes: Iterable[SearchNode] = ()):
        self._heap: list[tuple[float, int, SearchNode]] = []
        self._size = 0
        for node in nodes:
            self.push(node)

    def push(self, node: SearchNode) -> None:
        node.in_open = True
        heapq.heappush(self._heap, (node.h, node.seq, node))
        self._size += 1

    def pop(self) -> SearchNode:
        heap = self._heap
        while heap:
            node = heapq.heappop(heap)[2]
            if node.in_open:
                node.in_open = False
                self._size -= 1
                return node
        raise IndexError("pop from empty open list")

    def discard(self, node: SearchNode) -> None:
        if node.in_open:
            node.in_open = False
            self._size -= 1

    def __contains__(self, node: SearchNode) -> bool:
        return node.in_open

    def __len__(self) -> int:
        return self._size

    def __bool__(self) -> bool:
        return self._size > 0

    def nodes(self) -> list[SearchNode]:
        return sorted((e[2] for e in self._heap if e[2].in_open), key=lambda n: (n.h, n.seq))


def open_pop(open_list: OpenList) -> SearchNode:
    return open_list.pop()


class ClosedList:
    """Duplicate detection over state fingerprints."""

    mode = "abstract"

    def add(self, key: int) -> None:
        raise NotImplementedError

    def __contains__(self, key: int) -> bool:
        raise NotImplementedError

    def discard(self, key: int) -> None:
        raise NotImplementedError

    def reset_to(self, keys: Iterable[int]) -> None:
        raise NotImplementedError

    def fresh(self) -> ClosedList:
        raise NotImplementedError

    @property
    def nbytes(self) -> int:
        return 0


class ExactClosedList(ClosedList):
    mode = "exact"

    def __init__(self, keys: Iterable[int] = ()):
        self._keys = set(keys)

    def add(self, key: int) -> None:
        self._keys.add(key)

    def __contains__(self, key: int) -> bool:
        return key in self._keys

    def discard(self, key: int) -> None:
        self._keys.discard(key)

    def reset_to(self, keys: Iterable[int]) -> None:
        self._keys = set(keys)

    def fresh(self) -> ExactClosedList:
        return ExactClosedList()

    def __len__(self) -> int:
        return len(self._keys)

    @property
    def nbytes(self) -> int:
        return 16 * len(self._keys)


class BloomClosedList(ClosedList):
    """Bloom-filter backend. ``discard`` is a no-op: bits cannot be unset."""

    mode = "bloom"

    def __init__(self, capacity: int = 10**6, fpr: float = 1e-6):
        self.capacity = capacity
        self.fpr = fpr
        self.params = params_for(capacity, fpr)
        self.filter = BloomFilter.from_params(self.params)

    def add(self, key: int) -> None:
        self.filter.insert(key)

    def __contains__(self, key: int) -> bool:
        return self.filter.contains(key)

    def discard(self, key: int) -> None:
        pass

    def reset_to(self, keys: Iterable[int]) -> None:
        self.filter = BloomFilter.from_params(self.params)
        for key in keys:
            self.filter.insert(key)

    def fresh(self) -> BloomClosedList:
        return BloomClosedList(self.capacity, self.fpr)

    @property
    def nbytes(self) -> int:
        return self.filter.nbytes


def make_closed(mode: str = "exact", capacity: int = 10**6, fpr: float = 1e-6) -> ClosedList:
    if mode == "exact":
        return ExactClosedList()
    if mode == "bloom":
        return BloomClosedList(capacity, fpr)
    raise ValueError(f"unknown closed-list mode {mode!r}")


def closed_reset_to(closed: ClosedList, states: Iterable, space: StateSpace) -> None:
    closed.reset_to(space.fingerprint(s) for s in states)


@dataclass(frozen=True)
class Limits:
    """Per-run budgets. ``None`` means unbounded.

    ``node_budget`` caps live nodes for plain GBFS. ``max_expansions`` is a
    deterministic effort cap reported as TIME_LIMIT, like ``time_limit``.
    """

    node_budget: int | None = None
    time_limit: float | None = None
    max_expansions: int | None = None


class Effort:
    """Clock and expansion counter shared by a run and its sub-searches."""

    def __init__(self, limits: Limits):
        self.start = time.perf_counter()
        self.deadline = None if limits.time_limit is None else self.start + limits.time_limit
        self.max_expansions = limits.max_expansions
        self.expansions = 0

    def exhausted(self) -> bool:
        if self.max_expansions is not None and self.expansions >= self.max_expansions:
            return True
        return self.deadline is not None and time.perf_counter() >= self.deadline

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


@dataclass
class Counters:
    expanded: int = 0
    generated: int = 0
    duplicates_pruned: int = 0
    cleanups: int = 0
    outposts_created: int = 0
    reconstruction_expanded: int = 0
    peak_live_nodes: int = 0
    evicted: int = 0
    closed_bytes: int = 0
    wall_time: float = 0.0

    def as_dict(self, *, with_time: bool = True) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        if not with_time:
            d.pop("wall_time")
        return d


@dataclass
class SearchOutcome:
    status: Status
    plan: Plan | None = None
    stats: Counters = field(default_factory=Counters)
    detail: str = ""
    # GONDOR extras; empty for the other solvers.
    beacons: list = field(default_factory=list)
    cleanup_events: list = field(default_factory=list)
    saturated: bool = False

    @property
    def solved(self) -> bool:
        return self.status is Status.SOLVED


def extract_plan(node: SearchNode) -> tuple[list[str], SearchNode]:
    """Walk parent links from ``node``; return (actions in order, chain root)."""
    actions = []
    while node.parent is not None:
        actions.append(node.action)
        node = node.parent
    actions.reverse()
    return actions, node


def gbfs(space: StateSpace, h: Heuristic, closed: ClosedList | None = None,
         limits: Limits = Limits(), *, start=None, goal: Callable[[Any], bool] | None = None,
         trace: list | None = None, effort: Effort | None = None,
         goal_test: str = "pop") -> SearchOutcome:
    """Greedy best-first search with generation-time duplicate detection.

    The goal test happens when a node is popped, or as soon as it is
    generated with ``goal_test="generate"``. ``trace``, when given,
    receives every expanded state in order.
    """
    if goal_test not in ("pop", "generate"):
        raise ValueError(f"unknown goal test {goal_test!r}")
    at_generation = goal_test == "generate"
    start = space.initial if start is None else start
    is_goal = space.is_goal if goal is None else goal
    closed = ExactClosedList() if closed is None else closed
    effort = Effort(limits) if effort is None else effort
    budget = limits.node_budget
    stats = Counters()

    root = SearchNode(start, space.fingerprint(start), checked_h(h, start))
    open_list = OpenList([root])
    closed.add(root.fp)
    live = 1
    seq = 1
    stats.peak_live_nodes = 1

    def finish(status, plan=None, detail=""):
        stats.wall_time = effort.elapsed()
        stats.closed_bytes = closed.nbytes
        return SearchOutcome(status, plan, stats, detail)

    while open_list:
        if effort.exhausted():
            return finish(Status.TIME_LIMIT)
        node = open_list.pop()
        if is_goal(node.state):
            actions, _ = extract_plan(node)
            return finish(Status.SOLVED, Plan(actions))
        if trace is not None:
            trace.append(node.state)
        stats.expanded += 1
        effort.expansions += 1
        for label, succ in space.successors(node.state):
            fp = space.fingerprint(succ)
            if fp in closed:
                stats.duplicates_pruned += 1
                continue
            if budget is not None and live >= budget:
                return finish(Status.NODE_BUDGET)
            child = SearchNode(succ, fp, checked_h(h, succ), node, label, seq)
            seq += 1
            open_list.push(child)
            closed.add(fp)
            live += 1
            stats.generated += 1
            if at_generation and is_goal(succ):
                stats.peak_live_nodes = max(stats.peak_live_nodes, live)
                actions, _ = extract_plan(child)
                return finish(Status.SOLVED, Plan(actions))
        if live > stats.peak_live_nodes:
            stats.peak_live_nodes = live
    return finish(Status.EXHAUSTED)
