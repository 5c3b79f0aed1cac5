"""State spaces, fingerprints, plans and plan validation."""

from __future__ import annotations

import hashlib
import math
import struct
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

State = Hashable
Heuristic = Callable[[Any], float]

# Fixed key so fingerprints are stable across processes and runs.
_FINGERPRINT_KEY = b"memsearch-fp-v1"


class HeuristicError(ValueError):
    """A heuristic returned a negative, infinite or NaN value."""


class PlanRevisitWarning(UserWarning):
    """A validated plan visits the same state more than once."""


def canonical_bytes(value: Any) -> bytes:
    """Type-tagged, order-independent byte encoding of a plain Python value.

    Sets and dicts are encoded with their members sorted by encoding, so two
    equal containers built in different insertion orders encode identically.
    """
    out = bytearray()
    _encode_into(value, out)
    return bytes(out)


def _encode_into(value: Any, out: bytearray) -> None:
    if value is None:
        out += b"N"
    elif isinstance(value, bool):
        out += b"T" if value else b"F"
    elif isinstance(value, int):
        raw = str(value).encode()
        out += b"i" + struct.pack(">I", len(raw)) + raw
    elif isinstance(value, float):
        out += b"d" + struct.pack(">d", value)
    elif isinstance(value, str):
        raw = value.encode("utf-8")
        out += b"s" + struct.pack(">I", len(raw)) + raw
    elif isinstance(value, (bytes, bytearray)):
        out += b"b" + struct.pack(">I", len(value)) + bytes(value)
    elif isinstance(value, (tuple, list)):
        out += b"t" + struct.pack(">I", len(value))
        for item in value:
            _encode_into(item, out)
    elif isinstance(value, (set, frozenset)):
        items = sorted(canonical_bytes(v) for v in value)
        out += b"f" + struct.pack(">I", len(items))
        for raw in items:
            out += raw
    elif isinstance(value, dict):
        items = sorted(canonical_bytes(k) + canonical_bytes(v) for k, v in value.items())
        out += b"m" + struct.pack(">I", len(items))
        for raw in items:
            out += raw
    else:
        raise TypeError(f"no canonical encoding for {type(value).__name__}")


def digest(encoding: bytes) -> int:
    """128-bit fingerprint of an encoding, as a non-negative int."""
    h = hashlib.blake2b(encoding, digest_size=16, key=_FINGERPRINT_KEY)
    return int.from_bytes(h.digest(), "big")


def fingerprint(state: Any, encode: Callable[[Any], bytes] = canonical_bytes) -> int:
    return digest(encode(state))


class StateSpace:
    """Base class for search problems.

    Subclasses provide ``initial``, ``is_goal`` and ``successors``. The
    successor list must be finite and in a deterministic order; labels are
    unique within one state's successor list.
    """

    initial: Any

    def is_goal(self, state) -> bool:
        raise NotImplementedError

    def successors(self, state) -> list[tuple[str, Any]]:
        raise NotImplementedError

    def encode(self, state) -> bytes:
        return canonical_bytes(state)

    def fingerprint(self, state) -> int:
        return digest(self.encode(state))

    def heuristics(self) -> dict[str, Heuristic]:
        return {"zero": zero_heuristic}


def zero_heuristic(state) -> float:
    return 0.0


def checked_h(h: Heuristic, state) -> float:
    value = float(h(state))
    if not (0.0 <= value < math.inf):
        raise HeuristicError(f"heuristic value {value!r} for state {state!r}")
    return value


@dataclass(frozen=True)
class Plan:
    actions: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def __add__(self, other: Plan) -> Plan:
        return Plan(self.actions + other.actions)

    def states(self, space: StateSpace, start=None) -> list:
        """Replay the plan and return the visited states (start included)."""
        report = validate_plan(space, space.initial if start is None else start, self,
                               target=_ANY, warn=False)
        if report.error == "INVALID_ACTION":
            raise ValueError(f"action {report.index} is not applicable")
        return report.path


_ANY = object()


@dataclass
class ValidationReport:
    valid: bool
    path: list = field(default_factory=list)
    distinct: bool = True
    error: str | None = None  # INVALID_ACTION or WRONG_TERMINUS
    index: int | None = None

    def __bool__(self) -> bool:
        return self.valid


def validate_plan(space: StateSpace, start, plan: Plan | Sequence[str], target=None,
                  *, warn: bool = True) -> ValidationReport:
    """Replay ``plan`` from ``start`` and check where it ends.

    Without ``target`` the end state must be a goal of ``space``; with it the
    end state must equal ``target``. Revisited states only raise a
    :class:`PlanRevisitWarning`.
    """
    actions = plan.actions if isinstance(plan, Plan) else tuple(plan)
    path = [start]
    state = start
    for i, label in enumerate(actions):
        for name, succ in space.successors(state):
            if name == label:
                state = succ
                break
        else:
            return ValidationReport(False, path, _distinct(path), "INVALID_ACTION", i)
        path.append(state)

    distinct = _distinct(path)
    if target is _ANY:
        ok = True
    elif target is None:
        ok = space.is_goal(state)
    else:
        ok = state == target
    if not ok:
        return ValidationReport(False, path, distinct, "WRONG_TERMINUS", len(actions))
    if warn and not distinct:
        warnings.warn("plan revisits a state", PlanRevisitWarning, stacklevel=2)
    return ValidationReport(True, path, distinct)


def _distinct(path: Iterable) -> bool:
    seen = set()
    for s in path:
        if s in seen:
            return False
        seen.add(s)
    return True
