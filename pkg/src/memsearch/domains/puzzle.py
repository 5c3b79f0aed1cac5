"""k x k sliding-tile puzzle; tile 0 is the blank."""

from __future__ import annotations

import random

from ..statespace import StateSpace, zero_heuristic

MOVES = (("U", -1, 0), ("D", 1, 0), ("L", 0, -1), ("R", 0, 1))


class SlidingPuzzleDomain(StateSpace):
    def __init__(self, k: int, initial):
        self.k = k
        self.initial = tuple(initial)
        self.goal = tuple(range(1, k * k)) + (0,)
        if sorted(self.initial) != list(range(k * k)):
            raise ValueError("initial board must be a permutation of 0..k*k-1")
        if not solvable(self.initial, k):
            raise ValueError("initial board is not solvable")

    def is_goal(self, state) -> bool:
        return state == self.goal

    def successors(self, state):
        k = self.k
        blank = state.index(0)
        r, c = divmod(blank, k)
        out = []
        for label, dr, dc in MOVES:
            nr, nc = r + dr, c + dc
            if 0 <= nr < k and 0 <= nc < k:
                other = nr * k + nc
                board = list(state)
                board[blank], board[other] = board[other], 0
                out.append((label, tuple(board)))
        return out

    def encode(self, state) -> bytes:
        return bytes(state)

    def manhattan(self, state) -> float:
        k = self.k
        total = 0
        for pos, tile in enumerate(state):
            if tile:
                r, c = divmod(pos, k)
                gr, gc = divmod(tile - 1, k)
                total += abs(r - gr) + abs(c - gc)
        return float(total)

    def misplaced(self, state) -> float:
        return float(sum(1 for a, b in zip(state, self.goal) if a and a != b))

    def heuristics(self):
        return {"manhattan": self.manhattan, "misplaced": self.misplaced, "zero": zero_heuristic}


def inversions(board) -> int:
    tiles = [t for t in board if t]
    return sum(1 for i in range(len(tiles)) for j in range(i + 1, len(tiles)) if tiles[i] > tiles[j])


def solvable(board, k: int) -> bool:
    inv = inversions(board)
    if k % 2:
        return inv % 2 == 0
    blank_row_from_bottom = k - board.index(0) // k
    return (inv + blank_row_from_bottom) % 2 == 1


def generate(params: dict, seed: int) -> SlidingPuzzleDomain:
    k = int(params.get("k", 3))
    rng = random.Random(seed)
    scramble = params.get("scramble")
    if scramble is not None:
        space = SlidingPuzzleDomain(k, tuple(range(1, k * k)) + (0,))
        state = space.initial
        for _ in range(int(scramble)):
            state = rng.choice(space.successors(state))[1]
        return SlidingPuzzleDomain(k, state)
    board = list(range(k * k))
    rng.shuffle(board)
    if not solvable(board, k):
        # Swapping two tiles flips the permutation parity.
        a, b = [i for i, t in enumerate(board) if t][:2]
        board[a], board[b] = board[b], board[a]
    return SlidingPuzzleDomain(k, board)
