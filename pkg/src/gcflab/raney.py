"""Raney transducers over balanced nonnegative integer matrices.

A configuration is a nonnegative nonsingular :class:`Mat2`. Emission peels
``L = [[1,0],[1,1]]`` or ``R = [[1,1],[0,1]]`` off the left for as long as the
quotient stays nonnegative, so ``config == lr_product(output) @ residual``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .exact import Mat2, lr_product

DOUBLY = "doubly"
COLUMN_ONLY = "column-only"
ROW_ONLY = "row-only"
NONE = "none"


class HorizonExceeded(RuntimeError):
    pass


def balanced_class(m: Mat2) -> str:
    """Column balanced: ``(a-b)(c-d) < 0``; row balanced: ``(a-c)(b-d) < 0``."""
    if not m.is_nonnegative():
        raise ValueError("balance is defined for nonnegative matrices")
    column = (m.a - m.b) * (m.c - m.d) < 0
    row = (m.a - m.c) * (m.b - m.d) < 0
    if column and row:
        return DOUBLY
    if column:
        return COLUMN_ONLY
    if row:
        return ROW_ONLY
    return NONE


def enumerate_states(det: int) -> list[Mat2]:
    """All doubly balanced nonnegative matrices of determinant ``det``, sorted by entries."""
    if det < 2:
        raise ValueError("determinant must be >= 2")
    rng = range(det + 1)
    found = []
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    m = Mat2(a, b, c, d)
                    if m.det == det and balanced_class(m) == DOUBLY:
                        found.append(m)
    return sorted(found, key=Mat2.entries)


def _check_config(m: Mat2) -> None:
    if not m.is_nonnegative():
        raise ValueError(f"configuration {m} has a negative entry")
    if m.det == 0:
        raise ValueError(f"configuration {m} is singular")


def _max_strip(top_a: int, top_b: int, bot_c: int, bot_d: int) -> int:
    # largest k with bot - k*top >= 0 entrywise; top row is never all zero
    k = None
    if top_a:
        k = bot_c // top_a
    if top_b:
        kb = bot_d // top_b
        k = kb if k is None else min(k, kb)
    return k


def emit(m: Mat2) -> tuple[str, Mat2]:
    """Greedy left factorization ``m = lr_product(output) @ residual``."""
    _check_config(m)
    out = []
    a, b, c, d = m.entries()
    while True:
        can_l = c >= a and d >= b
        can_r = a >= c and b >= d
        if can_l and can_r:
            raise AssertionError("both L and R divide a nonsingular matrix")
        if can_l:
            k = _max_strip(a, b, c, d)
            c, d = c - k * a, d - k * b
            out.append("L" * k)
        elif can_r:
            k = _max_strip(c, d, a, b)
            a, b = a - k * c, b - k * d
            out.append("R" * k)
        else:
            return "".join(out), Mat2(a, b, c, d)


def feed(m: Mat2, x: str) -> tuple[str, Mat2]:
    if x not in ("L", "R"):
        raise ValueError(f"input letter {x!r} is not L or R")
    return emit(m @ lr_product(x))


def run(start: Mat2, word: str) -> tuple[str, Mat2]:
    """Feed ``word`` letter by letter; ``start @ word == output @ final``."""
    _check_config(start)
    out = []
    m = start
    for x in word:
        o, m = feed(m, x)
        out.append(o)
    return "".join(out), m


def run_trace(start: Mat2, word: str) -> list[tuple[str, str, Mat2]]:
    """``(letter, emitted, configuration)`` after each input letter."""
    _check_config(start)
    trace = []
    m = start
    for x in word:
        o, m = feed(m, x)
        trace.append((x, o, m))
    return trace


class Edge(NamedTuple):
    src: Mat2
    inp: str
    out: str
    dst: Mat2


@dataclass(frozen=True)
class TransducerTable:
    det: int
    states: tuple
    edges: tuple

    def to_json(self) -> str:
        return json.dumps(
            {
                "det": self.det,
                "states": [str(s) for s in self.states],
                "edges": [
                    {"from": str(e.src), "in": e.inp, "out": e.out, "to": str(e.dst)} for e in self.edges
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TransducerTable":
        data = json.loads(text)
        edges = tuple(
            Edge(Mat2.parse(e["from"]), e["in"], e["out"], Mat2.parse(e["to"])) for e in data["edges"]
        )
        return cls(data["det"], tuple(Mat2.parse(s) for s in data["states"]), edges)

    def to_dot(self) -> str:
        lines = [f'"{e.src}" -> "{e.dst}" [label="{e.inp}/{e.out}"]' for e in self.edges]
        return "\n".join(lines) + "\n"


def derive_table(det: int, max_input: int) -> TransducerTable:
    """Breadth-first derivation of the transducer on determinant-``det`` states.

    From each state, input words are tried in length-lexicographic order
    (``L < R``); a word becomes an edge as soon as its run lands back on a
    state, and is not extended further.
    """
    if max_input < 1:
        raise ValueError("max_input must be >= 1")
    states = enumerate_states(det)
    state_set = set(states)
    edges = []
    for src in states:
        frontier = deque([("", "", src)])
        while frontier:
            word, out, config = frontier.popleft()
            for x in "LR":
                emitted, nxt = feed(config, x)
                if nxt in state_set:
                    edges.append(Edge(src, word + x, out + emitted, nxt))
                elif len(word) + 1 >= max_input:
                    raise HorizonExceeded(
                        f"input {word + x!r} from state {src} has not closed within {max_input} letters"
                    )
                else:
                    frontier.append((word + x, out + emitted, nxt))
    edges.sort(key=lambda e: (e.src.entries(), len(e.inp), e.inp))
    return TransducerTable(det, tuple(states), tuple(edges))
