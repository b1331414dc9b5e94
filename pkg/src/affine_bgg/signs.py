"""Sign assignments on cover graphs.

A cover graph is a dict mapping each element to the elements it covers.
Edge bits b give signs (-1)^b; every square forces the four bits to sum to 1
mod 2, so that the two paths around it cancel.  The system is solved by
Gaussian elimination over GF(2) with Python ints as bit rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .bruhat import squares


class InconsistentSigns(RuntimeError):
    def __init__(self, message: str, squares_involved: list):
        super().__init__(message)
        self.squares = squares_involved


def solve_gf2(rows: list[tuple[int, int]]) -> tuple[int | None, int]:
    """Solve sum(bits of mask) = rhs for each (mask, rhs).

    Returns (solution, 0) or (None, combo) where combo is a bitmask of the
    input rows whose sum is the contradiction 0 = 1.
    """
    pivots: dict[int, tuple[int, int, int]] = {}
    for idx, (mask, rhs) in enumerate(rows):
        combo = 1 << idx
        while mask:
            top = mask.bit_length() - 1
            if top not in pivots:
                pivots[top] = (mask, rhs, combo)
                break
            pm, pr, pc = pivots[top]
            mask ^= pm
            rhs ^= pr
            combo ^= pc
        else:
            if rhs:
                return None, combo
    solution = 0
    for top in sorted(pivots):
        mask, rhs, _ = pivots[top]
        rest = mask & ~(1 << top)
        value = rhs ^ (bin(rest & solution).count("1") & 1)
        if value:
            solution |= 1 << top
    return solution, 0


@dataclass
class SignAssignment:
    signs: dict  # (upper, lower) -> +1 / -1
    scope: dict = field(default_factory=dict)

    def __getitem__(self, edge) -> int:
        return self.signs[edge]

    def get(self, upper, lower) -> int:
        return self.signs[(upper, lower)]


def edges_of(down: dict) -> list[tuple]:
    out = [(w, v) for w, below in down.items() for v in below]
    out.sort(key=lambda e: (e[0].sort_key(), e[1].sort_key()))
    return out


def solve_signs(down: dict, scope: dict | None = None) -> SignAssignment:
    edges = edges_of(down)
    index = {e: i for i, e in enumerate(edges)}
    quads = squares(down)
    rows = []
    for w1, w2, w3, w4 in quads:
        mask = (1 << index[(w1, w2)]) ^ (1 << index[(w2, w4)]) ^ (1 << index[(w1, w3)]) ^ (1 << index[(w3, w4)])
        rows.append((mask, 1))
    solution, combo = solve_gf2(rows)
    if solution is None:
        bad = [quads[i] for i in range(len(quads)) if combo >> i & 1]
        raise InconsistentSigns(f"sign equations inconsistent on {len(bad)} squares", bad)
    signs = {e: -1 if solution >> i & 1 else 1 for e, i in index.items()}
    return SignAssignment(signs, dict(scope or {}, edges=len(edges), squares=len(quads)))


def square_failures(down: dict, signs) -> list[tuple]:
    """Squares on which the two paths do not cancel."""
    bad = []
    for w1, w2, w3, w4 in squares(down):
        total = signs[(w1, w2)] * signs[(w2, w4)] + signs[(w1, w3)] * signs[(w3, w4)]
        if total != 0:
            bad.append((w1, w2, w3, w4))
    return bad
