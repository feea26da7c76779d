"""Plain-text Hasse diagrams.

Nodes are drawn level by level from the top, each with a marker:
round for central elements, square otherwise; filled when idempotent.

    (*)  central, idempotent        ( )  central, not idempotent
    [#]  not central, idempotent    [ ]  neither
"""

from __future__ import annotations

from . import lattice as lat
from .algebra import FiniteResiduatedLattice, is_central_element, is_idempotent_element
from .errors import TooLarge

MAX_RENDER = 64


def marker(alg: FiniteResiduatedLattice, i: int) -> str:
    c, e = is_central_element(alg, i), is_idempotent_element(alg, i)
    return {(True, True): "(*)", (True, False): "( )", (False, True): "[#]", (False, False): "[ ]"}[(c, e)]


def levels(leq) -> list[list[int]]:
    """Elements grouped by the length of the longest chain below them."""
    n = len(leq)
    rank = [0] * n
    for i in sorted(range(n), key=lambda i: sum(leq[j][i] for j in range(n))):
        below = [rank[j] for j in range(n) if j != i and leq[j][i]]
        rank[i] = 1 + max(below) if below else 0
    out: list[list[int]] = [[] for _ in range(max(rank) + 1)]
    for i in range(n):
        out[rank[i]].append(i)
    return out


def render_hasse(alg: FiniteResiduatedLattice, max_size: int = MAX_RENDER) -> str:
    """Deterministic text diagram of ``alg``: one row per level, then its lower covers."""
    if alg.size > max_size:
        raise TooLarge(f"{alg.size} elements; rendering is capped at {max_size}")
    lower = {i: [] for i in range(alg.size)}
    for a, b in lat.covers(alg.leq):
        lower[b].append(a)
    lines = []
    if alg.name:
        lines.append(alg.name)
    for row in reversed(levels(alg.leq)):
        lines.append("  " + "   ".join(f"{marker(alg, i)} {alg.label(i)}" for i in row))
        edges = [f"{alg.label(i)}-{alg.label(j)}" for i in row for j in lower[i]]
        if edges:
            lines.append("     covers " + ", ".join(edges))
    return "\n".join(lines) + "\n"
