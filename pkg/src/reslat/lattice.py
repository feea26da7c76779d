"""Finite orders and lattices on the carrier ``0..n-1``.

Orders are stored as ``leq[i][j]`` boolean matrices; bitmask views
(``up[i]`` = elements above ``i``) are used by the search code.
"""

from __future__ import annotations

from itertools import product as iproduct
from typing import Iterator, Sequence

from .errors import NotALattice

Matrix = tuple[tuple[bool, ...], ...]
Table = tuple[tuple[int, ...], ...]


def transitive_closure(size: int, pairs) -> Matrix:
    """Reflexive-transitive closure of a set of ``(lower, upper)`` pairs."""
    up = [1 << i for i in range(size)]
    for a, b in pairs:
        up[a] |= 1 << b
    changed = True
    while changed:
        changed = False
        for i in range(size):
            m = up[i]
            acc = m
            for j in range(size):
                if m >> j & 1:
                    acc |= up[j]
            if acc != m:
                up[i] = acc
                changed = True
    return tuple(tuple(bool(up[i] >> j & 1) for j in range(size)) for i in range(size))


def order_violations(leq: Sequence[Sequence[bool]]) -> list[tuple[str, tuple[int, ...]]]:
    """First witness for each failed partial-order axiom."""
    n = len(leq)
    out = []
    for i in range(n):
        if not leq[i][i]:
            out.append(("reflexive", (i,)))
            break
    found = False
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i][j] and leq[j][i]:
                out.append(("antisymmetric", (i, j)))
                found = True
                break
        if found:
            break
    found = False
    for i in range(n):
        for j in range(n):
            if not leq[i][j]:
                continue
            for k in range(n):
                if leq[j][k] and not leq[i][k]:
                    out.append(("transitive", (i, j, k)))
                    found = True
                    break
            if found:
                break
        if found:
            break
    return out


def up_masks(leq) -> list[int]:
    n = len(leq)
    return [sum(1 << j for j in range(n) if leq[i][j]) for i in range(n)]


def down_masks(leq) -> list[int]:
    n = len(leq)
    return [sum(1 << j for j in range(n) if leq[j][i]) for i in range(n)]


def _bounds_table(size, masks):
    # masks[i]: elements on the "far" side of i; picks the least common bound
    table = []
    for i in range(size):
        row = []
        for j in range(size):
            common = masks[i] & masks[j]
            best = -1
            for k in range(size):
                if common >> k & 1 and (masks[k] & common) == common:
                    best = k
                    break
            row.append(best)
        table.append(tuple(row))
    return tuple(table)


def join_meet_partial(leq) -> tuple[Table, Table]:
    """Join and meet tables with ``-1`` where the bound does not exist."""
    n = len(leq)
    return _bounds_table(n, up_masks(leq)), _bounds_table(n, down_masks(leq))


def lattice_tables(leq) -> tuple[Table, Table]:
    """Join and meet tables of a lattice order; raises NotALattice."""
    join, meet = join_meet_partial(leq)
    n = len(leq)
    for i in range(n):
        for j in range(n):
            if join[i][j] < 0:
                raise NotALattice(f"elements {i} and {j} have no least upper bound")
            if meet[i][j] < 0:
                raise NotALattice(f"elements {i} and {j} have no greatest lower bound")
    return join, meet


def bottom_of(leq) -> int | None:
    n = len(leq)
    for i in range(n):
        if all(leq[i][j] for j in range(n)):
            return i
    return None


def top_of(leq) -> int | None:
    n = len(leq)
    for i in range(n):
        if all(leq[j][i] for j in range(n)):
            return i
    return None


def covers(leq) -> list[tuple[int, int]]:
    """Cover pairs ``(lower, upper)`` in lexicographic order."""
    n = len(leq)
    out = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if not any(k != i and k != j and leq[i][k] and leq[k][j] for k in range(n)):
                out.append((i, j))
    return out


def is_distributive(join: Table, meet: Table) -> bool:
    n = len(join)
    for a in range(n):
        ma = meet[a]
        for b in range(n):
            jb = join[b]
            mab = ma[b]
            for c in range(n):
                if ma[jb[c]] != join[mab][ma[c]]:
                    return False
    return True


def relative_complements(join: Table, meet: Table, x: int, lo: int, hi: int) -> list[int]:
    """All ``y`` with ``x v y = hi`` and ``x ^ y = lo``."""
    return [y for y in range(len(join)) if join[x][y] == hi and meet[x][y] == lo]


def automorphisms(leq, fixed: Sequence[int] = ()) -> list[tuple[int, ...]]:
    """Order automorphisms (fixing each index in ``fixed``), lexicographic order."""
    n = len(leq)
    up = up_masks(leq)
    down = down_masks(leq)
    prof = [(bin(up[i]).count("1"), bin(down[i]).count("1")) for i in range(n)]
    perm = [-1] * n
    used = [False] * n
    out = []

    def rec(i):
        if i == n:
            out.append(tuple(perm))
            return
        cands = [i] if i in fixed else range(n)
        for v in cands:
            if used[v] or prof[v] != prof[i]:
                continue
            if i not in fixed and v in fixed:
                continue
            ok = True
            for k in range(i):
                w = perm[k]
                if leq[k][i] != leq[w][v] or leq[i][k] != leq[v][w]:
                    ok = False
                    break
            if ok:
                perm[i] = v
                used[v] = True
                rec(i + 1)
                used[v] = False
                perm[i] = -1

    rec(0)
    return out


def _lattices_labeled_natural(n: int) -> Iterator[Matrix]:
    """Naturally labeled bounded lattices: 0 is bottom, n-1 is top, i<=j implies i<=j as ints."""
    if n == 1:
        yield ((True,),)
        return
    # downs[k] = strict down-set bitmask of element k
    downs = [0] * n

    def ideals(k):
        # every down-closed subset of 0..k-1 containing 0
        res = []
        for mask in range(1 << k):
            if not mask & 1:
                continue
            ok = True
            for j in range(k):
                if mask >> j & 1 and (downs[j] & ~mask):
                    ok = False
                    break
            if ok:
                res.append(mask)
        return res

    def rec(k):
        if k == n - 1:
            downs[k] = (1 << k) - 1
            leq = tuple(
                tuple(i == j or bool(downs[j] >> i & 1) for j in range(n)) for i in range(n)
            )
            join, _ = join_meet_partial(leq)
            if all(join[i][j] >= 0 for i in range(n) for j in range(n)):
                yield leq
            return
        for mask in ideals(k) if k > 0 else [0]:
            downs[k] = mask
            yield from rec(k + 1)
        downs[k] = 0

    yield from rec(0)


def lattice_invariant(leq) -> tuple:
    up = up_masks(leq)
    down = down_masks(leq)
    return tuple(sorted((bin(up[i]).count("1"), bin(down[i]).count("1")) for i in range(len(leq))))


def are_isomorphic_orders(p, q) -> bool:
    n = len(p)
    if n != len(q) or lattice_invariant(p) != lattice_invariant(q):
        return False
    up_p, dn_p = up_masks(p), down_masks(p)
    up_q, dn_q = up_masks(q), down_masks(q)
    prof_p = [(bin(up_p[i]).count("1"), bin(dn_p[i]).count("1")) for i in range(n)]
    prof_q = [(bin(up_q[i]).count("1"), bin(dn_q[i]).count("1")) for i in range(n)]
    perm = [-1] * n
    used = [False] * n

    def rec(i):
        if i == n:
            return True
        for v in range(n):
            if used[v] or prof_q[v] != prof_p[i]:
                continue
            if all(p[k][i] == q[perm[k]][v] and p[i][k] == q[v][perm[k]] for k in range(i)):
                perm[i] = v
                used[v] = True
                if rec(i + 1):
                    return True
                used[v] = False
        return False

    return rec(0)


def enumerate_lattices(n: int) -> list[Matrix]:
    """One representative per isomorphism class of ``n``-element lattices.

    Representatives are naturally labeled (bottom 0, top n-1); the list is in
    generation order, which is deterministic.
    """
    reps: list[Matrix] = []
    buckets: dict[tuple, list[Matrix]] = {}
    for leq in _lattices_labeled_natural(n):
        inv = lattice_invariant(leq)
        bucket = buckets.setdefault(inv, [])
        if any(are_isomorphic_orders(leq, other) for other in bucket):
            continue
        bucket.append(leq)
        reps.append(leq)
    return reps


def all_relations(n: int) -> Iterator[Matrix]:
    """Every reflexive relation on ``n`` points (brute force, for oracles)."""
    offdiag = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in iproduct((False, True), repeat=len(offdiag)):
        m = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(offdiag, bits):
            m[i][j] = b
        yield tuple(tuple(r) for r in m)
