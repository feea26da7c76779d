"""Bounded search for amalgams of spans of finite residuated lattices.

The search decides the tables of a candidate amalgam ``D`` directly,
Mace4-style: for each size ``n`` it fixes where ``C`` lands in ``D``, then
enumerates lattice orders on ``0..n-1`` compatible with both legs, then
completes the product with :class:`~reslat.completion.ProductSolver`.
Residual preservation of the legs is imposed as domain restrictions on
product cells before the product search starts.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from itertools import permutations
from typing import Iterable, Iterator, Sequence

from . import lattice as lat
from .algebra import PREDICATES, FiniteResiduatedLattice, build_from_tables
from .completion import ProductSolver
from .errors import BudgetExceeded, InconsistentConstraints, InvalidSpan, SignatureMismatch
from .morphisms import Amalgam, Morphism, Span, amalgam_violation

FLAG_NAMES = ("commutative", "idempotent", "integral", "distributive", "involutive", "cyclic", "odd")


@dataclass(frozen=True)
class VarietyConstraints:
    commutative: bool = False
    idempotent: bool = False
    integral: bool = False
    distributive: bool = False
    involutive: bool = False
    cyclic: bool = False
    odd: bool = False

    @classmethod
    def from_flags(cls, flags: Iterable[str] | str | None) -> "VarietyConstraints":
        if flags is None:
            return cls()
        if isinstance(flags, str):
            flags = [f for f in flags.split(",") if f.strip()]
        kw = {}
        for f in flags:
            f = f.strip().lower()
            if f not in FLAG_NAMES:
                raise ValueError(f"unknown variety flag {f!r}")
            kw[f] = True
        return cls(**kw)

    @property
    def flags(self) -> tuple[str, ...]:
        return tuple(f.name for f in fields(self) if getattr(self, f.name))

    @property
    def pointed(self) -> bool:
        return self.involutive or self.cyclic or self.odd

    def holds(self, alg: FiniteResiduatedLattice) -> bool:
        return all(PREDICATES[f](alg) for f in self.flags)

    def failing(self, alg: FiniteResiduatedLattice) -> list[str]:
        return [f for f in self.flags if not PREDICATES[f](alg)]


FOUND = "found"
NONE_UP_TO_BOUND = "none_up_to_bound"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class SearchStats:
    nodes: int = 0
    lattice_nodes: int = 0
    product_nodes: int = 0
    lattices: int = 0
    propagation_failures: int = 0
    wall_time: float = field(default=0.0, compare=False)


@dataclass
class SearchOutcome:
    """Result of a bounded amalgam search.

    ``status`` is one of ``found``, ``none_up_to_bound`` (exhaustive for every
    size up to ``bound``) or ``budget_exhausted`` (no claim either way;
    ``bound`` is the size being searched when the budget ran out).
    """

    status: str
    bound: int
    amalgam: Amalgam | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    mode: str = "seeded"

    @property
    def found(self) -> bool:
        return self.status == FOUND

    @property
    def size(self) -> int | None:
        return self.amalgam.target.size if self.amalgam else None

    def report(self, include_timing: bool = False) -> dict:
        """Machine-readable summary; deterministic unless timing is included."""
        out = {
            "status": self.status,
            "bound": self.bound,
            "mode": self.mode,
            "stats": {
                "nodes": self.stats.nodes,
                "lattice_nodes": self.stats.lattice_nodes,
                "product_nodes": self.stats.product_nodes,
                "lattices": self.stats.lattices,
                "propagation_failures": self.stats.propagation_failures,
            },
        }
        if include_timing:
            out["stats"]["wall_time"] = round(self.stats.wall_time, 3)
        if self.amalgam is not None:
            from .io import algebra_to_dict

            out["amalgam"] = {
                "target": algebra_to_dict(self.amalgam.target),
                "psi_B": list(self.amalgam.psi_B.map),
                "psi_C": list(self.amalgam.psi_C.map),
            }
        return out


class _Budget(Exception):
    pass


# -- skeleton: facts about D forced by the embedded algebras -------------------


@dataclass
class _Skeleton:
    n: int
    rel: dict  # (i, j) -> bool, i <= j in D
    joins: dict  # (i, j) -> k
    meets: dict
    prods: dict
    lres: dict
    rres: dict
    unit: int
    zero: int | None


def _skeleton(n: int, parts: Sequence[tuple[FiniteResiduatedLattice, Sequence[int]]]) -> _Skeleton | None:
    rel: dict = {}
    tabs = {"join": {}, "meet": {}, "prod": {}, "lres": {}, "rres": {}}
    unit = zero = None
    for alg, m in parts:
        u = m[alg.unit]
        if unit is not None and unit != u:
            return None
        unit = u
        if alg.zero is not None:
            z = m[alg.zero]
            if zero is not None and zero != z:
                return None
            zero = z
        for x in range(alg.size):
            i = m[x]
            for y in range(alg.size):
                j = m[y]
                b = alg.leq[x][y]
                if rel.setdefault((i, j), b) != b:
                    return None
                for op, facts in tabs.items():
                    k = m[getattr(alg, op)[x][y]]
                    if facts.setdefault((i, j), k) != k:
                        return None
    return _Skeleton(n, rel, tabs["join"], tabs["meet"], tabs["prod"], tabs["lres"], tabs["rres"], unit, zero)


# -- lattice orders on D --------------------------------------------------------


def _lattice_orders(sk: _Skeleton, cons: VarietyConstraints, free: Sequence[int], counter: list[int], budget: int):
    """Yield ``leq`` matrices of lattices on ``0..n-1`` extending the skeleton.

    ``free`` elements carry no fixed facts; they are kept in nondecreasing
    order of their relation profile to the other elements, which discards
    only relabelings among them.  ``counter[0]`` accumulates decision nodes.
    """
    n = sk.n
    le = [1 << i for i in range(n)]
    nle = [0] * n

    def add(le, nle, i, j):
        # i <= j plus transitive consequences; False on contradiction
        if le[i] >> j & 1:
            return True
        if nle[i] >> j & 1:
            return False
        downs = [a for a in range(n) if le[a] >> i & 1]
        upj = le[j]
        for a in downs:
            new = le[a] | upj
            if new & nle[a]:
                return False
            le[a] = new
        for a in downs:
            m = le[a] & ~(1 << a)
            b = 0
            while m:
                if m & 1 and le[b] >> a & 1:
                    return False
                m >>= 1
                b += 1
        return True

    for (i, j), b in sk.rel.items():
        if i == j:
            continue
        if b:
            if not add(le, nle, i, j):
                return
        else:
            if le[i] >> j & 1:
                return
            nle[i] |= 1 << j
    if cons.integral:
        for i in range(n):
            if not add(le, nle, i, sk.unit):
                return
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    fixed_set = [i for i in range(n) if i not in set(free)]
    fixed_mask = sum(1 << i for i in fixed_set)
    joins, meets = sk.joins, sk.meets

    def leaf(le):
        leq = tuple(tuple(bool(le[i] >> j & 1) for j in range(n)) for i in range(n))
        join, meet = lat.join_meet_partial(leq)
        for i in range(n):
            for j in range(n):
                if join[i][j] < 0 or meet[i][j] < 0:
                    return None
        for (i, j), k in joins.items():
            if join[i][j] != k:
                return None
        for (i, j), k in meets.items():
            if meet[i][j] != k:
                return None
        if len(free) > 1:
            down = [sum(1 << a for a in range(n) if le[a] >> i & 1) for i in range(n)]
            sig = [(le[f] & fixed_mask, down[f] & fixed_mask) for f in free]
            if any(sig[k] > sig[k + 1] for k in range(len(sig) - 1)):
                return None
        if cons.distributive and not lat.is_distributive(join, meet):
            return None
        return leq

    def rec(k, le, nle):
        while k < len(pairs):
            i, j = pairs[k]
            if not (le[i] >> j & 1 or le[j] >> i & 1 or (nle[i] >> j & 1 and nle[j] >> i & 1)):
                break
            k += 1
        if k == len(pairs):
            leq = leaf(le)
            if leq is not None:
                yield leq
            return
        i, j = pairs[k]
        for choice in (0, 1, 2):
            counter[0] += 1
            if counter[0] > budget:
                raise _Budget
            le2, nle2 = list(le), list(nle)
            if choice == 0:
                ok = add(le2, nle2, i, j)
                nle2[j] |= 1 << i
            elif choice == 1:
                ok = add(le2, nle2, j, i)
                nle2[i] |= 1 << j
            else:
                ok = not (le2[i] >> j & 1 or le2[j] >> i & 1)
                nle2[i] |= 1 << j
                nle2[j] |= 1 << i
            if ok:
                yield from rec(k + 1, le2, nle2)

    yield from rec(0, le, nle)


# -- product search on a fixed lattice ------------------------------------------


def _leaf_predicates(cons: VarietyConstraints, zero: int | None):
    pointed_flags = [f for f in ("involutive", "cyclic", "odd") if getattr(cons, f)]
    if not pointed_flags:
        return None
    return pointed_flags


def _product_task(args):
    """Search products on one lattice; returns (nodes, fails, table, exhausted)."""
    leq, sk, cons, budget = args
    n = sk.n
    up = lat.up_masks(leq)
    down = lat.down_masks(leq)
    full = (1 << n) - 1
    allowed: dict = {}
    # x\z = r in a leg forces: x*y <= z iff y <= r, for every y of D
    for (x, z), r in sk.lres.items():
        for y in range(n):
            if not leq[y][r]:
                allowed[(x, y)] = allowed.get((x, y), full) & ~down[z]
    for (z, y), r in sk.rres.items():
        for x in range(n):
            if not leq[x][r]:
                allowed[(x, y)] = allowed.get((x, y), full) & ~down[z]
    pointed_flags = _leaf_predicates(cons, sk.zero)
    leaf_check = None
    if pointed_flags:

        def leaf_check(table):
            d = build_from_tables(n, leq, table, sk.unit, sk.zero)
            return all(PREDICATES[f](d) for f in pointed_flags)

    solver = ProductSolver(
        leq,
        sk.unit,
        fixed=sk.prods,
        allowed=allowed,
        commutative=cons.commutative,
        idempotent=range(n) if cons.idempotent else (),
        leaf_check=leaf_check,
        budget=budget,
    )
    if not solver.consistent:
        return 0, 1, None, False
    try:
        for table in solver.solutions(limit=1):
            return solver.nodes, solver.fails, table, False
    except BudgetExceeded:
        return solver.nodes, solver.fails, None, True
    return solver.nodes, solver.fails, None, False


# -- placements of C (and B) in D ---------------------------------------------------


def _seeded_placements(span: Span, n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """psi_B is the identity; C's new elements go to unused B elements or fresh indices in order."""
    B, C = span.left, span.right
    psi_B = tuple(range(B.size))
    base = {span.phi_C.map[x]: span.phi_B.map[x] for x in range(span.apex.size)}
    extras = [c for c in range(C.size) if c not in base]
    b_free = [b for b in range(B.size) if b not in set(span.phi_B.map)]
    psi = [-1] * C.size
    for c, v in base.items():
        psi[c] = v

    def rec(k, used, fresh):
        if k == len(extras):
            yield psi_B, tuple(psi)
            return
        c = extras[k]
        for v in b_free:
            if v in used:
                continue
            psi[c] = v
            yield from rec(k + 1, used | {v}, fresh)
        if fresh < n:
            psi[c] = fresh
            yield from rec(k + 1, used, fresh + 1)
        psi[c] = -1

    yield from rec(0, frozenset(), B.size)


def _square_placements(span: Span, n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every pair of injections B -> D, C -> D agreeing on the apex (lexicographic)."""
    B, C, A = span.left, span.right, span.apex
    for psi_B in permutations(range(n), B.size):
        base = {span.phi_C.map[x]: psi_B[span.phi_B.map[x]] for x in range(A.size)}
        extras = [c for c in range(C.size) if c not in base]
        taken = set(base.values())
        rest = [v for v in range(n) if v not in taken]
        for images in permutations(rest, len(extras)):
            psi = [-1] * C.size
            for c, v in base.items():
                psi[c] = v
            for c, v in zip(extras, images):
                psi[c] = v
            yield psi_B, tuple(psi)


# -- driver ------------------------------------------------------------------------


def _check_inputs(span: Span, cons: VarietyConstraints, max_size: int, budget: int):
    try:
        span.validate()
    except InvalidSpan:
        raise
    except SignatureMismatch as exc:  # pragma: no cover - validate wraps it
        raise InvalidSpan(str(exc)) from None
    if budget <= 0:
        raise ValueError("budget must be positive")
    if max_size < max(span.left.size, span.right.size):
        raise ValueError("max_size is smaller than a leg of the span")
    if cons.pointed and not span.apex.pointed:
        raise InconsistentConstraints(f"flags {cons.flags} need pointed algebras but the span is unpointed")
    for alg in (span.apex, span.left, span.right):
        bad = cons.failing(alg)
        if bad:
            raise InconsistentConstraints(
                f"{alg.name or 'a span algebra'} is not {', '.join(bad)}; no amalgam can lie in that variety"
            )


def _run(span, cons, max_size, budget, workers, mode) -> SearchOutcome:
    cons = cons if isinstance(cons, VarietyConstraints) else VarietyConstraints.from_flags(cons)
    _check_inputs(span, cons, max_size, budget)
    t0 = time.perf_counter()
    stats = SearchStats()
    placements = _seeded_placements if mode == "seeded" else _square_placements
    B, C = span.left, span.right
    start = max(B.size, C.size)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None

    def finish(status, bound, amalgam=None):
        stats.nodes = stats.lattice_nodes + stats.product_nodes
        stats.wall_time = time.perf_counter() - t0
        return SearchOutcome(status, bound, amalgam, stats, mode)

    try:
        for n in range(start, max_size + 1):
            for psi_B, psi_C in placements(span, n):
                sk = _skeleton(n, [(B, psi_B), (C, psi_C)])
                if sk is None:
                    continue
                used = set(psi_B) | set(psi_C)
                free = [i for i in range(n) if i not in used] if mode == "seeded" else []
                spent = stats.lattice_nodes + stats.product_nodes
                counter = [spent]
                try:
                    orders = list(_lattice_orders(sk, cons, free, counter, budget))
                except _Budget:
                    stats.lattice_nodes += counter[0] - spent
                    return finish(BUDGET_EXHAUSTED, n)
                stats.lattice_nodes += counter[0] - spent
                stats.lattices += len(orders)
                if not orders:
                    continue
                remaining = budget - counter[0]
                tasks = [(leq, sk, cons, remaining) for leq in orders]
                results = pool.map(_product_task, tasks, chunksize=4) if pool else map(_product_task, tasks)
                for leq, (nodes, fails, table, exhausted) in zip(orders, results):
                    stats.product_nodes += nodes
                    stats.propagation_failures += fails
                    if exhausted or stats.lattice_nodes + stats.product_nodes > budget:
                        return finish(BUDGET_EXHAUSTED, n)
                    if table is not None:
                        return finish(FOUND, n, _make_amalgam(span, n, leq, table, sk, psi_B, psi_C))
        return finish(NONE_UP_TO_BOUND, max_size)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


def _make_amalgam(span, n, leq, table, sk, psi_B, psi_C) -> Amalgam:
    B, C = span.left, span.right
    labels = [""] * n
    for x in range(C.size):
        labels[psi_C[x]] = C.label(x)
    for x in range(B.size):
        labels[psi_B[x]] = B.label(x)
    k = 0
    for i in range(n):
        if not labels[i]:
            labels[i] = f"f{k}"
            k += 1
    d = build_from_tables(n, leq, table, sk.unit, sk.zero, labels=labels, name="D")
    am = Amalgam(d, Morphism(B, d, psi_B), Morphism(C, d, psi_C))
    why = amalgam_violation(span, am)
    if why is not None:  # pragma: no cover - would be a solver bug
        raise AssertionError(f"search produced an invalid amalgam: {why}")
    return am


def search_amalgam(
    span: Span,
    constraints: VarietyConstraints | Iterable[str] | str | None = None,
    max_size: int = 8,
    budget: int = 10_000_000,
    workers: int = 1,
) -> SearchOutcome:
    """Find an amalgam of ``span`` with at most ``max_size`` elements.

    Without loss of generality the left leg of the amalgam is taken to be
    the identity on ``0..|B|-1``; sizes are tried from ``max(|B|, |C|)``
    upward.  ``NONE_UP_TO_BOUND`` means every size up to ``max_size`` was
    searched exhaustively.  ``budget`` counts decision nodes.  With
    ``workers > 1`` product searches run in a process pool; outcomes and
    node counts are identical to the sequential run.
    """
    return _run(span, constraints, max_size, budget, workers, "seeded")


def search_amalgam_unrestricted_square(
    span: Span,
    max_size: int,
    budget: int = 10_000_000,
    constraints: VarietyConstraints | Iterable[str] | str | None = None,
    workers: int = 1,
) -> SearchOutcome:
    """Like :func:`search_amalgam` but with both legs of the amalgam searched.

    No symmetry breaking is applied; this is the slow reference mode used to
    cross-check the seeded search on small instances.
    """
    return _run(span, constraints, max_size, budget, workers, "square")
