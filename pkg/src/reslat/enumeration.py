"""Enumeration of small residuated lattices and the span-hunting pipeline."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Iterator

from . import lattice as lat
from .algebra import PREDICATES, FiniteResiduatedLattice, build_from_tables
from .completion import ProductSolver
from .errors import BudgetExceeded
from .morphisms import Span, enumerate_embeddings
from .search import FOUND, VarietyConstraints, search_amalgam

MAX_ENUM_SIZE = 7
MAX_LEG_SIZE = 6


def _canonical_key(leq, table, unit, zero, autos) -> tuple:
    n = len(leq)
    best = None
    for s in autos:
        inv = [0] * n
        for i, v in enumerate(s):
            inv[v] = i
        key = (
            s[unit],
            -1 if zero is None else s[zero],
            tuple(s[table[inv[i]][inv[j]]] for i in range(n) for j in range(n)),
        )
        if best is None or key < best:
            best = key
    return best


def _lattice_algebras(args):
    """Algebras on one lattice, up to isomorphism: (nodes, [(table, unit, zero)], exceeded)."""
    leq, cons, budget = args
    size = len(leq)
    pointed_flags = [f for f in ("involutive", "cyclic", "odd") if getattr(cons, f)]
    autos = lat.automorphisms(leq)
    units = [lat.top_of(leq)] if cons.integral else range(size)
    seen: set = set()
    found = []
    nodes = 0
    for unit in units:
        zeros = [unit] if cons.odd else (range(size) if pointed_flags else [None])
        for zero in zeros:
            leaf = None
            if pointed_flags:

                def leaf(table, unit=unit, zero=zero):
                    d = build_from_tables(size, leq, table, unit, zero)
                    return all(PREDICATES[f](d) for f in pointed_flags)

            solver = ProductSolver(
                leq,
                unit,
                commutative=cons.commutative,
                idempotent=range(size) if cons.idempotent else (),
                leaf_check=leaf,
                budget=None if budget is None else budget - nodes,
            )
            try:
                for table in solver.solutions():
                    key = _canonical_key(leq, table, unit, zero, autos)
                    if key not in seen:
                        seen.add(key)
                        found.append((table, unit, zero))
            except BudgetExceeded:
                return nodes + solver.nodes, found, True
            nodes += solver.nodes
    return nodes, found, False


def enumerate_algebras(
    size: int,
    constraints: VarietyConstraints | Iterable[str] | str | None = None,
    budget: int | None = None,
    workers: int = 1,
) -> Iterator[FiniteResiduatedLattice]:
    """Every residuated lattice of ``size`` elements in the variety, up to isomorphism.

    Lattices come from :func:`reslat.lattice.enumerate_lattices`; for each one
    the units are tried in index order and products are completed by the
    solver.  Two algebras on the same lattice are isomorphic exactly when a
    lattice automorphism carries one onto the other, which is what the
    deduplication uses.  The stream order is deterministic and does not
    depend on ``workers``.  ``budget`` caps the total solver nodes.
    """
    cons = constraints if isinstance(constraints, VarietyConstraints) else VarietyConstraints.from_flags(constraints)
    if size < 1:
        raise ValueError("size must be positive")
    if size > MAX_ENUM_SIZE:
        raise BudgetExceeded(f"enumeration is capped at size {MAX_ENUM_SIZE}")
    lattices = []
    for leq in lat.enumerate_lattices(size):
        if cons.distributive and not lat.is_distributive(*lat.lattice_tables(leq)):
            continue
        lattices.append(leq)
    tasks = [(leq, cons, budget) for leq in lattices]
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        results = pool.map(_lattice_algebras, tasks) if pool else map(_lattice_algebras, tasks)
        spent = 0
        count = 0
        for leq, (nodes, found, exceeded) in zip(lattices, results):
            spent += nodes
            if exceeded or (budget is not None and spent > budget):
                raise BudgetExceeded(f"enumeration exceeded {budget} solver nodes")
            for table, unit, zero in found:
                count += 1
                yield build_from_tables(size, leq, table, unit, zero, name=f"R{size}.{count}")
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


# -- span hunting ------------------------------------------------------------------------


def _span_rows(apex_max, leg_max, cons, budget):
    """Deterministic stream of (key, span) for spans with legs strictly larger than the apex."""
    algs = {n: list(enumerate_algebras(n, cons)) for n in range(1, leg_max + 1)}
    for na in range(1, apex_max + 1):
        for a in algs[na]:
            legs = [b for n in range(na + 1, leg_max + 1) for b in algs[n]]
            embs = {b.name: enumerate_embeddings(a, b, budget) for b in legs}
            for i, b in enumerate(legs):
                for c in legs[i:]:
                    for eb in embs[b.name]:
                        for ec in embs[c.name]:
                            if b is c and ec.map < eb.map:
                                continue  # (B, f, B, g) mirrors (B, g, B, f)
                            yield (a.name, b.name, list(eb.map), c.name, list(ec.map)), Span(a, b, c, eb, ec)


def generate_candidate_spans(
    apex_max: int,
    leg_max: int,
    constraints: VarietyConstraints | Iterable[str] | str | None = None,
    search_bound: int = 6,
    budget: int = 1_000_000,
    report_path: str | Path | None = None,
    limit: int | None = None,
) -> dict:
    """Search every small span for an amalgam and collect the ones that resist.

    A span is a candidate counterexample when the search ends with
    ``none_up_to_bound`` or ``budget_exhausted``.  With ``report_path`` each
    processed span is appended to a JSON-lines file; an existing file is
    resumed from its last cursor.  ``limit`` caps the spans processed in
    this call (the report then has ``complete: false``).
    """
    cons = constraints if isinstance(constraints, VarietyConstraints) else VarietyConstraints.from_flags(constraints)
    if apex_max < 1 or leg_max <= apex_max:
        raise ValueError("need 1 <= apex_max < leg_max")
    if leg_max > MAX_LEG_SIZE:
        raise BudgetExceeded(f"leg size is capped at {MAX_LEG_SIZE}")
    params = {
        "apex_max": apex_max,
        "leg_max": leg_max,
        "flags": list(cons.flags),
        "search_bound": search_bound,
        "budget": budget,
    }
    done = 0
    candidates: list[dict] = []
    path = Path(report_path) if report_path else None
    lines = [json.loads(s) for s in path.read_text().splitlines() if s.strip()] if path and path.exists() else []
    if lines:
        if lines[0].get("params") != params:
            raise ValueError(f"{path} was written with different parameters")
        for row in lines[1:]:
            done = row["cursor"] + 1
            if row["status"] != FOUND:
                candidates.append(row)
    elif path:
        path.write_text(json.dumps({"params": params}) + "\n")
    processed = 0
    complete = True
    fh = path.open("a") if path else None
    try:
        for idx, (key, span) in enumerate(_span_rows(apex_max, leg_max, cons, budget)):
            if idx < done:
                continue
            if limit is not None and processed >= limit:
                complete = False
                break
            out = search_amalgam(span, cons, max_size=max(search_bound, span.left.size, span.right.size), budget=budget)
            row = {
                "cursor": idx,
                "apex": key[0],
                "left": key[1],
                "phi_B": key[2],
                "right": key[3],
                "phi_C": key[4],
                "status": out.status,
                "bound": out.bound,
                "size": out.size,
            }
            processed += 1
            if out.status != FOUND:
                candidates.append(row)
            if fh:
                fh.write(json.dumps(row) + "\n")
                fh.flush()
    finally:
        if fh:
            fh.close()
    return {"params": params, "processed": processed, "complete": complete, "candidates": candidates}
