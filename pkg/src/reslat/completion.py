"""Propagating backtracker for product tables over a fixed lattice.

Given a lattice order and a unit, :class:`ProductSolver` enumerates every
product table that makes the structure a residuated lattice.  On a finite
lattice a monoid operation is residuated exactly when it preserves binary
joins and the bottom in each argument, so those are the constraints
propagated (together with monotonicity and associativity).  Cells are
decided in row-major order, values in increasing index order.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Sequence

from . import lattice as lat
from .algebra import FiniteResiduatedLattice, PartialAlgebraSpec, build_from_tables
from .errors import BudgetExceeded, InconsistentSpec


class _Fail(Exception):
    pass


class ProductSolver:
    """Enumerate residuated products on a lattice.

    ``fixed`` maps ``(x, y)`` to a required product value; ``allowed`` maps
    ``(x, y)`` to a bitmask of admissible values.  ``central`` elements commute
    with everything, ``idempotent`` elements square to themselves.
    ``leaf_check(table)`` can veto complete tables.  ``budget`` caps the number
    of decision nodes (``BudgetExceeded`` when hit).
    """

    def __init__(
        self,
        leq,
        unit: int,
        *,
        fixed: dict[tuple[int, int], int] | None = None,
        allowed: dict[tuple[int, int], int] | None = None,
        central: Iterable[int] = (),
        idempotent: Iterable[int] = (),
        commutative: bool = False,
        leaf_check: Callable[[list[list[int]]], bool] | None = None,
        budget: int | None = None,
    ):
        self.leq = leq
        n = self.n = len(leq)
        self.join, self.meet = lat.lattice_tables(leq)
        self.unit = unit
        self.up = lat.up_masks(leq)
        self.down = lat.down_masks(leq)
        self.strict_up = [[j for j in range(n) if j != i and leq[i][j]] for i in range(n)]
        self.strict_down = [[j for j in range(n) if j != i and leq[j][i]] for i in range(n)]
        join = self.join
        # jeq[v][t]: values w with v v w == t
        self.jeq = [[sum(1 << w for w in range(n) if join[v][w] == t) for t in range(n)] for v in range(n)]
        # nontrivial ways to write y as a join of two other elements
        self.join_pairs = [
            [(a, b) for a in range(n) for b in range(n) if a != y and b != y and join[a][b] == y] for y in range(n)
        ]
        self.leaf_check = leaf_check
        self.budget = budget
        self.nodes = 0
        self.fails = 0
        self.leaf_rejects = 0

        partners: list[list[int]] = [[] for _ in range(n * n)]
        cen = set(range(n)) if commutative else set(central)
        for i in cen:
            for x in range(n):
                if x != i:
                    a, b = i * n + x, x * n + i
                    if b not in partners[a]:
                        partners[a].append(b)
                        partners[b].append(a)
        self.partners = partners

        full = (1 << n) - 1
        dom = [full] * (n * n)
        bot = lat.bottom_of(leq)
        for y in range(n):
            dom[unit * n + y] &= 1 << y
            dom[y * n + unit] &= 1 << y
            dom[bot * n + y] &= 1 << bot
            dom[y * n + bot] &= 1 << bot
        for i in idempotent:
            dom[i * n + i] &= 1 << i
        for (x, y), v in (fixed or {}).items():
            dom[x * n + y] &= 1 << v
        for (x, y), m in (allowed or {}).items():
            dom[x * n + y] &= m
        val = [-1] * (n * n)
        self.initial = None
        try:
            for a in range(n * n):
                for b in partners[a]:
                    if a < b:
                        m = dom[a] & dom[b]
                        dom[a] = dom[b] = m
            queue = []
            for c in range(n * n):
                d = dom[c]
                if d == 0:
                    raise _Fail
                if d & (d - 1) == 0:
                    val[c] = d.bit_length() - 1
                    queue.append(c)
            self._propagate(dom, val, queue)
        except _Fail:
            return
        self.initial = (dom, val)

    @property
    def consistent(self) -> bool:
        """False when the initial constraints already contradict propagation."""
        return self.initial is not None

    # -- propagation --------------------------------------------------------

    def _propagate(self, dom, val, queue):
        n = self.n
        up, down = self.up, self.down
        join = self.join
        jeq = self.jeq
        strict_up, strict_down = self.strict_up, self.strict_down
        partners = self.partners
        join_pairs = self.join_pairs
        N = n * n

        def narrow(c, mask):
            d = dom[c]
            nd = d & mask
            if nd == d:
                return
            if nd == 0:
                raise _Fail
            dom[c] = nd
            if nd & (nd - 1) == 0:
                val[c] = nd.bit_length() - 1
                queue.append(c)

        def equate(a, b):
            m = dom[a] & dom[b]
            narrow(a, m)
            narrow(b, m)

        while queue:
            c = queue.pop()
            v = val[c]
            x, y = divmod(c, n)
            bit = 1 << v
            for p in partners[c]:
                narrow(p, bit)
            # monotonicity in both arguments
            uv, dv = up[v], down[v]
            for x2 in strict_up[x]:
                narrow(x2 * n + y, uv)
            for x2 in strict_down[x]:
                narrow(x2 * n + y, dv)
            for y2 in strict_up[y]:
                narrow(x * n + y2, uv)
            for y2 in strict_down[y]:
                narrow(x * n + y2, dv)
            # join preservation, with (x, y) as a component
            row = x * n
            jy = join[y]
            for z in range(n):
                w = val[row + z]
                if w >= 0:
                    narrow(row + jy[z], 1 << join[v][w])
                else:
                    t = val[row + jy[z]]
                    if t >= 0:
                        narrow(row + z, jeq[v][t])
            jx = join[x]
            for z in range(n):
                w = val[z * n + y]
                if w >= 0:
                    narrow(jx[z] * n + y, 1 << join[v][w])
                else:
                    t = val[jx[z] * n + y]
                    if t >= 0:
                        narrow(z * n + y, jeq[v][t])
            # join preservation, with (x, y) as the joined cell
            for a, b in join_pairs[y]:
                w = val[row + a]
                if w >= 0:
                    narrow(row + b, jeq[w][v])
            for a, b in join_pairs[x]:
                w = val[a * n + y]
                if w >= 0:
                    narrow(b * n + y, jeq[w][v])
            # associativity: (x y) z = x (y z)
            vrow = v * n
            yrow = y * n
            for z in range(n):
                yz = val[yrow + z]
                if yz >= 0:
                    equate(vrow + z, row + yz)
            # (w x) y = w (x y)
            for w in range(n):
                wx = val[w * n + x]
                if wx >= 0:
                    equate(wx * n + y, w * n + v)
            # (s t) y = s (t y) where s t = x, and x (t z) = (x t) z where t z = y
            for st in range(N):
                r = val[st]
                if r == x:
                    s, t = divmod(st, n)
                    ty = val[t * n + y]
                    if ty >= 0:
                        narrow(s * n + ty, bit)
                if r == y:
                    t, z = divmod(st, n)
                    xt = val[row + t]
                    if xt >= 0:
                        narrow(xt * n + z, bit)

    # -- search ---------------------------------------------------------------

    def _complete_ok(self, val) -> bool:
        n = self.n
        join = self.join
        p = [val[i * n : (i + 1) * n] for i in range(n)]
        for a in range(n):
            pa = p[a]
            for b in range(n):
                pab = p[pa[b]]
                pb = p[b]
                for c in range(n):
                    if pab[c] != pa[pb[c]]:
                        return False
                    bc = join[b][c]
                    if pa[bc] != join[pa[b]][pa[c]] or p[bc][a] != join[pb[a]][p[c][a]]:
                        return False
        return True

    def solutions(self, limit: int | None = None) -> Iterator[list[list[int]]]:
        """Yield complete product tables (as lists of rows) in search order."""
        if self.initial is None:
            return
        n = self.n
        N = n * n
        count = 0
        stack = [(list(self.initial[0]), list(self.initial[1]))]
        while stack:
            dom, val = stack.pop()
            c = 0
            while c < N and val[c] >= 0:
                c += 1
            if c == N:
                table = [val[i * n : (i + 1) * n] for i in range(n)]
                if not self._complete_ok(val) or (self.leaf_check and not self.leaf_check(table)):
                    self.leaf_rejects += 1
                    continue
                yield table
                count += 1
                if limit is not None and count >= limit:
                    return
                continue
            d = dom[c]
            children = []
            while d:
                low = d & -d
                d ^= low
                self.nodes += 1
                if self.budget is not None and self.nodes > self.budget:
                    raise BudgetExceeded(f"product search exceeded {self.budget} nodes")
                v = low.bit_length() - 1
                d2 = list(dom)
                v2 = list(val)
                d2[c] = low
                v2[c] = v
                try:
                    self._propagate(d2, v2, [c])
                except _Fail:
                    self.fails += 1
                    continue
                children.append((d2, v2))
            # reversed so that the smallest value is explored first
            stack.extend(reversed(children))


def complete_partial_product(spec: PartialAlgebraSpec, limit: int = 1000) -> list[FiniteResiduatedLattice]:
    """All residuated lattices extending ``spec``, as literal tables on its carrier.

    At most ``limit`` completions are returned.  Raises
    :class:`InconsistentSpec` if the given products already contradict a
    forced consequence.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    fixed = {(i, j): k for i, j, k in spec.product_constraints}
    solver = ProductSolver(
        spec.leq,
        spec.unit,
        fixed=fixed,
        central=spec.central,
        idempotent=spec.idempotent_elements,
    )
    if not solver.consistent:
        raise InconsistentSpec(f"product constraints of {spec.name or 'spec'} contradict the axioms")
    out = []
    for table in solver.solutions(limit):
        out.append(
            build_from_tables(spec.size, spec.leq, table, spec.unit, spec.zero, spec.labels, spec.name)
        )
    return out


def product_solver_for(leq, unit, flags: Sequence[str] = (), **kw) -> ProductSolver:
    """Solver with the commutative / idempotent variety flags applied."""
    n = len(leq)
    return ProductSolver(
        leq,
        unit,
        commutative="commutative" in flags,
        idempotent=range(n) if "idempotent" in flags else (),
        **kw,
    )
