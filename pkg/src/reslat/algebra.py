"""Finite (pointed) residuated lattices as explicit operation tables."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from . import lattice as lat
from .errors import NoZeroConstant, NotALattice, NotAMonoid, NotResiduated

Matrix = tuple[tuple[bool, ...], ...]
Table = tuple[tuple[int, ...], ...]


def _freeze(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class FiniteResiduatedLattice:
    """A residuated lattice on the carrier ``0..size-1``.

    ``lres[x][z]`` is ``x\\z`` and ``rres[z][y]`` is ``z/y``.  Instances made
    by :func:`build_from_tables` are verified; :func:`raw_algebra` makes
    unverified ones for inspection with :func:`check_axioms`.
    """

    size: int
    leq: Matrix
    join: Table
    meet: Table
    prod: Table
    lres: Table
    rres: Table
    unit: int
    zero: int | None = None
    labels: tuple[str, ...] | None = None
    name: str | None = field(default=None, compare=False)

    @property
    def pointed(self) -> bool:
        return self.zero is not None

    @property
    def top(self) -> int | None:
        return lat.top_of(self.leq)

    @property
    def bottom(self) -> int | None:
        return lat.bottom_of(self.leq)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def index(self, name: str) -> int:
        """Index of the element labelled ``name`` (or given as a decimal index)."""
        if self.labels and name in self.labels:
            return self.labels.index(name)
        if name.isdigit() and int(name) < self.size:
            return int(name)
        raise KeyError(name)

    def with_zero(self, zero: int | None) -> "FiniteResiduatedLattice":
        return replace(self, zero=zero)

    def relabeled(self, labels: Sequence[str] | None, name: str | None = None) -> "FiniteResiduatedLattice":
        return replace(self, labels=tuple(labels) if labels else None, name=name or self.name)

    def permuted(self, perm: Sequence[int]) -> "FiniteResiduatedLattice":
        """Isomorphic copy where old element ``i`` becomes ``perm[i]``."""
        n = self.size
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old

        def tab(t):
            return tuple(tuple(perm[t[inv[i]][inv[j]]] for j in range(n)) for i in range(n))

        return FiniteResiduatedLattice(
            size=n,
            leq=tuple(tuple(self.leq[inv[i]][inv[j]] for j in range(n)) for i in range(n)),
            join=tab(self.join),
            meet=tab(self.meet),
            prod=tab(self.prod),
            lres=tab(self.lres),
            rres=tab(self.rres),
            unit=perm[self.unit],
            zero=None if self.zero is None else perm[self.zero],
            labels=tuple(self.labels[inv[i]] for i in range(n)) if self.labels else None,
            name=self.name,
        )

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<FiniteResiduatedLattice{tag} size={self.size}>"


@dataclass(frozen=True)
class PartialAlgebraSpec:
    """An order with partially specified products, as read off a labelled Hasse diagram.

    ``central`` and ``idempotent_elements`` carry the node-shape convention
    (round = central, filled = idempotent) for the listed elements.
    """

    size: int
    leq: Matrix
    unit: int
    product_constraints: tuple[tuple[int, int, int], ...] = ()
    zero: int | None = None
    labels: tuple[str, ...] | None = None
    central: tuple[int, ...] = ()
    idempotent_elements: tuple[int, ...] = ()
    name: str | None = None

    def __post_init__(self):
        seen = {}
        for i, j, k in self.product_constraints:
            if seen.setdefault((i, j), k) != k:
                from .errors import InconsistentSpec

                raise InconsistentSpec(f"product ({i},{j}) asserted to be both {seen[(i, j)]} and {k}")

    def product_matrix(self) -> list[list[int]]:
        m = [[-1] * self.size for _ in range(self.size)]
        for i, j, k in self.product_constraints:
            m[i][j] = k
        return m

    @classmethod
    def from_algebra(cls, alg: FiniteResiduatedLattice) -> "PartialAlgebraSpec":
        n = alg.size
        return cls(
            size=n,
            leq=alg.leq,
            unit=alg.unit,
            product_constraints=tuple((i, j, alg.prod[i][j]) for i in range(n) for j in range(n)),
            zero=alg.zero,
            labels=alg.labels,
            name=alg.name,
        )


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple[tuple[str, tuple[int, ...]], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def names(self) -> list[str]:
        return [v[0] for v in self.violations]


def _best_residuals(n, leq, prod, join):
    # maximum of {y : x*y <= z}; falls back to the join of that set (then the
    # adjunction check reports it) or -1 if even that is undefined
    def pick(cands):
        for c in cands:
            if all(leq[d][c] for d in cands):
                return c
        if not cands:
            return -1
        acc = cands[0]
        for c in cands[1:]:
            acc = join[acc][c] if acc >= 0 else -1
        return acc

    lres = tuple(tuple(pick([y for y in range(n) if leq[prod[x][y]][z]]) for z in range(n)) for x in range(n))
    rres = tuple(tuple(pick([x for x in range(n) if leq[prod[x][y]][z]]) for y in range(n)) for z in range(n))
    return lres, rres


def raw_algebra(size, leq, prod, unit, zero=None, labels=None, name=None) -> FiniteResiduatedLattice:
    """Assemble tables without verification (residuals best effort)."""
    leq = tuple(tuple(bool(x) for x in row) for row in leq)
    prod = _freeze(prod)
    join, meet = lat.join_meet_partial(leq)
    if any(v < 0 for row in prod for v in row):
        lres = rres = tuple(tuple(-1 for _ in range(size)) for _ in range(size))
    else:
        lres, rres = _best_residuals(size, leq, prod, join)
    return FiniteResiduatedLattice(
        size=size,
        leq=leq,
        join=join,
        meet=meet,
        prod=prod,
        lres=lres,
        rres=rres,
        unit=unit,
        zero=zero,
        labels=tuple(labels) if labels else None,
        name=name,
    )


def _first(gen):
    for w in gen:
        return w
    return None


def check_axioms(alg: FiniteResiduatedLattice) -> AxiomReport:
    """Exhaustive check of the lattice, monoid and residuation axioms.

    Every violated axiom is listed once, with the lexicographically first
    witness tuple.
    """
    n = alg.size
    leq, join, meet, prod = alg.leq, alg.join, alg.meet, alg.prod
    lres, rres, u = alg.lres, alg.rres, alg.unit
    out: list[tuple[str, tuple[int, ...]]] = []
    R = range(n)

    def inrange(t):
        return all(0 <= v < n for row in t for v in row)

    out.extend(lat.order_violations(leq))
    if not 0 <= u < n:
        out.append(("unit-range", (u,)))
        return AxiomReport(tuple(out))
    if alg.zero is not None and not 0 <= alg.zero < n:
        out.append(("zero-range", (alg.zero,)))
    if not inrange(join):
        out.append(("join", _first((i, j) for i in R for j in R if not 0 <= join[i][j] < n)))
    else:
        w = _first(
            (i, j, k)
            for i in R
            for j in R
            for k in R
            if not (leq[i][join[i][j]] and leq[j][join[i][j]])
            or (leq[i][k] and leq[j][k] and not leq[join[i][j]][k])
        )
        if w:
            out.append(("join", w))
    if not inrange(meet):
        out.append(("meet", _first((i, j) for i in R for j in R if not 0 <= meet[i][j] < n)))
    else:
        w = _first(
            (i, j, k)
            for i in R
            for j in R
            for k in R
            if not (leq[meet[i][j]][i] and leq[meet[i][j]][j])
            or (leq[k][i] and leq[k][j] and not leq[k][meet[i][j]])
        )
        if w:
            out.append(("meet", w))
    if not inrange(prod):
        out.append(("product-range", _first((i, j) for i in R for j in R if not 0 <= prod[i][j] < n)))
        return AxiomReport(tuple(out))
    w = _first((a, b, c) for a in R for b in R for c in R if prod[prod[a][b]][c] != prod[a][prod[b][c]])
    if w:
        out.append(("associative", w))
    w = _first((a,) for a in R if prod[u][a] != a)
    if w:
        out.append(("left-unit", w))
    w = _first((a,) for a in R if prod[a][u] != a)
    if w:
        out.append(("right-unit", w))
    if not inrange(lres):
        out.append(("left-residual", _first((a, c) for a in R for c in R if not 0 <= lres[a][c] < n)))
    else:
        w = _first(
            (a, b, c) for a in R for b in R for c in R if leq[prod[a][b]][c] != leq[b][lres[a][c]]
        )
        if w:
            out.append(("left-residual", w))
    if not inrange(rres):
        out.append(("right-residual", _first((c, b) for c in R for b in R if not 0 <= rres[c][b] < n)))
    else:
        w = _first(
            (a, b, c) for a in R for b in R for c in R if leq[prod[a][b]][c] != leq[a][rres[c][b]]
        )
        if w:
            out.append(("right-residual", w))
    return AxiomReport(tuple(out))


def build_from_tables(size, leq, prod, unit, zero=None, labels=None, name=None) -> FiniteResiduatedLattice:
    """Build and verify a residuated lattice from its order and product.

    Join, meet and both residuals are derived.  Raises :class:`NotALattice`,
    :class:`NotAMonoid` or :class:`NotResiduated`.
    """
    if size < 1:
        raise ValueError("size must be positive")
    if len(leq) != size or any(len(r) != size for r in leq):
        raise ValueError("leq must be a size x size matrix")
    if len(prod) != size or any(len(r) != size for r in prod):
        raise ValueError("prod must be a size x size table")
    if any(not 0 <= v < size for r in prod for v in r):
        raise ValueError("product values must be indices in range")
    if not 0 <= unit < size:
        raise ValueError("unit out of range")
    if zero is not None and not 0 <= zero < size:
        raise ValueError("zero out of range")
    leq_t = tuple(tuple(bool(x) for x in row) for row in leq)
    bad = lat.order_violations(leq_t)
    if bad:
        raise NotALattice(f"relation is not a partial order ({bad[0][0]} fails at {bad[0][1]})")
    lat.lattice_tables(leq_t)
    alg = raw_algebra(size, leq_t, prod, unit, zero, labels, name)
    report = check_axioms(alg)
    names = set(report.names())
    for key in ("associative", "left-unit", "right-unit"):
        if key in names:
            wit = dict(report.violations)[key]
            raise NotAMonoid(f"{key} fails at {wit}")
    for key in ("left-residual", "right-residual"):
        if key in names:
            wit = dict(report.violations)[key]
            raise NotResiduated(f"{key} fails at {wit}")
    if report.violations:
        raise NotALattice(f"{report.violations[0][0]} fails at {report.violations[0][1]}")
    return alg


def trivial_algebra(pointed: bool = False) -> FiniteResiduatedLattice:
    return build_from_tables(1, [[True]], [[0]], 0, zero=0 if pointed else None, labels=["1"], name="trivial")


# -- predicates -------------------------------------------------------------


def is_commutative(alg: FiniteResiduatedLattice) -> bool:
    p = alg.prod
    return all(p[x][y] == p[y][x] for x in range(alg.size) for y in range(x + 1, alg.size))


def is_idempotent(alg: FiniteResiduatedLattice) -> bool:
    return all(alg.prod[x][x] == x for x in range(alg.size))


def is_integral(alg: FiniteResiduatedLattice) -> bool:
    return all(alg.leq[x][alg.unit] for x in range(alg.size))


def is_distributive(alg: FiniteResiduatedLattice) -> bool:
    return lat.is_distributive(alg.join, alg.meet)


def _zero(alg):
    if alg.zero is None:
        raise NoZeroConstant("algebra has no zero constant")
    return alg.zero


def is_involutive(alg: FiniteResiduatedLattice) -> bool:
    z = _zero(alg)
    lres, rres = alg.lres, alg.rres
    return all(rres[z][lres[x][z]] == x and lres[rres[z][x]][z] == x for x in range(alg.size))


def is_cyclic(alg: FiniteResiduatedLattice) -> bool:
    z = _zero(alg)
    return all(alg.rres[z][x] == alg.lres[x][z] for x in range(alg.size))


def is_odd(alg: FiniteResiduatedLattice) -> bool:
    return _zero(alg) == alg.unit


def is_central_element(alg: FiniteResiduatedLattice, i: int) -> bool:
    p = alg.prod
    return all(p[i][x] == p[x][i] for x in range(alg.size))


def is_idempotent_element(alg: FiniteResiduatedLattice, i: int) -> bool:
    return alg.prod[i][i] == i


PREDICATES = {
    "commutative": is_commutative,
    "idempotent": is_idempotent,
    "integral": is_integral,
    "distributive": is_distributive,
    "involutive": is_involutive,
    "cyclic": is_cyclic,
    "odd": is_odd,
}


def predicate_profile(alg: FiniteResiduatedLattice) -> dict[str, bool]:
    """All variety predicates that make sense for ``alg``."""
    out = {}
    for key, fn in PREDICATES.items():
        if key in ("involutive", "cyclic", "odd") and alg.zero is None:
            continue
        out[key] = fn(alg)
    return out
