"""Homomorphisms, embeddings, spans and amalgams between finite algebras."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import FiniteResiduatedLattice, is_central_element, is_idempotent_element
from .errors import BudgetExceeded, InvalidSpan, SignatureMismatch


@dataclass(frozen=True)
class Morphism:
    source: FiniteResiduatedLattice
    target: FiniteResiduatedLattice
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))

    def __call__(self, i: int) -> int:
        return self.map[i]

    def after(self, first: "Morphism") -> "Morphism":
        """The composite ``self o first``."""
        return Morphism(first.source, self.target, tuple(self.map[v] for v in first.map))

    def image(self) -> frozenset[int]:
        return frozenset(self.map)


@dataclass(frozen=True)
class Violation:
    """First operation found not to be preserved, with its arguments."""

    op: str
    args: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.op}{self.args}"


def _signature_check(a: FiniteResiduatedLattice, b: FiniteResiduatedLattice):
    if a.pointed != b.pointed:
        raise SignatureMismatch(
            f"cannot map between pointed and unpointed algebras ({a.name or 'source'} -> {b.name or 'target'})"
        )


_BINARY = ("join", "meet", "prod", "lres", "rres")


def check_homomorphism(m: Morphism) -> tuple[bool, Violation | None]:
    """Whether ``m`` preserves every operation, with the first violation.

    Preserved operations are join, meet, product, both residuals and the
    unit, plus the zero when both algebras are pointed.
    """
    src, tgt, f = m.source, m.target, m.map
    if len(f) != src.size:
        raise ValueError(f"map has length {len(f)}, source has size {src.size}")
    if any(not 0 <= v < tgt.size for v in f):
        raise ValueError("map value out of range")
    _signature_check(src, tgt)
    if f[src.unit] != tgt.unit:
        return False, Violation("unit", (src.unit,))
    if src.pointed and f[src.zero] != tgt.zero:
        return False, Violation("zero", (src.zero,))
    n = src.size
    for op in _BINARY:
        s, t = getattr(src, op), getattr(tgt, op)
        for x in range(n):
            for y in range(n):
                if f[s[x][y]] != t[f[x]][f[y]]:
                    return False, Violation(op, (x, y))
    return True, None


def is_embedding(m: Morphism) -> bool:
    ok, _ = check_homomorphism(m)
    return ok and len(set(m.map)) == len(m.map)


def identity(alg: FiniteResiduatedLattice) -> Morphism:
    return Morphism(alg, alg, tuple(range(alg.size)))


def _partial_ok(src, tgt, f, x) -> bool:
    # all operations among already-mapped elements, with x just mapped
    fx = f[x]
    for op in _BINARY:
        s, t = getattr(src, op), getattr(tgt, op)
        for y in range(src.size):
            fy = f[y]
            if fy < 0:
                continue
            r = s[x][y]
            if f[r] >= 0 and f[r] != t[fx][fy]:
                return False
            r = s[y][x]
            if f[r] >= 0 and f[r] != t[fy][fx]:
                return False
    return True


def enumerate_embeddings(a: FiniteResiduatedLattice, b: FiniteResiduatedLattice, budget: int | None = 10**6) -> list[Morphism]:
    """All embeddings ``a -> b`` in lexicographic order of the map array."""
    _signature_check(a, b)
    if a.size > b.size:
        return []
    f = [-1] * a.size
    used = [False] * b.size
    out: list[Morphism] = []
    nodes = 0

    def rec(x):
        nonlocal nodes
        if x == a.size:
            m = Morphism(a, b, tuple(f))
            if is_embedding(m):
                out.append(m)
            return
        for v in range(b.size):
            if used[v]:
                continue
            if x == a.unit and v != b.unit:
                continue
            if a.pointed and x == a.zero and v != b.zero:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(f"embedding enumeration exceeded {budget} nodes")
            f[x] = v
            used[v] = True
            if _partial_ok(a, b, f, x):
                rec(x + 1)
            used[v] = False
            f[x] = -1

    rec(0)
    return out


def _profile(alg: FiniteResiduatedLattice, i: int) -> tuple:
    return (
        sum(alg.leq[j][i] for j in range(alg.size)),
        sum(alg.leq[i][j] for j in range(alg.size)),
        is_idempotent_element(alg, i),
        is_central_element(alg, i),
        i == alg.unit,
        i == alg.zero,
    )


def are_isomorphic(a: FiniteResiduatedLattice, b: FiniteResiduatedLattice, budget: int | None = 10**6) -> Morphism | None:
    """A witness isomorphism ``a -> b`` (the lexicographically least), or None."""
    if a.size != b.size or a.pointed != b.pointed:
        return None
    pa = [_profile(a, i) for i in range(a.size)]
    pb = [_profile(b, i) for i in range(b.size)]
    if sorted(pa) != sorted(pb):
        return None
    n = a.size
    f = [-1] * n
    used = [False] * n
    nodes = 0

    def rec(x):
        nonlocal nodes
        if x == n:
            return True
        for v in range(n):
            if used[v] or pb[v] != pa[x]:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(f"isomorphism search exceeded {budget} nodes")
            f[x] = v
            used[v] = True
            if all(a.leq[x][y] == b.leq[v][f[y]] and a.leq[y][x] == b.leq[f[y]][v] for y in range(x)) and _partial_ok(
                a, b, f, x
            ):
                if rec(x + 1):
                    return True
            used[v] = False
            f[x] = -1
        return False

    if rec(0):
        return Morphism(a, b, tuple(f))
    return None


@dataclass(frozen=True)
class Span:
    """Two embeddings out of a common apex: ``phi_B: A -> B`` and ``phi_C: A -> C``."""

    apex: FiniteResiduatedLattice
    left: FiniteResiduatedLattice
    right: FiniteResiduatedLattice
    phi_B: Morphism
    phi_C: Morphism
    name: str | None = None

    @classmethod
    def from_maps(cls, apex, left, right, phi_B: Sequence[int], phi_C: Sequence[int], name=None) -> "Span":
        return cls(apex, left, right, Morphism(apex, left, tuple(phi_B)), Morphism(apex, right, tuple(phi_C)), name)

    def validate(self) -> None:
        """Raise InvalidSpan unless both legs are embeddings out of the apex."""
        for leg, tgt, tag in ((self.phi_B, self.left, "phi_B"), (self.phi_C, self.right, "phi_C")):
            if leg.source != self.apex or leg.target != tgt:
                raise InvalidSpan(f"{tag} has the wrong source or target")
            try:
                ok, wit = check_homomorphism(leg)
            except (SignatureMismatch, ValueError) as exc:
                raise InvalidSpan(f"{tag}: {exc}") from None
            if not ok:
                raise InvalidSpan(f"{tag} does not preserve {wit}")
            if len(set(leg.map)) != len(leg.map):
                raise InvalidSpan(f"{tag} is not injective")


def identity_span(alg: FiniteResiduatedLattice) -> Span:
    return Span(alg, alg, alg, identity(alg), identity(alg), name=f"id({alg.name})" if alg.name else None)


@dataclass(frozen=True)
class Amalgam:
    target: FiniteResiduatedLattice
    psi_B: Morphism
    psi_C: Morphism


def amalgam_violation(span: Span, amalgam: Amalgam, strong: bool = False) -> str | None:
    """Why ``amalgam`` fails to amalgamate ``span`` (None if it does)."""
    d = amalgam.target
    if amalgam.psi_B.source != span.left or amalgam.psi_C.source != span.right:
        return "amalgam legs do not start at the span's targets"
    if amalgam.psi_B.target != d or amalgam.psi_C.target != d:
        return "amalgam legs do not share the target"
    for leg, tag in ((amalgam.psi_B, "psi_B"), (amalgam.psi_C, "psi_C")):
        ok, wit = check_homomorphism(leg)
        if not ok:
            return f"{tag} does not preserve {wit}"
        if len(set(leg.map)) != len(leg.map):
            return f"{tag} is not injective"
    left = amalgam.psi_B.after(span.phi_B).map
    right = amalgam.psi_C.after(span.phi_C).map
    for x in range(span.apex.size):
        if left[x] != right[x]:
            return f"square does not commute at apex element {x}"
    if strong:
        common = amalgam.psi_B.image() & amalgam.psi_C.image()
        if common != frozenset(left):
            extra = sorted(common - frozenset(left))
            return f"images of B and C also meet outside the apex (at {extra})"
    return None


def validate_amalgam(span: Span, amalgam: Amalgam, strong: bool = False) -> bool:
    """True iff both legs are embeddings into one algebra and the square commutes.

    With ``strong`` the images of the legs must intersect exactly in the image
    of the apex.
    """
    return amalgam_violation(span, amalgam, strong) is None
