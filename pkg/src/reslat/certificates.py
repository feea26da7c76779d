"""Ground derivation certificates over the free extension of a span.

A certificate is a list of steps, each claiming ``s = t`` or ``s <= t``
between ground terms and naming the rule that justifies it.  Terms are
written in prefix notation, e.g. ``(* c (join 1 d))``; the operations are
``*``, ``join`` and ``meet``, and the leaves are element names of the span's
legs (an apex element has the same name in both legs).  All rules are sound
in every residuated lattice containing both legs as subalgebras, except
``MEET-JOIN-DIST`` which needs the ``distributive`` flag.

The certificate proves the span has no amalgam in the variety when its goal,
an equality between two distinct elements of one source algebra, is derived.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .errors import FormatError, MalformedInstantiation, UnknownGenerator, UnknownRule
from .morphisms import Span

OPS = ("*", "join", "meet")
RULES = (
    "GROUND-FACT",
    "EQ-REFL",
    "EQ-SYM",
    "EQ-TRANS",
    "LEQ-REFL",
    "LEQ-TRANS",
    "ANTISYM",
    "EQ-TO-LEQ",
    "CONGRUENCE",
    "ASSOC",
    "UNIT",
    "PROD-JOIN-DIST",
    "PROD-MONO",
    "JOIN-UB",
    "JOIN-LUB",
    "MEET-LB",
    "MEET-GLB",
    "MEET-JOIN-DIST",
)

# a term is ("g", node) or (op, left, right); a node is ("A"|"B"|"C", index)
Term = tuple


# -- names and parsing --------------------------------------------------------------


class Signature:
    """Generator names of a span: apex elements once, then the rest of each leg."""

    def __init__(self, span: Span):
        self.span = span
        self.nodes: dict[str, tuple[str, int]] = {}
        self.names: dict[tuple[str, int], str] = {}
        apex_b = {v: x for x, v in enumerate(span.phi_B.map)}
        apex_c = {v: x for x, v in enumerate(span.phi_C.map)}
        for x in range(span.apex.size):
            self._add(span.left.label(span.phi_B(x)), ("A", x))
            self._add(span.right.label(span.phi_C(x)), ("A", x))
        for i in range(span.left.size):
            if i not in apex_b:
                self._add(span.left.label(i), ("B", i))
        for j in range(span.right.size):
            if j not in apex_c:
                self._add(span.right.label(j), ("C", j))
        self.unit = ("A", span.apex.unit)

    def _add(self, name, node):
        old = self.nodes.get(name)
        if old is not None and old != node:
            raise FormatError(f"element name {name!r} denotes different elements of the two legs")
        self.nodes[name] = node
        self.names.setdefault(node, name)

    def node(self, name: str) -> tuple[str, int]:
        try:
            return self.nodes[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def algebra(self, tag: str):
        return {"A": self.span.apex, "B": self.span.left, "C": self.span.right}[tag]

    def index_in(self, node, tag: str) -> int | None:
        """Index of ``node`` in the algebra ``tag`` (None if it does not live there)."""
        kind, i = node
        if kind == tag:
            return i
        if kind != "A":
            return None
        if tag == "B":
            return self.span.phi_B(i)
        if tag == "C":
            return self.span.phi_C(i)
        return None


def _tokens(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse_term(tokens: list[str], pos: int, sig: Signature) -> tuple[Term, int]:
    if pos >= len(tokens):
        raise MalformedInstantiation("term ends early")
    tok = tokens[pos]
    if tok == "(":
        if pos + 1 >= len(tokens) or tokens[pos + 1] not in OPS:
            raise MalformedInstantiation(f"expected an operation after '(' (one of {', '.join(OPS)})")
        op = tokens[pos + 1]
        left, pos = _parse_term(tokens, pos + 2, sig)
        right, pos = _parse_term(tokens, pos, sig)
        if pos >= len(tokens) or tokens[pos] != ")":
            raise MalformedInstantiation(f"operation {op} takes exactly two arguments")
        return (op, left, right), pos + 1
    if tok == ")" or tok in ("=", "<="):
        raise MalformedInstantiation(f"unexpected {tok!r}")
    return ("g", sig.node(tok)), pos + 1


def parse_term(text: str, sig: Signature) -> Term:
    toks = _tokens(text)
    term, pos = _parse_term(toks, 0, sig)
    if pos != len(toks):
        raise MalformedInstantiation(f"trailing tokens in term {text!r}")
    return term


def parse_claim(text: str, sig: Signature) -> tuple[str, Term, Term]:
    """``"s = t"`` or ``"s <= t"`` as ``(rel, s, t)``."""
    if not isinstance(text, str):
        raise MalformedInstantiation("claim must be a string")
    toks = _tokens(text)
    lhs, pos = _parse_term(toks, 0, sig)
    if pos >= len(toks) or toks[pos] not in ("=", "<="):
        raise MalformedInstantiation(f"claim {text!r} needs '=' or '<=' between two terms")
    rel = toks[pos]
    rhs, end = _parse_term(toks, pos + 1, sig)
    if end != len(toks):
        raise MalformedInstantiation(f"trailing tokens in claim {text!r}")
    return rel, lhs, rhs


def term_text(term: Term, sig: Signature) -> str:
    if term[0] == "g":
        return sig.names[term[1]]
    return f"({term[0]} {term_text(term[1], sig)} {term_text(term[2], sig)})"


def claim_text(claim, sig: Signature) -> str:
    rel, s, t = claim
    return f"{term_text(s, sig)} {rel} {term_text(t, sig)}"


# -- certificates -----------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    claim: str
    rule: str
    premises: tuple[int, ...] = ()
    terms: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Goal:
    algebra: str  # "A", "B" or "C"
    left: str
    right: str


@dataclass
class Certificate:
    name: str
    span_ref: str
    flags: tuple[str, ...]
    steps: list[Step]
    goal: Goal
    span: Span | None = None

    def without_step(self, k: int) -> "Certificate":
        """Delete step ``k``; later references shift down, references to ``k`` are dropped."""
        steps = []
        for i, s in enumerate(self.steps):
            if i == k:
                continue
            prem = tuple(p - 1 if p > k else p for p in s.premises if p != k)
            steps.append(Step(s.claim, s.rule, prem, dict(s.terms)))
        return Certificate(self.name, self.span_ref, self.flags, steps, self.goal, self.span)


@dataclass(frozen=True)
class Valid:
    steps: int

    ok = True

    def __str__(self) -> str:
        return f"Valid ({self.steps} steps)"


@dataclass(frozen=True)
class InvalidStep:
    index: int
    reason: str

    ok = False

    def __str__(self) -> str:
        return f"InvalidStep({self.index}): {self.reason}"


class _Reject(Exception):
    pass


# -- rules ---------------------------------------------------------------------------


def _is_op(t, op):
    return t[0] == op


def _depth_le1(t) -> bool:
    return t[0] == "g" or (t[1][0] == "g" and t[2][0] == "g")


def _eval_in(sig: Signature, tag: str, t) -> int | None:
    if t[0] == "g":
        return sig.index_in(t[1], tag)
    a, b = _eval_in(sig, tag, t[1]), _eval_in(sig, tag, t[2])
    if a is None or b is None:
        return None
    alg = sig.algebra(tag)
    table = {"*": alg.prod, "join": alg.join, "meet": alg.meet}[t[0]]
    return table[a][b]


def _ground(sig, claim, terms):
    rel, s, t = claim
    if not (_depth_le1(s) and _depth_le1(t)):
        raise _Reject("ground facts relate table entries (terms of depth at most one)")
    tags = [terms["algebra"]] if "algebra" in terms else ["B", "C"]
    for tag in tags:
        a, b = _eval_in(sig, tag, s), _eval_in(sig, tag, t)
        if a is None or b is None:
            continue
        leq = sig.algebra(tag).leq
        if (a == b) if rel == "=" else leq[a][b]:
            return
        raise _Reject(f"false in {tag}")
    raise _Reject("terms do not live in a single source algebra")


def _chain(start, end, links, allow_leq):
    """Follow premises from start to end; equalities may be read either way."""
    cur = start
    for rel, l, r in links:
        if l == cur:
            cur = r
        elif r == cur and rel == "=":
            cur = l
        else:
            raise _Reject("premises do not form a chain from the left side to the right side")
        if rel == "<=" and not allow_leq:
            raise _Reject("an equality chain cannot use an inequality premise")
    if cur != end:
        raise _Reject("chain does not end at the right side")


def _find_rewrite(s, t):
    """The unique position where s and t differ, as (path, s_sub, t_sub)."""
    if s == t:
        return None
    if s[0] != "g" and s[0] == t[0]:
        dl = _find_rewrite(s[1], t[1])
        dr = _find_rewrite(s[2], t[2])
        if dl is not None and dr is None:
            return ((1,) + dl[0], dl[1], dl[2])
        if dr is not None and dl is None:
            return ((2,) + dr[0], dr[1], dr[2])
    return ((), s, t)


def _subterm(t, path):
    for k in path:
        if t[0] == "g":
            return None
        t = t[k]
    return t


def _replace(t, path, new):
    if not path:
        return new
    k = path[0]
    kids = [t[1], t[2]]
    kids[k - 1] = _replace(kids[k - 1], path[1:], new)
    return (t[0], kids[0], kids[1])


def _congruence(claim, prem, terms):
    rel, s, t = claim
    prel, u, v = prem[0]
    if prel != "=":
        raise _Reject("congruence rewrites with an equality")
    if "path" in terms:
        path = tuple(terms["path"])
        sub = _subterm(s, path)
        if sub is None:
            raise _Reject("path does not address a subterm of the left side")
        for a, b in ((u, v), (v, u)):
            if sub == a and _replace(s, path, b) == t:
                return
        raise _Reject("rewriting at the given path does not produce the right side")
    diff = _find_rewrite(s, t)
    if diff is None:
        raise _Reject("both sides are identical (use EQ-REFL or LEQ-REFL)")
    _, a, b = diff
    if {a, b} != {u, v} or (a == b):
        raise _Reject("sides differ by something other than one rewrite with the premise")


def _pair(prem, a, b) -> bool:
    return list(prem) in ([a, b], [b, a])


def _is_unit(sig, t):
    return t == ("g", sig.unit)


def _sides(claim):
    rel, s, t = claim
    return [(s, t), (t, s)]


def check_step(sig: Signature, claim, rule: str, prem: Sequence, terms: dict, flags: Sequence[str]) -> None:
    """Raise ``_Reject`` unless ``rule`` derives ``claim`` from the premise claims."""
    rel, s, t = claim
    arity = {
        "GROUND-FACT": 0,
        "EQ-REFL": 0,
        "EQ-SYM": 1,
        "LEQ-REFL": 0,
        "ANTISYM": 2,
        "EQ-TO-LEQ": 1,
        "CONGRUENCE": 1,
        "ASSOC": 0,
        "UNIT": 0,
        "PROD-JOIN-DIST": 0,
        "PROD-MONO": 1,
        "JOIN-UB": 0,
        "JOIN-LUB": 2,
        "MEET-LB": 0,
        "MEET-GLB": 2,
        "MEET-JOIN-DIST": 0,
    }
    if rule in arity and len(prem) != arity[rule]:
        raise _Reject(f"{rule} takes {arity[rule]} premise(s), got {len(prem)}")

    def need(cond, why):
        if not cond:
            raise _Reject(why)

    if rule == "GROUND-FACT":
        _ground(sig, claim, terms)
    elif rule in ("EQ-REFL", "LEQ-REFL"):
        need(rel == ("=" if rule == "EQ-REFL" else "<="), f"{rule} has the wrong relation")
        need(s == t, "sides differ")
    elif rule == "EQ-SYM":
        need(rel == "=" and prem[0] == ("=", t, s), "claim is not the premise reversed")
    elif rule in ("EQ-TRANS", "LEQ-TRANS"):
        need(len(prem) >= 2, f"{rule} needs at least two premises")
        need(rel == ("=" if rule == "EQ-TRANS" else "<="), f"{rule} has the wrong relation")
        _chain(s, t, prem, allow_leq=rule == "LEQ-TRANS")
    elif rule == "ANTISYM":
        need(rel == "=", "ANTISYM concludes an equality")
        need(_pair(prem, ("<=", s, t), ("<=", t, s)), "premises are not s <= t and t <= s")
    elif rule == "EQ-TO-LEQ":
        need(rel == "<=" and prem[0][0] == "=", "EQ-TO-LEQ turns an equality into an inequality")
        need(prem[0][1:] in ((s, t), (t, s)), "claim does not match the premise")
    elif rule == "CONGRUENCE":
        need(rel == "=", "CONGRUENCE concludes an equality")
        _congruence(claim, prem, terms)
    elif rule == "ASSOC":
        need(rel == "=", "ASSOC concludes an equality")
        ok = False
        for a, b in _sides(claim):
            if _is_op(a, "*") and _is_op(a[1], "*"):
                x, y, z = a[1][1], a[1][2], a[2]
                ok |= b == ("*", x, ("*", y, z))
        need(ok, "not an instance of (x*y)*z = x*(y*z)")
    elif rule == "UNIT":
        need(rel == "=", "UNIT concludes an equality")
        ok = False
        for a, b in _sides(claim):
            if _is_op(a, "*"):
                ok |= (_is_unit(sig, a[1]) and a[2] == b) or (_is_unit(sig, a[2]) and a[1] == b)
        need(ok, "not an instance of 1*s = s or s*1 = s")
    elif rule == "PROD-JOIN-DIST":
        need(rel == "=", "PROD-JOIN-DIST concludes an equality")
        ok = False
        for a, b in _sides(claim):
            if _is_op(a, "*") and _is_op(a[2], "join"):
                u, x, y = a[1], a[2][1], a[2][2]
                ok |= b == ("join", ("*", u, x), ("*", u, y))
            if _is_op(a, "*") and _is_op(a[1], "join"):
                u, x, y = a[2], a[1][1], a[1][2]
                ok |= b == ("join", ("*", x, u), ("*", y, u))
        need(ok, "not an instance of u(s v t) = us v ut or (s v t)u = su v tu")
    elif rule == "PROD-MONO":
        need(rel == "<=" and prem[0][0] == "<=", "PROD-MONO maps an inequality to an inequality")
        _, x, y = prem[0]
        ok = _is_op(s, "*") and _is_op(t, "*") and (
            (s[1] == t[1] and (s[2], t[2]) == (x, y)) or (s[2] == t[2] and (s[1], t[1]) == (x, y))
        )
        need(ok, "claim is not the premise multiplied on one side by the same term")
    elif rule in ("JOIN-UB", "MEET-LB"):
        need(rel == "<=", f"{rule} concludes an inequality")
        if rule == "JOIN-UB":
            need(_is_op(t, "join") and s in (t[1], t[2]), "not an instance of s <= s v t")
        else:
            need(_is_op(s, "meet") and t in (s[1], s[2]), "not an instance of s ^ t <= s")
    elif rule == "JOIN-LUB":
        need(rel == "<=" and _is_op(s, "join"), "JOIN-LUB concludes (s v t) <= u")
        need(_pair(prem, ("<=", s[1], t), ("<=", s[2], t)), "premises are not s <= u and t <= u")
    elif rule == "MEET-GLB":
        need(rel == "<=" and _is_op(t, "meet"), "MEET-GLB concludes u <= (s ^ t)")
        need(_pair(prem, ("<=", s, t[1]), ("<=", s, t[2])), "premises are not u <= s and u <= t")
    elif rule == "MEET-JOIN-DIST":
        need("distributive" in flags, "MEET-JOIN-DIST needs the distributive flag")
        need(rel == "=", "MEET-JOIN-DIST concludes an equality")
        ok = False
        for a, b in _sides(claim):
            if _is_op(a, "meet") and _is_op(a[2], "join"):
                x, y, z = a[1], a[2][1], a[2][2]
                ok |= b == ("join", ("meet", x, y), ("meet", x, z))
        need(ok, "not an instance of s ^ (t v u) = (s ^ t) v (s ^ u)")
    else:
        raise UnknownRule(f"unknown rule {rule!r}")


_TERM_KEYS = {"GROUND-FACT": {"algebra"}, "CONGRUENCE": {"path"}}


def _check_terms(rule, terms, sig):
    if not isinstance(terms, dict):
        raise MalformedInstantiation("terms must be an object")
    extra = set(terms) - _TERM_KEYS.get(rule, set())
    if extra:
        raise MalformedInstantiation(f"{rule} does not take instantiation field {sorted(extra)[0]!r}")
    if "algebra" in terms and terms["algebra"] not in ("A", "B", "C"):
        raise MalformedInstantiation("algebra must be A, B or C")
    if "path" in terms:
        p = terms["path"]
        if not isinstance(p, list) or any(k not in (1, 2) for k in p):
            raise MalformedInstantiation("path must be a list of argument positions 1 or 2")


def check_certificate(cert: Certificate, span: Span | None = None, flags: Sequence[str] | None = None):
    """``Valid`` if every step is justified and the goal is derived, else ``InvalidStep``.

    ``span`` and ``flags`` default to the ones recorded in the certificate.
    Raises UnknownGenerator, UnknownRule or MalformedInstantiation for
    certificates that do not even parse against the span.
    """
    span = span or cert.span
    if span is None:
        raise ValueError("certificate has no span attached")
    flags = tuple(cert.flags if flags is None else flags)
    sig = Signature(span)
    claims = []
    for i, step in enumerate(cert.steps):
        if step.rule not in RULES:
            raise UnknownRule(f"step {i}: unknown rule {step.rule!r}")
        _check_terms(step.rule, step.terms, sig)
        claim = parse_claim(step.claim, sig)
        claims.append(claim)
        prem = []
        for p in step.premises:
            if not isinstance(p, int) or isinstance(p, bool):
                raise MalformedInstantiation(f"step {i}: premises must be step indices")
            if not 0 <= p < i:
                return InvalidStep(i, f"premise {p} does not precede the step")
            prem.append(claims[p])
        try:
            check_step(sig, claim, step.rule, prem, step.terms, flags)
        except _Reject as exc:
            return InvalidStep(i, f"{step.rule}: {exc}")
    g = cert.goal
    end = len(cert.steps)
    if g.algebra not in ("A", "B", "C"):
        raise MalformedInstantiation("goal algebra must be A, B or C")
    left, right = sig.node(g.left), sig.node(g.right)
    li, ri = sig.index_in(left, g.algebra), sig.index_in(right, g.algebra)
    if li is None or ri is None:
        return InvalidStep(end, f"goal elements are not both in {g.algebra}")
    if li == ri:
        return InvalidStep(end, f"goal elements are equal in {g.algebra}; no contradiction")
    target = {("=", ("g", left), ("g", right)), ("=", ("g", right), ("g", left))}
    if not any(c in target for c in claims):
        return InvalidStep(end, "goal not derived")
    return Valid(end)


# -- files ----------------------------------------------------------------------------


def certificate_from_dict(data: dict, what: str = "certificate") -> Certificate:
    if not isinstance(data, dict):
        raise FormatError(f"{what}: top level must be an object")
    for key in ("span", "steps", "goal"):
        if key not in data:
            raise FormatError(f"{what}: missing field '{key}'")
    unknown = set(data) - {"name", "span", "flags", "steps", "goal"}
    if unknown:
        raise FormatError(f"{what}: unknown field '{sorted(unknown)[0]}'")
    steps = []
    if not isinstance(data["steps"], list):
        raise FormatError(f"{what}: field 'steps' must be a list")
    for i, s in enumerate(data["steps"]):
        if not isinstance(s, dict) or "claim" not in s or "rule" not in s:
            raise FormatError(f"{what}: step {i} needs 'claim' and 'rule'")
        prem = s.get("premises", [])
        if not isinstance(prem, list):
            raise FormatError(f"{what}: step {i} field 'premises' must be a list")
        steps.append(Step(s["claim"], s["rule"], tuple(prem), dict(s.get("terms", {}))))
    g = data["goal"]
    if not isinstance(g, dict) or set(g) != {"algebra", "left", "right"}:
        raise FormatError(f"{what}: field 'goal' needs exactly 'algebra', 'left', 'right'")
    flags = data.get("flags", [])
    if not isinstance(flags, list):
        raise FormatError(f"{what}: field 'flags' must be a list")
    return Certificate(data.get("name", ""), data["span"], tuple(flags), steps, Goal(g["algebra"], g["left"], g["right"]))


def certificate_to_dict(cert: Certificate) -> dict[str, Any]:
    steps = []
    for s in cert.steps:
        row: dict[str, Any] = {"claim": s.claim, "rule": s.rule, "premises": list(s.premises)}
        if s.terms:
            row["terms"] = dict(s.terms)
        steps.append(row)
    return {
        "name": cert.name,
        "span": cert.span_ref,
        "flags": list(cert.flags),
        "goal": {"algebra": cert.goal.algebra, "left": cert.goal.left, "right": cert.goal.right},
        "steps": steps,
    }


def serialize_certificate(cert: Certificate) -> str:
    d = certificate_to_dict(cert)
    head = {k: v for k, v in d.items() if k != "steps"}
    lines = [f"  {json.dumps(k)}: {json.dumps(v)}," for k, v in head.items()]
    rows = ",\n".join("    " + json.dumps(s) for s in d["steps"])
    return "{\n" + "\n".join(lines) + '\n  "steps": [\n' + rows + "\n  ]\n}\n"


def load_certificate(path, span: Span | None = None) -> Certificate:
    """Read a certificate file; its span reference is resolved relative to the file."""
    from .io import load_span

    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    cert = certificate_from_dict(data, str(path))
    cert.span = span if span is not None else load_span(path.parent / cert.span_ref)
    return cert


def bundled_certificates() -> list[Certificate]:
    """The four shipped certificates, with their spans attached."""
    from .fixtures import CERTIFICATES, fixture_path

    return [load_certificate(fixture_path(name)) for name in CERTIFICATES]
