"""Exhaustive instantiation of every certificate rule over one algebra.

Each instance is (rule, premise claims, claim).  Instances are generated from
the rule schemas independently of the checker; the sweep then asks the checker
whether it accepts the step, and evaluates premises and conclusion directly.
"""

import itertools

from reslat.certificates import RULES, Signature, _Reject, check_step
from reslat.morphisms import identity_span

from helpers import holds

OPS = ("*", "join", "meet")


def _instances(gens, terms, unit):
    P = lambda a, b: ("*", a, b)
    J = lambda a, b: ("join", a, b)
    M = lambda a, b: ("meet", a, b)
    pairs = list(itertools.product(terms, repeat=2))
    triples_g = list(itertools.product(gens, repeat=3))
    for s in terms:
        yield "EQ-REFL", [], ("=", s, s)
        yield "LEQ-REFL", [], ("<=", s, s)
    for s, t in pairs:
        for rel in ("=", "<="):
            yield "GROUND-FACT", [], (rel, s, t)
        yield "EQ-SYM", [("=", s, t)], ("=", t, s)
        yield "EQ-TO-LEQ", [("=", s, t)], ("<=", s, t)
        yield "EQ-TO-LEQ", [("=", s, t)], ("<=", t, s)
        yield "ANTISYM", [("<=", s, t), ("<=", t, s)], ("=", s, t)
    for s, t, u in itertools.product(terms, repeat=3):
        yield "EQ-TRANS", [("=", s, t), ("=", t, u)], ("=", s, u)
        yield "EQ-TRANS", [("=", t, s), ("=", t, u)], ("=", s, u)
        yield "LEQ-TRANS", [("<=", s, t), ("<=", t, u)], ("<=", s, u)
        yield "LEQ-TRANS", [("=", t, s), ("<=", t, u)], ("<=", s, u)
    for x, y, z in triples_g:
        yield "ASSOC", [], ("=", P(P(x, y), z), P(x, P(y, z)))
        yield "PROD-JOIN-DIST", [], ("=", P(x, J(y, z)), J(P(x, y), P(x, z)))
        yield "PROD-JOIN-DIST", [], ("=", P(J(y, z), x), J(P(y, x), P(z, x)))
        yield "MEET-JOIN-DIST", [], ("=", M(x, J(y, z)), J(M(x, y), M(x, z)))
        yield "JOIN-LUB", [("<=", x, z), ("<=", y, z)], ("<=", J(x, y), z)
        yield "MEET-GLB", [("<=", z, x), ("<=", z, y)], ("<=", z, M(x, y))
        yield "PROD-MONO", [("<=", x, y)], ("<=", P(z, x), P(z, y))
        yield "PROD-MONO", [("<=", x, y)], ("<=", P(x, z), P(y, z))
    for x, y in itertools.product(gens, repeat=2):
        yield "JOIN-UB", [], ("<=", x, J(x, y))
        yield "JOIN-UB", [], ("<=", y, J(x, y))
        yield "MEET-LB", [], ("<=", M(x, y), x)
        yield "MEET-LB", [], ("<=", M(x, y), y)
    for x in gens:
        yield "UNIT", [], ("=", P(unit, x), x)
        yield "UNIT", [], ("=", P(x, unit), x)
    for u, v in pairs:
        for op in OPS:
            for w in gens:
                yield "CONGRUENCE", [("=", u, v)], ("=", (op, w, u), (op, w, v))
                yield "CONGRUENCE", [("=", u, v)], ("=", (op, u, w), (op, v, w))


def sweep(alg, flags=()):
    """Returns (accepted counts per rule, list of unsound instances)."""
    sig = Signature(identity_span(alg))
    gens = [("g", ("A", i)) for i in range(alg.size)]
    terms = gens + [("*", a, b) for a in gens for b in gens]
    unit = ("g", ("A", alg.unit))
    accepted = dict.fromkeys(RULES, 0)
    bad = []
    for rule, prem, claim in _instances(gens, terms, unit):
        if rule == "MEET-JOIN-DIST" and "distributive" not in flags:
            continue
        if not all(holds(alg, p) for p in prem):
            continue
        try:
            check_step(sig, claim, rule, prem, {}, flags)
        except _Reject:
            continue
        accepted[rule] += 1
        if not holds(alg, claim):
            bad.append((rule, prem, claim))
    return accepted, bad
