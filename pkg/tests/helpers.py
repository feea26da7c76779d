"""Small independent evaluators shared by the tests."""

import itertools

from reslat.enumeration import enumerate_algebras


def residuation_holds(alg) -> bool:
    """x*y <= z  iff  y <= x\\z  iff  x <= z/y, for all triples."""
    n, leq = alg.size, alg.leq
    for x, y, z in itertools.product(range(n), repeat=3):
        a = leq[alg.prod[x][y]][z]
        if a != leq[y][alg.lres[x][z]] or a != leq[x][alg.rres[z][y]]:
            return False
    return True


def evaluate(alg, term):
    """Value of a parsed certificate term in a single algebra (leaves are ("g", (tag, index)))."""
    if term[0] == "g":
        return term[1][1]
    a, b = evaluate(alg, term[1]), evaluate(alg, term[2])
    return {"*": alg.prod, "join": alg.join, "meet": alg.meet}[term[0]][a][b]


def holds(alg, claim) -> bool:
    rel, s, t = claim
    a, b = evaluate(alg, s), evaluate(alg, t)
    return a == b if rel == "=" else alg.leq[a][b]


_ALGS = {}


def small_algebras(max_size=4, flags=None):
    key = (max_size, flags)
    if key not in _ALGS:
        _ALGS[key] = [a for n in range(1, max_size + 1) for a in enumerate_algebras(n, flags)]
    return _ALGS[key]
