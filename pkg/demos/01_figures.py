"""Rebuild the four example spans from their partial tables and draw them.

Each algebra file lists only a handful of products plus which elements are
central and idempotent; the solver fills in the rest and there is exactly
one way to do it.
"""

from reslat.algebra import check_axioms, predicate_profile
from reslat.completion import complete_partial_product
from reslat.fixtures import SPAN_ALGEBRAS, fixture_path
from reslat.hasse import render_hasse
from reslat.io import read_spec

for span, names in SPAN_ALGEBRAS.items():
    print(f"== span {span}")
    for name in names:
        spec = read_spec(fixture_path(name))
        known = len(spec.product_constraints)
        [alg] = complete_partial_product(spec, limit=2)
        props = [k for k, v in predicate_profile(alg).items() if v]
        print(f"{name}: {known} products given, {alg.size * alg.size} filled, axioms ok={check_axioms(alg).passed}")
        print("  properties:", ", ".join(props))
        print(render_hasse(alg))
