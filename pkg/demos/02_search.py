"""Bounded amalgam search on the example spans and on a few spans that do amalgamate."""

import time

from reslat.fixtures import load_fixture_algebra, load_fixture_span
from reslat.hasse import render_hasse
from reslat.morphisms import Span, enumerate_embeddings, identity_span
from reslat.search import search_amalgam

# the easy direction first: a span whose legs coincide
a = load_fixture_algebra("fig1_A")
res = search_amalgam(identity_span(a), max_size=3)
print("identity span of the 3-chain:", res.status, "at size", res.size)

# two different legs that do fit together, in 7 elements
b, c = load_fixture_algebra("fig1_B"), load_fixture_algebra("fig4_C")
span = Span.from_maps(a, b, c, (0, 1, 4), enumerate_embeddings(a, c)[0].map)
res = search_amalgam(span, max_size=7)
print("fig1_B with fig4_C over the chain:", res.status, "at size", res.size)
print(render_hasse(res.amalgam.target))

# the example spans: nothing up to the bound
for name, flags in (("fig1", ()), ("fig2", ("involutive",)), ("fig3", ("distributive",)),
                    ("fig4", ("distributive", "idempotent"))):
    t0 = time.perf_counter()
    res = search_amalgam(load_fixture_span(name), flags, max_size=8)
    print(f"{name} {list(flags)}: {res.status} up to {res.bound}, {res.stats.nodes} nodes, "
          f"{time.perf_counter() - t0:.1f}s")
