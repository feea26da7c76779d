"""Search every span of tiny algebras for one that resists amalgamation.

With a one-element apex and legs of at most three elements every span
amalgamates.  At four-element legs some spans need more room than the
search bound gives them; searching those again with |B||C| elements
finds an amalgam.
"""

from reslat.enumeration import _span_rows, generate_candidate_spans
from reslat.search import VarietyConstraints, search_amalgam

for leg_max in (2, 3):
    res = generate_candidate_spans(1, leg_max, search_bound=6)
    print(f"apex 1, legs <= {leg_max}: {res['processed']} spans, {len(res['candidates'])} candidates")

res = generate_candidate_spans(1, 4, search_bound=6, limit=100)
print(f"apex 1, legs <= 4 (first 100): {len(res['candidates'])} candidates at bound 6")
rows = {(k[0], k[1], tuple(k[2]), k[3], tuple(k[4])): s for k, s in _span_rows(1, 4, VarietyConstraints(), 10**6)}
for c in res["candidates"][:5]:
    span = rows[(c["apex"], c["left"], tuple(c["phi_B"]), c["right"], tuple(c["phi_C"]))]
    out = search_amalgam(span, max_size=span.left.size * span.right.size)
    print(f"  {c['left']} + {c['right']}: {out.status} at size {out.size}")
