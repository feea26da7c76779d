"""Replay the four derivation certificates and show what breaks them."""

from reslat.certificates import Certificate, Step, bundled_certificates, check_certificate

for cert in bundled_certificates():
    g = cert.goal
    print(f"{cert.name}: {check_certificate(cert)}; derives {g.left} = {g.right} in {g.algebra}, flags {list(cert.flags)}")

thm1, thm4 = bundled_certificates()[0], bundled_certificates()[3]

# the distributive step needs its flag
print("thm4 without flags:", check_certificate(thm4, flags=()))

# a wrong product value is caught where it is claimed
steps = list(thm1.steps)
steps[5] = Step("(* c b) = b", steps[5].rule, steps[5].premises)
bad = Certificate(thm1.name, thm1.span_ref, thm1.flags, steps, thm1.goal, thm1.span)
print("thm1 with (* c b) = b:", check_certificate(bad))

# no step is redundant
for cert in bundled_certificates():
    survivors = [k for k in range(len(cert.steps)) if check_certificate(cert.without_step(k)).ok]
    print(f"{cert.name}: {len(cert.steps)} deletions, {len(survivors)} still valid")
