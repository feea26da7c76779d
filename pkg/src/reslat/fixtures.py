"""The bundled example algebras, spans and certificates, plus a self-check."""

from __future__ import annotations

import time
from pathlib import Path

from .algebra import check_axioms, is_central_element, is_idempotent_element, predicate_profile
from .certificates import check_certificate, load_certificate
from .io import algebra_from_spec, load_span, read_spec, serialize_spec
from .completion import complete_partial_product

FIXTURE_DIR = Path(__file__).parent / "fixtures"

ALGEBRAS = (
    "fig1_A",
    "fig1_B",
    "fig1_C",
    "fig2_A",
    "fig2_B",
    "fig2_C",
    "fig3_A",
    "fig3_B",
    "fig3_C",
    "fig4_B",
    "fig4_C",
)
SPANS = ("fig1", "fig2", "fig3", "fig4")
CERTIFICATES = ("thm1", "thm2", "thm3", "thm4")

# algebras of each span, and the predicates every one of them must satisfy
SPAN_ALGEBRAS = {
    "fig1": ("fig1_A", "fig1_B", "fig1_C"),
    "fig2": ("fig2_A", "fig2_B", "fig2_C"),
    "fig3": ("fig3_A", "fig3_B", "fig3_C"),
    "fig4": ("fig1_A", "fig4_B", "fig4_C"),
}
EXPECTED_PREDICATES = {
    "fig1": {"idempotent": True},
    "fig2": {"odd": True, "cyclic": True, "involutive": True},
    "fig3": {"integral": True, "commutative": True, "distributive": True},
    "fig4": {"commutative": True, "distributive": True, "idempotent": True},
}
# variety in which each span is claimed not to amalgamate, and the search bound used
SPAN_FLAGS = {
    "fig1": (),
    "fig2": ("involutive",),
    "fig3": ("distributive",),
    "fig4": ("distributive", "idempotent"),
}
SPAN_BOUNDS = {"fig1": 8, "fig2": 8, "fig3": 8, "fig4": 8}


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture by short name (``fig1_A``, ``fig1``, ``thm1``, ...)."""
    for suffix in (".alg.json", ".span.json", ".cert.json"):
        p = FIXTURE_DIR / f"{name}{suffix}"
        if p.exists():
            return p
    raise KeyError(f"no fixture named {name!r}")


def load_fixture_algebra(name: str):
    return algebra_from_spec(read_spec(fixture_path(name)))


def load_fixture_span(name: str):
    return load_span(fixture_path(name))


def verify_fixtures() -> dict:
    """Check every fixture; the report has one entry per algebra, span and certificate."""
    t0 = time.perf_counter()
    report = {"algebras": {}, "spans": {}, "certificates": {}}
    owner = {a: s for s, algs in SPAN_ALGEBRAS.items() for a in algs}
    for name in ALGEBRAS:
        path = fixture_path(name)
        spec = read_spec(path)
        entry = {"completions": 0, "axioms": False, "predicates": False, "markers": False, "round_trip": False}
        entry["round_trip"] = serialize_spec(spec) == path.read_text()
        found = complete_partial_product(spec, limit=2)
        entry["completions"] = len(found)
        if len(found) == 1:
            alg = found[0]
            entry["axioms"] = check_axioms(alg).passed
            expected = dict(EXPECTED_PREDICATES[owner[name]])
            for s, algs in SPAN_ALGEBRAS.items():
                if name in algs:
                    expected.update(EXPECTED_PREDICATES[s])
            prof = predicate_profile(alg)
            entry["profile"] = prof
            entry["predicates"] = all(prof[k] == v for k, v in expected.items())
            entry["markers"] = all(
                is_central_element(alg, i) == (i in spec.central)
                and is_idempotent_element(alg, i) == (i in spec.idempotent_elements)
                for i in range(alg.size)
            )
        entry["passed"] = entry["completions"] == 1 and entry["axioms"] and entry["predicates"] and entry["markers"] and entry["round_trip"]
        report["algebras"][name] = entry
    for name in SPANS:
        try:
            load_fixture_span(name).validate()
            report["spans"][name] = {"valid": True}
        except Exception as exc:  # reported, not raised
            report["spans"][name] = {"valid": False, "error": str(exc)}
    for name in CERTIFICATES:
        cert = load_certificate(fixture_path(name))
        res = check_certificate(cert)
        report["certificates"][name] = {"valid": res.ok, "result": str(res)}
    report["passed"] = (
        all(e["passed"] for e in report["algebras"].values())
        and all(e["valid"] for e in report["spans"].values())
        and all(e["valid"] for e in report["certificates"].values())
    )
    report["seconds"] = round(time.perf_counter() - t0, 3)
    return report
