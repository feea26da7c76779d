"""Command-line entry point: ``reslat <command> ...``.

Every command prints a short human summary (or, with ``--json``, only the
machine-readable run report) and can write the report to ``--report FILE``.
Exit status 2 means the input could not be parsed or validated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .algebra import check_axioms, predicate_profile
from .certificates import check_certificate, load_certificate
from .completion import complete_partial_product
from .enumeration import enumerate_algebras, generate_candidate_spans
from .errors import InconsistentSpec, ReslatError
from .fixtures import verify_fixtures
from .hasse import render_hasse
from .io import algebra_from_spec, load_algebra, load_span, read_spec, report_dumps, run_report, serialize_algebra
from .morphisms import enumerate_embeddings
from .search import FOUND, NONE_UP_TO_BOUND, search_amalgam, search_amalgam_unrestricted_square

EXIT_FOUND, EXIT_NONE, EXIT_BUDGET, EXIT_INPUT = 0, 10, 20, 2
STATUS_EXIT = {FOUND: EXIT_FOUND, NONE_UP_TO_BOUND: EXIT_NONE}
DEFAULT_BUDGET = int(os.environ.get("RESLAT_BUDGET", "10000000"))


def _flags(text):
    return [f for f in (text or "").split(",") if f.strip()]


def cmd_check(args):
    spec = read_spec(args.file)
    alg = algebra_from_spec(spec)
    rep = check_axioms(alg)
    prof = predicate_profile(alg)
    lines = [render_hasse(alg).rstrip(), "axioms: " + ("ok" if rep.passed else "FAILED " + ", ".join(rep.names()))]
    lines.append("properties: " + ", ".join(k for k, v in prof.items() if v))
    outcome = "pass" if rep.passed else "fail"
    report = run_report("check", [args.file], outcome, {}, profile=prof, violations=[str(v) for v in rep.violations])
    return (0 if rep.passed else 1), report, lines


def cmd_complete(args):
    spec = read_spec(args.file)
    try:
        found = complete_partial_product(spec, limit=args.limit)
    except InconsistentSpec as exc:
        found, note = [], str(exc)
    else:
        note = None
    lines = [f"{len(found)} completion(s)" + (" (limit reached)" if len(found) == args.limit else "")]
    if note:
        lines.append(note)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for k, alg in enumerate(found):
            (out / f"completion_{k}.alg.json").write_text(serialize_algebra(alg))
    for alg in found[:3]:
        lines.append(render_hasse(alg).rstrip())
    report = run_report("complete", [args.file], "found" if found else "none", {"completions": len(found)})
    return (0 if found else 1), report, lines


def cmd_embed(args):
    a, b = load_algebra(args.source), load_algebra(args.target)
    embs = enumerate_embeddings(a, b)
    lines = [f"{len(embs)} embedding(s)"] + [" ".join(map(str, m.map)) for m in embs[:20]]
    report = run_report("embed", [args.source, args.target], "found" if embs else "none", {"embeddings": len(embs)},
                        maps=[list(m.map) for m in embs])
    return (0 if embs else 1), report, lines


def cmd_amalgamate(args):
    span = load_span(args.span)
    run = search_amalgam if args.mode == "seeded" else search_amalgam_unrestricted_square
    kw = dict(max_size=args.max_size, budget=args.budget, constraints=_flags(args.flags), workers=args.workers)
    out = run(span, **kw)
    body = out.report(include_timing=args.stats)
    lines = [f"{out.status} (bound {out.bound}, {out.stats.nodes} nodes)"]
    if out.amalgam is not None:
        lines.append(render_hasse(out.amalgam.target).rstrip())
        lines.append(f"psi_B = {list(out.amalgam.psi_B.map)}  psi_C = {list(out.amalgam.psi_C.map)}")
    if args.stats:
        lines.append(json.dumps(body["stats"]))
    report = run_report("amalgamate", [args.span], out.status, body.pop("stats"), **body)
    return STATUS_EXIT.get(out.status, EXIT_BUDGET), report, lines


def cmd_enumerate(args):
    algs = list(enumerate_algebras(args.size, _flags(args.flags)))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for alg in algs:
            (out / f"{alg.name}.alg.json").write_text(serialize_algebra(alg))
    report = run_report("enumerate", [], "done", {"count": len(algs)}, size=args.size, flags=_flags(args.flags))
    return 0, report, [f"{len(algs)} algebra(s) of size {args.size}"]


def cmd_span_hunt(args):
    res = generate_candidate_spans(
        args.apex_max,
        args.leg_max,
        _flags(args.flags),
        search_bound=args.search_bound,
        budget=args.budget,
        report_path=args.resume,
        limit=args.limit,
    )
    lines = [f"{res['processed']} span(s) searched, {len(res['candidates'])} candidate(s)"]
    lines += [f"  {c['apex']} -> {c['left']} {c['phi_B']}, {c['right']} {c['phi_C']}: {c['status']}" for c in res["candidates"][:50]]
    report = run_report("span-hunt", [], "complete" if res["complete"] else "partial",
                        {"processed": res["processed"], "candidates": len(res["candidates"])}, **res)
    return 0, report, lines


def cmd_certify(args):
    span = load_span(args.span)
    cert = load_certificate(args.cert, span=span)
    flags = _flags(args.flags) if args.flags is not None else None
    res = check_certificate(cert, span, flags)
    report = run_report("certify", [args.span, args.cert], "valid" if res.ok else "invalid", {"steps": len(cert.steps)},
                        result=str(res))
    return (0 if res.ok else 1), report, [str(res)]


def cmd_fixtures(args):
    rep = verify_fixtures()
    lines = []
    lines.append(f"{sum(e['passed'] for e in rep['algebras'].values())}/{len(rep['algebras'])} algebras passed")
    lines.append(f"{sum(e['valid'] for e in rep['spans'].values())}/{len(rep['spans'])} spans valid")
    lines.append(f"{sum(e['valid'] for e in rep['certificates'].values())}/{len(rep['certificates'])} certificates Valid")
    for kind in ("algebras", "spans", "certificates"):
        for name, e in rep[kind].items():
            if not (e.get("passed") or e.get("valid")):
                lines.append(f"  FAILED {name}: {e}")
    rep.pop("seconds")
    report = run_report("fixtures", [], "pass" if rep["passed"] else "fail", {}, **rep)
    return (0 if rep["passed"] else 1), report, lines


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reslat", description="Finite residuated lattices and amalgams.")
    p.add_argument("--version", action="version", version=f"reslat {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print only the JSON report")
    common.add_argument("--report", metavar="FILE", help="also write the JSON report here")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="verify the axioms of an algebra file")
    s.add_argument("--file", required=True)
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("complete", parents=[common], help="complete a partial product table")
    s.add_argument("--file", required=True)
    s.add_argument("--limit", type=int, default=100)
    s.add_argument("--out", metavar="DIR")
    s.set_defaults(run=cmd_complete)

    s = sub.add_parser("embed", parents=[common], help="list embeddings between two algebras")
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.set_defaults(run=cmd_embed)

    s = sub.add_parser("amalgamate", parents=[common], help="search for an amalgam of a span")
    s.add_argument("--span", required=True)
    s.add_argument("--max-size", type=int, default=8)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--flags", default="")
    s.add_argument("--mode", choices=("seeded", "square"), default="seeded")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--stats", action="store_true", help="include timing in the report")
    s.set_defaults(run=cmd_amalgamate)

    s = sub.add_parser("enumerate", parents=[common], help="all algebras of a size, up to isomorphism")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--flags", default="")
    s.add_argument("--out", metavar="DIR")
    s.set_defaults(run=cmd_enumerate)

    s = sub.add_parser("span-hunt", parents=[common], help="search small spans for ones without amalgams")
    s.add_argument("--apex-max", type=int, required=True)
    s.add_argument("--leg-max", type=int, required=True)
    s.add_argument("--search-bound", type=int, default=6)
    s.add_argument("--flags", default="")
    s.add_argument("--budget", type=int, default=1_000_000)
    s.add_argument("--limit", type=int, help="process at most this many spans in this run")
    s.add_argument("--resume", metavar="FILE", help="JSON-lines progress file (created or resumed)")
    s.set_defaults(run=cmd_span_hunt)

    s = sub.add_parser("certify", parents=[common], help="check a derivation certificate")
    s.add_argument("--span", required=True)
    s.add_argument("--cert", required=True)
    s.add_argument("--flags", default=None, help="override the certificate's flags")
    s.set_defaults(run=cmd_certify)

    s = sub.add_parser("fixtures", parents=[common], help="verify the bundled fixtures")
    s.add_argument("--verify", action="store_true", required=True)
    s.set_defaults(run=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report, lines = args.run(args)
    except (ReslatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = report_dumps(report)
    if args.report:
        Path(args.report).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
