"""Text formats for algebras, spans, amalgam reports and run reports.

All files are JSON objects.  Serialization is canonical (fixed key order,
one matrix row per line), so ``serialize(parse(text)) == text`` for any file
written by this module.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .algebra import FiniteResiduatedLattice, PartialAlgebraSpec, build_from_tables
from .completion import complete_partial_product
from .errors import FormatError, ReslatError
from .lattice import transitive_closure
from .morphisms import Amalgam, Morphism, Span

ALGEBRA_KEYS = ("name", "size", "labels", "leq", "covers", "product", "unit", "zero", "central", "idempotent_elements")
_RESIDUAL_KEYS = {"lres", "rres", "left_residual", "right_residual", "residuals", "ldiv", "rdiv"}


def _matrix_text(rows, indent: str) -> str:
    inner = (",\n" + indent + "  ").join(json.dumps(list(r), separators=(", ", ": ")) for r in rows)
    return "[\n" + indent + "  " + inner + "\n" + indent + "]"


def dumps(obj: dict, indent: str = "") -> str:
    """Canonical JSON text: nested lists of lists are printed one row per line."""
    parts = []
    for key, value in obj.items():
        if isinstance(value, list) and value and all(isinstance(r, list) for r in value):
            text = _matrix_text(value, indent + "  ")
        elif isinstance(value, dict):
            text = dumps(value, indent + "  ")
        elif isinstance(value, list) and value and all(isinstance(r, dict) for r in value):
            items = [dumps(r, indent + "    ") for r in value]
            text = "[\n" + indent + "    " + (",\n" + indent + "    ").join(items) + "\n" + indent + "  ]"
        else:
            text = json.dumps(value, separators=(", ", ": "), ensure_ascii=False)
        parts.append(f'{indent}  {json.dumps(key)}: {text}')
    return "{\n" + ",\n".join(parts) + "\n" + indent + "}"


def _load_json(text: str, what: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise FormatError(f"{what}: top level must be an object")
    return data


def _int(data, key, what, optional=False):
    v = data.get(key)
    if v is None:
        if optional:
            return None
        raise FormatError(f"{what}: missing field '{key}'")
    if not isinstance(v, int) or isinstance(v, bool):
        raise FormatError(f"{what}: field '{key}' must be an integer")
    return v


def _index_list(data, key, size, what):
    v = data.get(key, [])
    if not isinstance(v, list) or any(not isinstance(i, int) or not 0 <= i < size for i in v):
        raise FormatError(f"{what}: field '{key}' must be a list of element indices")
    return tuple(v)


# -- algebras ------------------------------------------------------------------


def spec_from_dict(data: dict, what: str = "algebra") -> PartialAlgebraSpec:
    """Parse an algebra object; unknown products (-1) make it a partial spec."""
    bad = _RESIDUAL_KEYS & set(data)
    if bad:
        raise FormatError(f"{what}: field '{sorted(bad)[0]}' not allowed; residuals are derived from order and product")
    unknown = set(data) - set(ALGEBRA_KEYS)
    if unknown:
        raise FormatError(f"{what}: unknown field '{sorted(unknown)[0]}'")
    size = _int(data, "size", what)
    if size < 1:
        raise FormatError(f"{what}: field 'size' must be positive")
    if "leq" in data:
        leq = data["leq"]
        if not isinstance(leq, list) or len(leq) != size or any(
            not isinstance(r, list) or len(r) != size or any(v not in (0, 1, True, False) for v in r) for r in leq
        ):
            raise FormatError(f"{what}: field 'leq' must be a {size}x{size} 0/1 matrix")
        leq = tuple(tuple(bool(v) for v in r) for r in leq)
    elif "covers" in data:
        cov = data["covers"]
        if not isinstance(cov, list) or any(
            not isinstance(p, list) or len(p) != 2 or any(not isinstance(i, int) or not 0 <= i < size for i in p)
            for p in cov
        ):
            raise FormatError(f"{what}: field 'covers' must be a list of [lower, upper] index pairs")
        leq = transitive_closure(size, [tuple(p) for p in cov])
        for i in range(size):
            for j in range(i + 1, size):
                if leq[i][j] and leq[j][i]:
                    raise FormatError(f"{what}: field 'covers' has a cycle through {i} and {j}")
    else:
        raise FormatError(f"{what}: missing field 'leq'")
    prod = data.get("product")
    if not isinstance(prod, list) or len(prod) != size or any(
        not isinstance(r, list) or len(r) != size or any(not isinstance(v, int) or not -1 <= v < size for v in r)
        for r in prod
    ):
        raise FormatError(f"{what}: field 'product' must be a {size}x{size} matrix of indices (-1 = unknown)")
    unit = _int(data, "unit", what)
    if not 0 <= unit < size:
        raise FormatError(f"{what}: field 'unit' out of range")
    zero = _int(data, "zero", what, optional=True)
    if zero is not None and not 0 <= zero < size:
        raise FormatError(f"{what}: field 'zero' out of range")
    labels = data.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != size or any(not isinstance(s, str) or not s for s in labels):
            raise FormatError(f"{what}: field 'labels' must be {size} non-empty strings")
        if len(set(labels)) != size:
            raise FormatError(f"{what}: field 'labels' has duplicates")
        labels = tuple(labels)
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise FormatError(f"{what}: field 'name' must be a string")
    cons = tuple((i, j, prod[i][j]) for i in range(size) for j in range(size) if prod[i][j] >= 0)
    try:
        return PartialAlgebraSpec(
            size=size,
            leq=leq,
            unit=unit,
            product_constraints=cons,
            zero=zero,
            labels=labels,
            central=_index_list(data, "central", size, what),
            idempotent_elements=_index_list(data, "idempotent_elements", size, what),
            name=name,
        )
    except ReslatError as exc:
        raise FormatError(f"{what}: {exc}") from None


def spec_to_dict(spec: PartialAlgebraSpec) -> dict:
    out: dict[str, Any] = {}
    if spec.name is not None:
        out["name"] = spec.name
    out["size"] = spec.size
    if spec.labels:
        out["labels"] = list(spec.labels)
    out["leq"] = [[int(v) for v in r] for r in spec.leq]
    out["product"] = spec.product_matrix()
    out["unit"] = spec.unit
    if spec.zero is not None:
        out["zero"] = spec.zero
    if spec.central:
        out["central"] = list(spec.central)
    if spec.idempotent_elements:
        out["idempotent_elements"] = list(spec.idempotent_elements)
    return out


def algebra_to_dict(alg: FiniteResiduatedLattice) -> dict:
    return spec_to_dict(PartialAlgebraSpec.from_algebra(alg))


def parse_spec(text: str, what: str = "algebra") -> PartialAlgebraSpec:
    return spec_from_dict(_load_json(text, what), what)


def serialize_spec(spec: PartialAlgebraSpec) -> str:
    return dumps(spec_to_dict(spec)) + "\n"


def serialize_algebra(alg: FiniteResiduatedLattice) -> str:
    return dumps(algebra_to_dict(alg)) + "\n"


def is_complete(spec: PartialAlgebraSpec) -> bool:
    return len(spec.product_constraints) == spec.size * spec.size


def algebra_from_spec(spec: PartialAlgebraSpec) -> FiniteResiduatedLattice:
    """The algebra a spec describes; a partial spec must have exactly one completion."""
    if is_complete(spec):
        return build_from_tables(spec.size, spec.leq, spec.product_matrix(), spec.unit, spec.zero, spec.labels, spec.name)
    found = complete_partial_product(spec, limit=2)
    if len(found) != 1:
        raise FormatError(
            f"algebra {spec.name or ''}: partial product has {len(found) if found else 'no'}"
            f"{'+' if len(found) == 2 else ''} completions, need exactly one"
        )
    return found[0]


def read_spec(path) -> PartialAlgebraSpec:
    path = Path(path)
    return parse_spec(path.read_text(), str(path))


def load_algebra(path) -> FiniteResiduatedLattice:
    return algebra_from_spec(read_spec(path))


def write_algebra(alg: FiniteResiduatedLattice, path) -> None:
    Path(path).write_text(serialize_algebra(alg))


# -- spans and amalgams ------------------------------------------------------------------


SPAN_KEYS = ("name", "apex", "left", "right", "phi_B", "phi_C")


def load_span(path) -> Span:
    """Load a span file; algebra references are paths relative to the span file."""
    path = Path(path)
    data = _load_json(path.read_text(), str(path))
    unknown = set(data) - set(SPAN_KEYS)
    if unknown:
        raise FormatError(f"{path}: unknown field '{sorted(unknown)[0]}'")
    algs = {}
    for key in ("apex", "left", "right"):
        ref = data.get(key)
        if not isinstance(ref, str):
            raise FormatError(f"{path}: field '{key}' must reference an algebra file")
        try:
            algs[key] = load_algebra(path.parent / ref)
        except FileNotFoundError:
            raise FormatError(f"{path}: field '{key}' references missing file {ref}") from None
    for key, tgt in (("phi_B", "left"), ("phi_C", "right")):
        m = data.get(key)
        if not isinstance(m, list) or len(m) != algs["apex"].size or any(
            not isinstance(v, int) or not 0 <= v < algs[tgt].size for v in m
        ):
            raise FormatError(f"{path}: field '{key}' must list one {tgt} index per apex element")
    return Span.from_maps(algs["apex"], algs["left"], algs["right"], data["phi_B"], data["phi_C"], data.get("name"))


def span_to_dict(name: str | None, apex_ref: str, left_ref: str, right_ref: str, span: Span) -> dict:
    out: dict[str, Any] = {}
    if name:
        out["name"] = name
    out.update(apex=apex_ref, left=left_ref, right=right_ref, phi_B=list(span.phi_B.map), phi_C=list(span.phi_C.map))
    return out


def amalgam_to_dict(amalgam: Amalgam) -> dict:
    return {
        "target": algebra_to_dict(amalgam.target),
        "psi_B": list(amalgam.psi_B.map),
        "psi_C": list(amalgam.psi_C.map),
    }


def amalgam_from_dict(data: dict, span: Span) -> Amalgam:
    if not isinstance(data, dict) or "target" not in data:
        raise FormatError("amalgam: missing field 'target'")
    d = algebra_from_spec(spec_from_dict(data["target"], "amalgam target"))
    for key, src in (("psi_B", span.left), ("psi_C", span.right)):
        m = data.get(key)
        if not isinstance(m, list) or len(m) != src.size or any(not isinstance(v, int) or not 0 <= v < d.size for v in m):
            raise FormatError(f"amalgam: field '{key}' must list one target index per source element")
    return Amalgam(d, Morphism(span.left, d, tuple(data["psi_B"])), Morphism(span.right, d, tuple(data["psi_C"])))


# -- run reports -------------------------------------------------------------------------


def inputs_digest(paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    return h.hexdigest()[:16]


def run_report(command: str, inputs, outcome: str, stats: dict | None = None, **extra) -> dict:
    from . import __version__

    out = {
        "command": command,
        "inputs_digest": inputs_digest(inputs) if inputs else None,
        "outcome": outcome,
        "stats": stats or {},
        "tool_version": __version__,
    }
    out.update(extra)
    return out


def report_dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_loads(text: str) -> dict:
    return _load_json(text, "report")
