"""Monad documents and table exports.

A monad document is a JSON object with keys A, B, C (arrays of [a, b]
pairs), f and g (row-major arrays of polynomial text), params ({r, gamma,
seed}) and an optional embedded certificate.  Emission is canonical --
two-space indent, fixed key order, trailing newline -- so that
parse(emit(x)) is the identity and identical inputs yield byte-identical
files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .bigraded import Bidegree, BiPoly, LineBundleSum, bipoly_from_text
from .errors import DocumentError
from .monads import HilbertParams, Monad, SheafMap


@dataclass(frozen=True)
class ParsedDocument:
    monad: Monad
    params: HilbertParams | None
    seed: int | None
    certificate: dict | None
    raw: dict


def _bundle_pairs(bundle: LineBundleSum) -> list[list[int]]:
    return [[s.a, s.b] for s in bundle.summands]


def _map_texts(phi: SheafMap) -> list[str]:
    return [e.to_text() for row in phi.entries for e in row]


def monad_to_document(
    m: Monad,
    params: HilbertParams | None = None,
    seed: int | None = None,
    certificate: dict | None = None,
) -> dict:
    doc = {
        "A": _bundle_pairs(m.A),
        "B": _bundle_pairs(m.B),
        "C": _bundle_pairs(m.C),
        "f": _map_texts(m.f),
        "g": _map_texts(m.g),
    }
    if params is not None:
        doc["params"] = {
            "r": params.r,
            "gamma": str(params.gamma),
            "seed": seed if seed is not None else 0,
        }
    if certificate is not None:
        doc["certificate"] = certificate
    return doc


def document_text(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _parse_bundle(obj, key: str) -> LineBundleSum:
    if not isinstance(obj, list):
        raise DocumentError(f"{key} must be an array of [a, b] pairs")
    summands = []
    for item in obj:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(x, int) for x in item)
        ):
            raise DocumentError(f"{key} entries must be integer pairs, got {item!r}")
        summands.append(Bidegree(item[0], item[1]))
    return LineBundleSum(tuple(summands))


def _parse_map(texts, source: LineBundleSum, target: LineBundleSum, key: str) -> SheafMap:
    if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
        raise DocumentError(f"{key} must be an array of polynomial strings")
    rows, cols = len(target), len(source)
    if len(texts) != rows * cols:
        raise DocumentError(
            f"{key} has {len(texts)} entries, expected {rows}x{cols}"
        )
    entries = []
    for i in range(rows):
        row = []
        for j in range(cols):
            expected = target.summands[i] - source.summands[j]
            try:
                poly = bipoly_from_text(texts[i * cols + j], expected)
            except Exception as exc:
                raise DocumentError(f"{key}[{i},{j}]: {exc}") from exc
            row.append(poly)
        entries.append(tuple(row))
    try:
        return SheafMap(source, target, tuple(entries))
    except Exception as exc:
        raise DocumentError(f"{key}: {exc}") from exc


def document_to_monad(doc: dict) -> ParsedDocument:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("A", "B", "C", "f", "g"):
        if key not in doc:
            raise DocumentError(f"missing key {key!r}")
    a_term = _parse_bundle(doc["A"], "A")
    b_term = _parse_bundle(doc["B"], "B")
    c_term = _parse_bundle(doc["C"], "C")
    f = _parse_map(doc["f"], a_term, b_term, "f")
    g = _parse_map(doc["g"], b_term, c_term, "g")
    try:
        monad = Monad(a_term, b_term, c_term, f, g)
    except Exception as exc:
        raise DocumentError(str(exc)) from exc
    params = None
    seed = None
    if "params" in doc:
        p = doc["params"]
        if not isinstance(p, dict) or "r" not in p or "gamma" not in p:
            raise DocumentError("params must carry r and gamma")
        try:
            params = HilbertParams(int(p["r"]), Fraction(str(p["gamma"])))
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"params: {exc}") from exc
        seed = p.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise DocumentError("params.seed must be an integer")
    certificate = doc.get("certificate")
    if certificate is not None and not isinstance(certificate, dict):
        raise DocumentError("certificate must be an object")
    return ParsedDocument(monad, params, seed, certificate, doc)


def parse_document_text(text: str) -> ParsedDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    return document_to_monad(doc)


def table_rows(table) -> list[tuple]:
    return list(table.rows())


def table_to_csv(table) -> str:
    lines = ["a,b,h0,h1,h2,chi,flag"]
    for a, b, h0, h1, h2, chi, flag in table.rows():
        lines.append(f"{a},{b},{h0},{h1},{h2},{chi},{flag}")
    return "\n".join(lines) + "\n"


def table_to_json(table) -> str:
    doc = {
        "window": list(table.window),
        "columns": ["a", "b", "h0", "h1", "h2", "chi", "flag"],
        "rows": [list(row) for row in table.rows()],
    }
    return document_text(doc)


def table_to_text(table) -> str:
    header = ("a", "b", "h0", "h1", "h2", "chi", "flag")
    rows = [tuple(str(x) for x in row) for row in table.rows()]
    widths = [
        max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
        for i in range(len(header))
    ]
    out = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for r in rows:
        out.append("  ".join(x.rjust(w) for x, w in zip(r, widths)))
    return "\n".join(out) + "\n"
