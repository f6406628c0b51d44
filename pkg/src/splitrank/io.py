"""JSON and text formats for polyhedra and rank certificates.

Every rational is written as a string (``"3"``, ``"-1/2"``) so files stay
bit-exact.  Parsing also accepts plain JSON integers.
"""
from __future__ import annotations

import json
import re
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Any

from .errors import SplitRankError
from .polyhedron import Polyhedron

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class FormatError(SplitRankError):
    """A file does not follow the expected schema."""


@contextmanager
def unlimited_digits():
    """Lift the interpreter's cap on int/str conversion length.

    Iterates of deep closures carry rationals with thousands of digits, which
    must still be written and read back exactly.
    """
    getter = getattr(sys, "get_int_max_str_digits", None)
    if getter is None:
        yield
        return
    old = getter()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


@unlimited_digits()
def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise FormatError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        if "/" in value and int(value.split("/")[1]) == 0:
            raise FormatError(f"zero denominator in {value!r}")
        return Fraction(value.replace(" ", ""))
    raise FormatError(f"not a rational string: {value!r}")


def parse_integer(value: Any) -> int:
    q = parse_rational(value)
    if q.denominator != 1:
        raise FormatError(f"expected an integer, got {value!r}")
    return int(q)


@unlimited_digits()
def fmt(q) -> str:
    return str(Fraction(q))


def _rows(items, dim, what):
    if not isinstance(items, list):
        raise FormatError(f"'{what}' must be a list")
    out = []
    for row in items:
        if not isinstance(row, dict) or "a" not in row or "b" not in row:
            raise FormatError(f"each '{what}' entry needs 'a' and 'b'")
        a = [parse_rational(x) for x in row["a"]]
        if len(a) != dim:
            raise FormatError(f"'{what}' row {row['a']} does not have length {dim}")
        out.append((tuple(a), parse_rational(row["b"])))
    return out


def polyhedron_from_json(data: dict) -> tuple[Polyhedron, str | None]:
    """Build a polyhedron from the parsed contents of a polyhedron file."""
    if not isinstance(data, dict) or "dim" not in data:
        raise FormatError("polyhedron file needs a 'dim' field")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FormatError("'dim' must be a positive integer")
    ineqs = _rows(data.get("ineq", []), dim, "ineq")
    eqs = _rows(data.get("eq", []), dim, "eq")
    return Polyhedron.from_constraints(dim, ineqs, eqs), data.get("name")


def load_polyhedron(path) -> tuple[Polyhedron, str | None]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return polyhedron_from_json(data)


def polyhedron_to_json(P: Polyhedron, name: str | None = None) -> dict:
    """Canonical H- and V-representation; re-parses to the same polyhedron."""
    out: dict = {"dim": P.dim}
    if name is not None:
        out["name"] = name
    out["empty"] = P.is_empty()
    out["ineq"] = [{"a": [fmt(x) for x in r.coeffs], "b": fmt(r.rhs)} for r in P.inequalities]
    out["eq"] = [{"a": [fmt(x) for x in r.coeffs], "b": fmt(r.rhs)} for r in P.equalities]
    out["vertices"] = [[fmt(x) for x in v] for v in P.vertices]
    out["rays"] = [[fmt(x) for x in r] for r in P.rays]
    out["lineality"] = [[fmt(x) for x in r] for r in P.lineality]
    return out


def _linear_form(coeffs) -> str:
    terms = []
    for i, a in enumerate(coeffs, start=1):
        if a == 0:
            continue
        mag = abs(a)
        body = f"x{i}" if mag == 1 else f"{mag} x{i}"
        if not terms:
            terms.append(body if a > 0 else f"-{body}")
        else:
            terms.append(("+ " if a > 0 else "- ") + body)
    return " ".join(terms) if terms else "0"


def polyhedron_to_text(P: Polyhedron, name: str | None = None) -> str:
    lines = []
    if name:
        lines.append(f"# {name}")
    lines.append(f"dim {P.dim}")
    if P.is_empty():
        lines.append("empty")
    for r in P.equalities:
        lines.append(f"  {_linear_form(r.coeffs)} = {fmt(r.rhs)}")
    for r in P.inequalities:
        lines.append(f"  {_linear_form(r.coeffs)} <= {fmt(r.rhs)}")
    for tag, gens in (("vertex", P.vertices), ("ray", P.rays), ("line", P.lineality)):
        for g in gens:
            lines.append(f"{tag} ({', '.join(fmt(x) for x in g)})")
    return "\n".join(lines) + "\n"


def load_directions(path, dim: int) -> list:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(data, dict):
        data = data.get("directions")
    if not isinstance(data, list):
        raise FormatError("directions file must be a list of integer vectors")
    out = []
    for d in data:
        v = tuple(parse_integer(x) for x in d)
        if len(v) != dim:
            raise FormatError(f"direction {d} does not have length {dim}")
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# certificates


def certificate_to_json(cert, version: str) -> dict:
    facets = []
    for fc in cert.per_facet:
        D = fc.directions
        facets.append({
            "c": list(fc.facet.c),
            "alpha": fc.facet.alpha,
            "W": [list(w) for w in D.W],
            "M": list(D.M),
            "d": [list(d) for d in D.d],
            "t_star": fc.t_star,
            "status": fc.status,
            "reason": fc.reason,
            "trace": [[fmt(x) for x in row] for row in fc.trace.u],
            "empty_at": fc.trace.empty_at,
        })
    return {
        "name": cert.name,
        "facets": facets,
        "T": cert.T,
        "combined_directions": [list(d) for d in cert.combined_D],
        "verified": cert.verified,
        "tool_version": version,
    }


def certificate_from_json(data: dict) -> dict:
    """Normalize a certificate file into plain ints, Fractions and tuples."""
    try:
        facets = []
        for f in data["facets"]:
            facets.append({
                "c": tuple(parse_integer(x) for x in f["c"]),
                "alpha": parse_integer(f["alpha"]),
                "W": [tuple(parse_integer(x) for x in w) for w in f.get("W", [])],
                "M": tuple(parse_integer(x) for x in f.get("M", [])),
                "d": [tuple(parse_integer(x) for x in d) for d in f.get("d", [])],
                "t_star": parse_integer(f["t_star"]),
                "trace": [tuple(parse_rational(x) for x in row) for row in f.get("trace", [])],
            })
        return {
            "name": data.get("name"),
            "facets": facets,
            "T": parse_integer(data["T"]),
            "combined_directions": [tuple(parse_integer(x) for x in d)
                                    for d in data.get("combined_directions", [])],
            "verified": bool(data.get("verified", False)),
        }
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed certificate: {exc!r}") from exc


def load_certificate(path) -> dict:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise FormatError("certificate file must hold a JSON object")
    return certificate_from_json(data)
