"""JSON encoding of algebras, datums, matched pairs, maps and reports.

Files use 1-based basis indices and scalars written as strings ("1/2",
"-3").  Matrices are row-major lists of rows with column j holding the
image of basis vector j.  Unknown keys are rejected, and printing is
canonical (sorted keys, products sorted by (i, j)), so printing a parsed
value reproduces the canonical form of its input.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

import numpy as np

from .algebra import Algebra, Bimodule, MorphismWitness, _actions_to_tensor, _tensor_to_actions
from .complements import BruteForceReport, ComplementReport, MatchedPair
from .errors import FieldMismatch, ParseError
from .field import QQ, FieldSpec
from .flags import ClassificationReport, FlagDatum, FlagEquivWitness
from .report import CheckReport
from .unified import DatumMorphismWitness, ExtendingDatum

# -- low-level readers ----------------------------------------------------------


def _expect_keys(obj, required, optional, loc):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", loc)
    extra = set(obj) - set(required) - set(optional)
    if extra:
        raise ParseError(f"unknown keys {sorted(extra)}", loc)
    missing = [k for k in required if k not in obj]
    if missing:
        raise ParseError(f"missing keys {missing}", loc)


def _scalar(F: FieldSpec, x, loc):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"scalar must be a string or integer, got {x!r}", loc)
    try:
        return F(Fraction(x) if isinstance(x, str) else x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scalar {x!r}: {exc}", loc) from None
    except FieldMismatch:
        raise
    except Exception as exc:
        raise ParseError(str(exc), loc) from None


def _vector(F, x, n, loc):
    if not isinstance(x, list) or len(x) != n:
        raise ParseError(f"expected a list of {n} scalars", loc)
    out = F.zeros(n)
    for i, v in enumerate(x):
        out[i] = _scalar(F, v, f"{loc}[{i}]")
    return out


def _matrix(F, x, rows, cols, loc):
    if not isinstance(x, list) or len(x) != rows:
        raise ParseError(f"expected {rows} rows", loc)
    out = F.zeros((rows, cols))
    for r, row in enumerate(x):
        out[r] = _vector(F, row, cols, f"{loc}[{r}]")
    return out


def _matrix_list(F, x, count, size, loc):
    if not isinstance(x, list) or len(x) != count:
        raise ParseError(f"expected {count} matrices", loc)
    return [_matrix(F, m, size, size, f"{loc}[{k}]") for k, m in enumerate(x)]


def _index(x, n, loc):
    if isinstance(x, bool) or not isinstance(x, int) or not 1 <= x <= n:
        raise ParseError(f"index {x!r} out of range 1..{n}", loc)
    return x - 1


def _products(F, items, nin, nout, loc):
    """Product list [{"i":, "j":, "out": {"k": c}}] to a tensor t[i, j, k]."""
    if not isinstance(items, list):
        raise ParseError("products must be a list", loc)
    t = F.zeros((nin, nin, nout))
    seen = set()
    for n, item in enumerate(items):
        here = f"{loc}[{n}]"
        _expect_keys(item, ("i", "j", "out"), (), here)
        i = _index(item["i"], nin, here + ".i")
        j = _index(item["j"], nin, here + ".j")
        if (i, j) in seen:
            raise ParseError(f"product ({i + 1},{j + 1}) listed twice", here)
        seen.add((i, j))
        out = item["out"]
        if not isinstance(out, dict):
            raise ParseError("out must be an object", here + ".out")
        for k, c in out.items():
            try:
                kk = int(k)
            except ValueError:
                raise ParseError(f"bad output index {k!r}", here + ".out") from None
            t[i, j, _index(kk, nout, here + ".out")] = _scalar(F, c, f"{here}.out.{k}")
    return t


def _field_of(obj, loc, default: FieldSpec | None):
    if "field" in obj:
        return FieldSpec.from_json(obj["field"], loc + ".field")
    # an omitted field means the rationals (or the enclosing value's field)
    return QQ if default is None else default


# -- writers ----------------------------------------------------------------------


def _fmt(F, x):
    return F.format(x)


def _fmt_vector(F, v):
    return [_fmt(F, x) for x in v]


def _fmt_matrix(F, M):
    return [_fmt_vector(F, row) for row in np.asarray(M)]


def _fmt_products(F, t):
    nin = t.shape[0]
    items = []
    for i in range(nin):
        for j in range(nin):
            out = {str(k + 1): _fmt(F, t[i, j, k]) for k in range(t.shape[2]) if t[i, j, k] != 0}
            if out:
                items.append({"i": i + 1, "j": j + 1, "out": out})
    return items


# -- typed values -------------------------------------------------------------------


def algebra_to_json(A: Algebra) -> dict:
    F = A.field
    return {
        "field": F.to_json(),
        "dim": A.dim,
        "basis": A.basis_names(),
        "products": _fmt_products(F, A.sc),
    }


def algebra_from_json(obj, loc="algebra", default_field=None) -> Algebra:
    _expect_keys(obj, ("dim", "products"), ("field", "basis"), loc)
    F = _field_of(obj, loc, default_field)
    n = obj["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParseError("dim must be a non-negative integer", loc + ".dim")
    labels = None
    if "basis" in obj:
        basis = obj["basis"]
        if not isinstance(basis, list) or len(basis) != n or not all(isinstance(b, str) for b in basis):
            raise ParseError(f"basis must list {n} names", loc + ".basis")
        if basis != [f"e{i + 1}" for i in range(n)]:
            labels = tuple(basis)
    return Algebra(F, _products(F, obj["products"], n, n, loc + ".products"), labels)


def datum_to_json(d: ExtendingDatum) -> dict:
    F = d.field
    mats = d.matrices()
    return {
        "base": algebra_to_json(d.A),
        "vdim": d.vdim,
        **{k: [_fmt_matrix(F, M) for M in v] for k, v in mats.items()},
        "f": _fmt_products(F, d.f),
        "dot": _fmt_products(F, d.dot),
    }


def datum_from_json(obj, loc="datum", default_field=None) -> ExtendingDatum:
    _expect_keys(obj, ("base", "vdim"), ("lA", "rA", "lV", "rV", "f", "dot"), loc)
    A = algebra_from_json(obj["base"], loc + ".base", default_field)
    F, nA, m = A.field, A.dim, obj["vdim"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise ParseError("vdim must be a non-negative integer", loc + ".vdim")
    zero = lambda count, size: [F.zeros((size, size))] * count
    lA = _matrix_list(F, obj["lA"], nA, m, loc + ".lA") if "lA" in obj else zero(nA, m)
    rA = _matrix_list(F, obj["rA"], nA, m, loc + ".rA") if "rA" in obj else zero(nA, m)
    lV = _matrix_list(F, obj["lV"], m, nA, loc + ".lV") if "lV" in obj else zero(m, nA)
    rV = _matrix_list(F, obj["rV"], m, nA, loc + ".rV") if "rV" in obj else zero(m, nA)
    f = _products(F, obj.get("f", []), m, nA, loc + ".f")
    dot = _products(F, obj.get("dot", []), m, m, loc + ".dot")
    return ExtendingDatum.from_matrices(A, m, lA, rA, lV, rV, f, dot)


def flag_to_json(fd: FlagDatum) -> dict:
    F = fd.field
    return {
        "base": algebra_to_json(fd.base),
        "h": _fmt_vector(F, fd.h), "g": _fmt_vector(F, fd.g),
        "D": _fmt_matrix(F, fd.D), "T": _fmt_matrix(F, fd.T),
        "a0": _fmt_vector(F, fd.a0), "alpha": _fmt(F, fd.alpha),
    }


def flag_from_json(obj, loc="flag", default_field=None) -> FlagDatum:
    _expect_keys(obj, ("base", "h", "g", "D", "T", "a0", "alpha"), (), loc)
    A = algebra_from_json(obj["base"], loc + ".base", default_field)
    F, n = A.field, A.dim
    return FlagDatum(
        A,
        _vector(F, obj["h"], n, loc + ".h"), _vector(F, obj["g"], n, loc + ".g"),
        _matrix(F, obj["D"], n, n, loc + ".D"), _matrix(F, obj["T"], n, n, loc + ".T"),
        _vector(F, obj["a0"], n, loc + ".a0"), _scalar(F, obj["alpha"], loc + ".alpha"),
    )


def matched_pair_to_json(mp: MatchedPair) -> dict:
    F = mp.field
    return {
        "A": algebra_to_json(mp.A), "B": algebra_to_json(mp.B),
        "lA": [_fmt_matrix(F, M) for M in _tensor_to_actions(mp.la)],
        "rA": [_fmt_matrix(F, M) for M in _tensor_to_actions(mp.ra)],
        "lB": [_fmt_matrix(F, M) for M in _tensor_to_actions(mp.lb)],
        "rB": [_fmt_matrix(F, M) for M in _tensor_to_actions(mp.rb)],
    }


def matched_pair_from_json(obj, loc="matched_pair", default_field=None) -> MatchedPair:
    _expect_keys(obj, ("A", "B"), ("lA", "rA", "lB", "rB"), loc)
    A = algebra_from_json(obj["A"], loc + ".A", default_field)
    B = algebra_from_json(obj["B"], loc + ".B", A.field)
    if A.field != B.field:
        raise FieldMismatch(f"{loc}: A is over {A.field}, B over {B.field}")
    F, nA, nB = A.field, A.dim, B.dim

    def acts(key, count, size):
        if key not in obj:
            return F.zeros((count, size, size))
        return _actions_to_tensor(F, _matrix_list(F, obj[key], count, size, f"{loc}.{key}"), count, size)

    return MatchedPair(A, B, acts("lA", nA, nB), acts("rA", nA, nB), acts("lB", nB, nA), acts("rB", nB, nA))


def bimodule_to_json(bm: Bimodule) -> dict:
    F = bm.base.field
    return {
        "base": algebra_to_json(bm.base),
        "mdim": bm.mdim,
        "S": [_fmt_matrix(F, M) for M in bm.S],
        "T": [_fmt_matrix(F, M) for M in bm.T],
    }


def bimodule_from_json(obj, loc="bimodule", default_field=None) -> Bimodule:
    _expect_keys(obj, ("base", "mdim", "S", "T"), (), loc)
    A = algebra_from_json(obj["base"], loc + ".base", default_field)
    m = obj["mdim"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise ParseError("mdim must be a non-negative integer", loc + ".mdim")
    F = A.field
    return Bimodule.from_matrices(
        A, _matrix_list(F, obj["S"], A.dim, m, loc + ".S"), _matrix_list(F, obj["T"], A.dim, m, loc + ".T"),
    )


def map_to_json(F: FieldSpec, M) -> dict:
    M = np.asarray(M)
    return {"field": F.to_json(), "rows": M.shape[0], "cols": M.shape[1], "matrix": _fmt_matrix(F, M)}


def map_from_json(obj, loc="map", default_field=None):
    """A linear map as (field, matrix)."""
    _expect_keys(obj, ("matrix",), ("field", "rows", "cols"), loc)
    F = _field_of(obj, loc, default_field)
    rows = obj["matrix"]
    if not isinstance(rows, list):
        raise ParseError("matrix must be a list of rows", loc + ".matrix")
    r = obj.get("rows", len(rows))
    c = obj.get("cols", len(rows[0]) if rows and isinstance(rows[0], list) else 0)
    return F, _matrix(F, rows, r, c, loc + ".matrix")


def parse_scalar_list(F: FieldSpec, text: str, loc="scalars") -> list:
    """Comma-separated scalars, e.g. "2, 1/2, -1"."""
    if not text.strip():
        return []
    return [_scalar(F, t.strip(), f"{loc}[{i}]") for i, t in enumerate(text.split(","))]


# -- dispatch ------------------------------------------------------------------------

_READERS = {
    "algebra": algebra_from_json,
    "datum": datum_from_json,
    "flag": flag_from_json,
    "matched_pair": matched_pair_from_json,
    "bimodule": bimodule_from_json,
    "map": map_from_json,
}


def detect_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise ParseError("top-level value must be an object")
    if "products" in obj:
        return "algebra"
    if "vdim" in obj:
        return "datum"
    if "h" in obj:
        return "flag"
    if "B" in obj:
        return "matched_pair"
    if "mdim" in obj:
        return "bimodule"
    if "matrix" in obj:
        return "map"
    raise ParseError(f"cannot tell what kind of value has keys {sorted(obj)}")


def from_json(obj, kind: str | None = None, default_field: FieldSpec | None = None):
    kind = kind or detect_kind(obj)
    if kind not in _READERS:
        raise ParseError(f"unknown value kind {kind!r}")
    return kind, _READERS[kind](obj, kind, default_field)


def to_json(kind: str, value) -> dict:
    if kind == "algebra":
        return algebra_to_json(value)
    if kind == "datum":
        return datum_to_json(value)
    if kind == "flag":
        return flag_to_json(value)
    if kind == "matched_pair":
        return matched_pair_to_json(value)
    if kind == "bimodule":
        return bimodule_to_json(value)
    if kind == "map":
        F, M = value
        return map_to_json(F, M)
    raise ValueError(kind)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, location="input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}", location) from None


def parse_value(source: str, field: FieldSpec | None = None, kind: str | None = None):
    """Read a value from inline JSON, a file path, or ``examples:<fixture>``.

    Returns ``(kind, value)``.  A value over Q is mapped into ``field`` when
    one is given; a value over a different prime field raises FieldMismatch.
    """
    if source.startswith("examples:"):
        from .fixtures import load_fixture

        got_kind, value = load_fixture(source[len("examples:"):], QQ)
        if got_kind == "map":
            value = (QQ, value)
    else:
        text = source
        location = "inline"
        if not source.lstrip().startswith("{"):
            try:
                with open(source, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ParseError(f"cannot read {source}: {exc.strerror}", source) from None
            location = os.path.basename(source)
        try:
            got_kind, value = from_json(loads(text, location), kind)
        except ParseError as exc:
            if location != "inline" and not exc.location.startswith(location):
                raise ParseError(str(exc), location) from None
            raise
    if kind is not None and got_kind != kind:
        raise ParseError(f"expected {kind}, got {got_kind}", source)
    if field is not None:
        value = convert_value(got_kind, value, field)
    return got_kind, value


def value_field(kind: str, value) -> FieldSpec:
    if kind == "map":
        return value[0]
    if kind == "algebra":
        return value.field
    if kind == "bimodule":
        return value.base.field
    return value.field


def convert_value(kind: str, value, F: FieldSpec):
    src = value_field(kind, value)
    if src == F:
        return value
    if src.is_prime:
        raise FieldMismatch(f"value is over {src}, requested {F}")
    if kind == "map":
        return F, F.convert(value[1], src)
    if kind in ("algebra", "datum", "flag"):
        return value.to_field(F)
    if kind == "bimodule":
        return Bimodule(value.base.to_field(F), F.convert(value.s, src), F.convert(value.t, src))
    if kind == "matched_pair":
        return MatchedPair(
            value.A.to_field(F), value.B.to_field(F),
            *(F.convert(getattr(value, n), src) for n in ("la", "ra", "lb", "rb")),
        )
    raise ValueError(kind)


# -- reports ---------------------------------------------------------------------------


def check_report_json(report: CheckReport, F: FieldSpec, labels=None) -> dict:
    return report.to_json(F, labels)


def morphism_witness_from_json(obj, F: FieldSpec, n_src: int, n_dst: int, loc="witness") -> MorphismWitness:
    _expect_keys(obj, ("matrix",), ("stabilizes", "costabilizes", "sub"), loc)
    M = _matrix(F, obj["matrix"], n_dst, n_src, loc + ".matrix")
    return MorphismWitness(M, bool(obj.get("stabilizes", False)), bool(obj.get("costabilizes", False)))


def datum_witness_from_json(obj, F: FieldSpec, nA: int, nV: int, loc="witness") -> DatumMorphismWitness:
    """{"lambda": nA x nV matrix (V -> A), "mu": nV x nV matrix}."""
    _expect_keys(obj, ("lambda", "mu"), (), loc)
    return DatumMorphismWitness(
        _matrix(F, obj["lambda"], nA, nV, loc + ".lambda"), _matrix(F, obj["mu"], nV, nV, loc + ".mu"),
    )


def flag_witness_from_json(obj, F: FieldSpec, n: int, loc="witness") -> FlagEquivWitness:
    _expect_keys(obj, ("beta", "b0"), (), loc)
    return FlagEquivWitness(_scalar(F, obj["beta"], loc + ".beta"), tuple(_vector(F, obj["b0"], n, loc + ".b0")))


def flag_witness_json(F: FieldSpec, w: FlagEquivWitness) -> dict:
    return {"beta": _fmt(F, w.beta), "b0": _fmt_vector(F, w.b0)}


def classification_report_json(report: ClassificationReport) -> dict:
    F = report.field
    out = {
        "field": F.to_json(),
        "kind": report.kind,
        "candidates_checked": report.candidates_checked,
        "valid_count": len(report.valid),
        "valid": [flag_to_json(fd) for fd in report.valid],
    }
    for fd in out["valid"]:
        fd.pop("base")
    if report.valid:
        out["base"] = algebra_to_json(report.valid[0].base)
    if report.mode is not None:
        out["mode"] = report.mode
        out["classes"] = [
            {
                "representative": c.representative + 1,
                "members": [m + 1 for m in sorted(c.members)],
                "witnesses": {str(m + 1): flag_witness_json(F, w) for m, w in sorted(c.witnesses.items())},
            }
            for c in report.classes
        ]
        out["class_count"] = len(report.classes)
    return out


def complement_report_json(report: ComplementReport) -> dict:
    F = report.field
    out = {
        "field": F.to_json(),
        "candidates_checked": report.candidates_checked,
        "deformation_maps": [_fmt_matrix(F, M) for M in report.deformation_maps],
    }
    if report.classes:
        out["classes"] = _classes_json(F, report.classes)
        out["index"] = report.index
    return out


def brute_force_report_json(report: BruteForceReport) -> dict:
    F = report.field
    return {
        "field": F.to_json(),
        "candidates_checked": report.candidates_checked,
        "complements": [_fmt_matrix(F, M) for M in report.complements],
        "classes": _classes_json(F, report.classes),
        "class_sizes": sorted(len(c.members) for c in report.classes),
        "index": report.index,
    }


def _classes_json(F, classes):
    return [
        {
            "representative": c.representative + 1,
            "members": [m + 1 for m in sorted(c.members)],
            "witnesses": {str(m + 1): _fmt_matrix(F, rho) for m, rho in sorted(c.witnesses.items())},
        }
        for c in classes
    ]
