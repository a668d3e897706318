"""Built-in example algebras, datums and parametric flag generators.

Every fixture validates itself when built.  Names with parameters use the
call syntax ``ex46-ext(1,1,2,1)``; parameters are scalars ("3", "-1/2").
Flag generators take the images D(e_i), T(e_i) row by row, which is how
the tables are usually written down, and store the maps column-wise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import Algebra, check_identity
from .complements import MatchedPair, check_deformation, check_matched_pair
from .errors import DatumInvalid, ParseError
from .field import QQ, FieldSpec
from .flags import FlagDatum, check_flag, diagonal_family_flag
from .unified import extract_datum


def _require(report, what):
    if not report:
        raise DatumInvalid(f"{what} fails validation: {report.witness}")


def ex46(F: FieldSpec = QQ) -> Algebra:
    """Four-dimensional complete simple left-symmetric algebra (not Novikov)."""
    A = Algebra.from_products(F, 4, {
        (0, 1): {3: 1}, (2, 1): {0: 1}, (3, 2): {2: 2},
        (1, 0): {3: 1}, (3, 0): {0: 1}, (1, 2): {0: 2}, (3, 1): {1: -1},
    })
    _require(check_identity(A, "left_symmetric"), "ex46")
    return A


def ex47(F: FieldSpec = QQ) -> Algebra:
    """Three-dimensional Novikov algebra with e1 e1 = -e1 + e2, e2 e1 = -e2, e3 e1 = -e3."""
    A = Algebra.from_products(F, 3, {(0, 0): {0: -1, 1: 1}, (1, 0): {1: -1}, (2, 0): {2: -1}})
    _require(check_identity(A, "novikov"), "ex47")
    return A


def ex55(F: FieldSpec = QQ) -> Algebra:
    """Four-dimensional left-symmetric algebra with complementary subalgebras <e1,e3>, <e2,e4>."""
    E = Algebra.from_products(F, 4, {
        (0, 2): {2: 1}, (1, 1): {1: 2}, (2, 3): {1: 1},
        (0, 3): {3: -1}, (1, 2): {2: 1}, (3, 2): {1: 1}, (1, 3): {3: 1},
    })
    _require(check_identity(E, "left_symmetric"), "ex55")
    return E


def ex55_mp(F: FieldSpec = QQ) -> MatchedPair:
    """The matched pair of ex55 read off at A = <e1,e3>, B = <e2,e4>."""
    E = ex55(F)
    datum = extract_datum(E, [0, 2]).datum
    A = Algebra(F, datum.A.sc, ("e1", "e3"))
    B = Algebra(F, datum.dot, ("e2", "e4"))
    mp = MatchedPair(A, B, datum.la, datum.ra, datum.lv, datum.rv)
    _require(check_matched_pair(mp, "left_symmetric"), "ex55-mp")
    return mp


def ex55_phi(b, F: FieldSpec = QQ) -> np.ndarray:
    """phi(e2) = 0, phi(e4) = b e3 as a 2 x 2 matrix (columns e2, e4; rows e1, e3)."""
    phi = F.zeros((2, 2))
    phi[1, 1] = F(b)
    _require(check_deformation(ex55_mp(F), phi), "ex55-phi")
    return phi


def ex46_ext(b, c, d, e, F: FieldSpec = QQ, validate: bool = True) -> FlagDatum:
    fd = diagonal_family_flag(ex46(F), b, c, d, e)
    if validate:
        _require(check_flag(fd, "left_symmetric"), "ex46-ext")
    return fd


def flag_from_rows(base: Algebra, h, g, D_rows, T_rows, a0, alpha, kind: str, validate: bool = True) -> FlagDatum:
    """Build a flag datum from the images D(e_i), T(e_i) listed row by row."""
    F = base.field
    D = F.array(D_rows).T
    T = F.array(T_rows).T
    fd = FlagDatum(base, F.array(h), F.array(g), D, T, F.array(a0), alpha)
    if validate:
        _require(check_flag(fd, kind), "flag datum")
    return fd


def ex47_case1(a11, a12, a13, alpha, F: FieldSpec = QQ, validate: bool = True) -> FlagDatum:
    """h = g = 0 with a0 determined by (a11, a12, a13, alpha)."""
    a11, a12, a13, alpha = (F(v) for v in (a11, a12, a13, alpha))
    c1 = F.sub(F.mul(a11, alpha), F.mul(a11, a11))
    c2 = F.sub(F.mul(alpha, F.add(a11, a12)), F.mul(a11, a12))
    c3 = F.sub(F.mul(alpha, a13), F.mul(a11, a13))
    return flag_from_rows(
        ex47(F), [0, 0, 0], [0, 0, 0],
        [[a11, a12, a13], [0, 0, 0], [0, 0, 0]],
        [[a11, F.neg(a11), 0], [0, a11, 0], [0, 0, a11]],
        [c1, c2, c3], alpha, "novikov", validate,
    )


def ex47_case2(a12, b12, b13, F: FieldSpec = QQ, validate: bool = True) -> FlagDatum:
    """g(e1) = -1, D(e1) = a12 e2, T = -a12 on e2 and e3, alpha = -a12.

    T(e3) = -a12 e3 and a0 = a12 b12 e2 + a12 b13 e3 is the only choice of
    T(e3), a0 in this shape that gives a flag datum when a12 != 0.
    """
    a12, b12, b13 = (F(v) for v in (a12, b12, b13))
    m = F.neg(a12)
    return flag_from_rows(
        ex47(F), [0, 0, 0], [-1, 0, 0],
        [[0, a12, 0], [0, 0, 0], [0, 0, 0]],
        [[m, b12, b13], [0, m, 0], [0, 0, m]],
        [0, F.mul(a12, b12), F.mul(a12, b13)], m, "novikov", validate,
    )


def ex47_case3(a12, a13, b12, b13, b32, b33, c1, c2, c3, alpha, F: FieldSpec = QQ,
               validate: bool = True) -> FlagDatum:
    """All ten values supplied by the caller; validity is decided by check_flag."""
    a12, a13, b12, b13, b32, b33 = (F(v) for v in (a12, a13, b12, b13, b32, b33))
    return flag_from_rows(
        ex47(F), [-1, 0, 0], [-1, 0, 0],
        [[0, a12, a13], [0, 0, 0], [0, 0, 0]],
        [[0, b12, b13], [0, F.neg(a12), F.neg(a13)], [0, b32, b33]],
        [c1, c2, c3], alpha, "novikov", validate,
    )


def case3_subcase1_values(a12, a13, b12, b13, b32, b33, F: FieldSpec = QQ) -> dict:
    """alpha and a0 as functions of the free entries when a13 or b32 is nonzero.

    c2 carries the term b32 (b13 - a13); without it es4 fails whenever
    b32 != 0 and b13 != a13.
    """
    a12, a13, b12, b13, b32, b33 = (F(v) for v in (a12, a13, b12, b13, b32, b33))
    m = F.mul
    alpha = F.sub(b33, a12)
    c1 = F.sub(m(a13, b32), m(a12, b33))
    c2 = F.sub(F.add(F.sub(m(a12, a12), m(a13, b32)), m(a12, b33)), m(b33, b12))
    c2 = F.add(c2, m(b32, F.sub(b13, a13)))
    c3 = F.add(F.sub(F.sub(m(a12, a13), m(a13, b12)), m(a13, b33)), m(a12, b13))
    return {"alpha": alpha, "c1": c1, "c2": c2, "c3": c3}


def case3_subcase2_values(a12, b12, b13, b33, alpha, F: FieldSpec = QQ) -> dict:
    """a0 when a13 = b32 = 0; also reports whether the two expressions for c1 agree."""
    a12, b12, b13, b33, alpha = (F(v) for v in (a12, b12, b13, b33, alpha))
    m = F.mul
    c1 = F.sub(F.neg(m(a12, alpha)), m(a12, a12))
    c1_alt = F.sub(m(alpha, b33), m(b33, b33))
    c2 = F.sub(F.add(F.sub(m(2, m(a12, a12)), m(b12, a12)), m(a12, alpha)), m(alpha, b12))
    c3 = F.sub(m(b13, b33), m(alpha, b13))
    return {"alpha": alpha, "c1": c1, "c2": c2, "c3": c3, "consistent": c1 == c1_alt}


def ex47_case4(gamma, b12, b13, c2=0, c3=0, F: FieldSpec = QQ, validate: bool = True) -> FlagDatum:
    return flag_from_rows(
        ex47(F), [gamma, 0, 0], [-1, 0, 0],
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        [[0, b12, b13], [0, 0, 0], [0, 0, 0]],
        [0, c2, c3], 0, "novikov", validate,
    )


@dataclass(frozen=True)
class FixtureSpec:
    builder: Callable
    params: tuple
    kind: str  # value type tag: algebra, flag, matched_pair, map
    summary: str


FIXTURES = {
    "ex46": FixtureSpec(ex46, (), "algebra", "4-dim complete simple left-symmetric algebra"),
    "ex47": FixtureSpec(ex47, (), "algebra", "3-dim Novikov algebra"),
    "ex55": FixtureSpec(ex55, (), "algebra", "4-dim left-symmetric algebra with two complementary subalgebras"),
    "ex55-mp": FixtureSpec(ex55_mp, (), "matched_pair", "matched pair of ex55 at <e1,e3>, <e2,e4>"),
    "ex55-phi": FixtureSpec(ex55_phi, ("b",), "map", "deformation map phi(e2)=0, phi(e4)=b e3"),
    "ex46-ext": FixtureSpec(ex46_ext, ("b", "c", "d", "e"), "flag", "diagonal flag datum on ex46"),
    "ex47-case1": FixtureSpec(ex47_case1, ("a11", "a12", "a13", "alpha"), "flag", "ex47 flag, h = g = 0"),
    "ex47-case2": FixtureSpec(ex47_case2, ("a12", "b12", "b13"), "flag", "ex47 flag, g(e1) = -1"),
    "ex47-case3": FixtureSpec(
        ex47_case3, ("a12", "a13", "b12", "b13", "b32", "b33", "c1", "c2", "c3", "alpha"), "flag",
        "ex47 flag, h(e1) = g(e1) = -1",
    ),
    "ex47-case4": FixtureSpec(ex47_case4, ("gamma", "b12", "b13", "c2", "c3"), "flag",
                              "ex47 flag, h(e1) = gamma, g(e1) = -1"),
}

_CALL = re.compile(r"^\s*([A-Za-z0-9_-]+)\s*(?:\((.*)\))?\s*$")


def parse_fixture_name(text: str) -> tuple[str, list[str]]:
    m = _CALL.match(text)
    if not m or m.group(1) not in FIXTURES:
        raise ParseError(f"unknown fixture {text!r}", "fixture")
    name = m.group(1)
    args = [a.strip() for a in m.group(2).split(",")] if m.group(2) and m.group(2).strip() else []
    spec = FIXTURES[name]
    if len(args) != len(spec.params):
        raise ParseError(f"{name} takes {len(spec.params)} parameters ({', '.join(spec.params)})", "fixture")
    return name, args


def load_fixture(text: str, F: FieldSpec = QQ):
    """Build a fixture over Q (parameters parsed exactly) and map it into F."""
    name, args = parse_fixture_name(text)
    spec = FIXTURES[name]
    values = [QQ.parse_scalar(a) for a in args]
    if name == "ex55-phi":
        value = spec.builder(*values, F=QQ)
    else:
        value = spec.builder(*values, F=QQ) if values else spec.builder(QQ)
    if F == QQ:
        return spec.kind, value
    return spec.kind, _to_field(spec.kind, value, F)


def _to_field(kind: str, value, F: FieldSpec):
    if kind == "algebra":
        return value.to_field(F)
    if kind == "flag":
        return value.to_field(F)
    if kind == "map":
        return F.convert(value, QQ)
    if kind == "matched_pair":
        return MatchedPair(
            value.A.to_field(F), value.B.to_field(F),
            *(F.convert(getattr(value, n), QQ) for n in ("la", "ra", "lb", "rb")),
        )
    raise ValueError(kind)
