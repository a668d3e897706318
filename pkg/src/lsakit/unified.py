"""Extending datums, unified products and their condition checkers.

A datum of A (dim nA) by V (dim nV) is stored as six tensors, each with the
output coordinate last:

    la[a, y, w]  coeff of w in l_A(a) y      (nA, nV, nV)
    ra[a, y, w]  coeff of w in r_A(a) y      (nA, nV, nV)
    lv[x, b, o]  coeff of o in l_V(x) b      (nV, nA, nA)
    rv[x, b, o]  coeff of o in r_V(x) b      (nV, nA, nA)
    f[x, y, o]   coeff of o in f(x, y)       (nV, nV, nA)
    dot[x, y, w] coeff of w in x . y         (nV, nV, nV)

Any of them may carry extra leading batch axes; the condition builders use
ellipsis contractions, so one call checks a whole batch of datums.  Because
every condition is multilinear in its arguments, evaluating it on basis
tuples decides it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import (
    Algebra,
    MorphismWitness,
    Split,
    _actions_to_tensor,
    _tensor_to_actions,
    bimodule_equations,
    check_identity,
    check_morphism,
    identity_equations,
)
from .errors import BaseAlgebraInvalid, DatumInvalid, NotSubalgebra, ShapeMismatch
from .field import FieldSpec, is_invertible
from .report import CheckReport, Equation, batch_verdict, report_from

KINDS = ("left_symmetric", "novikov")


class Blocks(NamedTuple):
    """The raw tensors of a (possibly batched) datum plus the base product."""

    mA: np.ndarray
    la: np.ndarray
    ra: np.ndarray
    lv: np.ndarray
    rv: np.ndarray
    f: np.ndarray
    dot: np.ndarray


@dataclass(frozen=True, eq=False)
class ExtendingDatum:
    A: Algebra
    la: np.ndarray
    ra: np.ndarray
    lv: np.ndarray
    rv: np.ndarray
    f: np.ndarray
    dot: np.ndarray

    def __post_init__(self):
        nA, nV = self.A.dim, self.vdim
        F = self.A.field
        shapes = {
            "la": (nA, nV, nV), "ra": (nA, nV, nV),
            "lv": (nV, nA, nA), "rv": (nV, nA, nA),
            "f": (nV, nV, nA), "dot": (nV, nV, nV),
        }
        for name, shape in shapes.items():
            arr = np.asarray(getattr(self, name))
            if arr.size == 0:
                arr = F.zeros(shape)
            if arr.shape != shape:
                raise ShapeMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            F.check_array(arr, name)
            arr = np.array(arr, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def vdim(self) -> int:
        return np.asarray(self.dot).shape[0]

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    @classmethod
    def zero(cls, A: Algebra, vdim: int, dot=None) -> ExtendingDatum:
        F = A.field
        nA = A.dim
        return cls(
            A,
            F.zeros((nA, vdim, vdim)), F.zeros((nA, vdim, vdim)),
            F.zeros((vdim, nA, nA)), F.zeros((vdim, nA, nA)),
            F.zeros((vdim, vdim, nA)),
            F.zeros((vdim, vdim, vdim)) if dot is None else dot,
        )

    @classmethod
    def from_matrices(cls, A: Algebra, vdim: int, lA, rA, lV, rV, f, dot) -> ExtendingDatum:
        """Build from action matrices (column j = image of basis j) and product tensors."""
        F = A.field
        nA = A.dim
        return cls(
            A,
            _actions_to_tensor(F, lA, nA, vdim), _actions_to_tensor(F, rA, nA, vdim),
            _actions_to_tensor(F, lV, vdim, nA), _actions_to_tensor(F, rV, vdim, nA),
            np.asarray(f), np.asarray(dot),
        )

    def matrices(self) -> dict:
        return {
            "lA": _tensor_to_actions(self.la), "rA": _tensor_to_actions(self.ra),
            "lV": _tensor_to_actions(self.lv), "rV": _tensor_to_actions(self.rv),
        }

    @property
    def blocks(self) -> Blocks:
        return Blocks(self.A.sc, self.la, self.ra, self.lv, self.rv, self.f, self.dot)

    def to_field(self, F: FieldSpec) -> ExtendingDatum:
        src = self.field
        return ExtendingDatum(
            self.A.to_field(F),
            *(F.convert(getattr(self, n), src) for n in ("la", "ra", "lv", "rv", "f", "dot")),
        )

    def same_as(self, other: ExtendingDatum) -> bool:
        if self.A != other.A or self.vdim != other.vdim:
            return False
        return all(
            np.array_equal(getattr(self, n), getattr(other, n))
            for n in ("la", "ra", "lv", "rv", "f", "dot")
        )


@dataclass(frozen=True, eq=False)
class UnifiedAlgebra:
    """The unified product on A x V; basis order is the A-block then the V-block."""

    alg: Algebra
    datum: ExtendingDatum

    @property
    def split(self) -> Split:
        nA = self.datum.A.dim
        return Split(tuple(range(nA)), tuple(range(nA, self.alg.dim)))


def unified_sc(F: FieldSpec, b: Blocks) -> np.ndarray:
    """Structure constants of the unified product (batched over leading axes).

    (a,x) o (b,y) = (a o b + l_V(x)b + r_V(y)a + f(x,y),  x.y + l_A(a)y + r_A(b)x)
    """
    nA = b.mA.shape[-1]
    nV = b.dot.shape[-1]
    batch = np.broadcast_shapes(*(np.shape(t)[:-3] for t in b))
    n = nA + nV
    E = F.zeros(batch + (n, n, n))
    A_, V_ = slice(0, nA), slice(nA, n)
    E[..., A_, A_, A_] = b.mA
    E[..., A_, V_, A_] = np.swapaxes(b.rv, -3, -2)  # (a,0)o(0,y) = (r_V(y)a, l_A(a)y)
    E[..., A_, V_, V_] = b.la
    E[..., V_, A_, A_] = b.lv                        # (0,x)o(b,0) = (l_V(x)b, r_A(b)x)
    E[..., V_, A_, V_] = np.swapaxes(b.ra, -3, -2)
    E[..., V_, V_, A_] = b.f
    E[..., V_, V_, V_] = b.dot
    return E


def unified_product(datum: ExtendingDatum) -> UnifiedAlgebra:
    F = datum.field
    labels = None
    if datum.A.labels:
        labels = tuple(datum.A.labels) + tuple(
            "x" if datum.vdim == 1 else f"x{k + 1}" for k in range(datum.vdim)
        )
    return UnifiedAlgebra(Algebra(F, unified_sc(F, datum.blocks), labels), datum)


def _sw(t, i=-3, j=-2):
    return np.swapaxes(t, i, j)


def _sum(F, *terms):
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return F.reduce(out)


def l_conditions(F: FieldSpec, b: Blocks) -> list[Equation]:
    """The ten left-symmetric compatibility conditions L1..L10.

    Free-variable order: (a, b, x) for L1-L4, (a, x, y) for L5-L8, (x, y, z) for L9-L10.
    """
    mA, la, ra, lv, rv, f, dot = b
    e = F.ein
    com = F.reduce(mA - _sw(mA))        # [a, b]
    u = F.reduce(la - ra)               # l_A(a)x - r_A(a)x  as u[a, x, y]
    q = F.reduce(lv - rv)               # l_V(x)a - r_V(x)a  as q[x, a, c]
    dcom = F.reduce(dot - _sw(dot))     # x.y - y.x
    fcom = F.reduce(f - _sw(f))         # f(x,y) - f(y,x)
    eqs = []
    eqs.append(Equation(
        "L1",
        e("abc,xco->abxo", mA, lv),
        _sum(F, -e("axy,ybo->abxo", u, lv), e("xac,cbo->abxo", q, mA),
             e("bxy,yao->abxo", ra, rv), e("xbc,aco->abxo", lv, mA)),
        3,
    ))
    eqs.append(Equation(
        "L2",
        F.reduce(e("bxy,ayw->abxw", ra, la) - e("axy,byw->abxw", la, ra)),
        F.reduce(e("abc,cxw->abxw", mA, ra) - e("axy,byw->abxw", ra, ra)),
        3,
    ))
    eqs.append(Equation(
        "L3",
        e("abc,xco->abxo", com, rv),
        _sum(F, e("bxy,yao->abxo", la, rv), -e("axy,ybo->abxo", la, rv),
             e("xbc,aco->abxo", rv, mA), -e("xac,bco->abxo", rv, mA)),
        3,
    ))
    eqs.append(Equation(
        "L4",
        e("abc,cxw->abxw", com, la),
        F.reduce(e("bxy,ayw->abxw", la, la) - e("axy,byw->abxw", la, la)),
        3,
    ))
    eqs.append(Equation(
        "L5",
        e("xyz,zao->axyo", dot, rv),
        _sum(F, -e("xac,yco->axyo", q, rv), e("yac,xco->axyo", rv, lv),
             e("axz,zyo->axyo", la, f), e("ayz,xzo->axyo", la, f),
             -e("xyc,aco->axyo", f, mA), -e("axz,zyo->axyo", ra, f)),
        3,
    ))
    eqs.append(Equation(
        "L6",
        e("xyz,azw->axyw", dot, la),
        _sum(F, -e("xac,cyw->axyw", q, la), e("axz,zyw->axyw", u, dot),
             e("yac,cxw->axyw", rv, ra), e("ayz,xzw->axyw", la, dot)),
        3,
    ))
    eqs.append(Equation(
        "L7",
        e("xyz,zao->axyo", dcom, lv),
        _sum(F, e("yac,xco->axyo", lv, lv), -e("xac,yco->axyo", lv, lv),
             -e("xyc,cao->axyo", fcom, mA), e("ayz,xzo->axyo", ra, f),
             -e("axz,yzo->axyo", ra, f)),
        3,
    ))
    eqs.append(Equation(
        "L8",
        e("xyz,azw->axyw", dcom, ra),
        _sum(F, e("yac,cxw->axyw", lv, ra), -e("xac,cyw->axyw", lv, ra),
             e("ayz,xzw->axyw", ra, dot), -e("axz,yzw->axyw", ra, dot)),
        3,
    ))
    eqs.append(Equation(
        "L9",
        _sum(F, e("xyt,tzo->xyzo", dot, f), -e("yzt,xto->xyzo", dot, f),
             -e("yxt,tzo->xyzo", dot, f), e("xzt,yto->xyzo", dot, f),
             e("xyc,zco->xyzo", fcom, rv), -e("yzc,xco->xyzo", f, lv),
             e("xzc,yco->xyzo", f, lv)),
        F.zeros(()),
        3,
    ))
    eqs.append(Equation(
        "L10",
        _sum(F, e("xyt,tzw->xyzw", dot, dot), -e("yzt,xtw->xyzw", dot, dot),
             -e("yxt,tzw->xyzw", dot, dot), e("xzt,ytw->xyzw", dot, dot),
             e("xyc,czw->xyzw", fcom, la), -e("yzc,cxw->xyzw", f, ra),
             e("xzc,cyw->xyzw", f, ra)),
        F.zeros(()),
        3,
    ))
    return eqs


def n_conditions(F: FieldSpec, b: Blocks) -> list[Equation]:
    """The extra Novikov conditions N1..N10 (same variable orders as L1..L10)."""
    mA, la, ra, lv, rv, f, dot = b
    e = F.ein
    eqs = [
        Equation(
            "N1",
            F.reduce(e("xac,cbo->abxo", lv, mA) + e("axy,ybo->abxo", ra, lv)),
            F.reduce(e("xbc,cao->abxo", lv, mA) + e("bxy,yao->abxo", ra, lv)),
            3,
        ),
        Equation("N2", e("axy,byw->abxw", ra, ra), e("bxy,ayw->abxw", ra, ra), 3),
        Equation(
            "N3",
            F.reduce(e("xac,cbo->abxo", rv, mA) + e("axy,ybo->abxo", la, lv)),
            e("abc,xco->abxo", mA, rv),
            3,
        ),
        Equation("N4", e("axy,byw->abxw", la, ra), e("abc,cxw->abxw", mA, la), 3),
        Equation(
            "N5",
            F.reduce(e("xac,yco->axyo", rv, rv) + e("axz,zyo->axyo", la, f)),
            F.reduce(e("yac,xco->axyo", rv, rv) + e("ayz,zxo->axyo", la, f)),
            3,
        ),
        Equation(
            "N6",
            F.reduce(e("xac,cyw->axyw", rv, la) + e("axz,zyw->axyw", la, dot)),
            F.reduce(e("yac,cxw->axyw", rv, la) + e("ayz,zxw->axyw", la, dot)),
            3,
        ),
        Equation(
            "N7",
            F.reduce(e("xac,yco->axyo", lv, rv) + e("axz,zyo->axyo", ra, f)),
            F.reduce(e("xyc,cao->axyo", f, mA) + e("xyz,zao->axyo", dot, lv)),
            3,
        ),
        Equation(
            "N8",
            F.reduce(e("xac,cyw->axyw", lv, la) + e("axz,zyw->axyw", ra, dot)),
            e("xyz,azw->axyw", dot, ra),
            3,
        ),
        Equation(
            "N9",
            F.reduce(e("xyc,zco->xyzo", f, rv) + e("xyt,tzo->xyzo", dot, f)),
            F.reduce(e("xzc,yco->xyzo", f, rv) + e("xzt,tyo->xyzo", dot, f)),
            3,
        ),
        Equation(
            "N10",
            F.reduce(e("xyc,czw->xyzw", f, la) + e("xyt,tzw->xyzw", dot, dot)),
            F.reduce(e("xzc,cyw->xyzw", f, la) + e("xzt,tyw->xyzw", dot, dot)),
            3,
        ),
    ]
    return eqs


def twisted_conditions(F: FieldSpec, b: Blocks, kind: str) -> list[Equation]:
    """Conditions for a datum with all four actions trivial."""
    mA, _, _, _, _, f, dot = b
    e = F.ein
    eqs = [Equation(f"V:{c.cid}", c.lhs, c.rhs, c.nfree) for c in identity_equations(F, dot, kind)]
    fcom = F.reduce(f - _sw(f))
    zero = F.zeros(())
    # a o f(x,y) = 0 and (f(x,y) - f(y,x)) o a = 0 (Novikov: f(x,y) o a = 0)
    eqs.append(Equation("TW1", e("xyc,aco->axyo", f, mA), zero, 3))
    second = f if kind == "novikov" else fcom
    eqs.append(Equation("TW2", e("xyc,cao->axyo", second, mA), zero, 3))
    eqs.append(Equation(
        "TW3",
        _sum(F, e("xyt,tzo->xyzo", dot, f), -e("yzt,xto->xyzo", dot, f),
             -e("yxt,tzo->xyzo", dot, f), e("xzt,yto->xyzo", dot, f)),
        zero,
        3,
    ))
    if kind == "novikov":
        eqs.append(Equation("TW4", e("xyt,tzo->xyzo", dot, f), e("xzt,tyo->xyzo", dot, f), 3))
    return eqs


def crossed_conditions(F: FieldSpec, b: Blocks, kind: str) -> list[Equation]:
    """Conditions C1..C5 (and CN1..CN5) for a datum with l_A = r_A = 0."""
    mA, _, _, lv, rv, f, dot = b
    e = F.ein
    eqs = [Equation(f"V:{c.cid}", c.lhs, c.rhs, c.nfree) for c in identity_equations(F, dot, kind)]
    q = F.reduce(lv - rv)
    com = F.reduce(mA - _sw(mA))
    fcom = F.reduce(f - _sw(f))
    zero = F.zeros(())
    eqs += [
        Equation(
            "C1",
            e("abc,xco->abxo", mA, lv),
            F.reduce(e("xac,cbo->abxo", q, mA) + e("xbc,aco->abxo", lv, mA)),
            3,
        ),
        Equation(
            "C2",
            e("abc,xco->abxo", com, rv),
            F.reduce(e("xbc,aco->abxo", rv, mA) - e("xac,bco->abxo", rv, mA)),
            3,
        ),
        Equation(
            "C3",
            e("xyz,zao->axyo", dot, rv),
            _sum(F, -e("xac,yco->axyo", q, rv), e("yac,xco->axyo", rv, lv),
                 -e("xyc,aco->axyo", f, mA)),
            3,
        ),
        Equation(
            "C4",
            e("xyz,zao->axyo", F.reduce(dot - _sw(dot)), lv),
            _sum(F, e("yac,xco->axyo", lv, lv), -e("xac,yco->axyo", lv, lv),
                 -e("xyc,cao->axyo", fcom, mA)),
            3,
        ),
        Equation(
            "C5",
            _sum(F, e("xyt,tzo->xyzo", dot, f), -e("yzt,xto->xyzo", dot, f),
                 -e("yxt,tzo->xyzo", dot, f), e("xzt,yto->xyzo", dot, f),
                 e("xyc,zco->xyzo", fcom, rv), -e("yzc,xco->xyzo", f, lv),
                 e("xzc,yco->xyzo", f, lv)),
            zero,
            3,
        ),
    ]
    if kind == "novikov":
        eqs += [
            Equation("CN1", e("xac,cbo->abxo", lv, mA), e("xbc,cao->abxo", lv, mA), 3),
            Equation("CN2", e("xac,cbo->abxo", rv, mA), e("abc,xco->abxo", mA, rv), 3),
            Equation("CN3", e("xac,yco->axyo", rv, rv), e("yac,xco->axyo", rv, rv), 3),
            Equation(
                "CN4",
                e("xac,yco->axyo", lv, rv),
                F.reduce(e("xyc,cao->axyo", f, mA) + e("xyz,zao->axyo", dot, lv)),
                3,
            ),
            Equation(
                "CN5",
                F.reduce(e("xyc,zco->xyzo", f, rv) + e("xyt,tzo->xyzo", dot, f)),
                F.reduce(e("xzc,yco->xyzo", f, rv) + e("xzt,tyo->xyzo", dot, f)),
                3,
            ),
        ]
    return eqs


def bicrossed_conditions(F: FieldSpec, b: Blocks, kind: str) -> list[Equation]:
    """Matched-pair conditions for a datum with f = 0: V is an algebra of the kind,
    (l_A, r_A, V) and (l_V, r_V, A) are bimodules, plus L1, L3, L6, L8 (N1, N3, N6, N8)."""
    mA, la, ra, lv, rv, _, dot = b
    eqs = [Equation(f"V:{c.cid}", c.lhs, c.rhs, c.nfree) for c in identity_equations(F, dot, kind)]
    eqs += [Equation(f"bmA:{c.cid}", c.lhs, c.rhs, c.nfree) for c in bimodule_equations(F, mA, la, ra, kind)]
    eqs += [Equation(f"bmV:{c.cid}", c.lhs, c.rhs, c.nfree) for c in bimodule_equations(F, dot, lv, rv, kind)]
    keep = {"L1", "L3", "L6", "L8"}
    eqs += [c for c in l_conditions(F, b) if c.cid in keep]
    if kind == "novikov":
        keep = {"N1", "N3", "N6", "N8"}
        eqs += [c for c in n_conditions(F, b) if c.cid in keep]
    return eqs


CASES = ("general", "twisted", "crossed", "bicrossed")


def extending_equations(F: FieldSpec, b: Blocks, kind: str, case: str = "general") -> list[Equation]:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if case == "general":
        eqs = l_conditions(F, b)
        if kind == "novikov":
            eqs += n_conditions(F, b)
        return eqs
    if case == "twisted":
        return twisted_conditions(F, b, kind)
    if case == "crossed":
        return crossed_conditions(F, b, kind)
    if case == "bicrossed":
        return bicrossed_conditions(F, b, kind)
    raise ValueError(f"unknown case {case!r}")


def _require_case_shape(datum: ExtendingDatum, case: str):
    def zero(name):
        return not np.any(np.asarray(getattr(datum, name)) != 0)

    need = {
        "twisted": ("la", "ra", "lv", "rv"),
        "crossed": ("la", "ra"),
        "bicrossed": ("f",),
    }.get(case, ())
    bad = [n for n in need if not zero(n)]
    if bad:
        raise DatumInvalid(f"{case} case needs trivial {', '.join(bad)}")


def check_extending(datum: ExtendingDatum, kind: str, case: str = "general") -> CheckReport:
    """Evaluate L1..L10 (plus N1..N10 for Novikov) on all basis tuples."""
    base = check_identity(datum.A, kind)
    if not base:
        raise BaseAlgebraInvalid(f"base algebra is not {kind}: {base.witness}")
    _require_case_shape(datum, case)
    return report_from(datum.field, extending_equations(datum.field, datum.blocks, kind, case))


def batch_extending_verdict(F: FieldSpec, b: Blocks, kind: str, case: str = "general") -> np.ndarray:
    batch = np.broadcast_shapes(*(np.shape(t)[:-3] for t in b))
    return batch_verdict(F, extending_equations(F, b, kind, case), batch)


def batch_direct_verdict(F: FieldSpec, b: Blocks, kind: str) -> np.ndarray:
    sc = unified_sc(F, b)
    return batch_verdict(F, identity_equations(F, sc, kind), sc.shape[:-3])


def oracle_equivalence(datum: ExtendingDatum, kind: str) -> dict:
    """Condition-checker verdict next to the direct identity check on the unified product."""
    checker = bool(check_extending(datum, kind))
    direct = bool(check_identity(unified_product(datum).alg, kind))
    return {"checker": checker, "direct": direct}


# -- extraction ---------------------------------------------------------------


@dataclass
class Extraction:
    datum: ExtendingDatum
    iso: MorphismWitness


def split_blocks(F: FieldSpec, sc: np.ndarray, nA: int) -> Blocks:
    """Read the datum tensors off a product whose first nA basis vectors span A."""
    n = sc.shape[-1]
    A_, V_ = slice(0, nA), slice(nA, n)
    return Blocks(
        sc[..., A_, A_, A_],
        sc[..., A_, V_, V_],
        _sw(sc[..., V_, A_, V_]),
        sc[..., V_, A_, A_],
        _sw(sc[..., A_, V_, A_]),
        sc[..., V_, V_, A_],
        sc[..., V_, V_, V_],
    )


def extract_datum(E: Algebra, sub_basis) -> Extraction:
    """Extract the datum of E relative to the coordinate subspace spanned by ``sub_basis``.

    The complement V is spanned by the remaining basis vectors (in order), and p
    is the coordinate projection onto A along V.  The returned witness is the
    map (a, x) -> a + x from the unified product back to E.
    """
    F = E.field
    sub = list(sub_basis)
    if len(set(sub)) != len(sub) or any(not 0 <= i < E.dim for i in sub):
        raise NotSubalgebra(f"bad sub-basis {sub_basis!r}")
    split = Split.of(sub, E.dim)
    perm = list(split.sub) + list(split.comp)
    P = E.permuted(perm)
    nA = len(sub)
    leak = P.sc[:nA, :nA, nA:]
    if np.any(leak != 0):
        raise NotSubalgebra("the span of the sub-basis is not closed under the product")
    b = split_blocks(F, P.sc, nA)
    labels = tuple(E.basis_names()[i] for i in split.sub)
    if labels == tuple(f"e{i + 1}" for i in range(nA)):
        labels = None
    A = Algebra(F, b.mA, labels)
    datum = ExtendingDatum(A, b.la, b.ra, b.lv, b.rv, b.f, b.dot)
    phi = F.zeros((E.dim, E.dim))
    for j, target in enumerate(perm):
        phi[target, j] = F.one
    src_split = Split(tuple(range(nA)), tuple(range(nA, E.dim)))
    iso = MorphismWitness(phi, stabilizes=True, costabilizes=True, split=split, src_split=src_split)
    return Extraction(datum, iso)


# -- (lambda, mu)-morphisms -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class DatumMorphismWitness:
    """lam: nA x nV matrix (lambda: V -> A), mu: nV x nV matrix (mu: V -> V)."""

    lam: np.ndarray
    mu: np.ndarray


def datum_morphism_equations(F: FieldSpec, b1: Blocks, b2: Blocks, lam_m, mu_m) -> list[Equation]:
    """Conditions er1..er6 for phi(a, x) = (a + lambda(x), mu(x)) from datum 1 to datum 2.

    Variables: (a, x) for er1-er4 and (x, y) for er5-er6.
    """
    e = F.ein
    mA = b1.mA
    lam = np.swapaxes(np.asarray(lam_m), -1, -2)  # lam[x, o]
    mu = np.swapaxes(np.asarray(mu_m), -1, -2)    # mu[x, w]
    eqs = [
        Equation(
            "er1",
            F.reduce(_sw(b1.rv) + e("axy,yo->axo", b1.la, lam)),
            F.reduce(e("xc,aco->axo", lam, mA) + e("xy,yao->axo", mu, b2.rv)),
            2,
        ),
        Equation("er2", e("axy,yw->axw", b1.la, mu), e("xy,ayw->axw", mu, b2.la), 2),
        Equation(
            "er3",
            F.reduce(_sw(b1.lv) + e("axy,yo->axo", b1.ra, lam)),
            F.reduce(e("xc,cao->axo", lam, mA) + e("xy,yao->axo", mu, b2.lv)),
            2,
        ),
        Equation("er4", e("axy,yw->axw", b1.ra, mu), e("xy,ayw->axw", mu, b2.ra), 2),
    ]
    lam_lam = e("xdo,yd->xyo", e("xc,cdo->xdo", lam, mA), lam)
    lv_term = e("xco,yc->xyo", e("xz,zco->xco", mu, b2.lv), lam)
    rv_term = _sw(e("yco,xc->yxo", e("yz,zco->yco", mu, b2.rv), lam), -3, -2)
    f_term = e("xto,yt->xyo", e("xz,zto->xto", mu, b2.f), mu)
    eqs.append(Equation(
        "er5",
        F.reduce(b1.f + e("xyz,zo->xyo", b1.dot, lam)),
        _sum(F, lam_lam, lv_term, rv_term, f_term),
        2,
    ))
    dot_term = e("xtw,yt->xyw", e("xz,ztw->xtw", mu, b2.dot), mu)
    la_term = e("xzw,yz->xyw", e("xc,czw->xzw", lam, b2.la), mu)
    ra_term = _sw(e("yzw,xz->yxw", e("yc,czw->yzw", lam, b2.ra), mu), -3, -2)
    eqs.append(Equation(
        "er6",
        e("xyz,zw->xyw", b1.dot, mu),
        _sum(F, dot_term, la_term, ra_term),
        2,
    ))
    return eqs


def _check_pair_shapes(d1: ExtendingDatum, d2: ExtendingDatum, w: DatumMorphismWitness | None = None):
    if d1.A != d2.A:
        raise ShapeMismatch("datums must share the base algebra")
    if d1.vdim != d2.vdim:
        raise ShapeMismatch("datums must share the complement dimension")
    if w is not None:
        nA, nV = d1.A.dim, d1.vdim
        if np.shape(w.lam) != (nA, nV) or np.shape(w.mu) != (nV, nV):
            raise ShapeMismatch(f"witness shapes {np.shape(w.lam)}, {np.shape(w.mu)}")


def check_datum_morphism(d1: ExtendingDatum, d2: ExtendingDatum, w: DatumMorphismWitness) -> CheckReport:
    _check_pair_shapes(d1, d2, w)
    F = d1.field
    info = {
        "mu_invertible": is_invertible(F, w.mu),
        "mu_identity": bool(np.array_equal(np.asarray(w.mu), F.eye(d1.vdim))),
    }
    return report_from(F, datum_morphism_equations(F, d1.blocks, d2.blocks, w.lam, w.mu), info)


def datum_morphism_map(F: FieldSpec, nA: int, w: DatumMorphismWitness) -> np.ndarray:
    """The matrix of phi(a, x) = (a + lambda(x), mu(x)) on A x V."""
    nV = np.shape(w.mu)[0]
    phi = F.zeros((nA + nV, nA + nV))
    phi[:nA, :nA] = F.eye(nA)
    phi[:nA, nA:] = w.lam
    phi[nA:, nA:] = w.mu
    return phi


def check_datum_morphism_direct(d1: ExtendingDatum, d2: ExtendingDatum, w: DatumMorphismWitness) -> CheckReport:
    """The same question answered by checking phi_{lam,mu} as an algebra map."""
    _check_pair_shapes(d1, d2, w)
    u1, u2 = unified_product(d1), unified_product(d2)
    phi = datum_morphism_map(d1.field, d1.A.dim, w)
    return check_morphism(u1.alg, u2.alg, MorphismWitness(phi, stabilizes=True, split=u1.split))


def check_datum_equivalence(d1: ExtendingDatum, d2: ExtendingDatum, w: DatumMorphismWitness) -> dict:
    rep = check_datum_morphism(d1, d2, w)
    ok = rep.passed
    return {
        "equivalent": ok and rep.info["mu_invertible"],
        "cohomologous": ok and rep.info["mu_identity"],
    }


# -- derived Lie datum ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LieExtendingDatum:
    """lact[x, a, w]: x <| a;  ract[x, a, o]: x |> a;  g2[x, y, o]; brk[x, y, w]."""

    lact: np.ndarray
    ract: np.ndarray
    g2: np.ndarray
    brk: np.ndarray


def derive_lie_datum(datum: ExtendingDatum, kind: str = "left_symmetric") -> LieExtendingDatum:
    rep = check_extending(datum, kind)
    if not rep:
        raise DatumInvalid(f"datum is not an extending structure: {rep.witness}")
    F = datum.field
    return LieExtendingDatum(
        lact=F.reduce(_sw(datum.la) - _sw(datum.ra)),
        ract=F.reduce(datum.lv - datum.rv),
        g2=F.reduce(datum.f - _sw(datum.f)),
        brk=F.reduce(datum.dot - _sw(datum.dot)),
    )


def lie_datum_bracket(F: FieldSpec, lie_A: Algebra, ld: LieExtendingDatum) -> np.ndarray:
    """Bracket on g(A) x V assembled from the Lie datum.

    [(a,x),(b,y)] = ([a,b] + x|>b - y|>a + g(x,y),  {x,y} + y<|a - x<|b)
    """
    nA = lie_A.dim
    nV = ld.brk.shape[0]
    n = nA + nV
    A_, V_ = slice(0, nA), slice(nA, n)
    E = F.zeros((n, n, n))
    E[A_, A_, A_] = lie_A.sc
    E[A_, V_, A_] = F.reduce(-_sw(ld.ract))   # [(a,0),(0,y)] = (-y|>a, y<|a)
    E[A_, V_, V_] = _sw(ld.lact)
    E[V_, A_, A_] = ld.ract                    # [(0,x),(b,0)] = (x|>b, -x<|b)
    E[V_, A_, V_] = F.reduce(-ld.lact)
    E[V_, V_, A_] = ld.g2
    E[V_, V_, V_] = ld.brk
    return E
