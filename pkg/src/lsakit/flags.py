"""Codimension-one (flag) extending structures.

A flag datum of an n-dimensional algebra A is (h, g, D, T, a0, alpha): two
covectors, two linear maps (column j = image of e_j), a vector and a scalar.
Through flag_to_datum it is the extending datum by a 1-dimensional V = k x
with l_A(a)x = h(a)x, r_A(a)x = g(a)x, l_V(x) = D, r_V(x) = T,
f(x, x) = a0 and x.x = alpha x.

Batched helpers work on "packed" flags: integer rows laid out as
(h | g | D row-major | T row-major | a0 | alpha).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import Algebra, check_identity
from .errors import BaseAlgebraInvalid, DatumInvalid, EnumerationTooLarge, ShapeMismatch
from .field import FieldSpec, digits
from .report import CheckReport, Equation, batch_verdict, report_from
from .unified import (
    Blocks,
    DatumMorphismWitness,
    ExtendingDatum,
    check_datum_equivalence,
    check_datum_morphism_direct,
)

DEFAULT_CAP = 10**8


@dataclass(frozen=True, eq=False)
class FlagDatum:
    base: Algebra
    h: np.ndarray
    g: np.ndarray
    D: np.ndarray
    T: np.ndarray
    a0: np.ndarray
    alpha: object

    def __post_init__(self):
        F = self.base.field
        n = self.base.dim
        for name, shape in (("h", (n,)), ("g", (n,)), ("D", (n, n)), ("T", (n, n)), ("a0", (n,))):
            arr = np.asarray(getattr(self, name), dtype=object)
            arr = F.array(arr.tolist()) if arr.size else F.zeros(shape)
            if arr.shape != shape:
                raise ShapeMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            arr = np.array(arr, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "alpha", F(self.alpha))

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    @classmethod
    def zero(cls, base: Algebra) -> FlagDatum:
        F, n = base.field, base.dim
        return cls(base, F.zeros(n), F.zeros(n), F.zeros((n, n)), F.zeros((n, n)), F.zeros(n), F.zero)

    def packed(self) -> np.ndarray:
        """Flat row (h | g | D row-major | T row-major | a0 | alpha)."""
        F = self.field
        parts = [self.h, self.g, self.D.ravel(), self.T.ravel(), self.a0, F.array([self.alpha])]
        return np.concatenate(parts)

    @classmethod
    def unpack(cls, base: Algebra, row) -> FlagDatum:
        return cls(base, *_split_packed(np.asarray(row), base.dim))

    def same_as(self, other: FlagDatum) -> bool:
        return self.base == other.base and np.array_equal(self.packed(), other.packed())

    def to_field(self, F: FieldSpec) -> FlagDatum:
        src = self.field
        return FlagDatum(
            self.base.to_field(F),
            *(F.convert(getattr(self, n), src) for n in ("h", "g", "D", "T", "a0")),
            F(self.alpha) if src == F else F.array([self.alpha])[0],
        )


def packed_width(n: int) -> int:
    return 2 * n + 2 * n * n + n + 1


def _split_packed(rows: np.ndarray, n: int):
    """Split packed rows (..., width) into h, g, D, T, a0, alpha."""
    o = 0
    h = rows[..., o:o + n]; o += n
    g = rows[..., o:o + n]; o += n
    D = rows[..., o:o + n * n].reshape(rows.shape[:-1] + (n, n)); o += n * n
    T = rows[..., o:o + n * n].reshape(rows.shape[:-1] + (n, n)); o += n * n
    a0 = rows[..., o:o + n]; o += n
    alpha = rows[..., o]
    return h, g, D, T, a0, alpha


def _pack(F: FieldSpec, h, g, D, T, a0, alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=F.dtype)
    batch = np.broadcast_shapes(
        np.shape(h)[:-1], np.shape(g)[:-1], np.shape(D)[:-2], np.shape(T)[:-2],
        np.shape(a0)[:-1], alpha.shape,
    )

    def flat(m, k):
        return np.broadcast_to(m, batch + np.shape(m)[-k:]).reshape(batch + (-1,))

    parts = [flat(h, 1), flat(g, 1), flat(D, 2), flat(T, 2), flat(a0, 1),
             np.broadcast_to(alpha, batch)[..., None]]
    return np.concatenate(parts, axis=-1)


# -- conditions ----------------------------------------------------------------


def flag_equations(F: FieldSpec, mA, h, g, D, T, a0, alpha, kind: str) -> list[Equation]:
    """Algebra-morphism condition on g plus es1-es5 (and df1-df5 for Novikov).

    Variables (a, b) for two-argument conditions and (a,) for one-argument ones.
    Inputs may carry leading batch axes.
    """
    e = F.ein
    Dt = np.swapaxes(D, -1, -2)  # Dt[a, o]: coefficient of o in D(e_a)
    Tt = np.swapaxes(T, -1, -2)
    al = np.asarray(alpha)
    gh = F.reduce(g - h)
    eqs = [
        Equation("gmor", e("abc,c->ab", mA, g), F.times(g[..., :, None], g[..., None, :]), 2, vector=False),
        Equation("es1", e("abc,c->ab", mA, h), e("bac,c->ab", mA, h), 2, vector=False),
    ]
    D_of = lambda X: e("ac,co->ao", X, Dt)   # D(X(a))
    T_of = lambda X: e("ac,co->ao", X, Tt)   # T(X(a))
    es2_rhs = (
        e("ac,cbo->abo", Dt, mA)
        + e("bc,aco->abo", Dt, mA)
        + F.times(gh[..., :, None, None], Dt[..., None, :, :])
        + F.times(g[..., None, :, None], Tt[..., :, None, :])
        - e("ac,cbo->abo", Tt, mA)
    )
    eqs.append(Equation("es2", e("abc,co->abo", mA, Dt), F.reduce(es2_rhs), 2))
    es3_lhs = e("abc,co->abo", mA, Tt) - e("bac,co->abo", mA, Tt)
    es3_rhs = (
        F.times(h[..., None, :, None], Tt[..., :, None, :])
        - F.times(h[..., :, None, None], Tt[..., None, :, :])
        + e("bc,aco->abo", Tt, mA)
        - e("ac,bco->abo", Tt, mA)
    )
    eqs.append(Equation("es3", F.reduce(es3_lhs), F.reduce(es3_rhs), 2))
    gh2 = F.reduce(g - 2 * h)
    es4_rhs = (
        T_of(Dt) - D_of(Tt)
        + e("aco,c->ao", mA, a0)
        + F.times(gh2[..., :, None], a0[..., None, :])
        + F.times(al[..., None, None], Tt)
    )
    eqs.append(Equation("es4", T_of(Tt), F.reduce(es4_rhs), 1))
    hD = e("ac,c->a", Dt, h)
    hT = e("ac,c->a", Tt, h)
    gT = e("ac,c->a", Tt, g)
    eqs.append(Equation(
        "es5",
        F.reduce(hD - hT),
        F.reduce(gT + F.times(al[..., None], gh * -1)),
        1,
        vector=False,
    ))
    if kind == "novikov":
        df1_l = e("ac,cbo->abo", Dt, mA) + F.times(g[..., :, None, None], Dt[..., None, :, :])
        df1_r = e("bc,cao->abo", Dt, mA) + F.times(g[..., None, :, None], Dt[..., :, None, :])
        eqs.append(Equation("df1", F.reduce(df1_l), F.reduce(df1_r), 2))
        df2_r = e("ac,cbo->abo", Tt, mA) + F.times(h[..., :, None, None], Dt[..., None, :, :])
        eqs.append(Equation("df2", e("abc,co->abo", mA, Tt), F.reduce(df2_r), 2))
        eqs.append(Equation(
            "df3", e("abc,c->ab", mA, h), F.times(h[..., :, None], g[..., None, :]), 2, vector=False,
        ))
        df4_r = (
            e("c,cao->ao", a0, mA)
            + F.times(al[..., None, None], Dt)
            - F.times(g[..., :, None], a0[..., None, :])
        )
        eqs.append(Equation("df4", T_of(Dt), F.reduce(df4_r), 1))
        eqs.append(Equation("df5", hD, F.zeros(()), 1, vector=False))
    elif kind != "left_symmetric":
        raise ValueError(f"unknown kind {kind!r}")
    return eqs


def check_flag(fd: FlagDatum, kind: str) -> CheckReport:
    base = check_identity(fd.base, kind)
    if not base:
        raise BaseAlgebraInvalid(f"base algebra is not {kind}: {base.witness}")
    F = fd.field
    eqs = flag_equations(F, fd.base.sc, fd.h, fd.g, fd.D, fd.T, fd.a0, F.array([fd.alpha])[0], kind)
    return report_from(F, eqs)


def batch_flag_verdict(F: FieldSpec, mA, rows: np.ndarray, kind: str) -> np.ndarray:
    n = mA.shape[-1]
    h, g, D, T, a0, alpha = _split_packed(rows, n)
    return batch_verdict(F, flag_equations(F, mA, h, g, D, T, a0, alpha, kind), rows.shape[:-1])


def flag_to_datum(fd: FlagDatum) -> ExtendingDatum:
    F = fd.field
    n = fd.base.dim
    la = fd.h.reshape(n, 1, 1)
    ra = fd.g.reshape(n, 1, 1)
    lv = fd.D.T.reshape(1, n, n)
    rv = fd.T.T.reshape(1, n, n)
    f = fd.a0.reshape(1, 1, n)
    dot = F.array([[[fd.alpha]]])
    return ExtendingDatum(fd.base, la, ra, lv, rv, f, dot)


def flag_blocks(mA, rows: np.ndarray) -> Blocks:
    """Batched flag_to_datum: packed rows (..., width) to datum blocks with nV = 1."""
    n = mA.shape[-1]
    h, g, D, T, a0, alpha = _split_packed(rows, n)
    batch = rows.shape[:-1]
    return Blocks(
        mA,
        h.reshape(batch + (n, 1, 1)), g.reshape(batch + (n, 1, 1)),
        np.swapaxes(D, -1, -2).reshape(batch + (1, n, n)), np.swapaxes(T, -1, -2).reshape(batch + (1, n, n)),
        a0.reshape(batch + (1, 1, n)), alpha.reshape(batch + (1, 1, 1)),
    )


def datum_to_flag(datum: ExtendingDatum) -> FlagDatum:
    if datum.vdim != 1:
        raise ShapeMismatch("flag datums need a 1-dimensional complement")
    n = datum.A.dim
    return FlagDatum(
        datum.A,
        datum.la.reshape(n), datum.ra.reshape(n),
        datum.lv.reshape(n, n).T, datum.rv.reshape(n, n).T,
        datum.f.reshape(n), datum.dot.reshape(())[()],
    )


# -- equivalence ----------------------------------------------------------------


@dataclass(frozen=True)
class FlagEquivWitness:
    beta: object
    b0: tuple


def flag_transform(F: FieldSpec, mA, primed_rows, beta, b0) -> np.ndarray:
    """The unprimed flag that (beta, b0) relates to the primed one.

    D(a) = b0 o a + beta D'(a) - g(a) b0,  T(a) = a o b0 + beta T'(a) - h(a) b0,
    alpha = beta alpha' + h'(b0) + g'(b0),
    a0 = b0 o b0 + beta D'(b0) + beta T'(b0) + beta^2 a0' - alpha b0.
    Batched: ``primed_rows`` (..., width), ``beta`` (...), ``b0`` (..., n).
    """
    e = F.ein
    n = mA.shape[-1]
    h, g, D, T, a0, alpha = _split_packed(primed_rows, n)
    beta = np.asarray(beta)
    bt = beta[..., None, None]
    left = e("c,cao->oa", b0, mA)    # matrix of a -> b0 o a
    right = e("c,aco->oa", b0, mA)   # matrix of a -> a o b0
    D_new = F.reduce(left + F.times(bt, D) - F.times(b0[..., :, None], g[..., None, :]))
    T_new = F.reduce(right + F.times(bt, T) - F.times(b0[..., :, None], h[..., None, :]))
    alpha_new = F.reduce(F.times(beta, alpha) + e("c,c->", h, b0) + e("c,c->", g, b0))
    bb = e("c,co->o", b0, e("cdo,d->co", mA, b0))
    Db = e("oc,c->o", D, b0)
    Tb = e("oc,c->o", T, b0)
    b = beta[..., None]
    a0_new = F.reduce(
        bb + F.times(b, Db) + F.times(b, Tb) + F.times(F.times(b, b), a0)
        - F.times(alpha_new[..., None], b0)
    )
    return _pack(F, h, g, D_new, T_new, a0_new, alpha_new)


def check_flag_equiv(fd1: FlagDatum, fd2: FlagDatum, w: FlagEquivWitness, mode: str = "equiv") -> CheckReport:
    """Decide fd1 == fd2 under the witness (beta, b0); fd2 plays the primed role."""
    if not fd1.base == fd2.base:
        raise ShapeMismatch("flag datums must share the base algebra")
    F = fd1.field
    n = fd1.base.dim
    b0 = F.array(list(w.b0))
    if b0.shape != (n,):
        raise ShapeMismatch(f"b0 must have {n} coordinates")
    beta = F(w.beta)
    if mode not in ("equiv", "cohom"):
        raise ValueError(f"unknown mode {mode!r}")
    eqs = [
        Equation("h", fd1.h, fd2.h, 1, vector=False),
        Equation("g", fd1.g, fd2.g, 1, vector=False),
    ]
    if beta == F.zero:
        raise ValueError("beta must be nonzero")
    if mode == "cohom":
        eqs.append(Equation("beta", F.array([beta]), F.array([F.one]), 0))
    mA = fd1.base.sc
    # evaluate q1..q4 in fd1's h, g (they must equal fd2's anyway)
    h2, g2 = fd2.h, fd2.g
    e = F.ein
    left = e("c,cao->ao", b0, mA)
    right = e("c,aco->ao", b0, mA)
    D2t, T2t = fd2.D.T, fd2.T.T
    q1 = F.reduce(left + F.times(beta, D2t) - F.times(fd1.g[:, None], b0[None, :]))
    q2 = F.reduce(right + F.times(beta, T2t) - F.times(fd1.h[:, None], b0[None, :]))
    eqs.append(Equation("q1", fd1.D.T, q1, 1))
    eqs.append(Equation("q2", fd1.T.T, q2, 1))
    bb = fd1.base.product(b0, b0)
    q3 = F.reduce(
        bb + F.times(beta, fd2.D.dot(b0)) + F.times(beta, fd2.T.dot(b0))
        + F.times(F.times(beta, beta), fd2.a0) - F.times(fd1.alpha, b0)
    )
    eqs.append(Equation("q3", fd1.a0[None, :], q3[None, :], 0))
    q4 = F.reduce(F.times(beta, fd2.alpha) + e("c,c->", h2, b0) + e("c,c->", g2, b0))
    eqs.append(Equation("q4", F.array([fd1.alpha]), np.asarray(q4, dtype=F.dtype).reshape(1), 0))
    info = {"mode": mode}
    return report_from(F, [_unbatch_scalar(F, q) for q in eqs], info)


def _unbatch_scalar(F, eq: Equation) -> Equation:
    """Normalize zero-free-variable equations to shape (out,) so reports stay uniform."""
    if eq.nfree == 0:
        lhs = np.asarray(eq.lhs).reshape(-1)
        rhs = np.asarray(eq.rhs).reshape(-1)
        return Equation(eq.cid, lhs, rhs, 0, vector=True)
    return eq


def flag_equiv_via_datums(fd1: FlagDatum, fd2: FlagDatum, w: FlagEquivWitness) -> dict:
    """The same relation decided through the lifted datums with lambda(x) = b0, mu(x) = beta x."""
    F = fd1.field
    lam = F.array([[c] for c in w.b0])
    mu = F.array([[w.beta]])
    dw = DatumMorphismWitness(lam, mu)
    d1, d2 = flag_to_datum(fd1), flag_to_datum(fd2)
    out = check_datum_equivalence(d1, d2, dw)
    out["morphism"] = bool(check_datum_morphism_direct(d1, d2, dw))
    return out


# -- enumeration and classification ----------------------------------------------


@dataclass
class FlagClass:
    representative: int
    members: list[int]
    witnesses: dict  # member index -> FlagEquivWitness


@dataclass
class ClassificationReport:
    field: FieldSpec
    candidates_checked: int
    valid: list[FlagDatum]
    classes: list[FlagClass] = field(default_factory=list)
    kind: str = "left_symmetric"
    mode: str | None = None


def flag_space_size(p: int, n: int) -> int:
    return p ** packed_width(n)


def enumerate_flags(base: Algebra, kind: str, cap: int = DEFAULT_CAP, chunk: int = 1 << 16) -> ClassificationReport:
    """Test every packed tuple in lexicographic order and keep the flag datums."""
    F = base.field
    if not F.is_prime:
        raise ValueError("enumeration needs a prime field")
    ok = check_identity(base, kind)
    if not ok:
        raise BaseAlgebraInvalid(f"base algebra is not {kind}: {ok.witness}")
    n = base.dim
    width = packed_width(n)
    total = F.p ** width
    if total > cap:
        raise EnumerationTooLarge(total, cap, "flag-datum space")
    valid_rows = []
    for start in range(0, total, chunk):
        rows = digits(F, start, min(total, start + chunk), width)
        mask = batch_flag_verdict(F, base.sc, rows, kind)
        valid_rows.extend(rows[mask])
    valid = [FlagDatum.unpack(base, r) for r in valid_rows]
    return ClassificationReport(F, total, valid, kind=kind)


def _row_key(F: FieldSpec, rows: np.ndarray) -> np.ndarray:
    """Lexicographic rank of packed rows as Python ints (exact for any width)."""
    keys = np.zeros(rows.shape[:-1], dtype=object)
    for k in range(rows.shape[-1]):
        keys = keys * F.p + rows[..., k].astype(object)
    return keys


def flag_witness_space(F: FieldSpec, n: int, mode: str):
    betas = [1] if mode == "cohom" else list(range(1, F.p))
    b0s = digits(F, 0, F.p ** n, n)
    beta = np.repeat(np.array(betas, dtype=np.int64), len(b0s))
    b0 = np.tile(b0s, (len(betas), 1))
    return beta, b0


def classify_flags(report: ClassificationReport, kind: str | None = None, mode: str = "equiv",
                   cap: int = DEFAULT_CAP) -> ClassificationReport:
    """Partition the valid flags into classes, each member carrying a verified witness.

    The witness relation is closed under composition and inversion, so the
    class of a representative is its orbit under all (beta, b0); each orbit
    is computed in one batched transform and every stored witness is then
    re-verified with check_flag_equiv.
    """
    F = report.field
    kind = kind or report.kind
    valid = report.valid
    if not valid:
        return ClassificationReport(F, report.candidates_checked, [], [], kind, mode)
    base = valid[0].base
    n = base.dim
    beta, b0 = flag_witness_space(F, n, mode)
    if len(beta) * len(valid) > cap:
        raise EnumerationTooLarge(len(beta) * len(valid), cap, "witness search")
    rows = np.stack([fd.packed() for fd in valid])
    keys = _row_key(F, rows)
    index = {k: i for i, k in enumerate(keys.tolist())}
    cls_of = [-1] * len(valid)
    classes: list[FlagClass] = []
    for i in range(len(valid)):
        if cls_of[i] >= 0:
            continue
        images = flag_transform(F, base.sc, rows[i][None, :], beta, b0)
        img_keys = _row_key(F, images).tolist()
        fc = FlagClass(i, [], {})
        for w_idx, k in enumerate(img_keys):
            j = index.get(k)
            if j is None:
                raise DatumInvalid("a witness image left the valid set")
            if cls_of[j] >= 0:
                if cls_of[j] != len(classes):
                    raise DatumInvalid("orbits overlap; the relation is not an equivalence")
                continue
            cls_of[j] = len(classes)
            fc.members.append(j)
            fc.witnesses[j] = FlagEquivWitness(int(beta[w_idx]), tuple(int(x) for x in b0[w_idx]))
        fc.members.sort()
        for j in fc.members:
            rep = check_flag_equiv(valid[j], valid[i], fc.witnesses[j], mode)
            if not rep:
                raise DatumInvalid(f"stored witness failed: {rep.witness}")
        classes.append(fc)
    return ClassificationReport(F, report.candidates_checked, valid, classes, kind, mode)


def find_flag_witness(fd1: FlagDatum, fd2: FlagDatum, mode: str = "equiv") -> FlagEquivWitness | None:
    """Exhaustive witness search over a prime field (complete, since dim V = 1)."""
    F = fd1.field
    if not F.is_prime:
        raise ValueError("witness search needs a prime field")
    beta, b0 = flag_witness_space(F, fd1.base.dim, mode)
    images = flag_transform(F, fd1.base.sc, fd2.packed()[None, :], beta, b0)
    hit = np.nonzero(np.all(images == fd1.packed(), axis=-1))[0]
    if not len(hit):
        return None
    k = hit[0]
    return FlagEquivWitness(int(beta[k]), tuple(int(x) for x in b0[k]))


# -- the Example-4.6 style family ----------------------------------------------------


def diagonal_family_flag(base: Algebra, b, c, d, e) -> FlagDatum:
    """h = g = 0, D = diag(c,b,c,b), T = diag(c,c,b,b), a0 = d e4, alpha = e."""
    F = base.field
    D = F.zeros((4, 4))
    T = F.zeros((4, 4))
    for i, v in enumerate((c, b, c, b)):
        D[i, i] = F(v)
    for i, v in enumerate((c, c, b, b)):
        T[i, i] = F(v)
    a0 = F.zeros(4)
    a0[3] = F(d)
    return FlagDatum(base, F.zeros(4), F.zeros(4), D, T, a0, e)


def family_witness(F: FieldSpec, params, params_primed):
    """beta in k* with b = beta b', c = beta c', d = beta^2 d', e = beta e', or None.

    Witnesses of this family form have b0 = 0.  Over Q, beta is pinned by any
    nonzero among b', c', e'; otherwise only d = beta^2 d' constrains it.
    """
    b, c, d, e = (F(x) for x in params)
    b1, c1, d1, e1 = (F(x) for x in params_primed)
    pin = next(((x, y) for x, y in ((b, b1), (c, c1), (e, e1)) if y != F.zero), None)
    candidates = []
    if pin is not None:
        candidates = [F.div(*pin)]
    elif F.is_prime:
        candidates = list(range(1, F.p))
    elif d1 == F.zero:
        candidates = [F.one]
    else:
        r = Fraction(d) / Fraction(d1)
        root = _rational_sqrt(r)
        candidates = [root] if root is not None else []
    for beta in candidates:
        beta = F(beta)
        if beta == F.zero:
            continue
        if (b == F.mul(beta, b1) and c == F.mul(beta, c1) and e == F.mul(beta, e1)
                and d == F.mul(F.mul(beta, beta), d1)):
            return beta
    return None


def _rational_sqrt(r: Fraction):
    from math import isqrt

    if r <= 0:
        return None
    n, m = r.numerator, r.denominator
    a, b = isqrt(n), isqrt(m)
    return Fraction(a, b) if a * a == n and b * b == m else None
