"""Matched pairs, deformation maps and the classification of complements.

A matched pair (A, B, l_A, r_A, l_B, r_B) is stored as an extending datum with
f = 0 and dot = the product of B.  A deformation map phi: B -> A is an
nA x nB matrix; internally the tensor ph[x, o] = coefficient of e_o in phi(e_x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import Algebra, MorphismWitness, check_identity, check_morphism, subalgebra_test
from .errors import (
    BaseAlgebraInvalid,
    EnumerationTooLarge,
    MatchedPairInvalid,
    NotDeformationMap,
    NotInvertible,
    ShapeMismatch,
)
from .field import FieldSpec, digits, general_linear_group, is_invertible, mat_invert, mat_rank
from .report import CheckReport, Equation, batch_verdict, report_from
from .unified import ExtendingDatum, check_extending, unified_product

DEFAULT_CAP = 10**8


@dataclass(frozen=True, eq=False)
class MatchedPair:
    A: Algebra
    B: Algebra
    la: np.ndarray  # la[a, y, w]: coefficient of w in l_A(a) y
    ra: np.ndarray
    lb: np.ndarray  # lb[x, b, o]: coefficient of o in l_B(x) b
    rb: np.ndarray

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    @property
    def datum(self) -> ExtendingDatum:
        F = self.field
        nA, nB = self.A.dim, self.B.dim
        return ExtendingDatum(self.A, self.la, self.ra, self.lb, self.rb, F.zeros((nB, nB, nA)), self.B.sc)

    @classmethod
    def from_datum(cls, datum: ExtendingDatum, labels=None) -> MatchedPair:
        if np.any(np.asarray(datum.f) != 0):
            raise MatchedPairInvalid("a matched pair needs f = 0")
        B = Algebra(datum.field, datum.dot, labels)
        return cls(datum.A, B, datum.la, datum.ra, datum.lv, datum.rv)

    @classmethod
    def from_matrices(cls, A: Algebra, B: Algebra, lA, rA, lB, rB) -> MatchedPair:
        d = ExtendingDatum.from_matrices(A, B.dim, lA, rA, lB, rB, [], B.sc)
        return cls.from_datum(d, B.labels)

    def bicrossed(self) -> Algebra:
        return unified_product(self.datum).alg


def check_matched_pair(mp: MatchedPair, kind: str) -> CheckReport:
    """Delegates to the extending-datum checker; pass iff the bicrossed product is valid."""
    for name, alg in (("A", mp.A), ("B", mp.B)):
        rep = check_identity(alg, kind)
        if not rep:
            raise BaseAlgebraInvalid(f"{name} is not {kind}: {rep.witness}")
    return check_extending(mp.datum, kind)


# -- deformation maps -------------------------------------------------------------


def _ph(phi):
    return np.swapaxes(np.asarray(phi), -1, -2)


def deformation_equations(F: FieldSpec, mp: MatchedPair, phi) -> list[Equation]:
    """phi(x o y) - phi(x) o phi(y) = l_B(x)phi(y) + r_B(y)phi(x) - phi(l_A(phi x)y + r_A(phi y)x).

    ``phi`` may be a batch of matrices (..., nA, nB).
    """
    e = F.ein
    ph = _ph(phi)
    mA, mB = mp.A.sc, mp.B.sc
    lhs = e("xyz,zo->xyo", mB, ph) - e("xdo,yd->xyo", e("xc,cdo->xdo", ph, mA), ph)
    inner = e("xc,cyw->xyw", ph, mp.la) + np.swapaxes(e("yc,cxw->yxw", ph, mp.ra), -3, -2)
    rhs = (
        e("yc,xco->xyo", ph, mp.lb)
        + e("xc,yco->xyo", ph, mp.rb)
        - e("xyw,wo->xyo", F.reduce(inner), ph)
    )
    return [Equation("def", F.reduce(lhs), F.reduce(rhs), 2)]


def _require_pair(mp: MatchedPair, kind: str):
    try:
        rep = check_matched_pair(mp, kind)
    except BaseAlgebraInvalid as exc:
        raise MatchedPairInvalid(str(exc)) from None
    if not rep:
        raise MatchedPairInvalid(f"not a matched pair: {rep.witness}")


def _check_phi_shape(mp: MatchedPair, phi):
    if np.shape(phi) != (mp.A.dim, mp.B.dim):
        raise ShapeMismatch(f"deformation map must be {mp.A.dim} x {mp.B.dim}")


def check_deformation(mp: MatchedPair, phi, kind: str = "left_symmetric", validate_pair: bool = True) -> CheckReport:
    _check_phi_shape(mp, phi)
    if validate_pair:
        _require_pair(mp, kind)
    return report_from(mp.field, deformation_equations(mp.field, mp, phi))


def deformed_sc(F: FieldSpec, mp: MatchedPair, phi) -> np.ndarray:
    """Structure constants of x o_phi y = x o y + l_A(phi x)y + r_A(phi y)x (batched)."""
    e = F.ein
    ph = _ph(phi)
    extra = e("xc,cyw->xyw", ph, mp.la) + np.swapaxes(e("yc,cxw->yxw", ph, mp.ra), -3, -2)
    return F.reduce(mp.B.sc + extra)


@dataclass
class Deformation:
    Bphi: Algebra
    embedding: np.ndarray  # (nA + nB) x nB, column x = (phi(x), x)


def embedding_matrix(F: FieldSpec, phi) -> np.ndarray:
    phi = np.asarray(phi)
    return np.concatenate([phi, F.eye(phi.shape[1])], axis=0)


def deform(mp: MatchedPair, phi, kind: str = "left_symmetric") -> Deformation:
    rep = check_deformation(mp, phi, kind)
    if not rep:
        raise NotDeformationMap(f"not a deformation map: {rep.witness}")
    F = mp.field
    return Deformation(Algebra(F, deformed_sc(F, mp, phi), mp.B.labels), embedding_matrix(F, phi))


def complement_guarantees(mp: MatchedPair, phi, kind: str = "left_symmetric") -> dict:
    """Check that B_phi is valid and that its embedding is an A-complement isomorphic to it."""
    F = mp.field
    d = deform(mp, phi, kind)
    E = mp.bicrossed()
    nA = mp.A.dim
    emb = d.embedding
    sub = subalgebra_test(E, [emb[:, j] for j in range(emb.shape[1])])
    joint = np.concatenate([F.eye(E.dim)[:, :nA], emb], axis=1)
    spans = mat_rank(F, joint) == E.dim
    iso = check_morphism(d.Bphi, E, MorphismWitness(emb))
    return {
        "identity": bool(check_identity(d.Bphi, kind)),
        "subalgebra": sub.is_subalgebra,
        "trivial_intersection": spans,
        "spans": spans,
        "embedding_is_morphism": bool(iso),
        "embedding_injective": mat_rank(F, emb) == mp.B.dim,
    }


# -- equivalence of deformation maps ---------------------------------------------------


def deform_equiv_equations(F: FieldSpec, mp: MatchedPair, phi, psi, rho) -> list[Equation]:
    """rho(x o y) - rho(x) o rho(y) = l_A(psi rho x) rho y + r_A(psi rho y) rho x
    - rho(l_A(phi x) y) - rho(r_A(phi y) x)."""
    e = F.ein
    mB = mp.B.sc
    r = _ph(rho)
    ph, ps = _ph(phi), _ph(psi)
    lhs = e("xyz,zw->xyw", mB, r) - e("xdw,yd->xyw", e("xc,cdw->xdw", r, mB), r)
    q = e("xz,zo->xo", r, ps)  # psi(rho(x))
    t1 = e("xzw,yz->xyw", e("xc,czw->xzw", q, mp.la), r)
    t2 = np.swapaxes(e("yzw,xz->yxw", e("yc,czw->yzw", q, mp.ra), r), -3, -2)
    t3 = e("xyz,zw->xyw", e("xc,cyz->xyz", ph, mp.la), r)
    t4 = e("xyz,zw->xyw", np.swapaxes(e("yc,cxz->yxz", ph, mp.ra), -3, -2), r)
    rhs = t1 + t2 - t3 - t4
    return [Equation("equiv", F.reduce(lhs), F.reduce(rhs), 2)]


def check_deform_equiv(mp: MatchedPair, phi, psi, rho) -> CheckReport:
    F = mp.field
    _check_phi_shape(mp, phi)
    _check_phi_shape(mp, psi)
    if np.shape(rho) != (mp.B.dim, mp.B.dim):
        raise ShapeMismatch("rho must be square of size dim B")
    if not is_invertible(F, rho):
        raise NotInvertible("rho is not invertible")
    return report_from(F, deform_equiv_equations(F, mp, phi, psi, rho))


def deform_equiv_direct(mp: MatchedPair, phi, psi, rho) -> bool:
    """rho is an algebra isomorphism B_phi -> B_psi, decided on the deformed products."""
    F = mp.field
    Bphi = Algebra(F, deformed_sc(F, mp, phi))
    Bpsi = Algebra(F, deformed_sc(F, mp, psi))
    return bool(check_morphism(Bphi, Bpsi, MorphismWitness(rho))) and is_invertible(F, rho)


# -- enumeration and classification over F_p ----------------------------------------------


@dataclass
class ComplementClass:
    representative: int
    members: list[int]
    witnesses: dict  # member index -> rho with rho: B_rep -> B_member


@dataclass
class ComplementReport:
    field: FieldSpec
    deformation_maps: list
    candidates_checked: int
    classes: list[ComplementClass] = field(default_factory=list)

    @property
    def index(self) -> int:
        return len(self.classes)


def _need_prime(F: FieldSpec):
    if not F.is_prime:
        raise ValueError("exhaustive search needs a prime field")


def enumerate_deformations(mp: MatchedPair, kind: str = "left_symmetric", cap: int = DEFAULT_CAP,
                           chunk: int = 1 << 14) -> ComplementReport:
    F = mp.field
    _need_prime(F)
    nA, nB = mp.A.dim, mp.B.dim
    total = F.p ** (nA * nB)
    if total > cap:
        raise EnumerationTooLarge(total, cap, "space of linear maps B -> A")
    _require_pair(mp, kind)
    found = []
    for start in range(0, total, chunk):
        flat = digits(F, start, min(total, start + chunk), nA * nB)
        phis = flat.reshape(-1, nA, nB)
        ok = batch_verdict(F, deformation_equations(F, mp, phis), (len(phis),))
        found.extend(phis[ok])
    return ComplementReport(F, found, total)


@lru_cache(maxsize=None)
def _gl_with_inverses(p: int, n: int):
    F = FieldSpec.prime(p)
    G = general_linear_group(F, n)
    inv = np.stack([mat_invert(F, g) for g in G]) if len(G) else G
    return G, inv


def transport(F: FieldSpec, sc, rho, rho_inv) -> np.ndarray:
    """Structure constants of the product that makes rho an isomorphism from ``sc`` (batched in rho).

    new(a, b) = rho(rho^-1 a o rho^-1 b).
    """
    e = F.ein
    ri = _ph(rho_inv)  # ri[a, c]: coefficient of e_c in rho^-1(e_a)
    r = _ph(rho)
    t = e("ac,cdw->adw", ri, sc)
    t = e("adw,bd->abw", t, ri)
    return e("abw,wo->abo", t, r)


def _sc_keys(F: FieldSpec, scs: np.ndarray) -> list:
    flat = scs.reshape(scs.shape[0], -1)
    return [row.tobytes() for row in np.ascontiguousarray(flat)]


def partition_by_isomorphism(F: FieldSpec, scs: np.ndarray, cap: int = DEFAULT_CAP) -> list[ComplementClass]:
    """Group algebras (given as a stack of structure constants) into isomorphism classes.

    Each class is the orbit of its first member under GL(n, F_p); the stored
    witness for a member is rho: representative -> member.
    """
    n = scs.shape[-1]
    G, Ginv = _gl_with_inverses(F.p, n)
    if len(G) * len(scs) > cap:
        raise EnumerationTooLarge(len(G) * len(scs), cap, "isomorphism search")
    keys = _sc_keys(F, scs)
    by_key: dict = {}
    for i, k in enumerate(keys):
        by_key.setdefault(k, []).append(i)
    assigned = [-1] * len(scs)
    classes: list[ComplementClass] = []
    for i in range(len(scs)):
        if assigned[i] >= 0:
            continue
        orbit = transport(F, scs[i], G, Ginv)
        cls = ComplementClass(i, [], {})
        for g_idx, k in enumerate(_sc_keys(F, orbit)):
            for j in by_key.get(k, ()):
                if assigned[j] < 0:
                    assigned[j] = len(classes)
                    cls.members.append(j)
                    cls.witnesses[j] = G[g_idx]
        cls.members.sort()
        classes.append(cls)
    return classes


def classify_complements(mp: MatchedPair, kind: str = "left_symmetric", cap: int = DEFAULT_CAP) -> ComplementReport:
    """Deformation maps up to equivalence; the class count is the factorization index over F_p."""
    F = mp.field
    rep = enumerate_deformations(mp, kind, cap)
    nB = mp.B.dim
    if rep.deformation_maps:
        phis = np.stack(rep.deformation_maps)
        scs = deformed_sc(F, mp, phis)
    else:
        phis = np.zeros((0, mp.A.dim, nB), dtype=np.int64)
        scs = np.zeros((0, nB, nB, nB), dtype=np.int64)
    classes = partition_by_isomorphism(F, scs, cap)
    for c in classes:
        for j in c.members:
            rho = c.witnesses[j]
            if not check_deform_equiv(mp, phis[c.representative], phis[j], rho):
                raise MatchedPairInvalid("stored equivalence witness failed to verify")
    rep.classes = classes
    return rep


@dataclass
class BruteForceReport:
    field: FieldSpec
    complements: list  # each a (nA + nB) x nB matrix whose columns span the complement
    induced: list      # structure constants in that basis
    classes: list[ComplementClass]
    candidates_checked: int

    @property
    def index(self) -> int:
        return len(self.classes)


def brute_force_complements(E: Algebra, sub_basis, cap: int = DEFAULT_CAP) -> BruteForceReport:
    """All subalgebras complementary to the coordinate subalgebra ``sub_basis``, up to isomorphism.

    Every complement of A is the graph {v + u(v)} of a unique linear map u from
    the coordinate complement V to A, so the search runs over all u; closure
    under the product is tested directly in E.
    """
    F = E.field
    _need_prime(F)
    sub = list(sub_basis)
    comp = [i for i in range(E.dim) if i not in sub]
    nA, nB = len(sub), len(comp)
    total = F.p ** (nA * nB)
    if total > cap:
        raise EnumerationTooLarge(total, cap, "complement search")
    P = E.permuted(sub + comp).sc
    us = digits(F, 0, total, nA * nB).reshape(-1, nA, nB)
    # basis of the graph: w_x = (u e_x, e_x); products w_x o w_y in E-coordinates
    W = np.concatenate([us, np.broadcast_to(F.eye(nB), (len(us), nB, nB))], axis=1)
    Wt = np.swapaxes(W, -1, -2)  # Wt[x, i]
    prod = F.ein("xi,ijo->xjo", Wt, P)
    prod = F.ein("xjo,yj->xyo", prod, Wt)
    a_part, v_part = prod[..., :nA], prod[..., nA:]
    closed = np.all(a_part == F.ein("xyv,av->xya", v_part, us), axis=(-1, -2, -3))
    graphs = W[closed]
    induced = v_part[closed]
    classes = partition_by_isomorphism(F, induced, cap) if len(induced) else []
    perm = sub + comp
    back = np.zeros((E.dim, E.dim), dtype=np.int64)
    for j, t in enumerate(perm):
        back[t, j] = 1
    spans = [F.reduce(back @ g) for g in graphs]
    return BruteForceReport(F, spans, list(induced), classes, total)


# -- over Q: witness checks and separating invariants ---------------------------------------


def algebra_invariants(A: Algebra) -> dict:
    """Basis-independent numbers used to separate algebras over an infinite field."""
    F = A.field
    n = A.dim
    sc = A.sc
    prod_span = mat_rank(F, sc.reshape(n * n, n).T) if n else 0
    # x in left annihilator  <=>  x o e_j = 0 for all j: matrix (j,k) x i
    left = mat_rank(F, np.transpose(sc, (1, 2, 0)).reshape(n * n, n)) if n else 0
    right = mat_rank(F, np.transpose(sc, (0, 2, 1)).reshape(n * n, n)) if n else 0
    com = F.reduce(sc - np.swapaxes(sc, 0, 1))
    trR = [sum((sc[i, j, i] for i in range(n)), F.zero) for j in range(n)]
    trL = [sum((sc[i, j, j] for j in range(n)), F.zero) for i in range(n)]
    return {
        "product_span": prod_span,
        "left_annihilator": n - left,
        "right_annihilator": n - right,
        "commutator_span": mat_rank(F, com.reshape(n * n, n).T) if n else 0,
        "trace_right_zero": all(F(t) == F.zero for t in trR),
        "trace_left_zero": all(F(t) == F.zero for t in trL),
    }


def compare_over_field(B1: Algebra, B2: Algebra, rho=None) -> str:
    """'isomorphic' (witness verified), 'non-isomorphic' (an invariant separates) or 'undecided'."""
    if rho is not None and is_invertible(B1.field, rho) and check_morphism(B1, B2, MorphismWitness(rho)):
        return "isomorphic"
    if B1.dim != B2.dim or algebra_invariants(B1) != algebra_invariants(B2):
        return "non-isomorphic"
    return "undecided"
