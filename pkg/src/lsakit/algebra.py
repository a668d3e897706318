"""Structure-constant algebras, identity checkers, bimodules and morphisms.

An algebra of dimension n is a tensor ``sc`` with ``e_i o e_j = sum_k sc[i, j, k] e_k``.
Every identity handled here is multilinear, so checking it on all basis
tuples decides it on the whole space; the checkers do exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DependentSpan, DimensionMismatch, FieldMismatch, NoSolution
from .field import FieldSpec, is_invertible, mat_rank, mat_solve
from .report import CheckReport, Equation, batch_verdict, report_from

IDENTITY_KINDS = (
    "left_symmetric",
    "novikov",
    "lie_jacobi_of_commutator",
    "antisymmetry_of_commutator",
    "lie_jacobi",
    "antisymmetry",
)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Algebra:
    field: FieldSpec
    sc: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        sc = np.asarray(self.sc)
        if sc.ndim != 3 or not (sc.shape[0] == sc.shape[1] == sc.shape[2]):
            raise DimensionMismatch(f"structure constants must be n x n x n, got {sc.shape}")
        if sc.size == 0:
            sc = self.field.zeros(sc.shape)
        self.field.check_array(sc, "structure constants")
        object.__setattr__(self, "sc", _frozen(sc))
        if self.labels is not None:
            if len(self.labels) != self.dim:
                raise DimensionMismatch("one label per basis vector")
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_products(cls, F: FieldSpec, dim: int, products: dict, labels=None) -> Algebra:
        """Build from ``{(i, j): {k: coeff}}`` with 0-based indices; omitted products vanish."""
        sc = F.zeros((dim, dim, dim))
        for (i, j), out in products.items():
            for k, coeff in out.items():
                sc[i, j, k] = F(coeff)
        return cls(F, sc, labels)

    @classmethod
    def zero(cls, F: FieldSpec, dim: int) -> Algebra:
        return cls(F, F.zeros((dim, dim, dim)))

    @property
    def dim(self) -> int:
        return self.sc.shape[0]

    def basis_names(self) -> list[str]:
        return list(self.labels) if self.labels else [f"e{i + 1}" for i in range(self.dim)]

    def product(self, u, v) -> np.ndarray:
        """Product of coordinate vectors (batched over leading axes)."""
        t = self.field.ein("i,ijk->jk", u, self.sc)
        return self.field.ein("j,jk->k", v, t)

    def to_field(self, F: FieldSpec) -> Algebra:
        return Algebra(F, F.convert(self.sc, self.field), self.labels)

    def nonzero_products(self) -> dict:
        out = {}
        for i, j in np.ndindex(self.dim, self.dim):
            coeffs = {k: self.sc[i, j, k] for k in range(self.dim) if self.sc[i, j, k] != 0}
            if coeffs:
                out[(i, j)] = coeffs
        return out

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.sc.shape == other.sc.shape
            and bool(np.all(self.sc == other.sc))
        )

    __hash__ = None

    def permuted(self, perm: Sequence[int]) -> Algebra:
        """The same algebra written in the basis ``(e_perm[0], e_perm[1], ...)``."""
        perm = list(perm)
        sc = self.sc[np.ix_(perm, perm, perm)]
        labels = tuple(self.basis_names()[i] for i in perm) if self.labels else None
        return Algebra(self.field, sc, labels)


# -- identities ---------------------------------------------------------------


def associator(F: FieldSpec, sc) -> np.ndarray:
    """(e_i o e_j) o e_k - e_i o (e_j o e_k), shape (..., i, j, k, out)."""
    return F.reduce(_left_nested(F, sc) - _right_nested(F, sc))


def _left_nested(F, sc):
    return F.ein("ijm,mko->ijko", sc, sc)


def _right_nested(F, sc):
    return F.ein("jkm,imo->ijko", sc, sc)


def _commutator_sc(F, sc):
    return F.reduce(sc - np.swapaxes(sc, -3, -2))


def identity_equations(F: FieldSpec, sc, kind: str) -> list[Equation]:
    """Equations for one identity kind; ``sc`` may carry leading batch axes."""
    if kind == "left_symmetric":
        assoc = associator(F, sc)
        return [Equation("ls", assoc, np.swapaxes(assoc, -4, -3), 3)]
    if kind == "novikov":
        left = _left_nested(F, sc)
        return identity_equations(F, sc, "left_symmetric") + [
            Equation("nv", left, np.swapaxes(left, -3, -2), 3)
        ]
    if kind in ("lie_jacobi_of_commutator", "antisymmetry_of_commutator"):
        return identity_equations(F, _commutator_sc(F, sc), kind.replace("_of_commutator", ""))
    if kind == "antisymmetry":
        return [Equation("antisym", sc, F.reduce(-np.swapaxes(sc, -3, -2)), 2)]
    if kind == "lie_jacobi":
        # [[x,y],z] + [[y,z],x] + [[z,x],y] = 0
        xyz = _left_nested(F, sc)
        cyc = F.reduce(xyz + np.moveaxis(xyz, (-4, -3, -2), (-2, -4, -3))
                       + np.moveaxis(xyz, (-4, -3, -2), (-3, -2, -4)))
        return [Equation("jacobi", cyc, F.zeros(()), 3)]
    raise ValueError(f"unknown identity kind {kind!r}")


def check_identity(A: Algebra, kind: str) -> CheckReport:
    """Check an identity on all basis triples; violations list every failing triple
    in lexicographic order, the first of which is the reported witness."""
    return report_from(A.field, identity_equations(A.field, A.sc, kind))


def passes_identity(F: FieldSpec, sc, kind: str) -> np.ndarray:
    """Batched verdict over the leading axes of ``sc``."""
    sc = np.asarray(sc)
    return batch_verdict(F, identity_equations(F, sc, kind), sc.shape[:-3])


def commutator_lie(A: Algebra) -> Algebra:
    """The sub-adjacent Lie algebra: [a, b] = a o b - b o a."""
    return Algebra(A.field, _commutator_sc(A.field, A.sc), A.labels)


# -- bimodules ----------------------------------------------------------------


def _actions_to_tensor(F: FieldSpec, mats, n: int, m: int) -> np.ndarray:
    """Matrices M_x (column = image) to the tensor t[x, v, w] = coeff of w in M_x v."""
    t = F.zeros((n, m, m))
    for x, M in enumerate(mats):
        M = np.asarray(M)
        if M.shape != (m, m):
            raise DimensionMismatch(f"action matrix {x} has shape {M.shape}, expected {(m, m)}")
        t[x] = M.T
    return t


def _tensor_to_actions(t) -> list[np.ndarray]:
    return [np.array(t[x].T) for x in range(t.shape[0])]


@dataclass(frozen=True, eq=False)
class Bimodule:
    """Linear maps S, T: A -> gl(M), stored as tensors s[x, v, w] (coeff of w in S(x)v)."""

    base: Algebra
    s: np.ndarray
    t: np.ndarray

    @classmethod
    def from_matrices(cls, base: Algebra, S, T) -> Bimodule:
        mdim = np.asarray(S[0]).shape[0] if len(S) else 0
        if len(S) != base.dim or len(T) != base.dim:
            raise DimensionMismatch("one S and one T matrix per basis vector of the base")
        F = base.field
        return cls(base, _actions_to_tensor(F, S, base.dim, mdim), _actions_to_tensor(F, T, base.dim, mdim))

    @property
    def mdim(self) -> int:
        return self.s.shape[-1]

    @property
    def S(self):
        return _tensor_to_actions(self.s)

    @property
    def T(self):
        return _tensor_to_actions(self.t)


def bimodule_equations(F: FieldSpec, sc, s, t, kind: str) -> list[Equation]:
    """Bimodule axioms in the variables (x, y, v); batched over leading axes."""
    # S(x)S(y)v - S(xy)v = S(y)S(x)v - S(yx)v
    ss = F.ein("yvu,xuw->xyvw", s, s)  # S(x)S(y)v
    s_xy = F.ein("xyz,zvw->xyvw", sc, s)
    eqs = [
        Equation(
            "bm1",
            F.reduce(ss - s_xy),
            F.reduce(np.swapaxes(ss, -4, -3) - np.swapaxes(s_xy, -4, -3)),
            3,
        )
    ]
    # S(x)T(y)v - T(y)S(x)v = T(xy)v - T(y)T(x)v
    st = F.ein("yvu,xuw->xyvw", t, s)
    ts = F.ein("xvu,yuw->xyvw", s, t)
    t_xy = F.ein("xyz,zvw->xyvw", sc, t)
    tt = F.ein("xvu,yuw->xyvw", t, t)  # T(y)T(x)v
    eqs.append(Equation("bm2", F.reduce(st - ts), F.reduce(t_xy - tt), 3))
    if kind == "novikov":
        # S(x o y)v = T(y)S(x)v ; T(x)T(y)v = T(y)T(x)v
        eqs.append(Equation("bm3", F.ein("xyz,zvw->xyvw", sc, s), ts, 3))
        eqs.append(Equation("bm4", np.swapaxes(tt, -4, -3), tt, 3))
    elif kind != "left_symmetric":
        raise ValueError(f"unknown bimodule kind {kind!r}")
    return eqs


def representation_equations(F: FieldSpec, bracket_sc, rho) -> list[Equation]:
    """rho([x, y]) = rho(x) rho(y) - rho(y) rho(x) in the variables (x, y, v)."""
    lhs = F.ein("xyz,zvw->xyvw", bracket_sc, rho)
    rr = F.ein("yvu,xuw->xyvw", rho, rho)
    return [Equation("rep", lhs, F.reduce(rr - np.swapaxes(rr, -4, -3)), 3)]


def check_bimodule(bm: Bimodule, kind: str) -> CheckReport:
    F = bm.base.field
    return report_from(F, bimodule_equations(F, bm.base.sc, bm.s, bm.t, kind))


def check_lie_representation(lie: Algebra, rho_tensor) -> CheckReport:
    return report_from(lie.field, representation_equations(lie.field, lie.sc, rho_tensor))


def rep_of_commutator(bm: Bimodule) -> CheckReport:
    """Check that rho = S - T represents the sub-adjacent Lie algebra of the base."""
    F = bm.base.field
    rho = F.reduce(bm.s - bm.t)
    return check_lie_representation(commutator_lie(bm.base), rho)


# -- morphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class Split:
    """A decomposition E = A + V by basis indices (0-based)."""

    sub: tuple[int, ...]
    comp: tuple[int, ...]

    @classmethod
    def of(cls, sub, dim: int) -> Split:
        sub = tuple(sub)
        return cls(sub, tuple(i for i in range(dim) if i not in sub))


@dataclass(frozen=True, eq=False)
class MorphismWitness:
    """A linear map (column j = image of source basis vector j).

    ``split`` describes the target; ``src_split`` the source (defaults to ``split``).
    """

    map: np.ndarray
    stabilizes: bool = False
    costabilizes: bool = False
    split: Split | None = None
    src_split: Split | None = None


def morphism_equations(F: FieldSpec, src_sc, dst_sc, phi) -> list[Equation]:
    """phi(e_i o e_j) = phi(e_i) o phi(e_j) in the variables (i, j)."""
    img = np.swapaxes(np.asarray(phi), -1, -2)  # img[i, o] = coeff of o in phi(e_i)
    lhs = F.ein("ijk,ko->ijo", src_sc, img)
    t = F.ein("ic,cdo->ido", img, dst_sc)
    rhs = F.ein("ido,jd->ijo", t, img)
    return [Equation("hom", lhs, rhs, 2)]


def check_morphism(src: Algebra, dst: Algebra, w: MorphismWitness) -> CheckReport:
    F = src.field
    if dst.field != F:
        raise FieldMismatch(f"{src.field} vs {dst.field}")
    phi = np.asarray(w.map)
    if phi.shape != (dst.dim, src.dim):
        raise DimensionMismatch(f"map has shape {phi.shape}, expected {(dst.dim, src.dim)}")
    F.check_array(phi, "map")
    eqs = morphism_equations(F, src.sc, dst.sc, phi)
    if w.stabilizes or w.costabilizes:
        if w.split is None:
            raise DimensionMismatch("stabilize/co-stabilize checks need a split")
        tsplit = w.split
        ssplit = w.src_split or w.split
        if len(ssplit.sub) != len(tsplit.sub) or len(ssplit.comp) != len(tsplit.comp):
            raise DimensionMismatch("source and target splits have different shapes")
    if w.stabilizes:
        # phi(i(a)) = i(a): the k-th source sub vector maps to the k-th target sub vector
        got = np.stack([phi[:, s] for s in ssplit.sub]) if ssplit.sub else F.zeros((0, dst.dim))
        want = F.zeros((len(tsplit.sub), dst.dim))
        for k, t in enumerate(tsplit.sub):
            want[k, t] = F.one
        eqs.append(Equation("stab", got, want, 1))
    if w.costabilizes:
        # pi(phi(e)) = pi(e): complement coordinates are preserved for every source vector
        got = phi[list(tsplit.comp), :].T if tsplit.comp else F.zeros((src.dim, 0))
        want = F.zeros((src.dim, len(tsplit.comp)))
        for k, s in enumerate(ssplit.comp):
            want[s, k] = F.one
        eqs.append(Equation("costab", got, want, 1))
    info = {"isomorphism": src.dim == dst.dim and is_invertible(F, phi)}
    return report_from(F, eqs, info)


def is_isomorphism(src: Algebra, dst: Algebra, phi) -> bool:
    return bool(check_morphism(src, dst, MorphismWitness(phi))) and is_invertible(src.field, phi)


# -- subalgebras --------------------------------------------------------------


@dataclass
class SubalgebraResult:
    is_subalgebra: bool
    is_ideal: bool
    induced: Algebra | None = None


def _coords_in_span(F, M, v):
    try:
        sol, _ = mat_solve(F, M, v)
    except NoSolution:
        return None
    return sol


def subalgebra_test(E: Algebra, span_basis: Sequence) -> SubalgebraResult:
    """Decide whether span(span_basis) is closed under o (and whether it is an ideal)."""
    F = E.field
    vecs = [F.array(v) if not isinstance(v, np.ndarray) else v for v in span_basis]
    r = len(vecs)
    M = np.stack(vecs, axis=1) if r else F.zeros((E.dim, 0))
    if mat_rank(F, M) != r:
        raise DependentSpan("spanning vectors are linearly dependent")
    induced = F.zeros((r, r, r))
    closed = True
    for i in range(r):
        for j in range(r):
            c = _coords_in_span(F, M, E.product(vecs[i], vecs[j]))
            if c is None:
                closed = False
                break
            induced[i, j] = c
        if not closed:
            break
    ideal = False
    if closed:
        ideal = True
        eye = F.eye(E.dim)
        for i in range(r):
            for k in range(E.dim):
                if (_coords_in_span(F, M, E.product(vecs[i], eye[k])) is None
                        or _coords_in_span(F, M, E.product(eye[k], vecs[i])) is None):
                    ideal = False
                    break
            if not ideal:
                break
    return SubalgebraResult(closed, ideal, Algebra(F, induced) if closed else None)
