import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lsakit.algebra import (
    Algebra, Bimodule, MorphismWitness, Split, associator, check_bimodule, check_identity, check_morphism,
    commutator_lie, is_isomorphism, passes_identity, rep_of_commutator, subalgebra_test,
)
from lsakit.errors import DependentSpan, DimensionMismatch
from lsakit.field import QQ, FieldSpec, digits
from lsakit.fixtures import ex46, ex47, ex55
from lsakit.sweeps import passing_products

F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)

# left-symmetric and Novikov tables among all 256 over F_2 at n = 2,
# frozen after an independent pure-Python loop
FROZEN_F2_COUNTS = (58, 52)


def printed_ex46():
    """The four-dimensional table exactly as printed, with e2 e3 = e4."""
    return Algebra.from_products(QQ, 4, {
        (0, 1): {3: 1}, (2, 1): {0: 1}, (3, 2): {2: 2},
        (1, 0): {3: 1}, (3, 0): {0: 1}, (1, 2): {3: 1}, (3, 1): {1: -1},
    })


def recheck(A, v):
    """Recompute a reported violation from scratch."""
    F = A.field
    i, j, k = v.witness
    e = F.eye(A.dim)
    prod = A.product
    if v.condition_id == "ls":
        lhs = F.reduce(prod(prod(e[i], e[j]), e[k]) - prod(e[i], prod(e[j], e[k])))
        rhs = F.reduce(prod(prod(e[j], e[i]), e[k]) - prod(e[j], prod(e[i], e[k])))
    else:
        lhs, rhs = prod(prod(e[i], e[j]), e[k]), prod(prod(e[i], e[k]), e[j])
    return tuple(lhs.tolist()), tuple(rhs.tolist())


def test_ex46_left_symmetric():
    assert check_identity(ex46(), "left_symmetric").passed


def test_ex46_has_seven_products():
    assert len(ex46().nonzero_products()) == 7


def test_ex46_not_novikov():
    A = ex46()
    rep = check_identity(A, "novikov")
    assert not rep.passed
    assert rep.failed_conditions() == ["nv"]
    wit = {v.witness: v for v in rep.violations}
    v = wit[(3, 2, 1)]
    # (e4 e3) e2 = 2 e1 and (e4 e2) e3 = -2 e1
    assert v.lhs == (2, 0, 0, 0) and v.rhs == (-2, 0, 0, 0)


def test_reported_witnesses_recompute():
    for A in (ex46(), printed_ex46()):
        for kind in ("left_symmetric", "novikov"):
            for v in check_identity(A, kind).violations:
                lhs, rhs = recheck(A, v)
                assert (lhs, rhs) == (v.lhs, v.rhs)
                assert lhs != rhs


def test_witness_is_lexicographically_first():
    rep = check_identity(ex46(), "novikov")
    assert rep.witness.witness == min(v.witness for v in rep.violations)


def test_printed_table_is_not_left_symmetric():
    rep = check_identity(printed_ex46(), "left_symmetric")
    assert not rep.passed
    assert (1, 2, 2) in {v.witness for v in rep.violations}


def test_ex46_complete():
    # every right multiplication R_b: a -> a o b is nilpotent
    A = ex46()
    for b in range(4):
        R = A.sc[:, b, :].T
        P = QQ.eye(4)
        for _ in range(4):
            P = QQ.ein("ij,jk->ik", R, P)
        assert not np.any(P)


@pytest.mark.parametrize("kind", ["left_symmetric", "novikov", "lie_jacobi_of_commutator",
                                  "antisymmetry_of_commutator"])
@pytest.mark.parametrize("n", [0, 1, 3])
def test_zero_algebra_passes(kind, n):
    assert check_identity(Algebra.zero(QQ, n), kind).passed


def test_ex47_novikov():
    assert check_identity(ex47(), "novikov").passed


def test_ex47_commutator():
    L = commutator_lie(ex47())
    expected = QQ.zeros((3, 3, 3))
    expected[0, 1, 1] = 1
    expected[1, 0, 1] = -1
    expected[0, 2, 2] = 1
    expected[2, 0, 2] = -1
    assert np.array_equal(L.sc, expected)


def test_zero_commutator():
    assert not np.any(commutator_lie(Algebra.zero(QQ, 2)).sc)


def test_ex46_commutator_is_lie():
    L = ex46()
    assert check_identity(L, "lie_jacobi_of_commutator").passed
    assert check_identity(L, "antisymmetry_of_commutator").passed


def test_novikov_implies_left_symmetric_in_checker():
    # right-commutative but not left-symmetric: e1 e1 = e2, e2 e1 = e1
    A = Algebra.from_products(QQ, 2, {(0, 0): {1: 1}, (1, 0): {0: 1}})
    assert not check_identity(A, "left_symmetric").passed
    rep = check_identity(A, "novikov")
    assert "ls" in rep.failed_conditions()
    assert "nv" not in rep.failed_conditions()


@pytest.mark.parametrize("p", [2, 3])
def test_commutators_of_swept_algebras_are_lie(p):
    F = FieldSpec.prime(p)
    scs = passing_products(F, 2, "left_symmetric")
    assert len(scs) > 1
    assert passes_identity(F, scs, "antisymmetry_of_commutator").all()
    assert passes_identity(F, scs, "lie_jacobi_of_commutator").all()


def test_f2_sweep_sizes():
    scs = passing_products(F2, 2, "left_symmetric")
    nov = passing_products(F2, 2, "novikov")
    assert (len(scs), len(nov)) == FROZEN_F2_COUNTS
    assert all(check_identity(Algebra(F2, s), "left_symmetric").passed for s in nov)


def test_batched_verdict_matches_report():
    scs = digits(F2, 0, 256, 8).reshape(256, 2, 2, 2)
    mask = passes_identity(F2, scs, "left_symmetric")
    single = [check_identity(Algebra(F2, s), "left_symmetric").passed for s in scs]
    assert mask.tolist() == single


def one_dim_module_bimodules(A):
    """Every bimodule structure on a 1-dim module with entries in F_p."""
    F = A.field
    n = A.dim
    for row in digits(F, 0, F.p ** (2 * n), 2 * n):
        S = [[[row[i]]] for i in range(n)]
        T = [[[row[n + i]]] for i in range(n)]
        yield Bimodule.from_matrices(A, S, T)


def test_bimodule_passers_give_representations():
    count = 0
    for sc in passing_products(F2, 2, "left_symmetric"):
        A = Algebra(F2, sc)
        for bm in one_dim_module_bimodules(A):
            if check_bimodule(bm, "left_symmetric"):
                count += 1
                assert rep_of_commutator(bm).passed
    assert count > 0


def test_two_dim_module_representations():
    F = F2
    A = Algebra(F, passing_products(F, 2, "left_symmetric")[7])
    for row in digits(F, 0, 2 ** 8, 8):
        mats = row.reshape(2, 2, 2)
        bm = Bimodule.from_matrices(A, [mats[0], mats[1]], [F.zeros((2, 2)), F.zeros((2, 2))])
        if check_bimodule(bm, "left_symmetric"):
            assert rep_of_commutator(bm).passed


def test_zero_bimodule():
    A = ex46()
    zero = [QQ.zeros((2, 2))] * 4
    bm = Bimodule.from_matrices(A, zero, zero)
    assert check_bimodule(bm, "left_symmetric").passed
    assert check_bimodule(bm, "novikov").passed


def test_scalar_bimodule_from_zero_covectors():
    A = ex46()
    zero = [QQ.zeros((1, 1))] * 4
    assert check_bimodule(Bimodule.from_matrices(A, zero, zero), "left_symmetric").passed


def test_identity_left_action_fails():
    A = ex46()
    S = [QQ.eye(1)] * 4
    T = [QQ.zeros((1, 1))] * 4
    rep = check_bimodule(Bimodule.from_matrices(A, S, T), "left_symmetric")
    assert not rep.passed
    assert rep.witness.condition_id == "bm1"


def test_bimodule_wrong_count():
    with pytest.raises(DimensionMismatch):
        Bimodule.from_matrices(ex46(), [QQ.eye(1)], [QQ.eye(1)])


def test_identity_map_stabilizes_every_split():
    A = ex46()
    for sub in ([0], [1, 3], [0, 1, 2]):
        w = MorphismWitness(QQ.eye(4), True, True, Split.of(sub, 4))
        rep = check_morphism(A, A, w)
        assert rep.passed and rep.info["isomorphism"]


def test_stabilize_failure():
    A = ex46()
    phi = QQ.eye(4)
    phi[:, [0, 1]] = phi[:, [1, 0]]
    rep = check_morphism(A, A, MorphismWitness(phi, stabilizes=True, split=Split.of([0], 4)))
    assert "stab" in rep.failed_conditions()


def test_morphism_dimension_check():
    with pytest.raises(DimensionMismatch):
        check_morphism(ex46(), ex46(), MorphismWitness(QQ.eye(3)))
    with pytest.raises(DimensionMismatch):
        check_morphism(ex46(), ex46(), MorphismWitness(QQ.eye(4), stabilizes=True))


def test_basis_permutation_is_isomorphism():
    A = ex55()
    perm = [1, 3, 0, 2]
    B = A.permuted(perm)
    P = QQ.zeros((4, 4))
    for j, t in enumerate(perm):
        P[j, t] = 1  # sends e_t of A to the j-th vector of B's basis
    assert is_isomorphism(A, B, P)


def test_subalgebra_e1_e3():
    res = subalgebra_test(ex55(), [QQ.array([1, 0, 0, 0]), QQ.array([0, 0, 1, 0])])
    assert res.is_subalgebra and not res.is_ideal
    expected = QQ.zeros((2, 2, 2))
    expected[0, 1, 1] = 1
    assert np.array_equal(res.induced.sc, expected)


def test_subalgebra_e2_e4():
    res = subalgebra_test(ex55(), [QQ.array([0, 1, 0, 0]), QQ.array([0, 0, 0, 1])])
    assert res.is_subalgebra
    assert res.induced.nonzero_products() == {(0, 0): {0: 2}, (0, 1): {1: 1}}


def test_not_a_subalgebra():
    assert not subalgebra_test(ex55(), [QQ.array([1, 1, 0, 0])]).is_subalgebra


def test_dependent_span():
    with pytest.raises(DependentSpan):
        subalgebra_test(ex55(), [QQ.array([1, 0, 0, 0]), QQ.array([2, 0, 0, 0])])


def test_whole_space_is_ideal():
    E = ex55()
    res = subalgebra_test(E, list(QQ.eye(4)))
    assert res.is_subalgebra and res.is_ideal
    assert res.induced == E


small = st.integers(min_value=-2, max_value=2)


@given(st.lists(small, min_size=8, max_size=8))
def test_left_symmetry_is_associator_symmetry(entries):
    A = Algebra(QQ, QQ.array(entries).reshape(2, 2, 2))
    a = associator(QQ, A.sc)
    symmetric = bool(np.all(a == np.swapaxes(a, 0, 1)))
    assert check_identity(A, "left_symmetric").passed == symmetric


@given(st.lists(small, min_size=8, max_size=8), st.permutations([0, 1]))
def test_identities_invariant_under_relabelling(entries, perm):
    A = Algebra(QQ, QQ.array(entries).reshape(2, 2, 2))
    for kind in ("left_symmetric", "novikov"):
        assert check_identity(A, kind).passed == check_identity(A.permuted(perm), kind).passed

