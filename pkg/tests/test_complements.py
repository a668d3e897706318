import itertools

import numpy as np
import pytest

from lsakit.algebra import Algebra, MorphismWitness, check_identity, check_morphism
from lsakit.complements import (
    MatchedPair, algebra_invariants, brute_force_complements, check_deform_equiv, check_deformation,
    check_matched_pair, classify_complements, compare_over_field, complement_guarantees, deform,
    deform_equiv_direct, deformed_sc, enumerate_deformations,
)
from lsakit.errors import (
    BaseAlgebraInvalid, EnumerationTooLarge, MatchedPairInvalid, NotDeformationMap, NotInvertible,
)
from lsakit.field import QQ, FieldSpec, digits, general_linear_group
from lsakit.fixtures import ex47, ex55, ex55_mp, ex55_phi
from lsakit.unified import ExtendingDatum

F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)
F7 = FieldSpec.prime(7)


def phi_b(b, F=QQ):
    phi = F.zeros((2, 2))
    phi[1, 1] = F(b)
    return phi


def zero_pair(F, nA=1, nB=1):
    A, B = Algebra.zero(F, nA), Algebra.zero(F, nB)
    return MatchedPair(A, B, F.zeros((nA, nB, nB)), F.zeros((nA, nB, nB)), F.zeros((nB, nA, nA)),
                       F.zeros((nB, nA, nA)))


def test_ex55_pair_is_matched():
    mp = ex55_mp()
    assert check_matched_pair(mp, "left_symmetric").passed
    assert mp.bicrossed() == ex55().permuted([0, 2, 1, 3])


def test_zero_pair_is_matched():
    assert check_matched_pair(zero_pair(QQ, 2, 2), "left_symmetric").passed


def test_modified_action_breaks_pair():
    mp = ex55_mp()
    lb = np.array(mp.lb, copy=True)
    lb[0, 1, :] = QQ.array([1, 0])  # l_B(e2) e3 = e1
    bad = MatchedPair(mp.A, mp.B, mp.la, mp.ra, lb, mp.rb)
    rep = check_matched_pair(bad, "left_symmetric")
    assert not rep.passed
    assert set(rep.failed_conditions()) & {"L1", "L3", "L6", "L8"}


def test_pair_needs_valid_factors():
    mp = zero_pair(QQ, 3, 1)
    assert check_matched_pair(MatchedPair(ex47(), mp.B, mp.la, mp.ra, mp.lb, mp.rb), "novikov").passed
    A = Algebra.from_products(QQ, 1, {(0, 0): {0: 1}})
    B = Algebra.from_products(QQ, 2, {(0, 0): {1: 1}, (1, 0): {0: 1}})
    with pytest.raises(BaseAlgebraInvalid):
        check_matched_pair(MatchedPair(A, B, QQ.zeros((1, 2, 2)), QQ.zeros((1, 2, 2)), QQ.zeros((2, 1, 1)),
                                       QQ.zeros((2, 1, 1))), "left_symmetric")


def test_from_matrices_round_trip():
    mp = ex55_mp()
    d = mp.datum
    m = d.matrices()
    again = MatchedPair.from_matrices(mp.A, mp.B, m["lA"], m["rA"], m["lV"], m["rV"])
    assert again.datum.same_as(d)


def test_from_datum_needs_zero_cocycle():
    d = ExtendingDatum.zero(Algebra.zero(QQ, 1), 1)
    f = QQ.zeros((1, 1, 1))
    f[0, 0, 0] = 1
    with pytest.raises(MatchedPairInvalid):
        MatchedPair.from_datum(ExtendingDatum(d.A, d.la, d.ra, d.lv, d.rv, f, d.dot))


@pytest.mark.parametrize("b", [0, 1, -1, 7])
def test_family_maps(b):
    assert check_deformation(ex55_mp(), phi_b(b)).passed


def test_zero_map_always_deforms():
    for mp in (ex55_mp(), zero_pair(QQ, 2, 1)):
        phi = QQ.zeros((mp.A.dim, mp.B.dim))
        assert check_deformation(mp, phi).passed
        d = deform(mp, phi)
        assert d.Bphi == mp.B
        assert np.array_equal(d.embedding[mp.A.dim:], QQ.eye(mp.B.dim))


def test_non_deformation_map():
    phi = QQ.zeros((2, 2))
    phi[0, 0] = 1  # phi(e2) = e1
    rep = check_deformation(ex55_mp(), phi)
    assert not rep.passed and rep.witness.condition_id == "def"
    with pytest.raises(NotDeformationMap):
        deform(ex55_mp(), phi)


def test_invalid_pair_rejected():
    mp = ex55_mp()
    lb = np.array(mp.lb, copy=True)
    lb[0, 1, :] = QQ.array([1, 0])
    with pytest.raises(MatchedPairInvalid):
        check_deformation(MatchedPair(mp.A, mp.B, mp.la, mp.ra, lb, mp.rb), QQ.zeros((2, 2)))


def test_deformed_product_b1():
    B = deform(ex55_mp(), phi_b(1)).Bphi
    assert B.nonzero_products() == {(0, 0): {0: 2}, (0, 1): {1: 1}, (1, 1): {0: 2}}


def test_deformed_product_f5():
    mp = ex55_mp(F5)
    B = deform(mp, phi_b(2, F5)).Bphi
    assert B.nonzero_products() == {(0, 0): {0: 2}, (0, 1): {1: 1}, (1, 1): {0: 4}}


@pytest.mark.parametrize("b", [0, 1, 3, -2])
def test_complement_guarantees(b):
    g = complement_guarantees(ex55_mp(), phi_b(b))
    assert all(g.values())


def test_fixture_map():
    assert np.array_equal(ex55_phi(3), phi_b(3))


def test_rescaling_witness_over_q():
    rho = QQ.array([[1, 0], [0, 2]])
    mp = ex55_mp()
    assert check_deform_equiv(mp, phi_b(4), phi_b(1), rho).passed
    assert deform_equiv_direct(mp, phi_b(4), phi_b(1), rho)
    B4, B1 = deform(mp, phi_b(4)).Bphi, deform(mp, phi_b(1)).Bphi
    assert compare_over_field(B4, B1, rho) == "isomorphic"


def test_reflexive_identity():
    mp = ex55_mp()
    for b in (0, 1, 5):
        assert check_deform_equiv(mp, phi_b(b), phi_b(b), QQ.eye(2)).passed


def test_b1_not_equivalent_to_zero():
    mp = ex55_mp()
    for entries in itertools.product([-1, 0, 1, 2], repeat=4):
        rho = QQ.array(entries).reshape(2, 2)
        if rho[0, 0] * rho[1, 1] == rho[0, 1] * rho[1, 0]:
            continue
        assert not check_deform_equiv(mp, phi_b(1), phi_b(0), rho).passed
    B1, B0 = deform(mp, phi_b(1)).Bphi, deform(mp, phi_b(0)).Bphi
    assert compare_over_field(B1, B0) == "non-isomorphic"


def test_sign_classes_undecided_over_q():
    mp = ex55_mp()
    B1, Bm1 = deform(mp, phi_b(1)).Bphi, deform(mp, phi_b(-1)).Bphi
    assert algebra_invariants(B1) == algebra_invariants(Bm1)
    assert compare_over_field(B1, Bm1) == "undecided"


def test_singular_rho():
    with pytest.raises(NotInvertible):
        check_deform_equiv(ex55_mp(), phi_b(1), phi_b(1), QQ.zeros((2, 2)))


def test_enumerate_f5():
    rep = enumerate_deformations(ex55_mp(F5))
    assert rep.candidates_checked == 625
    got = sorted(tuple(m.ravel().tolist()) for m in rep.deformation_maps)
    assert got == sorted(tuple(phi_b(b, F5).ravel().tolist()) for b in range(5))


def test_enumerate_f2():
    rep = enumerate_deformations(ex55_mp(F2))
    assert rep.candidates_checked == 16
    got = [tuple(m.ravel().tolist()) for m in rep.deformation_maps]
    # phi(e2) = e1 is allowed as well because 2 = 0
    assert got == [(0, 0, 0, 0), (0, 0, 0, 1), (1, 0, 0, 0), (1, 0, 0, 1)]


def test_enumerate_zero_pair():
    for p in (2, 3):
        rep = enumerate_deformations(zero_pair(FieldSpec.prime(p), 1, 2))
        assert len(rep.deformation_maps) == p ** 2 == rep.candidates_checked


def test_enumeration_cap():
    with pytest.raises(EnumerationTooLarge):
        enumerate_deformations(ex55_mp(F7), cap=1000)


def class_sets(rep):
    return sorted(sorted(c.members) for c in rep.classes)


def test_classify_f5():
    rep = classify_complements(ex55_mp(F5))
    b_of = [int(m[1, 1]) for m in rep.deformation_maps]
    classes = sorted(sorted(b_of[i] for i in c.members) for c in rep.classes)
    assert rep.index == 3
    assert classes == [[0], [1, 4], [2, 3]]


def test_classify_f2():
    rep = classify_complements(ex55_mp(F2))
    assert rep.index == 2
    assert class_sets(rep) == [[0, 1], [2, 3]]


@pytest.mark.parametrize("p,index", [(3, 3), (7, 3)])
def test_classify_odd_primes(p, index):
    assert classify_complements(ex55_mp(FieldSpec.prime(p))).index == index


def test_classify_zero_pair():
    assert classify_complements(zero_pair(F3)).index == 1


def test_stored_witnesses_are_isomorphisms():
    mp = ex55_mp(F5)
    rep = classify_complements(mp)
    for c in rep.classes:
        src = rep.deformation_maps[c.representative]
        for m in c.members:
            dst = rep.deformation_maps[m]
            assert deform_equiv_direct(mp, src, dst, c.witnesses[m])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_brute_force_agrees(p):
    F = FieldSpec.prime(p)
    rep = classify_complements(ex55_mp(F))
    bf = brute_force_complements(ex55(F), [0, 2])
    assert len(bf.complements) == len(rep.deformation_maps)
    assert bf.index == rep.index
    assert sorted(len(c.members) for c in bf.classes) == sorted(len(c.members) for c in rep.classes)
    E = ex55(F)
    for span, sc in zip(bf.complements, bf.induced):
        assert check_morphism(Algebra(F, sc), E, MorphismWitness(span)).passed


def test_brute_force_direct_sum():
    F = F3
    E = Algebra.zero(F, 3)
    bf = brute_force_complements(E, [0])
    assert len(bf.complements) == 9 and bf.index == 1


def enumerated_pairs(F):
    """All matched pairs with nA = nB = 1 over F whose structure passes."""
    for row in digits(F, 0, F.p ** 6, 6):
        A = Algebra(F, row[0:1].reshape(1, 1, 1))
        B = Algebra(F, row[1:2].reshape(1, 1, 1))
        mp = MatchedPair(A, B, *(row[k:k + 1].reshape(1, 1, 1) for k in range(2, 6)))
        if check_matched_pair(mp, "left_symmetric"):
            yield mp


@pytest.mark.parametrize("p", [2, 3])
def test_brute_force_on_small_pairs(p):
    F = FieldSpec.prime(p)
    count = 0
    for mp in enumerated_pairs(F):
        rep = classify_complements(mp)
        bf = brute_force_complements(mp.bicrossed(), [0])
        assert bf.index == rep.index
        assert sorted(len(c.members) for c in bf.classes) == sorted(len(c.members) for c in rep.classes)
        for phi in rep.deformation_maps:
            g = complement_guarantees(mp, phi)
            assert all(g.values())
            assert check_identity(deform(mp, phi).Bphi, "left_symmetric").passed
        count += 1
    assert count > 0


@pytest.mark.parametrize("p", [2, 3])
def test_equivalence_cross_check(p):
    F = FieldSpec.prime(p)
    mp = ex55_mp(F)
    maps = enumerate_deformations(mp).deformation_maps
    G = general_linear_group(F, 2)
    for phi, psi in itertools.product(maps, repeat=2):
        for rho in G:
            assert bool(check_deform_equiv(mp, phi, psi, rho)) == deform_equiv_direct(mp, phi, psi, rho)


def test_deformed_sc_batched():
    mp = ex55_mp(F5)
    phis = np.stack([phi_b(b, F5) for b in range(5)])
    batched = deformed_sc(F5, mp, phis)
    for b in range(5):
        assert np.array_equal(batched[b], deform(mp, phis[b]).Bphi.sc)
