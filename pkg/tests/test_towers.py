import itertools

import pytest

import oracles
from phantomlab.fgab import FgGroup, GroupMap
from phantomlab.homalg import hom_group
from phantomlab.padic import PadicInt, SumFamily, completion_triple
from phantomlab.towers import (
    DirectTower,
    InverseTower,
    InverseTruncated,
    Truncated,
    UnsupportedTower,
    constant_tower,
    cyclic_tower,
    eventually_constant_tower,
    hom_tower,
    lim_and_lim1,
    multiplication_tower,
    pext_ind,
    prufer_tower,
    recheck_report,
    verify_mittag_leffler,
)

Z = FgGroup.free(1)


def C(n):
    return FgGroup.cyclic(n)


def test_prufer_tower_shape():
    T = prufer_tower(2)
    assert T.truncate(4) == [FgGroup(), C(2), C(4), C(8)]
    for k in (1, 2):
        f = T.map(k)
        assert f.matrix == ((2,),)
        # monic, checked on every element
        assert sum(1 for x in f.source.elements() if f(x).is_zero()) == 1
    assert T.stage(0).is_trivial
    T3 = prufer_tower(3)
    assert T3.map(2) @ T3.map(1) == T3.composite(1, 3)
    with pytest.raises(UnsupportedTower):
        prufer_tower(6)


def test_direct_tower_validation():
    with pytest.raises(UnsupportedTower):
        DirectTower((C(2), C(4)), (), Truncated())
    with pytest.raises(UnsupportedTower):
        eventually_constant_tower([C(2), C(4)], [GroupMap(C(4), C(2), [[1]])])
    T = eventually_constant_tower([C(2), C(4)], [GroupMap(C(2), C(4), [[2]])])
    assert T.stage(10) == C(4) and T.map(7) == GroupMap.identity(C(4))
    assert T.eventually_constant


def test_hom_tower_examples():
    for p in (2, 3):
        H = hom_tower(prufer_tower(p), Z)
        assert all(H.stage(k).is_trivial for k in range(8))
        for m in (1, 2, 3):
            H = hom_tower(prufer_tower(p), C(p**m))
            for k in range(8):
                expect = oracles.hom_structure(tuple(q for q in [p**k] if q > 1), (p**m,))
                assert H.stage(k).invariant_factors == expect == ((p ** min(k, m),) if min(k, m) else ())
            for k in range(m, m + 4):
                assert H.map(k) == GroupMap.multiplication(C(p**m), p)
    H = hom_tower(prufer_tower(2), C(3))
    assert all(H.stage(k).is_trivial for k in range(6))


def test_hom_tower_stages_agree_with_hom_group():
    T = eventually_constant_tower([C(2), FgGroup(1, (4,))], [GroupMap(C(2), FgGroup(1, (4,)), [[2], [0]])])
    B = FgGroup(1, (6,))
    H = hom_tower(T, B)
    for k in range(4):
        assert H.stage(k) == hom_group(T.stage(k), B).group
    # contravariance on the prefix: the transition is precomposition
    f = T.map(0)
    src, dst = hom_group(T.stage(1), B), hom_group(T.stage(0), B)
    for phi, g in zip(src.basis, src.group.gens()):
        assert H.map(0)(g) == dst.coords(phi @ f)


def test_lim1_constant_tower():
    G = FgGroup(1, (2,))
    r = lim_and_lim1(InverseTower((G,)))
    assert r.status == "ZeroMittagLeffler" and r.level == 0
    assert recheck_report(r, InverseTower((G,)))


def test_lim1_multiplication_tower():
    for p in (2, 3, 5):
        r = lim_and_lim1(multiplication_tower(p), precision=30)
        assert r.status == "NonzeroWitness" and r.lim_description == "0"
        zp = completion_triple(Z, p).completion
        assert r.lim1_description == f"{zp} / Z"
        x = PadicInt.from_digits(p, r.witness["padic"])
        assert x * (1 - p * p) == p
        # an integer would have digits eventually all 0 or all p-1
        d = x.digits
        assert len(set(d[-6:])) > 1
        assert recheck_report(r, multiplication_tower(p))
    # images p^k Z never stabilize
    assert not verify_mittag_leffler(multiplication_tower(2), 3, stages=3)


def test_lim1_finite_tower():
    p = 3
    prefix = [C(p**k) for k in range(1, 6)]
    maps = [GroupMap(prefix[k + 1], prefix[k], [[p]]) for k in range(4)]
    r = lim_and_lim1(InverseTower(tuple(prefix), tuple(maps)))
    assert r.status == "ZeroFiniteGroups"
    assert recheck_report(r, InverseTower(tuple(prefix), tuple(maps)))


def test_truncated_towers_are_unknown():
    r = lim_and_lim1(InverseTower((Z, Z), (GroupMap.multiplication(Z, 2),), InverseTruncated()))
    assert r.is_unknown
    T = DirectTower((C(2), C(4)), (GroupMap(C(2), C(4), [[2]]),), Truncated())
    assert pext_ind(T, Z).is_unknown
    with pytest.raises(UnsupportedTower):
        hom_tower(T, Z)


def test_pext_examples():
    for p in (2, 3):
        for r in range(1, 5):
            rep = pext_ind(prufer_tower(p), FgGroup.free(r))
            assert rep.is_zero and recheck_report(rep, hom_tower(prufer_tower(p), FgGroup.free(r)))
        for m in range(1, 5):
            rep = pext_ind(prufer_tower(p), C(p**m))
            assert rep.status == "ZeroFiniteGroups"
        rep = pext_ind(prufer_tower(p), SumFamily(p))
        assert rep.status == "NonzeroWitness"
        assert recheck_report(rep, hom_tower(prufer_tower(p), SumFamily(p)))


def test_pext_family_variants():
    assert pext_ind(prufer_tower(2), SumFamily(2, 0, 3)).status == "ZeroMittagLeffler"
    assert pext_ind(prufer_tower(2), SumFamily(3)).is_zero
    assert pext_ind(cyclic_tower(2, 2, 1), SumFamily(2, 1, 1)).status == "NonzeroWitness"
    r = pext_ind(prufer_tower(3), SumFamily(3, 0, 2))
    H = hom_tower(prufer_tower(3), SumFamily(3, 0, 2))
    assert verify_mittag_leffler(H, r.level)


def test_pext_vanishes_for_finitely_generated_colimits():
    stages = [C(2), FgGroup(1, (4,)), FgGroup(1, (4,))]
    maps = [GroupMap(C(2), stages[1], [[2], [0]]), GroupMap.identity(stages[1])]
    towers = [constant_tower(G) for G in (Z, C(6), FgGroup(2, (2, 4)))]
    towers += [eventually_constant_tower(stages, maps), cyclic_tower(2, 0, 3)]
    coeffs = [Z, C(4), FgGroup(1, (3, 9)), SumFamily(2), SumFamily(3, 2, 0)]
    for T, B in itertools.product(towers, coeffs):
        assert pext_ind(T, B).is_zero, (T, B)


def test_truncation_coherence():
    cases = [(prufer_tower(2), Z), (prufer_tower(2), C(8)), (prufer_tower(3), SumFamily(3)),
             (prufer_tower(2), SumFamily(2, 0, 2))]
    for T, B in cases:
        reports = [pext_ind(T, B, truncation=L) for L in (6, 12, 20)]
        assert len({(r.status, r.lim_description, r.lim1_description) for r in reports}) == 1
        levels = {r.level for r in reports}
        assert len(levels) == 1
