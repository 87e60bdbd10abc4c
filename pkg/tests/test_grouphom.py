import pytest

from dehnkit import simpset as sp
from dehnkit.errors import InputError
from dehnkit.grouphom import (
    FiniteGroup,
    Module,
    bar_complex,
    cyclic_group,
    dihedral_group,
    group_homology_dict,
    hoss_check,
    isometry_group,
    z2_with_sign,
)
from dehnkit import exactlin as ex
from dehnkit.homology import homology_dict


def test_group_axioms_checked():
    with pytest.raises(InputError):
        FiniteGroup([0, 1], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1})


def test_trivial_group_homology():
    g = cyclic_group(1)
    h = group_homology_dict(g, None, "Z", 4)
    assert set(h) == {0}
    assert (h[0].rank, h[0].torsion) == (1, [])


def test_z2_untwisted():
    g = cyclic_group(2)
    h = group_homology_dict(g, None, "Z", 7)
    assert (h[0].rank, h[0].torsion) == (1, [])
    for i in range(1, 7):
        if i % 2 == 1:
            assert h[i].torsion == [2] and h[i].rank == 0
        else:
            assert i not in h


def test_z2_twisted():
    g = z2_with_sign()
    h = group_homology_dict(g, g.character, "Z", 7)
    for i in range(7):
        if i % 2 == 0:
            assert h[i].torsion == [2] and h[i].rank == 0
        else:
            assert i not in h
    hz = group_homology_dict(g, g.character, "Zhalf", 7)
    assert not hz


def test_bar_dd_zero_twisted_dihedral():
    g = dihedral_group(4)
    bar_complex(g, g.character, 3)  # ChainComplex checks d*d = 0


def test_dihedral_abelianization():
    g = dihedral_group(4)
    h = group_homology_dict(g, None, "Z", 2)
    assert h[1].rank == 0 and h[1].torsion == [2, 2]


def test_coinvariants_with_det_twist():
    # H_0(G; Z^tw) = Z/<1 - det> = Z/2 when det is onto
    for g in (dihedral_group(3), dihedral_group(4)):
        h = group_homology_dict(g, g.character, "Z", 1)
        assert h[0].rank == 0 and h[0].torsion == [2]
        hz = group_homology_dict(g, g.character, "Zhalf", 1)
        assert 0 not in hz


def test_isometry_group_square_symmetries():
    s2 = ex.spherical(1)
    r = ex.Isometry([[0, -1], [1, 0]], s2)
    f = ex.Isometry([[1, 0], [0, -1]], s2)
    g = isometry_group([r, f])
    assert g.order() == 8
    assert sorted(g.character.values()).count(-1) == 4


def test_isometry_group_hexagonal():
    q = ex.QuadSpace([[2, 1], [1, 2]], "spherical")
    r = ex.Isometry([[0, -1], [1, 1]], q)
    f = ex.Isometry([[0, 1], [1, 0]], q)
    g = isometry_group([r, f])
    assert g.order() == 12


def test_module_validate():
    g = cyclic_group(2)
    m = Module(g, 2, {0: [[1, 0], [0, 1]], 1: [[0, 1], [1, 0]]})
    m.validate()
    bad = Module(g, 2, {0: [[1, 0], [0, 1]], 1: [[1, 1], [0, 1]]})
    with pytest.raises(InputError):
        bad.validate()


def test_hoss_s0():
    s0 = sp.SimpSet({0: ["*", "p"]}, {"*": (), "p": ()}, "*")
    g = cyclic_group(2)
    act = sp.trivial_action(g, s0)
    ok, detail = hoss_check(s0, act, 5)
    assert ok, detail


def test_hoss_ssigma():
    ss, swap = sp.circle_Ssigma()
    g = z2_with_sign()
    act = sp.GroupAction(g, {0: sp.identity_map(ss), 1: swap})
    ok, detail = hoss_check(ss, act, 5)
    assert ok, detail


def test_group_json_roundtrip():
    g = dihedral_group(3)
    data = g.to_json()
    g2 = FiniteGroup.from_json(data)
    assert g2.order() == 6
    assert sorted(g2.character.values()) == sorted(g.character.values())


def test_kunneth_rank_property():
    # smash of two orbit spaces: bottom homology is the tensor of the
    # factors' bottom homology (d=1 style fixture)
    ss, swap = sp.circle_Ssigma()
    g = z2_with_sign()
    act = sp.GroupAction(g, {0: sp.identity_map(ss), 1: swap})
    orb = sp.homotopy_orbits(ss, act, 3)
    sm = sp.smash(orb, orb)
    from dehnkit.homology import normalized_chains

    h = homology_dict(normalized_chains(sm), "Z")
    # bottom nonzero degree is 2 = 1 + 1 and equals Z/2 = Z/2 (x) Z/2
    assert 1 not in h
    assert h[2].rank == 0 and h[2].torsion == [2]
