import random

import pytest

from dehnkit import simpset as sp
from dehnkit.errors import ConditionsFail, NotSubcomplex
from dehnkit.grouphom import cyclic_group, z2_with_sign
from dehnkit.homology import homology_dict, is_quasi_iso, normalized_chains


def hgroups(x, coeff="Z"):
    return {
        d: (h.rank, h.torsion)
        for d, h in homology_dict(normalized_chains(x), coeff).items()
    }


def two_sphere():
    """Delta^2 / boundary: one vertex, one nondegenerate 2-simplex."""
    bp = "*"
    simplices = {0: [bp], 2: ["t"]}
    b1 = (0,), bp  # degenerate edge at the basepoint
    faces = {bp: (), "t": (b1, b1, b1)}
    return sp.SimpSet(simplices, faces, bp)


def test_circle_s1_structure():
    s1 = sp.circle_S1()
    s1.validate()
    assert s1.nondegenerate_count() == 2
    assert hgroups(s1) == {1: (1, [])}
    # degree-n simplices 1..n plus basepoint
    assert len(s1.all_simplices(3)) == 4


def test_circle_ssigma_structure():
    ss, swap = sp.circle_Ssigma()
    ss.validate()
    swap.validate()
    assert len(ss.labels(0)) == 2 and len(ss.labels(1)) == 2
    # d_0(+1) = the non-basepoint vertex, d_1(+1) = basepoint
    assert ss.faces["+1"][0] == ((), "o")
    assert ss.faces["+1"][1] == ((), "*")
    assert hgroups(ss) == {1: (1, [])}
    # swap has order two and acts freely on 1-simplices
    assert swap.compose(swap).assignment == sp.identity_map(ss).assignment


def test_simplicial_word_calculus():
    s1 = sp.circle_S1()
    e = sp.nondeg("e")
    s0e = s1.s(0, e)
    s1e = s1.s(1, e)
    assert s0e == ((0,), "e")
    assert s1e == ((1,), "e")
    # d_i s_i = identity
    assert s1.d(0, s0e) == e
    assert s1.d(1, s0e) == e
    assert s1.d(2, s1e) == e
    # label calculus in the circle table: degree 2 simplices are 1, 2
    assert sp.s1_label_value(s1, s0e) == 2
    assert sp.s1_label_value(s1, s1e) == 1


def test_smash_with_point_is_point():
    s1 = sp.circle_S1()
    pt = sp.SimpSet({0: ["*"]}, {"*": ()}, "*")
    sm = sp.smash(s1, pt)
    assert sm.nondegenerate_count() == 1


def test_smash_two_circles_is_sphere():
    s1 = sp.circle_S1()
    sm = sp.smash(s1, s1)
    sm.validate()
    assert hgroups(sm) == {2: (1, [])}


def test_smash_ssigma_circle():
    ss, _ = sp.circle_Ssigma()
    s1 = sp.circle_S1()
    sm = sp.smash(ss, s1)
    sm.validate()
    assert hgroups(sm) == {2: (1, [])}


def test_reduced_join_point():
    pt = sp.SimpSet({0: ["*"]}, {"*": ()}, "*")
    y = sp.circle_S1()
    j = sp.reduced_join(pt, y)
    assert j.nondegenerate_count() == 1
    j2 = sp.reduced_join(y, pt)
    assert j2.nondegenerate_count() == 1


def sphere_zero():
    bp = "*"
    return sp.SimpSet({0: [bp, "p"]}, {bp: (), "p": ()}, bp)


def test_reduced_join_s0_s0():
    s0 = sphere_zero()
    j = sp.reduced_join(s0, s0)
    j.validate()
    assert j.nondegenerate_count() == 2  # basepoint + one 1-simplex
    assert hgroups(j) == {1: (1, [])}


def test_reduced_join_circles():
    s1 = sp.circle_S1()
    j = sp.reduced_join(s1, s1)
    j.validate()
    assert hgroups(j) == {3: (1, [])}


def test_join_coords_roundtrip():
    s1 = sp.circle_S1()
    j = sp.reduced_join(s1, s1)
    for deg, labs in j.simplices.items():
        for lab in labs:
            if lab == j.base_label:
                continue
            for extra in range(2):
                sx = sp.nondeg(lab)
                for i in range(extra):
                    sx = sp.SimpSet.s(j, i, sx)
                a, b = sp.join_coords(j, s1, s1, sx)
                rebuilt = sp._join_canon(s1, s1, a, b, j.base_label, j.simplex_deg(sx))
                assert rebuilt == sx


def test_wedge_and_quotient():
    s1 = sp.circle_S1()
    w = sp.wedge([s1, s1], keys=["a", "b"])
    w.validate()
    assert hgroups(w) == {1: (2, [])}
    # X/X is a point
    all_labels = [lab for d, ls in w.simplices.items() for lab in ls if lab != w.base_label]
    q, proj = sp.quotient(w, all_labels)
    assert q.nondegenerate_count() == 1
    proj.validate()
    # X/basepoint is X
    q2, _ = sp.quotient(w, [])
    assert hgroups(q2) == hgroups(w)


def test_quotient_not_subcomplex():
    s1 = sp.circle_S1()
    sm = sp.smash(s1, s1)
    top = [lab for lab in sm.labels(2)]
    with pytest.raises(NotSubcomplex):
        sp.quotient(sm, top)  # faces of 2-cells missing


def test_quotient_join_of_projection():
    # (f rj 1) of a collapse f is a collapse with kernel f^{-1}(*) rj Z
    s0 = sphere_zero()
    j = sp.reduced_join(s0, s0)
    # collapse the first factor: f: S0 -> point
    non_base = [lab for lab in (("rj", "p", "p"),)]
    q, proj = sp.quotient(j, non_base)
    assert q.nondegenerate_count() == 1


def test_sd_circle():
    s1 = sp.circle_S1()
    sub = sp.sd(s1)
    sub.validate()
    assert hgroups(sub) == {1: (1, [])}
    # circle subdivides into two vertices and two edges
    assert len(sub.labels(0)) == 2
    assert len(sub.labels(1)) == 2


def test_sd_sphere():
    s2 = two_sphere()
    s2.validate()
    assert hgroups(s2) == {2: (1, [])}
    sub = sp.sd(s2)
    sub.validate()
    assert hgroups(sub) == {2: (1, [])}


def test_sd_point():
    pt = sp.SimpSet({0: ["*"]}, {"*": ()}, "*")
    assert sp.sd(pt).nondegenerate_count() == 1


def test_smash_to_join_small():
    s0 = sphere_zero()
    f, src, tgt = sp.smash_to_join(s0, s0)
    f.validate()
    assert is_quasi_iso(f)
    # the unique nondegenerate source 1-simplex maps to the join 1-simplex
    one = [lab for lab in src.labels(1)]
    assert len(one) == 1
    assert f(sp.nondeg(one[0])) == ((), ("rj", "p", "p"))


def test_smash_to_join_circles():
    s1 = sp.circle_S1()
    f, src, tgt = sp.smash_to_join(s1, s1)
    f.validate()
    assert is_quasi_iso(f)


def test_smash_to_join_mixed():
    ss, _ = sp.circle_Ssigma()
    s1 = sp.circle_S1()
    f, src, tgt = sp.smash_to_join(ss, s1)
    f.validate()
    assert is_quasi_iso(f)


def test_gamma_simplicial_and_equivariant():
    gm, src, tgt, (lsw, rsw) = sp.gamma()
    gm.validate()
    lsw.validate()
    rsw.validate()
    # gamma((1,-2)) = (-1, 2) in degree 2; check via coordinates
    ss, swap = sp.circle_Ssigma()
    a = ss.s(1, sp.nondeg("+1"))  # label +1 in degree 2
    b = ss.s(0, sp.nondeg("-2")) if False else ss.s(0, sp.nondeg("-1"))  # -2 in degree 2
    lab = sp._smash_canon(ss, ss, (a, b), 2, src.base_label)
    assert lab[0] == ()
    img = gm(lab)
    ia, ib = sp.smash_coords(img[1])
    # target second coordinate is |b| = 2; first is swapped a = -1 pattern
    assert ib == ((0,), "e")
    assert ia == ((1,), "-1")
    # swap on the second factor maps to the same simplex as swapping on the first
    left = gm.compose(lsw)
    right = gm.compose(rsw)
    s1 = sp.circle_S1()
    ident = sp.identity_map(s1)
    swap_target = sp.smash_map(swap, ident, tgt, tgt)
    assert left.assignment == swap_target.compose(gm).assignment
    assert right.assignment == swap_target.compose(gm).assignment


def test_homotopy_orbits_point():
    pt = sp.SimpSet({0: ["*"]}, {"*": ()}, "*")
    g = cyclic_group(3)
    act = sp.trivial_action(g, pt)
    orb = sp.homotopy_orbits(pt, act, 4)
    assert orb.nondegenerate_count() == 1


def test_homotopy_orbits_s0_is_bg():
    s0 = sphere_zero()
    g = z2_with_sign()
    act = sp.trivial_action(g, s0)
    orb = sp.homotopy_orbits(s0, act, 5)
    orb.validate()
    h = hgroups(orb)
    assert h.get(1) == (0, [2])
    assert 2 not in h
    assert h.get(3) == (0, [2])
    assert 4 not in h


def test_homotopy_orbits_ssigma():
    ss, swap = sp.circle_Ssigma()
    g = z2_with_sign()
    act = sp.GroupAction(g, {0: sp.identity_map(ss), 1: swap})
    act.validate()
    orb = sp.homotopy_orbits(ss, act, 5)
    orb.validate()
    h = hgroups(orb)
    assert h.get(1) == (0, [2])
    assert 2 not in h
    assert h.get(3) == (0, [2])
    # over Z[1/2] everything vanishes
    hz = hgroups(orb, "Zhalf")
    assert all(d >= 5 for d in hz)


def test_reduce_orbits_identity_case():
    s0 = sphere_zero()
    g = z2_with_sign()
    act = sp.trivial_action(g, s0)
    all_labels = {"*", "p"}
    orb, h = sp.reduce_orbits(s0, act, all_labels, 4)
    assert set(h) == {0, 1}
    full = sp.homotopy_orbits(s0, act, 4)
    assert hgroups(orb) == hgroups(full)


def test_reduce_orbits_swapped_wedge():
    # X = wedge of two circles swapped by Z/2; Y = one circle; H trivial
    s1 = sp.circle_S1()
    w = sp.wedge([s1, s1], keys=["a", "b"])
    g = z2_with_sign()
    swap_asg = {w.base_label: sp.nondeg(w.base_label)}
    for d, labs in w.simplices.items():
        for lab in labs:
            if lab == w.base_label:
                continue
            key, inner = lab
            other = "b" if key == "a" else "a"
            swap_asg[lab] = sp.nondeg((other, inner))
    swap = sp.SimpMap(w, w, swap_asg)
    act = sp.GroupAction(g, {0: sp.identity_map(w), 1: swap})
    act.validate()
    y_labels = {w.base_label, ("a", "e")}
    orb, h = sp.reduce_orbits(w, act, y_labels, 4)
    assert h == [0]
    assert hgroups(orb) == {1: (1, [])}


def test_reduce_orbits_conditions_fail():
    # Z/2 fixing one circle and swapping nothing cannot satisfy condition 2
    s1 = sp.circle_S1()
    w = sp.wedge([s1, s1], keys=["a", "b"])
    g = z2_with_sign()
    act = sp.trivial_action(g, w)
    with pytest.raises(ConditionsFail):
        sp.reduce_orbits(w, act, {w.base_label, ("a", "e")}, 4)


def test_shuffle_chain_is_cycle():
    ss, _ = sp.circle_Ssigma()
    s1 = sp.circle_S1()
    sm = sp.smash(ss, s1)
    ch = sp.shuffle_smash_chain(ss, s1, sm, sp.ssigma_generator_chain(), {"e": 1}, 1, 1)
    c = normalized_chains(sm)
    v = c.chain_vector(2, ch)
    assert any(x != 0 for x in v)
    assert all(x == 0 for x in c.apply_boundary(2, v))


def random_pointed_set(rng, max_extra=8, max_dim=2):
    """A random finite pointed simplicial set built as iterated cones."""
    bp = "*"
    simplices = {0: [bp]}
    faces = {bp: ()}
    count = 0
    n_vertices = rng.randint(0, 2)
    for i in range(n_vertices):
        lab = f"v{i}"
        simplices[0].append(lab)
        faces[lab] = ()
    for _ in range(rng.randint(1, max_extra)):
        d = rng.randint(1, max_dim)
        lower = [
            (dd, lab)
            for dd in range(d)
            for lab in simplices.get(dd, [])
        ]
        if not lower:
            continue
        lab = f"c{count}"
        count += 1
        fs = []
        for _ in range(d + 1):
            dd, base = rng.choice(lower)
            sx = sp.nondeg(base)
            cur = dd
            while cur < d - 1:
                sx = sp.SimpSet.s(None, rng.randint(0, cur), sx)
                cur += 1
            fs.append(sx)
        # fix up so that simplicial identities hold: build as a cone over an
        # existing simplex instead when the random faces are inconsistent
        probe = dict(faces)
        probe[lab] = tuple(fs)
        trial = {k: list(v) for k, v in simplices.items()}
        trial.setdefault(d, [])
        if lab not in trial[d]:
            trial[d] = trial[d] + [lab]
        try:
            cand = sp.SimpSet(trial, probe, bp)
            cand.validate()
        except Exception:
            continue
        simplices = trial
        faces = probe
    return sp.SimpSet(simplices, faces, bp)


def test_smash_to_join_random_pairs():
    rng = random.Random(42)
    done = 0
    while done < 6:
        x = random_pointed_set(rng)
        y = random_pointed_set(rng)
        if x.nondegenerate_count() > 12 or y.nondegenerate_count() > 12:
            continue
        f, src, tgt = sp.smash_to_join(x, y)
        f.validate()
        assert is_quasi_iso(f)
        done += 1


def test_json_roundtrip():
    s1 = sp.circle_S1()
    sm = sp.smash(s1, s1)
    data = sm.to_json()
    back = sp.SimpSet.from_json(data)
    back.validate()
    assert hgroups(back) == hgroups(sm)
