"""The cut-index categories, the Dehn cube over a family, the smash/join
comparison maps, the Dehn complex, and its edge map.

Cut bookkeeping: an index object (b, a_1, ..., a_i) with b + sum a_j = d is
stored as its set of cut positions {b, b+a_1, ...} minus {d}; adding a cut
at position t is the Dehn map splitting flags at their dimension-t entry
(within the factor containing t).  The full category is the d-cube on cuts
{0..d-1}; the even category keeps the cuts t = d (mod 2), 1 <= t <= d-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import building as bd
from . import exactlin as ex
from . import lattice as lat
from .errors import DegenerateConfiguration, InputError, NonCommutingSquare
from .homology import (
    ChainComplex,
    CubeDiagram,
    DegreeHomology,
    HomologyGroup,
    cube_from_simpsets,
    cube_ss,
    homology_dict,
    normalized_chains,
    total_complex,
)
from .simpset import (
    GroupAction,
    SimpMap,
    SimpSet,
    check_equivariant,
    circle_S1,
    circle_Ssigma,
    identity_map,
    nondeg,
    orbit_face_chain,
    orbit_total_chains,
    orbit_total_map,
    smash,
    smash_coords,
    smash_map,
    _smash_canon,
    _join_canon,
    s1_label_value,
)


# ---------------------------------------------------------------------------
# index categories


@dataclass(frozen=True)
class IndexObject:
    """A composition (b, a_1, ..., a_i) of the geometry dimension."""

    b: int
    parts: tuple

    @property
    def total(self) -> int:
        return self.b + sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts) + 1

    def cut_set(self) -> tuple:
        # all proper partial sums, b itself included
        cuts = []
        run = self.b
        for a in self.parts:
            cuts.append(run)
            run += a
        return tuple(cuts)

    def as_tuple(self) -> tuple:
        return (self.b,) + self.parts


def object_from_cuts(d: int, cuts) -> IndexObject:
    cuts = tuple(sorted(cuts))
    if not cuts:
        return IndexObject(d, ())
    parts = []
    for a, b in zip(cuts, cuts[1:] + (d,)):
        parts.append(b - a)
    return IndexObject(cuts[0], tuple(parts))


@dataclass
class CubeIndex:
    """The cut category in one of the two modes, as an explicit cube."""

    mode: str
    d: int
    cuts: tuple
    objects: list
    atomic_morphisms: list  # (source cuts, added cut t, direction r)

    def dim(self) -> int:
        return len(self.cuts)

    def eps_of(self, cuts) -> tuple:
        chosen = set(cuts)
        return tuple(1 if t in chosen else 0 for t in self.cuts)

    def cuts_of(self, eps) -> tuple:
        return tuple(t for t, e in zip(self.cuts, eps) if e)


def enumerate_index(d: int, mode: str) -> CubeIndex:
    """All objects and atomic morphisms of the cut category.

    mode 'I' keeps even steps only (an floor((d-1)/2)-cube); mode 'Ihat'
    allows all cuts 0..d-1 (a d-cube).  Direction labels r = d - t.
    """
    if d < 1:
        raise InputError("dimension must be >= 1")
    if mode in ("I", "I_d"):
        cuts = tuple(t for t in range(1, d) if (d - t) % 2 == 0)
    elif mode in ("Ihat", "Ihat_d"):
        cuts = tuple(range(d))
    else:
        raise InputError(f"unknown mode {mode!r}")
    objects = []
    morphisms = []
    for k in range(len(cuts) + 1):
        for chosen in itertools.combinations(cuts, k):
            objects.append(object_from_cuts(d, chosen))
    for obj in objects:
        have = set(obj.cut_set())
        for t in cuts:
            if t not in have:
                morphisms.append((tuple(sorted(have)), t, d - t))
    return CubeIndex(mode, d, cuts, objects, morphisms)


# ---------------------------------------------------------------------------
# flag spaces for index objects, J-spaces


def build_flag_space_A(fam: bd.SubspaceFamily, a_vec) -> SimpSet:
    """F^A for an index object given as (b, a_1, ..., a_i)."""
    obj = IndexObject(a_vec[0], tuple(a_vec[1:]))
    if obj.total != fam.geometry.geom_dim:
        raise InputError(f"{a_vec} does not sum to the geometry dimension")
    return bd.build_flag_space(fam, obj.cut_set())


def build_J(fam: bd.SubspaceFamily, a_vec):
    """J^A: wedge over decompositions of F^W ^ (S^s ^ F^V_1) ^ ...

    Returns (SimpSet, structure) where structure records per-wedge-key the
    decomposition and the smash factor spaces.
    """
    from .simpset import wedge

    obj = IndexObject(a_vec[0], tuple(a_vec[1:]))
    cuts = obj.cut_set()
    ssig, _ = circle_Ssigma()
    pieces = []
    keys = []
    structure = {}
    for decomp in bd._decompositions(fam, fam.full, cuts):
        factors = [bd.build_flag_space(fam, (), piece) for piece in decomp]
        x = factors[0]
        for fct in factors[1:]:
            x = smash(x, smash(ssig, fct))
        pieces.append(x)
        keys.append(decomp)
        structure[decomp] = factors
    if not pieces:
        raise InputError(f"no decompositions matching {a_vec}")
    return wedge(pieces, keys=keys), structure


# ---------------------------------------------------------------------------
# the Dehn cube


class DehnCube:
    """The cube of spaces S^sigma ^ F^(cuts) with Dehn maps as edges."""

    def __init__(self, fam: bd.SubspaceFamily, mode: str):
        self.fam = fam
        self.d = fam.geometry.geom_dim
        self.index = enumerate_index(self.d, mode)
        self.ssig, self.swap = circle_Ssigma()
        self.flag_spaces = {}
        self.spaces = {}
        self.flag_maps = {}
        self.maps = {}
        cuts_list = self.index.cuts
        m = len(cuts_list)
        for eps in itertools.product((0, 1), repeat=m):
            cuts = self.index.cuts_of(eps)
            fsp = bd.build_flag_space(fam, cuts)
            self.flag_spaces[eps] = fsp
            self.spaces[eps] = smash(self.ssig, fsp)
        ident = identity_map(self.ssig)
        for eps in self.flag_spaces:
            for j in range(m):
                if eps[j] == 1:
                    continue
                cuts = self.index.cuts_of(eps)
                t = cuts_list[j]
                tgt_eps = tuple(e if k != j else 1 for k, e in enumerate(eps))
                _, step = bd.cut_map(fam, self.flag_spaces[eps], cuts, t)
                step = SimpMap(
                    self.flag_spaces[eps], self.flag_spaces[tgt_eps], step.assignment
                )
                self.flag_maps[(eps, j)] = step
                self.maps[(eps, j)] = smash_map(
                    ident, step, self.spaces[eps], self.spaces[tgt_eps]
                )

    def m(self) -> int:
        return len(self.index.cuts)

    def as_cube_diagram(self, check: bool = True) -> CubeDiagram:
        return cube_from_simpsets(self.m(), self.spaces, self.maps, check=check)

    def check_squares(self):
        """Flag-level square commutation, simplex by simplex."""
        m = self.m()
        for eps in self.flag_spaces:
            open_dirs = [j for j in range(m) if eps[j] == 0]
            for j, l in itertools.combinations(open_dirs, 2):
                ej = tuple(e if k != j else 1 for k, e in enumerate(eps))
                el = tuple(e if k != l else 1 for k, e in enumerate(eps))
                a = self.flag_maps[(ej, l)].compose(self.flag_maps[(eps, j)])
                b = self.flag_maps[(el, j)].compose(self.flag_maps[(eps, l)])
                if a.assignment != b.assignment:
                    bad = next(
                        k for k in a.assignment if a.assignment[k] != b.assignment[k]
                    )
                    raise NonCommutingSquare(
                        f"Dehn square at {eps} dirs ({j},{l}) fails at {bad!r}",
                        indices=(eps, j, l),
                    )
        return True


def build_dehn_cube(fam: bd.SubspaceFamily, mode: str) -> DehnCube:
    cube = DehnCube(fam, mode)
    cube.check_squares()
    return cube


def verify_Zid(fam: bd.SubspaceFamily) -> dict:
    """Total-complex homology of the full cut cube vs the (d+1)-sphere.

    Returns a report dict with 'ok', the homology found, and the expected
    degree d+1.
    """
    cube = build_dehn_cube(fam, "Ihat")
    diagram = cube.as_cube_diagram()
    tot = total_complex(diagram)
    h = homology_dict(tot, "Z")
    d = fam.geometry.geom_dim
    want = {d + 1: (1, [])}
    got = {k: (g.rank, g.torsion) for k, g in h.items()}
    return {"ok": got == want, "homology": got, "expected": want, "degree": d + 1}


# ---------------------------------------------------------------------------
# the comparison map f_A  (length <= 2 objects: one gamma factor)


def compare_f_A(fam: bd.SubspaceFamily, a_vec) -> dict:
    """Build f_A: S^s ^ J^A -> S^s ^ F^A and measure its top homology.

    For A = (d) this is the identity.  For length-2 objects the composite
    tau, gamma, smash-to-join is built coordinatewise; the induced map on
    H_(d+1) must be 2 times a unimodular matrix (Smith divisors all 2).
    Longer objects would iterate the same move and are not needed by the
    desk-scale fixtures.
    """
    d = fam.geometry.geom_dim
    obj = IndexObject(a_vec[0], tuple(a_vec[1:]))
    if obj.total != d:
        raise InputError("index object does not match the geometry dimension")
    if obj.length == 1:
        return {"ok": True, "identity": True, "divisors": []}
    if obj.length > 2:
        raise InputError("comparison implemented for objects of length <= 2")
    ssig, swap = circle_Ssigma()
    s1 = circle_S1()
    jspace, structure = build_J(fam, a_vec)
    source = smash(ssig, jspace)
    cuts = obj.cut_set()
    decomps = list(structure)
    # target: wedge over decompositions of S^s ^ (F^W rj F^V)
    from .simpset import reduced_join, wedge

    joins = {}
    for decomp in decomps:
        f_w, f_v = structure[decomp]
        joins[decomp] = reduced_join(f_w, f_v)
    target_wedge = wedge([joins[dc] for dc in decomps], keys=decomps)
    target = smash(ssig, target_wedge)
    asg = {source.base_label: nondeg(target.base_label)}
    for n, labs in source.simplices.items():
        for lab in labs:
            if lab == source.base_label:
                continue
            s, inner = smash_coords(lab)
            # inner is a (possibly degenerate) simplex of the wedge J
            wword, wlab = inner
            key, _ = wlab
            f_w, f_v = structure[key]
            # coordinates inside F^W ^ (S^s ^ F^V)
            inner_sm = (wword, wlab[1])
            wpart, tv = _smash_pair(inner_sm)
            tpart, vpart = _smash_pair(tv)
            # gamma on (s, tpart)
            sgn = _sigma_sign(tpart)
            if sgn == 0:
                asg[lab] = target.basepoint(n)
                continue
            s2 = s if sgn == 1 else swap(s)
            upart = (tpart[0], "e")
            i = s1_label_value(s1, upart)
            ax = wpart
            for _ in range(n - i + 1):
                ax = f_w.d(i, ax)
            by = vpart
            for _ in range(i):
                by = f_v.d(0, by)
            join_sx = _join_canon(f_w, f_v, ax, by, joins[key].base_label, n)
            if joins[key].is_basepoint(join_sx):
                asg[lab] = target.basepoint(n)
                continue
            wedge_sx = (join_sx[0], (key, join_sx[1]))
            asg[lab] = _smash_canon(ssig, target_wedge, (s2, wedge_sx), n, target.base_label)
    fmap = SimpMap(source, target, asg)
    fmap.validate()
    from .homology import induced_homology

    ind = induced_homology(fmap, degrees=[d + 1])
    mat = ind[d + 1]["matrix"]
    src_rank = ind[d + 1]["source"].rank
    tgt_rank = ind[d + 1]["target"].rank
    divisors = lat.elementary_divisors(mat) if mat else []
    ok = (
        src_rank == tgt_rank
        and len(divisors) == src_rank
        and all(v == 2 for v in divisors)
    )
    return {
        "ok": ok,
        "identity": False,
        "divisors": divisors,
        "rank": src_rank,
        "scale": 2 ** (obj.length - 1),
        "map": fmap,
    }


def _smash_pair(sx):
    """Coordinates of a possibly degenerate smash simplex (word, ('sm',a,b))."""
    w, lb = sx
    _, a, b = lb
    a = _apply_word_raw(w, a)
    b = _apply_word_raw(w, b)
    return a, b


def _apply_word_raw(word, sx):
    from .simpset import SimpSet as _S

    for idx in reversed(word):
        sx = _S.s(None, idx, sx)
    return sx


def _sigma_sign(sx):
    base = sx[1]
    if base == "+1":
        return 1
    if base == "-1":
        return -1
    return 0


# ---------------------------------------------------------------------------
# the Dehn complex


@dataclass
class DehnComplexData:
    """The base complex of the orbit Dehn cube, with provenance."""

    d: int
    index: CubeIndex
    degrees: dict  # p -> list of (cuts, generator index)
    orders: dict  # p -> list of orders aligned with degrees (0 = free)
    differentials: dict  # p -> matrix: P_p -> P_{p-1} (columns mod orders)
    vertex_groups: dict  # cuts -> HomologyGroup
    ss_bottom_row: dict  # from cube_ss page 1: p -> HomologyGroup
    homology: list

    def to_json(self):
        return {
            "objects": {
                str(p): [list(cuts) for (cuts, _) in gens]
                for p, gens in self.degrees.items()
            },
            "orders": {str(p): list(v) for p, v in self.orders.items()},
            "differentials": {str(p): m for p, m in self.differentials.items()},
            "vertex_groups": {
                str(list(c)): str(g) for c, g in self.vertex_groups.items()
            },
            "ss_bottom_row": {str(p): str(g) for p, g in self.ss_bottom_row.items()},
            "homology": [h.to_json() for h in self.homology],
        }


def dehn_complex(fam: bd.SubspaceFamily, group, n_trunc: int, check_squares: bool = True) -> DehnComplexData:
    """Assemble the Dehn complex over a finite acting group.

    Vertices are H_(d+1) of the truncated homotopy orbits of the smashed
    flag spaces with Z[1/2] coefficients; differentials are induced by the
    orbit Dehn maps with the cube's Koszul signs.  Also computes the E^1
    bottom row of the orbit cube spectral sequence for cross-checking.
    """
    d = fam.geometry.geom_dim
    if n_trunc < d + 2:
        raise InputError(f"need truncation at least {d + 2} for H_{d + 1}")
    cube = DehnCube(fam, "I")
    if check_squares:
        cube.check_squares()
    if group.isometries is None:
        raise InputError("acting group needs an isometry embedding")
    if not fam.stabilizing(group.isometries.values()):
        raise InputError("group does not preserve the family")
    m = cube.m()
    ident_s = identity_map(cube.ssig)
    actions = {}
    chains = {}
    for eps, fsp in cube.flag_spaces.items():
        flag_act = bd.building_action(fam, group, fsp)
        smaps = {}
        for g in group.elements:
            sw = cube.swap if group.character[g] == -1 else ident_s
            smaps[g] = smash_map(sw, flag_act.maps[g], cube.spaces[eps], cube.spaces[eps])
        act = GroupAction(group, smaps)
        actions[eps] = act
        chains[eps] = orbit_total_chains(cube.spaces[eps], act, n_trunc)
    orbit_mats = {}
    for (eps, j), f in cube.maps.items():
        tgt_eps = tuple(e if k != j else 1 for k, e in enumerate(eps))
        if not check_equivariant(f, actions[eps], actions[tgt_eps]):
            raise NonCommutingSquare(f"Dehn map at {eps} dir {j} is not equivariant")
        orbit_mats[(eps, j)] = orbit_total_map(f, chains[eps], chains[tgt_eps])
    # homology of each orbit vertex in degree d+1 (Z[1/2]: odd part only)
    vertex = {}
    vertex_groups = {}
    for eps, c in chains.items():
        dh = DegreeHomology(c, d + 1)
        vertex[eps] = dh
        cuts = cube.index.cuts_of(eps)
        grp = _drop_two_primary(dh)
        vertex_groups[cuts] = grp
    # assemble the base complex: P_p = sum over |eps| = m - p
    def odd_part(o: int) -> int:
        while o % 2 == 0:
            o //= 2
        return o

    degrees = {}
    orders = {}
    index_of = {}
    for eps, dh in vertex.items():
        p = m - sum(eps)
        cuts = cube.index.cuts_of(eps)
        for i, o in enumerate(dh.sq.orders):
            # inverting 2 keeps free generators and the odd part of torsion
            if o == 0 or odd_part(o) > 1:
                degrees.setdefault(p, []).append((cuts, i))
                orders.setdefault(p, []).append(0 if o == 0 else odd_part(o))
                index_of[(cuts, i)] = len(degrees[p]) - 1
    diffs = {}
    for p in sorted(degrees):
        mat = lat.zeros(len(degrees.get(p - 1, [])), len(degrees[p]))
        for col, (cuts, i) in enumerate(degrees[p]):
            eps = cube.index.eps_of(cuts)
            dh = vertex[eps]
            chain_vec = dh.sq.gens[i]
            for j in range(m):
                if eps[j] == 1:
                    continue
                sgn = (-1) ** sum(eps[:j])
                tgt_eps = tuple(e if k != j else 1 for k, e in enumerate(eps))
                mat_k = orbit_mats[(eps, j)].get(
                    d + 1, lat.zeros(chains[tgt_eps].rank(d + 1), chains[eps].rank(d + 1))
                )
                img = lat.mat_vec_int(mat_k, chain_vec)
                coords = vertex[tgt_eps].classify(img)
                tgt_cuts = cube.index.cuts_of(tgt_eps)
                for k, c in enumerate(coords):
                    if (tgt_cuts, k) not in index_of:
                        continue
                    row = index_of[(tgt_cuts, k)]
                    mat[row][col] += sgn * c
        diffs[p] = mat
    _check_dd_mod_orders(degrees, orders, diffs)
    # spectral sequence cross-check: bottom row of E^1 of the orbit cube
    diagram = CubeDiagram(m, chains, orbit_mats, check=False)
    pages = cube_ss(diagram, max_r=1, only_q=d + 1)
    bottom = {}
    for (p, q), g in pages[0].entries.items():
        if q == d + 1:
            bottom[p] = HomologyGroup(q, g.rank, [t for t in g.torsion if t % 2 == 1])
    hom = _presented_homology(degrees, orders, diffs)
    return DehnComplexData(
        d,
        cube.index,
        degrees,
        orders,
        diffs,
        vertex_groups,
        bottom,
        hom,
    )


def _drop_two_primary(dh: DegreeHomology) -> HomologyGroup:
    tor = []
    for o in dh.sq.orders:
        if o > 1:
            while o % 2 == 0:
                o //= 2
            if o > 1:
                tor.append(o)
    return HomologyGroup(dh.degree, sum(1 for o in dh.sq.orders if o == 0), sorted(tor))


def _check_dd_mod_orders(degrees, orders, diffs):
    for p in sorted(degrees):
        if p - 1 not in degrees or p - 2 not in degrees:
            continue
        prod = lat.mat_mul_int(diffs[p - 1], diffs[p])
        for i, row in enumerate(prod):
            o = orders[p - 2][i]
            for v in row:
                if (o == 0 and v != 0) or (o > 1 and v % o != 0):
                    raise InputError("Dehn complex differential does not square to zero")


def _presented_homology(degrees, orders, diffs) -> list:
    """Homology of a complex of presented groups Z^n / (orders)."""
    out = []
    for p in sorted(degrees):
        n = len(degrees[p])
        rel_cols = []
        for i, o in enumerate(orders[p]):
            if o:
                col = [0] * n
                col[i] = o
                rel_cols.append(col)
        rel = lat.from_columns(rel_cols, n) if rel_cols else lat.zeros(n, 0)
        d_out = diffs.get(p, lat.zeros(len(degrees.get(p - 1, [])), n))
        nxt = len(degrees.get(p - 1, []))
        rel_tgt_cols = []
        for i, o in enumerate(orders.get(p - 1, [])):
            if o:
                col = [0] * nxt
                col[i] = o
                rel_tgt_cols.append(col)
        rel_tgt = (
            lat.from_columns(rel_tgt_cols, nxt) if rel_tgt_cols else lat.zeros(nxt, 0)
        )
        if nxt:
            znum = lat.preimage_lattice(d_out, rel_tgt)
        else:
            znum = lat.eye(n)
        d_in = diffs.get(p + 1)
        img_cols = []
        if d_in is not None and degrees.get(p + 1):
            img_cols = lat.columns(d_in)
        den_cols = img_cols + lat.columns(rel)
        den = (
            lat.hnf_column_basis(lat.from_columns(den_cols, n))
            if den_cols
            else lat.zeros(n, 0)
        )
        den_in = (
            lat.lattice_intersection(znum, den)
            if lat.shape(den)[1]
            else lat.zeros(n, 0)
        )
        sq = lat.subquotient(znum, den_in)
        grp = HomologyGroup(p, sq.rank, sq.torsion)
        if not grp.is_zero():
            out.append(grp)
    return out


# ---------------------------------------------------------------------------
# the edge map


def edge_map(tuple_isos, x0: ex.Subspace, fam: bd.SubspaceFamily):
    """Chain-level projection to the base: the signed flag class of the
    orbit simplex of a group tuple.

    tuple_isos: exactly d isometries (g_1, ..., g_d); x0 a point.  Vertices
    are h_i x0 with h_d = 1 and h_i = g_d ... g_(d-i); the result is the
    product of determinants times the alternating flag sum, as a chain in
    the normalized chains of S^sigma ^ F.
    """
    d = fam.geometry.geom_dim
    isos = list(tuple_isos)
    if len(isos) != d:
        raise InputError(f"need exactly {d} isometries")
    if x0.dim != 0:
        raise InputError("basepoint must be a point (dimension 0)")
    hs = []
    for i in range(d):
        h = isos[d - 1]
        for k in range(d - 2, d - 2 - i, -1):
            h = h * isos[k]
        hs.append(h)
    points = [h.apply(x0) for h in hs] + [x0]
    if len(set(points)) != d + 1:
        raise DegenerateConfiguration("tuple produces repeated vertices")
    sign = 1
    for g in isos:
        sign *= g.det_sign
    try:
        chain, sm, f_space = bd.simplex_class(points, fam)
    except bd.DegenerateSimplex as e:
        raise DegenerateConfiguration(str(e)) from e
    if sign == -1:
        chain = {k: -v for k, v in chain.items()}
    return chain, sm, f_space


def orbit_cycle_check(sm: SimpSet, action: GroupAction, chain: dict, degree: int) -> bool:
    """Is the identity-tuple embedding of the chain a cycle in the orbits?

    Evaluated lazily from the diagonal face formulas; no orbit space is
    materialized.
    """
    grp = action.group
    acc = {}
    ident = tuple(grp.identity for _ in range(degree))
    for lab, coeff in chain.items():
        for sgn, key in orbit_face_chain(sm, action, ident, nondeg(lab)):
            acc[key] = acc.get(key, 0) + sgn * coeff
    return all(v == 0 for v in acc.values())


# ---------------------------------------------------------------------------
# the double complex of the technical lemma


class BarCell:
    """A formal cell (g_1..g_j){x_0|...|x_i}; points are group labels g*x."""

    __slots__ = ()


def _cell(gs, pts):
    return (tuple(gs), tuple(pts))


def _chain_add(acc, cell, coeff):
    if coeff:
        acc[cell] = acc.get(cell, 0) + coeff
        if acc[cell] == 0:
            del acc[cell]


def chain_sub(a, b):
    out = dict(a)
    for k, v in b.items():
        _chain_add(out, k, -v)
    return out


def chain_scale(a, c):
    return {k: v * c for k, v in a.items() if v * c != 0}


def d_vert(group, chain):
    """The bar differential with determinant twist and point action."""
    out = {}
    for (gs, pts), coeff in chain.items():
        j = len(gs)
        if j == 0:
            continue
        g1 = gs[0]
        tw = group.character[g1]
        newpts = tuple(group.mul(g1, p) for p in pts)
        _chain_add(out, _cell(gs[1:], newpts), coeff * tw)
        for ell in range(1, j):
            merged = group.mul(gs[ell], gs[ell - 1])
            t2 = gs[:ell - 1] + (merged,) + gs[ell + 1 :]
            _chain_add(out, _cell(t2, pts), coeff * (-1) ** ell)
        _chain_add(out, _cell(gs[:-1], pts), coeff * (-1) ** j)
    return out


def d_horiz(chain):
    out = {}
    for (gs, pts), coeff in chain.items():
        for ell in range(len(pts)):
            sub = pts[:ell] + pts[ell + 1 :]
            _chain_add(out, _cell(gs, sub), coeff * (-1) ** ell)
    return out


def d_total(group, chain):
    """d^h + d^v; the alpha telescescope is stated against this convention."""
    out = d_horiz(chain)
    for k, v in d_vert(group, chain).items():
        _chain_add(out, k, v)
    return out


def _prod(group, gs, a, b):
    """Pi_a^b = g_b ... g_a (1-indexed, identity when b < a)."""
    acc = group.identity
    for k in range(a, b + 1):
        acc = group.mul(gs[k - 1], acc)
    return acc


def _coprod(group, gs, a, b):
    """amalg_a^b = g_a^{-1} ... g_b^{-1} = (Pi_a^b)^{-1}."""
    return group.inv(_prod(group, gs, a, b))


def delta_cell(group, gs, y, lam, xpt):
    """Delta^lambda(g, y): group part (g_1..g_lam), points y, amalg_1^j x
    down to amalg_1^lam x."""
    j = len(gs)
    pts = [y] + [group.mul(_coprod(group, gs, 1, k), xpt) for k in range(j, lam - 1, -1)]
    return _cell(gs[:lam], pts)


def b_cell(group, gs, lam, xpt):
    j = len(gs)
    pts = [group.mul(_coprod(group, gs, 1, k), xpt) for k in range(j, lam - 1, -1)]
    return _cell(gs[:lam], pts)


def bar_d_ell(group, gs, ell):
    """(coefficient multiplier, new tuple) for d_ell of a bar tuple."""
    j = len(gs)
    if ell == 0:
        return group.character[gs[0]], gs[1:]
    if ell == j:
        return 1, gs[:-1]
    merged = group.mul(gs[ell], gs[ell - 1])
    return 1, gs[:ell - 1] + (merged,) + gs[ell + 1 :]


def point_cone(chain, xpt):
    """Cone a point chain at xpt: {x_0|...} -> {xpt|x_0|...}."""
    return {_cell(gs, (xpt,) + pts): c for (gs, pts), c in chain.items()}


def alpha_chains(group, sigma, d, xpt):
    """The telescope chains alpha^d, ..., alpha^1 for a twisted bar cycle.

    alpha^d is the B-chain of the full tuples (one point, full group part);
    each lower alpha cones the vertical boundary of the previous one in the
    point direction.  Signs are fixed so that d^v alpha^l = d^h alpha^(l-1)
    on the nose.  alpha^l sits in C_(d+1-l, l).
    """
    alphas = {}
    top = {}
    for gs, m in sigma.items():
        _chain_add(top, b_cell(group, gs, d, xpt), m)
    alphas[d] = top
    eps = {d: 1}
    for lam in range(d - 1, 0, -1):
        # alpha^lam = eps * cone(d^v alpha^(lam+1)); choose eps so that the
        # unsigned telescope relation holds
        dv = d_vert(group, alphas[lam + 1])
        cone = point_cone(dv, xpt)
        alphas[lam] = cone
        lhs = d_vert(group, alphas[lam + 1])
        rhs = d_horiz(alphas[lam])
        if lhs != rhs:
            # the cone identity gives d^h(cone c) = c - cone(d^h c); the
            # correction vanishes because sigma is a cycle
            raise InputError("telescope construction failed; sigma not a cycle?")
    return alphas


def delta_identity_check(group, trials: int, seed: int = 0) -> dict:
    """Verify the two printed boundary expansions of the Delta chains.

    For random tuples g (no identities), points y and all valid lambda:
      d^v Delta^l(g,y) = Delta^(l-1)(d_0 g, g_1 y)
                         + sum_(1<=e<l) (-1)^e Delta^(l-1)(d_e g, y)
                         + (-1)^l (g_1..g_(l-1)){y|amalg_1^j x|...|amalg_1^l x}
      d^h Delta^(l-1)(g,y) = B^(l-1)(g)
                         + (-1)^(j+1) sum_(l<=e<=j) (-1)^e Delta^(l-1)(d_e g, y)
                         + (-1)^(j+l) (g_1..g_(l-1)){y|amalg_1^j x|...|amalg_1^l x}
    """
    import random

    rng = random.Random(seed)
    xpt = group.identity
    nonident = [h for h in group.elements if h != group.identity]
    checked = 0
    for _ in range(trials):
        j = rng.choice([1, 2, 3])
        gs = tuple(rng.choice(nonident) for _ in range(j))
        y = rng.choice(group.elements)
        for lam in range(1, j + 1):
            shared_tail = _cell(
                gs[: lam - 1],
                tuple(
                    [y]
                    + [
                        group.mul(_coprod(group, gs, 1, k), xpt)
                        for k in range(j, lam - 1, -1)
                    ]
                ),
            )
            lhs = d_vert(group, {delta_cell(group, gs, y, lam, xpt): 1})
            rhs = {}
            tw, t0 = bar_d_ell(group, gs, 0)
            _chain_add(rhs, delta_cell(group, t0, group.mul(gs[0], y), lam - 1, xpt), tw)
            for ell in range(1, lam):
                c, t = bar_d_ell(group, gs, ell)
                _chain_add(rhs, delta_cell(group, t, y, lam - 1, xpt), c * (-1) ** ell)
            _chain_add(rhs, shared_tail, (-1) ** lam)
            if chain_sub(lhs, rhs):
                return {"ok": False, "stage": "vertical expansion", "g": gs, "lam": lam}
            lhs2 = d_horiz({delta_cell(group, gs, y, lam - 1, xpt): 1})
            rhs2 = {b_cell(group, gs, lam - 1, xpt): 1}
            for ell in range(lam, j + 1):
                c, t = bar_d_ell(group, gs, ell)
                _chain_add(
                    rhs2, delta_cell(group, t, y, lam - 1, xpt), c * (-1) ** (j + 1 + ell)
                )
            _chain_add(rhs2, shared_tail, (-1) ** (j + lam))
            if chain_sub(lhs2, rhs2):
                return {"ok": False, "stage": "horizontal expansion", "g": gs, "lam": lam}
            checked += 1
    return {"ok": True, "checked": checked}


def tech_identity_check(d: int, group, trials: int, seed: int = 0) -> dict:
    """Machine verification of the double-complex telescope identities.

    For random (unnormalized) twisted bar cycles sigma of degree d:
      - the B-chain face sums vanish: sum_i m_i sum_e (-1)^e B^l(d_e g) = 0;
      - the alpha telescope satisfies d^v alpha^l = d^h alpha^(l-1) and
        d^h alpha^d = sigma{} on the nose;
      - the total-complex identity
        d(sum (-1)^l alpha^l) = (-1)^d d^h alpha^d - d^v alpha^1
        (the sign of the alpha^1 term is recorded in the ledger);
      - sigma{} - (-1)^d d^v alpha^1 is an explicit total boundary;
      - the closed formula (-1)^(d+1) sum m det(Pi g) (alternating hatted
        sums over the orbit points [x, g_d x, ..., Pi_1^d x]) is a
        horizontal cycle whose point lists match the edge-map vertex lists,
        and differs from the derived representative by the boundary of the
        canonical cone.
    """
    import random

    if d not in (1, 2):
        raise InputError("the identity check is implemented for d in {1, 2}")
    rng = random.Random(seed)
    xpt = group.identity  # formal basepoint with free orbit
    cycles = _random_bar_cycles(group, d, trials, rng)
    checked = 0
    for sigma in cycles:
        if not sigma:
            continue
        # B-cancellation from the cycle condition
        for lam in range(0, d):
            acc = {}
            for gs, m in sigma.items():
                for ell in range(len(gs) + 1):
                    c, t = bar_d_ell(group, gs, ell)
                    _chain_add(acc, b_cell(group, t, lam, xpt), m * c * (-1) ** ell)
            if acc:
                return {"ok": False, "stage": f"B^{lam} cancellation", "sigma": sigma}
        alphas = alpha_chains(group, sigma, d, xpt)
        for lam in range(2, d + 1):
            lhs = d_vert(group, alphas[lam])
            rhs = d_horiz(alphas[lam - 1])
            if lhs != rhs:
                return {"ok": False, "stage": f"telescope lam={lam}", "sigma": sigma}
        total_arg = {}
        for lam in range(1, d + 1):
            for k, v in chain_scale(alphas[lam], (-1) ** lam).items():
                _chain_add(total_arg, k, v)
        lhs = d_total(group, total_arg)
        rhs = chain_sub(
            chain_scale(d_horiz(alphas[d]), (-1) ** d), d_vert(group, alphas[1])
        )
        if lhs != rhs:
            return {"ok": False, "stage": "total identity", "sigma": sigma}
        # d^h alpha^d recovers sigma exactly
        sigma_cell = {_cell(gs, ()): m for gs, m in sigma.items()}
        if d_horiz(alphas[d]) != sigma_cell:
            return {"ok": False, "stage": "edge recovers sigma", "sigma": sigma}
        # sigma{} = d_total(W) + (-1)^d d^v alpha^1 with W explicit
        dv1 = d_vert(group, alphas[1])
        w = {}
        for lam in range(1, d + 1):
            for k, v in chain_scale(alphas[lam], (-1) ** (d + lam)).items():
                _chain_add(w, k, v)
        derived = chain_scale(dv1, (-1) ** d)
        witness = chain_sub(chain_sub(sigma_cell, derived), d_total(group, w))
        if witness:
            return {"ok": False, "stage": "boundary witness", "sigma": sigma}
        if d_horiz(dv1):
            return {"ok": False, "stage": "column cycle", "sigma": sigma}
        # the closed formula: cycle, edge-map point lists, cone comparison
        closed = _closed_formula(group, sigma, xpt)
        if d_horiz(closed):
            return {"ok": False, "stage": "closed formula cycle", "sigma": sigma}
        for gs in sigma:
            pts = _edge_vertex_list(group, gs, xpt)
            want = {tuple(pts[:ell] + pts[ell + 1 :]) for ell in range(d + 1)}
            got = {
                p
                for (gp, p), c in _closed_formula(group, {gs: 1}, xpt).items()
            }
            if not got <= want:
                return {"ok": False, "stage": "term point lists", "tuple": gs}
        diff = chain_sub(derived, closed)
        if any(gp for (gp, _) in diff) or d_horiz(diff):
            return {"ok": False, "stage": "representative difference", "sigma": sigma}
        cone = point_cone(diff, xpt)
        if chain_sub(d_horiz(cone), diff):
            return {"ok": False, "stage": "cone witness", "sigma": sigma}
        checked += 1
    return {"ok": True, "checked": checked}


def _edge_vertex_list(group, gs, xpt):
    d = len(gs)
    return [xpt] + [
        group.mul(_prod(group, gs, k, d), xpt) for k in range(d, 0, -1)
    ]


def _closed_formula(group, sigma, xpt):
    out = {}
    for gs, m in sigma.items():
        d = len(gs)
        det = 1
        for g in gs:
            det *= group.character[g]
        pts = [xpt] + [
            group.mul(_prod(group, gs, k, d), xpt) for k in range(d, 0, -1)
        ]
        # pts = [x, g_d x, g_d g_{d-1} x, ..., Pi_1^d x]
        for ell in range(d + 1):
            hat = pts[:ell] + pts[ell + 1 :]
            _chain_add(out, _cell((), tuple(hat)), m * det * (-1) ** (d + 1) * (-1) ** ell)
    return out


def _random_bar_cycles(group, d: int, trials: int, rng):
    """Random cycles of the unnormalized twisted bar complex in degree d.

    Unnormalized tuples (identity entries allowed) are needed so the face
    sums vanish on the nose, not merely modulo degenerate tuples.
    """
    gens = list(itertools.product(group.elements, repeat=d))
    lower = list(itertools.product(group.elements, repeat=d - 1))
    lidx = {t: i for i, t in enumerate(lower)}
    m = lat.zeros(len(lower), len(gens))
    for j, t in enumerate(gens):
        for ell in range(d + 1):
            c, t2 = bar_d_ell(group, t, ell)
            m[lidx[t2]][j] += c * (-1) ** ell
    ker = lat.kernel_basis(m)
    cols = lat.columns(ker)
    out = []
    for _ in range(trials):
        vec = [0] * len(gens)
        for col in rng.sample(cols, min(6, len(cols))) if cols else []:
            w = rng.randint(-2, 2)
            if w:
                for i, v in enumerate(col):
                    vec[i] += w * v
        sigma = {gens[i]: v for i, v in enumerate(vec) if v}
        if sigma:
            out.append(sigma)
    return out
