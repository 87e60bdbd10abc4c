"""RT-buildings over finite subspace families and the rigid Dehn maps.

A finite, closed family of subspaces stands in for the full subspace poset
of a geometry.  Buildings are pointed simplicial sets of flags ending at the
top subspace; the derived Dehn invariant splits a flag at the maximal pivot
and projects the tail to the orthocomplement, exactly as the combinatorial
rule prescribes.

Flag spaces for a set of cuts are stored flat: a simplex is a decomposition
(W, V_1, ..., V_m) together with one flag per factor, which makes composite
Dehn maps and the reassembly bijection direct to state and check.
"""

from __future__ import annotations

import itertools

from . import exactlin as ex
from .errors import (
    BijectionFailure,
    ClosureMissing,
    DegenerateSimplex,
    DegenerateSpan,
    InputError,
)
from .exactlin import QuadSpace, Subspace
from .simpset import SimpMap, SimpSet, GroupAction, nondeg, identity_map


class SubspaceFamily:
    """A finite set of canonical subspaces of one geometry, incl. the full
    space, with verified closure properties."""

    def __init__(self, geometry: QuadSpace, members, closure_ops=()):
        self.geometry = geometry
        full = geometry.full_subspace()
        mset = set(members)
        mset.add(full)
        mset = {m for m in mset if m.lin_dim > 0}
        self.members = sorted(mset, key=lambda s: s.sort_key())
        self.full = full
        self.closure_ops = tuple(closure_ops)
        for op in self.closure_ops:
            self.verify_closure(op)

    def proper_members(self):
        return [m for m in self.members if m != self.full]

    def members_of_dim(self, d: int):
        return [m for m in self.members if m.dim == d]

    def sub_members(self, top: Subspace):
        """Members properly inside ``top`` matching its negative index."""
        target = top.restricted_signature()[0]
        out = []
        for m in self.members:
            if m == top or m.lin_dim >= top.lin_dim:
                continue
            if top.contains(m) and m.restricted_signature()[0] == target:
                out.append(m)
        return out

    def has(self, s: Subspace) -> bool:
        return s in set(self.members)

    def require(self, s: Subspace, why: str) -> Subspace:
        if not self.has(s):
            raise ClosureMissing(f"{why}: {s!r} is not in the family")
        return s

    def verify_closure(self, op: str):
        if op == "perp":
            for m in self.proper_members():
                p = ex.orth_complement(m)
                if p.lin_dim > 0 and not self.has(p):
                    raise ClosureMissing(f"perp closure fails at {m!r}")
        elif op == "project":
            for u in self.members:
                for v in self.members:
                    if u != v and v.contains(u):
                        p = ex.project(u, v)
                        if p.lin_dim > 0 and not self.has(p):
                            raise ClosureMissing(
                                f"project closure fails at {u!r} in {v!r}"
                            )
        elif op == "perp_sum":
            for u in self.members:
                for v in self.members:
                    if ex.are_orthogonal(u, v) and u != v:
                        s = ex.direct_sum(u, v)
                        if not self.has(s):
                            raise ClosureMissing(
                                f"perp_sum closure fails at {u!r} + {v!r}"
                            )
        else:
            raise InputError(f"unknown closure op {op!r}")
        return True

    def closed_under(self, ops, rounds: int = 3) -> "SubspaceFamily":
        """Close the family under the requested operations by bounded
        iteration; raises ClosureMissing if the round limit is hit."""
        members = set(self.members)
        for _ in range(rounds + 1):
            new = set()
            if "perp" in ops:
                for m in members:
                    if m != self.full:
                        p = ex.orth_complement(m)
                        if p.lin_dim > 0:
                            new.add(p)
            if "project" in ops:
                for u in members:
                    for v in members:
                        if u != v and v.contains(u):
                            p = ex.project(u, v)
                            if p.lin_dim > 0:
                                new.add(p)
            if "perp_sum" in ops:
                for u in members:
                    for v in members:
                        if u != v and ex.are_orthogonal(u, v):
                            new.add(ex.direct_sum(u, v))
            if new <= members:
                return SubspaceFamily(self.geometry, members, tuple(ops))
            members |= new
        raise ClosureMissing(f"family does not close under {ops} in {rounds} rounds")

    def stabilizing(self, isometries) -> bool:
        mset = set(self.members)
        return all(g.apply(m) in mset for g in isometries for m in self.members)

    def to_json(self) -> dict:
        return {
            "geometry": self.geometry.to_json(),
            "subspaces": [
                [[str(x) for x in row] for row in m.basis]
                for m in self.members
                if m != self.full
            ],
            "closure": list(self.closure_ops),
        }

    @staticmethod
    def from_json(data: dict) -> "SubspaceFamily":
        try:
            geom = QuadSpace.from_json(data["geometry"])
            members = [ex.span(rows, geom) for rows in data["subspaces"]]
            return SubspaceFamily(geom, members, tuple(data.get("closure", ())))
        except (KeyError, TypeError) as e:
            raise InputError(f"bad family JSON: {e}") from e

    def __repr__(self):
        return f"SubspaceFamily(dim={self.geometry.geom_dim}, members={len(self.members)})"


def family_from_points(geometry: QuadSpace, vectors, closure=()) -> SubspaceFamily:
    pts = [ex.span([v], geometry) for v in vectors]
    fam = SubspaceFamily(geometry, pts)
    return fam.closed_under(closure) if closure else fam


def family_with_spans(geometry: QuadSpace, vectors) -> SubspaceFamily:
    """All spans of subsets of the given vectors (nondegenerate ones)."""
    members = []
    for k in range(1, len(vectors) + 1):
        for combo in itertools.combinations(vectors, k):
            try:
                members.append(ex.span(list(combo), geometry))
            except DegenerateSpan:
                continue
    return SubspaceFamily(geometry, members)


# ---------------------------------------------------------------------------
# T and F


Flag = tuple  # nested chain of Subspace, strictly increasing when nondegenerate


def build_T(fam: SubspaceFamily, m: int) -> SimpSet:
    """Nested chains of members of dimension <= m, plus a disjoint basepoint."""
    bp = ("T*",)
    elig = [s for s in fam.members if s.dim <= m]
    simplices = {0: [bp] + [(s,) for s in elig]}
    faces = {bp: ()}
    for s in elig:
        faces[(s,)] = ()
    prev = [(s,) for s in elig]
    d = 1
    while prev:
        cur = []
        for chain in prev:
            top = chain[-1]
            for s in elig:
                if s.lin_dim > top.lin_dim and s.contains(top):
                    cur.append(chain + (s,))
        for chain in cur:
            fs = []
            for j in range(d + 1):
                sub = chain[:j] + chain[j + 1 :]
                fs.append(nondeg(sub))
            faces[chain] = tuple(fs)
        if cur:
            simplices[d] = cur
        prev = cur
        d += 1
    return SimpSet(simplices, faces, bp)


def flags_ending_at(fam: SubspaceFamily, top: Subspace):
    """All strictly increasing chains of sub-members ending at ``top``."""
    subs = fam.sub_members(top)
    chains = [(top,)]
    frontier = [(top,)]
    while frontier:
        nxt = []
        for chain in frontier:
            low = chain[0]
            for s in subs:
                if s.lin_dim < low.lin_dim and low.contains(s):
                    nxt.append((s,) + chain)
        chains.extend(nxt)
        frontier = nxt
    return chains


# ---------------------------------------------------------------------------
# flat flag spaces F^(cuts)


def _decompositions(fam: SubspaceFamily, top: Subspace, cuts):
    """Ordered orthogonal decompositions (W, V_1, ..., V_m) of ``top`` whose
    pieces are members with dims (t_1, t_2-t_1-1, ..., dim - t_m - 1)."""
    if not cuts:
        return [(top,)]
    dims = [cuts[0]]
    for a, b in zip(cuts, cuts[1:]):
        dims.append(b - a - 1)
    dims.append(top.dim - cuts[-1] - 1)
    out = []

    def extend(pieces, used):
        k = len(pieces)
        if k == len(dims):
            out.append(tuple(pieces))
            return
        want = dims[k]
        if k == 0:
            cands = [
                s for s in fam.sub_members(top) if s.dim == want
            ]
        else:
            rest = ex.project(used, top)
            cands = [
                s
                for s in fam.members
                if s.dim == want and rest.contains(s)
                and s.restricted_signature()[0] == 0
            ]
        for s in cands:
            grown = ex.direct_sum(used, s) if used.lin_dim else s
            extend(pieces + [s], grown)

    zero = Subspace(fam.geometry, (), "angular")
    extend([], zero)
    return out


def build_flag_space(fam: SubspaceFamily, cuts=(), top: Subspace | None = None) -> SimpSet:
    """The flag space for a cut set: wedge over decompositions of the
    iterated reduced join of the factor buildings, stored flat.

    cuts=() gives the RT-building F itself.  Nondegenerate simplices are
    labels ('fs', decomposition, flags) with one strictly increasing flag
    per factor, each ending at its factor.
    """
    if top is None:
        top = fam.full
    cuts = tuple(sorted(cuts))
    if any(t < 0 or t >= top.dim for t in cuts):
        raise InputError(f"cuts {cuts} out of range for dim {top.dim}")
    bp = ("fs*",)
    simplices = {0: [bp]}
    faces = {bp: ()}
    for decomp in _decompositions(fam, top, cuts):
        factor_flags = [flags_ending_at(fam, piece) for piece in decomp]
        for flags in itertools.product(*factor_flags):
            deg = sum(len(f) for f in flags) - 1
            lab = ("fs", decomp, flags)
            simplices.setdefault(deg, []).append(lab)
            faces[lab] = _flag_space_faces(fam, decomp, flags, bp) if deg > 0 else ()
    return SimpSet(simplices, faces, bp)


def _flag_space_faces(fam, decomp, flags, bp):
    deg = sum(len(f) for f in flags) - 1
    fs = []
    for ell in range(deg + 1):
        fs.append(_flag_space_face(fam, decomp, flags, ell, bp))
    return tuple(fs)


def _flag_space_face(fam, decomp, flags, ell, bp):
    deg = sum(len(f) for f in flags) - 1
    offset = 0
    for k, flag in enumerate(flags):
        span_here = len(flag)  # this factor handles local indices 0..len-1
        if ell < offset + span_here:
            loc = ell - offset
            if len(flag) == 1:
                return (tuple(range(deg - 2, -1, -1)), bp)
            newflag = flag[:loc] + flag[loc + 1 :]
            if loc == len(flag) - 1:
                # deleted the factor top: collapses in the building
                return (tuple(range(deg - 2, -1, -1)), bp)
            newflags = flags[:k] + (newflag,) + flags[k + 1 :]
            return nondeg(("fs", decomp, newflags))
        offset += span_here
    raise AssertionError("face index out of range")


def building_action(fam: SubspaceFamily, group, space: SimpSet) -> GroupAction:
    """Action of a finite isometry group on a flat flag space."""
    if group.isometries is None:
        raise InputError("group carries no isometry embedding")
    maps = {}
    for g in group.elements:
        iso = group.isometries[g]
        asg = {space.base_label: nondeg(space.base_label)}
        for d, labs in space.simplices.items():
            for lab in labs:
                if lab == space.base_label:
                    continue
                _, decomp, flags = lab
                nd = tuple(iso.apply(s) for s in decomp)
                nf = tuple(tuple(iso.apply(s) for s in f) for f in flags)
                asg[lab] = nondeg(("fs", nd, nf))
        maps[g] = SimpMap(space, space, asg)
    return GroupAction(group, maps)


def build_F(fam: SubspaceFamily, top: Subspace | None = None) -> SimpSet:
    """The RT-building: flags of members ending at the top subspace."""
    return build_flag_space(fam, (), top)


def build_N_I(fam: SubspaceFamily, f_space: SimpSet, dim_set) -> set:
    """Labels of the subcomplex of flags avoiding every dimension in I."""
    avoid = set(dim_set)
    out = set()
    for d, labs in f_space.simplices.items():
        for lab in labs:
            if lab == f_space.base_label:
                continue
            _, _, flags = lab
            if all(s.dim not in avoid for flag in flags for s in flag):
                out.add(lab)
    return out


# ---------------------------------------------------------------------------
# Dehn maps


def split_at_pivot(fam: SubspaceFamily, flag, u: Subspace):
    """Split a strictly increasing flag at its u-entry; None if u absent.

    Returns (left, right) with left ending at u and right the projected
    tail, every projection required to be a family member.
    """
    pivot = None
    for idx, s in enumerate(flag):
        if s == u:
            pivot = idx
    if pivot is None:
        return None
    left = flag[: pivot + 1]
    right = tuple(
        fam.require(ex.project(u, s), "projection of a flag entry")
        for s in flag[pivot + 1 :]
    )
    return left, right


def cut_map(fam: SubspaceFamily, source: SimpSet, cuts, t: int, top: Subspace | None = None) -> tuple[SimpSet, SimpMap]:
    """The Dehn edge from flag space ``cuts`` to ``cuts + {t}``.

    Splits the factor containing global dimension t at the flag entry of
    that dimension (basepoint when absent).  Returns (target, map).
    """
    if top is None:
        top = fam.full
    cuts = tuple(sorted(cuts))
    if t in cuts:
        raise InputError(f"cut {t} already present")
    newcuts = tuple(sorted(cuts + (t,)))
    target = build_flag_space(fam, newcuts, top)
    asg = {source.base_label: nondeg(target.base_label)}
    bounds = list(cuts) + [top.dim]
    seg = next(i for i, b in enumerate(bounds) if t < b)
    # intrinsic dimension of the flag entry realizing the global cut t
    local_dim = t if seg == 0 else t - cuts[seg - 1] - 1
    for d, labs in source.simplices.items():
        for lab in labs:
            if lab == source.base_label:
                continue
            _, decomp, flags = lab
            flag = flags[seg]
            want = [s for s in flag if s.dim == local_dim]
            if not want:
                asg[lab] = target.basepoint(d)
                continue
            u = want[-1]
            left, right = split_at_pivot(fam, flag, u)
            rest = ex.project(u, decomp[seg])
            if rest.lin_dim > 0:
                fam.require(rest, "complement of a cut subspace")
            nd = decomp[:seg] + (u, rest) + decomp[seg + 1 :]
            nf = flags[:seg] + (left, right) + flags[seg + 1 :]
            asg[lab] = nondeg(("fs", nd, nf))
    return target, SimpMap(source, target, asg)


def dehn_U(fam: SubspaceFamily, f_space: SimpSet, u: Subspace, top: Subspace | None = None):
    """D_U: split flags at the maximal u-pivot, project the tail.

    Returns (target, map, (u, perp)) with target the binary reduced join of
    the buildings of u and of its complement in ``top``.
    """
    from .simpset import reduced_join, _join_canon

    if top is None:
        top = fam.full
    if u == top or u.lin_dim == 0:
        raise InputError("U must be a proper nonempty subspace")
    perp = fam.require(ex.project(u, top), "orthocomplement of the cut")
    f_u = build_flag_space(fam, (), u)
    f_perp = build_flag_space(fam, (), perp)
    target = reduced_join(f_u, f_perp)
    asg = {f_space.base_label: nondeg(target.base_label)}
    for d, labs in f_space.simplices.items():
        for lab in labs:
            if lab == f_space.base_label:
                continue
            _, _, (flag,) = lab
            split = split_at_pivot(fam, flag, u)
            if split is None:
                asg[lab] = target.basepoint(d)
                continue
            left, right = split
            la = ("fs", (u,), (left,))
            lb = ("fs", (perp,), (right,))
            asg[lab] = _join_canon(f_u, f_perp, nondeg(la), nondeg(lb), target.base_label, d)
    return target, SimpMap(f_space, target, asg), (u, perp)


def dehn_i(fam: SubspaceFamily, f_space: SimpSet, i: int, top: Subspace | None = None):
    """The dimension-i Dehn map (wedge over dim-i members of D_U)."""
    if top is None:
        top = fam.full
    if not (0 <= i < top.dim):
        raise InputError(f"dimension {i} not in [0, {top.dim})")
    return cut_map(fam, f_space, (), i, top)


def check_dehn_square(fam: SubspaceFamily, i: int, j: int, top: Subspace | None = None):
    """Exhaustively verify the derived Dehn square for i < j.

    Both composites land in the flag space with cuts {i, j}; returns True
    or raises with the first failing simplex.
    """
    if not i < j:
        raise InputError("need i < j")
    if top is None:
        top = fam.full
    f = build_flag_space(fam, (), top)
    t1, d_i = cut_map(fam, f, (), i, top)
    t2, d_j = cut_map(fam, f, (), j, top)
    _, d_then_j = cut_map(fam, t1, (i,), j, top)
    _, d_then_i = cut_map(fam, t2, (j,), i, top)
    route_a = d_then_j.compose(d_i)
    route_b = d_then_i.compose(d_j)
    for lab, img in route_a.assignment.items():
        if route_b.assignment[lab] != img:
            raise InputError(
                f"Dehn square ({i},{j}) fails at {lab!r}: "
                f"{img} vs {route_b.assignment[lab]}"
            )
    return True


def dehn_composite_iso(fam: SubspaceFamily, dim_set, top: Subspace | None = None):
    """The composite Dehn map for a dimension set vs the N-quotient.

    Builds D_I as a composite of single cuts, the quotient
    F -> F / union of N_(i), and the reassembly bijection between the
    targets; verifies they agree and the comparison is bijective.
    Returns (f_space, flat target, composite map, quotient map, witness).
    """
    from .simpset import quotient

    if top is None:
        top = fam.full
    dims = tuple(sorted(set(dim_set)))
    f = build_flag_space(fam, (), top)
    cur_space, cur_cuts = f, ()
    composite = identity_map(f)
    for t in dims:
        cur_space, step = cut_map(fam, cur_space, cur_cuts, t, top)
        cur_cuts = tuple(sorted(cur_cuts + (t,)))
        composite = step.compose(composite)
    union = set()
    for t in dims:
        union |= build_N_I(fam, f, {t})
    q, proj = quotient(f, union)
    # reassembly: a flat simplex maps to the flag of cumulative direct sums
    reassemble = {}
    for d, labs in cur_space.simplices.items():
        for lab in labs:
            if lab == cur_space.base_label:
                continue
            _, decomp, flags = lab
            chain = list(flags[0])
            acc = decomp[0]
            for k in range(1, len(decomp)):
                for s in flags[k]:
                    lifted = ex.direct_sum(acc, s)
                    fam.require(lifted, "reassembled flag entry")
                    chain.append(lifted)
                acc = ex.direct_sum(acc, decomp[k])
            reassemble[lab] = tuple(chain)
    # bijectivity onto the non-collapsed flags
    seen = {}
    for lab, flagchain in reassemble.items():
        if flagchain in seen:
            raise BijectionFailure(
                "reassembly not injective", witness=(lab, seen[flagchain])
            )
        seen[flagchain] = lab
    # surjectivity + compatibility: beta(D_I sigma) == proj(sigma)
    for d, labs in f.simplices.items():
        for lab in labs:
            if lab == f.base_label:
                continue
            img = composite.assignment[lab]
            pimg = proj.assignment[lab]
            if img[1] == cur_space.base_label:
                if pimg[1] != q.base_label:
                    raise BijectionFailure(
                        "composite collapses but quotient does not", witness=lab
                    )
                continue
            if pimg[1] == q.base_label:
                raise BijectionFailure(
                    "quotient collapses but composite does not", witness=lab
                )
            beta = reassemble[img[1]]
            _, _, (orig_flag,) = lab
            if beta != orig_flag:
                raise BijectionFailure(
                    f"reassembly mismatch at {lab!r}", witness=(beta, orig_flag)
                )
    # every non-collapsed target simplex is hit
    hit = {
        composite.assignment[lab][1]
        for d, labs in f.simplices.items()
        for lab in labs
        if lab != f.base_label
        and composite.assignment[lab][1] != cur_space.base_label
        and not composite.assignment[lab][0]
    }
    all_targets = {
        lab
        for d, labs in cur_space.simplices.items()
        for lab in labs
        if lab != cur_space.base_label
    }
    if hit != all_targets:
        raise BijectionFailure(
            "composite not surjective on simplices",
            witness=sorted(all_targets - hit, key=repr)[:1],
        )
    return f, cur_space, composite, (q, proj)


# ---------------------------------------------------------------------------
# tuple spaces


def tpl(points, m: int, geometry: QuadSpace, cap: int) -> SimpSet:
    """Tuples of points whose every subset spans nondegenerately in
    dimension <= m; enumerated up to simplex degree ``cap``."""
    pts = list(points)
    ok_subset = {}

    def subset_ok(key):
        if key not in ok_subset:
            vecs = [pts[i].basis[0] for i in key]
            try:
                s = ex.span(vecs, geometry)
                ok_subset[key] = s.dim <= m
            except DegenerateSpan:
                ok_subset[key] = False
        return ok_subset[key]

    def tuple_ok(tup):
        distinct = tuple(sorted(set(tup)))
        for k in range(1, len(distinct) + 1):
            for combo in itertools.combinations(distinct, k):
                if not subset_ok(combo):
                    return False
        return True

    bp = ("tpl*",)
    simplices = {0: [bp]}
    faces = {bp: ()}
    frontier = []
    for i in range(len(pts)):
        if subset_ok((i,)):
            lab = (i,)
            simplices[0].append(lab)
            faces[lab] = ()
            frontier.append(lab)
    d = 1
    while frontier and d <= cap:
        cur = []
        for tup in frontier:
            for i in range(len(pts)):
                if i == tup[-1]:
                    continue  # adjacent repeat is degenerate
                cand = tup + (i,)
                if tuple_ok(cand):
                    cur.append(cand)
        for tup in cur:
            fs = []
            for j in range(d + 1):
                sub = tup[:j] + tup[j + 1 :]
                # deleting may merge equal neighbours at the seam
                if 0 < j < d and sub[j - 1] == sub[j]:
                    base = sub[: j - 1] + sub[j:]
                    fs.append(((j - 1,), base))
                else:
                    fs.append(nondeg(sub))
            faces[tup] = tuple(fs)
        if cur:
            simplices[d] = cur
        frontier = cur
        d += 1
    return SimpSet(simplices, faces, bp, truncation=cap)


def tpl_point_labels(x: SimpSet) -> set:
    return {
        lab for d, labs in x.simplices.items() for lab in labs if lab != x.base_label
    }


def span_map_h(sd_tpl: SimpSet, points, tset: SimpSet, geometry: QuadSpace, fam: SubspaceFamily) -> SimpMap:
    """The span map from a subdivided tuple space to the chain space T.

    A subdivision simplex is a chain of position subsets of a base tuple;
    each subset maps to the span of the selected points.
    """
    pts = list(points)
    asg = {sd_tpl.base_label: nondeg(tset.base_label)}
    for d, labs in sd_tpl.simplices.items():
        for lab in labs:
            if lab == sd_tpl.base_label:
                continue
            _, base_tuple, chain = lab
            spans = []
            for subset in chain:
                vecs = [pts[base_tuple[v]].basis[0] for v in subset]
                s = ex.span(vecs, geometry)
                fam.require(s, "span of a tuple subset")
                spans.append(s)
            word, flag = _normalize_weak_flag(spans)
            asg[lab] = (word, flag)
    m = SimpMap(sd_tpl, tset, asg)
    return m


def _normalize_weak_flag(spans):
    word = []
    out = [spans[0]]
    for i in range(1, len(spans)):
        if spans[i] == spans[i - 1]:
            word.append(i - 1)
        else:
            out.append(spans[i])
    word.sort(reverse=True)
    return tuple(word), tuple(out)


# ---------------------------------------------------------------------------
# flag classes of simplices


def simplex_class(points, fam: SubspaceFamily):
    """The alternating flag sum of a nondegenerate point tuple, paired with
    the twisted-circle generator.

    Returns (chain dict, smash SimpSet, F SimpSet).  The chain lives in the
    normalized chains of S^sigma ^ F in degree d+1 and is a cycle.
    """
    from .simpset import circle_Ssigma, smash, shuffle_smash_chain, ssigma_generator_chain

    pts = list(points)
    d = fam.geometry.geom_dim
    if len(pts) != d + 1:
        raise DegenerateSimplex(f"need {d + 1} points, got {len(pts)}")
    flag_chain = {}
    for perm in itertools.permutations(range(d + 1)):
        sgn = _perm_sign(perm)
        spans = []
        vecs = []
        for idx in perm:
            vecs.append(pts[idx].basis[0])
            try:
                s = ex.span(list(vecs), fam.geometry)
            except DegenerateSpan as e:
                raise DegenerateSimplex(f"partial span degenerate: {e}") from e
            if s.dim != len(vecs) - 1:
                raise DegenerateSimplex("partial span has too small dimension")
            fam.require(s, "partial span")
            spans.append(s)
        if spans[-1] != fam.full:
            raise DegenerateSimplex("points do not span the full space")
        lab = ("fs", (fam.full,), (tuple(spans),))
        flag_chain[lab] = flag_chain.get(lab, 0) + sgn
    f_space = build_flag_space(fam, ())
    ssig, _ = circle_Ssigma()
    sm = smash(ssig, f_space)
    chain = shuffle_smash_chain(
        ssig, f_space, sm, ssigma_generator_chain(), flag_chain, 1, d
    )
    return chain, sm, f_space


def _perm_sign(perm) -> int:
    sgn = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sgn = -sgn
    return sgn
