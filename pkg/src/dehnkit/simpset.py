"""Finite pointed simplicial sets with explicit face/degeneracy combinatorics.

A ``SimpSet`` stores only its nondegenerate simplices; an arbitrary simplex
is a pair ``(word, base)`` where ``base`` is nondegenerate and ``word`` is a
strictly decreasing tuple of degeneracy indices (Eilenberg-Zilber normal
form, s_{i_k} ... s_{i_1} with i_k > ... > i_1).  Face tables are given only
on nondegenerate simplices; faces and degeneracies of arbitrary simplices
are computed by pushing operators through the word with the simplicial
identities.

Every set is pointed: ``base_label`` names the 0-simplex whose degeneracies
are the basepoints in higher degrees.
"""

from __future__ import annotations

import itertools

from .errors import ConditionsFail, InputError, NotSubcomplex

Word = tuple[int, ...]
Simplex = tuple[Word, object]  # (degeneracy word, nondegenerate label)


def nondeg(label) -> Simplex:
    return ((), label)


def simplex_degree(s: Simplex, base_degree: int) -> int:
    return base_degree + len(s[0])


class SimpSet:
    """A finite pointed simplicial set.

    Attributes:
        simplices: dict degree -> list of nondegenerate simplex labels
            (the basepoint label appears in degree 0 only).
        faces: dict label -> tuple of Simplex values (d_0, ..., d_n).
        base_label: the basepoint 0-simplex label.
        truncation: None, or N meaning only degrees <= N are stored and
            homology is meaningful strictly below N.
    """

    def __init__(self, simplices, faces, base_label, truncation=None):
        self.simplices = {d: list(ls) for d, ls in simplices.items() if ls}
        self.faces = dict(faces)
        self.base_label = base_label
        self.truncation = truncation
        self._degree_of = {}
        for d, ls in self.simplices.items():
            for lab in ls:
                self._degree_of[lab] = d
        if base_label not in self._degree_of or self._degree_of[base_label] != 0:
            raise InputError("basepoint must be a 0-simplex")

    # -- basic structure ----------------------------------------------------

    def degree_of(self, label) -> int:
        return self._degree_of[label]

    def dim(self) -> int:
        return max(self.simplices) if self.simplices else 0

    def labels(self, degree: int) -> list:
        return self.simplices.get(degree, [])

    def nondegenerate_count(self) -> int:
        return sum(len(v) for v in self.simplices.values())

    def basepoint(self, degree: int) -> Simplex:
        return (tuple(range(degree - 1, -1, -1)), self.base_label)

    def is_basepoint(self, s: Simplex) -> bool:
        return s[1] == self.base_label

    def simplex_deg(self, s: Simplex) -> int:
        return self.degree_of(s[1]) + len(s[0])

    def face_of_label(self, label, i: int) -> Simplex:
        return self.faces[label][i]

    # -- operators on arbitrary simplices ------------------------------------

    def s(self, i: int, sx: Simplex) -> Simplex:
        """Degeneracy s_i applied to a simplex (0 <= i <= degree)."""
        word, base = sx
        # push s_i from the left through the normal-form word
        new = []
        m = i
        for j in word:
            if m <= j:
                new.append(j + 1)
            else:
                new.append(j)
                # remaining word entries are < m; insert here
                idx = len(new) - 1
                rest = word[idx + 1 :]
                return (tuple(new[:idx] + [m, new[idx]] + list(rest)), base)
        new.append(m)
        return (tuple(new), base)

    def d(self, i: int, sx: Simplex) -> Simplex:
        """Face d_i applied to a simplex of degree >= 1."""
        word, base = sx
        out: list[int] = []
        m = i
        k = 0
        for k, j in enumerate(word):
            if m < j:
                out.append(j - 1)
            elif m == j or m == j + 1:
                return (tuple(out + list(word[k + 1 :])), base)
            else:
                out.append(j)
                m -= 1
        result = self.faces[base][m]
        for a in reversed(out):
            # out was collected outermost-first; reapply innermost-first
            result = self.s(a, result)
        return result

    def apply_word(self, word: Word, sx: Simplex) -> Simplex:
        for a in reversed(word):
            sx = self.s(a, sx)
        return sx

    def all_simplices(self, degree: int):
        """All simplices (degenerate included) in a given degree."""
        out = []
        for d in range(degree + 1):
            for lab in self.labels(d):
                for word in degeneracy_words(degree - d, degree):
                    out.append((word, lab))
        return out

    # -- checks ---------------------------------------------------------------

    def validate(self):
        """Exhaustive simplicial-identity and basepoint check."""
        for lab, fs in self.faces.items():
            n = self.degree_of(lab)
            if len(fs) != n + 1 and n > 0:
                raise InputError(f"simplex {lab!r} of degree {n} has {len(fs)} faces")
        if self.faces.get(self.base_label, ()) != ():
            raise InputError("basepoint must have no stored faces")
        # faces of the basepoint's degeneracies are automatic; check stored bases
        for d, labs in sorted(self.simplices.items()):
            if d == 0:
                continue
            for lab in labs:
                for i in range(d + 1):
                    fi = self.faces[lab][i]
                    if self.simplex_deg(fi) != d - 1:
                        raise InputError(f"face d_{i}{lab!r} has wrong degree")
                if d < 2:
                    continue
                for j in range(d + 1):
                    for i in range(j):
                        lhs = self.d(i, self.faces[lab][j])
                        rhs = self.d(j - 1, self.faces[lab][i])
                        if lhs != rhs:
                            raise InputError(
                                f"d_{i} d_{j} != d_{j-1} d_{i} on {lab!r}: {lhs} vs {rhs}"
                            )
        return True

    def to_json(self) -> dict:
        idx = {}
        for d in sorted(self.simplices):
            for k, lab in enumerate(self.simplices[d]):
                idx[lab] = [d, k]
        data = {
            "degrees": {
                str(d): [repr(lab) for lab in labs]
                for d, labs in sorted(self.simplices.items())
            },
            "basepoint": list(idx[self.base_label]),
            "faces": {},
            "truncation": self.truncation,
        }
        for d in sorted(self.simplices):
            if d == 0:
                continue
            for k, lab in enumerate(self.simplices[d]):
                data["faces"][f"{d}:{k}"] = [
                    [list(w), idx[b][0], idx[b][1]] for (w, b) in self.faces[lab]
                ]
        return data

    @staticmethod
    def from_json(data: dict) -> "SimpSet":
        try:
            degrees = {int(d): list(range(len(ls))) for d, ls in data["degrees"].items()}
            simplices = {d: [(d, k) for k in rng] for d, rng in degrees.items()}
            bp = tuple(data["basepoint"])
            faces = {}
            for d, labs in simplices.items():
                for lab in labs:
                    if d == 0:
                        faces[lab] = ()
            for key, fs in data["faces"].items():
                d, k = (int(x) for x in key.split(":"))
                faces[(d, k)] = tuple((tuple(w), (bd, bk)) for (w, bd, bk) in fs)
            return SimpSet(simplices, faces, bp, data.get("truncation"))
        except (KeyError, ValueError, TypeError) as e:
            raise InputError(f"bad simplicial set JSON: {e}") from e

    def __repr__(self):
        counts = {d: len(v) for d, v in sorted(self.simplices.items())}
        return f"SimpSet({counts})"


def degeneracy_words(length: int, degree: int):
    """All strictly decreasing words of given length with entries < degree."""
    if length == 0:
        yield ()
        return
    for combo in itertools.combinations(range(degree), length):
        yield tuple(reversed(combo))


# ---------------------------------------------------------------------------
# maps


class SimpMap:
    """A pointed simplicial map, stored on nondegenerate simplices."""

    def __init__(self, source: SimpSet, target: SimpSet, assignment: dict):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)

    def __call__(self, sx: Simplex) -> Simplex:
        word, base = sx
        img = self.assignment[base]
        return self.target.apply_word(word, img)

    def validate(self):
        src, tgt = self.source, self.target
        if not tgt.is_basepoint(self.assignment[src.base_label]):
            raise InputError("map does not preserve the basepoint")
        for d, labs in sorted(src.simplices.items()):
            for lab in labs:
                img = self.assignment[lab]
                if tgt.simplex_deg(img) != d:
                    raise InputError(f"image of {lab!r} has wrong degree")
                for i in range(d + 1) if d > 0 else ():
                    lhs = self(src.faces[lab][i])
                    rhs = tgt.d(i, img)
                    if lhs != rhs:
                        raise InputError(
                            f"map fails d_{i} on {lab!r}: {lhs} != {rhs}"
                        )
        return True

    def compose(self, other: "SimpMap") -> "SimpMap":
        """self after other."""
        assignment = {
            lab: self(img) for lab, img in other.assignment.items()
        }
        return SimpMap(other.source, self.target, assignment)

    def __eq__(self, other):
        return (
            isinstance(other, SimpMap)
            and self.source is other.source
            and self.target is other.target
            and self.assignment == other.assignment
        )


def identity_map(x: SimpSet) -> SimpMap:
    return SimpMap(x, x, {lab: ((), lab) for d in x.simplices for lab in x.labels(d)})


class GroupAction:
    """An action of a finite group through simplicial automorphisms."""

    def __init__(self, group, maps: dict):
        # group: grouphom.FiniteGroup (duck-typed); maps: element -> SimpMap
        self.group = group
        self.maps = dict(maps)
        self.space = next(iter(maps.values())).source if maps else None

    def act(self, g, sx: Simplex) -> Simplex:
        return self.maps[g](sx)

    def validate(self):
        ident = self.group.identity
        for lab in self.maps[ident].assignment:
            if self.maps[ident].assignment[lab] != ((), lab):
                raise InputError("identity does not act as identity")
        for g in self.group.elements:
            self.maps[g].validate()
        for g in self.group.elements:
            for h in self.group.elements:
                gh = self.group.mul(g, h)
                lhs = self.maps[g].compose(self.maps[h])
                if lhs.assignment != self.maps[gh].assignment:
                    raise InputError(f"action fails homomorphism at ({g!r},{h!r})")
        return True


def trivial_action(group, x: SimpSet) -> GroupAction:
    return GroupAction(group, {g: identity_map(x) for g in group.elements})


# ---------------------------------------------------------------------------
# circles


def circle_S1() -> SimpSet:
    """The circle Delta^1/boundary: one vertex, one 1-simplex."""
    bp = "*"
    e = "e"
    simplices = {0: [bp], 1: [e]}
    faces = {bp: (), e: (nondeg(bp), nondeg(bp))}
    return SimpSet(simplices, faces, bp)


def circle_Ssigma():
    """The twisted circle: two vertices, two 1-simplices swapped by Z/2.

    Returns (SimpSet, swap SimpMap).  Simplex labels: '*' (basepoint), 'o'
    (the other vertex), '+1' and '-1' (the 1-simplices, d_0 = 'o',
    d_1 = '*').
    """
    bp, oth = "*", "o"
    simplices = {0: [bp, oth], 1: ["+1", "-1"]}
    faces = {
        bp: (),
        oth: (),
        "+1": (nondeg(oth), nondeg(bp)),
        "-1": (nondeg(oth), nondeg(bp)),
    }
    x = SimpSet(simplices, faces, bp)
    swap = SimpMap(
        x, x, {bp: nondeg(bp), oth: nondeg(oth), "+1": nondeg("-1"), "-1": nondeg("+1")}
    )
    return x, swap


def ssigma_generator_chain():
    """The fundamental 1-cycle of S^sigma as {label: coefficient}."""
    return {"+1": 1, "-1": -1}


# ---------------------------------------------------------------------------
# smash products


def _min_trunc(*xs):
    ts = [x.truncation for x in xs if x.truncation is not None]
    return min(ts) if ts else None


def smash(x: SimpSet, y: SimpSet) -> SimpSet:
    """Degreewise smash product X_n ^ Y_n.

    Nondegenerate n-simplices are pairs of simplices (a, b) of degree n with
    disjoint degeneracy words, neither a basepoint.  Labels are ('sm', a, b).
    """
    trunc = _min_trunc(x, y)
    top = x.dim() + y.dim()
    if trunc is not None:
        top = min(top, trunc)
    bp = ("sm", "*")
    simplices = {0: [bp]}
    faces = {bp: ()}

    def collapse(a, b):
        if x.is_basepoint(a) or y.is_basepoint(b):
            return None
        return (a, b)

    for n in range(0, top + 1):
        labs = []
        for a in x.all_simplices(n):
            if x.is_basepoint(a):
                continue
            for b in y.all_simplices(n):
                if y.is_basepoint(b):
                    continue
                if set(a[0]) & set(b[0]):
                    continue
                labs.append(("sm", a, b))
        if labs:
            simplices.setdefault(n, []).extend(labs)
    for n, labs in list(simplices.items()):
        if n == 0:
            continue
        for lab in labs:
            if lab == bp:
                continue
            _, a, b = lab
            fs = []
            for i in range(n + 1):
                fa, fb = x.d(i, a), y.d(i, b)
                pair = collapse(fa, fb)
                fs.append(_smash_canon(x, y, pair, n - 1, bp))
            faces[lab] = tuple(fs)
    return SimpSet(simplices, faces, bp, trunc)


def _smash_canon(x, y, pair, degree, bp):
    """Canonical (word, label) form of a smash simplex given coordinates."""
    if pair is None:
        return (tuple(range(degree - 1, -1, -1)), bp)
    a, b = pair
    shared = tuple(sorted(set(a[0]) & set(b[0]), reverse=True))
    # strip the common degeneracies: they are degeneracies of the pair
    a0 = _strip(a, shared)
    b0 = _strip(b, shared)
    return (shared, ("sm", a0, b0))


def _strip(sx: Simplex, shared: Word) -> Simplex:
    """Remove the (outer) shared degeneracy indices from a word."""
    word = list(sx[0])
    for idx in shared:
        # shared indices are valid outer degeneracies of both coordinates;
        # remove idx from the word, shifting larger entries down
        out = []
        for j in word:
            if j == idx:
                continue
            out.append(j - 1 if j > idx else j)
        word = out
    return (tuple(word), sx[1])


def smash_coords(lab) -> tuple:
    """Coordinates (a, b) of a nondegenerate smash label."""
    return lab[1], lab[2]


def smash_map(f: SimpMap, g: SimpMap, source: SimpSet, target: SimpSet) -> SimpMap:
    """The map f ^ g : smash(X,Y) -> smash(X',Y')."""
    assignment = {source.base_label: nondeg(target.base_label)}
    for d, labs in source.simplices.items():
        for lab in labs:
            if lab == source.base_label:
                continue
            _, a, b = lab
            fa = f(a)
            gb = g(b)
            if f.target.is_basepoint(fa) or g.target.is_basepoint(gb):
                assignment[lab] = target.basepoint(d)
            else:
                assignment[lab] = _smash_canon(f.target, g.target, (fa, gb), d, target.base_label)
    return SimpMap(source, target, assignment)


# ---------------------------------------------------------------------------
# wedges and quotients


def wedge(pieces: list[SimpSet], keys=None) -> SimpSet:
    """Wedge of pointed sets; labels become (key, label)."""
    if keys is None:
        keys = list(range(len(pieces)))
    trunc = _min_trunc(*pieces) if pieces else None
    bp = ("wbp",)
    simplices = {0: [bp]}
    faces = {bp: ()}
    for key, x in zip(keys, pieces):
        for d, labs in x.simplices.items():
            for lab in labs:
                if lab == x.base_label:
                    continue
                simplices.setdefault(d, []).append((key, lab))
                if d > 0:
                    fs = []
                    for w, b in x.faces[lab]:
                        if b == x.base_label:
                            fs.append((tuple(range(d - 2, -1, -1)), bp))
                        else:
                            fs.append((w, (key, b)))
                    faces[(key, lab)] = tuple(fs)
                else:
                    faces[(key, lab)] = ()
    return SimpSet(simplices, faces, bp, trunc)


def wedge_inclusion(pieces, keys, index, total: SimpSet) -> SimpMap:
    x = pieces[index]
    key = keys[index]
    assignment = {x.base_label: nondeg(total.base_label)}
    for d, labs in x.simplices.items():
        for lab in labs:
            if lab != x.base_label:
                assignment[lab] = nondeg((key, lab))
    return SimpMap(x, total, assignment)


def subcomplex_closure(x: SimpSet, labels) -> set:
    """Close a label set under faces (degeneracies need no closure)."""
    out = set(labels)
    out.add(x.base_label)
    stack = list(labels)
    while stack:
        lab = stack.pop()
        d = x.degree_of(lab)
        if d == 0:
            continue
        for _, b in x.faces[lab]:
            if b not in out:
                out.add(b)
                stack.append(b)
    return out


def is_subcomplex(x: SimpSet, labels: set) -> bool:
    for lab in labels:
        d = x.degree_of(lab)
        if d == 0:
            continue
        for _, b in x.faces[lab]:
            if b != x.base_label and b not in labels:
                return False
    return True


def quotient(x: SimpSet, sub_labels) -> tuple[SimpSet, SimpMap]:
    """Collapse a face-closed set of nondegenerate simplices to the basepoint.

    Returns (X/A, projection).  Raises NotSubcomplex when the set is not
    face-closed.
    """
    a = set(sub_labels) | {x.base_label}
    if not is_subcomplex(x, a):
        raise NotSubcomplex("label set is not closed under faces")
    bp = ("q", "*")
    simplices = {0: [bp]}
    faces = {bp: ()}
    for d, labs in x.simplices.items():
        for lab in labs:
            if lab in a:
                continue
            simplices.setdefault(d, []).append(("q", lab))
            if d == 0:
                faces[("q", lab)] = ()
            else:
                fs = []
                for w, b in x.faces[lab]:
                    if b in a:
                        fs.append((tuple(range(d - 2, -1, -1)), bp))
                    else:
                        fs.append((w, ("q", b)))
                faces[("q", lab)] = tuple(fs)
    q = SimpSet(simplices, faces, bp, x.truncation)
    assignment = {}
    for d, labs in x.simplices.items():
        for lab in labs:
            if lab in a:
                assignment[lab] = q.basepoint(d)
            else:
                assignment[lab] = nondeg(("q", lab))
    return q, SimpMap(x, q, assignment)


# ---------------------------------------------------------------------------
# reduced join


def reduced_join(x: SimpSet, y: SimpSet) -> SimpSet:
    """(X rj Y)_m = wedge over i+j=m-1 of X_i ^ Y_j, faces split at slot i.

    Nondegenerate m-simplices are pairs (a, b) of nondegenerate non-basepoint
    simplices with deg a + deg b = m - 1; labels are ('rj', a_label, b_label)
    carrying nondegenerate labels only, plus the join basepoint.
    """
    trunc = _min_trunc(x, y)
    bp = ("rj", "*")
    simplices = {0: [bp]}
    faces = {bp: ()}
    for da, la in sorted(x.simplices.items()):
        for db, lb in sorted(y.simplices.items()):
            m = da + db + 1
            if trunc is not None and m > trunc:
                continue
            for a in la:
                if a == x.base_label:
                    continue
                for b in lb:
                    if b == y.base_label:
                        continue
                    simplices.setdefault(m, []).append(("rj", a, b))
    for m in sorted(simplices):
        for lab in simplices[m]:
            if lab == bp:
                continue
            _, a, b = lab
            i = x.degree_of(a)
            j = y.degree_of(b)
            fs = []
            for ell in range(m + 1):
                if ell <= i:
                    if i == 0:
                        fs.append((tuple(range(m - 2, -1, -1)), bp))
                    else:
                        fs.append(_join_canon(x, y, x.d(ell, nondeg(a)), nondeg(b), bp, m - 1))
                else:
                    if j == 0:
                        fs.append((tuple(range(m - 2, -1, -1)), bp))
                    else:
                        fs.append(_join_canon(x, y, nondeg(a), y.d(ell - i - 1, nondeg(b)), bp, m - 1))
            faces[lab] = tuple(fs)
    return SimpSet(simplices, faces, bp, trunc)


def _join_canon(x: SimpSet, y: SimpSet, a: Simplex, b: Simplex, bp, degree: int) -> Simplex:
    """Canonical form of the join simplex with coordinates (a, b)."""
    if x.is_basepoint(a) or y.is_basepoint(b):
        return (tuple(range(degree - 1, -1, -1)), bp)
    wa, a0 = a
    wb, b0 = b
    base = ((), ("rj", a0, b0))
    fake = _JoinOps(x, y)
    # apply the y-word (shifted) innermost, then the x-word
    da0 = x.degree_of(a0)
    for idx in reversed(wb):
        base = fake.s(idx + da0 + 1, base)
    for idx in reversed(wa):
        base = fake.s(idx, base)
    return base


class _JoinOps:
    """Degeneracy pushing for join simplices without building the SimpSet.

    Join degeneracies: s_l acts on the x-part when l <= deg_x, else on the
    y-part shifted by deg_x + 1.  Words in canonical (word, ('rj', a, b))
    form obey the same normal-form rules, so reuse SimpSet.s by duck-typing
    degree_of.
    """

    def __init__(self, x, y):
        self.x = x
        self.y = y

    def degree_of(self, lab):
        _, a, b = lab
        return self.x.degree_of(a) + self.y.degree_of(b) + 1

    s = SimpSet.s


def join_coords(jset_label, x: SimpSet, y: SimpSet, sx: Simplex):
    """Coordinates (a, b) of an arbitrary join simplex (word, ('rj',a0,b0)).

    Returns (a, b) with a in X, b in Y, deg a + deg b = deg sx - 1.
    """
    word, lab = sx
    _, a0, b0 = lab
    a = nondeg(a0)
    b = nondeg(b0)
    # replay the word outermost-last; at each step the x-part degree decides
    for idx in reversed(word):
        da = a[0].__len__() + x.degree_of(a0)
        if idx <= da:
            a = x.s(idx, a)
        else:
            b = y.s(idx - da - 1, b)
    return a, b


def join_map(f: SimpMap, g: SimpMap, source: SimpSet, target: SimpSet) -> SimpMap:
    """The map f rj g on reduced joins."""
    assignment = {source.base_label: nondeg(target.base_label)}
    for d, labs in source.simplices.items():
        for lab in labs:
            if lab == source.base_label:
                continue
            _, a, b = lab
            fa = f(nondeg(a))
            gb = g(nondeg(b))
            assignment[lab] = _join_canon(f.target, g.target, fa, gb, target.base_label, d)
    return SimpMap(source, target, assignment)


# ---------------------------------------------------------------------------
# barycentric subdivision


def sd(x: SimpSet) -> SimpSet:
    """Barycentric subdivision via the coend over chains of vertex subsets.

    Nondegenerate k-simplices are pairs (base label, chain) where the chain
    S_0 < S_1 < ... < S_k is strictly increasing with S_k = all vertices of
    the base simplex.  The basepoint is the chain ({0},) over the base
    0-simplex of X.
    """
    bp_chain = ("sd", x.base_label, ((0,),))

    def canon(lab, chain):
        # reduce (lab, weak chain of subsets of [deg lab]) to normal form
        while True:
            deg = x.degree_of(lab)
            top = chain[-1]
            if len(top) < deg + 1:
                # factor through the face spanned by top
                remap = {v: i for i, v in enumerate(top)}
                # iterated face: delete vertices not in top, largest first
                sx = nondeg(lab)
                for v in range(deg, -1, -1):
                    if v not in top:
                        sx = x.d(v, sx)
                w, base = sx
                chain = tuple(tuple(sorted(remap[v] for v in s)) for s in chain)
                # push the chain through the degeneracy word of the face
                for idx in w:  # w is decreasing; apply outermost first
                    chain = tuple(
                        tuple(sorted({v if v <= idx else v - 1 for v in s}))
                        for s in chain
                    )
                lab = base
                continue
            return lab, chain

    def split_word(lab, chain):
        # extract degeneracies from repeated subsets
        word = []
        out = [chain[0]]
        for i in range(1, len(chain)):
            if chain[i] == chain[i - 1]:
                word.append(i - 1)
            else:
                out.append(chain[i])
        word.sort(reverse=True)
        return tuple(word), (lab, tuple(out))

    def canon_simplex(lab, chain, degree):
        lab2, chain2 = canon(lab, chain)
        word, (lab3, chain3) = split_word(lab2, chain2)
        if lab3 == x.base_label:
            return (tuple(range(degree - 1, -1, -1)), bp_chain)
        return (word, ("sd", lab3, chain3))

    simplices = {}
    faces = {}
    for d, labs in sorted(x.simplices.items()):
        for lab in labs:
            verts = tuple(range(d + 1))
            subsets = [
                tuple(s)
                for k in range(1, d + 2)
                for s in itertools.combinations(verts, k)
            ]
            # strictly increasing chains ending at the full set
            full = verts
            chains = [[full]]
            all_chains = []
            frontier = [(full,)]
            while frontier:
                ch = frontier.pop()
                all_chains.append(tuple(reversed(ch)))
                for s in subsets:
                    if len(s) < len(ch[-1]) and set(s) < set(ch[-1]):
                        frontier.append(ch + (s,))
            del chains
            for ch in all_chains:
                k = len(ch) - 1
                label = ("sd", lab, ch)
                if label == bp_chain:
                    pass
                simplices.setdefault(k, []).append(label)
    bp_ok = bp_chain in simplices.get(0, [])
    if not bp_ok:
        simplices.setdefault(0, []).insert(0, bp_chain)
    for k, labs in sorted(simplices.items()):
        for label in labs:
            _, lab, ch = label
            if k == 0:
                faces[label] = ()
                continue
            fs = []
            for i in range(k + 1):
                sub = ch[:i] + ch[i + 1 :]
                fs.append(canon_simplex(lab, sub, k - 1))
            faces[label] = tuple(fs)
    return SimpSet(simplices, faces, bp_chain, x.truncation)


def sd_subcomplex_labels(sdx: SimpSet, labels: set) -> set:
    """Labels of sd(X) lying over a face-closed label set of X."""
    return {
        lab
        for d, labs in sdx.simplices.items()
        for lab in labs
        if lab[1] in labels
    }


# ---------------------------------------------------------------------------
# smash-to-join comparison


def triple_coords(s1: SimpSet, x: SimpSet, y: SimpSet, sm_inner: SimpSet, sx: Simplex):
    """Coordinates (c, a, b) in S^1, X, Y of a simplex of smash(S1, smash(X,Y))."""
    word, lab = sx
    _, c, isx = lab
    wi, ilab = isx
    _, a, b = ilab
    a = x.apply_word(wi, a)
    b = y.apply_word(wi, b)
    c = s1.apply_word(word, c)
    a = x.apply_word(word, a)
    b = y.apply_word(word, b)
    return c, a, b


def s1_label_value(s1: SimpSet, c: Simplex) -> int | None:
    """The table label i in {1..n} of a simplex of S^1 (None for basepoint)."""
    if s1.is_basepoint(c):
        return None
    word, base = c
    # base is the 1-simplex; label = 1 + (number of word entries < position)
    # reconstruct by replaying: the nondegenerate 1-simplex has label 1 in
    # degree 1; s_j raises the label by one iff j < label.
    label = 1
    for j in reversed(word):
        if j < label:
            label += 1
    return label


def smash_to_join(x: SimpSet, y: SimpSet) -> tuple[SimpMap, SimpSet, SimpSet]:
    """The weak equivalence S^1 ^ X ^ Y -> X rj Y.

    Sends an n-simplex (i, a, b) to (d_i^{n-i+1} a, d_0^i b) in
    X_{i-1} ^ Y_{n-i}.  Returns (map, source, target); source is
    smash(circle_S1(), smash(x, y)).
    """
    s1 = circle_S1()
    inner = smash(x, y)
    source = smash(s1, inner)
    target = reduced_join(x, y)
    assignment = {source.base_label: nondeg(target.base_label)}
    for n, labs in source.simplices.items():
        for lab in labs:
            if lab == source.base_label:
                continue
            c, a, b = triple_coords(s1, x, y, inner, nondeg(lab))
            i = s1_label_value(s1, c)
            ax = a
            for _ in range(n - i + 1):
                ax = x.d(i, ax)
            by = b
            for _ in range(i):
                by = y.d(0, by)
            assignment[lab] = _join_canon(x, y, ax, by, target.base_label, n)
    return SimpMap(source, target, assignment), source, target


# ---------------------------------------------------------------------------
# gamma


def gamma():
    """The two-fold cover S^sigma ^ S^sigma -> S^sigma ^ S^1.

    (a, b) -> ((sgn b) a, |b|), where sgn acts through the Z/2 swap and
    pairs whose second coordinate degenerates the non-basepoint vertex map
    to the basepoint.  Returns (map, source, target, swap actions) where the
    swaps are the two S^sigma involutions on the source.
    """
    ssig, swap = circle_Ssigma()
    s1 = circle_S1()
    source = smash(ssig, ssig)
    target = smash(ssig, s1)
    ident = identity_map(ssig)

    def sigma_sign(sx: Simplex):
        word, base = sx
        if base in ("+1",):
            return 1
        if base in ("-1",):
            return -1
        return 0

    def sigma_abs(sx: Simplex) -> Simplex:
        # |b|: the S^1 simplex with the same degeneracy word
        word, base = sx
        return (word, "e")

    assignment = {source.base_label: nondeg(target.base_label)}
    for n, labs in source.simplices.items():
        for lab in labs:
            if lab == source.base_label:
                continue
            _, a, b = lab
            sgn = sigma_sign(b)
            if sgn == 0:
                # second coordinate is (a degeneracy of) the inner vertex
                assignment[lab] = target.basepoint(n)
                continue
            aa = a if sgn == 1 else swap(a)
            bb = sigma_abs(b)
            assignment[lab] = _smash_canon(ssig, s1, (aa, bb), n, target.base_label)
    gm = SimpMap(source, target, assignment)
    left_swap = smash_map(swap, ident, source, source)
    right_swap = smash_map(ident, swap, source, source)
    return gm, source, target, (left_swap, right_swap)


# ---------------------------------------------------------------------------
# homotopy orbits


def homotopy_orbits(x: SimpSet, action: GroupAction, n_trunc: int) -> SimpSet:
    """Diagonal of the action bisimplicial set, truncated at degree n_trunc.

    k-simplices are pairs (g_1..g_k, sx) with sx a simplex of X_k, modulo
    collapsing sx = basepoint.  Homology is correct strictly below n_trunc.
    """
    if n_trunc < 0:
        raise InputError("truncation bound must be nonnegative")
    grp = action.group
    bp = ("ho", "*")
    simplices = {0: [bp]}
    faces = {bp: ()}

    def is_degen(gs, sx):
        word = set(sx[0])
        for i in range(len(gs)):
            if gs[i] == grp.identity and i in word:
                return True
        return False

    labels_by_degree = {}
    for k in range(0, n_trunc + 1):
        labs = []
        for sx in x.all_simplices(k):
            if x.is_basepoint(sx):
                continue
            for gs in itertools.product(grp.elements, repeat=k):
                if not is_degen(gs, sx):
                    labs.append(("ho", gs, sx))
        labels_by_degree[k] = labs
        if labs:
            simplices.setdefault(k, []).extend(labs)

    def canon(gs, sx):
        # the pair s_i-degenerates exactly at indices i in word(sx) with
        # g at slot i equal to the identity; strip them (largest first) and
        # return the stripped word with the nondegenerate base pair
        shared = tuple(
            sorted((i for i in sx[0] if gs[i] == grp.identity), reverse=True)
        )
        for idx in shared:
            gs = gs[:idx] + gs[idx + 1 :]
            sx = _strip(sx, (idx,))
        return (shared, ("ho", gs, sx))

    for k in range(1, n_trunc + 1):
        for lab in labels_by_degree.get(k, []):
            _, gs, sx = lab
            fs = []
            for i in range(k + 1):
                if i == 0:
                    gs2 = gs[1:]
                    sx2 = action.act(gs[0], x.d(0, sx))
                elif i < k:
                    gs2 = gs[: i - 1] + (grp.mul(gs[i], gs[i - 1]),) + gs[i + 1 :]
                    sx2 = x.d(i, sx)
                else:
                    gs2 = gs[:-1]
                    sx2 = x.d(k, sx)
                if x.is_basepoint(sx2):
                    fs.append((tuple(range(k - 2, -1, -1)), bp))
                    continue
                fs.append(canon(gs2, sx2))
            faces[lab] = tuple(fs)
    return SimpSet(simplices, faces, bp, n_trunc)


def orbit_total_chains(x: SimpSet, action: GroupAction, n_trunc: int):
    """Total complex of the normalized action bisimplicial chains.

    By Eilenberg-Zilber this has the homology of homotopy_orbits(x, action,
    n_trunc) below the truncation but with n_p * (|G|-1)^q generators in
    bidegree (p, q) instead of the diagonal blow-up.  Generators are
    (q, g-tuple without identities, nondegenerate non-basepoint label).
    Returns a homology.ChainComplex.
    """
    import itertools as it

    from .homology import ChainComplex

    grp = action.group
    nonident = [g for g in grp.elements if g != grp.identity]
    gens = {}
    for p, labs in x.simplices.items():
        for lab in labs:
            if lab == x.base_label:
                continue
            for q in range(0, n_trunc - p + 1):
                for gs in it.product(nonident, repeat=q):
                    gens.setdefault(p + q, []).append((q, gs, lab))
    bnds = {}
    for k in sorted(gens):
        if k == 0 or k - 1 not in gens:
            continue
        idx = {g: i for i, g in enumerate(gens[k - 1])}
        m = [[0] * len(gens[k]) for _ in range(len(gens[k - 1]))]

        def add(gen, col, c):
            i = idx.get(gen)
            if i is not None and c:
                m[i][col] += c

        for col, (q, gs, lab) in enumerate(gens[k]):
            p = k - q
            # horizontal: faces of the space coordinate
            if p > 0:
                for i in range(p + 1):
                    w, b = x.faces[lab][i]
                    if not w and b != x.base_label:
                        add((q, gs, b), col, (-1) ** i)
            # vertical (bar direction) with sign (-1)^p
            if q > 0:
                sgn = (-1) ** p
                img = action.act(gs[0], nondeg(lab))
                if not img[0] and img[1] != x.base_label:
                    add((q - 1, gs[1:], img[1]), col, sgn)
                for ell in range(1, q):
                    merged = grp.mul(gs[ell], gs[ell - 1])
                    if merged != grp.identity:
                        t2 = gs[: ell - 1] + (merged,) + gs[ell + 1 :]
                        add((q - 1, t2, lab), col, sgn * (-1) ** ell)
                add((q - 1, gs[:-1], lab), col, sgn * (-1) ** q)
        bnds[k] = m
    return ChainComplex(gens, bnds, check=True)


def orbit_total_map(f: SimpMap, cs, ct):
    """Chain map on orbit total complexes induced by an equivariant map."""
    from . import lattice as lat

    mats = {}
    for k in cs.degrees():
        m = lat.zeros(ct.rank(k), cs.rank(k))
        idx = {g: i for i, g in enumerate(ct.generators.get(k, []))}
        for col, (q, gs, lab) in enumerate(cs.generators[k]):
            w, b = f.assignment[lab]
            if not w and b != f.target.base_label:
                i = idx.get((q, gs, b))
                if i is not None:
                    m[i][col] += 1
        mats[k] = m
    return mats


def orbit_map(f: SimpMap, group, orb_src: SimpSet, orb_tgt: SimpSet) -> SimpMap:
    """The map induced on homotopy orbits by an equivariant map f."""
    asg = {orb_src.base_label: nondeg(orb_tgt.base_label)}
    for d, labs in orb_src.simplices.items():
        for lab in labs:
            if lab == orb_src.base_label:
                continue
            _, gs, sx = lab
            img = f(sx)
            if f.target.is_basepoint(img):
                asg[lab] = orb_tgt.basepoint(d)
                continue
            shared = tuple(
                sorted((i for i in img[0] if gs[i] == group.identity), reverse=True)
            )
            gs2, img2 = gs, img
            for idx in shared:
                gs2 = gs2[:idx] + gs2[idx + 1 :]
                img2 = _strip(img2, (idx,))
            asg[lab] = (shared, ("ho", gs2, img2))
    return SimpMap(orb_src, orb_tgt, asg)


def check_equivariant(f: SimpMap, act_src: GroupAction, act_tgt: GroupAction) -> bool:
    """f(g x) == g f(x) on all nondegenerate simplices and elements."""
    for g in act_src.group.elements:
        lhs = f.compose(act_src.maps[g])
        rhs = act_tgt.maps[g].compose(f)
        if lhs.assignment != rhs.assignment:
            return False
    return True


def orbit_face_chain(x: SimpSet, action: GroupAction, gs, sx):
    """Boundary terms of an orbit simplex, lazily (no SimpSet built).

    Yields (coefficient, (gs', sx')) over the nondegenerate faces of
    ('ho', gs, sx); basepoint and degenerate faces are dropped.
    """
    grp = action.group
    k = len(gs)
    for i in range(k + 1):
        if i == 0:
            gs2 = gs[1:]
            sx2 = action.act(gs[0], x.d(0, sx))
        elif i < k:
            gs2 = gs[: i - 1] + (grp.mul(gs[i], gs[i - 1]),) + gs[i + 1 :]
            sx2 = x.d(i, sx)
        else:
            gs2 = gs[:-1]
            sx2 = x.d(k, sx)
        if x.is_basepoint(sx2):
            continue
        degen = any(g == grp.identity and j in set(sx2[0]) for j, g in enumerate(gs2))
        if degen:
            continue
        yield ((-1) ** i, (gs2, sx2))


def reduce_orbits(
    x: SimpSet, action: GroupAction, sub_labels, n_trunc: int
):
    """Replace (X)_hG by (Y)_hH per the orbit-restriction proposition.

    Y is the subcomplex on ``sub_labels``; H is the subgroup preserving Y.
    Verifies both hypotheses exhaustively on nondegenerate simplices,
    raising ConditionsFail with a witness.  Returns (SimpSet, H elements).
    """
    grp = action.group
    ylabs = set(sub_labels) | {x.base_label}
    if not is_subcomplex(x, ylabs):
        raise NotSubcomplex("Y is not a subcomplex")

    def in_y(sx):
        return sx[1] in ylabs

    h_elems = []
    for g in grp.elements:
        takes_all = all(in_y(action.act(g, nondeg(lab))) for lab in ylabs)
        takes_some = any(
            in_y(action.act(g, nondeg(lab))) for lab in ylabs if lab != x.base_label
        )
        if takes_all:
            h_elems.append(g)
        elif takes_some:
            witness = next(
                lab
                for lab in ylabs
                if lab != x.base_label and not in_y(action.act(g, nondeg(lab)))
            )
            raise ConditionsFail(
                f"element {g!r} maps part of Y into Y but moves {witness!r} out",
                witness=witness,
            )
    for d, labs in x.simplices.items():
        for lab in labs:
            if not any(in_y(action.act(g, nondeg(lab))) for g in grp.elements):
                raise ConditionsFail(
                    f"simplex {lab!r} cannot be moved into Y", witness=lab
                )
    sub_simpset, _ = _subcomplex_as_simpset(x, ylabs)
    subgrp = grp.subgroup(h_elems)
    sub_maps = {}
    for g in h_elems:
        asg = {}
        for d, labs in sub_simpset.simplices.items():
            for lab2 in labs:
                if lab2 == sub_simpset.base_label:
                    asg[lab2] = nondeg(sub_simpset.base_label)
                    continue
                orig = lab2[1]
                img = action.act(g, nondeg(orig))
                asg[lab2] = (img[0], ("sub", img[1]) if img[1] != x.base_label else sub_simpset.base_label)
        sub_maps[g] = SimpMap(sub_simpset, sub_simpset, asg)
    sub_action = GroupAction(subgrp, sub_maps)
    return homotopy_orbits(sub_simpset, sub_action, n_trunc), h_elems


def _subcomplex_as_simpset(x: SimpSet, labels: set):
    bp = ("sub", x.base_label)
    simplices = {}
    faces = {}
    for d, labs in x.simplices.items():
        for lab in labs:
            if lab not in labels:
                continue
            key = bp if lab == x.base_label else ("sub", lab)
            simplices.setdefault(d, []).append(key)
            if d == 0:
                faces[key] = ()
            else:
                fs = []
                for w, b in x.faces[lab]:
                    fs.append((w, bp if b == x.base_label else ("sub", b)))
                faces[key] = tuple(fs)
    sub = SimpSet(simplices, faces, bp, x.truncation)
    inc = SimpMap(
        sub,
        x,
        {
            key: nondeg(key[1]) if key != bp else nondeg(x.base_label)
            for d, labs in sub.simplices.items()
            for key in labs
        },
    )
    return sub, inc


# ---------------------------------------------------------------------------
# chains helpers (shuffle product into a smash)


def shuffle_smash_chain(x: SimpSet, y: SimpSet, sm: SimpSet, ch_x: dict, ch_y: dict, p: int, q: int) -> dict:
    """Eilenberg-Zilber shuffle image of a chain tensor in chains(smash).

    ch_x: {label: coeff} in degree p of X; ch_y likewise in degree q of Y.
    Returns {smash label: coeff} in degree p+q, degenerate terms dropped.
    """
    out: dict = {}
    for mu in itertools.combinations(range(p + q), p):
        nu = tuple(i for i in range(p + q) if i not in mu)
        sgn = _shuffle_sign(mu, nu)
        for la, ca in ch_x.items():
            if ca == 0:
                continue
            a = nondeg(la)
            for idx in nu:  # ascending application builds word exactly nu
                a = x.s(idx, a)
            for lb, cb in ch_y.items():
                if cb == 0:
                    continue
                b = nondeg(lb)
                for idx in mu:
                    b = y.s(idx, b)
                if set(a[0]) & set(b[0]):
                    continue  # degenerate pair contributes nothing
                key = ("sm", a, b)
                out[key] = out.get(key, 0) + sgn * ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _shuffle_sign(mu, nu) -> int:
    inv = sum(1 for a in mu for b in nu if b < a)
    return -1 if inv % 2 else 1
