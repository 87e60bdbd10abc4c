"""Finite groups given by multiplication tables, and their bar homology.

Groups may carry an embedding as exact isometries and a +-1 character
(typically det).  Coefficients for group homology are modules: a rank with
integer action matrices per element.  The bar boundary follows the twisted
convention: the 0-th face acts on the coefficient through the first group
element.
"""

from __future__ import annotations

import itertools

from . import lattice as lat
from .errors import InputError
from .exactlin import Isometry
from .homology import ChainComplex, HomologyGroup, homology


class FiniteGroup:
    """A finite group as an element list plus a multiplication table."""

    def __init__(self, elements, table, isometries=None, character=None, check=True):
        """table: dict (g,h) -> gh.  isometries: element -> Isometry.
        character: element -> +-1 (defaults to det_sign or trivial)."""
        self.elements = list(elements)
        self.table = dict(table)
        self.isometries = dict(isometries) if isometries else None
        if character is None:
            if self.isometries:
                character = {g: self.isometries[g].det_sign for g in self.elements}
            else:
                character = {g: 1 for g in self.elements}
        self.character = dict(character)
        self.identity = self._find_identity()
        if check:
            self.validate()

    def _find_identity(self):
        for e in self.elements:
            if all(self.table[(e, g)] == g == self.table[(g, e)] for g in self.elements):
                return e
        raise InputError("multiplication table has no identity")

    def mul(self, g, h):
        return self.table[(g, h)]

    def inv(self, g):
        for h in self.elements:
            if self.mul(g, h) == self.identity:
                return h
        raise InputError(f"element {g!r} has no inverse")

    def order(self) -> int:
        return len(self.elements)

    def validate(self):
        elems = set(self.elements)
        for g in self.elements:
            for h in self.elements:
                if self.table[(g, h)] not in elems:
                    raise InputError("table not closed")
        for g, h, k in itertools.product(self.elements, repeat=3):
            if self.mul(self.mul(g, h), k) != self.mul(g, self.mul(h, k)):
                raise InputError(f"associativity fails at ({g!r},{h!r},{k!r})")
        for g in self.elements:
            self.inv(g)
        for g in self.elements:
            for h in self.elements:
                if self.character[self.mul(g, h)] != self.character[g] * self.character[h]:
                    raise InputError("character is not multiplicative")
        if self.isometries:
            for g in self.elements:
                for h in self.elements:
                    prod = self.isometries[g] * self.isometries[h]
                    if prod != self.isometries[self.mul(g, h)]:
                        raise InputError("isometry embedding is not a homomorphism")
        return True

    def subgroup(self, elements) -> "FiniteGroup":
        elems = list(elements)
        table = {(g, h): self.mul(g, h) for g in elems for h in elems}
        isos = {g: self.isometries[g] for g in elems} if self.isometries else None
        char = {g: self.character[g] for g in elems}
        return FiniteGroup(elems, table, isos, char, check=True)

    def to_json(self) -> dict:
        idx = {g: i for i, g in enumerate(self.elements)}
        data = {
            "elements": [repr(g) for g in self.elements],
            "table": [
                [idx[self.mul(g, h)] for h in self.elements] for g in self.elements
            ],
            "character": [self.character[g] for g in self.elements],
        }
        if self.isometries:
            data["matrices"] = [
                [[str(x) for x in row] for row in self.isometries[g].matrix]
                for g in self.elements
            ]
        return data

    @staticmethod
    def from_json(data: dict, space=None) -> "FiniteGroup":
        try:
            n = len(data["elements"])
            elems = list(range(n))
            table = {
                (i, j): data["table"][i][j] for i in range(n) for j in range(n)
            }
            char = {i: data["character"][i] for i in range(n)} if "character" in data else None
            isos = None
            if "matrices" in data and space is not None:
                isos = {i: Isometry(data["matrices"][i], space) for i in range(n)}
            return FiniteGroup(elems, table, isos, char)
        except (KeyError, IndexError, TypeError) as e:
            raise InputError(f"bad group JSON: {e}") from e

    def __repr__(self):
        return f"FiniteGroup(order={self.order()})"


def cyclic_group(n: int) -> FiniteGroup:
    elems = list(range(n))
    table = {(i, j): (i + j) % n for i in elems for j in elems}
    return FiniteGroup(elems, table)


def z2_with_sign() -> FiniteGroup:
    g = FiniteGroup([0, 1], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0},
                    character={0: 1, 1: -1})
    return g


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral of order 2n; elements ('r', k) and ('s', k), det = -1 on
    reflections."""
    elems = [("r", k) for k in range(n)] + [("s", k) for k in range(n)]

    def mul(a, b):
        ta, ka = a
        tb, kb = b
        if ta == "r" and tb == "r":
            return ("r", (ka + kb) % n)
        if ta == "r" and tb == "s":
            return ("s", (ka + kb) % n)
        if ta == "s" and tb == "r":
            return ("s", (ka - kb) % n)
        return ("r", (ka - kb) % n)

    table = {(a, b): mul(a, b) for a in elems for b in elems}
    char = {e: (1 if e[0] == "r" else -1) for e in elems}
    return FiniteGroup(elems, table, character=char)


def isometry_group(gens: list[Isometry], max_order: int = 512) -> FiniteGroup:
    """Close a generating set of exact isometries into a finite group."""
    if not gens:
        raise InputError("need at least one generator")
    space = gens[0].space
    from .exactlin import identity_isometry

    seen = {identity_isometry(space)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > max_order:
                        raise InputError("group closure exceeds max_order")
        frontier = nxt
    elems = sorted(seen, key=lambda i: i.matrix)
    table = {(a, b): a * b for a in elems for b in elems}
    isos = {a: a for a in elems}
    return FiniteGroup(elems, table, isometries=isos)


# ---------------------------------------------------------------------------
# coefficient modules


class Module:
    """A finitely generated free Z-module with a left G-action by matrices."""

    def __init__(self, group: FiniteGroup, rank: int, matrices: dict):
        self.group = group
        self.rank = rank
        self.matrices = dict(matrices)

    @staticmethod
    def from_character(group: FiniteGroup, character=None) -> "Module":
        char = character if character is not None else group.character
        return Module(group, 1, {g: [[char[g]]] for g in group.elements})

    @staticmethod
    def trivial(group: FiniteGroup) -> "Module":
        return Module(group, 1, {g: [[1]] for g in group.elements})

    def twist_by_character(self, character=None) -> "Module":
        char = character if character is not None else self.group.character
        mats = {
            g: [[char[g] * x for x in row] for row in m]
            for g, m in self.matrices.items()
        }
        return Module(self.group, self.rank, mats)

    def act(self, g, v: list[int]) -> list[int]:
        return lat.mat_vec_int(self.matrices[g], v)

    def validate(self):
        ident = self.matrices[self.group.identity]
        if ident != lat.eye(self.rank):
            raise InputError("identity must act as the identity matrix")
        for g in self.group.elements:
            for h in self.group.elements:
                prod = lat.mat_mul_int(self.matrices[g], self.matrices[h])
                if prod != self.matrices[self.group.mul(g, h)]:
                    raise InputError("module action is not a homomorphism")
        return True


# ---------------------------------------------------------------------------
# bar complex


def bar_complex(group: FiniteGroup, coeff, n_max: int) -> ChainComplex:
    """Normalized bar complex computing H_*(G; M) up to degree n_max.

    coeff: a Module, or a character dict g -> +-1, or None (trivial).
    Generators in degree j: (tuple of non-identity elements, basis index).
    d_0 acts on the coefficient through the leading element; middle faces
    multiply adjacent entries (left-to-right composition g_{l+1} g_l); the
    last face drops the tail.
    """
    if n_max < 0:
        raise InputError("bar truncation must be nonnegative")
    if coeff is None:
        coeff = Module.trivial(group)
    elif isinstance(coeff, dict):
        coeff = Module.from_character(group, coeff)
    grp = group
    nonident = [g for g in grp.elements if g != grp.identity]
    gens = {}
    for j in range(n_max + 1):
        labs = [
            (tup, i)
            for tup in itertools.product(nonident, repeat=j)
            for i in range(coeff.rank)
        ]
        gens[j] = labs
    bnds = {}
    for j in range(1, n_max + 1):
        idx = {lab: i for i, lab in enumerate(gens[j - 1])}
        m = lat.zeros(len(gens[j - 1]), len(gens[j]))
        for col, (tup, i) in enumerate(gens[j]):
            # d_0: act through tup[0]
            unit = [0] * coeff.rank
            unit[i] = 1
            acted = coeff.act(tup[0], unit)
            rest = tup[1:]
            for bi, c in enumerate(acted):
                if c:
                    m[idx[(rest, bi)]][col] += c
            for ell in range(1, j):
                merged = grp.mul(tup[ell], tup[ell - 1])
                if merged == grp.identity:
                    continue
                t2 = tup[: ell - 1] + (merged,) + tup[ell + 1 :]
                m[idx[(t2, i)]][col] += (-1) ** ell
            t3 = tup[:-1]
            m[idx[(t3, i)]][col] += (-1) ** j
        bnds[j] = m
    return ChainComplex(gens, bnds, check=True)


def group_homology(group: FiniteGroup, coeff, coeff_ring: str, n_max: int) -> list[HomologyGroup]:
    """H_i(G; M) for i < n_max via the bar complex (i = n_max is cut off)."""
    c = bar_complex(group, coeff, n_max)
    return [h for h in homology(c, coeff_ring) if h.degree < n_max]


def group_homology_dict(group, coeff, coeff_ring, n_max):
    return {h.degree: h for h in group_homology(group, coeff, coeff_ring, n_max)}


# ---------------------------------------------------------------------------
# homotopy orbit cross-check


def hoss_check(x, action, n_trunc: int, coeff_ring: str = "Z"):
    """Compare homology of X_hG with shifted group homology.

    Requires the reduced homology of X concentrated in one degree n with
    free H_n; then H_i(X_hG) must equal H_{i-n}(G; H_n(X)) for i < n_trunc.
    Returns (ok, detail dict).
    """
    from .homology import DegreeHomology, homology_dict, induced_homology, normalized_chains
    from .simpset import homotopy_orbits

    cx = normalized_chains(x)
    hx = homology_dict(cx, "Z")
    concentrated = [d for d, h in hx.items() if not h.is_zero()]
    if len(concentrated) != 1:
        raise InputError(f"homology not concentrated: degrees {concentrated}")
    n = concentrated[0]
    if hx[n].torsion:
        raise InputError("concentrated homology must be free for the module action")
    grp = action.group
    dh = DegreeHomology(cx, n)
    rank = len(dh.generator_cycles())
    mats = {}
    for g in grp.elements:
        f = action.maps[g]
        ind = induced_homology(f)[n]["matrix"]
        mats[g] = ind if ind else lat.zeros(rank, rank)
    module = Module(grp, rank, mats)
    module.validate()
    orb = homotopy_orbits(x, action, n_trunc)
    horb = homology_dict(normalized_chains(orb), coeff_ring)
    hgrp = group_homology_dict(grp, module, coeff_ring, max(0, n_trunc - n))
    detail = {"n": n, "orbit": {}, "group": {}}
    ok = True
    for i in range(n_trunc):
        lhs = horb.get(i, HomologyGroup(i, 0, []))
        rhs = hgrp.get(i - n, HomologyGroup(i - n, 0, []))
        detail["orbit"][i] = str(lhs)
        detail["group"][i] = str(rhs)
        if (lhs.rank, lhs.torsion) != (rhs.rank, rhs.torsion):
            ok = False
    return ok, detail
