"""Integer chain complexes, Smith homology, cube total complexes, spectral
sequences.

Boundary matrices follow the convention ``boundary[k]``: C_k -> C_{k-1},
shaped (rank C_{k-1}) x (rank C_k).  Homology is reduced whenever the chain
complex came from a pointed simplicial set (the basepoint is simply not a
generator).

Coefficients: 'Z' (integral), 'Zhalf' (Z with 2 inverted: elementary
divisors lose their 2-primary part), 'Q' (ranks only).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import lattice as lat
from .errors import InputError, NonCommutingSquare
from .simpset import SimpMap, SimpSet

COEFFS = ("Z", "Zhalf", "Q")


@dataclass
class HomologyGroup:
    """Isomorphism type of one homology group: free rank plus torsion."""

    degree: int
    rank: int
    torsion: list[int] = field(default_factory=list)

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise InputError("torsion coefficients must form a divisor chain")

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"degree": self.degree, "rank": self.rank, "torsion": list(self.torsion)}


class ChainComplex:
    """A bounded complex of free abelian groups with labelled generators."""

    def __init__(self, generators: dict, boundaries: dict, check: bool = True):
        """generators: degree -> list of labels; boundaries: degree ->
        IntMat (C_k -> C_{k-1}).  Degrees with no generators are omitted."""
        self.generators = {d: list(g) for d, g in generators.items() if g}
        self.boundaries = {}
        for k, m in boundaries.items():
            nr = len(self.generators.get(k - 1, []))
            nc = len(self.generators.get(k, []))
            if nr == 0 or nc == 0:
                continue  # zero maps are implicit
            if lat.shape(m) != (nr, nc):
                raise InputError(f"boundary {k} has shape {lat.shape(m)}, want {(nr, nc)}")
            self.boundaries[k] = [list(r) for r in m]
        if check:
            self.check_dd_zero()

    def rank(self, k: int) -> int:
        return len(self.generators.get(k, []))

    def degrees(self) -> list[int]:
        return sorted(self.generators)

    def top_degree(self) -> int:
        return max(self.generators) if self.generators else -1

    def boundary(self, k: int) -> lat.IntMat:
        m = self.boundaries.get(k)
        if m is None:
            return lat.zeros(self.rank(k - 1), self.rank(k))
        return m

    def index_of(self, k: int, label) -> int:
        return self.generators[k].index(label)

    def chain_vector(self, k: int, chain: dict) -> list[int]:
        v = [0] * self.rank(k)
        idx = {lab: i for i, lab in enumerate(self.generators.get(k, []))}
        for lab, c in chain.items():
            if c:
                v[idx[lab]] += c
        return v

    def apply_boundary(self, k: int, v: list[int]) -> list[int]:
        return lat.mat_vec_int(self.boundary(k), v)

    def check_dd_zero(self):
        for k in self.boundaries:
            if k - 1 not in self.boundaries:
                continue
            upper = self.boundaries[k]
            lower = self.boundaries[k - 1]
            mid = self.rank(k - 1)
            lower_cols = [
                {r: lower[r][i] for r in range(self.rank(k - 2)) if lower[r][i]}
                for i in range(mid)
            ]
            for j in range(self.rank(k)):
                acc: dict[int, int] = {}
                for i in range(mid):
                    v = upper[i][j]
                    if v == 0:
                        continue
                    for r, w in lower_cols[i].items():
                        acc[r] = acc.get(r, 0) + v * w
                if any(acc.values()):
                    raise InputError(f"boundary squared nonzero in degree {k}")
        return True

    def shift(self, s: int) -> "ChainComplex":
        gens = {d + s: g for d, g in self.generators.items()}
        bnds = {k + s: m for k, m in self.boundaries.items()}
        return ChainComplex(gens, bnds, check=False)

    def __repr__(self):
        return f"ChainComplex({ {d: len(g) for d, g in sorted(self.generators.items())} })"


def normalized_chains(x: SimpSet) -> ChainComplex:
    """Reduced normalized chains: generators are the non-basepoint
    nondegenerate simplices; degenerate and basepoint faces are dropped."""
    gens = {}
    for d, labs in sorted(x.simplices.items()):
        keep = [lab for lab in labs if lab != x.base_label]
        if keep:
            gens[d] = keep
    bnds = {}
    for d, labs in gens.items():
        if d == 0:
            continue
        rows = len(gens.get(d - 1, []))
        idx = {lab: i for i, lab in enumerate(gens.get(d - 1, []))}
        m = lat.zeros(rows, len(labs))
        for j, lab in enumerate(labs):
            for i in range(d + 1):
                w, b = x.faces[lab][i]
                if w or b == x.base_label:
                    continue
                m[idx[b]][j] += (-1) ** i
        bnds[d] = m
    return ChainComplex(gens, bnds, check=False)


def smith(m: lat.IntMat):
    """Smith normal form: returns (divisors, L, R) with L m R = diag."""
    sf = lat.smith(m)
    return sf.divisors, sf.left, sf.right


def _adjust_coeff(divisors: list[int], coeff: str) -> list[int]:
    if coeff == "Z":
        return [d for d in divisors if d > 1]
    if coeff == "Zhalf":
        out = []
        for d in divisors:
            while d % 2 == 0:
                d //= 2
            if d > 1:
                out.append(d)
        return sorted(out)
    if coeff == "Q":
        return []
    raise InputError(f"unknown coefficient ring {coeff!r}")


def homology(c: ChainComplex, coeff: str = "Z") -> list[HomologyGroup]:
    """Smith-normal-form homology in every populated degree."""
    if coeff not in COEFFS:
        raise InputError(f"coeff must be one of {COEFFS}")
    out = []
    degs = c.degrees()
    if not degs:
        return out
    ranks = {}
    for k in range(min(degs), max(degs) + 2):
        m = c.boundary(k)
        ranks[k] = lat.int_rank_large(m) if lat.shape(m)[0] and lat.shape(m)[1] else 0
    for k in degs:
        n_k = c.rank(k)
        free = n_k - ranks.get(k, 0) - ranks.get(k + 1, 0)
        divisors = lat.elementary_divisors(c.boundary(k + 1)) if c.rank(k + 1) else []
        tor = _adjust_coeff(divisors, coeff)
        grp = HomologyGroup(k, free, tor)
        if not grp.is_zero():
            out.append(grp)
    return out


def homology_dict(c: ChainComplex, coeff: str = "Z") -> dict:
    return {h.degree: h for h in homology(c, coeff)}


class DegreeHomology:
    """Homology in one degree with explicit generator cycles and classifier."""

    def __init__(self, c: ChainComplex, k: int):
        self.complex = c
        self.degree = k
        n = c.rank(k)
        if n == 0:
            z = lat.zeros(0, 0)
        elif c.rank(k - 1) == 0:
            z = lat.eye(n)
        else:
            z = lat.kernel_basis(c.boundary(k))
            if lat.shape(z)[1] == 0:
                z = lat.zeros(n, 0)
        b = c.boundary(k + 1) if c.rank(k + 1) else lat.zeros(n, 0)
        bb = lat.hnf_column_basis(b)
        self.sq = lat.subquotient(z, bb)

    @property
    def group(self) -> HomologyGroup:
        orders = self.sq.orders
        return HomologyGroup(
            self.degree,
            sum(1 for o in orders if o == 0),
            sorted(o for o in orders if o > 1),
        )

    def generator_cycles(self) -> list[list[int]]:
        return self.sq.gens

    def classify(self, v: list[int]) -> list[int]:
        return self.sq.classify(v)

    def is_boundary(self, v: list[int]) -> bool:
        return self.sq.is_zero_class(v)


def induced_chain_map(f: SimpMap) -> tuple[ChainComplex, ChainComplex, dict]:
    """Chain map of normalized complexes; returns (src, tgt, matrices)."""
    cs = normalized_chains(f.source)
    ct = normalized_chains(f.target)
    mats = {}
    for d in cs.degrees():
        m = lat.zeros(ct.rank(d), cs.rank(d))
        idx = {lab: i for i, lab in enumerate(ct.generators.get(d, []))}
        for j, lab in enumerate(cs.generators[d]):
            w, b = f.assignment[lab]
            if not w and b != f.target.base_label:
                m[idx[b]][j] += 1
        mats[d] = m
    return cs, ct, mats


def check_chain_map(cs: ChainComplex, ct: ChainComplex, mats: dict) -> bool:
    for k in cs.degrees():
        if k - 1 < 0:
            continue
        lhs = lat.mat_mul_int(ct.boundary(k), mats.get(k, lat.zeros(ct.rank(k), cs.rank(k))))
        rhs = lat.mat_mul_int(
            mats.get(k - 1, lat.zeros(ct.rank(k - 1), cs.rank(k - 1))), cs.boundary(k)
        )
        if lhs != rhs:
            return False
    return True


def induced_homology(f: SimpMap, degrees=None) -> dict:
    """Per-degree matrices of H_k(f) over the generator cycles."""
    cs, ct, mats = induced_chain_map(f)
    out = {}
    degs = sorted(set(cs.degrees()) | set(ct.degrees()))
    if degrees is not None:
        degs = [k for k in degs if k in set(degrees)]
    for k in degs:
        hs = DegreeHomology(cs, k)
        ht = DegreeHomology(ct, k)
        cols = []
        for gen in hs.generator_cycles():
            img = lat.mat_vec_int(mats.get(k, lat.zeros(ct.rank(k), cs.rank(k))), gen)
            cols.append(ht.classify(img))
        out[k] = {
            "matrix": lat.from_columns(cols, len(ht.sq.orders)) if cols else [],
            "source": hs.group,
            "target": ht.group,
        }
    return out


def mapping_cone(cs: ChainComplex, ct: ChainComplex, mats: dict) -> ChainComplex:
    """Cone(f): degree k is C_{k-1}(src) + C_k(tgt); acyclic iff f is a
    quasi-isomorphism."""
    degs = set(d + 1 for d in cs.degrees()) | set(ct.degrees())
    gens = {}
    for k in sorted(degs):
        g = [("s", lab) for lab in cs.generators.get(k - 1, [])] + [
            ("t", lab) for lab in ct.generators.get(k, [])
        ]
        if g:
            gens[k] = g
    bnds = {}
    for k in sorted(gens):
        rows = len(gens.get(k - 1, []))
        cols = len(gens[k])
        m = lat.zeros(rows, cols)
        src_rows = len(cs.generators.get(k - 2, []))
        ds = cs.boundary(k - 1)
        dt = ct.boundary(k)
        fmat = mats.get(k - 1, lat.zeros(ct.rank(k - 1), cs.rank(k - 1)))
        nsp = len(cs.generators.get(k - 1, []))
        for j in range(nsp):
            for i in range(src_rows):
                if ds[i][j]:
                    m[i][j] = -ds[i][j]
            for i in range(ct.rank(k - 1)):
                if fmat[i][j]:
                    m[src_rows + i][j] = fmat[i][j]
        for j in range(ct.rank(k)):
            for i in range(ct.rank(k - 1)):
                if dt[i][j]:
                    m[src_rows + i][nsp + j] = dt[i][j]
        bnds[k] = m
    return ChainComplex(gens, bnds, check=False)


def is_quasi_iso(f: SimpMap) -> bool:
    """True iff f induces isomorphisms on all reduced homology groups."""
    cs, ct, mats = induced_chain_map(f)
    cone = mapping_cone(cs, ct, mats)
    return all(h.is_zero() for h in homology(cone, "Z"))


# ---------------------------------------------------------------------------
# cube diagrams


class CubeDiagram:
    """An m-cube of chain complexes with commuting edge maps.

    vertices: dict eps (tuple of 0/1, length m) -> ChainComplex.
    edges: dict (eps, j) -> matrices dict, the map from eps to eps+e_j
    (defined for eps[j] == 0).
    """

    def __init__(self, m: int, vertices: dict, edges: dict, check: bool = True):
        self.m = m
        self.vertices = dict(vertices)
        self.edges = dict(edges)
        if check:
            self.check_squares()

    def vertex(self, eps) -> ChainComplex:
        return self.vertices[tuple(eps)]

    def edge(self, eps, j) -> dict:
        return self.edges[(tuple(eps), j)]

    def _edge_matrix(self, eps, j, k) -> lat.IntMat:
        src = self.vertex(eps)
        tgt = self.vertex(flip(eps, j))
        return self.edges[(tuple(eps), j)].get(
            k, lat.zeros(tgt.rank(k), src.rank(k))
        )

    def check_squares(self):
        for eps in self.vertices:
            zeros_at = [j for j in range(self.m) if eps[j] == 0]
            src = self.vertex(eps)
            for j, l in itertools.combinations(zeros_at, 2):
                for k in src.degrees():
                    a = lat.mat_mul_int(
                        self._edge_matrix(flip(eps, j), l, k), self._edge_matrix(eps, j, k)
                    )
                    b = lat.mat_mul_int(
                        self._edge_matrix(flip(eps, l), j, k), self._edge_matrix(eps, l, k)
                    )
                    if a != b:
                        raise NonCommutingSquare(
                            f"square at {eps} in directions {j},{l} fails in degree {k}",
                            indices=(eps, j, l),
                        )
            for j in zeros_at:
                tgt = self.vertex(flip(eps, j))
                for k in src.degrees():
                    lhs = lat.mat_mul_int(tgt.boundary(k), self._edge_matrix(eps, j, k))
                    rhs = lat.mat_mul_int(self._edge_matrix(eps, j, k - 1), src.boundary(k))
                    if lhs != rhs:
                        raise NonCommutingSquare(
                            f"edge at {eps} direction {j} is not a chain map (degree {k})",
                            indices=(eps, j),
                        )
        return True


def flip(eps, j):
    return tuple(e if i != j else 1 for i, e in enumerate(eps))


def cube_from_simpsets(m: int, spaces: dict, maps: dict, check: bool = True) -> CubeDiagram:
    """Convert a cube of SimpSets / SimpMaps to a CubeDiagram."""
    chains = {eps: normalized_chains(x) for eps, x in spaces.items()}
    edges = {}
    for (eps, j), f in maps.items():
        cs, ct, mats = induced_chain_map(f)
        # the chain complexes computed here coincide with chains[eps] etc.
        edges[(eps, j)] = mats
    return CubeDiagram(m, chains, edges, check=check)


def total_complex(cube: CubeDiagram) -> ChainComplex:
    """Direct-sum total complex; the terminal vertex keeps its own degrees,
    each 0 in a coordinate shifts one degree up.

    Koszul signs: the direction-j edge from eps carries
    (-1)^(eps_1 + ... + eps_{j-1}); internal differentials carry
    (-1)^(number of ones).
    """
    m = cube.m
    gens = {}
    for eps, c in cube.vertices.items():
        shiftv = m - sum(eps)
        for q in c.degrees():
            k = q + shiftv
            for i, lab in enumerate(c.generators[q]):
                gens.setdefault(k, []).append((eps, lab))
    index = {}
    for k, labs in gens.items():
        for i, g in enumerate(labs):
            index[(k, g[0], g[1])] = i
    bnds = {}
    for k in sorted(gens):
        rows = len(gens.get(k - 1, []))
        m_out = lat.zeros(rows, len(gens[k]))
        for j, (eps, lab) in enumerate(gens[k]):
            c = cube.vertex(eps)
            q = k - (m - sum(eps))
            col = c.generators[q].index(lab)
            sign_int = (-1) ** (sum(eps))
            d = c.boundary(q)
            for i, lab2 in enumerate(c.generators.get(q - 1, [])):
                if d[i][col]:
                    m_out[index[(k - 1, eps, lab2)]][j] += sign_int * d[i][col]
            for direction in range(m):
                if eps[direction] == 1:
                    continue
                sgn = (-1) ** sum(eps[:direction])
                tgt_eps = flip(eps, direction)
                tgt = cube.vertex(tgt_eps)
                e = cube._edge_matrix(eps, direction, q)
                for i, lab2 in enumerate(tgt.generators.get(q, [])):
                    if e[i][col]:
                        m_out[index[(k - 1, tgt_eps, lab2)]][j] += sgn * e[i][col]
        bnds[k] = m_out
    return ChainComplex(gens, bnds, check=True)


# ---------------------------------------------------------------------------
# the spectral sequence of a cube (filtration by number of ones)


@dataclass
class SSPage:
    """One page: entries are HomologyGroups, differentials integer matrices
    on the recorded page generators."""

    r: int
    entries: dict
    differentials: dict

    def entry(self, p: int, q: int) -> HomologyGroup:
        return self.entries.get((p, q), HomologyGroup(q, 0, []))


class _FilteredSS:
    """Homological spectral sequence of a filtered complex, computed exactly.

    Filtration: generator g has level p(g); F_p = span of generators with
    level <= p.  E^r_{p,q} = Z^r / (Z^{r-1}_{p-1} + dZ^{r-1}-part), with
    Z^r_{p,q} = {x in F_p, deg p+q : dx in F_{p-r}}.
    """

    def __init__(self, total: ChainComplex, level: dict, pmax: int):
        self.total = total
        self.level = level
        self.pmax = pmax

    def _gen_levels(self, k):
        return [self.level[(k, g)] for g in self.total.generators.get(k, [])]

    def _filt_basis(self, k, p):
        cols = []
        n = self.total.rank(k)
        levels = self._gen_levels(k)
        for i in range(n):
            if levels[i] <= p:
                e = [0] * n
                e[i] = 1
                cols.append(e)
        return lat.from_columns(cols, n)

    def _z_lattice(self, p, q, r):
        # {x in F_p : dx in F_{p-r}}, as columns in degree p+q
        k = p + q
        n = self.total.rank(k)
        if n == 0:
            return lat.zeros(0, 0)
        fp = self._filt_basis(k, p)
        if lat.shape(fp)[1] == 0:
            return lat.zeros(n, 0)
        d = self.total.boundary(k)
        if lat.shape(d)[0] == 0:
            return fp  # no boundary constraints below
        dfp = lat.mat_mul_int(d, fp)
        target = self._filt_basis(k - 1, p - r)
        pre = lat.preimage_lattice(dfp, target)
        cols = lat.columns(lat.mat_mul_int(fp, pre)) if lat.shape(pre)[1] else []
        return lat.hnf_column_basis(lat.from_columns(cols, n)) if cols else lat.zeros(n, 0)

    def page_entry(self, p, q, r):
        k = p + q
        n = self.total.rank(k)
        if n == 0:
            return None
        znum = self._z_lattice(p, q, r)
        if lat.shape(znum)[1] == 0:
            return None
        z_below = self._z_lattice(p - 1, q + 1, r - 1)
        d = self.total.boundary(k + 1)
        up = self._z_lattice(p + r - 1, q - r + 2, r - 1)
        img_cols = lat.columns(lat.mat_mul_int(d, up)) if lat.shape(up)[1] else []
        den_cols = lat.columns(z_below) + img_cols
        den = (
            lat.hnf_column_basis(lat.from_columns(den_cols, n))
            if den_cols
            else lat.zeros(n, 0)
        )
        den_in = lat.lattice_intersection(znum, den) if lat.shape(den)[1] else lat.zeros(n, 0)
        num_basis = znum
        sq = lat.subquotient(num_basis, den_in)
        return sq


def cube_ss(cube: CubeDiagram, max_r: int | None = None, only_q=None) -> list[SSPage]:
    """Pages E^1, E^2, ... of the total-cofiber spectral sequence.

    Vertex eps sits at filtration p = m - |eps|; E^1_{p,q} is the direct sum
    of H_q of the vertices with m - p ones, d^1 induced by the edges.  Pages
    are computed until they stabilize (r = m+1 suffices).  ``only_q``
    restricts the computed entries to one row (the differentials within it).
    """
    m = cube.m
    total = total_complex(cube)
    level = {}
    for k, labs in total.generators.items():
        for (eps, lab) in labs:
            level[(k, (eps, lab))] = m - sum(eps)
    ss = _FilteredSS(total, level, m)
    pages = []
    rmax = max_r if max_r is not None else m + 1
    degs = total.degrees()
    kmin = min(degs) if degs else 0
    kmax = max(degs) if degs else -1
    for r in range(1, rmax + 1):
        entries = {}
        diffs = {}
        sqs = {}
        for k in range(kmin, kmax + 1):
            for p in range(0, m + 1):
                q = k - p
                if only_q is not None and q != only_q:
                    continue
                sq = ss.page_entry(p, q, r)
                if sq is not None and (sq.rank or sq.torsion):
                    sqs[(p, q)] = sq
                    entries[(p, q)] = HomologyGroup(
                        q, sq.rank, sorted(o for o in sq.orders if o > 1)
                    )
        for (p, q), sq in sqs.items():
            tgt = sqs.get((p - r, q + r - 1))
            if tgt is None:
                continue
            d = total.boundary(p + q)
            cols = [tgt.classify(lat.mat_vec_int(d, g)) for g in sq.gens]
            diffs[(p, q)] = lat.from_columns(cols, len(tgt.orders)) if cols else []
        pages.append(SSPage(r, entries, diffs))
    return pages


def ss_einf_vs_total(cube: CubeDiagram) -> tuple[bool, str]:
    """Compare E^infinity associated graded with H(total): Q-ranks and
    p-primary orders per total degree (extension-insensitive)."""
    pages = cube_ss(cube)
    einf = pages[-1]
    total = total_complex(cube)
    htot = homology_dict(total, "Z")
    degs = set(k for (p, q) in einf.entries for k in [p + q]) | set(htot)
    for k in sorted(degs):
        rank = 0
        torsion = []
        for (p, q), h in einf.entries.items():
            if p + q == k:
                rank += h.rank
                torsion.extend(h.torsion)
        h = htot.get(k, HomologyGroup(k, 0, []))
        if rank != h.rank:
            return False, f"degree {k}: E^inf rank {rank} != H rank {h.rank}"
        if _primary_orders(torsion) != _primary_orders(h.torsion):
            return False, (
                f"degree {k}: torsion orders {_primary_orders(torsion)} != "
                f"{_primary_orders(h.torsion)}"
            )
    return True, "ok"


def _primary_orders(torsion: list[int]) -> dict:
    out: dict[int, int] = {}
    for d in torsion:
        for p in _prime_factors(d):
            e = 0
            dd = d
            while dd % p == 0:
                dd //= p
                e += 1
            out[p] = out.get(p, 0) + e
    return out


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def homology_report(c: ChainComplex, coeff: str = "Z") -> list[dict]:
    return [h.to_json() for h in homology(c, coeff)]
