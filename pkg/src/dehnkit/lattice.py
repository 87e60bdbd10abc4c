"""Integer matrix and lattice arithmetic: Smith/Hermite forms, subquotients.

Matrices are lists of lists of Python ints.  Lattices are generated by the
*columns* of a matrix.  Everything is exact; no floats anywhere.

The Smith routine pivots on a minimal-absolute-value entry and keeps full
unimodular transforms.  ``elementary_divisors`` skips the transforms and
first strips +-1 pivots sparsely, which is what makes homology of mid-sized
simplicial complexes practical in pure Python.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


IntMat = list[list[int]]


def zeros(m: int, n: int) -> IntMat:
    return [[0] * n for _ in range(m)]


def eye(n: int) -> IntMat:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def shape(a: IntMat) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def mat_mul_int(a: IntMat, b: IntMat) -> IntMat:
    if not a or not b:
        return zeros(len(a), len(b[0]) if b else 0)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec_int(a: IntMat, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose_int(a: IntMat) -> IntMat:
    return [list(r) for r in zip(*a)] if a else []


def columns(a: IntMat) -> list[list[int]]:
    return [list(c) for c in zip(*a)] if a and a[0] else []


def from_columns(cols: list[list[int]], nrows: int | None = None) -> IntMat:
    if not cols:
        return [[] for _ in range(nrows)] if nrows else []
    return [list(r) for r in zip(*cols)]


def mat_eq_zero(a: IntMat) -> bool:
    return all(x == 0 for row in a for x in row)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithForm:
    """L @ M @ R = diag(divisors), with L, R unimodular (and inverses)."""

    divisors: list[int]
    left: IntMat
    right: IntMat
    left_inv: IntMat
    right_inv: IntMat
    nrows: int
    ncols: int

    @property
    def rank(self) -> int:
        return len([d for d in self.divisors if d != 0])


def smith(m_in: IntMat) -> SmithForm:
    """Smith normal form with transforms, pivoting on minimal |entry|."""
    m = [list(r) for r in m_in]
    nr, nc = shape(m)
    left, left_inv = eye(nr), eye(nr)
    right, right_inv = eye(nc), eye(nc)

    def row_op(i, j, k):
        # row i += k * row j  (on m and left); inverse column op on left_inv
        m[i] = [x + k * y for x, y in zip(m[i], m[j])]
        left[i] = [x + k * y for x, y in zip(left[i], left[j])]
        for r in range(nr):
            left_inv[r][j] -= k * left_inv[r][i]

    def col_op(i, j, k):
        # col i += k * col j  (on m and right); inverse row op on right_inv
        for r in range(nr):
            m[r][i] += k * m[r][j]
        for r in range(nc):
            right[r][i] += k * right[r][j]
        right_inv[j] = [x - k * y for x, y in zip(right_inv[j], right_inv[i])]

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        left[i], left[j] = left[j], left[i]
        for r in range(nr):
            left_inv[r][i], left_inv[r][j] = left_inv[r][j], left_inv[r][i]

    def col_swap(i, j):
        for r in range(nr):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        for r in range(nc):
            right[r][i], right[r][j] = right[r][j], right[r][i]
        right_inv[i], right_inv[j] = right_inv[j], right_inv[i]

    def row_negate(i):
        m[i] = [-x for x in m[i]]
        left[i] = [-x for x in left[i]]
        for r in range(nr):
            left_inv[r][i] = -left_inv[r][i]

    s = 0
    while True:
        # find minimal nonzero |entry| in m[s:, s:]
        best = None
        for i in range(s, nr):
            row = m[i]
            for j in range(s, nc):
                v = row[j]
                if v != 0 and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if abs(v) == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != s:
            row_swap(s, pi)
        if pj != s:
            col_swap(s, pj)
        # reduce column and row against the pivot
        dirty = False
        for i in range(s + 1, nr):
            if m[i][s] != 0:
                q = m[i][s] // m[s][s]
                if q:
                    row_op(i, s, -q)
                if m[i][s] != 0:
                    dirty = True
        for j in range(s + 1, nc):
            if m[s][j] != 0:
                q = m[s][j] // m[s][s]
                if q:
                    col_op(j, s, -q)
                if m[s][j] != 0:
                    dirty = True
        if dirty:
            continue
        # pivot now clean; enforce divisibility of the remaining block
        piv = m[s][s]
        offender = None
        for i in range(s + 1, nr):
            row = m[i]
            for j in range(s + 1, nc):
                if row[j] % piv != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(s, offender, 1)
            continue
        if piv < 0:
            row_negate(s)
        s += 1
        if s == min(nr, nc):
            break

    divisors = [m[i][i] for i in range(min(nr, nc)) if m[i][i] != 0]
    return SmithForm(divisors, left, right, left_inv, right_inv, nr, nc)


def _strip_unit_pivots(m_in: IntMat) -> tuple[IntMat, int]:
    """Eliminate +-1 pivots sparsely; return (dense core, pivot count).

    Every eliminated pivot is a divisor-1 Smith step (unimodular row and
    column operations followed by crossing out the pivot row and column),
    so divisors(input) = [1]*count + divisors(core).
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, row in enumerate(m_in):
        r = {j: v for j, v in enumerate(row) if v != 0}
        if r:
            rows[i] = r
            for j in r:
                cols.setdefault(j, set()).add(i)

    def col_weight(j):
        return len(cols.get(j, ()))

    npivots = 0
    progress = True
    while progress:
        progress = False
        # pick a +-1 entry with sparse row/column (Markowitz-lite)
        best = None
        for i, r in rows.items():
            for j, v in r.items():
                if v in (1, -1):
                    w = (len(r) - 1) * (col_weight(j) - 1)
                    if best is None or w < best[0]:
                        best = (w, i, j, v)
                        if w == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj, pv = best
        prow = rows.pop(pi)
        for j in prow:
            cols[j].discard(pi)
        targets = list(cols.get(pj, ()))
        for i in targets:
            r = rows[i]
            f = r[pj] * pv  # since pv*pv == 1, entry/pv == entry*pv
            for j, v in prow.items():
                if j == pj:
                    continue
                nv = r.get(j, 0) - f * v
                if nv:
                    if j not in r:
                        cols.setdefault(j, set()).add(i)
                    r[j] = nv
                else:
                    if j in r:
                        del r[j]
                        cols[j].discard(i)
            del r[pj]
            cols[pj].discard(i)
            if not r:
                del rows[i]
        cols.pop(pj, None)
        npivots += 1
        progress = True

    live_rows = sorted(rows)
    live_cols = sorted({j for r in rows.values() for j in r})
    cmap = {j: k for k, j in enumerate(live_cols)}
    core = zeros(len(live_rows), len(live_cols))
    for a, i in enumerate(live_rows):
        for j, v in rows[i].items():
            core[a][cmap[j]] = v
    return core, npivots


def elementary_divisors(m: IntMat) -> list[int]:
    """Nonzero elementary divisors of an integer matrix (no transforms)."""
    nr, nc = shape(m)
    if nr == 0 or nc == 0:
        return []
    nnz = sum(1 for row in m for x in row if x != 0)
    if nnz == 0:
        return []
    if min(nr, nc) > 60 or nnz < nr * nc // 4:
        core, ones = _strip_unit_pivots(m)
        rest = smith(core).divisors if core and core[0] else []
        return [1] * ones + rest
    return smith(m).divisors


def int_rank_large(m: IntMat) -> int:
    """Rank over Q, stripping unit pivots sparsely first."""
    core, ones = _strip_unit_pivots(m)
    return ones + (int_rank(core) if core and core[0] else 0)


def int_rank(m: IntMat) -> int:
    """Rank over Q via fraction-free (Bareiss) elimination."""
    nr, nc = shape(m)
    if nr == 0 or nc == 0:
        return 0
    a = [[Fraction(x) for x in row] for row in m]
    rank = 0
    for col in range(nc):
        piv = None
        for r in range(rank, nr):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        for r in range(rank + 1, nr):
            if a[r][col] != 0:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


# ---------------------------------------------------------------------------
# solving and kernels


def solve_rational(a: IntMat, b: list[int]) -> list[Fraction] | None:
    """One rational solution of a x = b, or None."""
    nr, nc = shape(a)
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots = []
    rank = 0
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = 1 / aug[rank][col]
        aug[rank] = [x * inv for x in aug[rank]]
        for r in range(nr):
            if r != rank and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nr):
        if aug[r][nc] != 0:
            return None
    x = [Fraction(0)] * nc
    for i, col in enumerate(pivots):
        x[col] = aug[i][nc]
    return x


def solve_int(a: IntMat, b: list[int]) -> list[int] | None:
    """One integer solution of a x = b, or None (uses Smith transforms)."""
    sf = smith(a)
    c = mat_vec_int(sf.left, b)
    y = [0] * sf.ncols
    for i, d in enumerate(sf.divisors):
        if c[i] % d != 0:
            return None
        y[i] = c[i] // d
    for i in range(len(sf.divisors), sf.nrows):
        if c[i] != 0:
            return None
    return mat_vec_int(sf.right, y)


def kernel_basis(a: IntMat) -> IntMat:
    """Columns form a basis of the integer kernel of ``a`` (saturated).

    Sparse stacked column echelon: run unimodular column operations on
    [A; I]; columns whose A-part vanishes have kernel-basis tails.
    """
    nr, nc = shape(a)
    if nc == 0:
        return []
    if nr == 0:
        return eye(nc)
    cols = []
    for j in range(nc):
        col = {i: a[i][j] for i in range(nr) if a[i][j] != 0}
        col[nr + j] = 1
        cols.append(col)
    live = list(range(nc))
    for row in range(nr):
        active = [j for j in live if cols[j].get(row, 0) != 0]
        if not active:
            continue
        while len(active) > 1:
            active.sort(key=lambda j: abs(cols[j][row]))
            piv = active[0]
            pv = cols[piv][row]
            nxt = []
            for j in active[1:]:
                q = cols[j][row] // pv
                if q:
                    _sparse_col_sub(cols[j], cols[piv], q)
                if cols[j].get(row, 0) != 0:
                    nxt.append(j)
            active = [piv] + nxt
        live.remove(active[0])
    ker_cols = []
    for j in live:
        v = [0] * nc
        for i, val in cols[j].items():
            if i >= nr:
                v[i - nr] = val
        ker_cols.append(v)
    return from_columns(ker_cols, nc)


def _sparse_col_sub(target: dict, source: dict, q: int):
    for i, v in source.items():
        nv = target.get(i, 0) - q * v
        if nv:
            target[i] = nv
        elif i in target:
            del target[i]


def _sparse_column_echelon(cols: list[dict], nr: int):
    """Unimodular column reduction to echelon; returns (pivots, live).

    pivots: list of (row, column-dict) with strictly increasing rows; live
    columns that vanished on all rows are returned separately (their keys
    beyond nr, if any, are untouched tails).
    """
    live = list(range(len(cols)))
    pivots = []
    for row in range(nr):
        active = [j for j in live if cols[j].get(row, 0) != 0]
        if not active:
            continue
        while len(active) > 1:
            active.sort(key=lambda j: abs(cols[j][row]))
            piv = active[0]
            pv = cols[piv][row]
            nxt = []
            for j in active[1:]:
                q = cols[j][row] // pv
                if q:
                    _sparse_col_sub(cols[j], cols[piv], q)
                if cols[j].get(row, 0) != 0:
                    nxt.append(j)
            active = [piv] + nxt
        j = active[0]
        if cols[j][row] < 0:
            cols[j] = {i: -v for i, v in cols[j].items()}
        pivots.append((row, cols[j]))
        live.remove(j)
    zero = [cols[j] for j in live]
    return pivots, zero


def hnf_column_basis(a: IntMat) -> IntMat:
    """Column echelon basis of the column lattice of ``a`` (sparse)."""
    nr, nc = shape(a)
    if nc == 0:
        return [[] for _ in range(nr)]
    cols = [
        {i: a[i][j] for i in range(nr) if a[i][j] != 0} for j in range(nc)
    ]
    cols = [c for c in cols if c]
    pivots, _ = _sparse_column_echelon(cols, nr)
    out = []
    for _, col in pivots:
        v = [0] * nr
        for i, val in col.items():
            v[i] = val
        out.append(v)
    return from_columns(out, nr)


def lattice_sum(a: IntMat, b: IntMat) -> IntMat:
    nr = len(a) if a else len(b)
    cols = columns(a) + columns(b)
    return hnf_column_basis(from_columns(cols, nr)) if cols else [[] for _ in range(nr)]


def lattice_intersection(a: IntMat, b: IntMat) -> IntMat:
    """Basis of col(a) intersect col(b)."""
    nr, na = shape(a)
    _, nb = shape(b)
    if na == 0 or nb == 0:
        return [[] for _ in range(nr)]
    stacked = [list(ra) + [-x for x in rb] for ra, rb in zip(a, b)]
    ker = kernel_basis(stacked)
    cols = columns(ker)
    vecs = [mat_vec_int(a, c[:na]) for c in cols]
    return hnf_column_basis(from_columns(vecs, nr)) if vecs else [[] for _ in range(nr)]


def preimage_lattice(f: IntMat, target: IntMat) -> IntMat:
    """Basis of {x : f x in col(target)} as columns."""
    nr, nc = shape(f)
    _, nt = shape(target)
    if nt == 0:
        return kernel_basis(f)
    stacked = [list(rf) + [-x for x in rt] for rf, rt in zip(f, target)]
    ker = kernel_basis(stacked)
    cols = [c[:nc] for c in columns(ker)]
    return hnf_column_basis(from_columns(cols, nc)) if cols else [[0] * 0 for _ in range(nc)]


def in_lattice(v: list[int], basis: IntMat) -> bool:
    return solve_int(basis, v) is not None if shape(basis)[1] else all(x == 0 for x in v)


# ---------------------------------------------------------------------------
# finitely generated subquotients Z/B


class RationalSolver:
    """Factor a full-column-rank integer matrix once, solve A x = b often.

    Sparse unimodular column echelon of [A; I]: A V = E with V unimodular,
    E in column echelon form.  Solving E y = b is back substitution down
    the pivot rows; x = V y.  V unimodular makes x integral iff y is.
    """

    def __init__(self, a: IntMat):
        self.nr, self.nc = shape(a)
        cols = []
        for j in range(self.nc):
            col = {i: a[i][j] for i in range(self.nr) if a[i][j] != 0}
            col[self.nr + j] = 1
            cols.append(col)
        pivots, zero = _sparse_column_echelon(cols, self.nr)
        for z in zero:
            if any(i < self.nr for i in z):
                raise AssertionError("echelon left a nonzero unpivoted column")
        if zero:
            raise ValueError("matrix does not have full column rank")
        self._pivots = pivots  # (pivot row, column dict incl. tail)
        self.rank = len(pivots)

    def solve(self, b: list[int]) -> list[Fraction] | None:
        residual = {i: Fraction(v) for i, v in enumerate(b) if v}
        ys = []
        for row, col in self._pivots:
            r = residual.get(row, 0)
            if r == 0:
                ys.append((Fraction(0), col))
                continue
            y = r / col[row]
            ys.append((y, col))
            for i, v in col.items():
                if i >= self.nr:
                    continue
                nv = residual.get(i, Fraction(0)) - y * v
                if nv:
                    residual[i] = nv
                elif i in residual:
                    del residual[i]
        if residual:
            return None
        x = [Fraction(0)] * self.nc
        for y, col in ys:
            if y:
                for i, v in col.items():
                    if i >= self.nr:
                        x[i - self.nr] += y * v
        return x

    def solve_integral(self, b: list[int]) -> list[int] | None:
        x = self.solve(b)
        if x is None:
            return None
        if any(v.denominator != 1 for v in x):
            return None
        return [int(v) for v in x]


class Subquotient:
    """The abelian group col(Z)/col(B), with explicit generator lifts.

    ``gens`` are ambient vectors (columns) generating the group; ``orders``
    aligns with gens, 0 meaning infinite order.  ``classify`` sends an
    ambient vector in col(Z) to its coordinates over the generators (reduced
    mod the orders).
    """

    def __init__(self, ambient_dim, gens, orders, solver, lred, keep):
        self.ambient_dim = ambient_dim
        self.gens = gens
        self.orders = orders
        self._solver = solver
        self._lred = lred
        self._keep = keep

    @property
    def rank(self) -> int:
        return sum(1 for o in self.orders if o == 0)

    @property
    def torsion(self) -> list[int]:
        return sorted(o for o in self.orders if o > 1)

    def classify(self, v: list[int]) -> list[int]:
        u = self._solver.solve_integral(v) if self._solver else None
        if u is None:
            raise ValueError("vector is not in the numerator lattice")
        if isinstance(self._lred, _SparseRows):
            w = self._lred.matvec(u)
        else:
            w = mat_vec_int(self._lred, u)
        out = []
        for i, o in enumerate(self.orders):
            c = w[self._keep[i]]
            out.append(c % o if o > 1 else c)
        return out

    def is_zero_class(self, v: list[int]) -> bool:
        return all(x == 0 for x in self.classify(v))

    def __repr__(self):
        return f"Subquotient(rank={self.rank}, torsion={self.torsion})"


def _left_smith(m_in: IntMat):
    """Divisor data of coker(M) with only the row transform, sparsely.

    Returns (orders, left_rows, left_inv_cols): orders[i] is the order of
    the i-th new basis vector in Z^nr/col(M) (0 = free); left_rows and
    left_inv_cols are sparse dicts for L and L^-1 with L M R = diag for
    some unimodular column choice R that is never materialized.
    +-1 pivots are eliminated sparsely; the leftover core goes through the
    dense Smith routine.
    """
    nr, nc = shape(m_in)
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set] = {}
    for i in range(nr):
        r = {j: v for j, v in enumerate(m_in[i]) if v}
        if r:
            rows[i] = r
            for j in r:
                cols.setdefault(j, set()).add(i)
    left_rows = {i: {i: 1} for i in range(nr)}
    left_inv_cols = {i: {i: 1} for i in range(nr)}
    orders = {}

    def row_op(i, pr, f):
        # row i -= f * row pr (on m and L); col pr += f * col i (on L^-1)
        _sparse_col_sub(rows.setdefault(i, {}), rows.get(pr, {}), f)
        for j in list(rows.get(pr, {})):
            if rows.get(i, {}).get(j):
                cols.setdefault(j, set()).add(i)
            else:
                cols.get(j, set()).discard(i)
        if not rows.get(i):
            rows.pop(i, None)
        _sparse_col_sub(left_rows.setdefault(i, {}), left_rows.get(pr, {}), f)
        src = left_inv_cols.get(i, {})
        tgt = left_inv_cols.setdefault(pr, {})
        for r, v in src.items():
            nv = tgt.get(r, 0) + f * v
            if nv:
                tgt[r] = nv
            elif r in tgt:
                del tgt[r]

    active_rows = set(range(nr))
    active_cols = set(range(nc))
    progress = True
    while progress:
        progress = False
        best = None
        for i in list(rows):
            if i not in active_rows:
                continue
            r = rows[i]
            for j, v in r.items():
                if j in active_cols and v in (1, -1):
                    w = (len(r) - 1) * (len(cols.get(j, ())) - 1)
                    if best is None or w < best[0]:
                        best = (w, i, j, v)
                        if w == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj, pv = best
        for i in list(cols.get(pj, ())):
            if i == pi or i not in active_rows:
                continue
            f = rows[i][pj] * pv
            row_op(i, pi, f)
        # clear the pivot row with column ops (no transform tracked)
        prow = rows.get(pi, {})
        for j in list(prow):
            if j != pj:
                del prow[j]
                cols.get(j, set()).discard(pi)
        orders[pi] = 1
        active_rows.discard(pi)
        active_cols.discard(pj)
        cols.pop(pj, None)
        rows.pop(pi, None)
        progress = True

    live_rows = sorted(i for i in active_rows if i in rows and rows[i])
    live_cols = sorted(
        {j for i in live_rows for j in rows[i] if j in active_cols}
    )
    if live_rows:
        cmap = {j: k for k, j in enumerate(live_cols)}
        core = zeros(len(live_rows), len(live_cols))
        for a, i in enumerate(live_rows):
            for j, v in rows[i].items():
                if j in cmap:
                    core[a][cmap[j]] = v
        sf = smith(core)
        for a, i in enumerate(live_rows):
            orders[i] = sf.divisors[a] if a < len(sf.divisors) else 0
        # compose: new L = embed(core L) * current L (rows live_rows mix)
        old_rows = {i: dict(left_rows[i]) for i in live_rows}
        old_cols = {
            i: {r: v for r, v in left_inv_cols[i].items()} for i in live_rows
        }
        for a, i in enumerate(live_rows):
            newrow: dict[int, int] = {}
            for b, jb in enumerate(live_rows):
                f = sf.left[a][b]
                if f:
                    for c, v in old_rows[jb].items():
                        nv = newrow.get(c, 0) + f * v
                        if nv:
                            newrow[c] = nv
                        elif c in newrow:
                            del newrow[c]
            left_rows[i] = newrow
        for a, i in enumerate(live_rows):
            newcol: dict[int, int] = {}
            for b, jb in enumerate(live_rows):
                f = sf.left_inv[b][a]
                if f:
                    for r, v in old_cols[jb].items():
                        nv = newcol.get(r, 0) + f * v
                        if nv:
                            newcol[r] = nv
                        elif r in newcol:
                            del newcol[r]
            left_inv_cols[i] = newcol
    for i in range(nr):
        if i not in orders:
            orders[i] = 0
    return orders, left_rows, left_inv_cols


def subquotient(znum: IntMat, bden: IntMat) -> Subquotient:
    """Structure of col(znum)/col(bden); bden must lie in col(znum).

    znum's columns must be a basis (build with hnf_column_basis first).
    """
    nr, nz = shape(znum)
    _, nb = shape(bden)
    if nz == 0:
        return Subquotient(nr, [], [], None, [], [])
    solver = RationalSolver(znum)
    ucols = []
    for c in columns(bden):
        u = solver.solve_integral(c)
        if u is None:
            raise ValueError("denominator not contained in numerator lattice")
        ucols.append(u)
    u_mat = from_columns(ucols, nz) if ucols else zeros(nz, 0)
    if nz > 80:
        orders_by_row, left_rows, left_inv_cols = _left_smith(u_mat)
        keep = [i for i in range(nz) if orders_by_row[i] != 1]
        gens = []
        zcols = columns(znum)
        for i in keep:
            acc = [0] * nr
            for r, v in left_inv_cols[i].items():
                col = zcols[r]
                for t in range(nr):
                    if col[t]:
                        acc[t] += v * col[t]
            gens.append(acc)
        orders = [orders_by_row[i] for i in keep]
        lred = _SparseRows(left_rows, nz)
        return Subquotient(nr, gens, orders, solver, lred, keep)
    sf = smith(u_mat)
    # group = coker(U) = Z^nz / U; new basis of Z^nz: columns of left_inv
    divisors = sf.divisors + [0] * (nz - len(sf.divisors))
    gen_cols = columns(mat_mul_int(znum, sf.left_inv))
    keep = [i for i, d in enumerate(divisors) if d != 1]
    gens = [gen_cols[i] for i in keep]
    orders = [divisors[i] for i in keep]
    return Subquotient(nr, gens, orders, solver, sf.left, keep)


class _SparseRows:
    """Row-dict matrix supporting mat_vec through the Subquotient.classify
    path."""

    def __init__(self, rows: dict, n: int):
        self.rows = rows
        self.n = n

    def matvec(self, u: list[int]) -> list[int]:
        out = [0] * self.n
        support = {i for i, v in enumerate(u) if v}
        for i, row in self.rows.items():
            s = 0
            for j, w in row.items():
                if j in support:
                    s += w * u[j]
            if s:
                out[i] = s
        return out
