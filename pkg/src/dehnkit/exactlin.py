"""Exact linear algebra over Q: quadratic spaces, subspaces, orthocomplements.

Conventions follow the geometric setup: a geometry of dimension n lives in a
rational vector space of linear dimension n+1 carrying a nondegenerate
symmetric form.  ``spherical`` means positive definite, ``hyperbolic`` means
signature (1, n).  A *subspace* restricts the form nondegenerately and keeps
the full negative part of the signature; an *angular* subspace restricts it
positive definitely.  Throughout, ``dim`` of a subspace is its geometric
dimension (linear dimension minus one).

All values are immutable after construction; matrices are tuples of tuples of
``fractions.Fraction``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DegenerateForm,
    DegenerateSpan,
    InputError,
    NotNested,
    SignatureMismatch,
)

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


# ---------------------------------------------------------------------------
# rational matrix plumbing


def frac(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise InputError(f"not a rational value: {x!r}")


def vec(entries: Iterable) -> Vec:
    return tuple(frac(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise InputError("ragged matrix")
    return m


def identity_mat(n: int) -> Mat:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a and b and len(a[0]) != len(b):
        raise InputError("matrix shape mismatch")
    bt = tuple(zip(*b)) if b else ()
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Mat, v: Vec) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a)) if a else ()


def mat_det(a: Mat) -> Fraction:
    n = len(a)
    rows = [list(r) for r in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def rref(a: Sequence[Sequence[Fraction]]) -> Mat:
    """Reduced row echelon form with zero rows dropped (canonical row space)."""
    rows = [list(vec(r)) for r in a]
    ncols = len(rows[0]) if rows else 0
    out: list[list[Fraction]] = []
    lead = 0
    for col in range(ncols):
        piv = next((r for r in range(lead, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[lead], rows[piv] = rows[piv], rows[lead]
        inv = 1 / rows[lead][col]
        rows[lead] = [x * inv for x in rows[lead]]
        for r in range(len(rows)):
            if r != lead and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[lead])]
        lead += 1
        if lead == len(rows):
            break
    for row in rows[:lead]:
        out.append(row)
    return tuple(tuple(r) for r in out)


def nullspace(a: Mat, ncols: int | None = None) -> Mat:
    """Basis (as rows, in RREF) of the right null space of ``a``."""
    if not a:
        n = ncols if ncols is not None else 0
        return identity_mat(n)
    n = len(a[0])
    r = rref(a)
    pivots = []
    for row in r:
        pivots.append(next(c for c in range(n) if row[c] != 0))
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(tuple(v))
    return rref(basis) if basis else ()


def row_space_contains(a: Mat, v: Vec) -> bool:
    if all(x == 0 for x in v):
        return True
    if not a:
        return False
    return len(rref(list(a) + [v])) == len(rref(a))


# ---------------------------------------------------------------------------
# signature


def signature(gram: Mat) -> tuple[int, int]:
    """Signature (n_minus, n_plus) of a nondegenerate symmetric matrix.

    Uses exact symmetric Gaussian (congruence) diagonalization, pivoting on
    the first nonzero diagonal entry and applying the hyperbolic-pair fix
    when the remaining diagonal vanishes.
    """
    n = len(gram)
    if any(len(r) != n for r in gram):
        raise InputError("gram matrix must be square")
    if transpose(gram) != gram:
        raise InputError("gram matrix must be symmetric")
    if n and mat_det(gram) == 0:
        raise DegenerateForm("gram matrix has determinant zero")
    g = [list(r) for r in gram]
    n_minus = n_plus = 0
    idx = list(range(n))

    def sym_clear(i):
        # clear row/column i against pivot g[i][i]
        for r in range(i + 1, n):
            if g[r][i] != 0:
                f = g[r][i] / g[i][i]
                for c in range(n):
                    g[r][c] -= f * g[i][c]
                for c in range(n):
                    g[c][r] -= f * g[c][i]

    i = 0
    while i < n:
        if g[i][i] == 0:
            piv = next((r for r in range(i + 1, n) if g[r][r] != 0), None)
            if piv is not None:
                # swap basis vectors i and piv
                g[i], g[piv] = g[piv], g[i]
                for row in g:
                    row[i], row[piv] = row[piv], row[i]
            else:
                # all-zero diagonal: find a hyperbolic pair g[i][j] != 0 and
                # replace e_i by e_i + e_j, creating a nonzero diagonal entry
                j = next(r for r in range(i + 1, n) if g[i][r] != 0)
                for c in range(n):
                    g[i][c] += g[j][c]
                for r in range(n):
                    g[r][i] += g[r][j]
        sym_clear(i)
        if g[i][i] > 0:
            n_plus += 1
        else:
            n_minus += 1
        i += 1
    del idx
    return (n_minus, n_plus)


# ---------------------------------------------------------------------------
# quadratic spaces


class QuadSpace:
    """A rational vector space with nondegenerate symmetric form.

    ``dim`` is the linear dimension n+1; ``geom_dim`` is the geometry
    dimension n.  ``flavor`` is 'spherical' (signature (0, n+1)) or
    'hyperbolic' (signature (1, n)).
    """

    __slots__ = ("dim", "gram", "flavor", "sig", "_hash")

    def __init__(self, gram, flavor: str):
        g = mat(gram)
        sig = signature(g)
        n = len(g)
        if flavor == "spherical":
            if sig != (0, n):
                raise SignatureMismatch(f"spherical form must be definite, got {sig}")
        elif flavor == "hyperbolic":
            if sig != (1, n - 1):
                raise SignatureMismatch(f"hyperbolic form must have signature (1,{n-1}), got {sig}")
        else:
            raise InputError(f"unknown flavor {flavor!r}")
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "flavor", flavor)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "_hash", hash((g, flavor)))

    def __setattr__(self, *a):
        raise AttributeError("QuadSpace is immutable")

    @property
    def geom_dim(self) -> int:
        return self.dim - 1

    @property
    def n_minus(self) -> int:
        return self.sig[0]

    def pairing(self, u: Vec, v: Vec) -> Fraction:
        return sum(x * y for x, y in zip(mat_vec(self.gram, u), v))

    def full_subspace(self) -> "Subspace":
        return span(identity_mat(self.dim), self, kind=None)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, QuadSpace)
            and self._hash == other._hash
            and self.gram == other.gram
            and self.flavor == other.flavor
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"QuadSpace({self.flavor}, dim={self.geom_dim})"

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "dim": self.geom_dim,
            "gram": [[str(x) for x in row] for row in self.gram],
        }

    @staticmethod
    def from_json(data: dict) -> "QuadSpace":
        try:
            gram = mat(data["gram"])
            flavor = data["flavor"]
        except (KeyError, TypeError) as e:
            raise InputError(f"bad geometry JSON: {e}") from e
        space = QuadSpace(gram, flavor)
        if "dim" in data and space.geom_dim != int(data["dim"]):
            raise InputError("geometry JSON dim does not match gram size")
        return space


def spherical(n: int) -> QuadSpace:
    """The standard spherical geometry S^n (positive definite form)."""
    return QuadSpace(identity_mat(n + 1), "spherical")


def hyperbolic(n: int) -> QuadSpace:
    """The standard hyperbolic geometry H^n with form -x_0^2 + x_1^2 + ..."""
    g = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    g[0][0] = Fraction(-1)
    for i in range(1, n + 1):
        g[i][i] = Fraction(1)
    return QuadSpace(g, "hyperbolic")


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A nondegenerate subspace in canonical (RREF basis) form.

    ``kind`` is 'subspace' when the restricted form keeps the ambient
    negative index, 'angular' when the restriction is positive definite.
    For spherical geometries the two coincide and 'subspace' is used.
    ``dim`` is the geometric dimension: (number of basis rows) - 1.
    The zero space (empty basis) is allowed as a degenerate bookkeeping
    value with dim -1 and kind 'angular'.
    """

    __slots__ = ("ambient", "basis", "kind", "_hash")

    def __init__(self, ambient: QuadSpace, basis: Mat, kind: str):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_hash", hash(basis))

    def __setattr__(self, *a):
        raise AttributeError("Subspace is immutable")

    @property
    def lin_dim(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    def restricted_gram(self) -> Mat:
        b = self.basis
        return mat_mul(mat_mul(b, self.ambient.gram), transpose(b))

    def restricted_signature(self) -> tuple[int, int]:
        if not self.basis:
            return (0, 0)
        return signature(self.restricted_gram())

    def contains(self, other: "Subspace") -> bool:
        return all(row_space_contains(self.basis, v) for v in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __lt__(self, other: "Subspace") -> bool:
        return other.contains(self) and self.basis != other.basis

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Subspace)
            and self._hash == other._hash
            and self.basis == other.basis
            and self.ambient == other.ambient
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (len(self.basis), self.basis)

    def __repr__(self):
        rows = ",".join("(" + ",".join(str(x) for x in r) + ")" for r in self.basis)
        return f"<{self.kind} dim={self.dim} [{rows}]>"


def _derive_kind(ambient: QuadSpace, m_minus: int) -> str:
    if m_minus == ambient.n_minus:
        return "subspace"
    if m_minus == 0:
        return "angular"
    raise SignatureMismatch(
        f"restricted form has negative index {m_minus}, ambient has {ambient.n_minus}"
    )


def span(vectors: Iterable[Iterable], ambient: QuadSpace, kind: str | None = None) -> Subspace:
    """Canonical subspace spanned by ``vectors``.

    Raises DegenerateSpan if the restricted form is degenerate and
    SignatureMismatch if the signature does not fit the requested kind
    (kind=None derives the kind from the signature).
    """
    rows = [vec(v) for v in vectors]
    for r in rows:
        if len(r) != ambient.dim:
            raise InputError("vector length does not match ambient dimension")
    basis = rref(rows)
    if not basis:
        return Subspace(ambient, (), "angular")
    sub = Subspace(ambient, basis, "angular")
    g = sub.restricted_gram()
    if mat_det(g) == 0:
        raise DegenerateSpan(f"span of {rows} is degenerate")
    m_minus, _ = signature(g)
    derived = _derive_kind(ambient, m_minus)
    if kind is not None and kind != derived:
        if kind == "angular" and derived == "subspace" and ambient.n_minus == 0:
            derived = "angular"
        else:
            raise SignatureMismatch(
                f"requested kind {kind!r} but restriction has negative index {m_minus}"
            )
    return Subspace(ambient, basis, derived)


def orth_complement(u: Subspace) -> Subspace:
    """The orthogonal complement of ``u`` inside its ambient space."""
    amb = u.ambient
    if not u.basis:
        return amb.full_subspace()
    pairing_rows = mat_mul(u.basis, amb.gram)
    basis = nullspace(pairing_rows, amb.dim)
    return span(basis, amb) if basis else Subspace(amb, (), "angular")


def intersect(u: Subspace, v: Subspace) -> Mat:
    """Basis (RREF rows) of the plain linear intersection of two subspaces."""
    perp_rows = list(nullspace(u.basis, u.ambient.dim)) + list(
        nullspace(v.basis, v.ambient.dim)
    )
    # intersection = nullspace of the combined annihilator conditions: a
    # vector is in U iff it pairs to zero with U's (euclidean) annihilator
    return nullspace(mat(perp_rows), u.ambient.dim) if perp_rows else identity_mat(u.ambient.dim)


def project(u: Subspace, v: Subspace) -> Subspace:
    """pr_{U^perp} V = V intersect U^perp, for nested subspaces U <= V."""
    if not v.contains(u):
        raise NotNested("project(U, V) requires U to be a subspace of V")
    if u.basis == v.basis:
        return Subspace(u.ambient, (), "angular")
    uperp = orth_complement(u)
    basis = intersect(v, uperp)
    return span(basis, u.ambient)


def direct_sum(u: Subspace, v: Subspace) -> Subspace:
    """Span of U + V (orthogonality is the caller's concern)."""
    return span(list(u.basis) + list(v.basis), u.ambient)


def are_orthogonal(u: Subspace, v: Subspace) -> bool:
    return all(
        u.ambient.pairing(a, b) == 0 for a in u.basis for b in v.basis
    )


# ---------------------------------------------------------------------------
# isometries


class Isometry:
    """An exact isometry of a quadratic space, with its determinant sign."""

    __slots__ = ("space", "matrix", "det_sign")

    def __init__(self, matrix, space: QuadSpace):
        m = mat(matrix)
        if len(m) != space.dim or any(len(r) != space.dim for r in m):
            raise InputError("isometry matrix has wrong shape")
        if mat_mul(mat_mul(transpose(m), space.gram), m) != space.gram:
            raise InputError("matrix does not preserve the form")
        d = mat_det(m)
        if d not in (1, -1):
            raise InputError("isometry determinant must be +-1")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "det_sign", 1 if d == 1 else -1)

    def __setattr__(self, *a):
        raise AttributeError("Isometry is immutable")

    def __mul__(self, other: "Isometry") -> "Isometry":
        return Isometry(mat_mul(self.matrix, other.matrix), self.space)

    def inverse(self) -> "Isometry":
        # M^-1 = G^-1 M^T G; cheaper to invert via the form
        gram = self.space.gram
        ginv = _invert(gram)
        return Isometry(mat_mul(mat_mul(ginv, transpose(self.matrix)), gram), self.space)

    def apply_vec(self, v: Vec) -> Vec:
        return mat_vec(self.matrix, v)

    def apply(self, sub: Subspace) -> Subspace:
        rows = [self.apply_vec(r) for r in sub.basis]
        return span(rows, sub.ambient) if rows else sub

    def is_identity(self) -> bool:
        return self.matrix == identity_mat(self.space.dim)

    def __eq__(self, other):
        return isinstance(other, Isometry) and self.matrix == other.matrix and self.space == other.space

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Isometry({self.matrix}, det={self.det_sign})"


def _invert(a: Mat) -> Mat:
    n = len(a)
    rows = [list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, r in enumerate(a)]
    full = rref(rows)
    if len(full) != n:
        raise DegenerateForm("matrix not invertible")
    return tuple(tuple(r[n:]) for r in full)


def is_isometry(matrix, space: QuadSpace) -> bool:
    """True iff M^T G M = G exactly."""
    try:
        Isometry(matrix, space)
        return True
    except InputError:
        return False


def identity_isometry(space: QuadSpace) -> Isometry:
    return Isometry(identity_mat(space.dim), space)


# ---------------------------------------------------------------------------
# JSON plumbing


def load_geometry(path: str) -> QuadSpace:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    return QuadSpace.from_json(data)
