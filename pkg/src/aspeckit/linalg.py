"""Dense exact linear algebra over the scalar fields of :mod:`aspeckit.scalars`.

Vectors are tuples of field elements.  Subspaces are kept in reduced row
echelon form with leading entries equal to one, so two subspaces are equal
exactly when their bases are equal.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import SizeMismatch, Singular
from .scalars import Field


class Mat:
    """An immutable dense matrix with entries in ``field``."""

    __slots__ = ("data", "field", "nrows", "ncols")

    def __init__(self, data, field: Field, ncols: int | None = None):
        rows = tuple(tuple(field(x) for x in row) for row in data)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise SizeMismatch("ragged matrix rows")
        self.data = rows
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows, field, ncols):
        m = object.__new__(cls)
        m.data = rows
        m.field = field
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def identity(cls, n: int, field: Field) -> "Mat":
        one, zero = field.one, field.zero
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), field, n)

    @classmethod
    def zeros(cls, r: int, c: int, field: Field) -> "Mat":
        zero = field.zero
        return cls._raw(tuple((zero,) * c for _ in range(r)), field, c)

    @classmethod
    def diag(cls, entries, field: Field) -> "Mat":
        entries = [field(e) for e in entries]
        n = len(entries)
        zero = field.zero
        return cls._raw(tuple(tuple(entries[i] if i == j else zero for j in range(n)) for i in range(n)), field, n)

    @classmethod
    def from_flat(cls, vec: Sequence, nrows: int, ncols: int, field: Field) -> "Mat":
        vec = tuple(vec)
        return cls._raw(tuple(vec[i * ncols:(i + 1) * ncols] for i in range(nrows)), field, ncols)

    @classmethod
    def unit(cls, i: int, j: int, n: int, field: Field) -> "Mat":
        """The matrix unit E_ij (0-based)."""
        one, zero = field.one, field.zero
        return cls._raw(tuple(tuple(one if (a, b) == (i, j) else zero for b in range(n)) for a in range(n)),
                        field, n)

    @classmethod
    def block_diag(cls, blocks: Sequence["Mat"], field: Field) -> "Mat":
        n = sum(b.nrows for b in blocks)
        zero = field.zero
        rows = []
        offset = 0
        for b in blocks:
            for r in b.data:
                rows.append((zero,) * offset + r + (zero,) * (n - offset - b.ncols))
            offset += b.ncols
        return cls._raw(tuple(rows), field, n)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def flat(self) -> tuple:
        return tuple(x for row in self.data for x in row)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise SizeMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
                        self.field, self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
                        self.field, self.ncols)

    def __neg__(self) -> "Mat":
        return Mat._raw(tuple(tuple(-a for a in r) for r in self.data), self.field, self.ncols)

    def scale(self, c) -> "Mat":
        c = self.field(c)
        return Mat._raw(tuple(tuple(c * a for a in r) for r in self.data), self.field, self.ncols)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.data)) if other.nrows else [()] * other.ncols
        zero = self.field.zero
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for col in cols:
                s = zero
                for k, a in nz:
                    b = col[k]
                    if b:
                        s = s + a * b
                row.append(s)
            out.append(tuple(row))
        return Mat._raw(tuple(out), self.field, other.ncols)

    @property
    def T(self) -> "Mat":
        return Mat._raw(tuple(zip(*self.data)) if self.nrows else tuple(() for _ in range(self.ncols)),
                        self.field, self.nrows)

    def map(self, f, field: Field | None = None) -> "Mat":
        field = field or self.field
        return Mat(((f(x) for x in r) for r in self.data), field, self.ncols)

    def over(self, field: Field) -> "Mat":
        return Mat(self.data, field, self.ncols)

    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    def trace(self):
        s = self.field.zero
        for i in range(min(self.nrows, self.ncols)):
            s = s + self.data[i][i]
        return s

    def block(self, r0: int, c0: int, nr: int, nc: int) -> "Mat":
        return Mat._raw(tuple(r[c0:c0 + nc] for r in self.data[r0:r0 + nr]), self.field, nc)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def to_strings(self):
        return [[self.field.format(x) for x in r] for r in self.data]

    def __repr__(self):
        return f"Mat({self.to_strings()}, {self.field})"


def vec_mat(v: Sequence, m: Mat) -> tuple:
    """Row vector times matrix."""
    zero = m.field.zero
    out = [zero] * m.ncols
    for a, row in zip(v, m.data):
        if a:
            for j, b in enumerate(row):
                if b:
                    out[j] = out[j] + a * b
    return tuple(out)


def is_zero_vector(v) -> bool:
    return not any(x for x in v)


class Echelon:
    """Incrementally maintained reduced row echelon basis (mutable)."""

    def __init__(self, n: int, field: Field):
        self.n = n
        self.field = field
        self.rows: dict[int, list] = {}

    def reduce(self, v) -> list:
        v = list(v)
        for p, row in self.rows.items():
            c = v[p]
            if c:
                for j in range(p, self.n):
                    if row[j]:
                        v[j] = v[j] - c * row[j]
        return v

    def add(self, v) -> bool:
        r = self.reduce(v)
        q = next((j for j, x in enumerate(r) if x), None)
        if q is None:
            return False
        inv = self.field.inv(r[q])
        r = [x * inv if x else x for x in r]
        for row in self.rows.values():
            c = row[q]
            if c:
                for j in range(q, self.n):
                    if r[j]:
                        row[j] = row[j] - c * r[j]
        self.rows[q] = r
        return True

    def __len__(self):
        return len(self.rows)

    def subspace(self) -> "Subspace":
        pivots = tuple(sorted(self.rows))
        return Subspace(self.n, self.field, tuple(tuple(self.rows[p]) for p in pivots), pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``field**ambient_dim`` with a canonical RREF basis."""

    ambient_dim: int
    field: Field
    basis: tuple
    pivots: tuple

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int, field: Field) -> "Subspace":
        e = Echelon(ambient_dim, field)
        for v in vectors:
            if len(v) != ambient_dim:
                raise SizeMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            e.add(v)
        return e.subspace()

    @classmethod
    def zero(cls, ambient_dim: int, field: Field) -> "Subspace":
        return cls(ambient_dim, field, (), ())

    @classmethod
    def full(cls, ambient_dim: int, field: Field) -> "Subspace":
        return cls.span(Mat.identity(ambient_dim, field).data, ambient_dim, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def echelon(self) -> Echelon:
        e = Echelon(self.ambient_dim, self.field)
        for p, row in zip(self.pivots, self.basis):
            e.rows[p] = list(row)
        return e

    def reduce(self, v) -> tuple:
        return tuple(self.echelon().reduce(v))

    def contains(self, v) -> bool:
        return is_zero_vector(self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        e = self.echelon()
        return all(is_zero_vector(e.reduce(v)) for v in other.basis)

    def coordinates(self, v) -> tuple:
        """Coordinates of ``v`` in the echelon basis; ``v`` must lie in the span."""
        coords = tuple(v[p] for p in self.pivots)
        zero = self.field.zero
        recon = [zero] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if c:
                for j, x in enumerate(row):
                    if x:
                        recon[j] = recon[j] + c * x
        if len(v) != self.ambient_dim or any(a != b for a, b in zip(recon, v)):
            raise ValueError("vector is not in the subspace")
        return coords

    def combination(self, coords: Sequence) -> tuple:
        zero = self.field.zero
        out = [zero] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if c:
                for j, x in enumerate(row):
                    if x:
                        out[j] = out[j] + c * x
        return tuple(out)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient_dim, self.field)

    def intersection(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient_dim, self.field)
        e = other.echelon()
        residues = [e.reduce(u) for u in self.basis]
        # combinations of self.basis whose residue modulo other vanishes
        k = left_nullspace(Mat(residues, self.field, self.ambient_dim))
        return Subspace.span((self.combination(c) for c in k.basis), self.ambient_dim, self.field)

    def complement_basis(self, inner: "Subspace") -> tuple:
        """Vectors of this basis that extend ``inner`` to a basis of this space, in basis order."""
        e = inner.echelon()
        picked = []
        for v in self.basis:
            if e.add(v):
                picked.append(v)
        return tuple(picked)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))


def rref_rank(m: Mat) -> tuple[Mat, int]:
    """Reduced row echelon form and rank."""
    rows = [list(r) for r in m.data]
    field = m.field
    rank = 0
    for col in range(m.ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][col])
        prow = [x * inv if x else x for x in rows[rank]]
        rows[rank] = prow
        for i in range(len(rows)):
            if i != rank:
                c = rows[i][col]
                if c:
                    r = rows[i]
                    for j in range(col, m.ncols):
                        if prow[j]:
                            r[j] = r[j] - c * prow[j]
        rank += 1
        if rank == len(rows):
            break
    return Mat._raw(tuple(tuple(r) for r in rows), field, m.ncols), rank


def rank(m: Mat) -> int:
    return rref_rank(m)[1]


def nullspace(m: Mat) -> Subspace:
    """Right kernel ``{x : m x = 0}`` as a subspace of column vectors."""
    r, rk = rref_rank(m)
    field = m.field
    pivots = []
    for i in range(rk):
        pivots.append(next(j for j, x in enumerate(r.data[i]) if x))
    pivset = set(pivots)
    vecs = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [field.zero] * m.ncols
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = -r.data[i][f]
        vecs.append(v)
    return Subspace.span(vecs, m.ncols, field)


def left_nullspace(m: Mat) -> Subspace:
    """Row vectors ``v`` with ``v m = 0``."""
    return nullspace(m.T)


def row_space(m: Mat) -> Subspace:
    return Subspace.span(m.data, m.ncols, m.field)


def det(m: Mat):
    if not m.is_square():
        raise SizeMismatch("determinant of a non-square matrix")
    rows = [list(r) for r in m.data]
    n = m.nrows
    field = m.field
    d = field.one
    for col in range(n):
        piv = next((i for i in range(col, n) if rows[i][col]), None)
        if piv is None:
            return field.zero
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            d = -d
        p = rows[col][col]
        d = d * p
        inv = field.inv(p)
        for i in range(col + 1, n):
            c = rows[i][col]
            if c:
                f = c * inv
                for j in range(col, n):
                    if rows[col][j]:
                        rows[i][j] = rows[i][j] - f * rows[col][j]
    return d


def is_invertible(m: Mat) -> bool:
    return m.is_square() and rank(m) == m.nrows


def inverse(m: Mat) -> Mat:
    if not m.is_square():
        raise SizeMismatch("inverse of a non-square matrix")
    n = m.nrows
    field = m.field
    aug = Mat._raw(tuple(r + e for r, e in zip(m.data, Mat.identity(n, field).data)), field, 2 * n)
    r, _ = rref_rank(aug)
    for i in range(n):
        if r.data[i][i] != field.one or any(r.data[i][j] for j in range(n) if j != i):
            raise Singular("matrix is not invertible")
    return Mat._raw(tuple(row[n:] for row in r.data), field, n)


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``particular + kernel``; ``particular`` is None when inconsistent."""

    particular: tuple | None
    kernel: Subspace

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_linear(rows: Sequence[Sequence], rhs: Sequence, field: Field, ncols: int | None = None) -> AffineSolution:
    """Solve ``rows @ x = rhs``."""
    if ncols is None:
        if not rows:
            raise SizeMismatch("number of unknowns required for an empty system")
        ncols = len(rows[0])
    if len(rows) != len(rhs):
        raise SizeMismatch("row count and right-hand side length differ")
    a = Mat(rows, field, ncols)
    kernel = nullspace(a)
    aug = Mat([tuple(r) + (b,) for r, b in zip(a.data, rhs)], field, ncols + 1)
    r, rk = rref_rank(aug)
    zero = field.zero
    x = [zero] * ncols
    for i in range(rk):
        p = next(j for j, v in enumerate(r.data[i]) if v)
        if p == ncols:
            return AffineSolution(None, kernel)
        x[p] = r.data[i][ncols]
    return AffineSolution(tuple(x), kernel)


def spin_vectors(seeds: Iterable, mats: Sequence[Mat], n: int, field: Field) -> Subspace:
    """Smallest subspace containing ``seeds`` and stable under right multiplication by ``mats``."""
    e = Echelon(n, field)
    queue = []
    for v in seeds:
        if e.add(v):
            queue.append(tuple(v))
    while queue:
        v = queue.pop()
        for m in mats:
            w = vec_mat(v, m)
            if e.add(w):
                queue.append(w)
        if len(e) == n:
            break
    return e.subspace()


@dataclass(frozen=True)
class SubalgebraBasis:
    """A subalgebra of d x d matrices, stored as a subspace of flattened matrices."""

    d: int
    basis: Subspace
    unital: bool

    @property
    def field(self) -> Field:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.dim

    def matrices(self) -> list[Mat]:
        return [Mat.from_flat(v, self.d, self.d, self.field) for v in self.basis.basis]

    def contains(self, m: Mat) -> bool:
        return self.basis.contains(m.flat())

    def coordinates(self, m: Mat) -> tuple:
        return self.basis.coordinates(m.flat())

    def element(self, coords) -> Mat:
        return Mat.from_flat(self.basis.combination(coords), self.d, self.d, self.field)

    def is_closed(self) -> bool:
        mats = self.matrices()
        e = self.basis.echelon()
        return all(is_zero_vector(e.reduce((a @ b).flat())) for a in mats for b in mats)


def product_closure(gens: Sequence[Mat], include_identity: bool = True, d: int | None = None,
                    field: Field | None = None) -> SubalgebraBasis:
    """Smallest (unital) subalgebra of d x d matrices containing ``gens``."""
    gens = list(gens)
    if d is None:
        d = gens[0].nrows
    if field is None:
        field = gens[0].field
    for g in gens:
        if g.shape != (d, d):
            raise SizeMismatch(f"generator of shape {g.shape}, expected {(d, d)}")
    e = Echelon(d * d, field)
    queue: list[Mat] = []
    seeds = ([Mat.identity(d, field)] if include_identity else []) + gens
    for g in seeds:
        if e.add(g.flat()):
            queue.append(g)
    while queue and len(e) < d * d:
        b = queue.pop()
        for g in gens:
            for prod in (b @ g, g @ b):
                if e.add(prod.flat()):
                    queue.append(prod)
    return SubalgebraBasis(d, e.subspace(), include_identity)


@dataclass(frozen=True)
class SpanSearch:
    """Outcome of :func:`invertible_in_span`.

    ``matrix`` is an invertible element or None.  ``complete`` is True when a
    None answer is a proof that the span has no invertible element.
    """

    matrix: Mat | None
    complete: bool

    @property
    def found(self) -> bool:
        return self.matrix is not None


def invertible_in_span(space: Subspace, d: int, *, grid_limit: int = 200_000,
                       exhaustive_limit: int = 200_000, random_trials: int = 16,
                       seed: int = 0) -> SpanSearch:
    """Search the span of flattened d x d matrices for an invertible element.

    In characteristic 0 det(sum c_k B_k) has degree at most d in each c_k, so
    if it is not identically zero it is nonzero somewhere on {0..d}^dim.
    """
    field = space.field
    mats = [Mat.from_flat(v, d, d, field) for v in space.basis]
    if not mats:
        return SpanSearch(None, True)

    def combo(coeffs):
        m = Mat.zeros(d, d, field)
        for c, b in zip(coeffs, mats):
            if c:
                m = m + b.scale(c)
        return m

    for b in mats:
        if is_invertible(b):
            return SpanSearch(b, True)

    rng = random.Random(seed)
    k = len(mats)
    if field.characteristic == 0:
        for _ in range(random_trials):
            m = combo([field(rng.randint(-997, 997)) for _ in range(k)])
            if is_invertible(m):
                return SpanSearch(m, True)
        if (d + 1) ** k > grid_limit:
            return SpanSearch(None, False)
        for coeffs in itertools.product(range(d + 1), repeat=k):
            m = combo([field(c) for c in coeffs])
            if is_invertible(m):
                return SpanSearch(m, True)
        return SpanSearch(None, True)

    q = field.characteristic
    if q ** k <= exhaustive_limit:
        for coeffs in itertools.product(range(q), repeat=k):
            m = combo([field(c) for c in coeffs])
            if is_invertible(m):
                return SpanSearch(m, True)
        return SpanSearch(None, True)
    for _ in range(max(random_trials, 64)):
        m = combo([field(rng.randrange(q)) for _ in range(k)])
        if is_invertible(m):
            return SpanSearch(m, True)
    return SpanSearch(None, False)


def charpoly(m: Mat) -> list:
    """Characteristic polynomial det(tI - m), coefficients from constant term up.

    Reduces to upper Hessenberg form by similarity, then expands along the
    subdiagonal.
    """
    if not m.is_square():
        raise SizeMismatch("characteristic polynomial of a non-square matrix")
    n = m.nrows
    field = m.field
    h = [list(r) for r in m.data]
    for k in range(1, n - 1):
        piv = next((i for i in range(k, n) if h[i][k - 1]), None)
        if piv is None:
            continue
        if piv != k:
            h[k], h[piv] = h[piv], h[k]
            for r in h:
                r[k], r[piv] = r[piv], r[k]
        inv = field.inv(h[k][k - 1])
        for j in range(k + 1, n):
            u = h[j][k - 1] * inv
            if u:
                for c in range(n):
                    h[j][c] = h[j][c] - u * h[k][c]
                for r in h:
                    r[k] = r[k] + u * r[j]
    zero, one = field.zero, field.one

    def sub(p, q):
        size = max(len(p), len(q))
        p = p + [zero] * (size - len(p))
        q = q + [zero] * (size - len(q))
        return [a - b for a, b in zip(p, q)]

    polys = [[one]]
    for mi in range(1, n + 1):
        a = h[mi - 1][mi - 1]
        prev = polys[mi - 1]
        p = sub([zero] + prev, [a * c for c in prev])
        t = one
        for i in range(mi - 1, 0, -1):
            t = t * h[i][i - 1]
            coeff = t * h[i - 1][mi - 1]
            if coeff:
                p = sub(p, [coeff * c for c in polys[i - 1]])
        polys.append(p)
    return polys[n]


def poly_at_matrix(coeffs: Sequence, m: Mat) -> Mat:
    """Evaluate a univariate polynomial (constant term first) at a square matrix."""
    n = m.nrows
    field = m.field
    result = Mat.zeros(n, n, field)
    ident = Mat.identity(n, field)
    for c in reversed(list(coeffs)):
        result = result @ m + ident.scale(c)
    return result
