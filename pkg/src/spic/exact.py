"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always reduced, positive denominator).
Elimination is done fraction-free on integer rows (Bareiss), with a single
normalisation pass at the end when a reduced echelon form is required.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import IrrationalSpectrum, NonCommuting, ShapeMismatch

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; pass a Fraction or 'p/q' string")
    return Fraction(x)


def scalar_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class QMatrix:
    """Immutable dense matrix over the rationals (row-major)."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        grid = tuple(tuple(as_scalar(x) for x in row) for row in entries)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        for row in grid:
            if len(row) != cols:
                raise ShapeMismatch("ragged matrix rows")
        self.rows = len(grid)
        self.cols = cols
        self.entries = grid
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def zero(cls, rows: int, cols: int | None = None) -> "QMatrix":
        cols = rows if cols is None else cols
        return cls([[ZERO] * cols for _ in range(rows)], cols)

    @classmethod
    def diag(cls, values: Sequence) -> "QMatrix":
        n = len(values)
        return cls([[as_scalar(values[i]) if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.entries))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(scalar_str(x) for x in row) for row in self.entries)
        return f"QMatrix([{body}])"

    def tolist(self):
        return [list(row) for row in self.entries]

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch("matrix shapes differ")
        return QMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch("matrix shapes differ")
        return QMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def __neg__(self):
        return QMatrix([[-a for a in r] for r in self.entries], self.cols)

    def scale(self, c) -> "QMatrix":
        c = as_scalar(c)
        return QMatrix([[c * a for a in r] for r in self.entries], self.cols)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch("inner dimensions differ")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for r in self.entries:
            out.append([sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in cols])
        return QMatrix(out, other.cols)

    def apply(self, v: Sequence[Fraction]) -> tuple:
        if len(v) != self.cols:
            raise ShapeMismatch("vector length differs from column count")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self.entries)

    def transpose(self) -> "QMatrix":
        return QMatrix(list(zip(*self.entries)) if self.rows else [], self.rows)

    def shifted(self, c) -> "QMatrix":
        """Return self - c*I."""
        c = as_scalar(c)
        return QMatrix(
            [[a - c if i == j else a for j, a in enumerate(r)] for i, r in enumerate(self.entries)], self.cols
        )

    def __pow__(self, k: int) -> "QMatrix":
        if not self.is_square:
            raise ShapeMismatch("power of a non-square matrix")
        result = QMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return all(not a for r in self.entries for a in r)

    def commutes_with(self, other: "QMatrix") -> bool:
        return self @ other == other @ self


# ---------------------------------------------------------------------------
# fraction-free elimination


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        if x.denominator != 1:
            den = lcm(den, x.denominator)
    return [x.numerator * (den // x.denominator) for x in row]


def bareiss_echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer matrix.

    Returns the transformed rows (nonzero rows first) and the pivot columns.
    Every division is exact: entries stay minors of the input.
    """
    rows = [list(r) for r in rows]
    m = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        piv = None
        best = None
        for i in range(r, m):
            v = rows[i][c]
            if v:
                size = abs(v)
                if best is None or size < best:
                    piv, best = i, size
                    if size == 1:
                        break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        p = prow[c]
        for i in range(r + 1, m):
            row = rows[i]
            a = row[c]
            if a:
                for j in range(c, ncols):
                    row[j] = (p * row[j] - a * prow[j]) // prev
            elif p != prev:
                for j in range(c, ncols):
                    if row[j]:
                        row[j] = (p * row[j]) // prev
        prev = p
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(vectors: Sequence[Sequence], ncols: int) -> tuple[list[tuple], list[int]]:
    """Reduced row echelon form; returns (nonzero rows as tuples, pivot columns)."""
    if not vectors:
        return [], []
    ints = [_integer_row([as_scalar(x) for x in v]) for v in vectors]
    ech, pivots = bareiss_echelon(ints, ncols)
    rank = len(pivots)
    rows = []
    for i in range(rank):
        row = ech[i]
        p = row[pivots[i]]
        rows.append([Fraction(x, p) if x else ZERO for x in row])
    for i in range(rank - 1, -1, -1):
        pc = pivots[i]
        for k in range(i):
            f = rows[k][pc]
            if f:
                rk, ri = rows[k], rows[i]
                for j in range(pc, ncols):
                    if ri[j]:
                        rk[j] -= f * ri[j]
    return [tuple(r) for r in rows], pivots


def rank(m: QMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = bareiss_echelon([_integer_row(r) for r in m.entries], m.cols)
    return len(pivots)


class Subspace:
    """Subspace of Q^d held as a canonical reduced-echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [tuple(as_scalar(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ShapeMismatch("vector length differs from ambient dimension")
        self.ambient_dim = ambient_dim
        self.basis, self.pivots = rref(vecs, ambient_dim)

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(d, [[ONE if i == j else ZERO for j in range(d)] for i in range(d)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, tuple(self.basis)))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def coordinates(self, v: Sequence) -> tuple:
        """Coordinates of v in the echelon basis; raises if v is not in the subspace."""
        coords = tuple(as_scalar(v[p]) for p in self.pivots)
        if self.combine(coords) != tuple(as_scalar(x) for x in v):
            raise ValueError("vector not in subspace")
        return coords

    def combine(self, coords: Sequence) -> tuple:
        out = [ZERO] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c:
                for j, x in enumerate(b):
                    if x:
                        out[j] += c * x
        return tuple(out)

    def contains(self, v: Sequence) -> bool:
        try:
            self.coordinates(v)
        except ValueError:
            return False
        return True

    def restrict(self, op: QMatrix) -> QMatrix:
        """Matrix of an operator leaving this subspace invariant, in echelon coordinates."""
        cols = []
        for b in self.basis:
            w = op.apply(b)
            cols.append(self.coordinates(w))
        return QMatrix([[cols[k][i] for k in range(len(cols))] for i in range(self.dim)], self.dim)

    def is_invariant(self, op: QMatrix) -> bool:
        return all(self.contains(op.apply(b)) for b in self.basis)


def kernel_basis(m: QMatrix) -> Subspace:
    """Right kernel of m as a canonical subspace of Q^cols."""
    n = m.cols
    if m.rows == 0:
        return Subspace.full(n)
    rows, pivots = rref(m.entries, n)
    pivset = set(pivots)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for r, p in zip(rows, pivots):
            if r[f]:
                v[p] = -r[f]
        vecs.append(v)
    return Subspace(n, vecs)


def _int_matrix(m: QMatrix) -> list[list[int]]:
    den = 1
    for r in m.entries:
        for x in r:
            if x.denominator != 1:
                den = lcm(den, x.denominator)
    return [[x.numerator * (den // x.denominator) for x in r] for r in m.entries]


def _int_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c) if x and y) for c in bt] for r in a]


def _int_kernel_dim_and_basis(rows: list[list[int]], n: int) -> Subspace:
    return kernel_basis(QMatrix([[Fraction(x) for x in r] for r in rows], n))


def generalized_kernel(b: QMatrix) -> Subspace:
    """ker b^d for a square matrix b (d = size), via stabilisation of kernel powers."""
    n = b.rows
    if n == 0:
        return Subspace(0)
    base = _int_matrix(b)
    power = base
    k = _int_kernel_dim_and_basis(power, n)
    while 0 < k.dim < n:
        power = _int_matmul(power, base)
        # keep entries small: the kernel only depends on the row space
        g = 0
        for r in power:
            for x in r:
                if x:
                    g = gcd(g, x)
        if g > 1:
            power = [[x // g for x in r] for r in power]
        k2 = _int_kernel_dim_and_basis(power, n)
        if k2.dim == k.dim:
            break
        k = k2
    return k


def _check_ops(ops: Sequence[QMatrix]) -> int:
    if not ops:
        raise ShapeMismatch("empty operator tuple")
    d = ops[0].rows
    for t in ops:
        if t.rows != d or t.cols != d:
            raise ShapeMismatch("operators must be square of equal size")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not ops[i].commutes_with(ops[j]):
                raise NonCommuting(f"T{i + 1} and T{j + 1} do not commute")
    return d


def _lift(space: Subspace, sub: Subspace) -> Subspace:
    """Embed a subspace given in echelon coordinates of `space` back into the ambient space."""
    return Subspace(space.ambient_dim, [space.combine(v) for v in sub.basis])


def joint_root_space(ops: Sequence[QMatrix], point: Sequence, *, check: bool = True) -> Subspace:
    """Intersection of the generalized kernels of T_i - point_i."""
    if len(point) != len(ops):
        raise ShapeMismatch("point length differs from number of operators")
    d = _check_ops(ops) if check else ops[0].rows
    space = Subspace.full(d)
    for t, c in zip(ops, point):
        if space.dim == 0:
            break
        restricted = space.restrict(t).shifted(c)
        space = _lift(space, generalized_kernel(restricted))
    return space


# ---------------------------------------------------------------------------
# characteristic polynomials and rational roots


def charpoly(m: QMatrix) -> list[Fraction]:
    """Coefficients of det(xI - m), lowest degree first (Faddeev-LeVerrier)."""
    n = m.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    mk = QMatrix.zero(n)
    ident = QMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - k + 1])
        prod = m @ mk
        tr = sum((prod[i, i] for i in range(n)), ZERO)
        coeffs[n - k] = -tr / k
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _horner(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    # synthetic division by (x - root), lowest degree first
    n = len(coeffs) - 1
    out = [ZERO] * n
    carry = ZERO
    for k in range(n, 0, -1):
        carry = coeffs[k] + carry * root if k != n else coeffs[k]
        out[k - 1] = carry
    return out


def rational_roots(coeffs: Sequence[Fraction]) -> tuple[dict[Fraction, int], int]:
    """Rational roots with multiplicities, plus the degree of the unsplit remainder."""
    coeffs = [as_scalar(c) for c in coeffs]
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    roots: dict[Fraction, int] = {}
    while len(coeffs) > 1 and not coeffs[0]:
        roots[ZERO] = roots.get(ZERO, 0) + 1
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return roots, 0
    ints = _integer_row(coeffs)
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    cands = set()
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    for c in sorted(cands):
        while len(coeffs) > 1 and not _horner(coeffs, c):
            roots[c] = roots.get(c, 0) + 1
            coeffs = _deflate(coeffs, c)
    return roots, len(coeffs) - 1


def eigenvalues(m: QMatrix, *, partial: bool = False) -> dict[Fraction, int]:
    roots, rest = rational_roots(charpoly(m))
    if rest and not partial:
        raise IrrationalSpectrum("characteristic polynomial does not split over the rationals")
    return roots


def rational_joint_spectrum(ops: Sequence[QMatrix], *, partial: bool = False) -> list[tuple[tuple, Subspace]]:
    """Joint eigenvalue points with their joint root spaces.

    Splits into generalized eigenspaces one operator at a time. With
    ``partial=True`` non-rational parts of the spectrum are silently dropped
    instead of raising IrrationalSpectrum.
    """
    d = _check_ops(ops)
    out: list[tuple[tuple, Subspace]] = []

    def split(space: Subspace, k: int, prefix: tuple):
        if k == len(ops):
            out.append((prefix, space))
            return
        restricted = space.restrict(ops[k])
        for val in sorted(eigenvalues(restricted, partial=partial)):
            sub = generalized_kernel(restricted.shifted(val))
            split(_lift(space, sub), k + 1, prefix + (val,))

    if d:
        split(Subspace.full(d), 0, ())
    out.sort(key=lambda item: item[0])
    return out
