"""Exact integer linear algebra: Smith normal form, lattice kernels, solving.

All arithmetic is on Python ints, so nothing overflows.  Matrices with zero
rows or zero columns are legal and behave like maps to/from the zero module.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence


class IntMatrix:
    """Immutable dense integer matrix stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable[int] = ()):
        entries = tuple(int(x) for x in entries)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        self.rows = rows
        self.cols = cols
        self._data = entries

    # construction -----------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count is ambiguous for an empty row list")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        cols = [list(c) for c in cols]
        if rows is None:
            if not cols:
                raise ValueError("row count is ambiguous for an empty column list")
            rows = len(cols[0])
        for c in cols:
            if len(c) != rows:
                raise ValueError("ragged columns")
        return cls(len(cols), rows, (x for c in cols for x in c)).T

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: Optional[int] = None,
                 cols: Optional[int] = None) -> "IntMatrix":
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        data = [0] * (rows * cols)
        for i, d in enumerate(diag):
            data[i * cols + i] = d
        return cls(rows, cols, data)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.tolist()):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(out, cols)

    # access -----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._data[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self._data[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list[int]:
        return list(self._data[j::self.cols]) if self.cols else []

    def tolist(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         (self._data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix.from_rows([a + b for a, b in zip(self.tolist(), other.tolist())],
                                   self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return IntMatrix(self.rows + other.rows, self.cols, self._data + other._data)

    def select_cols(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_cols([self.col(j) for j in idx], self.rows)

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.row(i) for i in idx], self.cols)

    def is_zero(self) -> bool:
        return not any(self._data)

    # arithmetic -------------------------------------------------------------

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            out = []
            for i in range(self.rows):
                r = self._data[i * self.cols:(i + 1) * self.cols]
                nz = [(k, x) for k, x in enumerate(r) if x]
                out.extend(sum(x * c[k] for k, x in nz) for c in ocols)
            return IntMatrix(self.rows, other.cols, out)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError(f"cannot multiply {self.shape} by vector of length {len(vec)}")
        nz = [(k, x) for k, x in enumerate(vec) if x]
        c = self.cols
        d = self._data
        return [sum(d[i * c + k] * x for k, x in nz) for i in range(self.rows)]

    def _check_same(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        return IntMatrix(self.rows, self.cols, (a + b for a, b in zip(self._data, other._data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        return IntMatrix(self.rows, self.cols, (a - b for a, b in zip(self._data, other._data)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (-a for a in self._data))

    def __mul__(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (k * a for a in self._data))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}, {self.cols}, {self.tolist()})"

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ m @ right`` is the diagonal matrix with diagonal ``d``."""

    d: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x)


def _rounded_quotient(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def _smith(a: list[list[int]], nrows: int, ncols: int, want_left: bool, want_right: bool):
    """Diagonalise ``a`` in place.  Returns (d, left, right) as lists of rows."""
    left = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if want_left else None
    right = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if want_right else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if left is not None:
            left[i], left[k] = left[k], left[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        if right is not None:
            for r in right:
                r[j], r[k] = r[k], r[j]

    def add_row(src, dst, q, start):
        # row[dst] -= q * row[src]
        rs, rd = a[src], a[dst]
        for j in range(start, ncols):
            if rs[j]:
                rd[j] -= q * rs[j]
        if left is not None:
            ls, ld = left[src], left[dst]
            for j in range(nrows):
                if ls[j]:
                    ld[j] -= q * ls[j]

    def add_col(src, dst, q, start):
        # col[dst] -= q * col[src]
        for i in range(start, nrows):
            r = a[i]
            if r[src]:
                r[dst] -= q * r[src]
        if right is not None:
            for r in right:
                if r[src]:
                    r[dst] -= q * r[src]

    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        best = None
        for i in range(t, nrows):
            r = a[i]
            for j in range(t, ncols):
                x = r[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = a[t][t]
            moved = False
            for i in range(t + 1, nrows):
                x = a[i][t]
                if x:
                    add_row(t, i, _rounded_quotient(x, p), t)
                    if a[i][t]:
                        moved = True
            for j in range(t + 1, ncols):
                x = a[t][j]
                if x:
                    add_col(t, j, _rounded_quotient(x, p), t)
                    if a[t][j]:
                        moved = True
            if moved:
                # a leftover remainder is smaller than the pivot: bring it in
                best = None
                for i in range(t, nrows):
                    x = a[i][t]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, t)
                for j in range(t + 1, ncols):
                    x = a[t][j]
                    if x and abs(x) < best[0]:
                        best = (abs(x), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            # pivot row/column are clean; enforce divisibility of the rest
            bad = None
            for i in range(t + 1, nrows):
                r = a[i]
                for j in range(t + 1, ncols):
                    if r[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, -1, t)
        if a[t][t] < 0:
            a[t][t] = -a[t][t]
            if left is not None:
                left[t] = [-x for x in left[t]]
        t += 1
    d = [a[i][i] for i in range(limit)]
    return d, left, right


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms on both sides."""
    d, left, right = _smith(m.tolist(), m.rows, m.cols, True, True)
    return SmithDecomposition(
        tuple(d),
        IntMatrix.from_rows(left, m.rows),
        IntMatrix.from_rows(right, m.cols),
    )


def smith_diagonal(m: IntMatrix) -> tuple[int, ...]:
    """Only the Smith diagonal; skips the transform bookkeeping."""
    return tuple(_smith(m.tolist(), m.rows, m.cols, False, False)[0])


def smith_right(rows: list[list[int]], ncols: int) -> tuple[list[int], IntMatrix]:
    """Smith diagonal and right transform of a matrix given as a row list.

    Tall inputs are first collapsed to a row-lattice basis, which leaves the
    row space (hence the diagonal and a valid right transform) unchanged.
    """
    if len(rows) > ncols:
        rows = row_lattice_basis(rows, ncols)
    d, _, right = _smith([list(r) for r in rows], len(rows), ncols, False, True)
    return d, IntMatrix.from_rows(right, ncols)


def row_lattice_basis(vectors: Iterable[Sequence[int]], ncols: int) -> list[list[int]]:
    """Echelon basis of the lattice spanned by ``vectors`` in Z^ncols.

    Vectors are inserted one at a time.  Once the lattice has full rank its
    determinant D satisfies D*Z^n within the lattice, so every later vector is
    reduced mod D, which keeps entries bounded on long relation lists.
    """
    basis: dict[int, list[int]] = {}
    modulus = 0

    def reduce_mod(v):
        return [x % modulus for x in v]

    for vec in vectors:
        v = list(vec)
        if modulus:
            v = reduce_mod(v)
        j = 0
        while True:
            while j < ncols and v[j] == 0:
                j += 1
            if j == ncols:
                break
            b = basis.get(j)
            if b is None:
                if v[j] < 0:
                    v = [-x for x in v]
                basis[j] = v
                break
            x, p = v[j], b[j]
            if x % p == 0:
                q = x // p
                v = [vi - q * bi for vi, bi in zip(v, b)]
                continue
            g, s, t = _xgcd(p, x)
            newb = [s * bi + t * vi for bi, vi in zip(b, v)]
            v = [(p // g) * vi - (x // g) * bi for vi, bi in zip(v, b)]
            if modulus:
                newb = reduce_mod(newb)
                newb[j] = g
                v = reduce_mod(v)
            basis[j] = newb
        if not modulus and len(basis) == ncols:
            det = 1
            for k in range(ncols):
                det *= basis[k][k]
            modulus = abs(det)
            if modulus == 1:
                return [[int(i == k) for k in range(ncols)] for i in range(ncols)]
            for k in range(ncols):
                row = reduce_mod(basis[k])
                row[k] = basis[k][k]
                basis[k] = row
    out = [basis[j] for j in sorted(basis)]
    if modulus:
        # D*e_k is in the lattice; add it back so the span is exact after reduction
        out.extend([modulus * int(i == k) for k in range(ncols)] for i in range(ncols))
        return _echelon_small(out, ncols)
    return out


def _echelon_small(vectors: list[list[int]], ncols: int) -> list[list[int]]:
    basis: dict[int, list[int]] = {}
    for vec in vectors:
        v = list(vec)
        j = 0
        while True:
            while j < ncols and v[j] == 0:
                j += 1
            if j == ncols:
                break
            b = basis.get(j)
            if b is None:
                basis[j] = v
                break
            x, p = v[j], b[j]
            g, s, t = _xgcd(p, x)
            basis[j] = [s * bi + t * vi for bi, vi in zip(b, v)]
            v = [(p // g) * vi - (x // g) * bi for vi, bi in zip(v, b)]
    return [basis[j] for j in sorted(basis)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : m x = 0}."""
    d, _, right = _smith(m.tolist(), m.rows, m.cols, False, True)
    r = sum(1 for x in d if x)
    return IntMatrix.from_rows([row[r:] for row in right], m.cols - r)


def solve(m: IntMatrix, b: Sequence[int]) -> Optional[list[int]]:
    """An integer solution of ``m x = b``, or None when there is none."""
    return solve_many(m, [b])[0]


def solve_many(m: IntMatrix, bs: Iterable[Sequence[int]]) -> list[Optional[list[int]]]:
    """``solve`` for several right-hand sides, sharing one Smith decomposition."""
    bs = [list(b) for b in bs]
    for b in bs:
        if len(b) != m.rows:
            raise ValueError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    snf = smith_normal_form(m)
    return [_solve_with(snf, m.cols, b) for b in bs]


def _solve_with(snf: SmithDecomposition, ncols: int, b: list[int]) -> Optional[list[int]]:
    c = snf.left @ b
    y = [0] * ncols
    for i, ci in enumerate(c):
        di = snf.d[i] if i < len(snf.d) else 0
        if di == 0:
            if ci:
                return None
        else:
            if ci % di:
                return None
            y[i] = ci // di
    return snf.right @ y


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0
