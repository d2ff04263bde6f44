"""Dense exact linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`; vectors are tuples.
Nothing here mutates its arguments.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple
Matrix = list

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    pass


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[frac(x) for x in row] for row in rows]


def vector(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def shape(m: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not m:
        return 0, (cols or 0)
    return len(m), len(m[0])


def transpose(m: Matrix, cols: int = 0) -> Matrix:
    if not m:
        return [[] for _ in range(cols)]
    return [list(col) for col in zip(*m)]


def columns(m: Matrix) -> list[Vector]:
    return [tuple(col) for col in zip(*m)] if m else []


def from_columns(cols: Sequence[Sequence], rows: int | None = None) -> Matrix:
    if not cols:
        return [[] for _ in range(rows or 0)]
    return [list(r) for r in zip(*cols)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum((x * col[k] for k, x in nz), ZERO) for col in bt])
    return out


def matvec(a: Matrix, v: Sequence) -> Vector:
    if a and len(a[0]) != len(v):
        raise DimensionError(f"cannot apply {len(a)}x{len(a[0])} matrix to length {len(v)}")
    nz = [(k, x) for k, x in enumerate(v) if x]
    return tuple(sum((row[k] * x for k, x in nz), ZERO) for row in a)


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a: Matrix) -> Matrix:
    c = frac(c)
    return [[c * x for x in row] for row in a]


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    c = frac(c)
    return tuple(c * x for x in v)


def is_zero(m) -> bool:
    if m and isinstance(m[0], (list, tuple)):
        return all(not x for row in m for x in row)
    return all(not x for x in m)


def lincomb(coeffs: Sequence, mats: Sequence[Matrix], rows: int, cols: int) -> Matrix:
    out = zeros(rows, cols)
    for c, m in zip(coeffs, mats):
        if not c:
            continue
        for i in range(rows):
            ri, mi = out[i], m[i]
            for j in range(cols):
                if mi[j]:
                    ri[j] += c * mi[j]
    return out


def block_diag(blocks: Sequence[Matrix], sizes: Sequence[tuple[int, int]]) -> Matrix:
    rows = sum(r for r, _ in sizes)
    cols = sum(c for _, c in sizes)
    out = zeros(rows, cols)
    r0 = c0 = 0
    for b, (r, c) in zip(blocks, sizes):
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = b[i][j]
        r0 += r
        c0 += c
    return out


def hstack(mats: Sequence[Matrix], rows: int) -> Matrix:
    out = [[] for _ in range(rows)]
    for m in mats:
        for i in range(rows):
            out[i].extend(m[i] if m else [])
    return out


def vstack(mats: Sequence[Matrix]) -> Matrix:
    out = []
    for m in mats:
        out.extend(list(r) for r in m)
    return out


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product: entry (i*rb + k, j*cb + l) is a[i][j] * b[k][l]."""
    ra, ca = shape(a)
    rb, cb = shape(b)
    out = zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            x = a[i][j]
            if not x:
                continue
            for k in range(rb):
                row = out[i * rb + k]
                bk = b[k]
                for l in range(cb):
                    if bk[l]:
                        row[j * cb + l] = x * bk[l]
    return out


def rref(m: Matrix, cols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns. The row space is unchanged."""
    a = [list(r) for r in m]
    nrows = len(a)
    ncols = len(a[0]) if a else (cols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            inv = 1 / piv
            a[r] = [x * inv for x in a[r]]
        prow = a[r]
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    ai = a[i]
                    for j in nz:
                        ai[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    # Eliminate on the smaller side.
    if len(m) > len(m[0]):
        m = transpose(m)
    return len(rref(m)[1])


def kernel_basis(m: Matrix, cols: int | None = None) -> list[Vector]:
    """Basis of {v : m v = 0}, one vector per free column (free variable set to 1)."""
    ncols = len(m[0]) if m else (cols or 0)
    if not m:
        return [unit_vector(ncols, j) for j in range(ncols)]
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(tuple(v))
    return basis


def kernel_matrix(m: Matrix, cols: int | None = None) -> Matrix:
    """Kernel basis as the columns of a matrix."""
    ncols = len(m[0]) if m else (cols or 0)
    return from_columns(kernel_basis(m, ncols), ncols)


def solve(m: Matrix, b: Sequence, cols: int | None = None) -> Vector | None:
    """Some x with m x = b (free variables set to 0), or None if inconsistent."""
    nrows = len(m)
    if len(b) != nrows:
        raise DimensionError(f"right-hand side has {len(b)} entries, matrix has {nrows} rows")
    ncols = len(m[0]) if m else (cols or 0)
    aug = [list(row) + [frac(x)] for row, x in zip(m, b)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for r, p in enumerate(pivots):
        x[p] = red[r][ncols]
    return tuple(x)


def solve_many(m: Matrix, rhs: Sequence[Sequence], cols: int | None = None) -> list[Vector | None]:
    """Solve m x = b for several right-hand sides with one elimination."""
    nrows = len(m)
    ncols = len(m[0]) if m else (cols or 0)
    if not rhs:
        return []
    k = len(rhs)
    aug = [list(m[i]) + [frac(b[i]) for b in rhs] for i in range(nrows)]
    red, pivots = rref(aug, ncols + k)
    core = [p for p in pivots if p < ncols]
    out: list[Vector | None] = []
    for t in range(k):
        col = ncols + t
        bad = any(red[r][col] for r in range(len(core), nrows))
        if bad:
            out.append(None)
            continue
        x = [ZERO] * ncols
        for r, p in enumerate(core):
            x[p] = red[r][col]
        out.append(tuple(x))
    return out


def column_space_basis(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """A basis (in rref form) of the span of the given vectors."""
    if not vectors:
        return []
    red, pivots = rref([list(v) for v in vectors], dim)
    return [tuple(red[i]) for i in range(len(pivots))]


def inverse(m: Matrix) -> Matrix | None:
    n = len(m)
    aug = [list(m[i]) + list(identity(n)[i]) for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in red[:n]]


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
