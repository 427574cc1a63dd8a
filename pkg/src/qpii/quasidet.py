"""Quasideterminants over generic division carriers.

A quasideterminant is the noncommutative replacement for a determinant
ratio: position (i, j) of a square matrix A is ``((A^-1)_ji)^-1`` whenever
the inverse entry exists, and over a commutative carrier it reduces to
``(-1)^(i+j) det A / det A^ij``.  Two independent evaluation paths are
provided and cross-checked by the test suite:

* ``quasideterminant_expand`` uses the pivot formula
  ``a_ij - row_i(A^ij) (A^ij)^-1 col_j(A^ij)`` with the minor inverted by
  partial-pivot elimination over the carrier;
* ``quasideterminant_via_inverse`` inverts the whole matrix by recursive
  2x2 block partition and inverts the (j, i) entry of the result.

Indices are 0-based throughout.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .gaussian import GaussianRational, gauss


class QuasidetError(Exception):
    pass


class NonInvertibleMinor(QuasidetError):
    """A pivot configuration required an inverse that does not exist."""

    def __init__(self, row: int, col: int, message: str = ""):
        super().__init__(message or f"minor of position ({row}, {col}) is not invertible")
        self.row = row
        self.col = col


class NonInvertibleMatrix(QuasidetError):
    """The block-partition recursion hit a singular sub-problem."""


class NonInvertibleEntry(QuasidetError):
    """The required entry of the inverse matrix is itself not invertible."""


# ---------------------------------------------------------------------------
# Carriers
# ---------------------------------------------------------------------------


class ExactScalarCarrier:
    """Exact commutative Gaussian-rational scalars; tolerance zero."""

    tolerance = 0.0
    commutative = True

    def zero(self):
        return gauss(0)

    def one(self):
        return gauss(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def invert(self, a):
        if a.is_zero():
            raise ZeroDivisionError("inverse of exact zero")
        return a.inverse()

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def magnitude(self, a) -> float:
        return abs(complex(a))

    def close(self, a, b) -> bool:
        return a == b


class ComplexMatrixCarrier:
    """Square complex-matrix blocks of a fixed dimension.

    Inversion is partial-pivot Gauss-Jordan with a relative singularity
    cutoff, matching the numeric backend.
    """

    commutative = False

    def __init__(self, dim: int, tolerance: float = 1e-12):
        self.dim = dim
        self.tolerance = tolerance

    def _coerce(self, a) -> np.ndarray:
        arr = np.asarray(a, dtype=np.complex128)
        if arr.shape != (self.dim, self.dim):
            raise QuasidetError(f"expected a {self.dim}x{self.dim} block, got {arr.shape}")
        return arr

    def zero(self):
        return np.zeros((self.dim, self.dim), dtype=np.complex128)

    def one(self):
        return np.eye(self.dim, dtype=np.complex128)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a @ b

    def invert(self, a):
        return invert_complex_matrix(self._coerce(a), self.tolerance)

    def is_zero(self, a) -> bool:
        return bool(np.all(a == 0))

    def magnitude(self, a) -> float:
        return float(np.linalg.norm(a))

    def close(self, a, b) -> bool:
        return self.magnitude(self.sub(a, b)) <= self.tolerance


def invert_complex_matrix(a: np.ndarray, tolerance: float = 1e-12) -> np.ndarray:
    """Partial-pivot Gauss-Jordan inverse with a relative pivot cutoff."""
    n = a.shape[0]
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0:
        raise ZeroDivisionError("inverse of zero matrix")
    m = a.astype(np.complex128).copy()
    inv = np.eye(n, dtype=np.complex128)
    for k in range(n):
        pivot_row = k + int(np.argmax(np.abs(m[k:, k])))
        if abs(m[pivot_row, k]) <= tolerance * scale:
            raise ZeroDivisionError(f"pivot below tolerance at column {k}")
        if pivot_row != k:
            m[[k, pivot_row]] = m[[pivot_row, k]]
            inv[[k, pivot_row]] = inv[[pivot_row, k]]
        p = m[k, k]
        m[k] /= p
        inv[k] /= p
        for r in range(n):
            if r != k and m[r, k] != 0:
                f = m[r, k]
                m[r] -= f * m[k]
                inv[r] -= f * inv[k]
    return inv


# ---------------------------------------------------------------------------
# BlockMatrix
# ---------------------------------------------------------------------------


class BlockMatrix:
    """Square matrix of carrier elements sharing one carrier instance."""

    def __init__(self, carrier, rows: Sequence[Sequence[Any]]):
        self.carrier = carrier
        self.rows = [list(r) for r in rows]
        n = len(self.rows)
        if n < 1 or any(len(r) != n for r in self.rows):
            raise QuasidetError("block matrix must be square and non-empty")
        self.n = n

    def __getitem__(self, rc: tuple[int, int]):
        r, c = rc
        return self.rows[r][c]

    def minor(self, i: int, j: int) -> "BlockMatrix":
        rows = [
            [e for cc, e in enumerate(row) if cc != j]
            for rr, row in enumerate(self.rows)
            if rr != i
        ]
        return BlockMatrix(self.carrier, rows)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "BlockMatrix":
        rows = [[self.rows[r][c] for c in col_perm] for r in row_perm]
        return BlockMatrix(self.carrier, rows)


def _row_without(M: BlockMatrix, i: int, j: int) -> list:
    return [M.rows[i][c] for c in range(M.n) if c != j]


def _col_without(M: BlockMatrix, i: int, j: int) -> list:
    return [M.rows[r][j] for r in range(M.n) if r != i]


# ---------------------------------------------------------------------------
# Elimination inverse over a carrier (used by the expand path)
# ---------------------------------------------------------------------------


def invert_by_elimination(M: BlockMatrix) -> BlockMatrix:
    """Gauss-Jordan over the carrier with partial pivoting by magnitude.

    Row operations are left multiplications, which is the valid orientation
    when entries do not commute.  If the preferred pivot fails to invert,
    the remaining candidates are tried in magnitude order.
    """
    car = M.carrier
    n = M.n
    work = [row[:] for row in M.rows]
    inv = [[car.one() if r == c else car.zero() for c in range(n)] for r in range(n)]
    for k in range(n):
        candidates = sorted(
            range(k, n), key=lambda r: car.magnitude(work[r][k]), reverse=True
        )
        pivot_inv = None
        for r in candidates:
            if car.magnitude(work[r][k]) == 0.0:
                break
            try:
                pivot_inv = car.invert(work[r][k])
            except ZeroDivisionError:
                continue
            if r != k:
                work[k], work[r] = work[r], work[k]
                inv[k], inv[r] = inv[r], inv[k]
            break
        if pivot_inv is None:
            raise ZeroDivisionError(f"no invertible pivot in column {k}")
        work[k] = [car.mul(pivot_inv, e) for e in work[k]]
        inv[k] = [car.mul(pivot_inv, e) for e in inv[k]]
        for r in range(n):
            if r == k or car.is_zero(work[r][k]):
                continue
            f = work[r][k]
            work[r] = [car.sub(e, car.mul(f, p)) for e, p in zip(work[r], work[k])]
            inv[r] = [car.sub(e, car.mul(f, p)) for e, p in zip(inv[r], inv[k])]
    return BlockMatrix(car, inv)


# ---------------------------------------------------------------------------
# Block-partition inverse (used by the via-inverse path)
# ---------------------------------------------------------------------------


def invert_by_block_partition(M: BlockMatrix) -> BlockMatrix:
    """Whole-matrix inverse by recursive 2x2 block partition.

    Requires the leading blocks and both complements to be invertible; this
    is a constraint of the method, not of the matrix.
    """
    car = M.carrier
    n = M.n
    if n == 1:
        try:
            return BlockMatrix(car, [[car.invert(M[(0, 0)])]])
        except ZeroDivisionError as exc:
            raise NonInvertibleMatrix(str(exc)) from exc
    k = n // 2
    A = BlockMatrix(car, [r[:k] for r in M.rows[:k]])
    Bb = [r[k:] for r in M.rows[:k]]
    Cb = [r[:k] for r in M.rows[k:]]
    D = BlockMatrix(car, [r[k:] for r in M.rows[k:]])

    def mat_mul(x, y):
        rows = len(x)
        mid = len(y)
        cols = len(y[0])
        return [
            [
                _sum_terms(car, [car.mul(x[r][m], y[m][c]) for m in range(mid)])
                for c in range(cols)
            ]
            for r in range(rows)
        ]

    def mat_sub(x, y):
        return [[car.sub(a, b) for a, b in zip(rx, ry)] for rx, ry in zip(x, y)]

    Ainv = invert_by_block_partition(A).rows
    Dinv = invert_by_block_partition(D).rows
    schur_a = BlockMatrix(car, mat_sub(A.rows, mat_mul(mat_mul(Bb, Dinv), Cb)))
    schur_d = BlockMatrix(car, mat_sub(D.rows, mat_mul(mat_mul(Cb, Ainv), Bb)))
    schur_a_inv = invert_by_block_partition(schur_a).rows
    schur_d_inv = invert_by_block_partition(schur_d).rows

    top_left = schur_a_inv
    top_right = [[car.sub(car.zero(), e) for e in row] for row in mat_mul(mat_mul(Ainv, Bb), schur_d_inv)]
    bottom_left = [[car.sub(car.zero(), e) for e in row] for row in mat_mul(mat_mul(schur_d_inv, Cb), Ainv)]
    bottom_right = schur_d_inv

    rows = [tl + tr for tl, tr in zip(top_left, top_right)]
    rows += [bl + br for bl, br in zip(bottom_left, bottom_right)]
    return BlockMatrix(car, rows)


def _sum_terms(car, terms):
    acc = car.zero()
    for t in terms:
        acc = car.add(acc, t)
    return acc


# ---------------------------------------------------------------------------
# Quasideterminants
# ---------------------------------------------------------------------------


def quasideterminant_expand(M: BlockMatrix, i: int, j: int):
    """Pivot-formula quasideterminant at (i, j), 0-based.

    For n = 1 this is the single entry; otherwise
    ``a_ij - row * (A^ij)^-1 * col`` with the deleted row and column.
    """
    car = M.carrier
    n = M.n
    if not (0 <= i < n and 0 <= j < n):
        raise QuasidetError(f"position ({i}, {j}) out of range for n = {n}")
    if n == 1:
        return M[(0, 0)]
    minor = M.minor(i, j)
    try:
        minor_inv = invert_by_elimination(minor)
    except ZeroDivisionError as exc:
        raise NonInvertibleMinor(i, j, str(exc)) from exc
    row = _row_without(M, i, j)
    col = _col_without(M, i, j)
    correction = _sum_terms(
        car,
        [
            car.mul(car.mul(row[p], minor_inv[(p, q)]), col[q])
            for p in range(n - 1)
            for q in range(n - 1)
        ],
    )
    return car.sub(M[(i, j)], correction)


def quasideterminant_via_inverse(M: BlockMatrix, i: int, j: int):
    """Inverse-characterization quasideterminant: ``((M^-1)_ji)^-1``."""
    car = M.carrier
    if not (0 <= i < M.n and 0 <= j < M.n):
        raise QuasidetError(f"position ({i}, {j}) out of range for n = {M.n}")
    inv = invert_by_block_partition(M)
    entry = inv[(j, i)]
    try:
        return car.invert(entry)
    except ZeroDivisionError as exc:
        raise NonInvertibleEntry(
            f"entry ({j}, {i}) of the inverse is not invertible"
        ) from exc


def all_quasideterminants(M: BlockMatrix) -> dict[tuple[int, int], Any]:
    """All n^2 positions by the expand path (an n x n matrix has n^2 of them)."""
    return {
        (i, j): quasideterminant_expand(M, i, j) for i in range(M.n) for j in range(M.n)
    }


# ---------------------------------------------------------------------------
# Commutative cross-check
# ---------------------------------------------------------------------------


def det_cofactor(M: BlockMatrix):
    """Exact determinant by first-row cofactor expansion (commutative carrier)."""
    car = M.carrier
    if not getattr(car, "commutative", False):
        raise QuasidetError("cofactor determinant requires a commutative carrier")
    if M.n == 1:
        return M[(0, 0)]
    acc = car.zero()
    for j in range(M.n):
        term = car.mul(M[(0, j)], det_cofactor(M.minor(0, j)))
        if j % 2:
            term = car.sub(car.zero(), term)
        acc = car.add(acc, term)
    return acc


def commutative_reduction_check(M: BlockMatrix, i: int, j: int) -> bool | None:
    """Exact check of ``|A|_ij == (-1)^(i+j) det A / det A^ij``.

    Returns None (vacuous) when the minor determinant is zero, otherwise
    the boolean outcome of the exact comparison.
    """
    car = M.carrier
    if not isinstance(car, ExactScalarCarrier):
        raise QuasidetError("reduction check requires the exact scalar carrier")
    det_minor = det_cofactor(M.minor(i, j))
    if car.is_zero(det_minor):
        return None
    expected = det_cofactor(M) * det_minor.inverse()
    if (i + j) % 2:
        expected = -expected
    got = quasideterminant_expand(M, i, j)
    return got == expected


# ---------------------------------------------------------------------------
# JSON matrix input
# ---------------------------------------------------------------------------


def load_matrix_json(doc, carrier: str = "auto") -> BlockMatrix:
    """Build a BlockMatrix from a JSON array-of-arrays document.

    Entries are exact-rational strings/numbers for the exact carrier, or
    nested arrays of [re, im] pairs (or numbers) for the matrix carrier.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    if (
        not isinstance(doc, list)
        or not doc
        or not all(isinstance(row, list) and row for row in doc)
    ):
        raise QuasidetError("matrix document must be a non-empty array of arrays")
    first = doc[0][0]
    kind = carrier
    if kind == "auto":
        kind = "matrix" if isinstance(first, list) else "exact"
    if kind == "exact":
        rows = [[_parse_exact(e) for e in row] for row in doc]
        return BlockMatrix(ExactScalarCarrier(), rows)
    if kind == "matrix":
        blocks = [[_parse_block(e) for e in row] for row in doc]
        dim = blocks[0][0].shape[0]
        return BlockMatrix(ComplexMatrixCarrier(dim), blocks)
    raise QuasidetError(f"unknown carrier {carrier!r}")


def _parse_exact(e) -> GaussianRational:
    if isinstance(e, str):
        return GaussianRational.parse(e)
    if isinstance(e, int):
        return gauss(e)
    if isinstance(e, list) and len(e) == 2:
        return GaussianRational(Fraction(e[0]), Fraction(e[1]))
    raise QuasidetError(f"cannot parse exact entry {e!r}")


def _parse_block(e) -> np.ndarray:
    def scalar(v):
        if isinstance(v, (int, float)):
            return complex(v)
        if isinstance(v, list) and len(v) == 2:
            return complex(v[0], v[1])
        raise QuasidetError(f"cannot parse complex scalar {v!r}")

    arr = np.array([[scalar(v) for v in row] for row in e], dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise QuasidetError("matrix blocks must be square")
    return arr
