"""Small dense matrices over the scalar modes and an exact/float linear solver."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import (
    DimensionMismatchError,
    InconsistentSystemError,
    NotDiagonalError,
)
from app.engine.exppoly import ExpPoly
from app.engine.numeric import (
    Scalar,
    ScalarMode,
    format_scalar,
    join_modes,
    mode_of,
    modes_of,
    parse_scalar,
    promote,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: Tuple[Scalar, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        mode = modes_of(self.entries)
        object.__setattr__(self, "entries", tuple(promote(x, mode) for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> "Matrix":
        n = len(rows)
        m = len(rows[0]) if n else 0
        if any(len(r) != m for r in rows):
            raise DimensionMismatchError("ragged rows")
        return cls(n, m, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diagonal([Fraction(1)] * n)

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> "Matrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def mode(self) -> ScalarMode:
        return modes_of(self.entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> List[List[Scalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def diagonal_entries(self) -> List[Scalar]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def transpose(self) -> "Matrix":
        return Matrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def promote(self, mode: ScalarMode) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(promote(x, mode) for x in self.entries))

    def max_abs(self) -> Scalar:
        """Largest |entry|; exact for rational matrices."""
        return max((abs(x) for x in self.entries), default=Fraction(0))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(c * x for x in self.entries))

    def __mul__(self, c: Any) -> "Matrix":
        if isinstance(c, Matrix):
            return self @ c
        return self.scale(c)

    __rmul__ = scale

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            row = self.row(i)
            for j in range(other.cols):
                acc: Scalar = 0
                for k in range(self.cols):
                    a = row[k]
                    if a != 0:
                        acc += a * other.entries[k * other.cols + j]
                out.append(acc)
        return Matrix(self.rows, other.cols, tuple(out))

    def __pow__(self, n: int) -> "Matrix":
        if not self.is_square:
            raise DimensionMismatchError("power of a non-square matrix")
        out = Matrix.identity(self.rows)
        for _ in range(n):
            out = out @ self
        return out

    def to_json(self) -> List[List[Any]]:
        return [[format_scalar(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[Any]]) -> "Matrix":
        return cls.from_rows([[parse_scalar(x) for x in r] for r in rows])


def _same_shape(a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes {a.shape} and {b.shape} differ")


def s_commutator(a: Matrix, b: Matrix, s: Scalar) -> Matrix:
    """[A, B]_s = AB - s BA."""
    if not (a.is_square and b.is_square) or a.shape != b.shape:
        raise DimensionMismatchError(f"s-commutator of {a.shape} and {b.shape}")
    return a @ b - (b @ a).scale(s)


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return s_commutator(a, b, 1)


def apply_exppoly_to_diagonal(p: ExpPoly, d: Matrix) -> Matrix:
    """p(D) for a diagonal D, i.e. diag(p(d_ii))."""
    if not d.is_square or not d.is_diagonal():
        raise NotDiagonalError("p(D) is only defined here for diagonal D")
    return Matrix.diagonal([p.evaluate(x) for x in d.diagonal_entries()])


@dataclass(frozen=True)
class LinearSolution:
    solution: Tuple[Scalar, ...]
    kernel_basis: Tuple[Tuple[Scalar, ...], ...]

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel_basis)


def solve_linear(a: Matrix, b: Sequence[Scalar]) -> LinearSolution:
    """One solution of A x = b plus a basis of ker A.

    Exact mode uses fraction-free (Bareiss) elimination; float modes go
    through numpy (least squares and an SVD null space).
    """
    if len(b) != a.rows:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for {a.rows} rows")
    mode = join_modes(a.mode, modes_of(b))
    if mode is ScalarMode.exact:
        return _solve_exact(a, [Fraction(x) for x in b])
    return _solve_float(a, list(b), mode)


def _solve_exact(a: Matrix, b: List[Fraction]) -> LinearSolution:
    n, m = a.rows, a.cols
    aug = [list(a.row(i)) + [b[i]] for i in range(n)]
    prev: Fraction = Fraction(1)
    pivots: List[int] = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pivot = aug[r][c]
        for i in range(r + 1, n):
            lead = aug[i][c]
            for j in range(c + 1, m + 1):
                aug[i][j] = (pivot * aug[i][j] - lead * aug[r][j]) / prev
            aug[i][c] = Fraction(0)
        # rows above r keep their previous scaling; only rows below are eliminated
        prev = pivot
        pivots.append(c)
        r += 1
        if r == n:
            break
    logger.debug("exact elimination: %d x %d system of rank %d", n, m, r)
    if any(aug[i][m] != 0 for i in range(r, n)):
        raise InconsistentSystemError("the linear system has no solution")

    def back_substitute(rhs: List[Fraction], free_values: dict) -> List[Fraction]:
        x = [Fraction(0)] * m
        for c, v in free_values.items():
            x[c] = v
        for row in range(len(pivots) - 1, -1, -1):
            c = pivots[row]
            acc = rhs[row] - sum((aug[row][j] * x[j] for j in range(c + 1, m)), Fraction(0))
            x[c] = acc / aug[row][c]
        return x

    free = [c for c in range(m) if c not in pivots]
    rhs = [aug[i][m] for i in range(n)]
    solution = back_substitute(rhs, {})
    zeros = [Fraction(0)] * n
    kernel = [tuple(back_substitute(zeros, {f: Fraction(1)})) for f in free]
    return LinearSolution(tuple(solution), tuple(kernel))


def _solve_float(a: Matrix, b: List[Scalar], mode: ScalarMode) -> LinearSolution:
    dtype = np.complex128 if mode is ScalarMode.complex else np.float64
    arr = np.array(a.to_rows(), dtype=dtype).reshape(a.rows, a.cols)
    rhs = np.array(b, dtype=dtype)
    if a.cols == 0:
        if np.any(np.abs(rhs) > settings.FLOAT_TOL):
            raise InconsistentSystemError("the linear system has no solution")
        return LinearSolution((), ())
    x, *_ = np.linalg.lstsq(arr, rhs, rcond=None)
    scale = max(1.0, float(np.max(np.abs(rhs))) if rhs.size else 1.0)
    if rhs.size and np.max(np.abs(arr @ x - rhs)) > settings.FLOAT_TOL * scale:
        raise InconsistentSystemError("the linear system has no solution")
    _, sv, vh = np.linalg.svd(arr)
    cutoff = settings.FLOAT_TOL * max(1.0, float(sv[0]) if sv.size else 1.0)
    rank = int(np.sum(sv > cutoff))
    kernel = [tuple(_to_scalar(v, mode) for v in vh[k].conj()) for k in range(rank, a.cols)]
    return LinearSolution(tuple(_to_scalar(v, mode) for v in x), tuple(kernel))


def _to_scalar(v: Any, mode: ScalarMode) -> Scalar:
    if mode is ScalarMode.complex:
        return complex(v)
    return float(np.real(v))
