"""Dense matrix primitives shared by every pseudoinverse routine.

A matrix is a 2-D ``numpy.ndarray`` of float64. The functions here only add
what the algorithms rely on beyond plain numpy: shape checks with readable
messages, the zero-vector decision of :class:`Tolerance`, and a Cholesky
factorization whose failure is a usable signal rather than an accident.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import solve_triangular

Matrix = NDArray[np.float64]

# Relative pivot floor of the Cholesky factorization
PIVOT_REL = 1e-12


class ShapeError(ValueError):
    """Raised when operand dimensions are incompatible."""


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    """Raised when a Cholesky pivot falls below the pivot tolerance."""


@dataclass(frozen=True)
class Tolerance:
    """Thresholds for the zero-vector test and for residual acceptance.

    Attributes:
        zero_sq: a vector ``v`` counts as zero when ``|v|^2 < zero_sq``.
        residual_rel: relative acceptance threshold used by verification.
        relative: scale ``zero_sq`` by the squared norm of a reference vector
            (usually the incoming column) instead of applying it as is.
    """

    zero_sq: float = 1e-10
    residual_rel: float = 1e-8
    relative: bool = False

    def __post_init__(self) -> None:
        if not self.zero_sq > 0:
            raise ValueError(f"zero_sq must be positive, got {self.zero_sq}")
        if not self.residual_rel > 0:
            raise ValueError(f"residual_rel must be positive, got {self.residual_rel}")

    def is_zero(self, sq_norm: float, reference_sq: float | None = None) -> bool:
        """Decide whether a vector with squared norm ``sq_norm`` is zero."""
        if self.relative and reference_sq is not None:
            return sq_norm <= self.zero_sq * reference_sq
        return sq_norm < self.zero_sq

    def get_hash(self) -> str:
        """Generate hash for cache validation."""
        config_str = f"{self.zero_sq!r}_{self.residual_rel!r}_{self.relative}"
        return hashlib.md5(config_str.encode()).hexdigest()[:8]


DEFAULT_TOLERANCE = Tolerance()


def as_matrix(data: ArrayLike) -> Matrix:
    """Validate ``data`` and return it as a fresh 2-D float64 array.

    1-D input is read as a column vector.
    """
    arr = np.array(data, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got an array with shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite (no NaN or Inf)")
    return arr


def as_column(vec: ArrayLike, rows: int | None = None) -> Matrix:
    """Return ``vec`` as an ``rows x 1`` column, checking its length when given."""
    col = np.array(vec, dtype=np.float64).reshape(-1, 1)
    if rows is not None and col.shape[0] != rows:
        raise ShapeError(f"column of length {col.shape[0]} does not match {rows} rows")
    return col


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product ``a @ b`` with a shape check naming both operands."""
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def transpose(a: Matrix) -> Matrix:
    """Return the transpose as a new array."""
    return np.array(a.T, dtype=np.float64)


def frob_norm(a: Matrix) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a, "fro")) if a.size else 0.0


def col_sq_norm(a: Matrix, j: int) -> float:
    """Squared Euclidean norm of column ``j``."""
    if not 0 <= j < a.shape[1]:
        raise IndexError(f"column index {j} out of range for {a.shape[1]} columns")
    col = a[:, j]
    return float(col @ col)


def pivot_tolerance(spd: Matrix) -> float:
    """Smallest pivot accepted by :func:`cholesky` for ``spd``."""
    max_diag = float(np.max(np.diag(spd))) if spd.size else 0.0
    return PIVOT_REL * max(1.0, max_diag)


def _raw_cholesky(spd: Matrix, tol: Tolerance) -> tuple[Matrix, Matrix]:
    if spd.ndim != 2 or spd.shape[0] != spd.shape[1]:
        raise ShapeError(f"cholesky needs a square matrix, got {spd.shape}")
    asym = frob_norm(spd - spd.T)
    if asym > tol.residual_rel * (1.0 + frob_norm(spd)):
        raise ValueError(f"matrix is not symmetric (asymmetry {asym:.3e})")

    sym = 0.5 * (spd + spd.T)
    try:
        lower = np.linalg.cholesky(sym)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("not positive definite") from exc
    pivots = np.diag(lower) ** 2
    if not np.all(np.isfinite(pivots)):
        raise NotPositiveDefiniteError("non-finite Cholesky pivot")
    return sym, lower


def cholesky(spd: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Lower-triangular ``L`` with ``L @ L.T == spd``.

    The input is symmetrized first. A pivot ``L[i, i]**2`` at or below
    :func:`pivot_tolerance` raises :class:`NotPositiveDefiniteError`.
    """
    sym, lower = _raw_cholesky(spd, tol)
    pivots = np.diag(lower) ** 2
    floor = pivot_tolerance(sym)
    if pivots.size and float(np.min(pivots)) <= floor:
        raise NotPositiveDefiniteError(f"not positive definite (smallest pivot {float(np.min(pivots)):.3e} <= {floor:.3e})")
    return lower


def gram_cholesky(c: Matrix, tol: Tolerance = DEFAULT_TOLERANCE, reference: Matrix | None = None) -> Matrix:
    """Cholesky factor of ``C^T C`` judged by the zero-vector test of ``tol``.

    Pivot ``j`` equals the squared residual of column ``j`` against the
    previous columns, so a pivot that ``tol`` calls zero raises
    :class:`NotPositiveDefiniteError` exactly where the inverse Cholesky scan
    stops. ``reference`` supplies the columns scaling a relative tolerance
    (``c`` itself when omitted).
    """
    reference = c if reference is None else reference
    _, lower = _raw_cholesky(c.T @ c, tol)
    for j, pivot in enumerate(np.diag(lower) ** 2):
        if tol.is_zero(float(pivot), col_sq_norm(reference, j)):
            raise NotPositiveDefiniteError(f"pivot {j} is a zero residual ({float(pivot):.3e})")
    return lower


def solve_lower_upper(lower: Matrix, rhs: Matrix) -> Matrix:
    """Solve ``(L L^T) X = rhs`` from a Cholesky factor by two triangular solves."""
    y = solve_triangular(lower, rhs, lower=True)
    return solve_triangular(lower.T, y, lower=False)


def solve_spd(spd: Matrix, rhs: Matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Solve ``spd @ X = rhs`` for a symmetric positive definite ``spd``."""
    if spd.shape[0] != rhs.shape[0]:
        raise ShapeError(f"cannot solve {spd.shape} system with right-hand side {rhs.shape}")
    return solve_lower_upper(cholesky(spd, tol), rhs)


def max_abs_diff(a: Matrix, b: Matrix) -> float:
    """Largest entrywise absolute difference between two same-shape matrices."""
    if a.shape != b.shape:
        raise ShapeError(f"cannot compare {a.shape} with {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0
