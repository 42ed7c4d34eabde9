"""Incremental inverse Cholesky factor of ``C^T C``.

``G_k`` is upper-triangular with ``G_k G_k^T = (C_k^T C_k)^{-1}`` where
``C_k`` holds the first ``k`` columns of ``C``. Growing it one column at a
time also yields the residual ``c~_k`` of each new column against the span
of the previous ones, which is exactly what the block update needs to
decide whether a column is new information.

Growth step for column ``c_k``::

    w      = G_{k-1} G_{k-1}^T C_{k-1}^T c_k
    c~_k   = c_k - C_{k-1} w
    eta_k  = 1 / sqrt(c~_k^T c~_k)
    u_{k-1} = -eta_k w
    G_k    = [[G_{k-1}, u_{k-1}], [0, eta_k]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike

from .matrix_core import DEFAULT_TOLERANCE, Matrix, ShapeError, Tolerance, as_column, as_matrix


@dataclass(frozen=True)
class InvCholFactor:
    """Upper-triangular ``g`` (k x k) summarizing the columns ``cols`` (m x k)."""

    g: Matrix
    cols: Matrix

    def __post_init__(self) -> None:
        k = self.g.shape[0]
        if self.g.shape != (k, k) or self.cols.shape[1] != k:
            raise ShapeError(f"factor {self.g.shape} does not match columns {self.cols.shape}")

    @property
    def k(self) -> int:
        return self.g.shape[0]

    @property
    def rows(self) -> int:
        return self.cols.shape[0]

    def gram_inverse(self) -> Matrix:
        """``G G^T``, equal to ``(C^T C)^{-1}``."""
        return self.g @ self.g.T


@dataclass(frozen=True)
class ZeroColumnSignal:
    """A column whose residual ``c_tilde`` is zero; ``k_reached`` columns were factored before it."""

    k_reached: int
    c_tilde: Matrix


FactorOutcome = Union[InvCholFactor, ZeroColumnSignal]
ExtendOutcome = Union[tuple[InvCholFactor, Matrix], ZeroColumnSignal]


def _sq(v: Matrix) -> float:
    return float((v.T @ v)[0, 0])


def _coefficients(factor: InvCholFactor, ck: Matrix) -> Matrix:
    # right-to-left so the m x m projector is never formed
    return factor.g @ (factor.g.T @ (factor.cols.T @ ck))


def init_g1(c1: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE, reference_sq: Optional[float] = None) -> FactorOutcome:
    """Start the factor from a first column: ``G_1 = [1 / |c_1|]``."""
    c1 = as_column(c1)
    if c1.shape[0] == 0:
        raise ShapeError("first column must be nonempty")
    sq = _sq(c1)
    if tol.is_zero(sq, sq if reference_sq is None else reference_sq):
        return ZeroColumnSignal(k_reached=0, c_tilde=c1)
    return InvCholFactor(g=np.array([[1.0 / math.sqrt(sq)]]), cols=c1)


def c_tilde(factor: InvCholFactor, ck: ArrayLike) -> Matrix:
    """Residual of ``ck`` against the span of ``factor.cols``."""
    ck = as_column(ck, factor.rows)
    return ck - factor.cols @ _coefficients(factor, ck)


def extend(
    factor: InvCholFactor,
    ck: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
    reference_sq: Optional[float] = None,
) -> ExtendOutcome:
    """Grow the factor by one column, or signal that the column adds nothing new.

    Returns ``(new_factor, c_tilde)`` on success.
    """
    ck = as_column(ck, factor.rows)
    w = _coefficients(factor, ck)
    residual = ck - factor.cols @ w
    sq = _sq(residual)
    if tol.is_zero(sq, _sq(ck) if reference_sq is None else reference_sq):
        return ZeroColumnSignal(k_reached=factor.k, c_tilde=residual)

    eta = 1.0 / math.sqrt(sq)
    k = factor.k
    g = np.zeros((k + 1, k + 1))
    g[:k, :k] = factor.g
    g[:k, k:] = -eta * w
    g[k, k] = eta
    return InvCholFactor(g=g, cols=np.hstack([factor.cols, ck])), residual


def eta_long_form(factor: InvCholFactor, ck: ArrayLike) -> float:
    """``1 / sqrt(c^T c - c^T C G G^T C^T c)``, the expanded form of ``eta_k``."""
    ck = as_column(ck, factor.rows)
    projected = ck.T @ factor.cols @ _coefficients(factor, ck)
    return 1.0 / math.sqrt(_sq(ck) - float(projected[0, 0]))


def b_from_g(factor: InvCholFactor) -> Matrix:
    """``B^T = G G^T C^T``, the pseudoinverse of the full-column-rank ``factor.cols``."""
    return factor.g @ (factor.g.T @ factor.cols.T)


def scan_columns(
    c_block: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
    reference: Optional[Matrix] = None,
) -> tuple[Optional[InvCholFactor], Optional[ZeroColumnSignal]]:
    """Factor the longest prefix of ``c_block`` whose residuals are non-zero.

    Stops at the first zero residual and returns it as the signal; the factor
    is ``None`` when the very first column is zero. ``reference`` supplies the
    columns whose squared norms scale a relative tolerance.
    """
    c_block = as_matrix(c_block)
    factor: Optional[InvCholFactor] = None
    for j in range(c_block.shape[1]):
        ref_sq = None if reference is None else float(reference[:, j] @ reference[:, j])
        if factor is None:
            outcome = init_g1(c_block[:, j], tol, ref_sq)
            if isinstance(outcome, ZeroColumnSignal):
                return None, outcome
            factor = outcome
        else:
            grown = extend(factor, c_block[:, j], tol, ref_sq)
            if isinstance(grown, ZeroColumnSignal):
                return factor, grown
            factor = grown[0]
    return factor, None
