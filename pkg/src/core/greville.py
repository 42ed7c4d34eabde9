"""Column-by-column Greville recursion and Moore-Penrose verification.

Everything else in the package is checked against this module: the
one-column update is the reference recursion, ``greville_full_pinv`` is the
oracle pseudoinverse, and ``mp_residuals`` measures the four Penrose
conditions ``AXA = A``, ``XAX = X``, ``(AX)^T = AX``, ``(XA)^T = XA``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .matrix_core import DEFAULT_TOLERANCE, Matrix, ShapeError, Tolerance, as_column, as_matrix, frob_norm


@dataclass(frozen=True)
class MpResiduals:
    """Frobenius norms of the four Penrose defect matrices."""

    r1: float
    r2: float
    r3: float
    r4: float

    def worst(self) -> float:
        return max(self.r1, self.r2, self.r3, self.r4)

    def passes(self, rel: float, scale: float) -> bool:
        """True when every residual is at most ``rel * (1 + scale)``."""
        return self.worst() <= rel * (1.0 + scale)

    def to_dict(self) -> dict:
        return {"r1": self.r1, "r2": self.r2, "r3": self.r3, "r4": self.r4}

    @classmethod
    def from_dict(cls, data: dict) -> "MpResiduals":
        return cls(float(data["r1"]), float(data["r2"]), float(data["r3"]), float(data["r4"]))


def mp_residuals(a: Matrix, x: Matrix) -> MpResiduals:
    """Evaluate the Penrose conditions for a candidate pseudoinverse ``x`` of ``a``."""
    if x.shape != (a.shape[1], a.shape[0]):
        raise ShapeError(f"candidate pseudoinverse has shape {x.shape}, expected {(a.shape[1], a.shape[0])} for {a.shape}")
    ax = a @ x
    xa = x @ a
    return MpResiduals(
        r1=frob_norm(ax @ a - a),
        r2=frob_norm(x @ ax - x),
        r3=frob_norm(ax.T - ax),
        r4=frob_norm(xa.T - xa),
    )


@dataclass(frozen=True)
class PinvState:
    """A matrix ``a`` (m x n) together with its maintained pseudoinverse ``a_plus`` (n x m)."""

    a: Matrix
    a_plus: Matrix

    def __post_init__(self) -> None:
        if self.a_plus.shape != (self.a.shape[1], self.a.shape[0]):
            raise ShapeError(f"pseudoinverse shape {self.a_plus.shape} does not transpose matrix shape {self.a.shape}")

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @classmethod
    def from_matrix(cls, a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> "PinvState":
        """Build a state by running the column-by-column oracle on ``a``."""
        a = as_matrix(a)
        return cls(a, greville_full_pinv(a, tol))

    def residuals(self) -> MpResiduals:
        return mp_residuals(self.a, self.a_plus)

    def transposed(self) -> "PinvState":
        """State of ``a^T``; the pseudoinverse of a transpose is the transpose of the pseudoinverse."""
        return PinvState(np.ascontiguousarray(self.a.T), np.ascontiguousarray(self.a_plus.T))


def single_column_pinv(v: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Pseudoinverse of one column: ``v^T / (v^T v)``, or the zero row when ``v`` is zero."""
    v = as_column(v)
    sq = float((v.T @ v)[0, 0])
    if tol.is_zero(sq, sq):
        return np.zeros((1, v.shape[0]))
    return v.T / sq


def greville_append_column(state: PinvState, h: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> PinvState:
    """Return the state of ``[A | h]`` from the state of ``A`` (one Greville step).

    ``d = A^+ h`` and ``c = h - A d``; the new last row ``b^T`` is ``c^+`` when
    ``c`` is non-zero and ``(1 + d^T d)^{-1} d^T A^+`` otherwise.
    """
    h = as_column(h, state.m)
    d = state.a_plus @ h
    c = h - state.a @ d

    c_sq = float((c.T @ c)[0, 0])
    if tol.is_zero(c_sq, float((h.T @ h)[0, 0])):
        b_t = (d.T @ state.a_plus) / (1.0 + float((d.T @ d)[0, 0]))
    else:
        b_t = c.T / c_sq

    return PinvState(np.hstack([state.a, h]), np.vstack([state.a_plus - d @ b_t, b_t]))


def greville_append_columns(state: PinvState, h_block: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> PinvState:
    """Append every column of ``h_block`` through :func:`greville_append_column`, one at a time."""
    h_block = as_matrix(h_block)
    if h_block.shape[0] != state.m:
        raise ShapeError(f"block has shape {h_block.shape}, expected {state.m} rows")
    for j in range(h_block.shape[1]):
        state = greville_append_column(state, h_block[:, j], tol)
    return state


def greville_full_pinv(a: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> Matrix:
    """Pseudoinverse of ``a`` built from its first column by repeated Greville steps."""
    a = as_matrix(a)
    if a.size == 0:
        raise ShapeError(f"cannot take the pseudoinverse of an empty {a.shape} matrix")
    first = a[:, :1]
    state = PinvState(first.copy(), single_column_pinv(first, tol))
    return greville_append_columns(state, a[:, 1:], tol).a_plus


def projector(state: PinvState) -> Matrix:
    """Orthogonal projector ``A A^+`` onto the range of ``A``."""
    return state.a @ state.a_plus
