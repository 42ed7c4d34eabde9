"""One-pass block pseudoinverse updates.

``append_columns`` turns the state of ``A`` into the state of ``[A | H]``;
``append_rows`` turns it into the state of ``A`` stacked over ``A_x``.

Column update, one while-pass over the pending columns ``H`` of the block:

1. ``D = A^+ H`` and ``C = H - A D``.
2. Factor the columns of ``C`` with the inverse Cholesky recursion until a
   residual ``c~_k`` is zero (or the block is exhausted). The ``k`` factored
   columns are committed at once with ``B^T = G G^T C_k^T``.
3. If a zero residual stopped the scan, the columns that lie in the range of
   the current matrix are committed through the ``C = 0`` dispatch: a whole
   run of ``delta`` zero columns of ``C`` when nothing was factored, or the
   single offending column otherwise.
4. Repeat from 1 with the columns still pending.

The ``C = 0`` dispatch picks among three algebraically equal formulas
(push-through identity) by comparing the sizes ``m``, ``n`` and ``p``, so
the inverted matrix is the smallest one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import solve_triangular

from .greville import MpResiduals, PinvState
from .invchol import b_from_g, scan_columns
from .logger import get_logger
from .matrix_core import (
    DEFAULT_TOLERANCE,
    Matrix,
    NotPositiveDefiniteError,
    ShapeError,
    Tolerance,
    as_matrix,
    col_sq_norm,
    gram_cholesky,
    solve_spd,
)


class BranchTag(str, Enum):
    """Which case of the dispatch committed a while-pass."""

    C_ZERO_DTD = "CZero_DtD"  # (I + D^T D)^{-1} D~
    C_ZERO_DTH = "CZero_DtH"  # (I + D~ H)^{-1} D~
    C_ZERO_HDT = "CZero_HDt"  # D~ (I + H D~)^{-1}
    FULL_RANK = "FullRank_Cpinv"
    MIXED_RESTART = "Mixed_Restart"


C_ZERO_TAGS = (BranchTag.C_ZERO_DTD, BranchTag.C_ZERO_DTH, BranchTag.C_ZERO_HDT)


class Backend(str, Enum):
    """How the full-rank part of a pass obtains ``B^T``."""

    INVERSE_CHOLESKY = "invchol"
    LIBRARY_CHOLESKY = "chol"


@dataclass(frozen=True)
class DispatchBranch:
    """Outcome of one while-pass: ``k_reached`` factored columns, then ``delta`` in-range columns."""

    tag: BranchTag
    k_reached: int
    delta: int
    formula: Optional[BranchTag] = None

    def to_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "k_reached": self.k_reached,
            "delta": self.delta,
            "formula": None if self.formula is None else self.formula.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DispatchBranch":
        formula = data.get("formula")
        return cls(
            tag=BranchTag(data["tag"]),
            k_reached=int(data["k_reached"]),
            delta=int(data["delta"]),
            formula=None if formula is None else BranchTag(formula),
        )


@dataclass
class BlockUpdateReport:
    """Trace of one block update: the passes taken, final residuals and wall-clock time."""

    orientation: str = "columns"
    branches: list[DispatchBranch] = field(default_factory=list)
    mp: Optional[MpResiduals] = None
    columns_processed: int = 0
    elapsed: float = 0.0

    def record(self, branch: DispatchBranch) -> None:
        progress = branch.k_reached + branch.delta
        if progress < 1:
            raise RuntimeError(f"while-pass made no progress: {branch}")
        self.branches.append(branch)
        self.columns_processed += progress

    @property
    def tags(self) -> list[str]:
        return [branch.tag.value for branch in self.branches]

    def to_dict(self) -> dict:
        return {
            "orientation": self.orientation,
            "branches": [branch.to_dict() for branch in self.branches],
            "mp": None if self.mp is None else self.mp.to_dict(),
            "columns_processed": self.columns_processed,
            "elapsed": self.elapsed,
        }


def compute_d_c(state: PinvState, h_block: ArrayLike) -> tuple[Matrix, Matrix]:
    """``D = A^+ H`` (n x p) and ``C = H - A D`` (m x p)."""
    h_block = as_matrix(h_block)
    if h_block.shape[0] != state.m:
        raise ShapeError(f"block has shape {h_block.shape}, expected {state.m} rows to match {state.a.shape}")
    d = state.a_plus @ h_block
    return d, h_block - state.a @ d


def d_tilde(state: PinvState, d: Matrix) -> Matrix:
    """``D~ = D^T A^+`` (p x m)."""
    if d.shape[0] != state.a_plus.shape[0]:
        raise ShapeError(f"D has shape {d.shape}, expected {state.a_plus.shape[0]} rows")
    return d.T @ state.a_plus


def select_c_zero_formula(m: int, n: int, p: int) -> BranchTag:
    """Size rule of the ``C = 0`` dispatch; overlapping conditions resolve in the order (a), (b), (c)."""
    if m >= max(n, p):
        return BranchTag.C_ZERO_DTD
    if n >= m >= p:
        return BranchTag.C_ZERO_DTH
    return BranchTag.C_ZERO_HDT


def b_for_c_zero(
    state: PinvState,
    h_block: Matrix,
    d: Matrix,
    tol: Tolerance = DEFAULT_TOLERANCE,
    formula: Optional[BranchTag] = None,
) -> Matrix:
    """``B^T`` (p x m) for a block lying in the range of ``A`` (``C = 0``).

    ``formula`` forces one of the three equivalent expressions; by default the
    size rule of :func:`select_c_zero_formula` chooses.
    """
    p = h_block.shape[1]
    if d.shape != (state.n, p):
        raise ShapeError(f"D has shape {d.shape}, expected {(state.n, p)}")
    dt = d_tilde(state, d)
    formula = formula or select_c_zero_formula(state.m, state.n, p)

    if formula is BranchTag.C_ZERO_DTD:
        return solve_spd(np.eye(p) + d.T @ d, dt, tol)
    if formula is BranchTag.C_ZERO_DTH:
        # D~ H = D^T A^+ H = D^T D, symmetric up to rounding
        return solve_spd(np.eye(p) + dt @ h_block, dt, tol)
    if formula is BranchTag.C_ZERO_HDT:
        # X (I + H D~) = D~  <=>  (I + H D~)^T X^T = D~^T
        return np.linalg.solve((np.eye(state.m) + h_block @ dt).T, dt.T).T
    raise ValueError(f"{formula} is not a C = 0 formula")


def _commit(state: PinvState, block: Matrix, d: Matrix, b_t: Matrix) -> PinvState:
    return PinvState(np.hstack([state.a, block]), np.vstack([state.a_plus - d @ b_t, b_t]))


@dataclass
class BlockPinvUpdater:
    """Block pseudoinverse updates with a fixed tolerance and backend."""

    tol: Tolerance = DEFAULT_TOLERANCE
    backend: Backend = Backend.INVERSE_CHOLESKY
    compute_residuals: bool = True

    def __post_init__(self) -> None:
        self.backend = Backend(self.backend)
        self.logger = get_logger()

    # ---------- Public surface ---------- #
    def append_columns(self, state: PinvState, h_block: ArrayLike) -> tuple[PinvState, BlockUpdateReport]:
        """State of ``[A | H]`` from the state of ``A``."""
        h_block = self._validate_block(h_block, state.m, axis=0, what="columns")
        report = BlockUpdateReport(orientation="columns")
        start = time.perf_counter()
        new_state = self._run(state, h_block, report)
        report.elapsed = time.perf_counter() - start
        if self.compute_residuals:
            report.mp = new_state.residuals()
        self._log_summary(report, h_block.shape[1])
        return new_state, report

    def append_rows(self, state: PinvState, ax_block: ArrayLike) -> tuple[PinvState, BlockUpdateReport]:
        """State of ``A`` stacked over ``A_x`` from the state of ``A``.

        Runs the column recursion on the transposed problem: ``D^T = A_x A^+``,
        ``C = A_x^T - A^T D``, and the final pseudoinverse is
        ``[A^+ - B D^T | B]``. The size rule compares ``n`` with ``m + i`` and
        ``q`` exactly as the column rule compares ``m`` with ``n + i`` and ``p``.
        """
        ax_block = self._validate_block(ax_block, state.n, axis=1, what="rows")
        report = BlockUpdateReport(orientation="rows")
        start = time.perf_counter()
        transposed = self._run(state.transposed(), np.ascontiguousarray(ax_block.T), report)
        new_state = transposed.transposed()
        report.elapsed = time.perf_counter() - start
        if self.compute_residuals:
            report.mp = new_state.residuals()
        self._log_summary(report, ax_block.shape[0])
        return new_state, report

    # ---------- Algorithm ---------- #
    def _validate_block(self, block: ArrayLike, expected: int, axis: int, what: str) -> Matrix:
        block = as_matrix(block)
        if block.shape[axis] != expected:
            self.logger.error(f"Cannot append {what}: block {block.shape} does not match {expected}")
            raise ShapeError(f"block has shape {block.shape}, expected {expected} along axis {axis}")
        if block.shape[1 - axis] == 0:
            raise ValueError(f"no {what} to append")
        return block

    def _run(self, state: PinvState, h_block: Matrix, report: BlockUpdateReport) -> PinvState:
        p = h_block.shape[1]
        i = 0
        while i < p:
            pending = h_block[:, i:]
            if self.backend is Backend.LIBRARY_CHOLESKY:
                state, branch = self._library_pass(state, pending)
            else:
                state, branch = self._invchol_pass(state, pending)
            report.record(branch)
            i += branch.k_reached + branch.delta
            self.logger.debug(
                f"{report.orientation} pass {len(report.branches)}: {branch.tag.value} "
                f"k={branch.k_reached} delta={branch.delta} ({i}/{p})"
            )
        return state

    def _invchol_pass(self, state: PinvState, pending: Matrix) -> tuple[PinvState, DispatchBranch]:
        remaining = pending.shape[1]
        d, c = compute_d_c(state, pending)
        factor, signal = scan_columns(c, self.tol, reference=pending)

        k = 0 if factor is None else factor.k
        if factor is not None:
            state = _commit(state, pending[:, :k], d[:, :k], b_from_g(factor))
        if signal is None:
            return state, DispatchBranch(BranchTag.FULL_RANK, k_reached=k, delta=0)

        delta = 1
        if k == 0:
            # C is unchanged by a commit only when nothing was committed
            while delta < remaining and self.tol.is_zero(col_sq_norm(c, delta), col_sq_norm(pending, delta)):
                delta += 1
            d_delta = d[:, :delta]
        else:
            d_delta = state.a_plus @ pending[:, k : k + 1]
        h_delta = pending[:, k : k + delta]

        formula = select_c_zero_formula(state.m, state.n, delta)
        b_t = b_for_c_zero(state, h_delta, d_delta, self.tol, formula)
        state = _commit(state, h_delta, d_delta, b_t)

        tag = formula if k == 0 and delta == remaining else BranchTag.MIXED_RESTART
        return state, DispatchBranch(tag, k_reached=k, delta=delta, formula=formula)

    def _library_pass(self, state: PinvState, pending: Matrix) -> tuple[PinvState, DispatchBranch]:
        d, c = compute_d_c(state, pending)
        try:
            lower = gram_cholesky(c, self.tol, reference=pending)
        except NotPositiveDefiniteError as exc:
            self.logger.debug(f"Cholesky of C^T C unavailable ({exc}), restarting through the inverse Cholesky pass")
            return self._invchol_pass(state, pending)

        # B^T = Omega^{-T} Omega^{-1} C^T
        b_t = solve_triangular(lower.T, solve_triangular(lower, c.T, lower=True), lower=False)
        state = _commit(state, pending, d, b_t)
        return state, DispatchBranch(BranchTag.FULL_RANK, k_reached=pending.shape[1], delta=0)

    def _log_summary(self, report: BlockUpdateReport, count: int) -> None:
        residual = "" if report.mp is None else f", worst MP residual {report.mp.worst():.2e}"
        self.logger.debug(
            f"Appended {count} {report.orientation} in {len(report.branches)} pass(es) "
            f"[{', '.join(report.tags)}]{residual}, {report.elapsed * 1e3:.2f} ms"
        )


def append_columns(
    state: PinvState,
    h_block: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
    backend: Backend = Backend.INVERSE_CHOLESKY,
) -> tuple[PinvState, BlockUpdateReport]:
    """State of ``[A | H]``; see :meth:`BlockPinvUpdater.append_columns`."""
    return BlockPinvUpdater(tol, backend).append_columns(state, h_block)


def append_rows(
    state: PinvState,
    ax_block: ArrayLike,
    tol: Tolerance = DEFAULT_TOLERANCE,
    backend: Backend = Backend.INVERSE_CHOLESKY,
) -> tuple[PinvState, BlockUpdateReport]:
    """State of ``A`` stacked over ``A_x``; see :meth:`BlockPinvUpdater.append_rows`."""
    return BlockPinvUpdater(tol, backend).append_rows(state, ax_block)
