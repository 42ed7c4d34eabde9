"""Seeded property suites behind the structural claims of the block updates.

Each suite draws ``trials`` random instances from its own PCG64 stream and
counts the instances that violate the property. The suites are:

- ``projector_invariance``: appending a column from the range of ``A``
  leaves ``A A^+`` unchanged.
- ``c_zero_chain``: if every column of ``C`` is zero, every column-by-column
  residual ``c~_k`` is zero as well.
- ``factor_cholesky_equivalence``: the inverse Cholesky scan factors every
  column of ``C`` exactly when ``gram_cholesky(C)`` succeeds.
- ``range_orthogonality``: ``C^T A A^+ = 0``.
- ``eta_agreement``: ``1 / |c~_k|`` equals the expanded form of ``eta_k``.
- ``branch_agreement``: the three ``C = 0`` formulas give the same ``B^T``.
- ``backend_agreement``: both backends return the same pseudoinverse.
- ``duality``: the row update equals the transposed column update.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.block_update import C_ZERO_TAGS, Backend, BlockPinvUpdater, b_for_c_zero, compute_d_c
from core.greville import PinvState, greville_append_column, projector
from core.invchol import eta_long_form, extend, init_g1, scan_columns
from core.logger import get_logger
from core.matrix_core import NotPositiveDefiniteError, frob_norm, gram_cholesky, max_abs_diff

from .config import HarnessConfig
from .corpus import CorpusSpec, RankPattern, generate


@dataclass
class TheoremOutcome:
    """Trials run, violations found, and the worst measured quantity of a suite."""

    name: str
    trials: int
    failures: int = 0
    worst: float = 0.0

    def observe(self, value: float, ok: bool) -> None:
        self.worst = max(self.worst, value)
        if not ok:
            self.failures += 1

    def to_dict(self) -> dict:
        return {"trials": self.trials, "failures": self.failures, "worst": self.worst}


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, salt])))


def _full_column_rank(rng: np.random.Generator, max_dim: int = 30) -> np.ndarray:
    n = int(rng.integers(1, max_dim // 2 + 1))
    m = int(rng.integers(n + 2, max_dim + 1))
    return rng.standard_normal((m, n))


def projector_invariance(trials: int, seed: int, config: HarnessConfig) -> TheoremOutcome:
    outcome = TheoremOutcome("projector_invariance", trials)
    rng = _rng(seed, 1)
    for _ in range(trials):
        a = rng.standard_normal((int(rng.integers(2, 31)), int(rng.integers(1, 16))))
        state = PinvState.from_matrix(a, config.tol)
        h = a @ rng.standard_normal(a.shape[1])
        after = greville_append_column(state, h, config.tol)
        change = frob_norm(projector(after) - projector(state))
        outcome.observe(change, change <= 1e-9 * (1.0 + frob_norm(a)))
    return outcome


def c_zero_chain(trials: int, seed: int, config: HarnessConfig) -> TheoremOutcome:
    outcome = TheoremOutcome("c_zero_chain", trials)
    rng = _rng(seed, 2)
    for _ in range(trials):
        a = rng.standard_normal((int(rng.integers(2, 31)), int(rng.integers(1, 16))))
        h = a @ rng.standard_normal((a.shape[1], int(rng.integers(1, 13))))
        state = PinvState.from_matrix(a, config.tol)
        _, c = compute_d_c(state, h)
        if not all(config.tol.is_zero(float(c[:, j] @ c[:, j])) for j in range(c.shape[1])):
            outcome.observe(frob_norm(c), False)
            continue
        worst = 0.0
        for j in range(h.shape[1]):
            residual = h[:, j] - state.a @ (state.a_plus @ h[:, j])
            worst = max(worst, float(residual @ residual))
            state = greville_append_column(state, h[:, j], config.tol)
        outcome.observe(worst, config.tol.is_zero(worst))
    return outcome


def factor_cholesky_equivalence(trials: int, seed: int, config: HarnessConfig) -> TheoremOutcome:
    outcome = TheoremOutcome("factor_cholesky_equivalence", trials)
    rng = _rng(seed, 3)
    for _ in range(trials):
        c = _full_column_rank(rng)
        if c.shape[1] > 1 and rng.random() < 0.5:
            j = int(rng.integers(1, c.shape[1]))
            c[:, j] = c[:, :j] @ rng.standard_normal(j)
            if rng.random() < 0.5:
                # near-dependent: residual of order 1e-11, inside the zero test
                c[int(rng.integers(0, c.shape[0])), j] += 3e-6
        _, signal = scan_columns(c, config.tol)
        try:
            gram_cholesky(c, config.tol)
            chol_ok = True
        except NotPositiveDefiniteError:
            chol_ok = False
        outcome.observe(0.0, (signal is None) == chol_ok)
    return outcome


def range_orthogonality(trials: int, seed: int, config: HarnessConfig) -> TheoremOutcome:
    outcome = TheoremOutcome("range_orthogonality", trials)
    rng = _rng(seed, 4)
    for _ in range(trials):
        a = rng.standard_normal((int(rng.integers(1, 31)), int(rng.integers(1, 31))))
        h = rng.standard_normal((a.shape[0], int(rng.integers(1, 13))))
        state = PinvState.from_matrix(a, config.tol)
        _, c = compute_d_c(state, h)
        value = frob_norm(c.T @ projector(state))
        outcome.observe(value, value <= config.orthogonality_rel * (1.0 + frob_norm(a) * frob_norm(c)))
    return outcome


def eta_agreement(trials: int, seed: int, config: HarnessConfig) -> TheoremOutcome:
    outcome = TheoremOutcome("eta_agreement", trials)
    rng = _rng(seed, 5)
    for _ in range(trials):
        p = int(rng.integers(2, 13))
        c = rng.standard_normal((int(rng.integers(2 * p, 31)), p))
        factor = init_g1(c[:, 0], config.tol)
        worst = 0.0
        for j in range(1, p):
            long_form = eta_long_form(factor, c[:, j])
            factor, residual = extend(factor, c[:, j], config.tol)
            short_form = 1.0 / np.sqrt(float(residual.T @ residual))
            worst = max(worst, abs(long_form - short_form) / short_form)
        outcome.observe(worst, worst <= config.eta_rel)
    return outcome


def branch_agreement(trials: int, seed: int, config: HarnessConfig) -> TheoremOutcome:
    outcome = TheoremOutcome("branch_agreement", trials)
    rng = _rng(seed, 6)
    for _ in range(trials):
        a = rng.standard_normal((int(rng.integers(1, 31)), int(rng.integers(1, 31))))
        h = a @ rng.standard_normal((a.shape[1], int(rng.integers(1, 13))))
        state = PinvState.from_matrix(a, config.tol)
        d, _ = compute_d_c(state, h)
        candidates = [b_for_c_zero(state, h, d, config.tol, tag) for tag in C_ZERO_TAGS]
        worst = 0.0
        for i in range(len(candidates)):
            for j in range(i + 1, len(candidates)):
                scale = max(1.0, frob_norm(candidates[i]))
                worst = max(worst, frob_norm(candidates[i] - candidates[j]) / scale)
        outcome.observe(worst, worst <= config.branch_rel)
    return outcome


def backend_agreement(trials: int, seed: int, config: HarnessConfig) -> TheoremOutcome:
    outcome = TheoremOutcome("backend_agreement", trials)
    spec = CorpusSpec(m=30, n=30, p=12, rank_pattern=RankPattern.MIXED, seed=seed, count=trials, vary_shapes=True)
    invchol = BlockPinvUpdater(config.tol, Backend.INVERSE_CHOLESKY, compute_residuals=False)
    library = BlockPinvUpdater(config.tol, Backend.LIBRARY_CHOLESKY, compute_residuals=False)
    for instance in generate(spec):
        state = PinvState.from_matrix(instance.a, config.tol)
        left, _ = invchol.append_columns(state, instance.block)
        right, _ = library.append_columns(state, instance.block)
        diff = max_abs_diff(left.a_plus, right.a_plus)
        outcome.observe(diff, diff <= config.backend_abs)
    return outcome


def duality(trials: int, seed: int, config: HarnessConfig) -> TheoremOutcome:
    outcome = TheoremOutcome("duality", trials)
    spec = CorpusSpec(m=30, n=30, q=12, rank_pattern=RankPattern.MIXED, seed=seed, count=trials, vary_shapes=True, rows=True)
    updater = BlockPinvUpdater(config.tol, config.backend, compute_residuals=False)
    for instance in generate(spec):
        state = PinvState.from_matrix(instance.a, config.tol)
        rows_state, _ = updater.append_rows(state, instance.block)
        cols_state, _ = updater.append_columns(state.transposed(), instance.block.T)
        diff = max_abs_diff(rows_state.a_plus, cols_state.a_plus.T)
        outcome.observe(diff, diff <= config.duality_abs)
    return outcome


SUITES: dict[str, Callable[[int, int, HarnessConfig], TheoremOutcome]] = {
    "projector_invariance": projector_invariance,
    "c_zero_chain": c_zero_chain,
    "factor_cholesky_equivalence": factor_cholesky_equivalence,
    "range_orthogonality": range_orthogonality,
    "eta_agreement": eta_agreement,
    "branch_agreement": branch_agreement,
    "backend_agreement": backend_agreement,
    "duality": duality,
}


def run_theorem_suites(trials: int, seed: int, config: HarnessConfig | None = None) -> dict[str, TheoremOutcome]:
    """Run every suite with ``trials`` instances each."""
    config = config or HarnessConfig()
    logger = get_logger()
    outcomes = {}
    for name, suite in SUITES.items():
        outcomes[name] = suite(trials, seed, config)
        logger.debug(f"Theorem suite {name}: {outcomes[name].failures}/{trials} failures")
    failed = [name for name, outcome in outcomes.items() if outcome.failures]
    logger.info(f"Theorem suites: {len(SUITES) - len(failed)}/{len(SUITES)} clean" + (f", failing: {failed}" if failed else ""))
    return outcomes
