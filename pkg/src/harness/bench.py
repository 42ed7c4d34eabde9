"""Wall-clock benchmarks: one-pass block update vs. the p-iteration recursion."""

from __future__ import annotations

import hashlib
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Union

import pandas as pd

from core.block_update import Backend, BlockPinvUpdater
from core.greville import PinvState, greville_append_columns
from core.logger import get_logger

from .config import HarnessConfig
from .corpus import CorpusInstance, CorpusSpec, generate

BENCH_COLUMNS = ["id", "m", "n", "p", "block_invchol_us", "block_chol_us", "oracle_us", "speedup"]


@dataclass
class BenchReport:
    """Median timings per instance plus a digest of the numerical outputs (timings excluded)."""

    table: pd.DataFrame
    digest: str
    repetitions: int

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.table.to_csv(path, index=False)
        return path

    def to_text(self) -> str:
        return self.table.to_string(index=False) + f"\n\nrepetitions={self.repetitions} digest={self.digest}"


def _median_us(func: Callable[[], PinvState], repetitions: int) -> tuple[float, PinvState]:
    timings = []
    result = None
    for _ in range(repetitions):
        start = time.perf_counter()
        result = func()
        timings.append((time.perf_counter() - start) * 1e6)
    return statistics.median(timings), result


class Bencher:
    """Time the block update with both backends against the column-by-column recursion."""

    def __init__(self, config: HarnessConfig | None = None):
        self.config = config or HarnessConfig()
        self.logger = get_logger()
        self._updaters = {
            backend: BlockPinvUpdater(self.config.tol, backend, compute_residuals=False) for backend in Backend
        }

    def _time_instance(self, instance: CorpusInstance, repetitions: int, digest) -> dict:
        state = PinvState.from_matrix(instance.a, self.config.tol)
        row = {"id": instance.id, **instance.shape}
        for backend, column in ((Backend.INVERSE_CHOLESKY, "block_invchol_us"), (Backend.LIBRARY_CHOLESKY, "block_chol_us")):
            updater = self._updaters[backend]
            if instance.rows:
                row[column], result = _median_us(lambda: updater.append_rows(state, instance.block)[0], repetitions)
            else:
                row[column], result = _median_us(lambda: updater.append_columns(state, instance.block)[0], repetitions)
            digest.update(result.a_plus.tobytes())

        if instance.rows:
            # the recursion appends columns, so rows go through the transposed state
            def oracle() -> PinvState:
                return greville_append_columns(state.transposed(), instance.block.T, self.config.tol).transposed()

        else:

            def oracle() -> PinvState:
                return greville_append_columns(state, instance.block, self.config.tol)

        row["oracle_us"], result = _median_us(oracle, repetitions)
        digest.update(result.a_plus.tobytes())
        row["speedup"] = row["oracle_us"] / row["block_invchol_us"] if row["block_invchol_us"] > 0 else float("nan")
        return row

    def run(self, spec: CorpusSpec, repetitions: int = 5) -> BenchReport:
        """Median wall-clock of every path over ``repetitions`` runs per instance."""
        if repetitions < 1:
            self.logger.error(f"Invalid repetition count: {repetitions}")
            raise ValueError(f"repetitions must be at least 1, got {repetitions}")

        digest = hashlib.sha256()
        rows = [self._time_instance(instance, repetitions, digest) for instance in generate(spec)]
        table = pd.DataFrame(rows, columns=BENCH_COLUMNS)
        self.logger.info(
            f"Benchmarked {len(rows)} instance(s) x {repetitions} rep(s): "
            f"median speedup {table['speedup'].median():.2f}x over the column-by-column recursion"
        )
        return BenchReport(table=table, digest=digest.hexdigest(), repetitions=repetitions)
