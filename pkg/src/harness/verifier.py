"""Verification sweeps: block update vs. the column-by-column oracle.

For every instance the verifier builds the state of ``A`` with the oracle,
appends the block with :class:`~core.block_update.BlockPinvUpdater`, and
compares the result with the oracle pseudoinverse of the whole matrix. An
instance passes when the maximum absolute deviation is at most
``oracle_rel * (1 + |[A|H]|_F)`` and every Penrose residual is at most
``mp_rel * (1 + |A_final|_F)``.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

import pandas as pd

from core.block_update import BlockPinvUpdater, DispatchBranch
from core.cacheable_mixin import CacheableMixin
from core.greville import MpResiduals, PinvState, greville_full_pinv, mp_residuals
from core.logger import get_logger
from core.matrix_core import Matrix, frob_norm, max_abs_diff
from core.matrix_io import MatrixLoader

from .config import HarnessConfig
from .corpus import CorpusInstance, CorpusSpec, generate
from .theorems import TheoremOutcome, run_theorem_suites


@dataclass
class InstanceResult:
    """Outcome of one verified instance (times in microseconds)."""

    id: int
    shape: dict
    orientation: str
    branches: list[DispatchBranch]
    mp: MpResiduals
    oracle_dev: float
    t_block_us: float
    t_oracle_us: float
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "shape": dict(self.shape),
            "orientation": self.orientation,
            "branches": [branch.to_dict() for branch in self.branches],
            "mp": self.mp.to_dict(),
            "oracle_dev": self.oracle_dev,
            "t_block_us": self.t_block_us,
            "t_oracle_us": self.t_oracle_us,
            "pass": self.passed,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceResult":
        return cls(
            id=int(data["id"]),
            shape={key: int(value) for key, value in data["shape"].items()},
            orientation=data.get("orientation", "columns"),
            branches=[DispatchBranch.from_dict(branch) for branch in data["branches"]],
            mp=MpResiduals.from_dict(data["mp"]),
            oracle_dev=float(data["oracle_dev"]),
            t_block_us=float(data["t_block_us"]),
            t_oracle_us=float(data["t_oracle_us"]),
            passed=bool(data["pass"]),
            note=data.get("note", ""),
        )


@dataclass
class RunReport:
    """Per-instance results plus theorem suite outcomes."""

    instances: list[InstanceResult] = field(default_factory=list)
    theorems: dict[str, dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.instances) and all(
            outcome["failures"] == 0 for outcome in self.theorems.values()
        )

    @property
    def worst_residual(self) -> float:
        return max((result.mp.worst() for result in self.instances), default=0.0)

    @property
    def worst_dev(self) -> float:
        return max((result.oracle_dev for result in self.instances), default=0.0)

    def summary(self) -> dict:
        failed = sum(not result.passed for result in self.instances)
        return {
            "pass": self.passed,
            "worst_residual": self.worst_residual,
            "worst_dev": self.worst_dev,
            "instances": len(self.instances),
            "failed": failed,
            "theorems": self.theorems,
        }

    def to_dict(self) -> dict:
        return {"instances": [result.to_dict() for result in self.instances], "summary": self.summary()}

    def to_json(self, path: Union[str, Path, None] = None) -> str:
        """Serialize the report; also writes it when ``path`` is given."""
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(text)
        return text

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        return cls(
            instances=[InstanceResult.from_dict(item) for item in data["instances"]],
            theorems=dict(data["summary"].get("theorems", {})),
        )

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "id": result.id,
                "m": result.shape["m"],
                "n": result.shape["n"],
                "p": result.shape["p"],
                "branches": " ".join(branch.tag.value for branch in result.branches),
                "worst_mp": result.mp.worst(),
                "oracle_dev": result.oracle_dev,
                "t_block_us": round(result.t_block_us, 1),
                "t_oracle_us": round(result.t_oracle_us, 1),
                "pass": result.passed,
            }
            for result in self.instances
        ]
        return pd.DataFrame(rows, columns=["id", "m", "n", "p", "branches", "worst_mp", "oracle_dev", "t_block_us", "t_oracle_us", "pass"])

    def to_text(self) -> str:
        """Aligned human-readable table followed by the summary."""
        summary = self.summary()
        lines = [self.to_frame().to_string(index=False), ""]
        lines.append(
            f"pass={summary['pass']} instances={summary['instances']} failed={summary['failed']} "
            f"worst_residual={summary['worst_residual']:.3e} worst_dev={summary['worst_dev']:.3e}"
        )
        for name, outcome in self.theorems.items():
            lines.append(f"  {name}: {outcome['failures']}/{outcome['trials']} failures (worst {outcome['worst']:.3e})")
        return "\n".join(lines)


class Verifier(CacheableMixin):
    """Run block updates against the oracle and collect a :class:`RunReport`."""

    def __init__(self, config: Optional[HarnessConfig] = None):
        self.config = config or HarnessConfig()
        super().__init__(cache_dir=self.config.cache_dir)
        self.updater = BlockPinvUpdater(self.config.tol, self.config.backend)
        self.logger = get_logger()

    # ---------- Oracle (cached) ---------- #
    def _timed_oracle(self, a: Matrix) -> tuple[Matrix, float]:
        start = time.perf_counter()
        a_plus = greville_full_pinv(a, self.config.tol)
        return a_plus, (time.perf_counter() - start) * 1e6

    def _oracle(self, operation: str, a: Matrix, key: dict) -> tuple[Matrix, float]:
        params = {**key, "tol": self.config.tol.get_hash(), "shape": list(a.shape)}
        return self.cached_operation(operation, lambda: self._timed_oracle(a), params)

    # ---------- Instances ---------- #
    def check_instance(self, instance: CorpusInstance, spec_hash: str = "") -> InstanceResult:
        key = {"spec": spec_hash, "instance": instance.id}
        base_plus, _ = self._oracle("base", instance.a, key)
        return self._check(instance, PinvState(instance.a, base_plus), key if spec_hash else None)

    def _check(self, instance: CorpusInstance, state: PinvState, key: Optional[dict], note: str = "") -> InstanceResult:
        start = time.perf_counter()
        if instance.rows:
            new_state, report = self.updater.append_rows(state, instance.block)
        else:
            new_state, report = self.updater.append_columns(state, instance.block)
        t_block = (time.perf_counter() - start) * 1e6

        combined = instance.combined
        if key is None:
            oracle, t_oracle = self._timed_oracle(combined)
        else:
            oracle, t_oracle = self._oracle("oracle", combined, key)

        dev = max_abs_diff(new_state.a_plus, oracle)
        mp = report.mp
        # new_state.a is the combined matrix
        norm = frob_norm(combined)
        passed = dev <= self.config.oracle_rel * (1.0 + norm) and mp.passes(self.config.mp_rel, norm)
        if not passed:
            self.logger.warning(f"Instance {instance.id} failed: oracle deviation {dev:.3e}, worst MP residual {mp.worst():.3e}")
        return InstanceResult(
            id=instance.id,
            shape=instance.shape,
            orientation=report.orientation,
            branches=list(report.branches),
            mp=mp,
            oracle_dev=dev,
            t_block_us=t_block,
            t_oracle_us=t_oracle,
            passed=passed,
            note=note,
        )

    def run(self, instances: Iterable[CorpusInstance], spec_hash: str = "") -> RunReport:
        """Check every instance (in a thread pool when ``jobs > 1``); results are sorted by id."""
        instances = list(instances)
        if self.config.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.config.jobs) as pool:
                results = list(pool.map(lambda item: self.check_instance(item, spec_hash), instances))
        else:
            results = [self.check_instance(item, spec_hash) for item in instances]
        report = RunReport(instances=sorted(results, key=lambda result: result.id))
        self.logger.info(
            f"Verified {len(results)} instance(s): {sum(r.passed for r in results)} passed, "
            f"worst residual {report.worst_residual:.2e}, worst deviation {report.worst_dev:.2e}"
        )
        return report

    def verify_spec(self, spec: CorpusSpec, theorem_trials: int = 0) -> RunReport:
        """Generate the corpus of ``spec``, verify it, and optionally run the theorem suites."""
        self.logger.info(f"Verifying corpus {spec.get_hash()} ({spec.count} instance(s), {spec.rank_pattern.value})")
        report = self.run(generate(spec), spec.get_hash())
        if theorem_trials > 0:
            outcomes: dict[str, TheoremOutcome] = run_theorem_suites(theorem_trials, spec.seed, self.config)
            report.theorems = {name: outcome.to_dict() for name, outcome in outcomes.items()}
        return report

    def verify_files(
        self,
        a_path: Union[str, Path],
        block_path: Union[str, Path],
        pinv_path: Union[str, Path, None] = None,
        rows: bool = False,
    ) -> RunReport:
        """Verify an update of matrices read from text files.

        A supplied base pseudoinverse is checked against the Penrose conditions
        first; when it fails, the update is not attempted and the report fails.
        """
        a = MatrixLoader(a_path).load()
        block = MatrixLoader(block_path).load()
        instance = CorpusInstance(0, a, block, rows)

        if pinv_path is None:
            return RunReport(instances=[self._check(instance, PinvState.from_matrix(a, self.config.tol), None)])

        state = PinvState(a, MatrixLoader(pinv_path).load())
        base_mp = mp_residuals(state.a, state.a_plus)
        if not base_mp.passes(self.config.mp_rel, frob_norm(a)):
            self.logger.error(f"Supplied pseudoinverse {pinv_path} fails the Penrose conditions (worst {base_mp.worst():.3e})")
            oracle, t_oracle = self._timed_oracle(a)
            dev = max_abs_diff(state.a_plus, oracle)
            result = InstanceResult(
                id=0,
                shape=instance.shape,
                orientation="rows" if rows else "columns",
                branches=[],
                mp=base_mp,
                oracle_dev=dev if math.isfinite(dev) else float("inf"),
                t_block_us=0.0,
                t_oracle_us=t_oracle,
                passed=False,
                note="supplied pseudoinverse fails the Penrose conditions",
            )
            return RunReport(instances=[result])
        return RunReport(instances=[self._check(instance, state, None, note="supplied base pseudoinverse")])
