"""User-facing surface: corpora, verification sweeps, benchmarks and the CLI."""

from .bench import BenchReport, Bencher
from .config import HarnessConfig
from .corpus import CorpusInstance, CorpusSpec, RankPattern, generate
from .theorems import TheoremOutcome, run_theorem_suites
from .verifier import InstanceResult, RunReport, Verifier

__all__ = [
    "BenchReport",
    "Bencher",
    "CorpusInstance",
    "CorpusSpec",
    "HarnessConfig",
    "InstanceResult",
    "RankPattern",
    "RunReport",
    "TheoremOutcome",
    "Verifier",
    "generate",
    "run_theorem_suites",
]
