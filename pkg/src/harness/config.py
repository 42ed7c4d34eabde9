"""
Run options and acceptance thresholds of the verification harness.

Defaults are the thresholds the acceptance campaign checks against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from core.block_update import Backend
from core.matrix_core import Tolerance


@dataclass
class HarnessConfig:
    """Acceptance thresholds and run options shared by verify, bench and the theorem suites.

    Attributes:
        tol: Tolerance driving the zero-residual decisions of the updates.
        backend: how the full-rank part of a pass is computed.
        oracle_rel: max-abs deviation from the oracle allowed, relative to ``1 + |[A|H]|_F``.
        mp_rel: Penrose residual allowed, relative to ``1 + |A|_F``.
        branch_rel: pairwise agreement of the three ``C = 0`` formulas.
        backend_abs: agreement of the two backends.
        eta_rel: agreement of the short and long forms of ``eta``.
        orthogonality_rel: bound on ``|C^T A A^+|_F`` relative to ``1 + |A|_F |C|_F``.
        duality_abs: agreement of the row update and the transposed column update.
        cache_dir: directory of the oracle cache; ``None`` disables caching.
        jobs: worker threads for instance sweeps.
    """

    tol: Tolerance = field(default_factory=Tolerance)
    backend: Backend = Backend.INVERSE_CHOLESKY
    oracle_rel: float = 1e-8
    mp_rel: float = 1e-8
    branch_rel: float = 1e-9
    backend_abs: float = 1e-8
    eta_rel: float = 1e-10
    orthogonality_rel: float = 1e-9
    duality_abs: float = 1e-10
    cache_dir: Optional[Path] = None
    jobs: int = 1

    def __post_init__(self) -> None:
        self.backend = Backend(self.backend)
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")
