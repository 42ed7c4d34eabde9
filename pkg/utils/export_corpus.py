"""Export a generated corpus as matrix text files for ``pinvtool pinv`` and ``verify --files``.

Usage:
    python -m utils.export_corpus [spec.json] [output_dir]

Output (default ``data/corpus``):
    <id>_A.mat, <id>_H.mat : base matrix and appended block of each instance
    <id>_Aplus.mat         : oracle pseudoinverse of the base matrix
    index.csv              : one row per instance (id, m, n, p, orientation, tags, files)
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Union

import pandas as pd

# src/ holds the importable packages
root_dir = Path(__file__).parent.parent
sys.path.insert(0, str(root_dir / "src"))

from core.greville import greville_full_pinv  # noqa: E402
from core.logger import get_logger  # noqa: E402
from core.matrix_core import Tolerance  # noqa: E402
from core.matrix_io import MatrixLoader  # noqa: E402
from harness.corpus import CorpusSpec, generate  # noqa: E402

DEFAULT_OUTPUT_DIR = Path("data/corpus")


class CorpusExporter:
    """Write every instance of a corpus spec to disk."""

    def __init__(self, output_dir: Union[str, Path] = DEFAULT_OUTPUT_DIR, tol: Tolerance | None = None):
        self.output_dir = Path(output_dir)
        self.tol = tol or Tolerance()
        self.logger = get_logger()

    def export(self, spec: CorpusSpec) -> pd.DataFrame:
        """Write the matrices of ``spec`` and return the index table (also saved as ``index.csv``)."""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        records = []
        for instance in generate(spec):
            stem = f"{instance.id:04d}"
            files = {
                "a_file": MatrixLoader(self.output_dir / f"{stem}_A.mat").save(instance.a),
                "block_file": MatrixLoader(self.output_dir / f"{stem}_H.mat").save(instance.block),
                "pinv_file": MatrixLoader(self.output_dir / f"{stem}_Aplus.mat").save(greville_full_pinv(instance.a, self.tol)),
            }
            records.append(
                {
                    "id": instance.id,
                    **instance.shape,
                    "orientation": "rows" if instance.rows else "columns",
                    "tags": "".join(instance.tags),
                    **{key: path.name for key, path in files.items()},
                }
            )

        index = pd.DataFrame(records)
        index_path = self.output_dir / "index.csv"
        index.to_csv(index_path, index=False)
        self.logger.info(f"Exported {len(records)} instance(s) of spec {spec.get_hash()} to {self.output_dir}")
        return index


def main(argv: list[str] | None = None) -> None:
    """Point d'entrée principal."""
    argv = sys.argv[1:] if argv is None else argv
    spec = CorpusSpec.from_file(argv[0]) if argv else CorpusSpec(count=10, rank_pattern="mixed", vary_shapes=True, m=8, n=5, p=4)
    output_dir = Path(argv[1]) if len(argv) > 1 else DEFAULT_OUTPUT_DIR
    CorpusExporter(output_dir).export(spec)


if __name__ == "__main__":
    main()
