"""Matrix text format loading and writing.

Format:
- line 1: ``rows cols`` as decimal integers
- then ``rows`` lines of ``cols`` whitespace-separated floats (scientific notation accepted)
- writers emit 17 significant digits so a write/read cycle is exact
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

import numpy as np

from .logger import get_logger
from .matrix_core import Matrix, as_matrix

SUPPORTED_SUFFIXES = {".mat", ".txt"}


class MatrixFormatError(ValueError):
    """Parse failure in the matrix text format, with file/line context."""

    def __init__(self, message: str, path: Union[str, Path] = "<string>", line: int = 0) -> None:
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


def parse_matrix_text(text: str, source: Union[str, Path] = "<string>") -> Matrix:
    """Parse the text format. Blank lines are ignored; line numbers refer to the raw text."""
    lines = [(number, raw.split()) for number, raw in enumerate(text.splitlines(), start=1) if raw.strip()]
    if not lines:
        raise MatrixFormatError("empty input, expected a 'rows cols' header", source, 1)

    header_line, header = lines[0]
    if len(header) != 2:
        raise MatrixFormatError(f"header must hold 'rows cols', got {len(header)} fields", source, header_line)
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError as exc:
        raise MatrixFormatError(f"header values must be integers: {' '.join(header)}", source, header_line) from exc
    if rows < 0 or cols < 0:
        raise MatrixFormatError(f"negative dimensions {rows}x{cols}", source, header_line)

    body = lines[1:]
    if len(body) != rows:
        last = body[-1][0] if body else header_line
        raise MatrixFormatError(f"expected {rows} data rows, found {len(body)}", source, last)

    data = np.empty((rows, cols), dtype=np.float64)
    for i, (number, fields) in enumerate(body):
        if len(fields) != cols:
            raise MatrixFormatError(f"expected {cols} values, found {len(fields)}", source, number)
        try:
            data[i] = [float(field) for field in fields]
        except ValueError as exc:
            raise MatrixFormatError(f"not a decimal number in {' '.join(fields)}", source, number) from exc
        if not np.all(np.isfinite(data[i])):
            raise MatrixFormatError("NaN or Inf entries are not accepted", source, number)
    return data


def format_matrix_text(a: Matrix) -> str:
    """Render ``a`` in the text format with 17 significant digits."""
    a = as_matrix(a)
    rows = [f"{a.shape[0]} {a.shape[1]}"]
    rows.extend(" ".join(f"{value:.17g}" for value in row) for row in a)
    return "\n".join(rows) + "\n"


class MatrixLoader:
    """Load one matrix file, keeping the parsed matrix in memory."""

    def __init__(self, path: Union[str, Path]) -> None:
        self.path = Path(path)
        self._matrix: Optional[Matrix] = None
        self.logger = get_logger()
        self.logger.debug(f"MatrixLoader initialized for {self.path}")

    def load(self, force: bool = False) -> Matrix:
        """Load the matrix from the configured path.

        Parameters
        ----------
        force: bool
            If True, re-read the file even if already loaded.
        """
        if self._matrix is not None and not force:
            self.logger.debug("Returning cached matrix")
            return self._matrix
        if not self.path.exists():
            self.logger.error(f"Matrix file not found: {self.path}")
            raise FileNotFoundError(f"Matrix file not found: {self.path}")
        if self.path.suffix not in SUPPORTED_SUFFIXES:
            self.logger.error(f"Unsupported file format: {self.path.suffix}")
            raise ValueError(f"Unsupported file format: {self.path.suffix}")

        self.logger.info(f"Loading matrix from {self.path}")
        try:
            self._matrix = parse_matrix_text(self.path.read_text(), self.path)
        except MatrixFormatError as exc:
            self.logger.error(str(exc))
            raise
        self.logger.debug(f"Matrix loaded: {self._matrix.shape}")
        return self._matrix

    def save(self, a: Matrix) -> Path:
        """Write ``a`` to the configured path and remember it as the loaded matrix."""
        if self.path.suffix not in SUPPORTED_SUFFIXES:
            self.logger.error(f"Unsupported file format: {self.path.suffix}")
            raise ValueError(f"Unsupported file format: {self.path.suffix}")
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(format_matrix_text(a))
        self._matrix = as_matrix(a)
        self.logger.info(f"Matrix {self._matrix.shape} written to {self.path}")
        return self.path
