"""
Tests for the matrix text format and MatrixLoader.
"""

import numpy as np
import pytest

from core.matrix_io import MatrixFormatError, MatrixLoader, format_matrix_text, parse_matrix_text


class TestParseMatrixText:
    def test_parses_scientific_notation(self):
        a = parse_matrix_text("2 2\n1 2.5e-1\n-3E2 0\n")
        np.testing.assert_array_equal(a, [[1.0, 0.25], [-300.0, 0.0]])

    def test_ignores_blank_lines(self):
        assert parse_matrix_text("\n1 3\n\n1 2 3\n\n").shape == (1, 3)

    def test_empty_matrix(self):
        assert parse_matrix_text("0 3\n").shape == (0, 3)

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("", 1, "empty input"),
            ("2\n1\n2\n", 1, "header"),
            ("2 x\n1\n2\n", 1, "integers"),
            ("2 2\n1 2\n", 2, "expected 2 data rows"),
            ("2 2\n1 2\n3\n", 3, "expected 2 values"),
            ("1 2\n1 abc\n", 2, "not a decimal"),
            ("1 2\n1 nan\n", 2, "NaN or Inf"),
            ("-1 2\n", 1, "negative"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line, message):
        with pytest.raises(MatrixFormatError, match=message) as excinfo:
            parse_matrix_text(text, "H.mat")
        assert excinfo.value.line == line
        assert excinfo.value.path == "H.mat"
        assert str(excinfo.value).startswith(f"H.mat:{line}:")

    def test_format_error_is_value_error(self):
        assert issubclass(MatrixFormatError, ValueError)


class TestFormatMatrixText:
    def test_header_and_rows(self):
        text = format_matrix_text(np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert text.splitlines() == ["2 2", "1 2", "3 4"]

    def test_seventeen_significant_digits_are_exact(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((4, 3)) * 10.0 ** rng.integers(-8, 8, size=(4, 3))
        assert np.array_equal(parse_matrix_text(format_matrix_text(a)), a)


class TestMatrixLoader:
    @pytest.fixture
    def matrix_file(self, tmp_path):
        path = tmp_path / "A.mat"
        path.write_text("2 1\n3\n4\n")
        return path

    def test_load(self, matrix_file):
        np.testing.assert_array_equal(MatrixLoader(matrix_file).load(), [[3.0], [4.0]])

    def test_load_is_cached_until_forced(self, matrix_file):
        loader = MatrixLoader(matrix_file)
        first = loader.load()
        matrix_file.write_text("1 1\n7\n")

        assert loader.load() is first
        np.testing.assert_array_equal(loader.load(force=True), [[7.0]])

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            MatrixLoader(tmp_path / "missing.mat").load()

    def test_unsupported_suffix(self, tmp_path):
        path = tmp_path / "A.csv"
        path.write_text("1 1\n1\n")
        with pytest.raises(ValueError, match="Unsupported"):
            MatrixLoader(path).load()

    def test_malformed_file_reports_path(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 2\n1 2\n3 oops\n")
        with pytest.raises(MatrixFormatError) as excinfo:
            MatrixLoader(path).load()
        assert excinfo.value.line == 3
        assert "bad.txt" in str(excinfo.value)

    def test_save_creates_directories(self, tmp_path):
        path = tmp_path / "out" / "Aplus.mat"
        a = np.array([[0.1, 1.0 / 3.0]])

        written = MatrixLoader(path).save(a)

        assert written == path
        np.testing.assert_array_equal(MatrixLoader(path).load(), a)
