"""
Tests for the wall-clock benchmark.
"""

import pytest

from harness.bench import BENCH_COLUMNS, Bencher, BenchReport
from harness.config import HarnessConfig
from harness.corpus import CorpusSpec, RankPattern


@pytest.fixture
def bencher():
    return Bencher(HarnessConfig())


@pytest.fixture
def small_spec():
    return CorpusSpec(m=10, n=6, p=4, rank_pattern=RankPattern.MIXED, seed=42, count=3)


class TestBencher:
    def test_table_layout(self, bencher, small_spec):
        report = bencher.run(small_spec, repetitions=2)
        assert isinstance(report, BenchReport)
        assert list(report.table.columns) == BENCH_COLUMNS
        assert len(report.table) == 3
        assert (report.table[["block_invchol_us", "block_chol_us", "oracle_us"]] > 0).all().all()

    def test_invalid_repetitions(self, bencher, small_spec):
        with pytest.raises(ValueError, match="repetitions"):
            bencher.run(small_spec, repetitions=0)

    def test_digest_is_reproducible(self, small_spec):
        first = Bencher().run(small_spec, repetitions=1)
        second = Bencher().run(small_spec, repetitions=3)
        assert first.digest == second.digest

    def test_digest_depends_on_seed(self, bencher, small_spec):
        other = CorpusSpec(m=10, n=6, p=4, rank_pattern=RankPattern.MIXED, seed=43, count=3)
        assert bencher.run(small_spec, 1).digest != bencher.run(other, 1).digest

    def test_single_column(self, bencher):
        report = bencher.run(CorpusSpec(m=5, n=3, p=1, seed=0), repetitions=1)
        assert report.table.loc[0, "p"] == 1

    def test_rows(self, bencher):
        report = bencher.run(CorpusSpec(m=6, n=8, q=3, seed=0, rows=True), repetitions=1)
        assert report.table.loc[0, "p"] == 3

    def test_csv_and_text(self, bencher, small_spec, tmp_path):
        report = bencher.run(small_spec, repetitions=1)
        path = report.to_csv(tmp_path / "bench" / "timings.csv")
        assert path.read_text().splitlines()[0] == ",".join(BENCH_COLUMNS)
        assert f"digest={report.digest}" in report.to_text()

    @pytest.mark.slow
    def test_block_beats_recursion(self, bencher):
        report = bencher.run(CorpusSpec(m=200, n=100, p=16, seed=42), repetitions=20)
        row = report.table.iloc[0]
        assert row["block_invchol_us"] < row["oracle_us"]
