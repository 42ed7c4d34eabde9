"""Deterministic test corpora for the block updates.

Every instance is drawn from its own numpy ``PCG64`` stream, spawned from
``SeedSequence(spec.seed)``, so a spec always reproduces the same bytes on
any platform.

Column tags (one per appended column, or row in the row orientation):

- ``f`` fresh random column
- ``r`` column in the range of ``A`` (``A w``)
- ``z`` exact zero column
- ``d`` combination of earlier appended columns plus a range component;
  its ``C`` column is non-zero but its residual ``c~`` is zero
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np

from core.logger import get_logger
from core.matrix_core import Matrix

MIXED_TAGS = ("f", "r", "z", "d")


class RankPattern(str, Enum):
    FULL = "full"
    IN_RANGE = "in_range"
    ZERO_COLS = "zero_cols"
    MIXED = "mixed"


PATTERN_TAG = {RankPattern.FULL: "f", RankPattern.IN_RANGE: "r", RankPattern.ZERO_COLS: "z"}


@dataclass(frozen=True)
class CorpusSpec:
    """Recipe for a corpus of ``(A, H)`` or ``(A, A_x)`` instances.

    ``p`` is the number of appended columns, ``q`` the number of appended rows
    (used when ``rows`` is set). With ``vary_shapes`` each instance draws its
    dimensions uniformly in ``[1, bound]``.
    """

    m: int = 6
    n: int = 3
    p: int = 3
    q: int = 2
    rank_pattern: RankPattern = RankPattern.FULL
    seed: int = 0
    scale: float = 1.0
    tags: tuple[str, ...] = ()
    count: int = 1
    vary_shapes: bool = False
    rows: bool = False

    def __post_init__(self) -> None:
        self._check_types()
        object.__setattr__(self, "rank_pattern", RankPattern(self.rank_pattern))
        object.__setattr__(self, "tags", tuple(self.tags))
        for name in ("m", "n", "p", "q", "count"):
            if getattr(self, name) < 1:
                raise ValueError(f"invalid spec: {name} must be at least 1, got {getattr(self, name)}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"invalid spec: seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.scale > 0:
            raise ValueError(f"invalid spec: scale must be positive, got {self.scale}")
        if self.tags:
            unknown = sorted(set(self.tags) - set(MIXED_TAGS))
            if unknown:
                raise ValueError(f"invalid spec: unknown column tags {unknown}, expected some of {MIXED_TAGS}")
            if self.rank_pattern is not RankPattern.MIXED:
                raise ValueError("invalid spec: tags are only meaningful with the mixed pattern")
            if self.vary_shapes:
                raise ValueError("invalid spec: explicit tags fix the block width and cannot vary")
            if len(self.tags) != self.width:
                raise ValueError(f"invalid spec: {len(self.tags)} tags for a block of width {self.width}")

    def _check_types(self) -> None:
        # JSON specs arrive untyped; bool is rejected where an int is expected
        for name in ("m", "n", "p", "q", "count", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"invalid spec: {name} must be an integer, got {value!r}")
        if isinstance(self.scale, bool) or not isinstance(self.scale, (int, float)):
            raise ValueError(f"invalid spec: scale must be a number, got {self.scale!r}")
        for name in ("vary_shapes", "rows"):
            if not isinstance(getattr(self, name), bool):
                raise ValueError(f"invalid spec: {name} must be true or false, got {getattr(self, name)!r}")
        if isinstance(self.tags, str) or not isinstance(self.tags, (list, tuple)):
            raise ValueError(f"invalid spec: tags must be a list of column tags, got {self.tags!r}")
        if not all(isinstance(tag, str) for tag in self.tags):
            raise ValueError(f"invalid spec: tags must be strings, got {list(self.tags)!r}")

    @property
    def width(self) -> int:
        return self.q if self.rows else self.p

    def to_dict(self) -> dict:
        data = asdict(self)
        data["rank_pattern"] = self.rank_pattern.value
        data["tags"] = list(self.tags)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusSpec":
        known = {name for name in cls.__dataclass_fields__}
        extra = sorted(set(data) - known)
        if extra:
            raise ValueError(f"invalid spec: unknown fields {extra}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "CorpusSpec":
        """Load a spec from a JSON object file."""
        path = Path(path)
        logger = get_logger()
        if not path.exists():
            logger.error(f"Spec file not found: {path}")
            raise FileNotFoundError(f"Spec file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            logger.error(f"Spec file {path} is not valid JSON: {exc}")
            raise ValueError(f"invalid spec: {path}:{exc.lineno}: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ValueError(f"invalid spec: {path} must hold a JSON object")
        return cls.from_dict(data)

    def get_hash(self) -> str:
        """Stable hash for cache keys."""
        return hashlib.md5(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class CorpusInstance:
    """One base matrix ``a`` with the block to append; ``block`` holds rows when ``rows`` is set."""

    id: int
    a: Matrix
    block: Matrix
    rows: bool = False
    tags: tuple[str, ...] = field(default=())

    @property
    def combined(self) -> Matrix:
        return np.vstack([self.a, self.block]) if self.rows else np.hstack([self.a, self.block])

    @property
    def shape(self) -> dict:
        m, n = self.a.shape
        width = self.block.shape[0] if self.rows else self.block.shape[1]
        return {"m": m, "n": n, "p": width}


def _draw_tags(rng: np.random.Generator, spec: CorpusSpec, width: int) -> tuple[str, ...]:
    if spec.rank_pattern is not RankPattern.MIXED:
        return (PATTERN_TAG[spec.rank_pattern],) * width
    if spec.tags:
        return spec.tags
    return tuple(str(tag) for tag in rng.choice(MIXED_TAGS, size=width))


def _column_problem(rng: np.random.Generator, m: int, n: int, tags: tuple[str, ...], scale: float) -> tuple[Matrix, Matrix]:
    a = scale * rng.standard_normal((m, n))
    block = np.zeros((m, len(tags)))
    for j, tag in enumerate(tags):
        if tag == "f":
            block[:, j] = scale * rng.standard_normal(m)
        elif tag == "r" or (tag == "d" and j == 0):
            block[:, j] = a @ rng.standard_normal(n)
        elif tag == "d":
            block[:, j] = block[:, :j] @ rng.standard_normal(j) + a @ rng.standard_normal(n)
        # "z" stays zero
    return a, block


def generate(spec: CorpusSpec) -> list[CorpusInstance]:
    """Build the corpus described by ``spec``; the same spec always yields identical arrays."""
    instances = []
    for idx, child in enumerate(np.random.SeedSequence(spec.seed).spawn(spec.count)):
        rng = np.random.Generator(np.random.PCG64(child))
        if spec.vary_shapes:
            m, n = int(rng.integers(1, spec.m + 1)), int(rng.integers(1, spec.n + 1))
            width = int(rng.integers(1, spec.width + 1))
        else:
            m, n, width = spec.m, spec.n, spec.width
        tags = _draw_tags(rng, spec, width)

        if spec.rows:
            # rows of A_x relate to the row space of A as columns of A_x^T do to the range of A^T
            a_t, block_t = _column_problem(rng, n, m, tags, spec.scale)
            instances.append(CorpusInstance(idx, np.ascontiguousarray(a_t.T), np.ascontiguousarray(block_t.T), True, tags))
        else:
            a, block = _column_problem(rng, m, n, tags, spec.scale)
            instances.append(CorpusInstance(idx, a, block, False, tags))

    get_logger().debug(f"Generated {len(instances)} instance(s) for spec {spec.get_hash()}")
    return instances
