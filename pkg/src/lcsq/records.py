"""Serialized results and the on-disk result cache."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import ENGINE
from .intlat import AbGroup
from .series import GroupReport, TotalDegree, as_cell

CACHE_ENV = "LCSQ_CACHE_DIR"


@dataclass(frozen=True)
class ResultRecord:
    n: int
    relation: str | None
    grading: str
    series: str
    k: int
    cell: tuple | TotalDegree
    rank: int
    invariant_factors: tuple[int, ...]
    engine: str = ENGINE
    ms: int = 0

    @classmethod
    def from_report(cls, report: GroupReport) -> ResultRecord:
        q = report.query
        grading = "total" if isinstance(q.cell, TotalDegree) else "multi"
        return cls(q.presentation.n, q.presentation.relation_text, grading, q.series, q.k,
                   q.cell, report.group.rank, report.group.invariant_factors, ENGINE, report.ms)

    @property
    def group(self) -> AbGroup:
        return AbGroup(self.rank, self.invariant_factors)

    def key(self) -> tuple:
        return cache_key(self.n, self.relation, self.series, self.k, self.cell)

    def to_json(self) -> dict:
        cell = {"d": self.cell.d} if isinstance(self.cell, TotalDegree) else list(self.cell)
        return {
            "presentation": {"n": self.n, "relation": self.relation},
            "grading": self.grading,
            "series": self.series,
            "k": self.k,
            "cell": cell,
            "rank": self.rank,
            "invariant_factors": list(self.invariant_factors),
            "engine": self.engine,
            "ms": self.ms,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict) -> ResultRecord:
        pres = obj["presentation"]
        return cls(
            n=int(pres["n"]),
            relation=pres["relation"],
            grading=obj["grading"],
            series=obj["series"],
            k=int(obj["k"]),
            cell=as_cell(obj["cell"]),
            rank=int(obj["rank"]),
            invariant_factors=tuple(int(d) for d in obj["invariant_factors"]),
            engine=obj["engine"],
            ms=int(obj["ms"]),
        )

    @classmethod
    def loads(cls, text: str) -> ResultRecord:
        return cls.from_json(json.loads(text))


def fingerprint(n: int, relation: str | None) -> str:
    blob = json.dumps({"n": n, "relation": relation}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def cache_key(n: int, relation: str | None, series: str, k: int, cell) -> tuple:
    cell = as_cell(cell)
    c = ("d", cell.d) if isinstance(cell, TotalDegree) else tuple(cell)
    return (fingerprint(n, relation), series, k, c)


class ResultCache:
    """One JSON line per file, one file per key; writes go through a rename."""

    def __init__(self, root: str | os.PathLike | None = None):
        root = root or os.environ.get(CACHE_ENV)
        if not root:
            raise ValueError(f"no cache directory given and {CACHE_ENV} is unset")
        self.root = Path(root)

    def _path(self, key: tuple) -> Path:
        name = hashlib.sha256(repr(key).encode()).hexdigest()[:32]
        return self.root / f"{name}.jsonl"

    def load(self, key: tuple) -> ResultRecord | None:
        path = self._path(key)
        try:
            text = path.read_text()
        except FileNotFoundError:
            return None
        for line in text.splitlines():
            if not line.strip():
                continue
            try:
                rec = ResultRecord.loads(line)
            except (ValueError, KeyError, TypeError):
                continue
            if rec.engine == ENGINE and rec.key() == key:
                return rec
        return None

    def store(self, record: ResultRecord) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(record.key())
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(record.dumps() + "\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path


def cache_roundtrip(record: ResultRecord, cache: ResultCache) -> ResultRecord | None:
    cache.store(record)
    return cache.load(record.key())

