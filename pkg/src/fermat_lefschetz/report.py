"""Report rows, the on-disk result cache, and survey orchestration."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import __version__
from .criteria import MODES, ClassificationRecord, classify
from .errors import EngineError, InputError
from .residue import build_context, enumerate_alphas, is_prime, orbit_representatives
from .slopes import slope_deviation

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CACHE_ENV = "FERMAT_LEFSCHETZ_CACHE"

ROW_FIELDS = [
    "schema_version", "engine_version", "p", "l", "f", "alpha", "mode", "rule", "verdict",
    "verdict_by_rank", "verdict_by_characters", "verdict_by_E", "agreement", "witnesses",
    "h_alpha", "h_alpha_size", "center_degree", "r", "brauer_order", "dimension", "ta_rank",
    "bridge_ok", "det_factorization_ok", "slopes",
]


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    num, den = s.split("/")
    return Fraction(int(num), int(den))


def record_to_row(rec: ClassificationRecord, elapsed: Optional[float] = None) -> dict:
    """Flatten a record into a self-describing row; slopes as ``num/den`` strings."""
    row = rec.to_dict()
    row["schema_version"] = SCHEMA_VERSION
    row["engine_version"] = __version__
    if rec.brauer_order is not None:
        ctx = build_context(rec.p, rec.l)
        row["slopes"] = [
            format_rational(slope_deviation(rec.alpha, ctx, c) + Fraction(1, 2)) for c in ctx.coset_reps_H
        ]
    else:
        row["slopes"] = None
    out = {k: row.get(k) for k in ROW_FIELDS}
    if elapsed is not None:
        out["elapsed_ms"] = round(elapsed * 1000, 3)
    return out


def row_to_record(row: dict) -> ClassificationRecord:
    return ClassificationRecord.from_dict(row)


def dumps_row(row: dict) -> str:
    return json.dumps(row, sort_keys=True, separators=(",", ":"))


def render_rows(rows: Sequence[dict], fmt: str, fields: Sequence[str] = ROW_FIELDS) -> str:
    """JSON lines or CSV; CSV columns follow ``fields`` then any extra keys sorted."""
    if fmt == "json":
        return "".join(dumps_row(r) + "\n" for r in rows)
    if fmt == "csv":
        keys = list(fields)
        keys += sorted({k for r in rows for k in r} - set(keys))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([_csv_cell(r.get(k)) for k in keys])
        return buf.getvalue()
    raise InputError(f"unknown format {fmt!r}")


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, separators=(",", ":"))
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def resolve_cache_path(flag: Optional[str]) -> Optional[str]:
    return flag or os.environ.get(CACHE_ENV) or None


def cache_key(p: int, l: int, alpha: Sequence[int], mode: str) -> str:
    return f"{p}|{l}|{','.join(map(str, alpha))}|{mode}|{__version__}"


class ResultCache:
    """Append-only JSON-lines store of rows keyed by input and engine version."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.rows: Dict[str, dict] = {}
        self._pending: List[Tuple[str, dict]] = []
        if path and os.path.exists(path):
            with open(path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    entry = json.loads(line)
                    self.rows[entry["key"]] = entry["row"]

    def get(self, key: str) -> Optional[dict]:
        return self.rows.get(key)

    def put(self, key: str, row: dict) -> None:
        if key not in self.rows:
            self.rows[key] = row
            self._pending.append((key, row))

    def flush(self) -> None:
        if not self.path or not self._pending:
            return
        Path(self.path).parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            for key, row in self._pending:
                fh.write(json.dumps({"key": key, "row": row}, sort_keys=True, separators=(",", ":")) + "\n")
        self._pending.clear()


@dataclass
class SurveyConfig:
    p_list: List[int]
    l_list: List[int]
    mode: str = "fast"
    dedupe: bool = True
    output: Optional[str] = None
    format: str = "json"
    workers: int = 1
    cache: Optional[str] = None

    def __post_init__(self):
        for p in self.p_list:
            if not is_prime(p):
                raise InputError(f"p={p} is not prime")
        for l in self.l_list:
            if not is_prime(l) or l == 2:
                raise InputError(f"l={l} is not an odd prime")
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if self.format not in ("json", "csv"):
            raise InputError(f"unknown format {self.format!r}")
        if self.workers < 1:
            raise InputError("workers must be positive")

    def pairs(self) -> List[Tuple[int, int]]:
        return [(p, l) for l in self.l_list for p in self.p_list if p != l]

    def tasks(self) -> List[Tuple[int, int, Tuple[int, int, int], str]]:
        out = []
        for p, l in self.pairs():
            alphas = orbit_representatives(l) if self.dedupe else enumerate_alphas(l)
            out.extend((p, l, a, self.mode) for a in alphas)
        return out


def _run_task(task) -> dict:
    p, l, alpha, mode = task
    rec = classify(alpha, build_context(p, l), mode)
    return record_to_row(rec)


@dataclass
class SurveyResult:
    rows: List[dict]
    rule_counts: Counter = field(default_factory=Counter)
    negatives: List[dict] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    cached: int = 0
    elapsed: float = 0.0

    def summary(self) -> str:
        lines = [f"rows: {len(self.rows)} (from cache: {self.cached}), {self.elapsed:.2f}s"]
        for rule, n in sorted(self.rule_counts.items()):
            lines.append(f"  {rule:<22} {n}")
        if self.negatives:
            lines.append(f"negative verdicts: {len(self.negatives)}")
            for r in self.negatives:
                lines.append(f"  p={r['p']} l={r['l']} alpha={tuple(r['alpha'])} witnesses k={r['witnesses']}")
        else:
            lines.append("negative verdicts: none")
        lines.append(f"agreement failures: {len(self.failures)}")
        lines.extend(f"  {msg}" for msg in self.failures)
        return "\n".join(lines)


def run_survey(config: SurveyConfig) -> SurveyResult:
    """Classify every task, reusing cached rows; rows come back in task order."""
    start = time.perf_counter()
    cache = ResultCache(resolve_cache_path(config.cache))
    tasks = config.tasks()
    keys = [cache_key(p, l, a, m) for p, l, a, m in tasks]
    todo = [(i, t) for i, (t, k) in enumerate(zip(tasks, keys)) if cache.get(k) is None]
    rows: List[Optional[dict]] = [cache.get(k) for k in keys]
    result = SurveyResult(rows=[], cached=len(tasks) - len(todo))

    def consume(i, outcome):
        if isinstance(outcome, str):
            result.failures.append(outcome)
            return
        rows[i] = outcome
        cache.put(keys[i], outcome)

    if config.workers > 1 and len(todo) > 1:
        with Pool(config.workers) as pool:
            for (i, _), outcome in zip(todo, pool.imap(_safe_task, [t for _, t in todo], chunksize=8)):
                consume(i, outcome)
    else:
        for i, t in todo:
            consume(i, _safe_task(t))
    cache.flush()

    result.rows = [r for r in rows if r is not None]
    for r in result.rows:
        result.rule_counts[r["rule"]] += 1
        if not r["verdict"]:
            result.negatives.append(r)
    if config.output:
        atomic_write(config.output, render_rows(result.rows, config.format))
    result.elapsed = time.perf_counter() - start
    return result


def _safe_task(task):
    try:
        return _run_task(task)
    except EngineError as exc:
        return f"{exc} :: {json.dumps(exc.diagnostics, sort_keys=True)}"
