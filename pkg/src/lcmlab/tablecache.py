"""JSON-lines cache of factor tables.

Line 1 is a header {"format", "version", "coeffs", "N", "c"}; every further
line is {"n": int, "factors": [[p, e], ...]} in increasing n, primes
ascending. Values with f(n) = 0 carry "zero": true and no factors. The cache
key is (coefficients, N); the small/large split is recomputed on load.
"""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Optional

from filelock import FileLock

from .poly import Polynomial
from .valuation import FactorizationTable, as_fraction, build_table

FORMAT = "lcmlab-factor-table"
VERSION = 1
ENV_VAR = "LCMLAB_CACHE"


def cache_dir(explicit: Optional[str] = None) -> Optional[Path]:
    d = explicit or os.environ.get(ENV_VAR)
    return Path(d) if d else None


def cache_path(directory: Path, f: Polynomial, N: int) -> Path:
    key = hashlib.sha256(json.dumps([list(f.coeffs), N]).encode()).hexdigest()[:20]
    return Path(directory) / f"table-d{f.degree}-N{N}-{key}.jsonl"


def dumps_table(table: FactorizationTable) -> str:
    header = {
        "format": FORMAT,
        "version": VERSION,
        "coeffs": list(table.f.coeffs),
        "N": table.N,
        "c": str(table.cutoff_c),
    }
    lines = [json.dumps(header, separators=(",", ":"))]
    for n in range(1, table.N + 1):
        if n in table.zeros:
            rec = {"n": n, "factors": [], "zero": True}
        else:
            rec = {"n": n, "factors": [[p, e] for p, e in table.entries[n]]}
        lines.append(json.dumps(rec, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def loads_table(text: str, c=None) -> FactorizationTable:
    lines = text.splitlines()
    header = json.loads(lines[0])
    if header.get("format") != FORMAT or header.get("version") != VERSION:
        raise ValueError(f"unsupported table header {header}")
    f = Polynomial(tuple(header["coeffs"]))
    N = int(header["N"])
    entries, zeros = {}, set()
    for line in lines[1:]:
        rec = json.loads(line)
        n = int(rec["n"])
        if rec.get("zero"):
            zeros.add(n)
        else:
            entries[n] = tuple((int(p), int(e)) for p, e in rec["factors"])
    if len(entries) + len(zeros) != N:
        raise ValueError("table records do not cover 1..N")
    skipped = frozenset(zeros | {n for n, fs in entries.items() if not fs})
    cutoff = as_fraction(c) if c is not None else Fraction(header["c"])
    table = FactorizationTable(f, N, cutoff, entries, skipped, frozenset(zeros))
    table.check()
    return table


def save_table(table: FactorizationTable, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with FileLock(str(path) + ".lock"):
        tmp.write_text(dumps_table(table))
        os.replace(tmp, path)


def load_table(path: Path, c=None) -> FactorizationTable:
    path = Path(path)
    with FileLock(str(path) + ".lock"):
        text = path.read_text()
    return loads_table(text, c)


def cached_table(f: Polynomial, N: int, c=1, directory=None, **build_kw) -> FactorizationTable:
    """Load the (f, N) table from the cache directory, building and storing it on a miss."""
    d = cache_dir(directory) if not isinstance(directory, Path) else directory
    if d is None:
        return build_table(f, N, c, **build_kw)
    path = cache_path(d, f, N)
    if path.exists():
        return load_table(path, c)
    table = build_table(f, N, c, **build_kw)
    save_table(table, path)
    return table
