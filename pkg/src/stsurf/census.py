"""Exhaustive census of genus-2 square-tiled surfaces up to isomorphism."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import formulas
from .invariants import SurfaceInvariants, classify
from .origami import Origami, canonical_form, canonical_key, commutator_cycle_type, from_key, orbit_partition

log = logging.getLogger(__name__)

ENUMERATOR_VERSION = "dfs-breaks-1"
DEFAULT_BOUND = 12
STRATA = {"H2": 3, "H11": 4}  # squares moved by the commutator
CYCLE_TYPES = {"H2": (3,), "H11": (2, 2)}


def partitions(n: int, largest: Optional[int] = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def cycle_type_representative(part: tuple[int, ...]) -> np.ndarray:
    """Rows of lengths ``part`` laid out as consecutive blocks."""
    n = sum(part)
    h = np.empty(n, np.int64)
    i = 0
    for k in part:
        for j in range(k):
            h[i + j] = i + (j + 1) % k
        i += k
    return h


def _search_partition(args) -> np.ndarray:
    from ._kernels import search

    part, moved = args
    h = cycle_type_representative(part)
    keys = search(h, moved, len(h))
    return np.unique(keys, axis=0) if len(keys) else keys


def enumerate_keys(n: int, stratum: str, threads: int = 1, bound: int = DEFAULT_BOUND) -> list[bytes]:
    """Sorted canonical keys, one per isomorphism class."""
    if stratum not in STRATA:
        raise ValueError(f"unknown stratum {stratum!r}")
    if not 1 <= n <= bound:
        raise ValueError(f"n={n} outside the configured bound 1..{bound}")
    # the identity has trivial commutator with everything
    jobs = [(p, STRATA[stratum]) for p in partitions(n) if p != (1,) * n]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(threads) as ex:
            chunks = list(ex.map(_search_partition, jobs))
    else:
        chunks = [_search_partition(j) for j in jobs]
    chunks = [c for c in chunks if len(c)]
    if not chunks:
        return []
    allk = np.unique(np.concatenate(chunks), axis=0)
    return [bytes(row) for row in allk]


def naive_keys(n: int, stratum: str) -> list[bytes]:
    """Reference enumeration over all of S_n x S_n (tiny n only)."""
    target = CYCLE_TYPES[stratum] + (1,) * (n - sum(CYCLE_TYPES[stratum]))
    out = set()
    perms = list(itertools.permutations(range(n)))
    for h in perms:
        for v in perms:
            try:
                o = Origami(h, v)
            except ValueError:
                continue
            if commutator_cycle_type(o) == target:
                out.add(canonical_key(o))
    return sorted(out)


@dataclass(frozen=True)
class CensusRecord:
    n: int
    h: tuple[int, ...]
    v: tuple[int, ...]
    stratum: str
    invariants: SurfaceInvariants
    orbit_id: Optional[str] = None
    automorphisms: int = 1

    @property
    def origami(self) -> Origami:
        return Origami(self.h, self.v)

    @property
    def bucket(self) -> Optional[tuple[int, int, Optional[int]]]:
        inv = self.invariants
        if not inv.reduced:
            return None
        return (inv.d, inv.M, None if inv.M % 2 == 0 else inv.epsilon)

    def to_json(self) -> dict:
        inv = self.invariants
        return {"n": self.n, "h": list(self.h), "v": list(self.v), "stratum": self.stratum,
                "reduced": inv.reduced, "d": inv.d, "M": inv.M, "epsilon": inv.epsilon,
                "orbit_id": self.orbit_id, "automorphisms": self.automorphisms}


def enumerate(n: int, stratum: str, threads: int = 1, orbits: bool = True,
              bound: int = DEFAULT_BOUND) -> list[CensusRecord]:
    keys = enumerate_keys(n, stratum, threads, bound)
    origamis = [from_key(k) for k in keys]
    orbit_of = orbit_partition(origamis) if orbits else {}
    out = []
    for k, o in zip(keys, origamis):
        _, aut = canonical_form(o)
        out.append(CensusRecord(n, o.h, o.v, stratum, classify(o), orbit_of.get(k), aut))
    return out


# persistence

def census_path(cache_dir: Path, stratum: str, n: int) -> Path:
    return Path(cache_dir) / f"census-{stratum}-{n}.jsonl"


def write_census(records: list[CensusRecord], cache_dir: Path, stratum: str, n: int,
                 run_config: Optional[dict] = None) -> Path:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = census_path(cache_dir, stratum, n)
    with open(path, "w") as f:
        for r in records:
            f.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
    manifest = {"enumerator": ENUMERATOR_VERSION, "complete": True, "n": n, "stratum": stratum,
                "records": len(records),
                "automorphism_orders": dict(sorted(Counter(str(r.automorphisms) for r in records).items())),
                "run_config": run_config or {}}
    with open(path.with_suffix(".manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def read_census(cache_dir: Path, stratum: str, n: int) -> Optional[list[dict]]:
    """Raw cached rows, or None when absent or incomplete."""
    path = census_path(cache_dir, stratum, n)
    man = path.with_suffix(".manifest.json")
    if not (path.exists() and man.exists()):
        return None
    meta = json.loads(man.read_text())
    if not meta.get("complete") or meta.get("enumerator") != ENUMERATOR_VERSION:
        return None
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


# counting and verification

Bucket = tuple[str, int, int, Optional[int]]


@dataclass
class CountTable:
    buckets: dict[Bucket, int]
    totals: dict[tuple[str, int], dict[str, int]]
    # each class weighted by 1/|Aut|; differs from ``buckets`` only for d = 2
    weighted: dict[Bucket, Fraction] = field(default_factory=dict)

    def value(self, key: Bucket) -> Fraction:
        """The count compared with closed forms: plain for d >= 3, automorphism-weighted for d = 2."""
        if key[1] >= 3:
            return Fraction(self.buckets.get(key, 0))
        return self.weighted.get(key, Fraction(0))


def count(rows: Iterable) -> CountTable:
    """Bucket reduced records by (stratum, d, M, eps); spin is dropped for even M."""
    buckets: Counter = Counter()
    weighted: Counter = Counter()
    totals: dict[tuple[str, int], Counter] = {}
    for r in rows:
        if isinstance(r, CensusRecord):
            r = r.to_json()
        t = totals.setdefault((r["stratum"], r["n"]), Counter())
        t["records"] += 1
        if not r["reduced"]:
            t["unreduced"] += 1
            continue
        t["reduced"] += 1
        eps = None if r["M"] % 2 == 0 else r["epsilon"]
        key = (r["stratum"], r["d"], r["M"], eps)
        buckets[key] += 1
        weighted[key] += Fraction(1, r.get("automorphisms", 1))
    return CountTable(dict(buckets), {k: dict(v) for k, v in totals.items()}, dict(weighted))


@dataclass(frozen=True)
class VerifyRow:
    stratum: str
    d: int
    M: Optional[int]
    epsilon: Optional[int]
    count: Fraction
    expected: Optional[int]
    source: str  # "formula" (proven) or "conjecture"
    match: bool


def expected_buckets(stratum: str, n: int) -> list[tuple[int, int, Optional[int], int, str]]:
    """(d, M, eps, expected, source) for every bucket a census of size n can populate."""
    out = []
    if stratum == "H2":
        if n >= 3:
            for eps in formulas.w_spins(n):
                out.append((n, 1, eps, int(formulas.count_w(n, eps)), "formula"))
        return out
    for m in range(1, n + 1):
        if n % m or n // m < 2:
            continue
        d = n // m
        for eps in formulas.valid_spins(d, m):
            src = "conjecture" if d % 2 == 0 else "formula"
            out.append((d, m, eps, int(formulas.count_t(d, m, eps)), src))
    return out


def verify(table: CountTable) -> list[VerifyRow]:
    rows = []
    for stratum, n in sorted(table.totals):
        seen = set()
        for d, m, eps, exp, src in expected_buckets(stratum, n):
            got = table.value((stratum, d, m, eps))
            rows.append(VerifyRow(stratum, d, m, eps, got, exp, src, got == exp))
            seen.add((d, m, eps))
        for (s, d, m, eps), got in sorted(table.buckets.items(), key=lambda kv: str(kv[0])):
            if s == stratum and d * m == n and (d, m, eps) not in seen:
                # a bucket the parity law forbids
                rows.append(VerifyRow(stratum, d, m, eps, Fraction(got), 0, "formula", False))
    return rows


def kani_rows(table: CountTable) -> list[VerifyRow]:
    """Spin-summed totals for M >= 2 against the Kani/EMS count."""
    rows = []
    for stratum, n in sorted(table.totals):
        if stratum != "H11":
            continue
        for m in range(2, n + 1):
            if n % m or n // m < 2:
                continue
            d = n // m
            got = sum((table.value(k) for k in table.buckets if k[:3] == (stratum, d, m)), Fraction(0))
            exp = formulas.torsion_total(d, m)
            rows.append(VerifyRow(stratum, d, m, None, got, int(exp), "formula", got == exp))
    return rows


CSV_FIELDS = ["stratum", "d", "M", "epsilon", "count", "source", "match"]


def rows_to_csv(rows: list[VerifyRow], include_census: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        eps = "" if r.epsilon is None else r.epsilon
        if include_census:
            w.writerow([r.stratum, r.d, r.M, eps, str(r.count), "census", r.match])
        w.writerow([r.stratum, r.d, r.M, eps, r.expected, r.source, r.match])
    return buf.getvalue()
