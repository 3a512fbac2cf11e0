"""Exhaustive and randomized record search with certified results.

The search runs in two phases.  A fast pass (compiled kernel when
available) enumerates canonical primitive representatives slice by
slice — one slice per leading coefficient — and keeps, for each
measure, the smallest double-precision candidate values plus every
polynomial whose pair quantities could not be classified reliably.
Candidates and flagged polynomials are then re-measured with the
certified machinery, so every reported record value carries a rigorous
enclosure and every near-zero quantity a certified zero/nonzero
decision.  Records are persisted as JSON lines with decimal-string
numerics; completed slices are checkpointed and searches resume after
interruption.

Polynomials with repeated roots are excluded from the record space
(they are squares times lower-degree polynomials and their distinct
root pairs reappear at lower degree).
"""

from __future__ import annotations

import hashlib
import json
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import mpmath as mp

from ._kernel import scan_slice
from .polycore import IntPolynomial, canonicalize, is_canonical
from .rootfind import RepeatedRootError, RootFindError, has_repeated_root
from .sepmeasure import MEASURES, NoQualifyingPairError, measure

SCHEMA_VERSION = 1
SEARCH_MEASURES = ("sep", "abssep", "re_gap", "im_gap")


class SearchError(Exception):
    pass


class CheckpointMismatchError(SearchError):
    """Existing checkpoint belongs to a different search spec."""


@dataclass(frozen=True)
class SearchSpec:
    degree: int
    max_height: int
    measures: Tuple[str, ...] = SEARCH_MEASURES
    mode: str = "exhaustive"            # or "random"
    seed: int = 0
    count: int = 0                      # random mode sample count
    top_k: int = 3
    min_quality: Optional[float] = None  # None: degree + 0.5 for abssep

    def __post_init__(self):
        if self.degree < 2:
            raise SearchError("degree must be >= 2")
        if self.max_height < 1:
            raise SearchError("max_height must be >= 1")
        if self.top_k < 1:
            raise SearchError("top_k must be >= 1")
        if self.mode not in ("exhaustive", "random"):
            raise SearchError(f"unknown mode {self.mode!r}")
        for m in self.measures:
            if m not in SEARCH_MEASURES:
                raise SearchError(f"unknown search measure {m!r}")

    def quality_floor(self, m: str) -> Optional[float]:
        if self.min_quality is not None:
            return self.min_quality
        return self.degree + 0.5 if m == "abssep" else None

    def spec_hash(self) -> str:
        payload = json.dumps(
            [SCHEMA_VERSION, self.degree, self.max_height,
             sorted(self.measures), self.mode, self.seed, self.count,
             self.top_k, self.min_quality], separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SearchRecord:
    measure: str
    coeffs: Tuple[int, ...]
    value: str                 # decimal string, 20 significant digits
    quality: Optional[float]
    witness: Tuple[int, int]
    degree: int
    max_height: int
    slice_lead: int
    timestamp: str = ""        # isolated: excluded from identity

    def key(self):
        return (self.measure, self.coeffs, self.value, self.quality,
                self.witness, self.degree, self.max_height,
                self.slice_lead)

    @property
    def polynomial(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)


# ---------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------

def enumerate_slice(degree: int, max_height: int,
                    lead: int) -> Iterator[IntPolynomial]:
    """Canonical primitive representatives with the given leading
    coefficient, in lexicographic order of the coefficient tuple."""
    import itertools
    from math import gcd
    rng = range(-max_height, max_height + 1)
    for rest in itertools.product(rng, repeat=degree):
        coeffs = rest + (lead,)
        g = 0
        for a in coeffs:
            g = gcd(g, abs(a))
            if g == 1:
                break
        if g != 1:
            continue
        p = IntPolynomial(coeffs)
        if is_canonical(p):
            yield p


def enumerate_space(spec: SearchSpec) -> Iterator[IntPolynomial]:
    """All canonical representatives of the search space, slice by
    slice in increasing leading coefficient."""
    if spec.mode != "exhaustive":
        raise SearchError("enumerate_space requires exhaustive mode")
    for lead in range(1, spec.max_height + 1):
        yield from enumerate_slice(spec.degree, spec.max_height, lead)


def random_sample(spec: SearchSpec) -> List[IntPolynomial]:
    """Deterministic random sample of canonical representatives."""
    import random
    rng = random.Random(spec.seed)
    out = []
    seen = set()
    h, d = spec.max_height, spec.degree
    while len(out) < spec.count:
        coeffs = [rng.randint(-h, h) for _ in range(d)] + \
            [rng.randint(1, h)]
        p = IntPolynomial(coeffs)
        if p.degree != d:
            continue
        p = canonicalize(p)
        if p.coeffs in seen or p.height > h:
            continue
        seen.add(p.coeffs)
        out.append(p)
    return out


# ---------------------------------------------------------------------
# fast pass + certified pass
# ---------------------------------------------------------------------

def _scan_one_slice(args):
    degree, max_height, lead, top_k, floors = args
    # the kernel takes a single keep-threshold; use the loosest floor
    mq = None
    real_floors = [f for f in floors.values() if f is not None]
    if real_floors:
        mq = min(real_floors)
    return lead, scan_slice(degree, max_height, lead, top_k, mq)


def _merge_slices(slice_outputs, spec):
    """Combine per-slice kernel outputs; deterministic in slice order
    (min-merge is associative and commutative, so the result does not
    depend on how slices were distributed over workers)."""
    cands = {m: {} for m in spec.measures}
    suspicious = {m: [] for m in spec.measures}
    sus_seen = {m: set() for m in spec.measures}
    total = 0
    for lead in sorted(slice_outputs):
        out = slice_outputs[lead]
        total += out["count"]
        for m in spec.measures:
            for v, c in out["measures"][m]:
                cands[m].setdefault(tuple(c), v)
            for c in out["suspicious"][m]:
                t = tuple(c)
                if t not in sus_seen[m]:
                    sus_seen[m].add(t)
                    suspicious[m].append(t)
    return cands, suspicious, total


def _certify_task(task, prec_ceiling=None):
    coeffs, m = task
    return _certified_measure(coeffs, m, {}, prec_ceiling)


def _certify_candidates(spec, cands, suspicious, prec_ceiling=None,
                        jobs=1):
    """Certified re-measurement; returns the final per-measure record
    lists (top_k with ties, plus quality keepers).  Results are a pure
    function of the (coeffs, measure) pool, so the outcome does not
    depend on the worker count."""
    pools = {m: sorted(set(list(cands[m].keys()) + list(suspicious[m])))
             for m in spec.measures}
    tasks = sorted({(coeffs, m)
                    for m in spec.measures for coeffs in pools[m]})
    if jobs > 1 and len(tasks) > 1:
        import functools
        fn = functools.partial(_certify_task, prec_ceiling=prec_ceiling)
        chunk = max(1, len(tasks) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = dict(zip(tasks, pool.map(fn, tasks,
                                               chunksize=chunk)))
    else:
        cache = {}
        results = {t: _certified_measure(t[0], t[1], cache, prec_ceiling)
                   for t in tasks}
    records = {}
    for m in spec.measures:
        floor = spec.quality_floor(m)
        entries = []
        for coeffs in pools[m]:
            got = results[(coeffs, m)]
            if got is None:
                continue
            value, quality, witness = got
            entries.append((value, coeffs, quality, witness))
        entries.sort(key=lambda e: (e[0], e[1]))
        keep = []
        kth_value = None
        for rank, (value, coeffs, quality, witness) in enumerate(entries):
            in_top = rank < spec.top_k
            if not in_top and kth_value is not None and value == kth_value:
                in_top = True      # keep ties with the k-th value
            if rank == spec.top_k - 1:
                kth_value = value
            by_quality = (floor is not None and quality is not None
                          and quality >= floor)
            if in_top or by_quality:
                keep.append(SearchRecord(
                    m, coeffs, mp.nstr(value, 20), quality, witness,
                    spec.degree, spec.max_height, int(coeffs[-1])))
        records[m] = keep
    return records


def _certified_measure(coeffs, m, cache, prec_ceiling):
    key = (coeffs, m)
    if key in cache:
        return cache[key]
    p = IntPolynomial(coeffs)
    result = None
    try:
        if not has_repeated_root(p):
            res = measure(p, m, prec_ceiling=prec_ceiling)
            q = res.quality
            result = (res.value, None if q is None else round(q, 6),
                      res.witness)
    except (NoQualifyingPairError, RepeatedRootError):
        result = None
    except RootFindError:
        result = None
    cache[key] = result
    return result


@dataclass
class SearchSummary:
    spec: SearchSpec
    records: Dict[str, List[SearchRecord]]
    scanned: int
    elapsed: float
    resumed_slices: int = 0

    def all_records(self) -> List[SearchRecord]:
        out = []
        for m in self.spec.measures:
            out.extend(self.records.get(m, []))
        return out


def run_search(spec: SearchSpec, jobs: int = 1,
               checkpoint_path: Optional[str] = None,
               prec_ceiling: Optional[int] = None) -> SearchSummary:
    """Run the two-phase search; deterministic for a fixed spec
    regardless of ``jobs``.  With ``checkpoint_path``, completed slices
    are persisted after each slice and reused on re-run; a checkpoint
    written for a different spec raises CheckpointMismatchError.
    """
    t0 = time.time()
    if spec.mode == "random":
        return _run_random(spec, t0, prec_ceiling)
    floors = {m: spec.quality_floor(m) for m in spec.measures}
    slice_outputs, resumed = _load_checkpoint(spec, checkpoint_path)
    todo = [lead for lead in range(1, spec.max_height + 1)
            if lead not in slice_outputs]
    args = [(spec.degree, spec.max_height, lead, spec.top_k, floors)
            for lead in todo]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for lead, out in pool.map(_scan_one_slice, args):
                slice_outputs[lead] = out
                _save_checkpoint(spec, checkpoint_path, slice_outputs)
    else:
        for a in args:
            lead, out = _scan_one_slice(a)
            slice_outputs[lead] = out
            _save_checkpoint(spec, checkpoint_path, slice_outputs)
    cands, suspicious, total = _merge_slices(slice_outputs, spec)
    records = _certify_candidates(spec, cands, suspicious, prec_ceiling,
                                  jobs=jobs)
    _stamp(records)
    return SearchSummary(spec, records, total, time.time() - t0, resumed)


def _run_random(spec, t0, prec_ceiling):
    sample = random_sample(spec)
    cands = {m: {} for m in spec.measures}
    for p in sample:
        for m in spec.measures:
            cands[m].setdefault(p.coeffs, None)
    suspicious = {m: [] for m in spec.measures}
    records = _certify_candidates(spec, cands, suspicious, prec_ceiling)
    _stamp(records)
    return SearchSummary(spec, records, len(sample), time.time() - t0)


def _stamp(records):
    ts = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
    for m, lst in records.items():
        records[m] = [SearchRecord(**{**asdict(r), "timestamp": ts})
                      for r in lst]


# ---------------------------------------------------------------------
# checkpointing
# ---------------------------------------------------------------------

def _load_checkpoint(spec, path):
    if path is None or not os.path.exists(path):
        return {}, 0
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if data.get("spec_hash") != spec.spec_hash():
        raise CheckpointMismatchError(
            "checkpoint was written by a different search spec")
    outputs = {int(k): v for k, v in data["slices"].items()}
    for out in outputs.values():
        for m in out["measures"]:
            out["measures"][m] = [(v, c) for v, c in out["measures"][m]]
    return outputs, len(outputs)


def _save_checkpoint(spec, path, slice_outputs):
    if path is None:
        return
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump({"spec_hash": spec.spec_hash(),
                   "slices": {str(k): v
                              for k, v in slice_outputs.items()}}, f)
    os.replace(tmp, path)


# ---------------------------------------------------------------------
# record persistence (JSON lines)
# ---------------------------------------------------------------------

def save_records(records: Sequence[SearchRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            d = asdict(r)
            d["schema"] = SCHEMA_VERSION
            d["coeffs"] = list(r.coeffs)
            d["witness"] = list(r.witness)
            f.write(json.dumps(d, sort_keys=True,
                               separators=(",", ":")) + "\n")


def load_records(path: str) -> List[SearchRecord]:
    """Round-trip loader; a corrupted trailing line is dropped with a
    warning, a corrupted interior line is an error."""
    out = []
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            d = json.loads(line)
            if d.pop("schema") != SCHEMA_VERSION:
                raise SearchError(f"unsupported record schema at line {i+1}")
            d["coeffs"] = tuple(d["coeffs"])
            d["witness"] = tuple(d["witness"])
            out.append(SearchRecord(**d))
        except (json.JSONDecodeError, KeyError, TypeError):
            if i == len(lines) - 1:
                warnings.warn(f"dropped malformed trailing record line "
                              f"in {path}")
                break
            raise SearchError(f"malformed record at line {i + 1} of {path}")
    return out


# ---------------------------------------------------------------------
# table emitters
# ---------------------------------------------------------------------

def records_to_csv(records: Sequence[SearchRecord]) -> str:
    import csv
    import io
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["measure", "degree", "max_height", "polynomial",
                "value", "quality"])
    for r in records:
        from .polycore import render_poly
        w.writerow([r.measure, r.degree, r.max_height,
                    render_poly(r.polynomial), r.value,
                    "" if r.quality is None else f"{r.quality:.2f}"])
    return buf.getvalue()


def records_to_markdown(records: Sequence[SearchRecord]) -> str:
    from .polycore import render_poly
    lines = ["| measure | degree | max height | polynomial | value "
             "| quality |",
             "|---|---|---|---|---|---|"]
    for r in records:
        q = "" if r.quality is None else f"{r.quality:.2f}"
        lines.append(f"| {r.measure} | {r.degree} | {r.max_height} "
                     f"| {render_poly(r.polynomial)} | "
                     f"{_sci4(r.value)} | {q} |")
    return "\n".join(lines) + "\n"


def _sci4(decimal_string: str) -> str:
    """4-significant-digit scientific rendering of a decimal string."""
    return mp.nstr(mp.mpf(decimal_string), 4,
                   min_fixed=1, max_fixed=0)
