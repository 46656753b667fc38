"""Exact duplication distance by graded dynamic programming.

Deduplication strictly shortens a sequence, so the distance of every length-L
word depends only on shorter words.  Each level is a flat array indexed by the
integer encoding of the word (position 1 = most significant bit) and is filled
with numpy, one ``(i, h)`` repeat slot at a time, over all words at once.
Levels are kept nibble-packed, exactly as they are written to the cache file.
"""
from __future__ import annotations

import logging
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import CacheError, CapExceeded, InvalidInput, TableOverflow
from .seqcore import (ROOTS, BinarySeq, DedupProcess, DedupStep, apply_dedup, apply_parallel,
                      find_repeats, is_square_free, make_process, runs)

log = logging.getLogger(__name__)

MAGIC = b"DDR1"
VERSION = 1
CELL_MAX = 15
MAX_N = 32
ORACLE_CAP = 14
PARALLEL_CAP = 16
_UNSET = 255
_CHUNK = 1 << 20


@dataclass(frozen=True)
class SearchConfig:
    max_n: int
    worker_count: int = 1
    cache_path: str | os.PathLike | None = None

    def __post_init__(self):
        if not 3 <= self.max_n <= MAX_N:
            raise CapExceeded(f"max_n must lie in [3, {MAX_N}], got {self.max_n}")
        if self.worker_count < 1:
            raise InvalidInput("worker_count must be positive")


def default_workers() -> int:
    env = os.environ.get("DUPDIST_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def pack_nibbles(values: np.ndarray) -> np.ndarray:
    """Even index in the low nibble, odd index in the high nibble."""
    if values.size % 2:
        values = np.append(values, np.uint8(0))
    return (values[0::2] | (values[1::2] << 4)).astype(np.uint8)


def unpack_nibbles(packed: np.ndarray, count: int) -> np.ndarray:
    out = np.empty(packed.size * 2, dtype=np.uint8)
    out[0::2] = packed & 0x0F
    out[1::2] = packed >> 4
    return out[:count]


def _lookup(packed: np.ndarray, idx: np.ndarray) -> np.ndarray:
    return (packed[idx >> 1] >> ((idx & 1) << 2).astype(np.uint8)) & 0x0F


def _level_chunk(L: int, start: int, stop: int, lower: dict) -> np.ndarray:
    """Distances for words ``start..stop-1`` of length L (unpacked)."""
    v = np.arange(start, stop, dtype=np.uint64)
    best = np.full(v.size, _UNSET, dtype=np.uint8)
    for h in range(1, L // 2 + 1):
        mask = np.uint64((1 << h) - 1)
        diff = v ^ (v >> np.uint64(h))
        below = lower[L - h]
        for tail in range(L - 2 * h + 1):
            sh = np.uint64(tail)
            idx = np.flatnonzero(((diff >> sh) & mask) == 0)
            if idx.size == 0:
                continue
            w = v[idx]
            res = ((w >> np.uint64(tail + h)) << sh) | (w & np.uint64((1 << tail) - 1))
            d = _lookup(below, res)
            best[idx] = np.minimum(best[idx], d)
    out = np.where(best == _UNSET, 0, best.astype(np.uint16) + 1)
    if out.size and out.max() > CELL_MAX:
        raise TableOverflow(f"length {L}: distance {int(out.max())} exceeds the 4-bit cell")
    return out.astype(np.uint8)


def _build_level(L: int, lower: dict, workers: int) -> np.ndarray:
    total = 1 << L
    bounds = [(a, min(a + _CHUNK, total)) for a in range(0, total, _CHUNK)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda ab: _level_chunk(L, ab[0], ab[1], lower), bounds))
    else:
        parts = [_level_chunk(L, a, b, lower) for a, b in bounds]
    return pack_nibbles(np.concatenate(parts))


@dataclass
class DistanceTable:
    """Exact f(s) for every binary word of length 1..max_n."""

    max_n: int
    levels: dict = field(default_factory=dict)

    def level(self, L: int) -> np.ndarray:
        """Unpacked distances of all length-L words, indexed by encoding."""
        self._check_length(L)
        return unpack_nibbles(self.levels[L], 1 << L)

    def _check_length(self, L: int):
        if not 1 <= L <= self.max_n:
            raise CapExceeded(f"length {L} outside table range 1..{self.max_n}")

    def get(self, s: BinarySeq) -> int:
        self._check_length(s.length)
        byte = int(self.levels[s.length][s.bits >> 1])
        return (byte >> (4 * (s.bits & 1))) & 0x0F

    def to_bytes(self) -> bytes:
        parts = [MAGIC, bytes([VERSION]), struct.pack("<I", self.max_n)]
        parts += [self.levels[L].tobytes() for L in range(1, self.max_n + 1)]
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "DistanceTable":
        if len(data) < 9 or data[:4] != MAGIC:
            raise CacheError("bad magic")
        if data[4] != VERSION:
            raise CacheError(f"unsupported cache version {data[4]}")
        (max_n,) = struct.unpack("<I", data[5:9])
        if not 1 <= max_n <= MAX_N:
            raise CacheError(f"implausible max_n {max_n}")
        expected = 9 + sum(1 << (L - 1) for L in range(1, max_n + 1))
        if len(data) != expected:
            raise CacheError(f"cache has {len(data)} bytes, expected {expected}")
        levels, off = {}, 9
        for L in range(1, max_n + 1):
            size = -(-(1 << L) // 2)
            levels[L] = np.frombuffer(data, dtype=np.uint8, count=size, offset=off).copy()
            off += size
        return cls(max_n, levels)

    def save(self, path) -> None:
        tmp = Path(str(path) + ".tmp")
        tmp.write_bytes(self.to_bytes())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path) -> "DistanceTable":
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise CacheError(f"cannot read cache {path}: {exc}") from exc
        return cls.from_bytes(data)

    def truncated(self, max_n: int) -> "DistanceTable":
        return DistanceTable(max_n, {L: self.levels[L] for L in range(1, max_n + 1)})


def build_table(cfg: SearchConfig) -> DistanceTable:
    """Fill every level up to ``cfg.max_n``, reusing a compatible cache file.

    A cache that cannot be read is rebuilt with a warning; a cache with a
    smaller ``max_n`` is extended rather than recomputed.
    """
    levels: dict = {}
    if cfg.cache_path is not None and Path(cfg.cache_path).exists():
        try:
            cached = DistanceTable.load(cfg.cache_path)
            if cached.max_n >= cfg.max_n:
                return cached.truncated(cfg.max_n)
            levels = dict(cached.levels)
        except CacheError as exc:
            log.warning("ignoring cache %s (%s); rebuilding", cfg.cache_path, exc)
    if not levels:
        levels[1] = pack_nibbles(np.zeros(2, dtype=np.uint8))
    start = max(levels) + 1
    for L in range(start, cfg.max_n + 1):
        if L >= 25:
            log.info("building length %d (big-memory level)", L)
        levels[L] = _build_level(L, levels, cfg.worker_count)
    table = DistanceTable(cfg.max_n, levels)
    if cfg.cache_path is not None and start <= cfg.max_n:
        table.save(cfg.cache_path)
    return table


def f_of_seq(table: DistanceTable, s: BinarySeq | str) -> int:
    return table.get(BinarySeq.coerce(s))


def root_class(L: int) -> np.ndarray:
    """Index into ROOTS of the root of every length-L word."""
    v = np.arange(1 << L, dtype=np.uint64)
    first = (v >> np.uint64(L - 1)) & np.uint64(1)
    last = v & np.uint64(1)
    cls = np.where(first == last, np.where(first == 0, 4, 5), np.where(first == 0, 2, 3))
    cls[0] = 0
    cls[-1] = 1
    return cls.astype(np.uint8)


def f_n(table: DistanceTable, n: int) -> int:
    return int(table.level(n).max())


def f_sigma_n(table: DistanceTable, n: int, sigma: BinarySeq | str) -> int:
    """Largest distance among length-n words whose root is ``sigma``.

    Returns -1 when no length-n word has that root (e.g. root 010 at n=2).
    """
    sigma = str(sigma)
    if sigma not in ROOTS:
        raise InvalidInput(f"{sigma!r} is not a binary root")
    sel = root_class(n) == ROOTS.index(sigma)
    vals = table.level(n)[sel]
    return int(vals.max()) if vals.size else -1


def f_n_m_all(cfg: SearchConfig) -> dict:
    """``{(n, m): f(n, m)}`` for all 3 <= m < n <= cfg.max_n.

    One graded pass per length serves every threshold m at once: the repeat
    masks and deduplicated indices are shared, only the lookups differ.
    """
    N = cfg.max_n
    ms = list(range(3, N))
    # g[m][L]: unpacked level of "dedups needed to reach length <= m"
    g = {m: {} for m in ms}
    out = {}
    for L in range(4, N + 1):
        active = [m for m in ms if m < L]
        total = 1 << L
        best = {m: np.full(total, _UNSET, dtype=np.uint8) for m in active}
        for a in range(0, total, _CHUNK):
            b = min(a + _CHUNK, total)
            v = np.arange(a, b, dtype=np.uint64)
            for h in range(1, L // 2 + 1):
                mask = np.uint64((1 << h) - 1)
                diff = v ^ (v >> np.uint64(h))
                for tail in range(L - 2 * h + 1):
                    sh = np.uint64(tail)
                    idx = np.flatnonzero(((diff >> sh) & mask) == 0)
                    if idx.size == 0:
                        continue
                    w = v[idx]
                    res = ((w >> np.uint64(tail + h)) << sh) | (w & np.uint64((1 << tail) - 1))
                    res = res.astype(np.intp)
                    gi = idx + a
                    for m in active:
                        seg = best[m]
                        if L - h <= m:
                            seg[gi] = 0
                        else:
                            seg[gi] = np.minimum(seg[gi], g[m][L - h][res])
        for m in active:
            # every word of length >= 4 has a repeat, so nothing stays unset
            lev = best[m].astype(np.uint16) + 1
            g[m][L] = lev.astype(np.uint8)
            out[(L, m)] = int(lev.max())
    return out


def f_n_m(cfg: SearchConfig, n: int, m: int) -> int:
    if not 3 <= m < n <= cfg.max_n:
        raise CapExceeded(f"need 3 <= m < n <= {cfg.max_n}, got n={n}, m={m}")
    return f_n_m_all(SearchConfig(n, cfg.worker_count))[(n, m)]


# -- independent oracle -------------------------------------------------------

@lru_cache(maxsize=None)
def _oracle(text: str) -> int:
    s = BinarySeq.from_str(text)
    reps = find_repeats(s, 0)
    if not reps:
        return 0
    return 1 + min(_oracle(str(apply_dedup(s, (r.i, r.h)))) for r in reps)


def oracle_distance(s: BinarySeq | str) -> int:
    """Top-down memoized search over string-keyed states."""
    s = BinarySeq.coerce(s)
    if s.length > ORACLE_CAP:
        raise CapExceeded(f"oracle handles length <= {ORACLE_CAP}, got {s.length}")
    if s.length == 0:
        raise InvalidInput("empty sequence")
    return _oracle(str(s))


def optimal_process(s: BinarySeq | str, table: DistanceTable | None = None) -> DedupProcess:
    """A shortest deduplication process, ties broken by smallest ``(i, h)``."""
    s = BinarySeq.coerce(s)
    if table is not None:
        dist = lambda x: table.get(x)  # noqa: E731
    elif s.length <= ORACLE_CAP:
        dist = oracle_distance
    else:
        raise CapExceeded(f"length {s.length} needs a distance table")
    steps = []
    cur, d = s, dist(s)
    while d:
        for r in find_repeats(cur, 0):
            nxt = apply_dedup(cur, (r.i, r.h))
            if dist(nxt) == d - 1:
                steps.append(DedupStep(r.i, r.h))
                cur, d = nxt, d - 1
                break
        else:
            raise AssertionError(f"no distance-decreasing step from {cur}")
    return DedupProcess(s, tuple(steps), cur)


# -- parallel deduplication ---------------------------------------------------

def _antichain_results(s: BinarySeq) -> set:
    """Every word reachable by one non-empty set of disjoint exact dedups."""
    spans = sorted(((r.i, r.h) for r in find_repeats(s, 0)), key=lambda t: t[0])
    results = set()

    def extend(k: int, free_from: int, chosen: list):
        for j in range(k, len(spans)):
            i, h = spans[j]
            if i < free_from:
                continue
            chosen.append((i, h))
            results.add(apply_parallel(s, chosen))
            extend(j + 1, i + 2 * h, chosen)
            chosen.pop()

    extend(0, 1, [])
    return results


@lru_cache(maxsize=None)
def _parallel(s: BinarySeq) -> int:
    if is_square_free(s):
        return 0
    return 1 + min(_parallel(t) for t in _antichain_results(s))


def parallel_distance(s: BinarySeq | str) -> int:
    """Fewest rounds when each round removes any set of disjoint repeats."""
    s = BinarySeq.coerce(s)
    if s.length > PARALLEL_CAP:
        raise CapExceeded(f"parallel distance handles length <= {PARALLEL_CAP}")
    return _parallel(s)


# -- constructive schedule ----------------------------------------------------

def heuristic_schedule(s: BinarySeq | str) -> DedupProcess:
    """Halve every run down to one symbol, then halve the alternating rest.

    Runs are processed right to left so earlier run coordinates never move.
    """
    s = BinarySeq.coerce(s)
    steps = []
    for start, t in reversed(runs(s)):
        while t > 1:
            h = t // 2
            steps.append(DedupStep(start, h))
            t -= h
    L = len(runs(s))
    while L > 3:
        h = 2 * (L // 4)
        steps.append(DedupStep(1, h))
        L -= h
    return make_process(s, steps)
