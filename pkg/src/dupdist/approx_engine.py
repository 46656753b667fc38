"""Approximate (beta-) duplication distance and constructive repeat finding.

A beta-repeat of block length 1 must be exact, and any word of length >= 4
has an exact repeat, so the beta-square-free words are the six exact roots
for every beta < 1.  Distances here are always measured to that set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, InvalidInput
from .seqcore import (Beta, BinarySeq, DedupProcess, DedupStep, apply_dedup, as_fraction,
                      find_repeats, is_square_free, make_process, mismatch_budget)

BETA_CAP = 14
EXACT_FALLBACK = 12
# steps of greedy_nonlinear_dedup stay under SLOPE * n**(2a/(1+a)) + OFFSET;
# measured ratios peak near 9.8 (a=0.3) and 7.6 (a=0.5) for n in 1024..8192
NONLINEAR_STEP_SLOPE = 10
NONLINEAR_STEP_OFFSET = 50
_UNSET = 255


@dataclass(frozen=True)
class BetaConfig:
    beta: Fraction
    max_n: int = EXACT_FALLBACK

    def __post_init__(self):
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if not 0 <= self.beta < 1:
            raise InvalidInput(f"beta must lie in [0, 1), got {self.beta}")
        if not 1 <= self.max_n <= BETA_CAP:
            raise CapExceeded(f"max_n must lie in [1, {BETA_CAP}]")


@dataclass(frozen=True)
class RepeatWitness:
    i: int
    h: int
    mismatches: int
    k: int
    ell: int
    B: int
    pair: tuple[int, int]
    r: int

    def to_dict(self) -> dict:
        return {"i": self.i, "h": self.h, "mismatches": self.mismatches, "k": self.k,
                "ell": self.ell, "B": self.B, "pair": list(self.pair), "r": self.r}


# -- exact beta-distance ------------------------------------------------------

def _successors(s: BinarySeq, beta: Fraction):
    for rep in find_repeats(s, beta):
        for keep in ("first", "second"):
            step = DedupStep(rep.i, rep.h, keep)
            yield step, apply_dedup(s, step, beta)


@lru_cache(maxsize=None)
def _beta_dist(s: BinarySeq, beta: Fraction) -> int:
    if is_square_free(s):
        return 0
    return 1 + min(_beta_dist(t, beta) for _, t in _successors(s, beta))


def beta_distance(s: BinarySeq | str, cfg: BetaConfig) -> int:
    """Fewest beta-deduplications from ``s`` to any of the six roots."""
    s = BinarySeq.coerce(s)
    if s.length > cfg.max_n:
        raise CapExceeded(f"length {s.length} exceeds beta cap {cfg.max_n}")
    return _beta_dist(s, cfg.beta)


def beta_process(s: BinarySeq | str, beta: Beta) -> DedupProcess:
    """A shortest beta-process; ties go to smallest ``(i, h)``, first before second."""
    s = BinarySeq.coerce(s)
    beta = as_fraction(beta)
    if s.length > BETA_CAP:
        raise CapExceeded(f"length {s.length} exceeds beta cap {BETA_CAP}")
    steps = []
    cur, d = s, _beta_dist(s, beta)
    while d:
        for step, nxt in _successors(cur, beta):
            if _beta_dist(nxt, beta) == d - 1:
                steps.append(step)
                cur, d = nxt, d - 1
                break
    return DedupProcess(s, tuple(steps), cur, beta)


def beta_levels(cfg: BetaConfig) -> dict:
    """Unpacked f_beta for every word of length 1..max_n, by graded DP.

    Independent of the memoized search above: vectorized over all words of
    a length, both keep sides handled by index arithmetic.
    """
    levels = {1: np.zeros(2, dtype=np.uint8)}
    for L in range(2, cfg.max_n + 1):
        v = np.arange(1 << L, dtype=np.uint64)
        best = np.full(v.size, _UNSET, dtype=np.uint8)
        for h in range(1, L // 2 + 1):
            mask = np.uint64((1 << h) - 1)
            budget = mismatch_budget(cfg.beta, h)
            diff = v ^ (v >> np.uint64(h))
            below = levels[L - h]
            for tail in range(L - 2 * h + 1):
                sh = np.uint64(tail)
                idx = np.flatnonzero(np.bitwise_count((diff >> sh) & mask) <= budget)
                if idx.size == 0:
                    continue
                w = v[idx]
                low = w & np.uint64((1 << tail) - 1)
                keep1 = ((w >> np.uint64(tail + h)) << sh) | low
                keep2 = ((w >> np.uint64(tail + 2 * h)) << np.uint64(tail + h)) | (w & np.uint64((1 << (tail + h)) - 1))
                d = np.minimum(below[keep1.astype(np.intp)], below[keep2.astype(np.intp)])
                best[idx] = np.minimum(best[idx], d)
        levels[L] = np.where(best == _UNSET, 0, best + 1).astype(np.uint8)
    return levels


def beta_table(cfg: BetaConfig) -> dict:
    """``{n: f_beta(n)}`` for 1 <= n <= max_n."""
    return {L: int(lev.max()) for L, lev in beta_levels(cfg).items()}


# -- Plotkin-style repeat construction -----------------------------------------

def min_k(beta: Beta) -> int:
    """Smallest integer k with 1/2 + 1/(k-1) <= beta."""
    beta = as_fraction(beta)
    if beta <= Fraction(1, 2):
        raise InvalidInput("a logarithmic schedule needs beta > 1/2")
    return math.ceil((2 * beta + 1) / (2 * beta - 1))


def _plotkin(s: BinarySeq, k: int, accept) -> RepeatWitness:
    n = s.length
    K = k * k
    B = n // K
    m = (K - k) * B
    windows = [s.block((i - 1) * B + 1, m) for i in range(1, k + 2)]
    for i in range(1, k + 2):
        for j in range(i + 1, k + 2):
            dist = (windows[i - 1] ^ windows[j - 1]).bit_count()
            # Plotkin: some pair sits within (1/2 + 1/(2k)) m
            if 2 * k * dist > (k + 1) * m:
                continue
            h = (j - i) * B
            p = m // h
            start = (i - 1) * B + 1
            blocks = [s.block(start + q * h, h) for q in range(p + 1)]
            gaps = [(blocks[q] ^ blocks[q + 1]).bit_count() for q in range(p)]
            assert sum(gaps) <= dist
            best = min(gaps)
            r = gaps.index(best) + 1
            if not accept(h, best):
                raise AssertionError(
                    f"block pair at ({i},{j}) has {best} mismatches for h={h}; "
                    "the averaging argument guarantees acceptance")
            return RepeatWitness(start + (r - 1) * h, h, best, k, j - i, B, (i, j), r)
    raise AssertionError(f"no window pair within the Plotkin radius (n={n}, k={k})")


def plotkin_repeat_finder(s: BinarySeq | str, beta: Beta, k: int | None = None) -> RepeatWitness:
    """Locate a beta-repeat of length ell * floor(n / k**2) with ell <= k.

    Splits the first k**2 * B symbols into blocks of size B, compares the
    k+1 shifted windows pairwise, takes the first pair within the Plotkin
    radius and returns the closest adjacent block pair along it.
    """
    s = BinarySeq.coerce(s)
    beta = as_fraction(beta)
    if beta <= Fraction(1, 2) or beta >= 1:
        raise InvalidInput("plotkin_repeat_finder needs 1/2 < beta < 1")
    if k is None:
        k = min_k(beta)
    if k * (2 * beta - 1) < 2 * beta + 1:
        raise InvalidInput(f"k={k} is below (2 beta + 1)/(2 beta - 1) for beta={beta}")
    if s.length < k * k:
        raise InvalidInput(f"need length >= k^2 = {k * k}, got {s.length}")
    return _plotkin(s, k, lambda h, d: d <= mismatch_budget(beta, h))


def nonlinear_k(n: int, a: float) -> int:
    return math.ceil(2 * n ** (a / (1 + a)))


def nonlinear_applicable(n: int, a: float) -> bool:
    """Whether the construction is guaranteed for length n.

    Needs k**2 <= n and 1/2 + 1/(k-1) <= 1/2 + h**-a at the largest
    candidate h = k * floor(n / k**2).
    """
    k = nonlinear_k(n, a)
    if k < 2 or k * k > n:
        return False
    return (k * (n // (k * k))) ** a <= k - 1


def nonlinear_step_bound(n: int, a: float) -> float:
    """Calibrated ceiling on the nonlinear driver's step count."""
    return NONLINEAR_STEP_SLOPE * n ** (2 * a / (1 + a)) + NONLINEAR_STEP_OFFSET


def nonlinear_repeat_finder(s: BinarySeq | str, a: float) -> RepeatWitness:
    """Same construction with k = ceil(2 n**(a/(1+a))) and budget floor(h/2 + h**(1-a))."""
    s = BinarySeq.coerce(s)
    if not 0 < a < 1:
        raise InvalidInput("exponent a must lie in (0, 1)")
    if not nonlinear_applicable(s.length, a):
        raise InvalidInput(f"length {s.length} is too short for exponent {a}")
    k = nonlinear_k(s.length, a)
    return _plotkin(s, k, lambda h, d: d <= mismatch_budget(0, h, a))


# -- greedy drivers -----------------------------------------------------------

def _longest_repeat_step(s: BinarySeq, beta: Fraction, exponent: float | None) -> DedupStep:
    reps = find_repeats(s, beta, exponent)
    rep = max(reps, key=lambda r: (r.h, -r.i))
    return DedupStep(rep.i, rep.h)


def _finish(s: BinarySeq, steps: list, beta: Fraction, exponent: float | None) -> BinarySeq:
    """Reduce a short word to a root; exact search once it is small enough."""
    while s.length > EXACT_FALLBACK and not is_square_free(s):
        step = _longest_repeat_step(s, beta, exponent)
        steps.append(step)
        s = apply_dedup(s, step, beta, exponent)
    if exponent is None:
        tail = beta_process(s, beta)
        steps.extend(tail.steps)
        return tail.final
    while not is_square_free(s):
        step = _longest_repeat_step(s, beta, exponent)
        steps.append(step)
        s = apply_dedup(s, step, beta, exponent)
    return s


def greedy_log_dedup(s: BinarySeq | str, beta: Beta) -> DedupProcess:
    """Deduplicate with Plotkin witnesses while length >= k**2, then finish small."""
    s = BinarySeq.coerce(s)
    beta = as_fraction(beta)
    k = min_k(beta)
    original, steps = s, []
    while s.length >= k * k:
        w = plotkin_repeat_finder(s, beta, k)
        step = DedupStep(w.i, w.h)
        steps.append(step)
        s = apply_dedup(s, step, beta)
    _finish(s, steps, beta, None)
    return make_process(original, steps, beta)


def greedy_nonlinear_dedup(s: BinarySeq | str, a: float) -> DedupProcess:
    """Driver for the h-dependent budget 1/2 + h**-a."""
    s = BinarySeq.coerce(s)
    if not 0 < a < 1:
        raise InvalidInput("exponent a must lie in (0, 1)")
    original, steps = s, []
    while nonlinear_applicable(s.length, a):
        w = nonlinear_repeat_finder(s, a)
        step = DedupStep(w.i, w.h)
        steps.append(step)
        s = apply_dedup(s, step, 0, a)
    _finish(s, steps, Fraction(0), a)
    return make_process(original, steps, 0, a)
