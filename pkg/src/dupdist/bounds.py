"""Numeric evaluation of the counting, entropy and f(n, m) bounds.

Every comparison is made in the log2 domain: binomials go through log-gamma
and sums through a running log-sum-exp, so n in the millions is fine.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import bisect
from scipy.special import gammaln, logsumexp

from .errors import InvalidInput
from .seqcore import ceil_log2_ratio

LN2 = math.log(2)

# values read off the published computer search; f(32) levels are a big-memory run here
REPORTED_F_32_12 = 8
REPORTED_MAX_F_BELOW_32 = 15


def log2_binom(p, q):
    return (gammaln(p + 1) - gammaln(q + 1) - gammaln(p - q + 1)) / LN2


def binary_entropy(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def _log2_partial_sums(n: int, F: int, bits_per_step: float) -> np.ndarray:
    """log2 of sum_{f=1..F'} C(n+f,f) C(2n+f,f) C(2n+f+2,f) 2**(c f) for F' = 1..F."""
    f = np.arange(1, F + 1, dtype=np.float64)
    terms = (log2_binom(n + f, f) + log2_binom(2 * n + f, f) + log2_binom(2 * n + f + 2, f)
             + bits_per_step * f)
    return np.logaddexp.accumulate(terms * LN2) / LN2


def log2_counting_lhs(n: int, F: int) -> float:
    """log2 of the number of encodable (root, normal process) pairs of length <= F."""
    f = np.arange(1, F + 1, dtype=np.float64)
    terms = log2_binom(n + f, f) + log2_binom(2 * n + f, f) + log2_binom(2 * n + f + 2, f) + f
    return math.log2(6 * n) + float(logsumexp(terms * LN2)) / LN2


def _log2_pow2_minus_one(x: float) -> float:
    """log2(2**x - 1) for x > 0."""
    return x + math.log1p(-(2.0 ** -x)) / LN2


def eval_lb2(n: int, F: int, alpha: float) -> bool:
    """Whether 6n sum_{f<=F} C(n+f,f)C(2n+f,f)C(2n+f+2,f)2^f >= 2^(n alpha) - 1."""
    if not 0 < alpha <= 1:
        raise InvalidInput("alpha must lie in (0, 1]")
    if F < 1 or n < 1:
        raise InvalidInput("need n >= 1 and F >= 1")
    return log2_counting_lhs(n, F) >= _log2_pow2_minus_one(n * alpha)


def min_F_alpha(n: int, alpha: float) -> int:
    """Least F for which ``eval_lb2`` holds (the left side grows with F)."""
    if not 0 < alpha <= 1:
        raise InvalidInput("alpha must lie in (0, 1]")
    sums = math.log2(6 * n) + _log2_partial_sums(n, n, 1.0)
    target = _log2_pow2_minus_one(n * alpha)
    pos = int(np.searchsorted(sums, target, side="left"))
    if pos >= n:
        raise AssertionError(f"counting bound not met even at F = n = {n}")
    return pos + 1


def entropy_lhs(x: float) -> float:
    """3(2+x) H(x/(2+x)) + x, strictly increasing for x > 0."""
    return 3 * (2 + x) * binary_entropy(x / (2 + x)) + x


def solve_entropy(alpha: float, tol: float = 1e-9) -> float:
    """Root of entropy_lhs(x) = alpha on (0, 1] by bisection."""
    if not 0 < alpha < 1:
        raise InvalidInput("alpha must lie in (0, 1)")
    return bisect(lambda x: entropy_lhs(x) - alpha, 0.0, 1.0, xtol=tol)


def ub_from_fnm(fab: int, a: int, b: int, max_prefix: int) -> tuple[Fraction, int]:
    """Affine bound f(n) <= slope * n + intercept from one f(a, b) value."""
    if not a > b > 0:
        raise InvalidInput(f"need a > b > 0, got a={a}, b={b}")
    return Fraction(fab, a - b), max_prefix


def solve_F_beta(n: int, beta: float) -> tuple[int, float]:
    """Least F meeting the approximate-duplication counting inequality.

    6n sum_{f<=F} C(n+f,f)C(2n+f,f)C(2n+f+2,f) 2^(nH(beta)) 4^f >= 2^n.
    Returns ``(F, F/n)``; any f_beta(n) must be at least F.
    """
    if not 0 <= beta < 0.5:
        raise InvalidInput("the counting bound is vacuous for beta >= 1/2")
    sums = math.log2(6 * n) + n * binary_entropy(beta) + _log2_partial_sums(n, n, 2.0)
    pos = int(np.searchsorted(sums, float(n), side="left"))
    if pos >= n:
        raise AssertionError(f"counting bound not met even at F = n = {n}")
    return pos + 1, (pos + 1) / n


@dataclass
class BoundEntry:
    name: str
    value: float
    kind: str
    source: str
    asymptotic: bool = False


@dataclass
class BoundReport:
    n: int
    entries: list = field(default_factory=list)
    exact: int | None = None

    def lowers(self, include_asymptotic=False):
        return [e for e in self.entries if e.kind == "lower" and (include_asymptotic or not e.asymptotic)]

    def uppers(self, include_asymptotic=False):
        return [e for e in self.entries if e.kind == "upper" and (include_asymptotic or not e.asymptotic)]

    @property
    def consistent(self) -> bool:
        lo = max((e.value for e in self.lowers()), default=-math.inf)
        hi = min((e.value for e in self.uppers()), default=math.inf)
        if self.exact is not None:
            return lo <= self.exact <= hi
        return lo <= hi

    def to_dict(self) -> dict:
        return {"n": self.n, "exact": self.exact, "consistent": self.consistent,
                "bounds": [asdict(e) for e in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def bound_report(n: int, table=None, fnm: dict | None = None, alpha: float = 0.99,
                 beta: float | None = None) -> BoundReport:
    """Collect every applicable bound on f(n) and the exact value when known.

    ``table`` is a DistanceTable; ``fnm`` maps ``(a, b)`` to computed f(a, b).
    """
    if n < 1:
        raise InvalidInput("n must be positive")
    rep = BoundReport(n)
    rep.entries.append(BoundEntry("log2", ceil_log2_ratio(n, 1), "lower",
                                  "f(0^n) = ceil(log2 n)"))
    if n >= 2:
        rep.entries.append(BoundEntry("counting", min_F_alpha(n, 1.0), "lower",
                                      "least F whose normal-process count reaches 2^n - 1"))
    rep.entries.append(BoundEntry("entropy", solve_entropy(alpha) * n, "lower",
                                  f"counting of normal processes, alpha={alpha}; asymptotic only",
                                  asymptotic=True))
    rep.entries.append(BoundEntry("length", n, "upper", "f(s) <= |s|"))
    slope, icpt = ub_from_fnm(REPORTED_F_32_12, 32, 12, REPORTED_MAX_F_BELOW_32)
    rep.entries.append(BoundEntry("fnm-reported", float(slope * n + icpt), "upper",
                                  f"f(32,12)={REPORTED_F_32_12}, max f(i<32)="
                                  f"{REPORTED_MAX_F_BELOW_32} (published search): 2n/5+15"))
    if table is not None:
        from .exact_engine import f_n
        fmax = {i: f_n(table, i) for i in range(1, table.max_n + 1)}
        if n <= table.max_n:
            rep.exact = fmax[n]
        if fnm:
            best = None
            for (a, b), fab in fnm.items():
                if a - 1 > table.max_n:
                    continue
                slope, icpt = ub_from_fnm(fab, a, b, max(fmax[i] for i in range(1, a)))
                val = slope * n + icpt
                if best is None or val < best[0]:
                    best = (val, a, b, slope, icpt)
            if best is not None:
                val, a, b, slope, icpt = best
                rep.entries.append(BoundEntry("fnm-computed", float(val), "upper",
                                              f"f({a},{b})/({a}-{b}) n + max f(i<{a}) = {slope} n + {icpt}"))
    if beta is not None:
        if beta < 0.5:
            F, ratio = solve_F_beta(n, beta)
            rep.entries.append(BoundEntry("beta-counting", F, "lower",
                                          f"f_beta(n) >= F by counting, beta={beta}; f(n) >= f_beta(n)"))
        elif beta > 0.5:
            k = math.ceil((2 * beta + 1) / (2 * beta - 1))
            rep.entries.append(BoundEntry("f_beta-log", (k * k) * math.log(n), "upper",
                                          f"f_beta(n) <= C ln n for C > {k * k}, large n; asymptotic only",
                                          asymptotic=True))
    return rep
