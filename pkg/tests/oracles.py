"""Brute-force reference implementations on plain strings.

Deliberately share no code with the package: string slicing instead of
integer bit tricks, breadth-first search instead of graded DP or memoized
recursion.
"""
from collections import deque
from fractions import Fraction
from itertools import product
from math import floor


def all_words(n):
    return ["".join(p) for p in product("01", repeat=n)]


def hamming(a, b):
    return sum(x != y for x, y in zip(a, b))


def repeats(s, beta=Fraction(0)):
    out = []
    for i in range(len(s)):
        for h in range(1, (len(s) - i) // 2 + 1):
            if hamming(s[i:i + h], s[i + h:i + 2 * h]) <= floor(Fraction(beta) * h):
                out.append((i + 1, h))
    return out


def dedups(s, beta=Fraction(0)):
    for i, h in repeats(s, beta):
        a = i - 1
        yield s[:a + h] + s[a + 2 * h:]
        yield s[:a] + s[a + h:]


def bfs_distance(s, beta=Fraction(0)):
    """Breadth-first search to the nearest word without a repeat."""
    seen = {s: 0}
    q = deque([s])
    while q:
        cur = q.popleft()
        if not repeats(cur):
            return seen[cur]
        for nxt in dedups(cur, beta):
            if nxt not in seen:
                seen[nxt] = seen[cur] + 1
                q.append(nxt)
    raise AssertionError("unreachable")


def parallel_moves(s):
    reps = repeats(s)
    res = set()

    def rec(k, free, chosen):
        for j in range(k, len(reps)):
            i, h = reps[j]
            if i < free:
                continue
            chosen.append((i, h))
            t = s
            for a, hh in sorted(chosen, reverse=True):
                t = t[:a - 1 + hh] + t[a - 1 + 2 * hh:]
            res.add(t)
            rec(j + 1, i + 2 * h, chosen)
            chosen.pop()

    rec(0, 1, [])
    return res


def bfs_parallel(s):
    seen = {s: 0}
    q = deque([s])
    while q:
        cur = q.popleft()
        if not repeats(cur):
            return seen[cur]
        for nxt in parallel_moves(cur):
            if nxt not in seen:
                seen[nxt] = seen[cur] + 1
                q.append(nxt)
    raise AssertionError("unreachable")


def distinct_kmers(s, k):
    return len({s[i:i + k] for i in range(len(s) - k + 1)})


def bfs_to_length(s, m):
    """Fewest exact dedups bringing ``s`` down to length at most ``m``."""
    seen = {s: 0}
    q = deque([s])
    while q:
        cur = q.popleft()
        if len(cur) <= m:
            return seen[cur]
        for nxt in dedups(cur):
            if nxt not in seen:
                seen[nxt] = seen[cur] + 1
                q.append(nxt)
    raise AssertionError("unreachable")
