"""Grassmannian permutations, Coxeter length, partition shapes and their
standard-tableau counts, and reduced-word enumeration.

Permutations are tuples in one-line notation on 1..k.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial
from typing import Sequence


class CapExceeded(RuntimeError):
    pass


def identity(k: int) -> tuple:
    return tuple(range(1, k + 1))


def compose(u: Sequence[int], v: Sequence[int]) -> tuple:
    """(u*v)(i) = u(v(i))."""
    return tuple(u[v[i] - 1] for i in range(len(u)))


def simple(i: int, k: int) -> tuple:
    """The adjacent transposition s_i = (i, i+1)."""
    p = list(range(1, k + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def coxeter_length(w: Sequence[int]) -> int:
    """Number of inversions."""
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def grassmannian_perm(s, k: int) -> tuple:
    """One-line (sorted S, sorted complement); minimal perm sending [|S|] to S."""
    s = sorted(set(s))
    if s and (s[0] < 1 or s[-1] > k):
        raise ValueError(f"subset {s} out of range 1..{k}")
    rest = [x for x in range(1, k + 1) if x not in set(s)]
    return tuple(s + rest)


def young_diagram(s, k: int) -> tuple:
    """The partition cut out by the lattice walk of S inside |S| x (k-|S|).

    Rows are weakly decreasing; |shape| equals the length of w_S.
    """
    s = sorted(set(s))
    a = len(s)
    rows = [s[a - 1 - i] - (a - i) for i in range(a)]
    return tuple(r for r in rows if r > 0)


def hook_lengths(shape: Sequence[int]) -> list:
    cols = [0] * (shape[0] if shape else 0)
    for r in shape:
        for j in range(r):
            cols[j] += 1
    out = []
    for i, r in enumerate(shape):
        out.append([(r - j) + (cols[j] - i) - 1 for j in range(r)])
    return out


def f_lambda(shape: Sequence[int]) -> int:
    """Number of standard tableaux, by the hook-length formula (exact)."""
    shape = tuple(r for r in shape if r > 0)
    if any(shape[i] < shape[i + 1] for i in range(len(shape) - 1)):
        raise ValueError("shape must be weakly decreasing")
    n = sum(shape)
    if n == 0:
        return 1
    denom = 1
    for row in hook_lengths(shape):
        for h in row:
            denom *= h
    num = factorial(n)
    assert num % denom == 0
    return num // denom


def count_syt_brute(shape: Sequence[int]) -> int:
    """Direct recursive enumeration of standard tableaux (cross-check)."""
    shape = tuple(r for r in shape if r > 0)

    @lru_cache(maxsize=None)
    def count(rows):
        if not any(rows):
            return 1
        total = 0
        for i, r in enumerate(rows):
            if r and (i == len(rows) - 1 or rows[i + 1] < r):
                nxt = rows[:i] + (r - 1,) + rows[i + 1:]
                total += count(nxt)
        return total

    return count(shape)


def descents_right(w: Sequence[int]) -> list:
    """Indices i with w*s_i < w, i.e. w[i] > w[i+1]."""
    return [i + 1 for i in range(len(w) - 1) if w[i] > w[i + 1]]


def reduced_words(w: Sequence[int], cap: int = 1_000_000) -> list:
    """All reduced words for w (lists of simple-reflection indices).

    The recursion peels a right descent; results are memoized on one-line
    notation and returned sorted.
    """
    memo: dict[tuple, list] = {}

    def rec(u: tuple) -> list:
        if u in memo:
            return memo[u]
        ds = descents_right(u)
        if not ds:
            memo[u] = [()]
            return memo[u]
        words = []
        for i in ds:
            v = list(u)
            v[i - 1], v[i] = v[i], v[i - 1]
            for word in rec(tuple(v)):
                words.append(word + (i,))
                if len(words) > cap:
                    raise CapExceeded(f"more than {cap} reduced words")
        memo[u] = words
        return words

    out = sorted(rec(tuple(w)))
    if len(out) > cap:
        raise CapExceeded(f"more than {cap} reduced words")
    return [list(word) for word in out]


def commutation_classes(words: Sequence[Sequence[int]]) -> int:
    """Number of connected components under the move ...ij... -> ...ji..., |i-j|>1."""
    keys = [tuple(w) for w in words]
    index = {w: i for i, w in enumerate(keys)}
    parent = list(range(len(keys)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for w in keys:
        for t in range(len(w) - 1):
            if abs(w[t] - w[t + 1]) > 1:
                other = w[:t] + (w[t + 1], w[t]) + w[t + 2:]
                a, b = find(index[w]), find(index[other])
                if a != b:
                    parent[a] = b
    return len({find(i) for i in range(len(keys))})


def all_subsets(k: int):
    for r in range(k + 1):
        yield from itertools.combinations(range(1, k + 1), r)
