"""Hamming, Johnson and halved-cube graphs, plus coordinate operators.

Coordinate positions are 1-based throughout.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .errors import ResourceError, UsageError
from .graph import Label, LabeledGraph

DEFAULT_CAP = 2 ** 16


def weight(x: Sequence[int]) -> int:
    """Number of nonzero coordinates."""
    return sum(1 for c in x if c != 0)


def delta(x: Sequence[int], indices: Iterable[int]) -> Label:
    """Delete the coordinates at the given 1-based positions."""
    drop = set(indices)
    n = len(x)
    if not drop:
        raise UsageError("delta needs at least one position")
    if any(not 1 <= i <= n for i in drop):
        raise UsageError(f"positions {sorted(drop)} out of range 1..{n}")
    if len(drop) >= n:
        raise UsageError("cannot delete every coordinate")
    return tuple(c for pos, c in enumerate(x, start=1) if pos not in drop)


def pi_swap(x: Sequence[int], i: int, j: int) -> Label:
    """Interchange coordinates ``i < j`` (1-based)."""
    if not 1 <= i < j <= len(x):
        raise UsageError(f"need 1 <= i < j <= {len(x)}, got i={i}, j={j}")
    y = list(x)
    y[i - 1], y[j - 1] = y[j - 1], y[i - 1]
    return tuple(y)


def _check_cap(count: int, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if count > cap:
        raise ResourceError(f"instance has {count} vertices, above the cap of {cap}")


def _distance_graph(q: int, n: int, verts: list[Label], step) -> LabeledGraph:
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for a, v in enumerate(verts):
        for w in step(v):
            b = index.get(w)
            if b is not None and a < b:
                edges.append((a, b))
    edges.sort()
    return LabeledGraph(q, n, tuple(verts), tuple(edges))


def _one_change(q: int):
    def step(v):
        for pos in range(len(v)):
            for c in range(q):
                if c != v[pos]:
                    yield v[:pos] + (c,) + v[pos + 1:]
    return step


def _two_flips(v):
    for a, b in combinations(range(len(v)), 2):
        w = list(v)
        w[a] ^= 1
        w[b] ^= 1
        yield tuple(w)


def build_hamming(n: int, q: int, cap: int | None = None) -> LabeledGraph:
    """H(n, q): words over Z_q, adjacent at Hamming distance 1."""
    if n < 1 or q < 2:
        raise UsageError(f"Hamming graph needs n >= 1 and q >= 2, got n={n}, q={q}")
    _check_cap(q ** n, cap)
    verts = list(product(range(q), repeat=n))
    return _distance_graph(q, n, verts, _one_change(q))


def build_johnson(n: int, k: int, cap: int | None = None) -> LabeledGraph:
    """J(n, k): binary words of weight k, adjacent at Hamming distance 2."""
    if n < 1 or not 0 <= k <= n:
        raise UsageError(f"Johnson graph needs n >= 1 and 0 <= k <= n, got n={n}, k={k}")
    _check_cap(comb(n, k), cap)
    verts = [v for v in product((0, 1), repeat=n) if sum(v) == k]
    return _distance_graph(2, n, verts, _two_flips)


def build_halved_cube(n: int, parity: str = "even", cap: int | None = None) -> LabeledGraph:
    """Binary words of length n with the given weight parity, adjacent at distance 2.

    ``parity="even"`` is the halved n-cube; ``"odd"`` is its isomorphic twin
    on odd-weight words.
    """
    if parity not in ("even", "odd"):
        raise UsageError(f"parity must be 'even' or 'odd', got {parity!r}")
    if n < 1:
        raise UsageError(f"halved cube needs n >= 1, got {n}")
    _check_cap(2 ** (n - 1), cap)
    want = 0 if parity == "even" else 1
    verts = [v for v in product((0, 1), repeat=n) if sum(v) % 2 == want]
    return _distance_graph(2, n, verts, _two_flips)
