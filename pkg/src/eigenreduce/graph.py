"""Finite simple graphs on coordinate-vector labels.

Vertices are tuples of integers over ``Z_q`` kept in lexicographic order, so a
vertex id is just its position in that order.  Maps between graphs are plain
id arrays and are verified edge by edge; nothing here searches for maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import UsageError

Label = tuple[int, ...]


def format_label(label: Label) -> str:
    return "".join(str(c) for c in label)


def parse_label(text: str, q: int) -> Label:
    if q > 10:
        raise UsageError("digit-string labels require q <= 10")
    try:
        label = tuple(int(c) for c in text)
    except ValueError:
        raise UsageError(f"label {text!r} is not a digit string") from None
    if any(c >= q for c in label):
        raise UsageError(f"label {text!r} has a digit outside Z_{q}")
    return label


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """Simple undirected graph with canonically ordered vertex labels.

    ``edges`` holds pairs ``(i, j)`` with ``i < j`` in sorted order.
    """

    q: int
    n: int
    vertices: tuple[Label, ...]
    edges: tuple[tuple[int, int], ...]
    _nbrs: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    _nbr_sets: tuple[frozenset, ...] = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.q < 2:
            raise UsageError(f"alphabet size must be >= 2, got {self.q}")
        if self.n < 1:
            raise UsageError(f"word length must be >= 1, got {self.n}")
        verts = tuple(tuple(int(c) for c in v) for v in self.vertices)
        for v in verts:
            if len(v) != self.n:
                raise UsageError(f"label {v} does not have length {self.n}")
            if any(c < 0 or c >= self.q for c in v):
                raise UsageError(f"label {v} has a coordinate outside Z_{self.q}")
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise UsageError("vertices must be strictly increasing in lexicographic order")
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        size = len(verts)
        for i, j in edges:
            if not (0 <= i < j < size):
                raise UsageError(f"bad edge ({i}, {j}): need 0 <= i < j < {size}")
        if any(a >= b for a, b in zip(edges, edges[1:])):
            raise UsageError("edges must be sorted and free of duplicates")

        nbrs: list[list[int]] = [[] for _ in range(size)]
        for i, j in edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_nbrs", tuple(tuple(sorted(a)) for a in nbrs))
        object.__setattr__(self, "_nbr_sets", tuple(frozenset(a) for a in nbrs))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(verts)})

    @classmethod
    def from_pairs(cls, q: int, n: int, labels: Iterable[Label],
                   pairs: Iterable[tuple[Label, Label]]) -> "LabeledGraph":
        """Build a graph from unordered labels and label pairs (any order)."""
        verts = sorted(set(tuple(v) for v in labels))
        index = {v: i for i, v in enumerate(verts)}
        edges = set()
        for a, b in pairs:
            i, j = index[tuple(a)], index[tuple(b)]
            if i == j:
                raise UsageError(f"self-loop at {a}")
            edges.add((min(i, j), max(i, j)))
        return cls(q, n, tuple(verts), tuple(sorted(edges)))

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (self.q, self.n, self.vertices, self.edges) == (
            other.q, other.n, other.vertices, other.edges)

    def __hash__(self) -> int:
        return hash((self.q, self.n, self.vertices, self.edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def index(self, label: Sequence[int]) -> int:
        try:
            return self._index[tuple(label)]
        except KeyError:
            raise UsageError(f"{tuple(label)} is not a vertex") from None

    def __contains__(self, label) -> bool:
        return tuple(label) in self._index

    def check_vertex(self, v: int) -> int:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < len(self.vertices):
            raise UsageError(f"invalid vertex id {v!r} (graph has {len(self)} vertices)")
        return int(v)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[self.check_vertex(v)]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbr_sets[u]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def degrees(self) -> list[int]:
        return [len(a) for a in self._nbrs]

    def adjacency_matrix(self) -> np.ndarray:
        size = len(self.vertices)
        A = np.zeros((size, size))
        if self.edges:
            e = np.asarray(self.edges)
            A[e[:, 0], e[:, 1]] = 1.0
            A[e[:, 1], e[:, 0]] = 1.0
        return A

    def __repr__(self) -> str:
        return (f"LabeledGraph(q={self.q}, n={self.n}, "
                f"|V|={len(self.vertices)}, |E|={len(self.edges)})")


def neighbors(G: LabeledGraph, v: int) -> set[int]:
    return set(G.neighbors(v))


@dataclass(frozen=True, eq=False)
class VertexMap:
    """Map ``source`` vertex ids to ``target`` vertex ids.

    ``image[i]`` is the target id of source vertex ``i``.  Bijectivity is not
    enforced here; :func:`check_isomorphism` reports it.
    """

    source: LabeledGraph
    target: LabeledGraph
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        if len(image) != len(self.source):
            raise UsageError(
                f"map has {len(image)} entries for {len(self.source)} source vertices")
        size = len(self.target)
        for i in image:
            if not 0 <= i < size:
                raise UsageError(f"map image {i} is not a target vertex id")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, G: LabeledGraph) -> "VertexMap":
        return cls(G, G, tuple(range(len(G))))

    def __call__(self, v: int) -> int:
        return self.image[v]

    def is_bijective(self) -> bool:
        return len(self.source) == len(self.target) and len(set(self.image)) == len(self.image)

    def inverse(self) -> "VertexMap":
        if not self.is_bijective():
            raise UsageError("map is not a bijection")
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return VertexMap(self.target, self.source, tuple(inv))

    def compose(self, other: "VertexMap") -> "VertexMap":
        """Return ``self ∘ other`` (apply ``other`` first)."""
        if other.target != self.source:
            raise UsageError("maps are not composable")
        return VertexMap(other.source, self.target, tuple(self.image[i] for i in other.image))


@dataclass(frozen=True)
class IsoCheck:
    ok: bool
    witness: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_isomorphism(G: LabeledGraph, H: LabeledGraph, m: VertexMap) -> IsoCheck:
    """Check that ``m`` is an isomorphism from ``G`` onto ``H``.

    On failure the witness is a pair of ``G`` vertex ids whose adjacency is
    not preserved (or which collide under ``m``).
    """
    if len(G) != len(H):
        raise UsageError(f"vertex counts differ: {len(G)} vs {len(H)}")
    if len(m.image) != len(G) or m.source != G or m.target != H:
        raise UsageError("map does not go from the first graph to the second")
    seen: dict[int, int] = {}
    for u, t in enumerate(m.image):
        if t in seen:
            return IsoCheck(False, (seen[t], u), "not injective")
        seen[t] = u
    for u, v in G.edges:
        if not H.has_edge(m.image[u], m.image[v]):
            return IsoCheck(False, (u, v), "edge maps to non-edge")
    inv = [0] * len(G)
    for u, t in enumerate(m.image):
        inv[t] = u
    for a, b in H.edges:
        u, v = sorted((inv[a], inv[b]))
        if not G.has_edge(u, v):
            return IsoCheck(False, (u, v), "non-edge maps to edge")
    return IsoCheck(True)


def is_automorphism(G: LabeledGraph, m: VertexMap) -> bool:
    return check_isomorphism(G, G, m).ok


def induced_subgraph(G: LabeledGraph, W: Iterable[int]) -> tuple[LabeledGraph, VertexMap]:
    """Return ``G[W]`` and the embedding of its ids into ``G``.

    Since ids follow label order, the sorted ``W`` is already canonical.
    """
    ids = sorted({G.check_vertex(w) for w in W})
    if not ids:
        raise UsageError("induced subgraph needs a nonempty vertex set")
    pos = {w: a for a, w in enumerate(ids)}
    edges = []
    for a, w in enumerate(ids):
        for u in G.neighbors(w):
            b = pos.get(u)
            if b is not None and a < b:
                edges.append((a, b))
    sub = LabeledGraph(G.q, G.n, tuple(G.vertices[w] for w in ids), tuple(sorted(edges)))
    return sub, VertexMap(sub, G, tuple(ids))


def cartesian_product(G: LabeledGraph, H: LabeledGraph) -> LabeledGraph:
    """Cartesian product with labels ``g + h`` (H's coordinates appended).

    Vertex ``(u, v)`` gets id ``u * |V(H)| + v``, which is the lexicographic
    order of the concatenated labels.
    """
    size_h = len(H)
    verts = tuple(g + h for g in G.vertices for h in H.vertices)
    edges = []
    for u in range(len(G)):
        for a, b in H.edges:
            edges.append((u * size_h + a, u * size_h + b))
    for a, b in G.edges:
        for v in range(size_h):
            edges.append((a * size_h + v, b * size_h + v))
    return LabeledGraph(max(G.q, H.q), G.n + H.n, verts, tuple(sorted(edges)))


def complete_graph(size: int) -> LabeledGraph:
    """K_size on single-letter labels (``size == 1`` gives K1 over Z_2)."""
    if size < 1:
        raise UsageError("complete graph needs at least one vertex")
    q = max(size, 2)
    verts = tuple((i,) for i in range(size))
    edges = tuple((i, j) for i in range(size) for j in range(i + 1, size))
    return LabeledGraph(q, 1, verts, edges)


def empty_graph(size: int) -> LabeledGraph:
    q = max(size, 2)
    return LabeledGraph(q, 1, tuple((i,) for i in range(size)), ())
