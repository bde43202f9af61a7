"""Special pairs, the fold/reduce operators and the three family constructions.

A special pair on ``G`` is an automorphism ``phi`` with a partition
``(V1, V2, V3)`` such that ``phi`` swaps ``V1`` and ``V2``, fixes ``V3``
pointwise, and every ``x`` in ``V1 ∪ V2`` has ``phi(x)`` as its only neighbour
on the opposite side.  Given isomorphisms ``phi1: G[V1] -> G0`` and
``phi2: G[V2] -> G0``, ``reduce`` sends a lambda-eigenfunction of ``G`` to an
element of the (lambda + 1)-eigenspace of ``G0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import UsageError
from .families import build_halved_cube, build_hamming, build_johnson, delta, pi_swap
from .graph import (IsoCheck, LabeledGraph, VertexMap, cartesian_product, check_isomorphism,
                    complete_graph, induced_subgraph)
from .spectral import (DEFAULT_TOL, Spectrum, VertexFunction, eigendecompose, residual,
                       sample_eigenfunction)

CONDITIONS = ("automorphism", "condition 1", "condition 2", "condition 3")

Parts = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


def normalize_parts(G: LabeledGraph, parts: Sequence[Sequence[int]]) -> Parts:
    """Validate that ``parts`` is a partition of V(G) with V1, V2 nonempty."""
    if len(parts) != 3:
        raise UsageError(f"expected three parts, got {len(parts)}")
    out = []
    owner: dict[int, int] = {}
    for k, part in enumerate(parts, start=1):
        ids = []
        for v in part:
            v = G.check_vertex(v)
            if v in owner:
                raise UsageError(f"vertex {v} appears in V{owner[v]} and V{k}")
            owner[v] = k
            ids.append(v)
        out.append(tuple(sorted(ids)))
    if len(owner) != len(G):
        missing = next(v for v in range(len(G)) if v not in owner)
        raise UsageError(f"parts do not cover the graph; vertex {missing} is missing")
    if not out[0] or not out[1]:
        raise UsageError("V1 and V2 must be nonempty")
    return out[0], out[1], out[2]


@dataclass(frozen=True)
class ConditionResult:
    name: str
    ok: bool
    witness: tuple[int, ...] = ()
    detail: str = ""


@dataclass(frozen=True)
class PairReport:
    """Per-condition outcome; ``failed`` is the first failure in fixed order."""

    results: tuple[ConditionResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failed(self) -> ConditionResult | None:
        return next((r for r in self.results if not r.ok), None)

    def __bool__(self) -> bool:
        return self.ok


def verify_special_pair(G: LabeledGraph, phi: VertexMap,
                        parts: Sequence[Sequence[int]]) -> PairReport:
    V1, V2, V3 = normalize_parts(G, parts)
    if phi.source != G or phi.target != G:
        raise UsageError("phi must map the graph to itself")
    img = phi.image
    results = []

    iso = check_isomorphism(G, G, phi)
    results.append(ConditionResult(CONDITIONS[0], iso.ok, iso.witness or (),
                                   "" if iso.ok else iso.reason))

    s1, s2 = set(V1), set(V2)
    bad = next((x for x in V1 if img[x] not in s2), None)
    if bad is None:
        bad = next((x for x in V2 if img[x] not in s1), None)
    results.append(ConditionResult(
        CONDITIONS[1], bad is None, () if bad is None else (bad,),
        "" if bad is None else f"phi({bad}) = {img[bad]} lies outside the swapped part"))

    bad, detail = None, ""
    for here, there in ((V1, s2), (V2, s1)):
        for x in here:
            cross = [y for y in G.neighbors(x) if y in there]
            if cross != [img[x]]:
                bad, detail = x, f"cross neighbours of {x} are {cross}, expected [{img[x]}]"
                break
        if bad is not None:
            break
    results.append(ConditionResult(CONDITIONS[2], bad is None,
                                   () if bad is None else (bad,), detail))

    bad = next((x for x in V3 if img[x] != x), None)
    results.append(ConditionResult(
        CONDITIONS[3], bad is None, () if bad is None else (bad,),
        "" if bad is None else f"phi moves fixed-part vertex {bad} to {img[bad]}"))
    return PairReport(tuple(results))


@dataclass(frozen=True, eq=False)
class SpecialPair:
    """Candidate special pair.  Conditions are checked by :meth:`verify`."""

    graph: LabeledGraph
    phi: VertexMap
    parts: Parts

    def __post_init__(self):
        object.__setattr__(self, "parts", normalize_parts(self.graph, self.parts))
        if self.phi.source != self.graph or self.phi.target != self.graph:
            raise UsageError("phi must map the graph to itself")

    @property
    def V1(self) -> tuple[int, ...]:
        return self.parts[0]

    @property
    def V2(self) -> tuple[int, ...]:
        return self.parts[1]

    @property
    def V3(self) -> tuple[int, ...]:
        return self.parts[2]

    def verify(self) -> PairReport:
        return verify_special_pair(self.graph, self.phi, self.parts)


@dataclass(frozen=True)
class ContextReport:
    pair: PairReport
    phi1: IsoCheck
    phi2: IsoCheck
    compatible: bool
    compat_witness: int | None = None

    @property
    def ok(self) -> bool:
        return self.pair.ok and self.phi1.ok and self.phi2.ok and self.compatible

    def problem(self) -> str:
        if not self.pair.ok:
            f = self.pair.failed
            return f"pair fails {f.name} (witness {list(f.witness)}): {f.detail}"
        if not self.phi1.ok:
            return f"phi1 is not an isomorphism G[V1] -> G0 (witness {self.phi1.witness})"
        if not self.phi2.ok:
            return f"phi2 is not an isomorphism G[V2] -> G0 (witness {self.phi2.witness})"
        if not self.compatible:
            return (f"phi2 != phi1 o phi on V2 (witness G0 vertex {self.compat_witness})")
        return ""


@dataclass(frozen=True, eq=False)
class ReductionContext:
    """A special pair with target graph ``G0`` and the maps ``phi1``, ``phi2``.

    ``phi1`` has source ``G[V1]`` (ids = positions in sorted ``V1``) and
    ``phi2`` has source ``G[V2]``.  Besides both maps being isomorphisms we
    require ``phi2 = phi1 ∘ phi`` on ``V2``: without it the reduced function
    is not the transported fold and can leave the shifted eigenspace.
    """

    pair: SpecialPair
    G0: LabeledGraph
    phi1: VertexMap
    phi2: VertexMap
    _subs: tuple = field(init=False, repr=False)

    def __post_init__(self):
        sub1, _ = induced_subgraph(self.pair.graph, self.pair.V1)
        sub2, _ = induced_subgraph(self.pair.graph, self.pair.V2)
        for name, m, sub in (("phi1", self.phi1, sub1), ("phi2", self.phi2, sub2)):
            if m.source != sub or m.target != self.G0:
                raise UsageError(f"{name} must map the induced subgraph onto G0")
        object.__setattr__(self, "_subs", (sub1, sub2))

    @property
    def graph(self) -> LabeledGraph:
        return self.pair.graph

    @property
    def sub1(self) -> LabeledGraph:
        return self._subs[0]

    @property
    def sub2(self) -> LabeledGraph:
        return self._subs[1]

    @cached_property
    def report(self) -> ContextReport:
        pair = self.pair.verify()
        c1 = check_isomorphism(self.sub1, self.G0, self.phi1)
        c2 = check_isomorphism(self.sub2, self.G0, self.phi2)
        witness = None
        pos2 = {v: b for b, v in enumerate(self.pair.V2)}
        img = self.pair.phi.image
        for a, x in enumerate(self.pair.V1):
            b = pos2.get(img[x])
            if b is None or self.phi2.image[b] != self.phi1.image[a]:
                witness = self.phi1.image[a]
                break
        return ContextReport(pair, c1, c2, witness is None, witness)

    @cached_property
    def _inverses(self) -> tuple[np.ndarray, np.ndarray]:
        inv1 = np.empty(len(self.G0), dtype=np.intp)
        inv2 = np.empty(len(self.G0), dtype=np.intp)
        inv1[list(self.phi1.image)] = self.pair.V1
        inv2[list(self.phi2.image)] = self.pair.V2
        return inv1, inv2

    def require_valid(self) -> None:
        rep = self.report
        if not rep.ok:
            raise UsageError(f"invalid reduction context: {rep.problem()}")


def _values_on(G: LabeledGraph, f) -> np.ndarray:
    if isinstance(f, VertexFunction):
        if f.graph != G:
            raise UsageError("function is defined on a different graph")
        return f.values
    return VertexFunction(G, f).values


def fold(f, phi: VertexMap) -> VertexFunction:
    """h(x) = f(x) - f(phi(x))."""
    G = phi.source
    values = _values_on(G, f)
    return VertexFunction(G, values - values[list(phi.image)])


def reduce(f, ctx: ReductionContext) -> VertexFunction:
    """f_P(y) = f(phi1^-1(y)) - f(phi2^-1(y)) on G0."""
    ctx.require_valid()
    values = _values_on(ctx.graph, f)
    inv1, inv2 = ctx._inverses
    return VertexFunction(ctx.G0, values[inv1] - values[inv2])


def reduce_via_fold(f, ctx: ReductionContext) -> VertexFunction:
    """Restrict ``fold(f, phi)`` to V1 and transport it to G0 through phi1."""
    ctx.require_valid()
    h = fold(f, ctx.pair.phi).values
    out = np.empty(len(ctx.G0))
    out[list(ctx.phi1.image)] = h[list(ctx.pair.V1)]
    return VertexFunction(ctx.G0, out)


@dataclass(frozen=True)
class StructureReport:
    involutive: bool
    involutive_witness: int | None
    v1_v2_isomorphic: bool
    v1_v2_witness: tuple[int, ...] | None
    product_isomorphic: bool
    product_witness: tuple[int, ...] | None

    @property
    def ok(self) -> bool:
        return self.involutive and self.v1_v2_isomorphic and self.product_isomorphic

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return self.involutive, self.v1_v2_isomorphic, self.product_isomorphic


def check_pair_structure(pair: SpecialPair | ReductionContext) -> StructureReport:
    """Check involution, G[V1] ≅ G[V2] via phi, and G[V1 ∪ V2] ≅ G[V1] □ K2.

    Witnesses are ids in G (involution), in G[V1] (second check) and in
    G[V1 ∪ V2] (product check).
    """
    if isinstance(pair, ReductionContext):
        pair = pair.pair
    G, img = pair.graph, pair.phi.image
    V1, V2 = pair.V1, pair.V2

    inv_w = next((x for x in range(len(G)) if img[img[x]] != x), None)

    sub1, _ = induced_subgraph(G, V1)
    sub2, _ = induced_subgraph(G, V2)
    pos1 = {v: a for a, v in enumerate(V1)}
    pos2 = {v: b for b, v in enumerate(V2)}
    iso_w = None
    if len(V1) != len(V2):
        iso_w = (0,)
    else:
        stray = next((a for a, x in enumerate(V1) if img[x] not in pos2), None)
        if stray is not None:
            iso_w = (stray,)
        else:
            m = VertexMap(sub1, sub2, tuple(pos2[img[x]] for x in V1))
            res = check_isomorphism(sub1, sub2, m)
            iso_w = None if res.ok else res.witness

    union, emb = induced_subgraph(G, V1 + V2)
    prod = cartesian_product(sub1, complete_graph(2))
    prod_w = None
    image = []
    for u, x in enumerate(emb.image):
        if x in pos1:
            image.append(2 * pos1[x])
        elif img[x] in pos1:
            image.append(2 * pos1[img[x]] + 1)
        else:
            prod_w = (u,)
            break
    if prod_w is None:
        if len(union) != len(prod):
            prod_w = (0,)
        else:
            res = check_isomorphism(union, prod, VertexMap(union, prod, tuple(image)))
            prod_w = None if res.ok else res.witness

    return StructureReport(inv_w is None, inv_w, iso_w is None, iso_w,
                         prod_w is None, prod_w)


# --- constructions ---------------------------------------------------------

def _context_from_labels(G: LabeledGraph, phi_label, in_v1, in_v2, G0: LabeledGraph,
                         to_g0) -> ReductionContext:
    phi = VertexMap(G, G, tuple(G.index(phi_label(x)) for x in G.vertices))
    V1 = tuple(i for i, x in enumerate(G.vertices) if in_v1(x))
    V2 = tuple(i for i, x in enumerate(G.vertices) if in_v2(x))
    V3 = tuple(i for i, x in enumerate(G.vertices) if not in_v1(x) and not in_v2(x))
    pair = SpecialPair(G, phi, (V1, V2, V3))
    sub1, _ = induced_subgraph(G, V1)
    sub2, _ = induced_subgraph(G, V2)
    phi1 = VertexMap(sub1, G0, tuple(G0.index(to_g0(x)) for x in sub1.vertices))
    phi2 = VertexMap(sub2, G0, tuple(G0.index(to_g0(x)) for x in sub2.vertices))
    ctx = ReductionContext(pair, G0, phi1, phi2)
    if not ctx.report.ok:
        raise RuntimeError(f"construction produced an invalid context: {ctx.report.problem()}")
    return ctx


def hamming_context(n: int, q: int, r: int, k: int, m: int,
                    cap: int | None = None) -> ReductionContext:
    """H(n, q) with V1 = {x_r = k}, V2 = {x_r = m}; phi swaps letters k, m at r."""
    if n < 2:
        raise UsageError(f"need n >= 2, got {n}")
    if q < 2:
        raise UsageError(f"need q >= 2, got {q}")
    if not 1 <= r <= n:
        raise UsageError(f"need 1 <= r <= {n}, got {r}")
    if not (0 <= k < q and 0 <= m < q):
        raise UsageError(f"letters k={k}, m={m} must lie in 0..{q - 1}")
    if k == m:
        raise UsageError("letters k and m must differ")
    swap = {k: m, m: k}

    def phi_label(x):
        return x[:r - 1] + (swap.get(x[r - 1], x[r - 1]),) + x[r:]

    return _context_from_labels(
        build_hamming(n, q, cap), phi_label,
        lambda x: x[r - 1] == k, lambda x: x[r - 1] == m,
        build_hamming(n - 1, q, cap), lambda x: delta(x, [r]))


def _check_ij(n: int, i: int, j: int) -> None:
    if not 1 <= i < j <= n:
        raise UsageError(f"need 1 <= i < j <= {n}, got i={i}, j={j}")


def johnson_context(n: int, k: int, i: int, j: int,
                    cap: int | None = None) -> ReductionContext:
    """J(n, k) with V1 = {x_i = 1, x_j = 0}, V2 = {x_i = 0, x_j = 1}; phi = pi_ij."""
    if n < 3:
        raise UsageError(f"need n >= 3 so that G0 = J(n-2, k-1) has nonempty words, got {n}")
    if not 1 <= k <= n - 1:
        raise UsageError(f"need 1 <= k <= n-1, got k={k}")
    _check_ij(n, i, j)
    return _context_from_labels(
        build_johnson(n, k, cap), lambda x: pi_swap(x, i, j),
        lambda x: x[i - 1] == 1 and x[j - 1] == 0,
        lambda x: x[i - 1] == 0 and x[j - 1] == 1,
        build_johnson(n - 2, k - 1, cap), lambda x: delta(x, [i, j]))


def halved_cube_context(n: int, i: int, j: int,
                        cap: int | None = None) -> ReductionContext:
    """Halved n-cube with the same split as Johnson; G0 lives on odd-weight words."""
    if n < 3:
        raise UsageError(f"need n >= 3, got {n}")
    _check_ij(n, i, j)
    return _context_from_labels(
        build_halved_cube(n, "even", cap), lambda x: pi_swap(x, i, j),
        lambda x: x[i - 1] == 1 and x[j - 1] == 0,
        lambda x: x[i - 1] == 0 and x[j - 1] == 1,
        build_halved_cube(n - 2, "odd", cap), lambda x: delta(x, [i, j]))


# --- theorem harness -------------------------------------------------------

@dataclass(frozen=True)
class TheoremCheck:
    lam: float
    target: float
    trials: int
    max_residual: float
    max_output: float
    target_is_eigenvalue: bool
    passed: bool


def theorem_check(ctx: ReductionContext, lam: float, trials: int = 5, seed: int = 0,
                  tol: float = DEFAULT_TOL, spectrum: Spectrum | None = None,
                  spectrum0: Spectrum | None = None) -> TheoremCheck:
    """Reduce ``trials`` sampled eigenfunctions and measure membership at lam + 1.

    Trial ``t`` samples with seed ``seed + t``.  A trial passes when its
    residual is at most ``tol * max(1, |f_P|_inf)``.
    """
    if trials < 1:
        raise UsageError("trials must be positive")
    ctx.require_valid()
    spectrum = eigendecompose(ctx.graph) if spectrum is None else spectrum
    lam = spectrum.eigenvalues[spectrum.find(lam)]
    target = lam + 1
    spectrum0 = eigendecompose(ctx.G0) if spectrum0 is None else spectrum0
    worst, biggest, passed = 0.0, 0.0, True
    for t in range(trials):
        f = sample_eigenfunction(ctx.graph, lam, seed + t, spectrum)
        fp = reduce(f, ctx)
        r = residual(ctx.G0, fp, target)
        size = fp.max_abs()
        worst, biggest = max(worst, r), max(biggest, size)
        if r > tol * max(1.0, size):
            passed = False
    return TheoremCheck(lam, target, trials, worst, biggest,
                        spectrum0.has_eigenvalue(target), passed)


def theorem_check_all(ctx: ReductionContext, trials: int = 5, seed: int = 0,
                      tol: float = DEFAULT_TOL) -> list[TheoremCheck]:
    spectrum = eigendecompose(ctx.graph)
    spectrum0 = eigendecompose(ctx.G0)
    return [theorem_check(ctx, lam, trials, seed, tol, spectrum, spectrum0)
            for lam in spectrum.eigenvalues]


# --- mutations used to probe the verifier ---------------------------------

def move_vertex(pair: SpecialPair, v: int, dest: int) -> SpecialPair:
    """Move vertex ``v`` into part ``dest`` (1, 2 or 3)."""
    parts = [list(p) for p in pair.parts]
    src = next(k for k, p in enumerate(parts) if v in p)
    if src == dest - 1:
        raise UsageError(f"vertex {v} is already in V{dest}")
    parts[src].remove(v)
    parts[dest - 1].append(v)
    return SpecialPair(pair.graph, pair.phi, tuple(tuple(p) for p in parts))


def transpose_phi(pair: SpecialPair, a: int, b: int) -> SpecialPair:
    """Replace phi by phi ∘ (a b)."""
    if a == b:
        raise UsageError("transposition needs two distinct vertices")
    img = list(pair.phi.image)
    img[a], img[b] = img[b], img[a]
    return SpecialPair(pair.graph, VertexMap(pair.graph, pair.graph, tuple(img)), pair.parts)


__all__ = [
    "CONDITIONS", "ConditionResult", "ContextReport", "PairReport", "ReductionContext",
    "StructureReport", "SpecialPair", "TheoremCheck", "check_pair_structure", "fold",
    "halved_cube_context", "hamming_context", "johnson_context", "move_vertex",
    "normalize_parts", "reduce", "reduce_via_fold", "theorem_check", "theorem_check_all",
    "transpose_phi", "verify_special_pair",
]
