import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eigenreduce import UsageError
from eigenreduce.families import build_hamming, pi_swap
from eigenreduce.graph import VertexMap, format_label
from eigenreduce.reduction import (ReductionContext, SpecialPair, check_pair_structure, fold,
                                   halved_cube_context, hamming_context, johnson_context,
                                   move_vertex, reduce, reduce_via_fold, theorem_check,
                                   theorem_check_all, transpose_phi, verify_special_pair)
from eigenreduce.spectral import (VertexFunction, eigendecompose, residual,
                                  sample_eigenfunction)


def labels(G, ids):
    return {format_label(G.vertices[i]) for i in ids}


def func(G, mapping, default=0.0):
    return VertexFunction(G, [mapping.get(format_label(x), default) for x in G.vertices])


SMALL_CONTEXTS = [
    ("hamming", (2, 2, 1, 0, 1)), ("hamming", (2, 3, 1, 0, 1)), ("hamming", (3, 2, 2, 0, 1)),
    ("hamming", (3, 3, 3, 2, 0)), ("johnson", (3, 1, 1, 2)), ("johnson", (4, 2, 1, 2)),
    ("johnson", (5, 2, 2, 4)), ("halved", (3, 1, 2)), ("halved", (4, 1, 2)),
    ("halved", (5, 2, 5)),
]


def make(kind, params):
    return {"hamming": hamming_context, "johnson": johnson_context,
            "halved": halved_cube_context}[kind](*params)


# --- verify_special_pair ---------------------------------------------------

def test_verify_hamming_pass():
    ctx = hamming_context(2, 2, 1, 0, 1)
    rep = verify_special_pair(ctx.graph, ctx.pair.phi, ctx.pair.parts)
    assert rep.ok and rep.failed is None


def test_verify_identity_fails_condition_1():
    ctx = hamming_context(2, 2, 1, 0, 1)
    rep = verify_special_pair(ctx.graph, VertexMap.identity(ctx.graph), ctx.pair.parts)
    assert rep.failed.name == "condition 1"
    assert rep.failed.witness[0] in ctx.pair.V1


def test_verify_moved_fixed_vertex():
    ctx = hamming_context(2, 3, 1, 0, 1)
    v = ctx.pair.V3[0]
    assert labels(ctx.graph, [v]) == {"20"}
    rep = move_vertex(ctx.pair, v, 1).verify()
    assert rep.failed.name == "condition 1" and rep.failed.witness == (v,)


def test_verify_reports_each_condition():
    G = build_hamming(2, 3)
    ctx = hamming_context(2, 3, 1, 0, 1)
    V1, V2, V3 = ctx.pair.parts
    # a non-automorphism
    img = list(range(len(G)))
    img[0], img[1] = img[1], img[0]
    rep = verify_special_pair(G, VertexMap(G, G, tuple(img)), ctx.pair.parts)
    assert rep.failed.name == "automorphism" and len(rep.failed.witness) == 2
    # swapping the first coordinate's letters 0,1 but declaring the last coordinate
    # as the split: phi swaps V1/V2 of another split; condition 2 and 3 fail there
    phi2 = VertexMap(G, G, tuple(G.index(pi_swap(x, 1, 2)) for x in G.vertices))
    rep = verify_special_pair(G, phi2, ctx.pair.parts)
    assert rep.results[0].ok
    assert not rep.ok


def test_verify_condition_2_and_3():
    # H(2,3), split on coordinate 1 letters 0/1, phi = the true swap but also
    # swapping letters 1 and 2 on coordinate 2 (still an automorphism)
    G = build_hamming(2, 3)
    ctx = hamming_context(2, 3, 1, 0, 1)
    sw = {0: 1, 1: 0, 2: 2}
    sw2 = {0: 0, 1: 2, 2: 1}
    phi = VertexMap(G, G, tuple(G.index((sw[x[0]], sw2[x[1]])) for x in G.vertices))
    rep = verify_special_pair(G, phi, ctx.pair.parts)
    assert [r.ok for r in rep.results] == [True, True, False, False]
    assert rep.failed.name == "condition 2"
    assert labels(G, rep.failed.witness) == {"01"}
    assert labels(G, [rep.results[3].witness[0]]) == {"21"}


@pytest.mark.parametrize("parts", [
    ((0, 1), (1, 2, 3), ()),        # overlap
    ((0, 1), (2,), ()),             # not covering
    ((), (0, 1, 2, 3), ()),         # empty V1
    ((0, 1), (2, 3)),               # two parts
    ((0, 1), (2, 9), (3,)),         # bad id
])
def test_verify_rejects_non_partition(parts):
    ctx = hamming_context(2, 2, 1, 0, 1)
    with pytest.raises(UsageError):
        verify_special_pair(ctx.graph, ctx.pair.phi, parts)


@pytest.mark.parametrize("kind, params", SMALL_CONTEXTS)
def test_mutations_all_fail(kind, params):
    ctx = make(kind, params)
    pair = ctx.pair
    size = len(pair.graph)
    checked = 0
    for v in range(size):
        for dest in (1, 2, 3):
            try:
                mutant = move_vertex(pair, v, dest)
            except UsageError:
                continue  # already there, or emptied V1/V2
            assert mutant.verify().failed is not None
            checked += 1
    for a, b in itertools.combinations(range(size), 2):
        rep = transpose_phi(pair, a, b).verify()
        assert rep.failed is not None and rep.failed.witness
        checked += 1
    assert checked > 0


# --- fold / reduce ---------------------------------------------------------

def test_fold_examples():
    G = build_hamming(2, 2)
    flip = VertexMap(G, G, tuple(G.index((1 - x[0], x[1])) for x in G.vertices))
    assert list(fold(np.full(4, 3.5), flip).values) == [0, 0, 0, 0]
    assert list(fold([1, -1, -1, 1], flip).values) == [2, -2, -2, 2]
    assert list(fold([1, 5, -2, 7], VertexMap.identity(G)).values) == [0, 0, 0, 0]


def test_reduce_hamming_example():
    ctx = hamming_context(2, 2, 1, 0, 1)
    f = func(ctx.graph, {"00": 1, "01": -1, "10": -1, "11": 1})
    assert residual(ctx.graph, f, -2) == 0
    fp = reduce(f, ctx)
    assert list(fp.values) == [2, -2]
    assert residual(ctx.G0, fp, -1) == 0


def test_reduce_halved_cube_example():
    ctx = halved_cube_context(4, 1, 2)
    f = func(ctx.graph, {"1010": 1, "0101": -1})
    assert residual(ctx.graph, f, 0) == 0
    fp = reduce(f, ctx)
    assert ctx.G0.vertices == ((0, 1), (1, 0))
    assert list(fp.values) == [1, 1]
    assert residual(ctx.G0, fp, 1) == 0


def test_reduce_johnson_example():
    ctx = johnson_context(3, 1, 1, 2)
    f = func(ctx.graph, {"100": 1, "010": -1, "001": 0})
    assert residual(ctx.graph, f, -1) == 0
    fp = reduce(f, ctx)
    assert list(fp.values) == [2]
    assert residual(ctx.G0, fp, 0) == 0


@pytest.mark.parametrize("kind, params", SMALL_CONTEXTS)
def test_reduce_constant_is_zero(kind, params):
    ctx = make(kind, params)
    assert not np.any(reduce(np.full(len(ctx.graph), 2.5), ctx).values)


def test_reduce_graph_mismatch():
    ctx = hamming_context(2, 2, 1, 0, 1)
    with pytest.raises(UsageError):
        reduce(VertexFunction(build_hamming(1, 2), [1, 0]), ctx)


# --- constructors ----------------------------------------------------------

def test_hamming_context_examples():
    ctx = hamming_context(2, 2, 1, 0, 1)
    assert labels(ctx.graph, ctx.pair.V1) == {"00", "01"}
    assert labels(ctx.graph, ctx.pair.V2) == {"10", "11"}
    assert ctx.pair.V3 == ()
    assert ctx.G0 == build_hamming(1, 2)

    ctx = hamming_context(2, 3, 1, 0, 1)
    assert [len(p) for p in ctx.pair.parts] == [3, 3, 3]
    assert ctx.G0 == build_hamming(1, 3)

    ctx = hamming_context(3, 2, 2, 0, 1)
    assert ctx.pair.V3 == () and ctx.G0 == build_hamming(2, 2)


@pytest.mark.parametrize("args", [(2, 2, 1, 1, 1), (1, 2, 1, 0, 1), (2, 2, 3, 0, 1),
                                  (2, 2, 0, 0, 1), (2, 3, 1, 0, 3)])
def test_hamming_context_errors(args):
    with pytest.raises(UsageError):
        hamming_context(*args)


def test_johnson_context_examples():
    ctx = johnson_context(3, 1, 1, 2)
    assert labels(ctx.graph, ctx.pair.V1) == {"100"}
    assert labels(ctx.graph, ctx.pair.V2) == {"010"}
    assert labels(ctx.graph, ctx.pair.V3) == {"001"}
    assert len(ctx.G0) == 1 and ctx.G0.num_edges == 0

    for i, j in [(1, 2), (2, 3)]:
        ctx = johnson_context(4, 2, i, j)
        assert [len(p) for p in ctx.pair.parts] == [2, 2, 2]
        assert len(ctx.G0) == 2 and ctx.G0.num_edges == 1


@pytest.mark.parametrize("args", [(4, 0, 1, 2), (4, 4, 1, 2), (4, 2, 2, 2), (4, 2, 3, 1),
                                  (2, 1, 1, 2), (4, 2, 1, 5)])
def test_johnson_context_errors(args):
    with pytest.raises(UsageError):
        johnson_context(*args)


def test_halved_cube_context_examples():
    ctx = halved_cube_context(4, 1, 2)
    assert labels(ctx.graph, ctx.pair.V1) == {"1010", "1001"}
    assert labels(ctx.graph, ctx.pair.V2) == {"0110", "0101"}
    assert labels(ctx.graph, ctx.pair.V3) == {"0000", "1100", "0011", "1111"}
    assert ctx.G0.vertices == ((0, 1), (1, 0)) and ctx.G0.num_edges == 1
    x = ctx.graph.index((1, 0, 1, 0))
    cross = [y for y in ctx.graph.neighbors(x) if y in ctx.pair.V2]
    assert labels(ctx.graph, cross) == {"0110"}

    ctx = halved_cube_context(3, 1, 2)
    assert labels(ctx.graph, ctx.pair.V1) == {"101"}
    assert labels(ctx.graph, ctx.pair.V2) == {"011"}
    assert labels(ctx.graph, ctx.pair.V3) == {"000", "110"}
    assert ctx.G0.vertices == ((1,),)

    ctx = halved_cube_context(4, 3, 4)
    assert len(ctx.pair.V1) == len(ctx.pair.V2) == 2


@pytest.mark.parametrize("args", [(2, 1, 2), (4, 2, 1), (4, 0, 2)])
def test_halved_cube_context_errors(args):
    with pytest.raises(UsageError):
        halved_cube_context(*args)


# --- pair structure ---------------------------------------------------------

@pytest.mark.parametrize("kind, params", SMALL_CONTEXTS + [("hamming", (3, 2, 1, 0, 1))])
def test_structure_constructors(kind, params):
    assert check_pair_structure(make(kind, params)).as_tuple() == (True, True, True)


@pytest.mark.parametrize("kind, params", [("hamming", (3, 2, 1, 0, 1)),
                                          ("hamming", (2, 3, 1, 0, 1)),
                                          ("halved", (5, 1, 3))])
def test_structure_detects_corruption(kind, params):
    pair = make(kind, params).pair
    a, b = pair.V1[0], pair.V1[1] if len(pair.V1) > 1 else pair.V3[0]
    rep = check_pair_structure(transpose_phi(pair, a, b))
    assert not rep.involutive and rep.involutive_witness is not None
    assert not rep.ok


# --- theorem ---------------------------------------------------------------

def test_theorem_check_examples():
    ctx = hamming_context(2, 2, 1, 0, 1)
    for trials in (1, 7):
        res = theorem_check(ctx, -2, trials, seed=3)
        assert res.passed and res.max_residual <= 1e-8

    results = theorem_check_all(johnson_context(4, 2, 1, 2))
    assert [r.lam for r in results] == [-2, 0, 4] and all(r.passed for r in results)

    res = theorem_check(halved_cube_context(4, 1, 2), 6)
    assert res.passed and res.max_output <= 1e-12 and res.max_residual <= 1e-12


def test_theorem_check_rejects_non_eigenvalue():
    with pytest.raises(UsageError, match="available"):
        theorem_check(hamming_context(2, 2, 1, 0, 1), 1)


@pytest.mark.parametrize("kind, params", SMALL_CONTEXTS)
def test_fold_antisymmetric_and_routes_agree(kind, params):
    ctx = make(kind, params)
    S = eigendecompose(ctx.graph)
    img = list(ctx.pair.phi.image)
    for lam in S.eigenvalues:
        f = sample_eigenfunction(ctx.graph, lam, 9, S)
        h = fold(f, ctx.pair.phi).values
        assert np.array_equal(h[img], -h)
        a, b = reduce(f, ctx).values, reduce_via_fold(f, ctx).values
        assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("kind, params", SMALL_CONTEXTS)
def test_missing_target_eigenvalue_forces_zero(kind, params):
    ctx = make(kind, params)
    S, S0 = eigendecompose(ctx.graph), eigendecompose(ctx.G0)
    missing = [lam for lam in S.eigenvalues if not S0.has_eigenvalue(lam + 1)]
    assert missing  # the top eigenvalue (the degree) always shifts past G0's spectrum
    for lam in missing:
        for seed in range(3):
            fp = reduce(sample_eigenfunction(ctx.graph, lam, seed, S), ctx)
            assert np.linalg.norm(fp.values) <= 1e-8


@pytest.mark.parametrize("kind, params", SMALL_CONTEXTS)
def test_reduce_linear(kind, params):
    ctx = make(kind, params)
    rng = np.random.default_rng(5)
    f, g = rng.standard_normal((2, len(ctx.graph)))
    alpha, beta = 1.7, -0.3
    lhs = reduce(alpha * f + beta * g, ctx).values
    rhs = alpha * reduce(f, ctx).values + beta * reduce(g, ctx).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_incompatible_phi2_is_rejected():
    # phi2 twisted by an automorphism of G0 is still an isomorphism G[V2] -> G0,
    # but the reduced function then leaves the shifted eigenspace
    good = hamming_context(3, 2, 1, 0, 1)
    G0 = good.G0
    sigma = [G0.index(pi_swap(x, 1, 2)) for x in G0.vertices]
    phi2 = VertexMap(good.sub2, G0, tuple(sigma[i] for i in good.phi2.image))
    bad = ReductionContext(good.pair, G0, good.phi1, phi2)
    assert bad.report.phi2.ok and not bad.report.compatible and not bad.report.ok
    with pytest.raises(UsageError, match="phi2"):
        reduce(np.ones(len(good.graph)), bad)

    S = eigendecompose(good.graph)
    f = sample_eigenfunction(good.graph, 1, 0, S).values
    inv1, inv2 = bad._inverses
    assert residual(G0, f[inv1] - f[inv2], 2) > 1e-3


def test_context_rejects_wrong_map_source():
    good = hamming_context(2, 2, 1, 0, 1)
    with pytest.raises(UsageError):
        ReductionContext(good.pair, good.G0, good.phi2, good.phi2.inverse())


def test_special_pair_rejects_foreign_phi():
    good = hamming_context(2, 2, 1, 0, 1)
    other = build_hamming(1, 2)
    with pytest.raises(UsageError):
        SpecialPair(good.graph, VertexMap.identity(other), good.pair.parts)



@st.composite
def contexts(draw):
    kind = draw(st.sampled_from(["hamming", "johnson", "halved"]))
    if kind == "hamming":
        n, q = draw(st.integers(2, 4)), draw(st.integers(2, 4))
        if q ** n > 256:
            n = 2
        k, m = draw(st.permutations(range(q)))[:2]
        return hamming_context(n, q, draw(st.integers(1, n)), k, m)
    n = draw(st.integers(3, 8))
    i = draw(st.integers(1, n - 1))
    j = draw(st.integers(i + 1, n))
    if kind == "johnson":
        return johnson_context(n, draw(st.integers(1, n - 1)), i, j)
    return halved_cube_context(n, i, j)


@settings(max_examples=60, deadline=None)
@given(contexts(), st.data())
def test_reduction_lands_in_shifted_eigenspace(ctx, data):
    S = eigendecompose(ctx.graph)
    k = data.draw(st.integers(0, len(S.eigenvalues) - 1))
    lam, B = S.eigenvalues[k], S.bases[k]
    coeffs = np.array(data.draw(st.lists(
        st.floats(-10, 10, allow_nan=False), min_size=B.shape[1], max_size=B.shape[1])))
    f = B @ coeffs
    assert residual(ctx.graph, f, lam) <= 1e-10 * max(1.0, float(np.max(np.abs(f))))
    fp = reduce(f, ctx)
    assert residual(ctx.G0, fp, lam + 1) <= 1e-8 * max(1.0, fp.max_abs())
    assert reduce_via_fold(f, ctx).values.tobytes() == fp.values.tobytes()
