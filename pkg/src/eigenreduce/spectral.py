"""Adjacency spectra, eigenspace bases and eigenfunction sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ResourceError, UsageError
from .families import DEFAULT_CAP
from .graph import LabeledGraph

DEFAULT_TOL = 1e-8
CLUSTER_GAP = 1e-6
MIN_PROJECTED_NORM = 1e-8


@dataclass(frozen=True, eq=False)
class VertexFunction:
    """Real values indexed by the canonical vertex ids of ``graph``."""

    graph: LabeledGraph
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.graph),):
            raise UsageError(
                f"function has shape {values.shape}, graph has {len(self.graph)} vertices")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Distinct eigenvalues with multiplicities and orthonormal eigenbases.

    ``bases[k]`` is a ``|V| x multiplicities[k]`` matrix whose columns span the
    eigenspace of ``eigenvalues[k]``.
    """

    graph: LabeledGraph
    eigenvalues: tuple[float, ...]
    multiplicities: tuple[int, ...]
    bases: tuple[np.ndarray, ...]

    def find(self, lam: float) -> int:
        for k, mu in enumerate(self.eigenvalues):
            if abs(mu - lam) < CLUSTER_GAP:
                return k
        avail = ", ".join(_fmt(mu) for mu in self.eigenvalues)
        raise UsageError(f"{_fmt(lam)} is not an eigenvalue; available: {avail}")

    def has_eigenvalue(self, lam: float) -> bool:
        return any(abs(mu - lam) < CLUSTER_GAP for mu in self.eigenvalues)

    def basis(self, lam: float) -> list[VertexFunction]:
        B = self.bases[self.find(lam)]
        return [VertexFunction(self.graph, B[:, c].copy()) for c in range(B.shape[1])]

    def report(self) -> list[dict]:
        return [{"lambda": lam, "multiplicity": m}
                for lam, m in zip(self.eigenvalues, self.multiplicities)]


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _as_values(G: LabeledGraph, f) -> np.ndarray:
    if isinstance(f, VertexFunction):
        if f.graph != G:
            raise UsageError("function is defined on a different graph")
        return f.values
    return VertexFunction(G, f).values


def adjacency_apply(G: LabeledGraph, f) -> VertexFunction:
    """Return x -> sum of f over the neighbours of x."""
    values = _as_values(G, f)
    out = np.zeros(len(G))
    if G.edges:
        e = np.asarray(G.edges)
        np.add.at(out, e[:, 0], values[e[:, 1]])
        np.add.at(out, e[:, 1], values[e[:, 0]])
    return VertexFunction(G, out)


def residual(G: LabeledGraph, f, lam: float) -> float:
    """Max-norm of ``A f - lam f``."""
    values = _as_values(G, f)
    if not len(values):
        return 0.0
    diff = adjacency_apply(G, values).values - lam * values
    return float(np.max(np.abs(diff)))


def in_eigenspace(G: LabeledGraph, f, lam: float, tol: float = DEFAULT_TOL) -> bool:
    """Subspace membership; the zero function belongs to every eigenspace."""
    values = _as_values(G, f)
    scale = max(1.0, float(np.max(np.abs(values)))) if len(values) else 1.0
    return residual(G, values, lam) <= tol * scale


def eigendecompose(G: LabeledGraph, cap: int | None = None) -> Spectrum:
    cap = DEFAULT_CAP if cap is None else cap
    if len(G) > cap:
        raise ResourceError(f"graph has {len(G)} vertices, above the cap of {cap}")
    A = G.adjacency_matrix()
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigh failed on {len(G)}x{len(G)} adjacency "
            f"(Frobenius norm {np.linalg.norm(A):.3g}): {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise NumericalError(f"non-finite eigenvalues for {len(G)}x{len(G)} adjacency")

    groups: list[list[int]] = []
    for idx in range(len(w)):
        if groups and w[idx] - w[groups[-1][-1]] < CLUSTER_GAP:
            groups[-1].append(idx)
        else:
            groups.append([idx])

    eigenvalues, mults, bases = [], [], []
    for grp in groups:
        lam = float(np.mean(w[grp]))
        nearest = round(lam)
        if abs(lam - nearest) <= CLUSTER_GAP:
            lam = float(nearest)
        eigenvalues.append(lam)
        mults.append(len(grp))
        B = V[:, grp].copy()
        B.setflags(write=False)
        bases.append(B)
    return Spectrum(G, tuple(eigenvalues), tuple(mults), tuple(bases))


def sample_eigenfunction(G: LabeledGraph, lam: float, seed: int,
                         spectrum: Spectrum | None = None) -> VertexFunction:
    """Unit-norm random element of the ``lam``-eigenspace.

    A standard normal draw is projected onto the eigenbasis; if the
    projection is numerically zero the seed is incremented and we redraw.
    """
    spectrum = eigendecompose(G) if spectrum is None else spectrum
    if spectrum.graph != G:
        raise UsageError("spectrum belongs to a different graph")
    B = spectrum.bases[spectrum.find(lam)]
    s = seed
    while True:
        x = np.random.default_rng(s).standard_normal(len(G))
        p = B @ (B.T @ x)
        norm = float(np.linalg.norm(p))
        if norm >= MIN_PROJECTED_NORM:
            return VertexFunction(G, p / norm)
        s += 1
