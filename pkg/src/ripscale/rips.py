"""Vietoris-Rips filtrations by clique expansion over the epsilon-graph.

A simplex enters the filtration at the largest pairwise distance among its
vertices. Simplices are stored sorted by (filtration value, dimension,
lexicographic vertex order), which guarantees every face precedes its
cofaces; the persistence module relies on that ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import DistanceMatrix, diameter

__all__ = [
    "Simplex",
    "FilteredComplex",
    "DEFAULT_EPS_CAP_MARGIN",
    "default_eps_cap",
    "build_rips",
    "simplex_count",
    "dump_filtration",
]

# relative headroom above the diameter so the top-value simplices are included
DEFAULT_EPS_CAP_MARGIN = 1e-9


@dataclass(frozen=True)
class Simplex:
    """A simplex given by strictly increasing vertex indices and its entry value."""

    vertices: tuple[int, ...]
    filtration_value: float

    def __post_init__(self) -> None:
        v = tuple(int(x) for x in self.vertices)
        if len(v) < 1:
            raise ValueError("a simplex has at least one vertex")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("vertices must be strictly increasing")
        if not (math.isfinite(self.filtration_value) and self.filtration_value >= 0.0):
            raise ValueError("filtration value must be finite and non-negative")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "filtration_value", float(self.filtration_value))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class FilteredComplex:
    """All simplices up to ``max_dim`` with filtration value <= ``eps_cap``."""

    simplices: tuple[Simplex, ...]
    max_dim: int
    eps_cap: float

    @property
    def n_vertices(self) -> int:
        return sum(1 for s in self.simplices if s.dim == 0)


def default_eps_cap(d: DistanceMatrix) -> float:
    """diameter * (1 + 1e-9); falls back to 1.0 for all-coincident clouds."""
    cap = diameter(d) * (1.0 + DEFAULT_EPS_CAP_MARGIN)
    return cap if cap > 0.0 else 1.0


def build_rips(
    d: DistanceMatrix, max_dim: int, eps_cap: float | None = None
) -> FilteredComplex:
    """Build the Rips filtration of a distance matrix.

    Args:
        d: pairwise distances of the underlying points.
        max_dim: largest simplex dimension to enumerate; values above
            size - 1 are clamped (a complex on n points has no simplex
            with more than n vertices).
        eps_cap: inclusion threshold; simplices whose filtration value
            exceeds it are not stored. Defaults to ``default_eps_cap(d)``.

    Returns:
        The filtered complex, simplices sorted by
        (filtration value, dimension, vertex tuple).
    """
    if max_dim < 0:
        raise ValueError("max_dim must be non-negative")
    if eps_cap is None:
        eps_cap = default_eps_cap(d)
    if not (math.isfinite(eps_cap) and eps_cap > 0.0):
        raise ValueError("eps_cap must be finite and positive")
    max_dim = min(max_dim, d.size - 1)

    n = d.size
    sq = d.to_square()
    # neighbors above the current vertex, restricted to the epsilon-graph
    nbrs = [
        [j for j in range(i + 1, n) if sq[i][j] <= eps_cap] for i in range(n)
    ]
    nbr_sets = [set(lst) for lst in nbrs]

    simplices = []
    for i in range(n):
        stack = [((i,), 0.0, nbrs[i])]
        while stack:
            verts, value, candidates = stack.pop()
            simplices.append(Simplex(verts, value))
            if len(verts) == max_dim + 1:
                continue
            for w in candidates:
                grown = max(value, max(sq[u][w] for u in verts))
                if grown > eps_cap:
                    continue
                rest = [v for v in candidates if v > w and v in nbr_sets[w]]
                stack.append((verts + (w,), grown, rest))

    simplices.sort(key=lambda s: (s.filtration_value, len(s.vertices), s.vertices))
    return FilteredComplex(tuple(simplices), max_dim, float(eps_cap))


def simplex_count(fc: FilteredComplex, dimension: int) -> int:
    """Number of stored simplices of the given dimension (0 if out of range)."""
    if dimension < 0 or dimension > fc.max_dim:
        return 0
    return sum(1 for s in fc.simplices if s.dim == dimension)


def dump_filtration(fc: FilteredComplex) -> str:
    """Human-readable listing, one line per simplex: value<TAB>v0,v1,..."""
    return "\n".join(
        f"{s.filtration_value!r}\t{','.join(str(v) for v in s.vertices)}"
        for s in fc.simplices
    )
