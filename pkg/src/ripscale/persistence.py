"""Persistent homology over Z/2 and persistence-diagram bookkeeping.

``compute_persistence`` pairs simplices with the standard column reduction
(selected backend, see :mod:`ripscale.reduction`); ``betti_at`` is an
independent oracle that recomputes Betti numbers at a single scale from
boundary ranks, used to cross-check the reduction.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .reduction import reduce_boundary
from .rips import FilteredComplex

__all__ = [
    "PersistencePair",
    "PersistenceDiagram",
    "boundary_columns",
    "compute_persistence",
    "betti_at",
    "scale_diagram",
    "diagrams_to_json",
    "diagrams_from_json",
    "diagrams_to_csv",
    "diagrams_from_csv",
    "save_diagrams",
    "load_diagrams",
]


@dataclass(frozen=True)
class PersistencePair:
    """A homology class born at ``birth`` and dying at ``death`` (math.inf if never)."""

    birth: float
    death: float
    hom_dim: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.birth) and self.birth >= 0.0):
            raise ValueError("birth must be finite and non-negative")
        if math.isnan(self.death) or self.death <= self.birth:
            raise ValueError("death must exceed birth (math.inf for essential classes)")
        if self.hom_dim < 0:
            raise ValueError("homology dimension must be non-negative")

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of persistence pairs of a single homology dimension.

    Pairs are stored sorted by (birth, death), so dataclass equality is
    multiset equality.
    """

    hom_dim: int
    pairs: tuple[PersistencePair, ...]

    def __post_init__(self) -> None:
        for p in self.pairs:
            if p.hom_dim != self.hom_dim:
                raise ValueError("all pairs must share the diagram's hom_dim")
        ordered = tuple(sorted(self.pairs, key=lambda p: (p.birth, p.death)))
        object.__setattr__(self, "pairs", ordered)

    def finite_pairs(self) -> tuple[PersistencePair, ...]:
        return tuple(p for p in self.pairs if not p.is_infinite)

    def infinite_pairs(self) -> tuple[PersistencePair, ...]:
        return tuple(p for p in self.pairs if p.is_infinite)

    def __len__(self) -> int:
        return len(self.pairs)


def boundary_columns(fc: FilteredComplex) -> tuple[np.ndarray, np.ndarray]:
    """Flattened boundary matrix of the sorted complex.

    Returns (col_ptr, rows): column j of the matrix lists the positions of
    the facets of simplex j, ascending. Vertices contribute empty columns.
    """
    position = {s.vertices: i for i, s in enumerate(fc.simplices)}
    col_ptr = np.zeros(len(fc.simplices) + 1, dtype=np.int64)
    rows: list[int] = []
    for i, s in enumerate(fc.simplices):
        if s.dim > 0:
            facets = sorted(
                position[s.vertices[:k] + s.vertices[k + 1:]]
                for k in range(len(s.vertices))
            )
            rows.extend(facets)
        col_ptr[i + 1] = len(rows)
    return col_ptr, np.asarray(rows, dtype=np.int32)


def compute_persistence(fc: FilteredComplex) -> list[PersistenceDiagram]:
    """Persistence diagrams of the filtration, one per dimension < max_dim.

    Zero-persistence pairs (birth == death) are dropped. Simplices of
    dimension < max_dim that are never paired yield essential classes with
    death = math.inf. Dimension max_dim itself is not reported because its
    deaths would be truncation artifacts.
    """
    values = [s.filtration_value for s in fc.simplices]
    dims = [s.dim for s in fc.simplices]
    col_ptr, rows = boundary_columns(fc)
    kills = reduce_boundary(col_ptr, rows)

    n = len(fc.simplices)
    killed = np.zeros(n, dtype=bool)
    pairs_by_dim: dict[int, list[PersistencePair]] = {
        k: [] for k in range(fc.max_dim)
    }
    for j in range(n):
        low = int(kills[j])
        if low >= 0:
            killed[low] = True
            birth, death = values[low], values[j]
            if death > birth:
                pairs_by_dim[dims[low]].append(
                    PersistencePair(birth, death, dims[low])
                )
    for i in range(n):
        if int(kills[i]) < 0 and not killed[i] and dims[i] < fc.max_dim:
            pairs_by_dim[dims[i]].append(
                PersistencePair(values[i], math.inf, dims[i])
            )
    return [
        PersistenceDiagram(k, tuple(pairs_by_dim[k])) for k in range(fc.max_dim)
    ]


def _rank_gf2(columns: list[int]) -> int:
    """Rank of a GF(2) matrix whose columns are given as int bitmasks."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            p = col.bit_length() - 1
            if p in pivots:
                col ^= pivots[p]
            else:
                pivots[p] = col
                rank += 1
                break
    return rank


def betti_at(fc: FilteredComplex, eps: float, dimension: int) -> int:
    """Betti number of the subcomplex at scale eps, from boundary ranks.

    Independent of the reduction backend: beta_k = #k-simplices
    - rank(boundary_k) - rank(boundary_{k+1}), all restricted to simplices
    with filtration value <= eps, ranks by Gaussian elimination over GF(2).
    """
    if not (0 <= dimension < fc.max_dim):
        raise ValueError(
            f"dimension must be in [0, {fc.max_dim}) for this complex"
        )
    by_dim: dict[int, dict[tuple[int, ...], int]] = {}
    for s in fc.simplices:
        if s.filtration_value <= eps:
            slot = by_dim.setdefault(s.dim, {})
            slot[s.vertices] = len(slot)

    def rank_boundary(k: int) -> int:
        cols = by_dim.get(k, {})
        rows = by_dim.get(k - 1, {})
        if not cols or not rows:
            return 0
        masks = []
        for verts in cols:
            mask = 0
            for drop in range(len(verts)):
                facet = verts[:drop] + verts[drop + 1:]
                mask |= 1 << rows[facet]
            masks.append(mask)
        return _rank_gf2(masks)

    n_k = len(by_dim.get(dimension, {}))
    rank_down = rank_boundary(dimension) if dimension > 0 else 0
    rank_up = rank_boundary(dimension + 1)
    return n_k - rank_down - rank_up


def scale_diagram(diagram: PersistenceDiagram, c: float) -> PersistenceDiagram:
    """Multiply births and deaths by c > 0 (infinite deaths stay infinite)."""
    if not (math.isfinite(c) and c > 0.0):
        raise ValueError("scale factor must be finite and positive")
    return PersistenceDiagram(
        diagram.hom_dim,
        tuple(
            PersistencePair(p.birth * c, p.death * c, p.hom_dim)
            for p in diagram.pairs
        ),
    )


def _death_to_token(death: float):
    return "inf" if math.isinf(death) else death


def _death_from_token(token) -> float:
    if token == "inf":
        return math.inf
    return float(token)


def diagrams_to_json(diagrams) -> str:
    """JSON text: a list of {"hom_dim": k, "pairs": [[birth, death|"inf"], ...]}."""
    payload = [
        {
            "hom_dim": d.hom_dim,
            "pairs": [[p.birth, _death_to_token(p.death)] for p in d.pairs],
        }
        for d in diagrams
    ]
    return json.dumps(payload) + "\n"


def diagrams_from_json(text: str) -> list[PersistenceDiagram]:
    payload = json.loads(text)
    if isinstance(payload, dict):
        payload = [payload]
    diagrams = []
    for obj in payload:
        pairs = tuple(
            PersistencePair(float(b), _death_from_token(d), int(obj["hom_dim"]))
            for b, d in obj["pairs"]
        )
        diagrams.append(PersistenceDiagram(int(obj["hom_dim"]), pairs))
    return diagrams


def diagrams_to_csv(diagrams) -> str:
    """CSV text with header hom_dim,birth,death; infinite deaths as 'inf'."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["hom_dim", "birth", "death"])
    for d in diagrams:
        for p in d.pairs:
            writer.writerow([d.hom_dim, repr(p.birth), "inf" if p.is_infinite else repr(p.death)])
    return buf.getvalue()


def diagrams_from_csv(text: str) -> list[PersistenceDiagram]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["hom_dim", "birth", "death"]:
        raise ValueError("expected CSV header 'hom_dim,birth,death'")
    grouped: dict[int, list[PersistencePair]] = {}
    for row in reader:
        if not row:
            continue
        k = int(row[0])
        pair = PersistencePair(float(row[1]), _death_from_token(row[2]), k)
        grouped.setdefault(k, []).append(pair)
    return [
        PersistenceDiagram(k, tuple(grouped[k])) for k in sorted(grouped)
    ]


def _diagram_format(path: str, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown diagram format {fmt!r}")
        return fmt
    return "csv" if str(path).endswith(".csv") else "json"


def save_diagrams(diagrams, path: str, fmt: str | None = None) -> None:
    fmt = _diagram_format(path, fmt)
    text = diagrams_to_csv(diagrams) if fmt == "csv" else diagrams_to_json(diagrams)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"failed to write diagrams to {path}: {exc}") from exc


def load_diagrams(path: str, fmt: str | None = None) -> list[PersistenceDiagram]:
    fmt = _diagram_format(path, fmt)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"failed to read diagrams from {path}: {exc}") from exc
    return diagrams_from_csv(text) if fmt == "csv" else diagrams_from_json(text)
