"""Cochain complexes of polygonal cell structures on closed surfaces.

Vertices carry 0-cochains, edges (each with one stored orientation) carry
1-cochains, faces carry 2-cochains.  ``d0`` is the gradient, ``d1`` the
signed circulation around each face.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import BadParams, InvalidComplex, SchemaError, SizeMismatch
from .exactlin import QQ, ExactMatrix, FieldSpec, rank


@dataclass(frozen=True)
class CellComplex2:
    V: int
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[tuple[int, int], ...], ...]
    closed: bool = True

    def __post_init__(self):
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        faces = tuple(tuple((int(e), int(s)) for e, s in walk) for walk in self.faces)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "faces", faces)
        for t, h in edges:
            if not (0 <= t < self.V and 0 <= h < self.V):
                raise InvalidComplex(f"edge ({t}, {h}) has an endpoint outside 0..{self.V - 1}")
        for f, walk in enumerate(faces):
            if not walk:
                raise InvalidComplex(f"face {f} has an empty boundary")
            for k, (e, s) in enumerate(walk):
                if not 0 <= e < len(edges) or s not in (1, -1):
                    raise InvalidComplex(f"face {f}: bad step ({e}, {s})")
                head = self._head(e, s)
                nxt = walk[(k + 1) % len(walk)]
                if head != self._tail(*nxt):
                    raise InvalidComplex(f"face {f}: boundary walk is not closed at step {k}")
        if self.closed:
            counts = Counter(e for walk in faces for e, _ in walk)
            for e in range(len(edges)):
                if counts[e] != 2:
                    raise InvalidComplex(f"edge {e} lies on {counts[e]} face sides; a closed surface needs 2")

    def _tail(self, e: int, s: int) -> int:
        t, h = self.edges[e]
        return t if s == 1 else h

    def _head(self, e: int, s: int) -> int:
        t, h = self.edges[e]
        return h if s == 1 else t

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def F(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.V - self.E + self.F

    def to_json(self) -> dict:
        return {
            "V": self.V,
            "edges": [list(e) for e in self.edges],
            "faces": [[[e, s] for e, s in walk] for walk in self.faces],
            "closed": self.closed,
        }

    @classmethod
    def from_json(cls, obj) -> "CellComplex2":
        try:
            return cls(int(obj["V"]), obj["edges"], obj["faces"], bool(obj.get("closed", True)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidComplex):
                raise
            raise SchemaError(f"bad complex JSON: {exc}") from exc


def d0_matrix(X: CellComplex2, field: FieldSpec = QQ) -> ExactMatrix:
    rows = []
    for t, h in X.edges:
        row = [0] * X.V
        row[h] += 1
        row[t] -= 1
        rows.append(row)
    return ExactMatrix(field, rows, X.V)


def d1_matrix(X: CellComplex2, field: FieldSpec = QQ) -> ExactMatrix:
    rows = []
    for walk in X.faces:
        row = [0] * X.E
        for e, s in walk:
            row[e] += s
        rows.append(row)
    return ExactMatrix(field, rows, X.E)


def d0(X: CellComplex2, f0: Sequence, field: FieldSpec = QQ) -> tuple:
    """Gradient: head value minus tail value on each stored edge."""
    if len(f0) != X.V:
        raise SizeMismatch(f"vertex function of length {len(f0)} for {X.V} vertices")
    return d0_matrix(X, field).apply(f0)


def d1(X: CellComplex2, f1: Sequence, field: FieldSpec = QQ) -> tuple:
    """Curl: signed sum of edge values along each face boundary."""
    if len(f1) != X.E:
        raise SizeMismatch(f"edge function of length {len(f1)} for {X.E} edges")
    return d1_matrix(X, field).apply(f1)


def cohomology_dims(X: CellComplex2, field: FieldSpec = QQ) -> tuple[int, int, int]:
    r0 = rank(d0_matrix(X, field))
    r1 = rank(d1_matrix(X, field))
    h = (X.V - r0, X.E - r0 - r1, X.F - r1)
    if h[0] - h[1] + h[2] != X.euler_characteristic:
        raise AssertionError("alternating sum of cohomology dimensions differs from V - E + F")
    return h


def torus_grid(k: int) -> CellComplex2:
    """k x k square mesh with opposite sides glued."""
    if k < 2:
        raise BadParams(f"torus_grid needs k >= 2, got {k}")

    def v(i, j):
        return (i % k) * k + (j % k)

    edges = []
    right, up = {}, {}
    for i in range(k):
        for j in range(k):
            right[i, j] = len(edges)
            edges.append((v(i, j), v(i, j + 1)))
            up[i, j] = len(edges)
            edges.append((v(i, j), v(i + 1, j)))
    faces = []
    for i in range(k):
        for j in range(k):
            faces.append(
                (
                    (right[i, j], 1),
                    (up[i, (j + 1) % k], 1),
                    (right[(i + 1) % k, j], -1),
                    (up[i, j], -1),
                )
            )
    return CellComplex2(k * k, tuple(edges), tuple(faces), True)


def from_polygons(V: int, polygons: Sequence[Sequence[int]], closed: bool = True) -> CellComplex2:
    """Complex whose faces are vertex cycles; each edge is stored low -> high.

    Only valid when no two vertices are joined by more than one edge.
    """
    edge_index: dict[tuple[int, int], int] = {}
    edges = []
    faces = []
    for poly in polygons:
        walk = []
        for a, b in zip(poly, list(poly[1:]) + [poly[0]]):
            key = (min(a, b), max(a, b))
            if key not in edge_index:
                edge_index[key] = len(edges)
                edges.append(key)
            walk.append((edge_index[key], 1 if a < b else -1))
        faces.append(tuple(walk))
    return CellComplex2(V, tuple(edges), tuple(faces), closed)


def cube_surface() -> CellComplex2:
    """Boundary of the 3-cube: 8 vertices, 12 edges, 6 square faces."""
    # vertex index = x + 2y + 4z
    faces = [
        (0, 2, 3, 1),
        (4, 5, 7, 6),
        (0, 1, 5, 4),
        (2, 6, 7, 3),
        (0, 4, 6, 2),
        (1, 3, 7, 5),
    ]
    return from_polygons(8, faces)


def triangulated_torus() -> CellComplex2:
    """3 x 3 torus grid with every square split along a diagonal (9 V, 27 E, 18 F)."""

    def v(i, j):
        return (i % 3) * 3 + (j % 3)

    tris = []
    for i in range(3):
        for j in range(3):
            tris.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            tris.append((v(i, j), v(i + 1, j + 1), v(i, j + 1)))
    return from_polygons(9, tris)


def subdivide_edges(X: CellComplex2) -> CellComplex2:
    """Insert a midpoint on every edge; edge e becomes (t, m_e) and (m_e, h)."""
    edges = []
    halves = []
    for e, (t, h) in enumerate(X.edges):
        m = X.V + e
        halves.append((len(edges), len(edges) + 1))
        edges.append((t, m))
        edges.append((m, h))
    faces = []
    for walk in X.faces:
        new = []
        for e, s in walk:
            a, b = halves[e]
            new.extend([(a, 1), (b, 1)] if s == 1 else [(b, -1), (a, -1)])
        faces.append(tuple(new))
    return CellComplex2(X.V + X.E, tuple(edges), tuple(faces), X.closed)
