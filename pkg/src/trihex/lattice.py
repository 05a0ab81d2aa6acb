"""Triangular lattice boards, their planar duals, and the hexagonal dual view.

All coordinates are stored doubled, so every vertex, dual vertex and edge
midpoint is an integer pair.  A primal vertex (x, y) of the triangular grid
becomes (2x, 2y); the dual vertex between rows k and k+1 at horizontal
label a becomes (2a, 2k+1); the midpoint of any edge is the (integer)
average of its doubled endpoints and uniquely identifies the edge.

The triangular board Delta(m, n) has n rows numbered upward from 1.  Odd
rows carry m vertices at x in {0, 2, ..., 2m-2}; even rows carry m-1
vertices at x in {1, 3, ..., 2m-3}.  The outer face of the planar dual is
subdivided into one boundary dual vertex per boundary edge: bottom/top
pieces over the horizontal edges of rows 1 and n, left/right pieces over
the boundary diagonals.  This makes the edge <-> dual-edge bijection total,
and it is exactly what turns the dual into the hexagonal grid H(n, m) with
its whisker and pendant edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

Coord = tuple[int, int]

INTERIOR = "interior"
TOP = "top"
BOTTOM = "bottom"
LEFT = "left"
RIGHT = "right"

UP = "up"
DOWN = "down"


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class DualVertex:
    pos: Coord  # doubled
    kind: str   # interior/top/bottom/left/right
    orientation: str | None  # up/down for interior faces
    level: int  # dual vertex level, 1..2n on the triangular board


@dataclass
class Topology:
    """Immutable triangular grid with primal and dual incidence tables."""

    kind: str  # "triangular" or "hexagonal"
    m: int
    n: int
    verts: list[Coord] = field(default_factory=list)
    vert_index: dict[Coord, int] = field(default_factory=dict)
    edges: list[tuple[int, int]] = field(default_factory=list)  # vertex index pairs
    edge_index: dict[tuple[int, int], int] = field(default_factory=dict)
    midpoints: list[Coord] = field(default_factory=list)
    edge_by_midpoint: dict[Coord, int] = field(default_factory=dict)
    duals: list[DualVertex] = field(default_factory=list)
    dual_index: dict[Coord, int] = field(default_factory=dict)
    edge_duals: list[tuple[int, int]] = field(default_factory=list)  # dual index pairs
    vert_adj: list[list[tuple[int, int]]] = field(default_factory=list)  # (edge, other vert)
    dual_adj: list[list[tuple[int, int]]] = field(default_factory=list)  # (edge, other dual)
    left_vertices: list[int] = field(default_factory=list)
    right_vertices: list[int] = field(default_factory=list)
    top_duals: list[int] = field(default_factory=list)
    bottom_duals: list[int] = field(default_factory=list)

    # -- construction helpers -------------------------------------------------

    def _add_vertex(self, pos: Coord) -> int:
        i = self.vert_index.get(pos)
        if i is None:
            i = len(self.verts)
            self.verts.append(pos)
            self.vert_index[pos] = i
        return i

    def _add_dual(self, dv: DualVertex) -> int:
        i = len(self.duals)
        self.duals.append(dv)
        self.dual_index[dv.pos] = i
        return i

    def _add_edge(self, vi: int, vj: int, da: int, db: int) -> int:
        if vi > vj:
            vi, vj = vj, vi
        e = len(self.edges)
        self.edges.append((vi, vj))
        self.edge_index[(vi, vj)] = e
        (ax, ay), (bx, by) = self.verts[vi], self.verts[vj]
        mid = ((ax + bx) // 2, (ay + by) // 2)
        self.midpoints.append(mid)
        self.edge_by_midpoint[mid] = e
        self.edge_duals.append((da, db))
        return e

    def _freeze(self) -> None:
        self.vert_adj = [[] for _ in self.verts]
        self.dual_adj = [[] for _ in self.duals]
        for e, (vi, vj) in enumerate(self.edges):
            self.vert_adj[vi].append((e, vj))
            self.vert_adj[vj].append((e, vi))
            da, db = self.edge_duals[e]
            self.dual_adj[da].append((e, db))
            self.dual_adj[db].append((e, da))

    # -- queries ---------------------------------------------------------------

    def has_vertex(self, pos: Coord) -> bool:
        return pos in self.vert_index

    def edge_between(self, a: Coord, b: Coord) -> int | None:
        ia, ib = self.vert_index.get(a), self.vert_index.get(b)
        if ia is None or ib is None:
            return None
        return self.edge_index.get((min(ia, ib), max(ia, ib)))

    def edge_endpoints(self, e: int) -> tuple[Coord, Coord]:
        vi, vj = self.edges[e]
        return self.verts[vi], self.verts[vj]

    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self, pos: Coord) -> set[Coord]:
        """Neighbours of a primal vertex or a dual vertex, by coordinate."""
        vi = self.vert_index.get(pos)
        if vi is not None:
            return {self.verts[o] for _, o in self.vert_adj[vi]}
        di = self.dual_index.get(pos)
        if di is not None:
            return {self.duals[o].pos for _, o in self.dual_adj[di]}
        raise LatticeError(f"unknown vertex or dual vertex {pos}")

    def dual_edge_of(self, e: int) -> tuple[Coord, Coord]:
        da, db = self.edge_duals[e]
        return self.duals[da].pos, self.duals[db].pos

    def dual_vertex_level(self, pos: Coord) -> int:
        di = self.dual_index.get(pos)
        if di is None:
            raise LatticeError(f"unknown dual vertex {pos}")
        return self.duals[di].level

    # -- export ------------------------------------------------------------

    def export_json(self) -> str:
        doc = {
            "version": 1,
            "kind": self.kind,
            "m": self.m,
            "n": self.n,
            "vertices": [list(p) for p in self.verts],
            "edges": [list(e) for e in self.edges],
            "dual_vertices": [
                {"pos": list(d.pos), "kind": d.kind, "level": d.level}
                for d in self.duals
            ],
            "dual_pairs": [[e, list(self.edge_duals[e])] for e in range(len(self.edges))],
        }
        return json.dumps(doc)


def _row_xs(m: int, y: int) -> range:
    if y % 2 == 1:
        return range(0, 2 * m - 1, 2)
    return range(1, 2 * m - 2, 2)


def build_triangular(m: int, n: int) -> Topology:
    """Build Delta(m, n) with its fully subdivided planar dual."""
    if m < 2 or n < 2:
        raise LatticeError("triangular grid needs m >= 2 and n >= 2")
    t = Topology(kind="triangular", m=m, n=n)

    for y in range(1, n + 1):
        for x in _row_xs(m, y):
            t._add_vertex((2 * x, 2 * y))

    # Interior faces: between rows k and k+1 the duals sit at labels 1..2m-3.
    # Orientation is up iff (a, k+1) is a primal vertex, down iff (a, k) is.
    for k in range(1, n):
        for a in range(1, 2 * m - 2):
            if t.has_vertex((2 * a, 2 * (k + 1))):
                orient, level = UP, 2 * k
            else:
                orient, level = DOWN, 2 * k + 1
            t._add_dual(DualVertex((2 * a, 2 * k + 1), INTERIOR, orient, level))

    # Boundary pieces: one per row-1 / row-n horizontal edge...
    for x in _row_xs(m, 1):
        if x + 2 in _row_xs(m, 1):
            t._add_dual(DualVertex((2 * (x + 1), 1), BOTTOM, None, 1))
    for x in _row_xs(m, n):
        if x + 2 in _row_xs(m, n):
            t._add_dual(DualVertex((2 * (x + 1), 2 * n + 1), TOP, None, 2 * n))
    # ... and one per boundary diagonal on the left and right arcs.  Their
    # level is copied from the single interior face they touch.
    for k in range(1, n):
        lvl = t.duals[t.dual_index[(2, 2 * k + 1)]].level
        t._add_dual(DualVertex((-2, 2 * k + 1), LEFT, None, lvl))
        lvl = t.duals[t.dual_index[(2 * (2 * m - 3), 2 * k + 1)]].level
        t._add_dual(DualVertex((2 * (2 * m - 1), 2 * k + 1), RIGHT, None, lvl))

    def dual_at(a: int, halfrow: int) -> int:
        # halfrow is 2k+1 for the strip between rows k and k+1
        return t.dual_index[(2 * a, halfrow)]

    # Horizontal edges ((x,y),(x+2,y)): dual joins the face above to the
    # face below (boundary pieces at rows 1 and n).
    for y in range(1, n + 1):
        for x in _row_xs(m, y):
            if not t.has_vertex((2 * (x + 2), 2 * y)):
                continue
            c = x + 1
            above = t.dual_index[(2 * c, 2 * y + 1)]
            below = t.dual_index[(2 * c, 2 * y - 1)]
            t._add_edge(t.vert_index[(2 * x, 2 * y)], t.vert_index[(2 * (x + 2), 2 * y)],
                        above, below)

    # Diagonal edges ((x,y),(x+-1,y+1)): dual joins the two faces of the
    # strip y+0.5; a missing interior face means a left/right arc piece.
    for y in range(1, n):
        for x in _row_xs(m, y):
            for dx in (-1, 1):
                other = (2 * (x + dx), 2 * (y + 1))
                if not t.has_vertex(other):
                    continue
                lo, hi = min(x, x + dx), max(x, x + dx)
                def face(a: int) -> int:
                    if 1 <= a <= 2 * m - 3:
                        return dual_at(a, 2 * y + 1)
                    if a < 1:
                        return t.dual_index[(-2, 2 * y + 1)]
                    return t.dual_index[(2 * (2 * m - 1), 2 * y + 1)]
                t._add_edge(t.vert_index[(2 * x, 2 * y)], t.vert_index[other],
                            face(lo), face(hi))

    t._freeze()
    for y in range(1, n + 1):
        xs = list(_row_xs(m, y))
        t.left_vertices.append(t.vert_index[(2 * xs[0], 2 * y)])
        t.right_vertices.append(t.vert_index[(2 * xs[-1], 2 * y)])
    t.top_duals = [i for i, d in enumerate(t.duals) if d.kind == TOP]
    t.bottom_duals = [i for i, d in enumerate(t.duals) if d.kind == BOTTOM]
    return t


@dataclass
class HexTopology:
    """The hexagonal grid H(n, m): the dual of Delta(m, n) a quarter turn over.

    Edge identity is shared with the base triangular board, so a claim on a
    hex edge is a claim on the corresponding triangular edge and vice versa.
    Hex vertices are the dual vertices of the base; hex faces ("bricks",
    the dual vertices of the hex game) are the primal vertices of the base.
    The vertical label of a brick for base vertex (x, y) is x + 1, running
    1 (bottom) to 2m-1 (top).
    """

    base: Topology
    n: int
    m: int
    hvert: list[Coord] = field(default_factory=list)       # per base dual index, doubled
    hvert_index: dict[Coord, int] = field(default_factory=dict)
    hedge_mid: list[Coord] = field(default_factory=list)   # per edge index, doubled
    hedge_by_mid: dict[Coord, int] = field(default_factory=dict)
    brick: list[Coord] = field(default_factory=list)       # per base vert index, doubled
    brick_index: dict[Coord, int] = field(default_factory=dict)

    kind: str = "hexagonal"

    @property
    def verts(self):
        return self.base.verts

    def num_edges(self) -> int:
        return self.base.num_edges()

    def vertical_label(self, vi: int) -> int:
        return self.base.verts[vi][0] // 2 + 1

    def bottom_bricks(self) -> list[int]:
        return [i for i, p in enumerate(self.base.verts) if p[0] == 0]

    def top_bricks(self) -> list[int]:
        return [i for i, p in enumerate(self.base.verts) if p[0] == 2 * (2 * self.m - 2)]

    def securing_heights(self) -> tuple[int, int]:
        """Doubled heights of the bottom- and top-securing vertex rows."""
        return 4, 2 * (2 * self.m - 2)

    def left_tips(self) -> list[int]:
        return [i for i, d in enumerate(self.base.duals) if d.kind == BOTTOM]

    def right_tips(self) -> list[int]:
        return [i for i, d in enumerate(self.base.duals) if d.kind == TOP]

    def hex_edge_mid(self, e: int) -> Coord:
        return self.hedge_mid[e]

    def edge_by_hex_mid(self, mid: Coord) -> int | None:
        return self.hedge_by_mid.get(mid)

    def export_json(self) -> str:
        doc = {
            "version": 1,
            "kind": "hexagonal",
            "m": self.m,
            "n": self.n,
            "vertices": [list(p) for p in self.hvert],
            "edges": [list(self.base.edge_duals[e]) for e in range(self.num_edges())],
            "dual_pairs": [[e, list(self.base.edges[e])] for e in range(self.num_edges())],
        }
        return json.dumps(doc)


def build_hexagonal(n: int, m: int) -> HexTopology:
    """Build H(n, m) as the rotated dual of Delta(m, n)."""
    if m < 3:
        raise LatticeError("hexagonal grid needs m >= 3")
    if n < 2:
        raise LatticeError("hexagonal grid needs n >= 2")
    base = build_triangular(m, n)
    hx = HexTopology(base=base, n=n, m=m)

    for d in base.duals:
        a2, h2 = d.pos
        k = (h2 - 1) // 2
        if d.kind == INTERIOR:
            pos = (2 * k, a2 + 2)       # column k, height a+1
        elif d.kind == BOTTOM:
            pos = (0, a2 + 2)           # left whisker tip
        elif d.kind == TOP:
            pos = (2 * n, a2 + 2)       # right whisker tip
        elif d.kind == LEFT:
            pos = (2 * k, 2)            # bottom pendant tip, height 1
        else:  # RIGHT
            pos = (2 * k, 2 * (2 * m - 1))  # top pendant tip, height 2m-1
        hx.hvert.append(pos)
    for i, pos in enumerate(hx.hvert):
        hx.hvert_index[pos] = i

    for e in range(base.num_edges()):
        da, db = base.edge_duals[e]
        (ax, ay), (bx, by) = hx.hvert[da], hx.hvert[db]
        mid = ((ax + bx) // 2, (ay + by) // 2)
        hx.hedge_mid.append(mid)
        hx.hedge_by_mid[mid] = e

    for vi, (x2, y2) in enumerate(base.verts):
        pos = (y2 - 1, x2 + 2)  # brick centre: (y - 0.5, x + 1) doubled
        hx.brick.append(pos)
        hx.brick_index[pos] = vi

    return hx


def mirror_edge_map(t: Topology) -> list[int]:
    """Edge permutation induced by the horizontal mirror x -> 2m-2-x."""
    w = 2 * (2 * t.m - 2)
    out = []
    for e in range(t.num_edges()):
        (ax, ay), (bx, by) = t.edge_endpoints(e)
        a = t.vert_index[(w - ax, ay)]
        b = t.vert_index[(w - bx, by)]
        out.append(t.edge_index[(min(a, b), max(a, b))])
    return out


@lru_cache(maxsize=64)
def triangular(m: int, n: int) -> Topology:
    return build_triangular(m, n)


@lru_cache(maxsize=64)
def hexagonal(n: int, m: int) -> HexTopology:
    return build_hexagonal(n, m)
