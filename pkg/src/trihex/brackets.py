"""Bracket catalogs for caging red components.

A bracket is a fixed non-red path template anchored at a vertex: 3 edges
on the triangular board, 6 on the hexagonal one.  Each template carries
its canonical interior dual-vertices (what it cages when closed by the
shortest blue path) and the closing path used by the validation oracle.
Offsets are doubled coordinates relative to the doubled anchor.

Three of the published triangular interior lists and one hexagonal list
do not survive the enclosure oracle (simple path + enclosed faces +
level spread); the tables below carry the repaired values.  Types 6 and
8 cage four faces, not three.

Near the outer boundary of the hexagonal grid a template may call for a
horizontal edge inside the bottom or top gap between pendant tips.  No
such edge exists, and nothing can ever cross there, so the slot counts
as sealed by the boundary and the bracket instantiates without it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import HexTopology, Topology

Coord = tuple[int, int]


@dataclass(frozen=True)
class BracketTemplate:
    family: str                     # "tri" | "hex"
    type_id: int
    edge_mids: tuple[Coord, ...]    # relative doubled midpoints, paper order
    interiors: tuple[Coord, ...]    # relative doubled interior dual-vertices
    path_verts: tuple[Coord, ...]   # relative doubled vertices of the bracket path
    close_verts: tuple[Coord, ...]  # minimal closing path, shares both endpoints


@dataclass(frozen=True)
class BracketInstance:
    family: str
    type_id: int
    anchor: Coord                   # doubled
    edges: tuple[int, ...]          # resolved edge ids, template order, sealed skipped
    sealed: tuple[Coord, ...]       # absolute doubled midpoints sealed by the boundary
    interiors: frozenset[int]       # breaker-graph node ids caged by the template

    def label(self) -> str:
        return f"{self.family}-type{self.type_id}@{self.anchor}"


TRI_TEMPLATES: tuple[BracketTemplate, ...] = (
    BracketTemplate("tri", 1, ((-1, -1), (0, -2), (3, -1)),
                    ((0, -1), (2, -1)),
                    ((0, 0), (-2, -2), (2, -2), (4, 0)),
                    ((0, 0), (4, 0))),
    BracketTemplate("tri", 2, ((1, -1), (4, -2), (5, -1)),
                    ((2, -1), (4, -1)),
                    ((0, 0), (2, -2), (6, -2), (4, 0)),
                    ((0, 0), (4, 0))),
    BracketTemplate("tri", 3, ((1, -1), (3, -1), (3, 1)),
                    ((2, -1), (2, 1)),
                    ((0, 0), (2, -2), (4, 0), (2, 2)),
                    ((0, 0), (2, 2))),
    BracketTemplate("tri", 4, ((1, -1), (4, -2), (7, -1)),
                    ((2, -1), (4, -1), (6, -1)),
                    ((0, 0), (2, -2), (6, -2), (8, 0)),
                    ((0, 0), (4, 0), (8, 0))),
    BracketTemplate("tri", 5, ((2, 0), (6, 0), (7, 1)),
                    ((2, 1), (4, 1), (6, 1)),
                    ((0, 0), (4, 0), (8, 0), (6, 2)),
                    ((0, 0), (2, 2), (6, 2))),
    BracketTemplate("tri", 6, ((2, 0), (6, 0), (9, 1)),
                    ((2, 1), (4, 1), (6, 1), (8, 1)),
                    ((0, 0), (4, 0), (8, 0), (10, 2)),
                    ((0, 0), (2, 2), (6, 2), (10, 2))),
    BracketTemplate("tri", 7, ((1, -1), (3, -1), (5, 1)),
                    ((2, -1), (2, 1), (4, 1)),
                    ((0, 0), (2, -2), (4, 0), (6, 2)),
                    ((0, 0), (2, 2), (6, 2))),
    BracketTemplate("tri", 8, ((1, -1), (3, -1), (6, 0)),
                    ((2, -1), (2, 1), (4, 1), (6, 1)),
                    ((0, 0), (2, -2), (4, 0), (8, 0)),
                    ((0, 0), (2, 2), (6, 2), (8, 0))),
)

_HEX_LOW = ((0, -1), (1, -2), (2, -1))
_HEX_LOW_VERTS = ((0, 0), (0, -2), (2, -2), (2, 0))

HEX_TEMPLATES: tuple[BracketTemplate, ...] = (
    BracketTemplate("hex", 1, _HEX_LOW + ((2, 1), (2, 3), (2, 5)),
                    ((1, 0), (1, 4)),
                    _HEX_LOW_VERTS + ((2, 2), (2, 4), (2, 6)),
                    ((0, 0), (0, 2), (0, 4), (0, 6), (2, 6))),
    BracketTemplate("hex", 2, _HEX_LOW + ((3, 0), (4, 1), (4, 3)),
                    ((1, 0), (3, 2)),
                    _HEX_LOW_VERTS + ((4, 0), (4, 2), (4, 4)),
                    ((0, 0), (0, 2), (2, 2), (2, 4), (4, 4))),
    BracketTemplate("hex", 3, _HEX_LOW + ((2, 1), (1, 2), (0, 3)),
                    ((1, 0), (-1, 2)),
                    _HEX_LOW_VERTS + ((2, 2), (0, 2), (0, 4)),
                    ((0, 0), (-2, 0), (-2, 2), (-2, 4), (0, 4))),
    BracketTemplate("hex", 4, _HEX_LOW + ((2, 1), (2, 3), (3, 4)),
                    ((1, 0), (1, 4), (3, 6)),
                    _HEX_LOW_VERTS + ((2, 2), (2, 4), (4, 4)),
                    ((0, 0), (0, 2), (0, 4), (0, 6), (2, 6), (2, 8), (4, 8), (4, 6), (4, 4))),
    BracketTemplate("hex", 5, _HEX_LOW + ((3, 0), (4, 1), (5, 2)),
                    ((1, 0), (3, 2), (5, 4)),
                    _HEX_LOW_VERTS + ((4, 0), (4, 2), (6, 2)),
                    ((0, 0), (0, 2), (2, 2), (2, 4), (4, 4), (4, 6), (6, 6), (6, 4), (6, 2))),
)


def catalog(family: str) -> tuple[BracketTemplate, ...]:
    if family == "tri":
        return TRI_TEMPLATES
    if family == "hex":
        return HEX_TEMPLATES
    raise ValueError(f"unknown bracket family {family!r}")


def _shift(offsets, anchor: Coord):
    ax, ay = anchor
    return [(ax + dx, ay + dy) for dx, dy in offsets]


def _hex_gap_positions(hx: HexTopology, mid: Coord) -> bool:
    x, y = mid
    if x % 2 == 1 and (y == 2 or y == 2 * (2 * hx.m - 1)):
        return True  # bottom/top gap between pendant tips
    return y % 2 == 1 and (x == 0 or x == 2 * hx.n)  # beyond the end columns


def instantiate(template: BracketTemplate, anchor: Coord, topo) -> BracketInstance | None:
    """Resolve a template at a doubled anchor; None when unplaceable."""
    if template.family == "tri":
        t: Topology = topo
        if anchor not in t.vert_index:
            return None
        edges = []
        for mid in _shift(template.edge_mids, anchor):
            e = t.edge_by_midpoint.get(mid)
            if e is None:
                return None
            edges.append(e)
        interiors = []
        for pos in _shift(template.interiors, anchor):
            di = t.dual_index.get(pos)
            if di is None:
                return None
            interiors.append(di)
        return BracketInstance("tri", template.type_id, anchor,
                               tuple(edges), (), frozenset(interiors))

    hx: HexTopology = topo
    if anchor not in hx.hvert_index:
        return None
    edges, sealed = [], []
    for mid in _shift(template.edge_mids, anchor):
        e = hx.hedge_by_mid.get(mid)
        if e is not None:
            edges.append(e)
        elif _hex_gap_positions(hx, mid):
            sealed.append(mid)
        else:
            return None
    interiors = []
    for pos in _shift(template.interiors, anchor):
        vi = hx.brick_index.get(pos)
        if vi is None:
            return None
        interiors.append(vi)
    return BracketInstance("hex", template.type_id, anchor,
                           tuple(edges), tuple(sealed), frozenset(interiors))


# -- validation oracle -------------------------------------------------------


def _tri_cycle_edges(t: Topology, verts: list[Coord]) -> list[int] | None:
    out = []
    for a, b in zip(verts, verts[1:]):
        e = t.edge_between(a, b)
        if e is None:
            return None
        out.append(e)
    return out


def _hex_cycle_edges(hx: HexTopology, verts: list[Coord]) -> list[int] | None:
    out = []
    for (ax, ay), (bx, by) in zip(verts, verts[1:]):
        e = hx.hedge_by_mid.get(((ax + bx) // 2, (ay + by) // 2))
        if e is None:
            return None
        out.append(e)
    return out


def enclosed_nodes(topo, cycle_edges: set[int], hex_board: bool) -> set[int]:
    """Breaker-graph nodes cut off from the outer boundary by the cycle.

    Floods the dual graph (triangular) or the primal graph (hexagonal)
    from every boundary node without crossing the cycle; whatever is not
    reached lies inside.
    """
    if hex_board:
        base = topo.base
        n = len(base.verts)
        inc = base.vert_adj
        anchors = [i for i, (x, y) in enumerate(base.verts)
                   if x == 0 or x == 2 * (2 * base.m - 2) or y == 2 or y == 2 * base.n]
    else:
        base = topo
        n = len(base.duals)
        inc = base.dual_adj
        anchors = [i for i, d in enumerate(base.duals) if d.kind != "interior"]
    seen = [False] * n
    stack = [a for a in anchors]
    for a in anchors:
        seen[a] = True
    while stack:
        u = stack.pop()
        for e, w in inc[u]:
            if e in cycle_edges or seen[w]:
                continue
            seen[w] = True
            stack.append(w)
    return {i for i in range(n) if not seen[i]}


def _node_level(topo, node: int, hex_board: bool) -> int:
    if hex_board:
        return topo.vertical_label(node)
    return topo.duals[node].level


def _far_levels(topo, inst: BracketInstance, hex_board: bool) -> list[int]:
    out = []
    for e in inst.edges:
        ends = topo.base.edges[e] if hex_board else topo.edge_duals[e]
        far = [x for x in ends if x not in inst.interiors]
        if len(far) != 1:
            return []
        out.append(_node_level(topo, far[0], hex_board))
    return out


@dataclass
class ValidationReport:
    template: BracketTemplate
    ok: bool
    failures: list[str]
    level_spread: int | None


def validate_template(template: BracketTemplate, topo) -> ValidationReport:
    """Check path-ness, enclosure, and level spread at a mid-board anchor."""
    failures: list[str] = []
    hex_board = template.family == "hex"

    anchor = _mid_anchor(template, topo)
    inst = anchor and instantiate(template, anchor, topo)
    if not inst or inst.sealed:
        return ValidationReport(template, False, ["no interior embedding"], None)

    # (a) the edges form a simple path of the stated length
    want = 6 if hex_board else 3
    if len(template.edge_mids) != want:
        failures.append(f"expected {want} edges")
    verts = _shift(template.path_verts, anchor)
    chain = (_hex_cycle_edges(topo, verts) if hex_board
             else _tri_cycle_edges(topo, verts))
    if chain is None or [e for e in chain] != list(inst.edges):
        failures.append("edges do not chain into the declared path")
    if len(set(verts)) != len(verts):
        failures.append("path revisits a vertex")

    # (b) interiors are exactly the faces enclosed against the minimal closing
    close = _shift(template.close_verts, anchor)
    if close[0] != verts[0] or close[-1] != verts[-1]:
        failures.append("closing path endpoints differ from bracket endpoints")
    closing = (_hex_cycle_edges(topo, close) if hex_board
               else _tri_cycle_edges(topo, close))
    if closing is None:
        failures.append("closing path leaves the board")
        return ValidationReport(template, False, failures, None)
    cyc = set(inst.edges) | set(closing)
    inside = enclosed_nodes(topo, cyc, hex_board)
    if inside != set(inst.interiors):
        failures.append(f"enclosure mismatch: {sorted(inside)} vs {sorted(inst.interiors)}")

    # (c) level spread: highest level a bracket-edge crossing can reach,
    # measured against the lowest caged face
    fars = _far_levels(topo, inst, hex_board)
    spread = None
    if not fars:
        failures.append("a bracket edge does not touch the caged faces")
    else:
        low = min(_node_level(topo, i, hex_board) for i in inst.interiors)
        spread = max(fars) - low
    return ValidationReport(template, not failures, failures, spread)


def _mid_anchor(template: BracketTemplate, topo) -> Coord | None:
    """A parity-compatible anchor far from every boundary."""
    if template.family == "tri":
        t: Topology = topo
        best, score = None, -1
        for pos in t.verts:
            x, y = pos
            s = min(x, 2 * (2 * t.m - 2) - x) + 2 * min(y - 2, 2 * t.n - y)
            if s > score and _fits(template, pos, t):
                best, score = pos, s
        return best
    hx: HexTopology = topo
    best, score = None, -1
    for pos in hx.hvert:
        x, y = pos
        s = min(x, 2 * hx.n - x) * 2 + min(y, 2 * (2 * hx.m - 1) - y)
        inst = instantiate(template, pos, hx)
        if inst and not inst.sealed and s > score:
            best, score = pos, s
    return best


def _fits(template: BracketTemplate, anchor: Coord, t: Topology) -> bool:
    return instantiate(template, anchor, t) is not None


def find_securing_brackets(state, comp) -> list[BracketInstance]:
    """All catalog instances caging exactly this component, no red edges."""
    from . import game

    topo = state.topo
    hex_board = state.is_hex
    fam = "hex" if hex_board else "tri"
    if hex_board:
        pos_of = topo.brick
    else:
        pos_of = [d.pos for d in topo.duals]
    nodes = comp.nodes if hasattr(comp, "nodes") else frozenset(comp)
    out, seen = [], set()
    for tpl in catalog(fam):
        if len(tpl.interiors) != len(nodes):
            continue
        for u in nodes:
            ux, uy = pos_of[u]
            for dx, dy in tpl.interiors:
                anchor = (ux - dx, uy - dy)
                key = (tpl.type_id, anchor)
                if key in seen:
                    continue
                seen.add(key)
                inst = instantiate(tpl, anchor, topo)
                if inst is None or inst.interiors != nodes:
                    continue
                if any(state.marks[e] == game.RED for e in inst.edges):
                    continue
                out.append(inst)
    out.sort(key=lambda i: (i.type_id, i.anchor))
    return out


def catalog_json() -> dict:
    return {
        fam: [
            {
                "type": t.type_id,
                "edge_mids": [list(p) for p in t.edge_mids],
                "interiors": [list(p) for p in t.interiors],
            }
            for t in catalog(fam)
        ]
        for fam in ("tri", "hex")
    }
