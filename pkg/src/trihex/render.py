"""SVG board diagrams: primal edges, the dual overlay, and certificates.

Colour conventions follow the project's figures: unclaimed edges black,
red and blue claims in their colours, the dual overlay violet, securing
paths highlighted blue, brackets and gates orange.
"""

from __future__ import annotations

from .game import BLUE, BLUE_DOUBLE, RED, GameState
from .lattice import HexTopology, Topology

SCALE = 36
MARGIN = 40

EDGE_COLOURS = {0: "#222222", RED: "#d62728", BLUE: "#1f77b4", BLUE_DOUBLE: "#0b3d91"}


def _tri_xy(pos, n):
    x, y = pos
    return MARGIN + x * SCALE / 2.0, MARGIN + (2 * n + 1 - y) * SCALE / 2.0


def _hex_xy(pos, m):
    x, y = pos
    return MARGIN + x * SCALE / 1.2, MARGIN + (2 * (2 * m - 1) + 1 - y) * SCALE / 2.2


def _line(p1, p2, colour, width, dash=None, opacity=1.0):
    d = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<line x1="{p1[0]:.1f}" y1="{p1[1]:.1f}" x2="{p2[0]:.1f}" '
            f'y2="{p2[1]:.1f}" stroke="{colour}" stroke-width="{width}"'
            f' stroke-linecap="round" opacity="{opacity}"{d}/>')


def _dot(p, colour, r=3.5):
    return f'<circle cx="{p[0]:.1f}" cy="{p[1]:.1f}" r="{r}" fill="{colour}"/>'


def render_svg(state: GameState, certs=None, show_dual: bool = True) -> str:
    """The current board as a standalone SVG document."""
    topo = state.topo
    hexb = state.is_hex
    base = state.base
    if hexb:
        to_xy = lambda pos: _hex_xy(pos, topo.m)
        vert_pos = topo.hvert
        edge_ends = lambda e: base.edge_duals[e]
        width = MARGIN * 2 + 2 * topo.n * SCALE / 1.2
        height = MARGIN * 2 + (2 * (2 * topo.m - 1) + 2) * SCALE / 2.2
    else:
        to_xy = lambda pos: _tri_xy(pos, topo.n)
        vert_pos = base.verts
        edge_ends = lambda e: base.edges[e]
        width = MARGIN * 2 + (2 * topo.m - 2) * SCALE
        height = MARGIN * 2 + (2 * topo.n + 2) * SCALE / 2.0

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
             f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
             f'<rect width="100%" height="100%" fill="white"/>']

    window_edges, path_edges, gate_edges = set(), set(), set()
    if certs:
        for cert in certs.values():
            path_edges.update(cert.path_edges)
            if cert.gate is not None:
                gate_edges.add(cert.gate)
            window_edges.update(cert.window_edges())

    # dual overlay beneath the primal edges
    if show_dual:
        for e in range(base.num_edges()):
            da, db = base.edges[e] if hexb else base.edge_duals[e]
            p1 = to_xy(_dual_pos(state, da))
            p2 = to_xy(_dual_pos(state, db))
            colour = "#9467bd" if state.marks[e] != RED else "#d62728"
            parts.append(_line(p1, p2, colour, 1.2, dash="3,3", opacity=0.6))
        for i in range(_dual_count(state)):
            parts.append(_dot(to_xy(_dual_pos(state, i)), "#9467bd", 2.2))

    for e in range(base.num_edges()):
        a, b = edge_ends(e)
        p1, p2 = to_xy(vert_pos[a]), to_xy(vert_pos[b])
        mark = state.marks[e]
        w = 2.2 if mark == 0 else 4.0
        colour = EDGE_COLOURS[mark]
        if e in gate_edges and mark == 0:
            colour, w = "#ff7f0e", 4.5
        elif e in window_edges and mark == 0:
            colour, w = "#ffae42", 3.6
        parts.append(_line(p1, p2, colour, w))
        if e in path_edges and mark in (BLUE, BLUE_DOUBLE):
            parts.append(_line(p1, p2, "#9ecae1", 1.4))

    for pos in vert_pos:
        parts.append(_dot(to_xy(pos), "#111111"))
    parts.append("</svg>")
    return "\n".join(parts)


def _dual_pos(state: GameState, i: int):
    if state.is_hex:
        return state.topo.brick[i]
    return state.topo.duals[i].pos


def _dual_count(state: GameState) -> int:
    if state.is_hex:
        return len(state.base.verts)
    return len(state.base.duals)


def render_record_frames(states, certs_seq=None):
    """One SVG per position for stepping through a finished game."""
    out = []
    for i, st in enumerate(states):
        certs = certs_seq[i] if certs_seq and i < len(certs_seq) else None
        out.append(render_svg(st, certs))
    return out
