"""Game state, rules enforcement, and connectivity queries.

Two players claim edges: red (Breaker in the crossing game, Vertical in the
response and secure variants) and blue (Maker / Horizontal).  The same
state machinery serves the triangular board and its hexagonal dual view;
the "breaker graph" -- the graph red builds its crossing in -- is the dual
graph on a triangular board and the primal triangular graph on a hexagonal
board (bricks are triangular vertices).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace

from .lattice import BOTTOM, TOP, HexTopology, Topology

UNCLAIMED = 0
RED = 1
BLUE = 2
BLUE_DOUBLE = 3

CROSSING = "crossing"
Q_RESPONSE = "q_response"
Q4_RESPONSE = "q4_response"
SECURE = "secure"


class RuleError(ValueError):
    """Base class for illegal-move and bad-rules errors."""


class OccupiedEdge(RuleError):
    pass


class WrongTurn(RuleError):
    pass


class BudgetMismatch(RuleError):
    pass


class SecureRuleViolation(RuleError):
    def __init__(self, clause: str, msg: str = ""):
        super().__init__(f"secure game condition ({clause}) violated: {msg}")
        self.clause = clause


@dataclass(frozen=True)
class GameRules:
    kind: str
    p: int = 1
    q: int = 1

    def __post_init__(self):
        if self.kind == CROSSING and (self.p < 1 or self.q < 1):
            raise RuleError("crossing game needs p >= 1 and q >= 1")
        if self.kind in (Q_RESPONSE, Q4_RESPONSE, SECURE) and self.q < 1:
            raise RuleError("response games need q >= 1")


@dataclass(frozen=True)
class Move:
    player: str          # "red" or "blue"
    edges: tuple[int, ...]
    turn: int
    b: int = 0           # blue marks overwritten by a secure-game red claim


@dataclass(frozen=True)
class GameState:
    topo: Topology | HexTopology
    rules: GameRules
    marks: bytes
    history: tuple[Move, ...]
    to_move: str

    @property
    def is_hex(self) -> bool:
        return self.topo.kind == "hexagonal"

    @property
    def base(self) -> Topology:
        return self.topo.base if self.is_hex else self.topo

    def mark(self, e: int) -> int:
        return self.marks[e]

    def unclaimed_edges(self) -> list[int]:
        return [e for e, v in enumerate(self.marks) if v == UNCLAIMED]

    def count_unclaimed(self) -> int:
        return self.marks.count(UNCLAIMED)


def new_game(topo: Topology | HexTopology, rules: GameRules) -> GameState:
    if rules.kind == Q4_RESPONSE and topo.kind != "hexagonal":
        raise RuleError("the 4-for-1 response game is played on the hexagonal grid")
    if rules.kind == Q_RESPONSE and topo.kind != "triangular":
        raise RuleError("the response game is played on the triangular grid")
    first = "blue" if rules.kind == CROSSING else "red"
    return GameState(
        topo=topo,
        rules=rules,
        marks=bytes(topo.num_edges()),
        history=(),
        to_move=first,
    )


# -- breaker-side graph ------------------------------------------------------
#
# Nodes are dual-vertex indices on a triangular board and primal-vertex
# indices (bricks) on a hexagonal one.  Red builds its crossing here.


def breaker_nodes(state: GameState) -> int:
    if state.is_hex:
        return len(state.base.verts)
    return len(state.base.duals)


def breaker_ends(state: GameState, e: int) -> tuple[int, int]:
    if state.is_hex:
        return state.base.edges[e]
    return state.base.edge_duals[e]


def breaker_roots(state: GameState) -> tuple[set[int], set[int]]:
    """(bottom, top) terminal nodes of the red player's crossing goal.

    On the hexagonal board the crossing terminals are the transported
    left/right boundary arcs of the base grid -- vertical labels {1, 2}
    at the bottom and {2m-2, 2m-1} at the top -- which is what makes the
    full-board winner unique.  Component classification is stricter; see
    class_roots.
    """
    if state.is_hex:
        hx: HexTopology = state.topo
        lo = 2 * 1  # doubled x of label-2 vertices
        hi = 2 * (2 * hx.m - 3)
        bottom = {i for i, p in enumerate(hx.base.verts) if p[0] <= lo}
        top = {i for i, p in enumerate(hx.base.verts) if p[0] >= hi}
        return bottom, top
    t: Topology = state.topo
    return set(t.bottom_duals), set(t.top_duals)


def class_roots(state: GameState) -> tuple[set[int], set[int]]:
    """(bottom, top) nodes that classify components as bottom/top.

    These coincide with the crossing terminals.  On the hexagonal board
    a component touching a securing row (vertical label 2 or 2m-2) is
    already terminal-bound -- the base grid's left/right arcs transport
    there -- so it is classified and arch-sealed like a bottom or top
    component.  With this alignment the no-same-side-arch rule is
    exactly the standing assumption that the crossing player never
    links two of its own terminals, and the no-join rule is what stops
    red from ever bridging the two terminal sets through mergers.
    """
    return breaker_roots(state)


def breaker_level(state: GameState, node: int) -> int:
    """Dual vertex level (triangular) or vertical label (hexagonal)."""
    if state.is_hex:
        return state.topo.vertical_label(node)
    return state.base.duals[node].level


def node_incidence(state: GameState) -> list[list[tuple[int, int]]]:
    return state.base.vert_adj if state.is_hex else state.base.dual_adj


# -- components --------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    nodes: frozenset[int]
    red_edges: frozenset[int]
    cls: str                 # "top" / "bottom" / "floating" / "spanning"
    root: int | None         # unique boundary node when class is top or bottom
    key: tuple[int, int]     # lexicographic minimal (y, x) node position

    def __contains__(self, node: int) -> bool:
        return node in self.nodes


def _node_pos(state: GameState, node: int) -> tuple[int, int]:
    if state.is_hex:
        x, y = state.base.verts[node]
        return (y, x)
    x, y = state.base.duals[node].pos
    return (y, x)


def red_components(state: GameState) -> list[Component]:
    """Maximal red-connected node sets of size >= 2, deterministically ordered."""
    bottom, top = class_roots(state)
    adj: dict[int, list[tuple[int, int]]] = {}
    for e, v in enumerate(state.marks):
        if v != RED:
            continue
        a, b = breaker_ends(state, e)
        adj.setdefault(a, []).append((e, b))
        adj.setdefault(b, []).append((e, a))
    seen: set[int] = set()
    comps = []
    for start in adj:
        if start in seen:
            continue
        nodes, edges = {start}, set()
        queue = deque([start])
        seen.add(start)
        while queue:
            u = queue.popleft()
            for e, w in adj.get(u, ()):
                edges.add(e)
                if w not in seen:
                    seen.add(w)
                    nodes.add(w)
                    queue.append(w)
        tops = sorted(nodes & top)
        bots = sorted(nodes & bottom)
        if tops and bots:
            cls, root = "spanning", None
        elif tops:
            cls, root = "top", tops[0] if len(tops) == 1 else None
        elif bots:
            cls, root = "bottom", bots[0] if len(bots) == 1 else None
        else:
            cls, root = "floating", None
        key = min(_node_pos(state, u) for u in nodes)
        comps.append(Component(frozenset(nodes), frozenset(edges), cls, root, key))
    comps.sort(key=lambda c: c.key)
    return comps


def component_of(comps: list[Component], node: int) -> Component | None:
    for c in comps:
        if node in c.nodes:
            return c
    return None


def border_edges(state: GameState, nodes: frozenset[int] | set[int]) -> set[int]:
    """Non-red edges with exactly one breaker-side endpoint in the node set."""
    inc = node_incidence(state)
    out = set()
    for u in nodes:
        for e, w in inc[u]:
            if state.marks[e] != RED and w not in nodes:
                out.add(e)
    return out


def external_boundary(state: GameState, comp: Component) -> set[int]:
    return border_edges(state, comp.nodes)


# -- secure game legality ----------------------------------------------------


def _class_tag(state: GameState, comps: list[Component], node: int,
               bottom: set[int], top: set[int]) -> str:
    c = component_of(comps, node)
    if c is not None:
        if c.cls in ("top", "bottom"):
            return c.cls
        return "floating"
    if node in top:
        return "top"
    if node in bottom:
        return "bottom"
    return "none"


def arch_or_join_blocked(state: GameState, e: int,
                         comps: list[Component] | None = None) -> str | None:
    """Would a red claim of e create a cycle, an arch, or a top-bottom join?

    Returns "i" or "ii" when blocked, None when allowed.  This is the
    state-only part of the secure-game conditions; it also encodes the
    standing crossing-game assumption that red never makes a dual cycle
    or a dual arch.
    """
    if comps is None:
        comps = red_components(state)
    a, b = breaker_ends(state, e)
    ca, cb = component_of(comps, a), component_of(comps, b)
    if ca is not None and ca is cb:
        return "i"  # red cycle
    bottom, top = class_roots(state)

    def contacts(node, comp):
        if comp is not None:
            t = len(comp.nodes & top)
            bo = len(comp.nodes & bottom)
        else:
            t = 1 if node in top else 0
            bo = 1 if node in bottom else 0
        return t, bo

    ta, ba_ = contacts(a, ca)
    tb, bb_ = contacts(b, cb)
    if ta + tb >= 2 or ba_ + bb_ >= 2:
        return "i"  # arch: two same-side boundary contacts
    if (ta and bb_) or (ba_ and tb):
        return "ii"  # joins a top contact to a bottom contact
    return None


def arch_blocked_same_side(state: GameState, e: int,
                           comps: list[Component] | None = None) -> bool:
    """Would a red claim of e create a cycle or a same-side arch?"""
    if comps is None:
        comps = red_components(state)
    a, b = breaker_ends(state, e)
    ca, cb = component_of(comps, a), component_of(comps, b)
    if ca is not None and ca is cb:
        return True
    bottom, top = class_roots(state)

    def contacts(node, comp):
        if comp is not None:
            return len(comp.nodes & top), len(comp.nodes & bottom)
        return (1 if node in top else 0), (1 if node in bottom else 0)

    ta, ba_ = contacts(a, ca)
    tb, bb_ = contacts(b, cb)
    return ta + tb >= 2 or ba_ + bb_ >= 2


def secure_rule_check(state: GameState, certs, e: int) -> str | None:
    """Check secure-game conditions (i)-(iii) for a red claim of e.

    Returns None when the claim is legal, otherwise "i", "ii" or "iii".
    ``certs`` maps component node-sets to certificates; only the securing
    path edges are consulted here (condition (iii)).
    """
    comps = red_components(state)
    blocked = arch_or_join_blocked(state, e, comps)
    if blocked:
        return blocked
    if state.marks[e] in (BLUE, BLUE_DOUBLE) and certs:
        bottom, top = class_roots(state)
        a, b = breaker_ends(state, e)
        for c in comps:
            if c.cls != "floating":
                continue
            cert = certs.get(c.nodes)
            if cert is None or e not in cert.path_edges:
                continue
            # claiming e merges c with whatever the far endpoint touches
            far = b if a in c.nodes else a if b in c.nodes else None
            if far is None:
                continue
            tag = _class_tag(state, comps, far, bottom, top)
            if tag in ("top", "bottom"):
                return "iii"
    return None


# -- claims ------------------------------------------------------------------


def _blue_budget(state: GameState) -> int:
    last = state.history[-1] if state.history else None
    if state.rules.kind == SECURE:
        base = 4 if state.is_hex else 1
        return base + (last.b if last else 0)
    if state.rules.kind == Q_RESPONSE:
        return len(last.edges) if last else 0
    if state.rules.kind == Q4_RESPONSE:
        return 4 * len(last.edges) if last else 0
    return state.rules.p  # crossing: maker claims p


def claim(state: GameState, player: str, edges, certs=None) -> GameState:
    """Apply one full turn of ``player`` claiming ``edges``.

    Counts are validated against the rules; in secure variants red may
    overwrite blue marks and the replaced-mark count b is recorded.  When
    the board cannot supply a full budget the remainder is forgiven.
    """
    edges = list(edges)
    if player != state.to_move:
        raise WrongTurn(f"{player} moved on {state.to_move}'s turn")
    if len(set(edges)) != len(edges):
        raise OccupiedEdge("duplicate edge in one turn")
    kind = state.rules.kind
    unclaimed = state.count_unclaimed()

    if player == "red":
        b = 0
        if kind == SECURE:
            if len(edges) != 1:
                raise BudgetMismatch("red claims exactly one edge per secure-game turn")
            e = edges[0]
            if state.marks[e] == RED:
                raise OccupiedEdge(f"edge {e} is already red")
            clause = secure_rule_check(state, certs or {}, e)
            if clause:
                raise SecureRuleViolation(clause, f"edge {e}")
            b = {UNCLAIMED: 0, BLUE: 1, BLUE_DOUBLE: 2}[state.marks[e]]
        else:
            budget = state.rules.q
            if kind == CROSSING:
                want = min(budget, unclaimed)
                if len(edges) != want:
                    raise BudgetMismatch(f"red must claim {want} edges")
            else:
                if not (1 <= len(edges) <= budget) or len(edges) > unclaimed:
                    raise BudgetMismatch(f"red claims between 1 and {budget} unclaimed edges")
            for e in edges:
                if state.marks[e] != UNCLAIMED:
                    raise OccupiedEdge(f"edge {e} is not unclaimed")
        new = bytearray(state.marks)
        for e in edges:
            new[e] = RED
    else:
        budget = _blue_budget(state)
        if kind == SECURE:
            capacity = unclaimed + state.marks.count(BLUE)
        else:
            capacity = unclaimed
        want = min(budget, capacity)
        if len(edges) != want:
            raise BudgetMismatch(f"blue must claim {want} edges, got {len(edges)}")
        new = bytearray(state.marks)
        for e in edges:
            if new[e] == UNCLAIMED:
                new[e] = BLUE
            elif new[e] == BLUE and kind == SECURE:
                new[e] = BLUE_DOUBLE
            else:
                raise OccupiedEdge(f"edge {e} cannot take another blue mark")
        b = 0

    move = Move(player=player, edges=tuple(edges), turn=len(state.history), b=b)
    nxt = "blue" if player == "red" else "red"
    return replace(state, marks=bytes(new), history=state.history + (move,), to_move=nxt)


# -- winners -----------------------------------------------------------------


def _reach(n_nodes: int, inc, passable, sources) -> list[bool]:
    seen = [False] * n_nodes
    queue = deque()
    for s in sources:
        if not seen[s]:
            seen[s] = True
            queue.append(s)
    while queue:
        u = queue.popleft()
        for e, w in inc[u]:
            if passable(e) and not seen[w]:
                seen[w] = True
                queue.append(w)
    return seen


def maker_connected(state: GameState) -> bool:
    """Does blue connect its two goal sides?"""
    if state.is_hex:
        t = state.base
        inc = t.dual_adj
        srcs = state.topo.left_tips()
        dsts = state.topo.right_tips()
        n = len(t.duals)
    else:
        t = state.topo
        inc = t.vert_adj
        srcs = t.left_vertices
        dsts = t.right_vertices
        n = len(t.verts)
    seen = _reach(n, inc, lambda e: state.marks[e] in (BLUE, BLUE_DOUBLE), srcs)
    return any(seen[d] for d in dsts)


def breaker_connected(state: GameState) -> bool:
    """Does red connect bottom to top on the breaker-side graph?"""
    bottom, top = breaker_roots(state)
    inc = node_incidence(state)
    seen = _reach(breaker_nodes(state), inc, lambda e: state.marks[e] == RED, bottom)
    return any(seen[d] for d in top)


def crossing_status(state: GameState) -> str:
    """"maker", "breaker" or "open"."""
    if maker_connected(state):
        return "maker"
    if breaker_connected(state):
        return "breaker"
    return "open"


def min_completion_witness(state: GameState) -> tuple[float, list[int]]:
    """Cheapest red bottom-top completion: (cost, unclaimed edges to claim).

    Red edges cost 0, unclaimed edges cost 1, blue edges are impassable.
    Returns (inf, []) when no completion exists.
    """
    bottom, top = breaker_roots(state)
    inc = node_incidence(state)
    n = breaker_nodes(state)
    INF = float("inf")
    dist = [INF] * n
    via: list[tuple[int, int] | None] = [None] * n
    dq = deque()
    for s in bottom:
        dist[s] = 0
        dq.append(s)
    while dq:
        u = dq.popleft()
        d = dist[u]
        for e, w in inc[u]:
            mk = state.marks[e]
            if mk in (BLUE, BLUE_DOUBLE):
                continue
            nd = d + (0 if mk == RED else 1)
            if nd < dist[w]:
                dist[w] = nd
                via[w] = (u, e)
                if nd == d:
                    dq.appendleft(w)
                else:
                    dq.append(w)
    best = min(top, key=lambda d: dist[d], default=None)
    if best is None or dist[best] == INF:
        return INF, []
    path = []
    u = best
    while via[u] is not None:
        prev, e = via[u]
        if state.marks[e] == UNCLAIMED:
            path.append(e)
        u = prev
    path.reverse()
    return dist[best], path


def min_completion_cost(state: GameState) -> float:
    return min_completion_witness(state)[0]


def maker_completion_witness(state: GameState) -> tuple[float, list[int]]:
    """Cheapest blue completion of maker's crossing: (cost, edges to claim)."""
    if state.is_hex:
        t = state.base
        inc = t.dual_adj
        srcs = state.topo.left_tips()
        dsts = set(state.topo.right_tips())
        n = len(t.duals)
    else:
        t = state.topo
        inc = t.vert_adj
        srcs = t.left_vertices
        dsts = set(t.right_vertices)
        n = len(t.verts)
    INF = float("inf")
    dist = [INF] * n
    via: list[tuple[int, int] | None] = [None] * n
    dq = deque()
    for s in srcs:
        dist[s] = 0
        dq.append(s)
    while dq:
        u = dq.popleft()
        d = dist[u]
        for e, w in inc[u]:
            mk = state.marks[e]
            if mk == RED:
                continue
            nd = d + (0 if mk in (BLUE, BLUE_DOUBLE) else 1)
            if nd < dist[w]:
                dist[w] = nd
                via[w] = (u, e)
                if nd == d:
                    dq.appendleft(w)
                else:
                    dq.append(w)
    best = min(dsts, key=lambda d: dist[d], default=None)
    if best is None or dist[best] == INF:
        return INF, []
    path = []
    u = best
    while via[u] is not None:
        prev, e = via[u]
        if state.marks[e] == UNCLAIMED:
            path.append(e)
        u = prev
    path.reverse()
    return dist[best], path


# -- records -----------------------------------------------------------------


def record_dict(state: GameState, extra: dict | None = None) -> dict:
    topo = state.topo
    mids = topo.hedge_mid if state.is_hex else topo.midpoints
    doc = {
        "version": 1,
        "topology": {"kind": topo.kind, "m": topo.m, "n": topo.n},
        "rules": {"kind": state.rules.kind, "p": state.rules.p, "q": state.rules.q},
        "moves": [
            {
                "player": mv.player,
                "edges": [list(mids[e]) for e in mv.edges],
                "turn": mv.turn,
                "b": mv.b,
            }
            for mv in state.history
        ],
        "result": crossing_status(state),
    }
    if extra:
        doc.update(extra)
    return doc


def record_json(state: GameState, extra: dict | None = None) -> str:
    return json.dumps(record_dict(state, extra), sort_keys=True)


def replay(doc: dict, topo=None) -> GameState:
    """Rebuild a state from a game record; bit-exact with the original."""
    from . import lattice

    tinfo = doc["topology"]
    if topo is None:
        if tinfo["kind"] == "hexagonal":
            topo = lattice.hexagonal(tinfo["n"], tinfo["m"])
        else:
            topo = lattice.triangular(tinfo["m"], tinfo["n"])
    rules = GameRules(kind=doc["rules"]["kind"], p=doc["rules"]["p"], q=doc["rules"]["q"])
    state = new_game(topo, rules)
    by_mid = topo.hedge_by_mid if topo.kind == "hexagonal" else topo.edge_by_midpoint
    for mv in doc["moves"]:
        edges = [by_mid[tuple(c)] for c in mv["edges"]]
        state = claim(state, mv["player"], edges)
    return state
