"""Exact minimax solving of tiny boards: the independent ground truth.

Multi-edge turns are expanded as sequences of single claims by the same
player, which preserves the game value and keeps branching manageable.
States repeat heavily under that expansion, so results are memoized on a
canonical key that folds in the board's horizontal mirror symmetry.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import game as G
from .game import (BLUE, BLUE_DOUBLE, RED, UNCLAIMED, GameRules, GameState,
                   breaker_connected, maker_connected, new_game)
from .lattice import Topology, mirror_edge_map, triangular


class CapExceeded(RuntimeError):
    pass


@dataclass
class SolveResult:
    winner: str                      # "maker" or "breaker"
    principal_variation: list[int]
    nodes_visited: int


@dataclass
class _Ctx:
    topo: Topology
    p: int
    q: int
    mirror: list[int]
    memo: dict = field(default_factory=dict)
    nodes: int = 0
    use_symmetry: bool = True
    order: dict = field(default_factory=dict)  # edge -> sort rank
    node_cap: int | None = None


def _key(ctx: _Ctx, marks: bytearray, player: str, left: int):
    base = bytes(marks)
    if not ctx.use_symmetry:
        return base, player, left
    mirrored = bytes(marks[ctx.mirror[e]] for e in range(len(marks)))
    return min(base, mirrored), player, left


def _winner_now(ctx: _Ctx, state: GameState) -> str | None:
    if maker_connected(state):
        return "maker"
    if breaker_connected(state):
        return "breaker"
    if state.marks.count(UNCLAIMED) == 0:
        return "breaker" if not maker_connected(state) else "maker"
    return None


def _search(ctx: _Ctx, state: GameState, player: str, left: int) -> tuple[str, int | None]:
    """Winner with best play; second item is a best edge for ``player``."""
    ctx.nodes += 1
    if ctx.node_cap is not None and ctx.nodes > ctx.node_cap:
        raise CapExceeded(f"search exceeded {ctx.node_cap} nodes")
    if maker_connected(state):
        return "maker", None
    if breaker_connected(state):
        return "breaker", None
    free = state.unclaimed_edges()
    if not free:
        return "breaker", None
    key = _key(ctx, bytearray(state.marks), player, left)
    hit = ctx.memo.get(key)
    if hit is not None:
        return hit
    mark = BLUE if player == "maker" else RED
    if left == 0:
        nxt = "breaker" if player == "maker" else "maker"
        budget = ctx.q if nxt == "breaker" else ctx.p
        result = _search(ctx, state, nxt, min(budget, len(free)))
        out = (result[0], None)
        ctx.memo[key] = out
        return out
    best_edge = None
    outcome = "breaker" if player == "maker" else "maker"
    free.sort(key=lambda e: ctx.order.get(e, 2 * len(state.marks)))
    for e in free:
        new = bytearray(state.marks)
        new[e] = mark
        child = G.GameState(topo=state.topo, rules=state.rules, marks=bytes(new),
                            history=(), to_move=player)
        sub, _ = _search(ctx, child, player, left - 1)
        if sub == player or (player == "maker" and sub == "maker") or \
                (player == "breaker" and sub == "breaker"):
            outcome = sub
            best_edge = e
            break
    out = (outcome, best_edge)
    ctx.memo[key] = out
    return out


def solve(topo: Topology, p: int, q: int, state: GameState | None = None,
          cap: int = 22, use_symmetry: bool = True,
          node_cap: int | None = None) -> SolveResult:
    """Exact winner of the crossing game from ``state`` (default: empty)."""
    if state is None:
        state = new_game(topo, GameRules(kind=G.CROSSING, p=p, q=q))
    free = state.count_unclaimed()
    if free > cap:
        raise CapExceeded(f"{free} unclaimed edges exceed the cap {cap}")
    ctx = _Ctx(topo=topo, p=p, q=q, mirror=mirror_edge_map(topo),
               use_symmetry=use_symmetry, node_cap=node_cap)
    # contested edges first: both players' cheapest completions
    _, mk_wit = G.maker_completion_witness(state)
    _, bk_wit = G.min_completion_witness(state)
    rank = 0
    for pair in zip(mk_wit, bk_wit):
        for e in pair:
            ctx.order.setdefault(e, rank)
            rank += 1
    for e in mk_wit + bk_wit:
        ctx.order.setdefault(e, rank)
        rank += 1
    player = "maker" if state.to_move == "blue" else "breaker"
    budget = p if player == "maker" else q
    winner, _ = _search(ctx, state, player, min(budget, free))

    # reconstruct a principal variation by replaying best edges
    pv: list[int] = []
    cur, who, left = state, player, min(budget, free)
    for _ in range(free):
        if maker_connected(cur) or breaker_connected(cur):
            break
        if left == 0:
            who = "breaker" if who == "maker" else "maker"
            left = min(ctx.q if who == "breaker" else ctx.p, cur.count_unclaimed())
            continue
        _, edge = _search(ctx, cur, who, left)
        if edge is None:
            w2, _ = _search(ctx, cur, who, left)
            cand = cur.unclaimed_edges()
            if not cand:
                break
            edge = cand[0]
        pv.append(edge)
        new = bytearray(cur.marks)
        new[edge] = BLUE if who == "maker" else RED
        cur = G.GameState(topo=cur.topo, rules=cur.rules, marks=bytes(new),
                          history=(), to_move=cur.to_move)
        left -= 1
    return SolveResult(winner=winner, principal_variation=pv, nodes_visited=ctx.nodes)


def theorem_prediction(p: int, q: int, m: int, n: int) -> str | None:
    """Winner pinned by the two proven parameter ranges, if either applies."""
    if p >= q and n >= q + 2:
        return "maker"
    if q >= 4 * p and m >= q + 1:
        return "breaker"
    return None


def winner_table(p_range, q_range, m_range, n_range, cap: int = 22,
                 node_cap: int | None = 400_000) -> list[dict]:
    """Exact winners over a small parameter grid, annotated with the theory."""
    rows = []
    for p in p_range:
        for q in q_range:
            for m in m_range:
                for n in n_range:
                    cell = {"p": p, "q": q, "m": m, "n": n,
                            "predicted": theorem_prediction(p, q, m, n)}
                    try:
                        topo = triangular(m, n)
                        if topo.num_edges() > cap:
                            raise CapExceeded(f"{topo.num_edges()} edges")
                        res = solve(topo, p, q, cap=cap, node_cap=node_cap)
                        cell["winner"] = res.winner
                        cell["nodes"] = res.nodes_visited
                    except CapExceeded as ex:
                        cell["winner"] = None
                        cell["error"] = str(ex)
                    rows.append(cell)
    return rows


def table_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["p", "q", "m", "n", "winner", "predicted",
                                        "nodes", "error"], extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def table_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=1)
