"""Adversary policies for fuzzing and matches.

Policies generate legal red turns (or blue turns when a maker-side policy
is asked for).  Secure-game adversaries filter their candidates through
the rules; crossing-game adversaries additionally respect the standing
assumptions that red never builds a dual cycle or arch and blue never
builds a cycle or same-side arch, since moves breaking them are never
useful and the caging strategies presume them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from . import game as G
from .game import (BLUE, BLUE_DOUBLE, RED, UNCLAIMED, GameState,
                   arch_or_join_blocked, breaker_ends, red_components,
                   secure_rule_check)


@dataclass
class Policy:
    kind: str                       # random / greedy / gate-attacker / bracket-attacker / scripted
    seed: int = 0
    script: list[int] = field(default_factory=list)
    guard: int = 0                  # keep this many edge columns untouched
    rng: random.Random = field(init=False)
    cursor: int = 0

    def __post_init__(self):
        self.rng = random.Random(self.seed)


def edge_guarded(state: GameState, e: int, guard: int) -> bool:
    """True when the edge touches one of the guarded outer columns.

    Finite boards stand in for the infinite-width strips of the response
    games; the guard keeps play away from the two vertical board edges so
    the caging strategies never meet shapes the infinite game lacks.
    """
    if guard <= 0:
        return False
    if state.is_hex:
        hx = state.topo
        lo, hi = 2 * guard, 2 * (hx.n - guard)
        for d in state.topo.base.edge_duals[e]:
            x = hx.hvert[d][0]
            if x <= lo or x >= hi:
                return True
        return False
    t = state.topo
    lo = 2 * (2 * guard - 1)
    hi = 2 * (2 * t.m - 2) - lo
    for v in t.edges[e]:
        x = t.verts[v][0]
        if x <= lo or x >= hi:
            return True
    return False


def parse_policy(spec: str) -> Policy:
    """Parse CLI policy specs like "random:42", "greedy", "gate-attacker"."""
    name, _, arg = spec.partition(":")
    if name in ("random", "greedy", "gate-attacker", "bracket-attacker"):
        return Policy(kind=name, seed=int(arg) if arg else 0)
    raise ValueError(f"unknown policy {spec!r}")


def _maker_arch_blocked(state: GameState, e: int) -> bool:
    """Would a blue claim of e join two same-side maker terminals or cycle?"""
    if state.is_hex:
        # blue plays on the dual side of the base grid
        t = state.topo.base
        ends = t.edge_duals[e]
        left = set(state.topo.left_tips())
        right = set(state.topo.right_tips())
        n = len(t.duals)
        inc = t.dual_adj
    else:
        t = state.topo
        ends = t.edges[e]
        left = {v for v in t.left_vertices}
        right = {v for v in t.right_vertices}
        n = len(t.verts)
        inc = t.vert_adj
    comp_id = [-1] * n
    cid = 0
    for u in range(n):
        if comp_id[u] != -1:
            continue
        stack, members = [u], [u]
        comp_id[u] = cid
        while stack:
            x = stack.pop()
            for ee, w in inc[x]:
                if state.marks[ee] in (BLUE, BLUE_DOUBLE) and comp_id[w] == -1:
                    comp_id[w] = cid
                    stack.append(w)
                    members.append(w)
        cid += 1
    a, b = ends
    if comp_id[a] == comp_id[b]:
        return True  # cycle
    la = sum(1 for v in left if comp_id[v] == comp_id[a]) + \
        sum(1 for v in left if comp_id[v] == comp_id[b])
    ra = sum(1 for v in right if comp_id[v] == comp_id[a]) + \
        sum(1 for v in right if comp_id[v] == comp_id[b])
    return la >= 2 or ra >= 2


def legal_red_candidates(state: GameState, certs=None) -> list[int]:
    """Unclaimed edges a red claim may take under the standing assumptions."""
    comps = red_components(state)
    out = []
    for e in range(state.topo.num_edges()):
        if state.marks[e] != UNCLAIMED:
            continue
        if arch_or_join_blocked(state, e, comps) is not None:
            continue
        out.append(e)
    return out


def legal_secure_red(state: GameState, certs) -> list[int]:
    out = []
    for e in range(state.topo.num_edges()):
        if state.marks[e] == RED:
            continue
        if secure_rule_check(state, certs, e) is None:
            out.append(e)
    return out


def _witness_edges(state: GameState) -> list[int]:
    _, witness = G.min_completion_witness(state)
    return witness


def next_moves(policy: Policy, state: GameState, budget: int,
               certs=None, maker_side: bool = False) -> list[int]:
    """Up to ``budget`` legal edges for one adversary turn.

    ``certs`` is the engine's live certificate map; the attacker policies
    use it to aim at gates, securing paths and bracket windows.  When
    fewer legal edges remain, all of them are returned.
    """
    if policy.kind == "scripted":
        take = policy.script[policy.cursor:policy.cursor + budget]
        policy.cursor += len(take)
        return list(take)

    if maker_side:
        cands = [e for e in range(state.topo.num_edges())
                 if state.marks[e] == UNCLAIMED and not _maker_arch_blocked(state, e)]
        if not cands:
            cands = state.unclaimed_edges()
    elif state.rules.kind == G.SECURE:
        cands = legal_secure_red(state, certs or {})
    else:
        cands = legal_red_candidates(state, certs)
    if policy.guard:
        guarded = [e for e in cands if not edge_guarded(state, e, policy.guard)]
        if guarded:
            cands = guarded
    if not cands:
        return []

    picks: list[int] = []
    pool = list(cands)
    sim = state
    while pool and len(picks) < budget:
        e = _pick(policy, sim, pool, certs, maker_side)
        picks.append(e)
        sim = _mark_one(sim, e, maker_side)
        if state.rules.kind == G.SECURE:
            break  # one edge per secure-game turn
        pool = [x for x in pool if x != e and _still_legal(sim, x, maker_side)]
    return picks


def _mark_one(state: GameState, e: int, maker_side: bool) -> GameState:
    from .strategy import _apply_marks

    return _apply_marks(state, blue=[e]) if maker_side else _apply_marks(state, red=[e])


def _still_legal(sim: GameState, e: int, maker_side: bool) -> bool:
    if sim.marks[e] != UNCLAIMED:
        return False
    if maker_side:
        return not _maker_arch_blocked(sim, e)
    return arch_or_join_blocked(sim, e) is None


def _pick(policy: Policy, state: GameState, pool: list[int], certs,
          maker_side: bool) -> int:
    if policy.kind == "random":
        return policy.rng.choice(pool)
    if policy.kind == "greedy":
        if maker_side:
            _, witness = G.maker_completion_witness(state)
        else:
            witness = _witness_edges(state)
        for e in witness:
            if e in pool:
                return e
        return policy.rng.choice(pool)
    if policy.kind in ("gate-attacker", "bracket-attacker"):
        prefer: list[int] = []
        if certs:
            for cert in certs.values():
                if policy.kind == "gate-attacker":
                    if cert.gate is not None:
                        prefer.append(cert.gate)
                    prefer.extend(sorted(cert.path_edges))
                else:
                    prefer.extend(cert.window_edges())
        for e in prefer:
            if e in pool:
                return e
        # fall back to pressure along the cheapest completion
        for e in _witness_edges(state) if not maker_side else \
                G.maker_completion_witness(state)[1]:
            if e in pool:
                return e
        return policy.rng.choice(pool)
    raise ValueError(f"policy {policy.kind} cannot pick moves")


def enumerate_turns(state: GameState, r: int) -> list[tuple[int, ...]]:
    """Every legal r-subset of unclaimed edges, for exhaustive small-board checks."""
    free = state.unclaimed_edges()
    return list(combinations(free, r))
