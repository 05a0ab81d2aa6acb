"""Match running and the mechanical verification suites.

Each suite checks one of the project's structural facts at desk scale
and returns a report dict; ``verify_suite`` is the single entry point
used by both the CLI and the acceptance tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import game as G
from . import opponents as OP
from . import security as S
from . import solver as SV
from . import strategy as ST
from .game import BLUE, RED, UNCLAIMED, GameRules, GameState, claim, new_game
from .lattice import hexagonal, triangular


@dataclass
class MatchConfig:
    kind: str = "triangular"     # board family
    m: int = 8
    n: int = 3
    p: int = 1
    q: int = 1
    maker: str = "strategy"      # "strategy" or a policy spec
    breaker: str = "greedy"      # "strategy" or a policy spec
    seed: int = 0
    unsafe: bool = False         # play outside proven ranges without refusing

    def topology(self):
        if self.kind == "hexagonal":
            return hexagonal(self.n, self.m)
        return triangular(self.m, self.n)


@dataclass
class MatchOutcome:
    result: str
    state: GameState
    case_tags: list[str] = field(default_factory=list)
    certs: dict = field(default_factory=dict)
    record: dict = field(default_factory=dict)


def run_match(config: MatchConfig) -> MatchOutcome:
    """Play a crossing game to completion under the configured players."""
    topo = config.topology()
    state = new_game(topo, GameRules(kind=G.CROSSING, p=config.p, q=config.q))
    tags: list[str] = []

    maker_engine = breaker_engine = None
    maker_policy = breaker_policy = None
    if config.maker == "strategy":
        maker_engine = ST.MakerEngine(topo, config.p, config.q, unsafe=config.unsafe)
    else:
        maker_policy = OP.parse_policy(config.maker)
        maker_policy.seed = maker_policy.seed or config.seed
    if config.breaker == "strategy":
        breaker_engine = ST.BreakerEngine(topo, config.p, config.q, unsafe=config.unsafe)
    else:
        breaker_policy = OP.parse_policy(config.breaker)
        breaker_policy.seed = breaker_policy.seed or config.seed + 1

    def maker_turn(before_red: GameState, red_edges: list[int],
                   st: GameState) -> list[int]:
        want = min(config.p, st.count_unclaimed())
        if maker_engine is not None:
            out = maker_engine.respond(before_red, red_edges)
            tags.extend(maker_engine.tags[len(tags):])
            return _fit(st, out, want)
        return _fit(st, OP.next_moves(maker_policy, st, want,
                                      certs=_certs(breaker_engine),
                                      maker_side=True), want)

    def breaker_turn(before_blue: GameState, blue_edges: list[int],
                     st: GameState) -> list[int]:
        want = min(config.q, st.count_unclaimed())
        if breaker_engine is not None:
            out = breaker_engine.respond(before_blue, blue_edges)
            return _fit(st, out, want)
        return _fit(st, OP.next_moves(breaker_policy, st, want,
                                      certs=_certs(maker_engine)), want)

    # maker's opening claims are free moves
    if maker_engine is not None:
        opening = maker_engine.first_edges(state)
    else:
        opening = OP.next_moves(maker_policy, state,
                                min(config.p, state.count_unclaimed()),
                                maker_side=True)
    blue_edges = _fit(state, opening, min(config.p, state.count_unclaimed()))
    before_blue = state
    if blue_edges:
        state = claim(state, "blue", blue_edges)

    while G.crossing_status(state) == "open" and state.count_unclaimed() > 0:
        red_edges = breaker_turn(before_blue, blue_edges, state)
        before_red = state
        if red_edges:
            state = claim(state, "red", red_edges)
        else:
            state = _pass_turn(state)
        if G.crossing_status(state) != "open" or state.count_unclaimed() == 0:
            break
        blue_edges = maker_turn(before_red, red_edges, state)
        before_blue = state
        if blue_edges:
            state = claim(state, "blue", blue_edges)
        else:
            state = _pass_turn(state)

    result = G.crossing_status(state)
    engine = maker_engine or breaker_engine
    certs = _certs(engine)
    record = G.record_dict(state, extra={
        "config": {"kind": config.kind, "m": config.m, "n": config.n,
                   "p": config.p, "q": config.q, "maker": config.maker,
                   "breaker": config.breaker, "seed": config.seed},
        "case_tags": list((engine.tags if engine else tags)),
    })
    return MatchOutcome(result=result, state=state,
                        case_tags=list(engine.tags) if engine else tags,
                        certs=certs, record=record)


def _certs(engine):
    return dict(engine.certs) if engine is not None else {}


def _fit(state: GameState, edges, want: int):
    out = []
    seen = set()
    for e in edges:
        if state.marks[e] == UNCLAIMED and e not in seen:
            out.append(e)
            seen.add(e)
        if len(out) == want:
            break
    i = 0
    while len(out) < want:
        if i >= state.topo.num_edges():
            break
        if state.marks[i] == UNCLAIMED and i not in seen:
            out.append(i)
            seen.add(i)
        i += 1
    return out


def _pass_turn(state: GameState):
    from dataclasses import replace

    nxt = "red" if state.to_move == "blue" else "blue"
    return replace(state, to_move=nxt)


# -- verification suites -----------------------------------------------------


def suite_boundary_bound(budget: int = 10_000, seed: int = 0) -> dict:
    """Grown dual components never exceed the edges+3 boundary bound."""
    rng = random.Random(seed)
    checked = violations = 0
    boards = [triangular(m, n) for (m, n) in ((4, 4), (6, 5), (8, 6), (10, 10))]
    while checked < budget:
        t = rng.choice(boards)
        rules = GameRules(kind=G.CROSSING, p=1, q=1)
        marks = bytearray(t.num_edges())
        e0 = rng.randrange(t.num_edges())
        marks[e0] = RED
        nodes = set(t.edge_duals[e0])
        for _ in range(rng.randrange(1, 14)):
            cands = [e for u in nodes for e, w in t.dual_adj[u] if marks[e] != RED]
            if not cands:
                break
            e = rng.choice(cands)
            marks[e] = RED
            nodes |= set(t.edge_duals[e])
        st = GameState(topo=t, rules=rules, marks=bytes(marks), history=(), to_move="red")
        for comp in G.red_components(st):
            checked += 1
            beta = G.external_boundary(st, comp)
            if len(beta) > len(comp.red_edges) + 3:
                violations += 1
    return {"suite": "lemma1_1", "checked": checked, "violations": violations,
            "ok": violations == 0}


def fuzz_secure_game(topo, policies, seeds, max_turns=44, guard=1,
                     q_for_safety=1, collect_states=False):
    """Shared secure-game fuzz loop returning turn-by-turn observations."""
    is_hex = topo.kind == "hexagonal"
    per_red = 4 if is_hex else 1
    out = {"turns": 0, "grid_faults": 0, "budget_faults": 0,
           "no_securing": 0, "unsafe_states": 0, "tags": {}, "states": []}
    for policy_kind in policies:
        for seed in seeds:
            st = new_game(topo, GameRules(kind=G.SECURE, q=1))
            certs = {}
            pol = OP.Policy(kind=policy_kind, seed=seed, guard=guard)
            for _ in range(max_turns):
                moves = OP.next_moves(pol, st, 1, certs=certs)
                if not moves:
                    break
                e = moves[0]
                b = {UNCLAIMED: 0, BLUE: 1, 3: 2}[st.marks[e]]
                try:
                    resp = ST.secure_response(st, certs, e)
                except ST.NoSecuringMove:
                    out["no_securing"] += 1
                    break
                out["turns"] += 1
                out["tags"][resp.case_tag] = out["tags"].get(resp.case_tag, 0) + 1
                if resp.after.count_unclaimed() > 0 and \
                        len(resp.blue_edges) != per_red + b:
                    out["budget_faults"] += 1
                if S.check_grid(resp.after, resp.new_certs):
                    out["grid_faults"] += 1
                st, certs = resp.after, resp.new_certs
                if G.min_completion_cost(st) <= q_for_safety:
                    out["unsafe_states"] += 1
                if collect_states:
                    out["states"].append((st, dict(certs)))
                if st.count_unclaimed() == 0:
                    break
    return out


def suite_single_turn_safety(budget: int = 2000, seed: int = 0) -> dict:
    """Secure states never allow a one-turn red completion."""
    res_tri = fuzz_secure_game(triangular(9, 3), ("random", "greedy"),
                               range(seed, seed + max(1, budget // 80)))
    res_hex = fuzz_secure_game(hexagonal(9, 4), ("random", "greedy"),
                               range(seed, seed + max(1, budget // 80)))
    unsafe = res_tri["unsafe_states"] + res_hex["unsafe_states"]
    turns = res_tri["turns"] + res_hex["turns"]
    return {"suite": "lemma2_1", "turns": turns, "unsafe": unsafe,
            "no_securing": res_tri["no_securing"] + res_hex["no_securing"],
            "ok": unsafe == 0}


def suite_secure_responses(budget: int = 2000, seed: int = 0) -> dict:
    """Every caging response re-secures the grid with an exact budget."""
    seeds = range(seed, seed + max(1, budget // 60))
    policies = ("random", "greedy", "gate-attacker", "bracket-attacker")
    tri = fuzz_secure_game(triangular(9, 4), policies, seeds)
    hx = fuzz_secure_game(hexagonal(9, 5), policies, seeds)
    faults = tri["grid_faults"] + hx["grid_faults"]
    budgets = tri["budget_faults"] + hx["budget_faults"]
    nosec = tri["no_securing"] + hx["no_securing"]
    tags = dict(tri["tags"])
    for k, v in hx["tags"].items():
        tags[k] = tags.get(k, 0) + v
    return {"suite": "lemma3_1", "turns": tri["turns"] + hx["turns"],
            "grid_faults": faults, "budget_faults": budgets,
            "no_securing": nosec, "tags": tags,
            "ok": faults == 0 and budgets == 0 and nosec == 0}


def suite_duality(budget: int = 1000, seed: int = 0) -> dict:
    """Full boards always have exactly one winner."""
    rng = random.Random(seed)
    boards = [triangular(4, 4), triangular(6, 5), hexagonal(5, 4)]
    bad = 0
    for i in range(budget):
        topo = boards[i % len(boards)]
        rules = GameRules(kind=G.CROSSING, p=1, q=1) if topo.kind == "triangular" \
            else GameRules(kind=G.Q4_RESPONSE, q=1)
        marks = bytes(RED if rng.random() < 0.5 else BLUE
                      for _ in range(topo.num_edges()))
        st = GameState(topo=topo, rules=rules, marks=marks, history=(), to_move="red")
        if G.maker_connected(st) == G.breaker_connected(st):
            bad += 1
    return {"suite": "duality", "colorings": budget, "violations": bad, "ok": bad == 0}


def suite_maker_theorem(games_per_cell: int = 10, seed: int = 0) -> dict:
    """The caging maker wins every in-range crossing game."""
    losses = played = 0
    for (p, q) in ((1, 1), (2, 2), (2, 1)):
        for m in (6, 8, 10):
            for policy in ("random", "greedy", "gate-attacker", "bracket-attacker"):
                for s in range(games_per_cell):
                    cfg = MatchConfig(m=m, n=q + 2, p=p, q=q,
                                      maker="strategy", breaker=policy,
                                      seed=seed + s)
                    out = run_match(cfg)
                    played += 1
                    if out.result != "maker":
                        losses += 1
    return {"suite": "maker_theorem", "games": played, "losses": losses,
            "ok": losses == 0}


def suite_breaker_theorem(games_per_cell: int = 7, seed: int = 0) -> dict:
    """The dual caging breaker prevents every in-range crossing."""
    losses = played = 0
    for m in (5, 6, 8):
        for n in (3, 4):
            for policy in ("random", "greedy", "gate-attacker", "bracket-attacker"):
                for s in range(games_per_cell):
                    cfg = MatchConfig(m=m, n=n, p=1, q=4,
                                      maker=policy, breaker="strategy",
                                      seed=seed + s)
                    out = run_match(cfg)
                    played += 1
                    if out.result != "breaker":
                        losses += 1
    return {"suite": "breaker_theorem", "games": played, "losses": losses,
            "ok": losses == 0}


def suite_solver_agreement(seed: int = 0) -> dict:
    """Exact solving agrees with the proven ranges on cap-sized boards."""
    mismatches = cells = 0
    for (m, n, p, q) in ((2, 3, 1, 1), (3, 3, 1, 1), (4, 3, 1, 1), (2, 4, 2, 2),
                         (3, 3, 2, 1), (4, 3, 2, 1), (5, 2, 1, 4), (6, 2, 1, 4)):
        topo = triangular(m, n)
        pred = SV.theorem_prediction(p, q, m, n)
        if pred is None:
            continue
        res = SV.solve(topo, p, q)
        cells += 1
        if res.winner != pred:
            mismatches += 1
    return {"suite": "solver_agree", "cells": cells, "mismatches": mismatches,
            "ok": mismatches == 0}


SUITES = {
    "lemma1_1": suite_boundary_bound,
    "lemma2_1": suite_single_turn_safety,
    "lemma4_1": suite_single_turn_safety,
    "lemma3_1": suite_secure_responses,
    "lemma4_2": suite_secure_responses,
    "duality": suite_duality,
    "maker_theorem": suite_maker_theorem,
    "breaker_theorem": suite_breaker_theorem,
    "solver_agree": suite_solver_agreement,
}


def verify_suite(name: str, budget: int | None = None, seed: int = 0) -> dict:
    fn = SUITES.get(name)
    if fn is None:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if name in ("maker_theorem", "breaker_theorem"):
        return fn(seed=seed) if budget is None else fn(games_per_cell=budget, seed=seed)
    if name == "solver_agree":
        return fn(seed=seed)
    return fn(seed=seed) if budget is None else fn(budget=budget, seed=seed)
