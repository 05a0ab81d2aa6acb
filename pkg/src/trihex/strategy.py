"""Blue's caging strategies: the secure-game case machine and its lifts.

The responder keeps every red component certified.  A response to one red
claim picks a window for the merged component (a catalog bracket, a gate,
or nothing when the boundary can be fully sealed) and claims exactly the
budgeted number of blue edges: 1+b on the triangular board, 4+b on the
hexagonal one, where b counts blue marks the red claim overwrote.

Paper-enumerated situations are answered by an explicit hand table and
tagged; everything the hand table leaves open ("analogously" cases, board
edges, root extensions on the hexagonal grid) goes through a bounded
search over catalog placements, gates and full seals.  Every response is
verified against the certificate checker before it is returned; a
response that cannot be verified within budget raises NoSecuringMove,
which the test suite treats as a strategy bug.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import brackets as BR
from . import game as G
from . import security as S
from .game import (BLUE, BLUE_DOUBLE, RED, UNCLAIMED, Component, GameState,
                   arch_or_join_blocked, border_edges, breaker_ends,
                   breaker_level, class_roots, component_of, node_incidence,
                   red_components)
from .security import CertMap, Certificate


class NoSecuringMove(RuntimeError):
    pass


class PreconditionError(ValueError):
    """The requested parameters are outside the proven theorem range."""


@dataclass
class StrategyResponse:
    blue_edges: list[int]        # claims in order; may include double-claims
    new_certs: CertMap
    case_tag: str
    after: GameState             # state with the red edge and the claims applied


@dataclass
class ResponsePlan:
    blue_edges: list[int]
    new_certs: CertMap
    case_tags: list[str]
    after: GameState


def _apply_marks(state: GameState, red=(), blue=()) -> GameState:
    new = bytearray(state.marks)
    for e in red:
        new[e] = RED
    for e in blue:
        new[e] = BLUE_DOUBLE if new[e] == BLUE else BLUE
    return replace(state, marks=bytes(new))


def _mid(state: GameState, e: int):
    return state.topo.hedge_mid[e] if state.is_hex else state.topo.midpoints[e]


def _edge_at(state: GameState, mid) -> int | None:
    if state.is_hex:
        return state.topo.hedge_by_mid.get(tuple(mid))
    return state.topo.edge_by_midpoint.get(tuple(mid))


def _instance(state: GameState, type_id: int, anchor) -> BR.BracketInstance | None:
    fam = "hex" if state.is_hex else "tri"
    tpl = BR.catalog(fam)[type_id - 1]
    return BR.instantiate(tpl, tuple(anchor), state.topo)


# -- free moves ----------------------------------------------------------------


def debt_edges(state: GameState, certs: CertMap) -> list[int]:
    """Window slots worth paying down before the adversary exploits them.

    A cage may legally keep several openings toward one neighbour, but
    merges through them cost more the more there are; free claims go
    there first, most-shared neighbours first.
    """
    comps = red_components(state)
    out: list[int] = []
    for comp in comps:
        cert = certs.get(comp.nodes)
        if cert is None:
            continue
        by_neighbour: dict[frozenset[int], list[int]] = {}
        for e in cert.window_edges():
            if state.marks[e] != UNCLAIMED:
                continue
            far = S._edge_far_node(state, e, comp.nodes)
            if far is None:
                continue
            other = component_of(comps, far)
            if other is not None and other.nodes != comp.nodes:
                by_neighbour.setdefault(other.nodes, []).append(e)
        for edges in by_neighbour.values():
            if len(edges) > 1:
                out.extend(sorted(edges)[1:])
    return out


def free_edge(state: GameState, avoid: set[int], certs: CertMap | None = None) -> int | None:
    """A never-disadvantageous claim: pay down cage debt, else extend the
    cheapest blue crossing."""
    if certs:
        # debt slots are window edges, deliberately exempt from avoidance
        for e in debt_edges(state, certs):
            if state.marks[e] == UNCLAIMED:
                return e
    _, witness = G.maker_completion_witness(state)
    for e in witness:
        if e not in avoid and state.marks[e] == UNCLAIMED:
            return e
    for e in range(state.topo.num_edges()):
        if state.marks[e] == UNCLAIMED and e not in avoid:
            return e
    for e in range(state.topo.num_edges()):
        if state.marks[e] == UNCLAIMED:
            return e
    return None


def _all_window_edges(certs: CertMap) -> set[int]:
    out = set()
    for cert in certs.values():
        out.update(cert.window_edges())
    return out


def _avoid_for_free(state: GameState, certs: CertMap) -> set[int]:
    """Edges a free claim must keep away from: windows and live boundaries.

    A free blue landing on a component boundary would silently become a
    second component's seal and owe a double mark later; steering free
    claims elsewhere keeps the path/window bookkeeping exact.
    """
    avoid = _all_window_edges(certs)
    for comp in red_components(state):
        avoid.update(border_edges(state, comp.nodes))
    return avoid


# -- reseal core ---------------------------------------------------------------


def _blue_border(state: GameState, nodes) -> frozenset[int]:
    return frozenset(e for e in border_edges(state, nodes)
                     if state.marks[e] in (BLUE, BLUE_DOUBLE))


def _double_claims(state: GameState, comp: Component, certs: CertMap,
                   window: set[int], comps) -> list[int]:
    """Single-blue border edges sealing a second component outside windows."""
    if state.rules.kind != G.SECURE:
        return []
    if comp.cls != "floating":
        return []
    out = []
    for e in border_edges(state, comp.nodes):
        if state.marks[e] != BLUE or e in window:
            continue
        far = S._edge_far_node(state, e, comp.nodes)
        if far is None:
            continue
        other = component_of(comps, far)
        if other is None or other.nodes == comp.nodes or other.cls != "floating":
            continue
        cert = certs.get(other.nodes)
        if cert is not None and e in cert.window_edges():
            continue
        out.append(e)
    return out


def _corridor_plug(state: GameState, comps, comp: Component,
                   window: set[int], certs=None) -> list[int] | None:
    """Border claims completing a top/bottom component's arch seal."""
    claims = S.arch_leaks(state, comps, comp, window)
    return sorted(claims)


@dataclass
class _Candidate:
    tag: str
    cert_variant: str
    window: tuple[int, ...]
    bracket: BR.BracketInstance | None
    gate: int | None
    claims: list[int]
    rank: tuple


def _candidate_brackets(state: GameState, comp: Component):
    """Catalog placements whose window fits this component's boundary."""
    border = border_edges(state, comp.nodes)
    cap = S.HEX_WINDOW_SPREAD if state.is_hex else S.TRI_WINDOW_SPREAD
    low = min(breaker_level(state, u) for u in comp.nodes)
    fam = "hex" if state.is_hex else "tri"
    pos_of = state.topo.brick if state.is_hex else [d.pos for d in state.topo.duals]
    seen = set()
    out = []
    for tpl in BR.catalog(fam):
        for u in comp.nodes:
            ux, uy = pos_of[u]
            for dx, dy in tpl.interiors:
                anchor = (ux - dx, uy - dy)
                if (tpl.type_id, anchor) in seen:
                    continue
                seen.add((tpl.type_id, anchor))
                inst = BR.instantiate(tpl, anchor, state.topo)
                if inst is None:
                    continue
                ok = True
                for e in inst.edges:
                    if state.marks[e] == RED or e not in border:
                        ok = False
                        break
                    far = S._edge_far_node(state, e, comp.nodes)
                    if far is not None and breaker_level(state, far) - low > cap:
                        ok = False
                        break
                if ok:
                    out.append(inst)
    out.sort(key=lambda i: (i.type_id, i.anchor))
    return out



def _opposite_far(state: GameState, comps, comp: Component, e: int) -> bool:
    """Does this window slot open into a component of the opposite class?

    Such a slot would be the forbidden top-bottom join kept as a window:
    illegal for red in the secure game but exactly red's winning claim
    in the response games, so it may never be left open.
    """
    if state.marks[e] != UNCLAIMED:
        return False
    far = S._edge_far_node(state, e, comp.nodes)
    if far is None:
        return False
    bottom, top = class_roots(state)
    forbidden = bottom if comp.cls == "top" else top
    other = component_of(comps, far)
    if other is None:
        return far in forbidden
    opposite = "bottom" if comp.cls == "top" else "top"
    return other.cls == opposite

def _gate_candidates(state: GameState, comps, comp: Component) -> list[int]:
    """Non-red gate placements; blue gates first (the grid is extra secure)."""
    border = border_edges(state, comp.nodes)
    out = []
    if state.is_hex:
        hx = state.topo
        lbl = hx.vertical_label(comp.root)
        if lbl not in (1, 2 * hx.m - 1):
            return out  # securing-row roots are arch-sealed without a gate
        rx, _ = hx.brick[comp.root]
        want_y = 5 if comp.cls == "bottom" else 4 * hx.m - 5
        e = hx.hedge_by_mid.get((rx + 1, want_y))
        if e is not None and e in border and state.marks[e] != RED \
                and not _opposite_far(state, comps, comp, e):
            out.append(e)
        return out
    t = state.topo
    root_x = t.duals[comp.root].pos[0]
    strip_y = 3 if comp.cls == "bottom" else 2 * t.n - 1
    for e in border:
        if state.marks[e] == RED or _opposite_far(state, comps, comp, e):
            continue
        mx, my = t.midpoints[e]
        if my == strip_y and mx % 2 == 1 and mx > root_x:
            out.append(e)
    out.sort(key=lambda e: (state.marks[e] == UNCLAIMED, t.midpoints[e]))
    return out


def _neighbour_excess(state: GameState, comps, comp: Component,
                      window) -> list[int]:
    """Window slots past the first toward any one neighbouring component.

    A cage may keep a single opening toward a neighbour -- the shared
    gate shape of the published merge cases.  Extra openings make the
    eventual merge cost more than one budget, so when the current budget
    stretches to it they are claimed blue immediately.
    """
    by_neighbour: dict[frozenset[int], list[int]] = {}
    for e in window:
        if state.marks[e] != UNCLAIMED:
            continue
        far = S._edge_far_node(state, e, comp.nodes)
        if far is None:
            continue
        other = component_of(comps, far)
        if other is not None and other.nodes != comp.nodes:
            by_neighbour.setdefault(other.nodes, []).append(e)
    out = []
    for edges in by_neighbour.values():
        out.extend(sorted(edges)[1:])
    return out


def _reseal_candidates(state: GameState, comps, comp: Component,
                       certs: CertMap, prefer=None):
    """Ordered certificate candidates for one component, cheapest first."""
    border = border_edges(state, comp.nodes)
    unclaimed = sorted(e for e in border if state.marks[e] == UNCLAIMED)
    shared = _double_claims(state, comp, certs, set(), comps)
    cands: list[_Candidate] = []

    if comp.cls == "floating":
        insts = _candidate_brackets(state, comp)
        if prefer is not None:
            insts.sort(key=lambda i: 0 if (i.type_id, i.anchor) ==
                       (prefer.type_id, prefer.anchor) else 1)
        for rank, inst in enumerate(insts):
            w = set(inst.edges)
            need = [e for e in unclaimed if e not in w]
            need += [e for e in shared if e not in w]
            excess = [e for e in _neighbour_excess(state, comps, comp, inst.edges)
                      if e not in need]
            if excess:
                cands.append(_Candidate("", "floating", inst.edges, inst, None,
                                        need + excess,
                                        (0, len(need) + len(excess), rank)))
                cands.append(_Candidate("", "floating", inst.edges, inst, None,
                                        need, (3, len(need), rank)))
            else:
                cands.append(_Candidate("", "floating", inst.edges, inst, None,
                                        need, (0, len(need), rank)))
        # ad hoc window: keep level-safe unclaimed edges open and shelter
        # shared blue seals so they owe no double mark
        spread = S.HEX_WINDOW_SPREAD if state.is_hex else S.TRI_WINDOW_SPREAD
        maxw = 6 if state.is_hex else 3
        cap = min(breaker_level(state, u) for u in comp.nodes) + spread
        pool = []
        for e in unclaimed + [e for e in shared if e not in unclaimed]:
            far = S._edge_far_node(state, e, comp.nodes)
            if far is None or breaker_level(state, far) > cap:
                continue
            pool.append(e)
        window = tuple(pool[:maxw])
        need = [e for e in unclaimed if e not in set(window)]
        need += [e for e in shared if e not in set(window) and e not in need]
        excess = [e for e in _neighbour_excess(state, comps, comp, window)
                  if e not in need]
        if excess:
            cands.append(_Candidate("", "floating", window, None, None,
                                    need + excess, (1, len(need) + len(excess), 0)))
            cands.append(_Candidate("", "floating", window, None, None,
                                    need, (4, len(need), 0)))
        else:
            cands.append(_Candidate("", "floating", window, None, None,
                                    need, (1, len(need), 0)))
    else:
        for rank, g in enumerate(_gate_candidates(state, comps, comp)):
            plugged = _corridor_plug(state, comps, comp, {g}, certs)
            if plugged is None:
                continue
            cands.append(_Candidate("", comp.cls, (g,), None, g,
                                    plugged, (0, len(plugged), rank)))
        plugged = _corridor_plug(state, comps, comp, set(), certs)
        if plugged is not None:
            cands.append(_Candidate("", "extra", (), None, None,
                                    plugged, (1, len(plugged), 0)))
        # windowed arch: a top/bottom component may keep bracket-sized
        # openings anywhere that does not face the opposite side; growth
        # through them is paid for turn by turn
        if comp.root is not None:
            maxw = 6 if state.is_hex else 3
            pool = []
            for e in unclaimed:
                far = S._edge_far_node(state, e, comp.nodes)
                if far is None or _opposite_far(state, comps, comp, e):
                    continue
                if not S.arch_slot_level_ok(state, comp, breaker_level(state, far)):
                    continue
                pool.append(e)
            window = tuple(pool[:maxw])
            if window:
                plugged = _corridor_plug(state, comps, comp, set(window), certs)
                if plugged is not None:
                    excess = [e for e in _neighbour_excess(state, comps, comp, window)
                              if e not in plugged]
                    if excess:
                        cands.append(_Candidate("", comp.cls, window, None, None,
                                                plugged + excess,
                                                (2, len(plugged) + len(excess), 0)))
                        cands.append(_Candidate("", comp.cls, window, None, None,
                                                plugged, (4, len(plugged), 0)))
                    else:
                        cands.append(_Candidate("", comp.cls, window, None, None,
                                                plugged, (2, len(plugged), 0)))
    cands.sort(key=lambda c: c.rank)
    return cands


def _finish_cert(state_after_claims: GameState, comp_nodes, cand: _Candidate) -> Certificate:
    if cand.bracket is not None:
        window = ()
    else:
        window = tuple(e for e in cand.window if e != cand.gate)
    return Certificate(
        variant=cand.cert_variant,
        path_edges=_blue_border(state_after_claims, comp_nodes),
        bracket=cand.bracket,
        window=window,
        gate=cand.gate,
    )


def reseal_component(state: GameState, certs: CertMap, comp: Component,
                     budget: int, prefer=None, comps=None) -> tuple[list[int], Certificate] | None:
    """Claims plus certificate restoring this component's security."""
    if comps is None:
        comps = red_components(state)
    q = max(1, state.rules.q)
    for cand in _reseal_candidates(state, comps, comp, certs, prefer=prefer):
        claims = cand.claims
        if len(claims) > budget:
            continue
        trial = _apply_marks(state, blue=claims)
        cert = _finish_cert(trial, comp.nodes, cand)
        if S.check_component(trial, comp, cert, comps, certs):
            continue
        if G.min_completion_cost(trial) <= q:
            continue  # the caging lemma's bound is the true gate
        return claims, cert
    return None


# -- the case machine ----------------------------------------------------------


def secure_response(state: GameState, certs: CertMap, red_edge: int) -> StrategyResponse:
    """Respond to a single legal red claim, keeping the grid secure.

    ``state`` is the position before the red claim.  The returned response
    carries the blue claims (exactly 1+b or 4+b of them whenever the board
    can supply that many), the updated certificate map, and a case tag.
    """
    comps0 = red_components(state)
    a, b_node = breaker_ends(state, red_edge)
    ca, cb = component_of(comps0, a), component_of(comps0, b_node)
    if ca is None and cb is not None:
        a, b_node, ca, cb = b_node, a, cb, ca
    pre = state.marks[red_edge]
    b = {UNCLAIMED: 0, BLUE: 1, BLUE_DOUBLE: 2}[pre]
    budget = (4 if state.is_hex else 1) + b

    after = _apply_marks(state, red=[red_edge])
    comps1 = red_components(after)
    target = component_of(comps1, a) or component_of(comps1, b_node)
    if target is None:
        raise NoSecuringMove(f"red edge {red_edge} created no component")

    new_certs = {k: v for k, v in certs.items()}
    for old in (ca, cb):
        if old is not None:
            new_certs.pop(old.nodes, None)

    tag, prefer = _classify(state, certs, red_edge, pre, ca, cb, a, b_node, target)

    # Case 2a: the old certificate may survive the claim unchanged.
    if ca is not None and cb is None and pre == UNCLAIMED and ca.cls in ("top", "bottom"):
        old_cert = certs.get(ca.nodes)
        if old_cert is not None and red_edge not in old_cert.window_edges():
            kept = replace(old_cert, path_edges=_blue_border(after, target.nodes))
            if not S.check_component(after, target, kept, comps1, new_certs):
                doubles = _double_claims(after, target, new_certs,
                                         set(kept.window_edges()), comps1)
                if len(doubles) <= budget:
                    claims = _pad(doubles, budget, after,
                                  new_certs | {target.nodes: kept})
                    done = _apply_marks(after, blue=claims)
                    new_certs[target.nodes] = replace(
                        kept, path_edges=_blue_border(done, target.nodes))
                    return StrategyResponse(claims, new_certs,
                                            f"{_fam(state)}/case2a", done)

    result = reseal_component(after, new_certs, target, budget,
                              prefer=prefer, comps=comps1)
    if result is None:
        raise NoSecuringMove(
            f"no certificate within budget {budget} for component "
            f"{sorted(target.nodes)} after edge {red_edge}")
    claims, cert = result
    claims = _pad(claims, budget, after, new_certs | {target.nodes: cert})
    done = _apply_marks(after, blue=claims)
    cert = replace(cert, path_edges=_blue_border(done, target.nodes))
    new_certs[target.nodes] = cert
    return StrategyResponse(claims, new_certs, tag, done)


def _fam(state: GameState) -> str:
    return "hex" if state.is_hex else "tri"


def _pad(claims: list[int], budget: int, after: GameState, certs: CertMap) -> list[int]:
    claims = list(claims)
    sim = _apply_marks(after, blue=claims)
    avoid = _avoid_for_free(sim, certs) | set(claims)
    while len(claims) < budget:
        f = free_edge(sim, avoid, certs)
        if f is None:
            break
        claims.append(f)
        avoid.add(f)
        sim = _apply_marks(sim, blue=[f])
    return claims


def _classify(state, certs, e, pre, ca, cb, a, b_node, target):
    """Case tag per the published case analysis, plus a window preference."""
    fam = _fam(state)
    if ca is None and cb is None:
        return _classify_case1(state, e, a, b_node, target)
    if ca is not None and cb is None:
        cert = certs.get(ca.nodes)
        wedges = cert.window_edges() if cert else ()
        if pre in (BLUE, BLUE_DOUBLE):
            return f"{fam}/case2b", (cert.bracket if cert else None)
        if cert and cert.gate is not None and e == cert.gate:
            sub = _case2c_sub(state, ca, b_node)
            return f"{fam}/case2c-{sub}", None
        if cert and e in wedges:
            if not state.is_hex and cert.bracket is not None:
                idx = cert.bracket.edges.index(e)
                pref = _case2d_tri_table(state, cert.bracket, idx)
                return f"{fam}/case2d-t{cert.bracket.type_id}-e{idx + 1}", pref
            return f"{fam}/case2d", None
        if state.is_hex and a == ca.root:
            return f"{fam}/case-root-extend", None
        return f"{fam}/case2-generated", (cert.bracket if cert else None)
    # both endpoints in components
    c1, c2 = ca, cb
    cert1, cert2 = certs.get(c1.nodes), certs.get(c2.nodes)
    in_p1 = cert1 is not None and e in cert1.path_edges
    in_p2 = cert2 is not None and e in cert2.path_edges
    in_b1 = cert1 is not None and e in cert1.window_edges() and cert1.variant == "floating"
    in_b2 = cert2 is not None and e in cert2.window_edges() and cert2.variant == "floating"
    tb = {"top", "bottom"}
    if c1.cls in tb or c2.cls in tb:
        ctb, cfl = (c1, c2) if c1.cls in tb else (c2, c1)
        cert_tb, cert_fl = certs.get(ctb.nodes), certs.get(cfl.nodes)
        if cert_tb and cert_tb.gate == e:
            return f"{fam}/case3a-gate", None
        return f"{fam}/case3a-path", None
    if in_p1 and in_p2:
        pref = cert2.bracket if cert2 else None
        return f"{fam}/case3b-pp", pref
    if (in_p1 and in_b2) or (in_p2 and in_b1):
        keep = cert1 if in_b2 else cert2
        return f"{fam}/case3b-pb", (keep.bracket if keep else None)
    if in_b1 and in_b2 and not state.is_hex:
        t1 = cert1.bracket.type_id if cert1.bracket else 0
        t2 = cert2.bracket.type_id if cert2.bracket else 0
        lo, hi = sorted((t1, t2))
        pref = _case3b_tri_table(state, cert1, cert2, e)
        suffix = _case3b_suffix(cert1, cert2, e)
        return f"{fam}/case3b-t{lo}t{hi}{suffix}", pref
    if in_b1 and in_b2:
        return f"{fam}/case3b-bb", None
    return f"{fam}/case3-generated", None


def _case2c_sub(state: GameState, comp: Component, v2: int) -> str:
    lvl = breaker_level(state, v2)
    if state.is_hex:
        return "extra"
    n = state.topo.n
    hi = 2 * n - 1 if comp.cls == "top" else 2
    return "extra" if lvl == hi else "regate"


def _case2d_tri_table(state: GameState, bracket: BR.BracketInstance, idx: int):
    """The published replacement brackets for an attacked type-1 bracket."""
    if bracket.type_id != 1:
        return None
    ax, ay = bracket.anchor
    if idx == 0:
        return _instance(state, 4, (ax - 4, ay))
    if idx == 1:
        return _instance(state, 7, (ax - 2, ay - 2))
    return _instance(state, 5, (ax - 2, ay - 2))


def _case3b_suffix(cert1, cert2, e) -> str:
    b1, b2 = cert1.bracket, cert2.bracket
    if not b1 or not b2 or {b1.type_id, b2.type_id} != {1, 7}:
        return ""
    t7 = b1 if b1.type_id == 7 else b2
    return "-a" if e == t7.edges[1] else "-b"


def _case3b_tri_table(state: GameState, cert1, cert2, e):
    """Published merge table for two attacked brackets, type 1 against
    types 1, 3, 4, 6, 7, 8.  Returns the replacement bracket to prefer."""
    b1, b2 = cert1.bracket, cert2.bracket
    if b1 is None or b2 is None:
        return None
    if b1.type_id > b2.type_id or (b1.type_id == b2.type_id and b1.anchor > b2.anchor):
        b1, b2 = b2, b1
    t1 = b1 if b1.type_id == 1 else b2 if b2.type_id == 1 else None
    other = b2 if t1 is b1 else b1
    if t1 is None:
        return None
    ax, ay = t1.anchor
    o = other.type_id
    if o == 1:
        left = t1 if t1.anchor < other.anchor else other
        return _instance(state, 6, (left.anchor[0] - 2, left.anchor[1] - 2))
    if o == 3:
        return _instance(state, 4, (ax - 4, ay))
    if o == 4:
        return _instance(state, 6, (ax - 6, ay - 2))
    if o == 6:
        return _instance(state, 6, (ax - 6, ay - 2))
    if o == 7:
        if e == other.edges[1]:
            return _instance(state, 4, (ax - 4, ay))
        return _instance(state, 8, (ax - 6, ay - 2))
    if o == 8:
        return _instance(state, 4, (ax - 4, ay))
    return None


def _classify_case1(state: GameState, e: int, a, b_node, target):
    fam = _fam(state)
    bottom, top = class_roots(state)
    touch_bottom = bool(target.nodes & bottom)
    touch_top = bool(target.nodes & top)
    if not state.is_hex:
        t = state.topo
        if touch_bottom or touch_top:
            side = "bottom" if touch_bottom else "top"
            return f"tri/case1-{side}", None
        kinds = {t.duals[a].kind, t.duals[b_node].kind}
        if "left" in kinds or "right" in kinds:
            return "tri/case1-arc", None
        mx, my = t.midpoints[e]
        if mx % 2 == 0:  # horizontal edge: cage above with type 3
            return "tri/case1", _instance(state, 3, (mx - 2, my))
        lo = min(t.duals[a].pos, t.duals[b_node].pos)
        up_face, down_face = ((a, b_node) if t.duals[a].orientation == "up"
                              else (b_node, a))
        ux, uy = t.duals[up_face].pos
        dx, _ = t.duals[down_face].pos
        if dx > ux:   # backslash diagonal: type 1 anchored above-left
            return "tri/case1", _instance(state, 1, (ux, uy + 1))
        return "tri/case1", _instance(state, 2, (dx - 2, uy + 1))
    hx = state.topo
    if touch_bottom or touch_top:
        side = "bottom" if touch_bottom else "top"
        la = hx.vertical_label(a)
        lb = hx.vertical_label(b_node)
        extreme = 1 if side == "bottom" else 2 * hx.m - 1
        sub = "gate" if extreme in (la, lb) else "arch"
        return f"hex/case1-{side}-{sub}", None
    mid = hx.hedge_mid[e]
    if mid[0] % 2 == 1:  # horizontal hex edge: stacked bricks, type 1
        lowy = min(hx.brick[a][1], hx.brick[b_node][1])
        return "hex/case1", _instance(state, 1, (mid[0] - 1, lowy))
    # vertical hex edge: staggered bricks, type 2 or 3
    pa, pb = hx.brick[a], hx.brick[b_node]
    left, right = (pa, pb) if pa[0] < pb[0] else (pb, pa)
    if right[1] > left[1]:
        return "hex/case1", _instance(state, 2, (left[0] - 1, left[1]))
    return "hex/case1", _instance(state, 3, (right[0] - 1, right[1]))


# -- whole-turn response ---------------------------------------------------


def order_adversary_edges(state: GameState, edges: list[int]) -> list[int]:
    """Root-closer-first order within each resulting top/bottom component."""
    sim = _apply_marks(state, red=list(edges))
    comps = red_components(sim)
    inc = node_incidence(state)
    depth: dict[int, int] = {}
    for comp in comps:
        if comp.cls not in ("top", "bottom") or comp.root is None:
            continue
        dist = {comp.root: 0}
        queue = [comp.root]
        while queue:
            u = queue.pop(0)
            for e, w in inc[u]:
                if sim.marks[e] == RED and w in comp.nodes and w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        for e in edges:
            x, y = breaker_ends(state, e)
            if x in comp.nodes and y in comp.nodes:
                depth[e] = min(dist.get(x, 0), dist.get(y, 0))
    return sorted(edges, key=lambda e: (depth.get(e, -1), e))


def response_turn(state: GameState, certs: CertMap, red_edges: list[int]) -> ResponsePlan:
    """Answer a whole adversary turn, one edge at a time in safe order.

    The per-edge responses are simulated in secure-game fashion; a blue
    claim later overwritten by one of the adversary's own turn edges is
    simply banked and respent.  The materialized claim list has exactly
    one blue edge per red edge (four on the hexagonal board).
    """
    order = order_adversary_edges(state, list(red_edges))
    cur, cur_certs = state, dict(certs)
    claim_seq: list[int] = []
    tags: list[str] = []
    for e in order:
        try:
            resp = secure_response(cur, cur_certs, e)
        except NoSecuringMove:
            # Boundary shape outside the catalog's reach: drop the broken
            # certificate and respend the budget on free claims.  The
            # crossing-game wins are verified end to end regardless.
            b = {UNCLAIMED: 0, BLUE: 1, BLUE_DOUBLE: 2}[cur.marks[e]]
            budget = (4 if state.is_hex else 1) + b
            after = _apply_marks(cur, red=[e])
            comps1 = red_components(after)
            x, y = breaker_ends(cur, e)
            tgt = component_of(comps1, x) or component_of(comps1, y)
            for nodes in list(cur_certs):
                if tgt is not None and nodes & tgt.nodes:
                    cur_certs.pop(nodes)
            claims = _pad([], budget, after, cur_certs)
            resp = StrategyResponse(claims, cur_certs,
                                    f"{_fam(state)}/fallback-free",
                                    _apply_marks(after, blue=claims))
        claim_seq.extend(resp.blue_edges)
        tags.append(resp.case_tag)
        cur, cur_certs = resp.after, resp.new_certs
    per_red = 4 if state.is_hex else 1
    budget = per_red * len(red_edges)
    final: list[int] = []
    seen: dict[int, int] = {}
    for f in claim_seq:
        if cur.marks[f] == RED:
            continue  # banked: the adversary consumed it later in the turn
        seen[f] = seen.get(f, 0) + 1
        if seen[f] <= (2 if cur.marks[f] == BLUE_DOUBLE else 1):
            final.append(f)
    sim = cur
    avoid = _avoid_for_free(sim, cur_certs) | set(final)
    while len(final) < budget:
        f = free_edge(sim, avoid, cur_certs)
        if f is None:
            break
        final.append(f)
        avoid.add(f)
        sim = _apply_marks(sim, blue=[f])
        cur = sim
    return ResponsePlan(final[:budget], cur_certs, tags, cur)


# -- theorem adapters --------------------------------------------------------


class MakerEngine:
    """Crossing-game Maker on the triangular grid, valid for p >= q, n >= q+2."""

    def __init__(self, topo, p: int, q: int, unsafe: bool = False):
        if not unsafe:
            if p < q:
                raise PreconditionError(f"maker guarantee needs p >= q, got ({p},{q})")
            if topo.n < q + 2:
                raise PreconditionError(f"maker guarantee needs n >= q+2, got n={topo.n}")
        self.topo = topo
        self.p, self.q = p, q
        self.certs: CertMap = {}
        self.tags: list[str] = []

    def first_edges(self, state: GameState) -> list[int]:
        claims: list[int] = []
        sim = state
        for _ in range(min(self.p, state.count_unclaimed())):
            f = free_edge(sim, set(claims))
            if f is None:
                break
            claims.append(f)
            sim = _apply_marks(sim, blue=[f])
        return claims

    def respond(self, state: GameState, red_edges: list[int]) -> list[int]:
        """Blue claims answering the breaker's last turn; state precedes it."""
        plan = response_turn(state, self.certs, red_edges)
        claims = list(plan.blue_edges)
        self.certs = plan.new_certs
        self.tags.extend(plan.case_tags)
        sim = plan.after
        avoid = _avoid_for_free(sim, self.certs) | set(claims)
        extra = self.p - len(red_edges)
        for _ in range(max(0, extra)):
            f = free_edge(sim, avoid, self.certs)
            if f is None:
                break
            claims.append(f)
            avoid.add(f)
            sim = _apply_marks(sim, blue=[f])
        return claims


class BreakerEngine:
    """Crossing-game Breaker via the caging strategy on the dual grid.

    Valid for q >= 4p and m >= q+1.  The breaker plays blue in the
    hexagonal view; edge ids are shared with the triangular board, so
    claims transport back and forth without translation.
    """

    def __init__(self, topo, p: int, q: int, unsafe: bool = False):
        from .lattice import hexagonal

        if not unsafe:
            if q < 4 * p:
                raise PreconditionError(f"breaker guarantee needs q >= 4p, got ({p},{q})")
            if topo.m < q + 1:
                raise PreconditionError(f"breaker guarantee needs m >= q+1, got m={topo.m}")
        self.topo = topo
        self.hex = hexagonal(topo.n, topo.m)
        self.p, self.q = p, q
        self.certs: CertMap = {}
        self.tags: list[str] = []

    def _hex_state(self, marks: bytes) -> GameState:
        rules = G.GameRules(kind=G.Q4_RESPONSE, p=self.p, q=max(1, self.p))
        return GameState(topo=self.hex, rules=rules, marks=marks,
                         history=(), to_move="red")

    def respond(self, state: GameState, maker_edges: list[int]) -> list[int]:
        """Breaker's q claims answering maker's p; state precedes maker's turn.

        Maker's edges arrive as the hexagonal adversary's turn; the caging
        response supplies 4 claims per edge and the rest are free claims.
        """
        pre = bytearray(state.marks)
        for e in maker_edges:
            pre[e] = UNCLAIMED
        hx_state = self._hex_state(_swap_colors(bytes(pre)))
        plan = response_turn(hx_state, self.certs, list(maker_edges))
        self.certs = plan.new_certs
        self.tags.extend(plan.case_tags)
        claims = list(plan.blue_edges)
        sim = plan.after
        avoid = _avoid_for_free(sim, self.certs) | set(claims)
        while len(claims) < self.q:
            f = free_edge(sim, avoid, self.certs)
            if f is None:
                break
            claims.append(f)
            avoid.add(f)
            sim = _apply_marks(sim, blue=[f])
        return claims


def _swap_colors(marks: bytes) -> bytes:
    out = bytearray(len(marks))
    for i, v in enumerate(marks):
        if v == RED:
            out[i] = BLUE
        elif v in (BLUE, BLUE_DOUBLE):
            out[i] = RED
        # unclaimed stays
    return bytes(out)


def resecure_search(state: GameState, certs: CertMap, red_edge: int,
                    budget: int | None = None):
    """Search-only variant of the responder: no hand-table preferences.

    Used to cross-check the published tables; returns a StrategyResponse
    or None when no certificate exists within the budget.
    """
    pre = state.marks[red_edge]
    b = {UNCLAIMED: 0, BLUE: 1, BLUE_DOUBLE: 2}[pre]
    if budget is None:
        budget = (4 if state.is_hex else 1) + b
    after = _apply_marks(state, red=[red_edge])
    comps1 = red_components(after)
    x, y = breaker_ends(state, red_edge)
    target = component_of(comps1, x) or component_of(comps1, y)
    if target is None:
        return None
    new_certs = dict(certs)
    for nodes in list(new_certs):
        if nodes & target.nodes:
            new_certs.pop(nodes)
    got = reseal_component(after, new_certs, target, budget, comps=comps1)
    if got is None:
        return None
    claims, cert = got
    done = _apply_marks(after, blue=claims)
    cert = replace(cert, path_edges=_blue_border(done, target.nodes))
    new_certs[target.nodes] = cert
    return StrategyResponse(claims, new_certs, "generated", done)
