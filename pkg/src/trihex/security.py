"""Security certificates and the secure-grid predicate.

A certificate cages one red component.  Its *window* is the only part of
the component's non-red boundary that the adversary may claim into: a
catalog bracket for a floating component, the single gate edge for a top
or bottom component, nothing at all for an extra-secure one.  Everything
else on the boundary must already be blue or be unclaimable under the
game's cycle/arch/join rules.

The checker enforces, per component:

* class match and unique root,
* window shape (catalog bracket or correctly placed gate) and the level
  bound that makes single-turn safety go through: crossing a window edge
  gains at most 2 dual-vertex levels (triangular) or 3 vertical labels
  (hexagonal) over the lowest caged face,
* the seal: no unclaimed boundary edge outside the window and the
  rule-sealed set,
* containment: flooding out of the component through unclaimed edges,
  with the window and rule-sealed edges as walls, never reaches the
  opposite boundary side or a component of the opposite class.

Near the grid's left/right arcs (triangular) the catalog cannot embed,
so a floating certificate may instead carry an ad hoc window of at most
bracket-many edges satisfying the same level bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import game
from .brackets import BracketInstance
from .game import (BLUE, BLUE_DOUBLE, RED, UNCLAIMED, Component, GameState,
                   arch_blocked_same_side, arch_or_join_blocked, border_edges,
                   breaker_ends, breaker_level, class_roots, component_of,
                   min_completion_witness, node_incidence, red_components)

TRI_WINDOW_SPREAD = 2
HEX_WINDOW_SPREAD = 3


@dataclass(frozen=True)
class Certificate:
    variant: str                     # "floating" | "top" | "bottom" | "extra"
    path_edges: frozenset[int]       # blue edges sealing the boundary
    bracket: BracketInstance | None = None
    window: tuple[int, ...] = ()     # ad hoc window (boundary-adjacent floats)
    gate: int | None = None

    def window_edges(self) -> tuple[int, ...]:
        if self.variant == "floating":
            return self.bracket.edges if self.bracket else self.window
        if self.variant in ("top", "bottom"):
            gate = (self.gate,) if self.gate is not None else ()
            return gate + self.window
        return ()

    def case_summary(self) -> str:
        if self.variant == "floating" and self.bracket:
            return self.bracket.label()
        if self.variant in ("top", "bottom"):
            return f"{self.variant} gate={self.gate}"
        return self.variant


CertMap = dict[frozenset[int], Certificate]


def _edge_far_node(state: GameState, e: int, nodes: frozenset[int]) -> int | None:
    a, b = breaker_ends(state, e)
    ina, inb = a in nodes, b in nodes
    if ina and not inb:
        return b
    if inb and not ina:
        return a
    return None


def _rule_sealed(state: GameState, comps, e: int) -> bool:
    """Edges red will never claim: cycle makers and same-side arches.

    Only the assumption-backed prohibitions count here.  A top-bottom
    join is forbidden in the secure game too, but it is exactly red's
    winning move in the response games, so a seal may never lean on it.
    """
    return arch_blocked_same_side(state, e, comps)


def check_component(state: GameState, comp: Component, cert: Certificate,
                    comps: list[Component] | None = None,
                    certs: "CertMap | None" = None) -> list[str]:
    """Every violated clause of the certificate, empty when secure.

    ``certs`` supplies the neighbours' certificates: an unclaimed edge
    shared with another component is an acceptable opening when it lies
    in that component's window, which is exactly the precondition of the
    published merge cases.
    """
    if comps is None:
        comps = red_components(state)
    out: list[str] = []
    spread_cap = HEX_WINDOW_SPREAD if state.is_hex else TRI_WINDOW_SPREAD
    max_window = 6 if state.is_hex else 3

    if cert.variant == "floating":
        if comp.cls != "floating":
            return [f"class mismatch: {comp.cls} component with floating certificate"]
    elif cert.variant in ("top", "bottom"):
        if comp.cls != cert.variant:
            return [f"class mismatch: {comp.cls} component with {cert.variant} certificate"]
        if comp.root is None:
            out.append("no unique root")
    elif cert.variant == "extra":
        if comp.cls not in ("top", "bottom"):
            return [f"class mismatch: {comp.cls} component cannot be extra-secure"]
    else:
        return [f"unknown certificate variant {cert.variant!r}"]

    border = border_edges(state, comp.nodes)
    window = cert.window_edges()

    for e in window:
        if state.marks[e] == RED:
            out.append(f"window edge {e} is red")
        if e not in border:
            out.append(f"window edge {e} is not on the component boundary")
    if len(window) > max_window:
        out.append(f"window has {len(window)} edges, limit {max_window}")

    if cert.variant == "floating" and window:
        low = min(breaker_level(state, u) for u in comp.nodes)
        cap = low + spread_cap
        for e in window:
            far = _edge_far_node(state, e, comp.nodes)
            if far is not None and breaker_level(state, far) > cap:
                out.append(f"window edge {e} exits at level {breaker_level(state, far)}, cap {cap}")

    if cert.variant in ("top", "bottom"):
        if cert.gate is not None:
            out.extend(_gate_position_faults(state, comp, cert))
        opposite = "bottom" if comp.cls == "top" else "top"
        bottom, top = class_roots(state)
        forbidden = bottom if comp.cls == "top" else top
        for e in window:
            if state.marks[e] != UNCLAIMED:
                continue
            far = _edge_far_node(state, e, comp.nodes)
            if far is None:
                continue
            other = component_of(comps, far)
            if (other is not None and other.cls == opposite) or \
                    (other is None and far in forbidden):
                out.append(f"window edge {e} opens toward the opposite side")
            elif e != cert.gate and not arch_slot_level_ok(
                    state, comp, breaker_level(state, far)):
                out.append(f"window edge {e} reaches too far toward the opposite side")

    if cert.variant == "floating":
        # strict seal: every unclaimed boundary edge sits in the window
        leaks = [e for e in border
                 if state.marks[e] == UNCLAIMED and e not in window]
        if leaks:
            out.append(f"unsealed boundary edges {sorted(leaks)[:6]}")
    else:
        leaks = arch_leaks(state, comps, comp, set(window))
        if leaks:
            out.append(f"arch leaks at edges {sorted(leaks)[:6]}")

    for e in cert.path_edges:
        if state.marks[e] not in (BLUE, BLUE_DOUBLE):
            out.append(f"securing path edge {e} is not blue")
            break
    return out


def arch_slot_level_ok(state: GameState, comp: Component, far_level: int) -> bool:
    """May a top/bottom window keep an opening whose far side sits at this
    level?  The cap keeps every crossing through the slot longer than one
    adversary turn: climbing costs at least one claim per two levels
    (labels) and the slot itself costs one more.
    """
    q = max(1, state.rules.q)
    if state.is_hex:
        top_lbl = 2 * state.topo.m - 1
        if comp.cls == "bottom":
            return far_level <= top_lbl - 2 * q
        return far_level >= 2 * q + 1
    top_lvl = 2 * state.topo.n
    if comp.cls == "bottom":
        return far_level <= top_lvl - 2 * q + 1
    return far_level >= 2 * q


def _gate_position_faults(state: GameState, comp: Component, cert: Certificate) -> list[str]:
    g = cert.gate
    if state.is_hex:
        hx = state.topo
        lbl = hx.vertical_label(comp.root)
        if lbl not in (1, 2 * hx.m - 1):
            return [f"gate certificate on a securing-row root {comp.root}"]
        mid = hx.hedge_mid[g]
        rx, _ = hx.brick[comp.root]
        want_y = 5 if cert.variant == "bottom" else 4 * hx.m - 5
        if mid[1] != want_y or mid[0] != rx + 1:
            return [f"gate {g} at {mid} not in canonical position for root {comp.root}"]
        return []
    t = state.topo
    mid = t.midpoints[g]
    root_pos = t.duals[comp.root].pos
    strip_y = 3 if cert.variant == "bottom" else 2 * t.n - 1
    if mid[1] != strip_y or mid[0] % 2 == 0:
        return [f"gate {g} at {mid} is not a diagonal in the gate strip"]
    if mid[0] <= root_pos[0]:
        return [f"gate {g} is not strictly right of the root"]
    return []


def free_regions(state: GameState, comps):
    """Connected regions of uncommitted nodes under unclaimed edges.

    Returns (region id per node or -1, per-region flags) where the flags
    record whether the region touches a bare bottom / top boundary node.
    Component nodes are opaque walls; blue edges are walls.
    """
    in_comp = set()
    for c in comps:
        in_comp |= c.nodes
    bottom, top = class_roots(state)
    inc = node_incidence(state)
    n = len(inc)
    region = [-1] * n
    flags: list[tuple[bool, bool]] = []
    for start in range(n):
        if region[start] != -1 or start in in_comp:
            continue
        rid = len(flags)
        region[start] = rid
        has_b = start in bottom
        has_t = start in top
        stack = [start]
        while stack:
            u = stack.pop()
            for e, w in inc[u]:
                if state.marks[e] != UNCLAIMED or w in in_comp or region[w] != -1:
                    continue
                region[w] = rid
                has_b = has_b or w in bottom
                has_t = has_t or w in top
                stack.append(w)
        flags.append((has_b, has_t))
    return region, flags


def _in_neighbour_window(state, comps, certs, comp, e) -> bool:
    if not certs:
        return False
    far = _edge_far_node(state, e, comp.nodes)
    if far is None:
        return False
    other = component_of(comps, far)
    if other is None:
        return False
    cert = certs.get(other.nodes)
    return cert is not None and e in cert.window_edges()


def arch_leaks(state: GameState, comps, comp: Component,
               window: set[int], certs=None) -> list[int]:
    """Body-boundary edges that break a top/bottom component's arch.

    The seal is per-edge and independent of every other certificate: an
    unclaimed boundary edge of the body (the component minus its root)
    must sit in the window or be unclaimable under the cycle/arch/join
    rules.  The root's own walls face the component's home side and any
    growth through them is re-secured on the following turn.
    """
    out = []
    for e in border_edges(state, comp.nodes):
        if state.marks[e] != UNCLAIMED or e in window:
            continue
        a, b = breaker_ends(state, e)
        near = a if a in comp.nodes else b
        if near == comp.root:
            continue
        if _rule_sealed(state, comps, e):
            continue
        out.append(e)
    return out


def check_grid(state: GameState, certs: CertMap) -> list[str]:
    """Secure-grid predicate: every component certified, doubles respected."""
    comps = red_components(state)
    out: list[str] = []
    for comp in comps:
        if comp.cls == "spanning":
            out.append("a component spans top to bottom")
            continue
        cert = certs.get(comp.nodes)
        if cert is None:
            out.append(f"component {sorted(comp.nodes)[:4]}... has no certificate")
            continue
        for fault in check_component(state, comp, cert, comps, certs):
            out.append(f"{cert.case_summary()}: {fault}")
    if state.rules.kind == game.SECURE:
        out.extend(shared_seal_faults(state, certs, comps))
    return out


def shared_seal_faults(state: GameState, certs: CertMap, comps) -> list[str]:
    """Blue edges sealing two distinct components must be blue doubles.

    An edge whose dual endpoints lie in different components carries both
    seals at once; if red overwrites it the responder must mend two
    boundaries, which the doubled mark's budget pays for.  Edges inside
    either component's window are exempt: they are not part of a path.
    """
    windows: dict[frozenset[int], set[int]] = {
        nodes: set(cert.window_edges()) for nodes, cert in certs.items()
    }
    out = []
    for e, mark in enumerate(state.marks):
        if mark != BLUE:
            continue
        a, b = breaker_ends(state, e)
        ca = component_of(comps, a)
        cb = component_of(comps, b)
        if ca is None or cb is None or ca is cb:
            continue
        if ca.cls != "floating" or cb.cls != "floating":
            continue  # conditions (i)-(iii) already bar red from taking it
        if e in windows.get(ca.nodes, ()) or e in windows.get(cb.nodes, ()):
            continue
        out.append(f"edge {e} seals two components but is not a blue double")
    return out


def single_turn_safety(state: GameState, q: int) -> tuple[str, list[int]]:
    """("safe", []) when no q-claim completion exists, else a witness set."""
    cost, witness = min_completion_witness(state)
    if cost > q:
        return "safe", []
    return "unsafe", witness


def level_bound_trace(state: GameState, path_edges: list[int]) -> dict:
    """Per-edge upper levels along a candidate bottom-top completion.

    Checks the inductive bound: level(k-th new edge's far end) <= 2k+1 on
    the triangular board, <= 3k+1 on the hexagonal one (label 1 start).
    """
    from .game import breaker_roots

    bottom, _ = breaker_roots(state)
    inc = node_incidence(state)
    reached = set(bottom)

    def close_red(frontier):
        stack = list(frontier)
        while stack:
            u = stack.pop()
            for e, w in inc[u]:
                if state.marks[e] == RED and w not in reached:
                    reached.add(w)
                    stack.append(w)

    close_red(reached)
    bound = (lambda k: 3 * k + 1) if state.is_hex else (lambda k: 2 * k + 1)
    levels, violations = [], []
    for k, e in enumerate(path_edges, start=1):
        a, b = breaker_ends(state, e)
        if a in reached and b in reached:
            far = max(a, b, key=lambda u: breaker_level(state, u))
        elif a in reached:
            far = b
        elif b in reached:
            far = a
        else:
            raise ValueError(f"edge {e} does not continue the path")
        lvl = breaker_level(state, far)
        levels.append(lvl)
        if lvl > bound(k):
            violations.append(k)
        reached.add(far)
        close_red([far])
    return {"levels": levels, "violations": violations}


def certificate_json(comp: Component, cert: Certificate, state: GameState) -> dict:
    mids = state.topo.hedge_mid if state.is_hex else state.topo.midpoints
    doc = {
        "component": sorted(comp.nodes),
        "class": comp.cls,
        "variant": cert.variant,
        "path_edges": sorted(list(mids[e]) for e in cert.path_edges),
    }
    if cert.bracket is not None:
        doc["bracket_type"] = cert.bracket.type_id
        doc["bracket_anchor"] = list(cert.bracket.anchor)
        doc["bracket_edges"] = [list(mids[e]) for e in cert.bracket.edges]
    if cert.window:
        doc["window_edges"] = [list(mids[e]) for e in cert.window]
    if cert.gate is not None:
        doc["gate_edge"] = list(mids[cert.gate])
    return doc
