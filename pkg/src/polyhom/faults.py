"""Planted violations for fault-sensitivity testing.

Each helper takes a healthy structure and returns a tampered copy that
a specific check must reject with a re-checkable counterexample.
"""

from __future__ import annotations

from .polygroupoid import Polygroupoid, polygroupoid


def duplicate_horn(h: Polygroupoid) -> Polygroupoid:
    """Add a second filler to one horn: horn uniqueness must fail."""
    base = min(h.q)
    config = h.config_of[base[-1]]
    other = next(w for w in h.fiber(config) if w != base[-1])
    extra = base[:-1] + (other,)
    return polygroupoid(h.arity, h.vertices, h.fibers, h.pi, set(h.q) | {extra})


def shift_q(h: Polygroupoid, unions=None) -> Polygroupoid:
    """Replace Q over the chosen (n+1)-subsets by a parallel translate:
    drop each tuple and use its 'shift the last slot' variant instead.

    Horn uniqueness and compatibility survive, but the grid law breaks
    as soon as shifted and unshifted rows meet, so associativity checks
    must fail.  With unions=None every (n+1)-subset is shifted, which
    breaks associativity only for odd arity; for even arity shift a
    single subset.
    """
    targets = None if unions is None else {tuple(sorted(u)) for u in unions}
    new_q = set()
    for union, tuples in h.q_by_union.items():
        if targets is not None and union not in targets:
            new_q.update(tuples)
            continue
        fiber = h.fiber(h.config_of[tuples[0][-1]])
        if len(fiber) < 2:
            raise ValueError("cannot shift Q over a singleton fiber")
        succ = {fiber[i]: fiber[(i + 1) % len(fiber)] for i in range(len(fiber))}
        for tup in tuples:
            new_q.add(tup[:-1] + (succ[tup[-1]],))
    return polygroupoid(h.arity, h.vertices, h.fibers, h.pi, new_q)


def rewire_pi(h: Polygroupoid) -> Polygroupoid:
    """Point one projection entry at an element over the wrong config:
    coherence must fail."""
    top = min(c for c in h.fibers if len(c) == h.arity)
    w = h.fiber(top)[0]
    old = h.pi[w]
    if h.arity == 2:
        wrong = next(v for v in h.vertices if v != old[0])
    else:
        wrong = next(
            x
            for c in sorted(h.fibers)
            if len(c) == h.arity - 1
            for x in h.fiber(c)
            if x != old[0] and h.config_of[x] != h.config_of[old[0]]
        )
    pi = dict(h.pi)
    pi[w] = (wrong,) + old[1:]
    return polygroupoid(h.arity, h.vertices, h.fibers, pi, h.q)


def drop_q_tuple(h: Polygroupoid, union=None) -> Polygroupoid:
    """Remove one Q-tuple over the given (n+1)-subset; keeps horn
    uniqueness but breaks fiberwise Q-counts, so no vertex permutation
    moving that subset elsewhere can be covered."""
    if union is None:
        union = min(h.q_by_union)
    union = tuple(sorted(union))
    victim = min(h.q_by_union[union])
    return polygroupoid(h.arity, h.vertices, h.fibers, h.pi, set(h.q) - {victim})


def tamper_action(act):
    """Swap the images of two group elements on one fiber element: the
    action law must fail with a witness."""
    from .binding import ActionTable

    group = act.group
    if group.order() < 2:
        raise ValueError("cannot tamper the action of a trivial group")
    gammas = list(group.elements())
    a, b = gammas[0].coords, gammas[1].coords
    config = sorted(act.action)[0]
    table = {c: {w: dict(m) for w, m in ws.items()} for c, ws in act.action.items()}
    w = sorted(table[config])[0]
    table[config][w][a], table[config][w][b] = table[config][w][b], table[config][w][a]
    return ActionTable(group, table)


def tamper_rho(tower):
    """Swap two images inside one projection map of a tower; the tower
    checks or the induced-hom well-definedness must fail."""
    from .tower import PolyTower

    edge = sorted(tower.rho)[0]
    rho = {e: dict(m) for e, m in tower.rho.items()}
    m = rho[edge]
    lower = tower.nodes[edge[0]]
    by_fiber = {}
    for w, img in sorted(m.items()):
        by_fiber.setdefault(lower.config_of[img], []).append(w)
    ws = next(ws for ws in by_fiber.values() if len(ws) >= 2 and m[ws[0]] != m[ws[1]])
    m[ws[0]], m[ws[1]] = m[ws[1]], m[ws[0]]
    return PolyTower(tower.poset, tower.nodes, rho)
