"""Finite n-ary quasigroupoids and polygroupoids.

A structure has sorts 1..n: sort 1 is the vertex set, an element of
sort k >= 2 lives in the fiber over a strictly increasing k-tuple of
vertices, and its projection tuple pi(w) lists the k elements one sort
down obtained by deleting one vertex at a time (slot j deletes the j-th
vertex, so for sort 2 the tuple comes out reversed).  Q is an explicit
set of (n+1)-tuples of top-sort elements, stored extensionally so the
axiom checks can be exhaustive and serialization bit-exact.

Tuple slots follow the 1-based convention of the compatibility law
pi_i(w_j) = pi_{j-1}(w_i); in code both sides become 0-based indices,
which leaves the law as pi[ws[b]][a] == pi[ws[a]][b-1] for a < b.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property

from .algebra import FinAbelianGroup, GroupElement


class EmptyFiberError(ValueError):
    def __init__(self, config):
        self.config = config
        super().__init__(f"empty fiber over {config}")


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: bool
    witness: object = None

    def to_json_dict(self):
        return {"axiom": self.axiom, "passed": self.passed, "witness": self.witness}


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def merged_with(self, other):
        return AxiomReport(self.checks + other.checks)

    def to_json_dict(self):
        return {"passed": self.passed, "checks": [c.to_json_dict() for c in self.checks]}


def _config_key(config):
    return ",".join(str(v) for v in config)


def _parse_config_key(key):
    return tuple(int(v) for v in key.split(","))


@dataclass(frozen=True, eq=False)
class Polygroupoid:
    """n-ary quasigroupoid data; axiom conformance is checked separately
    so that planted violations remain representable."""

    arity: int
    vertices: tuple[int, ...]
    fibers: dict
    pi: dict
    q: frozenset

    @cached_property
    def config_of(self):
        out = {}
        for config, elems in self.fibers.items():
            for w in elems:
                out[w] = config
        return out

    @cached_property
    def top_configs(self):
        return tuple(sorted(c for c in self.fibers if len(c) == self.arity))

    def fiber(self, config):
        config = tuple(config)
        if len(config) == 1:
            return config if config[0] in self.vertices else ()
        return self.fibers.get(config, ())

    def sort_of(self, x):
        if isinstance(x, int):
            return 1
        return len(self.config_of[x])

    def pi_of(self, w):
        return self.pi[w]

    @cached_property
    def q_by_union(self):
        """Q-tuples grouped by the vertex set they sit over."""
        out = {}
        for tup in sorted(self.q):
            union = set()
            for w in tup:
                union.update(self.config_of[w])
            out.setdefault(tuple(sorted(union)), []).append(tup)
        return out

    @cached_property
    def fillers(self):
        """(slot, tuple-with-slot-removed) -> fillers, for horn lookups."""
        out = {}
        for tup in self.q:
            for slot in range(len(tup)):
                key = (slot, tup[:slot] + tup[slot + 1 :])
                out.setdefault(key, []).append(tup[slot])
        return out

    def fill_horn(self, slot, rest):
        """Unique Q-filler of the horn, or None; rest omits the slot."""
        found = self.fillers.get((slot, tuple(rest)))
        if found is None:
            return None
        if len(found) > 1:
            raise ValueError(f"horn has {len(found)} fillers; structure fails uniqueness")
        return found[0]

    def to_json_dict(self):
        return {
            "arity": self.arity,
            "vertices": list(self.vertices),
            "fibers": {_config_key(c): list(ws) for c, ws in sorted(self.fibers.items())},
            "pi": {w: list(t) for w, t in sorted(self.pi.items())},
            "Q": sorted(list(t) for t in self.q),
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def polygroupoid(arity, vertices, fibers, pi, q) -> Polygroupoid:
    """Validate basic well-formedness and canonicalize the storage.

    Only shape errors raise here (unknown ids, wrong tuple lengths,
    duplicate ids).  Violations of the quasigroupoid axioms are the
    business of check_axioms.
    """
    if arity < 2:
        raise ValueError("arity must be at least 2")
    vertices = tuple(sorted(set(int(v) for v in vertices)))
    vertex_set = set(vertices)
    canon_fibers = {}
    seen = set()
    for config, elems in fibers.items():
        config = tuple(config)
        if not 2 <= len(config) <= arity:
            raise ValueError(f"fiber config {config} has size outside [2, arity]")
        if list(config) != sorted(set(config)) or not set(config) <= vertex_set:
            raise ValueError(f"bad fiber config {config}")
        elems = tuple(sorted(str(w) for w in elems))
        for w in elems:
            if w in seen:
                raise ValueError(f"duplicate element id {w!r}")
            seen.add(w)
        canon_fibers[config] = elems
    config_of = {w: c for c, ws in canon_fibers.items() for w in ws}
    canon_pi = {}
    for w in sorted(config_of):
        if w not in pi:
            raise ValueError(f"missing projection tuple for {w!r}")
        k = len(config_of[w])
        tup = tuple(pi[w])
        if len(tup) != k:
            raise ValueError(f"pi({w!r}) must have length {k}")
        for x in tup:
            if isinstance(x, int):
                if k != 2 or x not in vertex_set:
                    raise ValueError(f"pi({w!r}) refers to unknown vertex {x}")
            elif x not in config_of or len(config_of[x]) != k - 1:
                raise ValueError(f"pi({w!r}) refers to {x!r}, not an element one sort down")
        canon_pi[w] = tup
    if set(pi) - set(canon_pi):
        raise ValueError("pi defined on unknown elements")
    canon_q = set()
    for tup in q:
        tup = tuple(tup)
        if len(tup) != arity + 1:
            raise ValueError("Q tuples must have length arity + 1")
        for w in tup:
            if w not in config_of or len(config_of[w]) != arity:
                raise ValueError(f"Q refers to {w!r}, not a top-sort element")
        canon_q.add(tup)
    return Polygroupoid(arity, vertices, canon_fibers, canon_pi, frozenset(canon_q))


def from_json_dict(d) -> Polygroupoid:
    return polygroupoid(
        d["arity"],
        d["vertices"],
        {_parse_config_key(k): v for k, v in d["fibers"].items()},
        {w: tuple(t) for w, t in d["pi"].items()},
        [tuple(t) for t in d["Q"]],
    )


def from_json(text) -> Polygroupoid:
    return from_json_dict(json.loads(text))


def _pairwise_ok(h, ws, a, b):
    """Compatibility identity between 0-based slots a < b of a tuple of
    sort-k elements; for k = 1 it degenerates to distinctness."""
    wa, wb = ws[a], ws[b]
    if isinstance(wa, int) or isinstance(wb, int):
        return wa != wb
    return h.pi[wb][a] == h.pi[wa][b - 1]


def is_compatible(h: Polygroupoid, ws) -> bool:
    """Full compatibility of a (k+1)-tuple of sort-k elements."""
    ws = tuple(ws)
    sorts = {h.sort_of(w) for w in ws}
    if len(sorts) != 1:
        raise ValueError("mixed sorts in compatibility check")
    k = sorts.pop()
    if len(ws) != k + 1:
        raise ValueError(f"expected a {k + 1}-tuple of sort-{k} elements")
    if k == 1:
        return len(set(ws)) == len(ws)
    return all(_pairwise_ok(h, ws, a, b) for a in range(k) for b in range(a + 1, k + 1))


def is_partially_compatible(h: Polygroupoid, ws) -> bool:
    """Compatibility with one deleted slot, marked None in the tuple."""
    ws = tuple(ws)
    gaps = [i for i, w in enumerate(ws) if w is None]
    if len(gaps) != 1:
        raise ValueError("exactly one slot must be None")
    gap = gaps[0]
    present = [w for w in ws if w is not None]
    sorts = {h.sort_of(w) for w in present}
    if len(sorts) != 1:
        raise ValueError("mixed sorts in compatibility check")
    k = sorts.pop()
    if len(ws) != k + 1:
        raise ValueError(f"expected a {k + 1}-tuple of sort-{k} elements")
    if k == 1:
        return len(set(present)) == len(present)
    return all(
        _pairwise_ok(h, ws, a, b)
        for a in range(k)
        for b in range(a + 1, k + 1)
        if a != gap and b != gap
    )


def _expected_face_config(config, j):
    return config[:j] + config[j + 1 :]


def check_axioms(h: Polygroupoid) -> AxiomReport:
    """Exhaustive verification of coherence, Q-compatibility, horn
    uniqueness and local finiteness.  Failures carry a witness."""
    checks = []

    coherence_witness = None
    for w in sorted(h.config_of):
        config = h.config_of[w]
        k = len(config)
        tup = h.pi[w]
        for j in range(k):
            expected = _expected_face_config(config, j)
            x = tup[j]
            actual = (x,) if isinstance(x, int) else h.config_of[x]
            if actual != expected:
                coherence_witness = {
                    "element": w,
                    "slot": j + 1,
                    "expected_config": list(expected),
                    "actual_config": list(actual),
                }
                break
        if coherence_witness:
            break
        if not is_compatible(h, tup):
            coherence_witness = {"element": w, "pi": list(tup), "reason": "pi tuple incompatible"}
            break
    checks.append(AxiomCheck("coherence", coherence_witness is None, coherence_witness))

    q_witness = None
    for tup in sorted(h.q):
        if not is_compatible(h, tup):
            q_witness = {"tuple": list(tup)}
            break
    checks.append(AxiomCheck("q-compatibility", q_witness is None, q_witness))

    horn_witness = None
    for (slot, rest), found in sorted(h.fillers.items()):
        if len(found) > 1:
            first = rest[:slot] + (found[0],) + rest[slot:]
            second = rest[:slot] + (found[1],) + rest[slot:]
            horn_witness = {"first": list(first), "second": list(second), "slot": slot + 1}
            break
    checks.append(AxiomCheck("horn-uniqueness", horn_witness is None, horn_witness))

    # fibers are stored extensionally, so finiteness cannot fail; the
    # check records the fiber census for the report.
    census = {_config_key(c): len(ws) for c, ws in sorted(h.fibers.items())}
    checks.append(AxiomCheck("local-finiteness", True, {"fiber_sizes": census}))

    return AxiomReport(tuple(checks))


def _grid_cells(n):
    return list(itertools.combinations(range(n + 2), 2))


def _row_cells(n, i):
    """Cells of grid row i: slot k holds the pair {i, m}, m = k if k < i
    else k + 1."""
    out = []
    for k in range(n + 1):
        m = k if k < i else k + 1
        out.append((min(i, m), max(i, m)))
    return out


def check_associativity(h: Polygroupoid, c) -> AxiomReport:
    """Grid associativity over one (n+2)-tuple of vertices.

    Enumerates every assignment of fiber elements to the unordered
    pairs of c (depth-first, pruning on pairwise compatibility and on
    completed rows that must satisfy Q), and for each deleted row l
    requires: Q on the other n+1 rows forces Q on row l.
    """
    n = h.arity
    c = tuple(sorted(c))
    if len(c) != n + 2 or len(set(c)) != n + 2:
        raise ValueError("need n+2 distinct vertices")
    cells = _grid_cells(n)
    cell_config = {}
    cell_fiber = {}
    for cell in cells:
        config = tuple(v for idx, v in enumerate(c) if idx not in cell)
        cell_config[cell] = config
        fib = h.fiber(config)
        if not fib:
            raise EmptyFiberError(config)
        cell_fiber[cell] = fib
    rows = [_row_cells(n, i) for i in range(n + 2)]

    def row_tuple(assign, i):
        return tuple(assign[cell] for cell in rows[i])

    def run_for_deleted(ell):
        order = []
        seen = set()
        for i in range(n + 2):
            if i == ell:
                continue
            for cell in rows[i]:
                if cell not in seen:
                    seen.add(cell)
                    order.append(cell)
        # every cell touches at least one row other than ell
        assert len(order) == len(cells)
        position = {cell: pos for pos, cell in enumerate(order)}
        completes = {}
        for i in range(n + 2):
            if i == ell:
                continue
            completes.setdefault(max(position[x] for x in rows[i]), []).append(i)
        assign = {}

        def compatible_so_far(cell):
            for i in range(n + 2):
                if cell not in rows[i]:
                    continue
                row = rows[i]
                b = row.index(cell)
                for a in range(len(row)):
                    if a == b or row[a] not in assign:
                        continue
                    ws = [assign.get(x) for x in row]
                    lo, hi = min(a, b), max(a, b)
                    if not _pairwise_ok(h, ws, lo, hi):
                        return False
            return True

        def dfs(pos):
            if pos == len(order):
                tup = row_tuple(assign, ell)
                if is_compatible(h, tup) and tup not in h.q:
                    return {
                        "deleted_row": ell,
                        "cells": {f"{a},{b}": assign[(a, b)] for a, b in cells},
                        "failing_row": list(tup),
                    }
                return None
            cell = order[pos]
            for w in cell_fiber[cell]:
                assign[cell] = w
                if compatible_so_far(cell):
                    ok = True
                    for i in completes.get(pos, []):
                        tup = row_tuple(assign, i)
                        if tup not in h.q:
                            ok = False
                            break
                    if ok:
                        witness = dfs(pos + 1)
                        if witness:
                            return witness
                del assign[cell]
            return None

        return dfs(0)

    for ell in range(n + 2):
        witness = run_for_deleted(ell)
        if witness:
            return AxiomReport(
                (AxiomCheck(f"associativity@{_config_key(c)}", False, witness),)
            )
    return AxiomReport((AxiomCheck(f"associativity@{_config_key(c)}", True, None),))


def check_all_associativity(h: Polygroupoid) -> AxiomReport:
    """Associativity over every (n+2)-subset of the vertex set."""
    checks = []
    for c in itertools.combinations(h.vertices, h.arity + 2):
        checks.extend(check_associativity(h, c).checks)
    if not checks:
        checks.append(AxiomCheck("associativity", True, {"note": "no (n+2)-subset available"}))
    return AxiomReport(tuple(checks))


def _coords_key(elem: GroupElement):
    return ",".join(str(c) for c in elem.coords)


def standard_with_coordinates(group: FinAbelianGroup, vertices, arity):
    """The standard model over a finite abelian group, plus the map from
    top-sort element ids back to their group coordinates.

    Sorts below the top are singleton fibers; the fiber over each
    n-subset is a copy of the group; Q consists of the compatible
    tuples whose alternating coordinate sum vanishes.
    """
    n = arity
    if n < 2:
        raise ValueError("arity must be at least 2")
    if not group.is_finite():
        raise ValueError("standard model needs a finite group")
    vertices = tuple(sorted(set(int(v) for v in vertices)))
    if len(vertices) < n + 1:
        raise ValueError("need at least arity + 1 vertices")

    def lower_id(config):
        return f"p{len(config)}:{_config_key(config)}"

    fibers = {}
    pi = {}
    for k in range(2, n):
        for config in itertools.combinations(vertices, k):
            w = lower_id(config)
            fibers[config] = (w,)
            pi[w] = tuple(
                _expected_face_config(config, j)[0] if k == 2 else lower_id(_expected_face_config(config, j))
                for j in range(k)
            )
    coords = {}
    for config in itertools.combinations(vertices, n):
        elems = []
        below = tuple(
            _expected_face_config(config, j)[0] if n == 2 else lower_id(_expected_face_config(config, j))
            for j in range(n)
        )
        for g in group.elements():
            w = f"w:{_config_key(config)}:{_coords_key(g)}"
            elems.append(w)
            pi[w] = below
            coords[w] = g
        fibers[config] = tuple(sorted(elems))

    q = []
    for big in itertools.combinations(vertices, n + 1):
        faces = [tuple(v for v in big if v != big[j]) for j in range(n + 1)]
        free = list(itertools.product(*(group.elements() for _ in range(n))))
        for head in free:
            # alternating sum over 0-based slots must vanish; solve the last
            acc = group.alternating_sum(head)
            last = group.neg(acc) if n % 2 == 0 else acc
            tup = tuple(
                f"w:{_config_key(faces[j])}:{_coords_key(head[j] if j < n else last)}"
                for j in range(n + 1)
            )
            q.append(tup)
    h = polygroupoid(n, vertices, fibers, pi, q)
    return h, coords


def standard(group: FinAbelianGroup, vertices, arity) -> Polygroupoid:
    return standard_with_coordinates(group, vertices, arity)[0]


def scramble(h: Polygroupoid, seed) -> Polygroupoid:
    """Relabel every top-sort fiber by an independent seeded bijection,
    hiding whatever the element ids used to encode.  Axiom conformance
    is preserved; identical seeds give identical bytes."""
    rng = random.Random(seed)
    n = h.arity
    mapping = {}
    for config in sorted(c for c in h.fibers if len(c) == n):
        elems = list(h.fibers[config])
        perm = list(range(len(elems)))
        rng.shuffle(perm)
        for new_idx, old_idx in enumerate(perm):
            mapping[elems[old_idx]] = f"z:{_config_key(config)}:{new_idx}"
    fibers = {}
    pi = {}
    for config, elems in h.fibers.items():
        if len(config) == n:
            fibers[config] = tuple(sorted(mapping[w] for w in elems))
        else:
            fibers[config] = elems
    for w, tup in h.pi.items():
        pi[mapping.get(w, w)] = tup
    q = [tuple(mapping[w] for w in tup) for tup in h.q]
    return polygroupoid(n, h.vertices, fibers, pi, q)


@dataclass(frozen=True)
class InducedMap:
    """Sort-preserving bijection covering a vertex permutation."""

    vertex_map: dict
    elem_map: dict

    def apply(self, x):
        if isinstance(x, int):
            return self.vertex_map[x]
        return self.elem_map[x]

    def compose(self, other):
        """self after other."""
        return InducedMap(
            {v: self.vertex_map[w] for v, w in other.vertex_map.items()},
            {e: self.elem_map[f] for e, f in other.elem_map.items()},
        )

    def is_identity(self):
        return all(v == w for v, w in self.vertex_map.items()) and all(
            e == f for e, f in self.elem_map.items()
        )


@dataclass(frozen=True)
class CoverSearch:
    cover: InducedMap | None
    obstruction: tuple | None


def induced_automorphism(h: Polygroupoid, sigma) -> CoverSearch:
    """Search for a structure map covering the vertex permutation sigma:
    commuting with every pi, preserving Q, bijective fiber by fiber.

    Deterministic backtracking: elements are visited in sorted fiber
    order, candidate images tried in sorted order, and horn lookups
    propagate forced images.  Returns the first cover found, or the
    first obstructed fiber when none exists.
    """
    sigma = dict(sigma)
    if sorted(sigma) != list(h.vertices) or sorted(sigma.values()) != list(h.vertices):
        raise ValueError("sigma must be a permutation of the vertex set")
    n = h.arity

    def map_config(config):
        return tuple(sorted(sigma[v] for v in config))

    elem_map = {}
    # lower sorts first: pi-commuting pins candidates tightly
    for k in range(2, n):
        configs = sorted(c for c in h.fibers if len(c) == k)
        for config in configs:
            target = h.fiber(map_config(config))
            used = set()
            for w in h.fiber(config):
                mapped_pi = tuple(
                    sigma[x] if isinstance(x, int) else elem_map[x] for x in h.pi[w]
                )
                # slots permute with the vertex order of the image config
                image_cfg = map_config(config)
                perm = _slot_permutation(config, image_cfg, sigma)
                want = tuple(mapped_pi[perm.index(j)] for j in range(k))
                cands = [x for x in target if h.pi[x] == want and x not in used]
                if not cands:
                    return CoverSearch(None, config)
                elem_map[w] = cands[0]
                used.add(cands[0])

    top_configs = sorted(c for c in h.fibers if len(c) == n)
    order = [w for c in top_configs for w in h.fiber(c)]
    target_fiber = {}
    for c in top_configs:
        img = map_config(c)
        if len(h.fiber(img)) != len(h.fiber(c)):
            return CoverSearch(None, c)
        target_fiber[c] = h.fiber(img)

    expected_pi = {}
    for c in top_configs:
        image_cfg = map_config(c)
        perm = _slot_permutation(c, image_cfg, sigma)
        for w in h.fiber(c):
            mapped_pi = tuple(
                sigma[x] if isinstance(x, int) else elem_map[x] for x in h.pi[w]
            )
            expected_pi[w] = tuple(mapped_pi[perm.index(j)] for j in range(n))

    q_of_elem = {}
    for tup in h.q:
        for w in tup:
            q_of_elem.setdefault(w, []).append(tup)

    tuple_perm = {}

    def image_tuple(tup, partial):
        """Image of a Q-tuple under the partial map, slots permuted to
        the target vertex order; None entries where undecided."""
        if tup not in tuple_perm:
            union = sorted({v for w in tup for v in h.config_of[w]})
            image_union = sorted(sigma[v] for v in union)
            perm = [image_union.index(sigma[union[i]]) for i in range(len(union))]
            tuple_perm[tup] = perm
        perm = tuple_perm[tup]
        out = [None] * len(tup)
        for j, w in enumerate(tup):
            out[perm[j]] = partial.get(w)
        return out

    assign = {}

    def propagate(start):
        """Forced assignments via horns around newly mapped elements;
        unwinds its own trail and returns None on contradiction."""
        stack = [start]
        trail = []

        def fail():
            for x in trail:
                del assign[x]
            return None

        while stack:
            w = stack.pop()
            for tup in q_of_elem.get(w, ()):
                missing = [x for x in tup if x not in assign]
                if len(missing) != 1:
                    if not missing:
                        img = image_tuple(tup, assign)
                        if tuple(img) not in h.q:
                            return fail()
                    continue
                x = missing[0]
                img = image_tuple(tup, assign)
                gap = img.index(None)
                try:
                    filler = h.fill_horn(gap, [y for y in img if y is not None])
                except ValueError:
                    return fail()
                if filler is None:
                    return fail()
                if h.config_of[filler] != map_config(h.config_of[x]):
                    return fail()
                if any(assign.get(y) == filler for y in h.fiber(h.config_of[x])):
                    return fail()
                assign[x] = filler
                trail.append(x)
                stack.append(x)
        return trail

    def undo(trail):
        for x in trail:
            del assign[x]

    def dfs(idx):
        while idx < len(order) and order[idx] in assign:
            idx += 1
        if idx == len(order):
            return True
        w = order[idx]
        c = h.config_of[w]
        used = {assign[x] for x in h.fiber(c) if x in assign}
        for cand in target_fiber[c]:
            if cand in used or h.pi[cand] != expected_pi[w]:
                continue
            assign[w] = cand
            trail = propagate(w)
            if trail is not None and dfs(idx + 1):
                return True
            if trail is not None:
                undo(trail)
            del assign[w]
        return False

    if not dfs(0):
        blocked = next((h.config_of[w] for w in order if w not in assign), None)
        return CoverSearch(None, blocked)

    full = dict(elem_map)
    full.update(assign)
    cover = InducedMap(sigma, full)
    # final bidirectional Q check; bijectivity plus forward preservation
    # already imply it, but the verification is cheap
    for tup in h.q:
        if tuple(image_tuple(tup, full)) not in h.q:
            return CoverSearch(None, h.config_of[tup[0]])
    return CoverSearch(cover, None)


def _slot_permutation(config, image_cfg, sigma):
    """perm[j] = position in image_cfg of sigma(config[j])."""
    return [image_cfg.index(sigma[v]) for v in config]


def check_induced_coherence(h: Polygroupoid, sigmas) -> AxiomReport:
    """Composition coherence of the searched covers over the subgroup
    generated by the given permutations: the cover found for sigma*tau
    must equal cover(sigma) after cover(tau) on every element."""
    ident = tuple(sorted(h.vertices))

    def key(sig):
        return tuple(sig[v] for v in ident)

    found = {}
    frontier = [dict(zip(ident, ident))]
    found[key(frontier[0])] = induced_automorphism(h, frontier[0])
    gens = [dict(s) for s in sigmas]
    group = {key(frontier[0])}
    while frontier:
        sig = frontier.pop()
        for g in gens:
            comp = {v: g[sig[v]] for v in ident}
            if key(comp) not in group:
                group.add(key(comp))
                found[key(comp)] = induced_automorphism(h, comp)
                frontier.append(comp)
    for k, res in sorted(found.items()):
        if res.cover is None:
            return AxiomReport(
                (AxiomCheck("induced-coherence", False, {"missing_cover_for": list(k)}),)
            )
    perms = sorted(found)
    for ka in perms:
        for kb in perms:
            sig_a = dict(zip(ident, ka))
            sig_b = dict(zip(ident, kb))
            comp = {v: sig_a[sig_b[v]] for v in ident}
            lhs = found[key(comp)].cover
            rhs = found[ka].cover.compose(found[kb].cover)
            if lhs.elem_map != rhs.elem_map:
                bad = next(e for e in lhs.elem_map if lhs.elem_map[e] != rhs.elem_map[e])
                return AxiomReport(
                    (
                        AxiomCheck(
                            "induced-coherence",
                            False,
                            {"sigma": list(ka), "tau": list(kb), "element": bad},
                        ),
                    )
                )
    return AxiomReport((AxiomCheck("induced-coherence", True, {"subgroup_order": len(perms)}),))


def count_horn_fillers(h: Polygroupoid, ws):
    """Number of Q-completions of a partially compatible tuple; the gap
    is the None slot."""
    ws = tuple(ws)
    gap = ws.index(None)
    if not is_partially_compatible(h, ws):
        raise ValueError("tuple is not partially compatible")
    rest = tuple(w for w in ws if w is not None)
    return len(h.fillers.get((gap, rest), ()))


def check_horn_filling(h: Polygroupoid) -> AxiomReport:
    """Every partially compatible horn over an (n+1)-subset must have
    exactly one Q-filler.  Exhaustive."""
    n = h.arity
    for big in itertools.combinations(h.vertices, n + 1):
        faces = [tuple(v for v in big if v != big[j]) for j in range(n + 1)]
        fibs = [h.fiber(f) for f in faces]
        if any(not f for f in fibs):
            continue
        for gap in range(n + 1):
            pools = [fibs[j] for j in range(n + 1) if j != gap]
            for pick in itertools.product(*pools):
                ws = list(pick[:gap]) + [None] + list(pick[gap:])
                if not is_partially_compatible(h, ws):
                    continue
                count = count_horn_fillers(h, ws)
                if count != 1:
                    return AxiomReport(
                        (
                            AxiomCheck(
                                "horn-filling-count",
                                False,
                                {"horn": list(ws), "fillers": count},
                            ),
                        )
                    )
    return AxiomReport((AxiomCheck("horn-filling-count", True, None),))
