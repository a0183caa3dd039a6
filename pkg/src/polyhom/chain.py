"""Simplex generators, integer chains, and boundary operators.

A generator carries a strictly increasing support and an opaque label;
two generators with the same support but different labels are parallel
cells.  A family fixes the face maps and is validated eagerly against
the simplicial identity, since everything downstream silently assumes
face-of-face coherence.  Chains are canonical sorted term lists, so
equality is structural and serialization is byte-stable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import IntMatrix, image_solve


@dataclass(frozen=True, order=True)
class SimplexGen:
    support: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        s = self.support
        if not s:
            raise ValueError("empty support")
        if any(not isinstance(v, int) or v < 0 for v in s):
            raise ValueError("support entries must be natural numbers")
        if any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
            raise ValueError("support must be strictly increasing")

    @property
    def dim(self):
        return len(self.support) - 1


class SimplexFamily:
    """Finite generator sets per dimension plus a face function.

    face(gen, i) must drop the i-th smallest support element, and the
    simplicial identity face(face(g, j), i) == face(face(g, i), j-1)
    for i < j is checked for every generator at construction.
    """

    def __init__(self, generators, face):
        gens = sorted(set(generators))
        by_dim = {}
        for g in gens:
            by_dim.setdefault(g.dim, []).append(g)
        self._by_dim = {d: tuple(gs) for d, gs in by_dim.items()}
        self._face = {}
        known = set(gens)
        for g in gens:
            for i in range(g.dim + 1):
                if g.dim == 0:
                    break
                f = face(g, i)
                expected = g.support[:i] + g.support[i + 1 :]
                if f.support != expected:
                    raise ValueError(f"face({g}, {i}) has support {f.support}, expected {expected}")
                if f not in known:
                    raise ValueError(f"face({g}, {i}) = {f} is not a generator of the family")
                self._face[(g, i)] = f
        for g in gens:
            if g.dim < 2:
                continue
            for j in range(g.dim + 1):
                for i in range(j):
                    left = self._face[(self._face[(g, j)], i)]
                    right = self._face[(self._face[(g, i)], j - 1)]
                    if left != right:
                        raise ValueError(
                            f"simplicial identity fails at {g}: "
                            f"face{j} then face{i} gives {left}, "
                            f"face{i} then face{j - 1} gives {right}"
                        )

    @property
    def dims(self):
        return sorted(self._by_dim)

    def generators(self, dim):
        return self._by_dim.get(dim, ())

    def face(self, gen, i):
        return self._face[(gen, i)]

    def __contains__(self, gen):
        return gen in self._by_dim.get(gen.dim, ())


def full_complex(vertices, top_dim, label=""):
    """Every subset of the vertex set of size up to top_dim + 1."""
    vs = sorted(set(vertices))
    gens = [
        SimplexGen(sup, label)
        for k in range(1, top_dim + 2)
        for sup in itertools.combinations(vs, k)
    ]
    return SimplexFamily(gens, lambda g, i: SimplexGen(g.support[:i] + g.support[i + 1 :], label))


@dataclass(frozen=True)
class Chain:
    """Integer combination of same-dimension generators, canonically
    sorted, zero coefficients dropped."""

    dim: int
    terms: tuple[tuple[SimplexGen, int], ...]

    def __post_init__(self):
        if any(c == 0 for _, c in self.terms):
            raise ValueError("zero coefficient in canonical chain")
        if any(g.dim != self.dim for g, _ in self.terms):
            raise ValueError("mixed dimensions in chain")
        gens = [g for g, _ in self.terms]
        if gens != sorted(gens) or len(set(gens)) != len(gens):
            raise ValueError("terms not in canonical order")

    def is_zero(self):
        return not self.terms

    def coefficient(self, gen):
        for g, c in self.terms:
            if g == gen:
                return c
        return 0

    def support(self):
        out = set()
        for g, _ in self.terms:
            out.update(g.support)
        return tuple(sorted(out))

    def __add__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("cannot add chains of different dimensions")
        acc = dict(self.terms)
        for g, c in other.terms:
            acc[g] = acc.get(g, 0) + c
        return chain(self.dim, acc)

    def __neg__(self):
        return Chain(self.dim, tuple((g, -c) for g, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return zero_chain(self.dim)
        return Chain(self.dim, tuple((g, k * c) for g, c in self.terms))


def chain(dim, terms) -> Chain:
    """Canonicalize a mapping or iterable of (generator, coefficient)."""
    acc = {}
    items = terms.items() if hasattr(terms, "items") else terms
    for g, c in items:
        acc[g] = acc.get(g, 0) + c
    return Chain(dim, tuple((g, c) for g, c in sorted(acc.items()) if c != 0))


def zero_chain(dim) -> Chain:
    return Chain(dim, ())


def gen_chain(gen) -> Chain:
    return Chain(gen.dim, ((gen, 1),))


def face_op(fam: SimplexFamily, c: Chain, i: int) -> Chain:
    """Linear extension of the family's i-th face map."""
    if i < 0 or i > c.dim:
        raise IndexError(f"face index {i} out of range for dimension {c.dim}")
    if c.dim == 0:
        raise ValueError("dimension 0 chains have no faces")
    return chain(c.dim - 1, [(fam.face(g, i), coef) for g, coef in c.terms])


def boundary(fam: SimplexFamily, c: Chain) -> Chain:
    """Alternating sum of the face maps."""
    if c.dim == 0:
        raise ValueError("boundary undefined in dimension 0")
    acc = zero_chain(c.dim - 1)
    for i in range(c.dim + 1):
        piece = face_op(fam, c, i)
        acc = acc + piece if i % 2 == 0 else acc - piece
    return acc


def boundary_matrix(fam: SimplexFamily, dim: int) -> IntMatrix:
    """Matrix of the boundary map out of the given dimension; rows are
    the (dim-1)-generators, columns the dim-generators, both sorted."""
    cols = fam.generators(dim)
    rows = fam.generators(dim - 1)
    row_index = {g: i for i, g in enumerate(rows)}
    out = [[0] * len(cols) for _ in rows]
    for j, g in enumerate(cols):
        for face_g, coef in boundary(fam, gen_chain(g)).terms:
            out[row_index[face_g]][j] = coef
    return IntMatrix.from_rows(out, len(cols))


def chain_vector(fam: SimplexFamily, c: Chain):
    return tuple(c.coefficient(g) for g in fam.generators(c.dim))


@dataclass(frozen=True)
class Classification:
    is_cycle: bool
    is_boundary: bool
    is_pocket: bool


def classify(fam: SimplexFamily, c: Chain, candidates) -> Classification:
    """Cycle, boundary, and pocket predicates for a chain.

    A boundary here means: in the integer image of the boundary matrix
    assembled from the given one-higher candidates.  A pocket is
    +-(f - g) for two generators with the same boundary.
    """
    if c.dim == 0:
        is_cycle = True
    else:
        is_cycle = boundary(fam, c).is_zero()

    cand = sorted(set(candidates))
    if any(h.dim != c.dim + 1 for h in cand):
        raise ValueError("candidates must live one dimension up")
    gens = fam.generators(c.dim)
    cols = [chain_vector(fam, boundary(fam, gen_chain(h))) for h in cand]
    mat = IntMatrix.from_rows(
        [[col[i] for col in cols] for i in range(len(gens))], len(cand)
    )
    target = chain_vector(fam, c)
    is_boundary = image_solve(mat, target) is not None

    is_pocket = False
    if len(c.terms) == 2:
        (f, cf), (g, cg) = c.terms
        if {cf, cg} == {1, -1} and c.dim >= 1:
            is_pocket = boundary(fam, gen_chain(f)) == boundary(fam, gen_chain(g))

    return Classification(is_cycle, is_boundary, is_pocket)


def chain_to_json_dict(c: Chain) -> dict:
    return {
        "dim": c.dim,
        "terms": [
            {"support": list(g.support), "label": g.label, "coef": coef}
            for g, coef in c.terms
        ],
    }


def chain_from_json_dict(d) -> Chain:
    return chain(
        d["dim"],
        [
            (SimplexGen(tuple(t["support"]), t["label"]), t["coef"])
            for t in d["terms"]
        ],
    )
