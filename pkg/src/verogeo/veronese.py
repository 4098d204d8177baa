"""The Veronese construction V(k, M0) over an incidence structure.

Points of V(k, M0) are the degree-k multisets over the base points; for
every base line B, every 0 < r <= k and every multiset e of degree k - r
there is a block {e + r*x : x in B}.  The leaf of e is e + (k-|e|)*S, a
copy of the base; exactly k leaves pass through each point, and two
distinct leaves share at most one point.

Blocks are materialized as point-index sets; a provenance table records
every generating triple (e, r, base line), which powers the configuration
classification without re-deriving decompositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .incidence import IncidenceStructure, is_partial_linear
from .multiset import (Multiset, enumerate_lower_multisets,
                       enumerate_multisets, scale, scale_point)


@dataclass
class VeroneseSpace:
    base: IncidenceStructure
    level: int
    structure: IncidenceStructure
    points: tuple[Multiset, ...]
    index: dict[Multiset, int]
    # block index -> tuple of (e, base_line_index); r is level - e.degree
    provenance: dict[int, tuple[tuple[Multiset, int], ...]]
    leaves: dict[Multiset, frozenset[int]]
    block_top: dict[int, Multiset]

    def point_of(self, f: Multiset) -> int:
        return self.index[f]

    def leaf_keys(self) -> list[Multiset]:
        return sorted(self.leaves, key=lambda e: e.sort_key())

    def leaf_translate(self, e: Multiset, x: int) -> int:
        """Index of e + (k-|e|)*x, the copy of base point x on leaf e."""
        return self.index[e + scale_point(self.level - e.degree, x)]

    def to_json(self) -> dict:
        return {"kind": "veronese", "level": self.level,
                "base": self.base.to_json(), "structure": self.structure.to_json()}


def build_veronese(base: IncidenceStructure, level: int,
                   require_pls: bool = True) -> VeroneseSpace:
    """Construct V(level, base); the base must be a PLS (floor >= 3).

    Blocks generated from different triples are merged by point-set
    equality, keeping all generators in the provenance table.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    if require_pls:
        ok, witness = is_partial_linear(base)
        if not ok:
            raise ValueError(f"base is not a partial linear space: {witness}")
    n = base.point_count
    points = tuple(enumerate_multisets(n, level))
    index = {f: i for i, f in enumerate(points)}

    raw: dict[frozenset[int], list[tuple[Multiset, int]]] = {}
    for r in range(1, level + 1):
        for e in enumerate_multisets(n, level - r):
            for li, line in enumerate(base.lines):
                block = frozenset(index[e + scale_point(r, x)] for x in sorted(line))
                raw.setdefault(block, []).append((e, li))
    blocks = sorted(raw, key=lambda b: tuple(sorted(b)))
    provenance = {bi: tuple(raw[b]) for bi, b in enumerate(blocks)}

    leaves: dict[Multiset, frozenset[int]] = {}
    for e in enumerate_lower_multisets(n, level):
        r = level - e.degree
        leaves[e] = frozenset(index[e + scale_point(r, x)] for x in range(n))

    block_top = {bi: provenance[bi][0][0] for bi in provenance}

    labels = {i: f for i, f in enumerate(points)}
    structure = IncidenceStructure(len(points), blocks, labels=labels, sort_lines=False)
    V = VeroneseSpace(base, level, structure, points, index, provenance,
                      leaves, block_top)
    if require_pls:
        ok, witness = is_partial_linear(structure)
        if not ok:
            raise AssertionError(f"Veronese space failed the PLS check: {witness}")
    return V


def parameters(v0: int, b0: int, r0: int, kappa0: int, k: int) -> tuple[int, int, int, int]:
    """(points, lines, point rank, line size) of V(k, M0) from base parameters."""
    if min(v0, b0, r0, kappa0, k) < 1:
        raise ValueError("parameters must be positive")
    v = math.comb(v0 + k - 1, k)
    b = math.comb(v0 + k - 1, k - 1) * b0
    return (v, b, k * r0, kappa0)


def leaf_count(v0: int, k: int) -> int:
    return math.comb(v0 + k - 1, k - 1)


# ---------------------------------------------------------------------------
# embeddings


def mu_embedding(V: VeroneseSpace, r: int) -> tuple[VeroneseSpace, list[int]]:
    """f -> r*f into V(r*level, base); verified to carry blocks to blocks.

    Needs the base to identify lines with their point sets (extensionality),
    which holds by representation here.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    target = build_veronese(V.base, r * V.level)
    mapping = [target.index[scale(f, r)] for f in V.points]
    _check_embedding(V, target, mapping)
    return target, mapping


def tau_embedding(V: VeroneseSpace, e: Multiset) -> tuple[VeroneseSpace, list[int]]:
    """f -> e + f into V(level + |e|, base); identity when e is empty."""
    target = build_veronese(V.base, V.level + e.degree) if e.degree else V
    mapping = [target.index[e + f] for f in V.points]
    _check_embedding(V, target, mapping)
    return target, mapping


def _check_embedding(V: VeroneseSpace, target: VeroneseSpace, mapping: list[int]) -> None:
    if len(set(mapping)) != len(mapping):
        raise AssertionError("embedding is not injective")
    target_blocks = set(target.structure.lines)
    for block in V.structure.lines:
        image = frozenset(mapping[q] for q in block)
        if image not in target_blocks:
            raise AssertionError("embedding does not carry a block to a block")


# ---------------------------------------------------------------------------
# leaves and block tops


def top_of_block(V: VeroneseSpace, block_index: int) -> Multiset:
    """The unique leaf containing the block."""
    if block_index not in V.block_top:
        raise KeyError(f"no block {block_index}")
    return V.block_top[block_index]


def leaf_adjacency_test(V: VeroneseSpace, point: int, block_index: int) -> bool:
    """A point adjacent to >= 3 points of a block must lie on its leaf.

    Returns the truth of that implication for the given pair.
    """
    adj = V.structure.adjacency()
    block = V.structure.lines[block_index]
    close = sum(1 for q in block if q != point and q in adj[point])
    if point in block:
        close += 1
    if close < 3:
        return True
    return point in V.leaves[V.block_top[block_index]]


def check_leaf_covering(V: VeroneseSpace) -> tuple[bool, Optional[tuple]]:
    """Exactly k leaves through every point, pairwise sharing at most one."""
    per_point = [0] * len(V.points)
    for leaf in V.leaves.values():
        for q in leaf:
            per_point[q] += 1
    for q, c in enumerate(per_point):
        if c != V.level:
            return False, ("leaf_count", q, c)
    keys = V.leaf_keys()
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if len(V.leaves[keys[i]] & V.leaves[keys[j]]) > 1:
                return False, ("leaf_overlap", str(keys[i]), str(keys[j]))
    return True, None


def leaf_substructure(V: VeroneseSpace, e: Multiset) -> IncidenceStructure:
    """The leaf of e with its internal blocks, on base point indexing.

    Isomorphic to the base under x -> e + (k-|e|)*x; the blocks inside the
    leaf are exactly those with top e.
    """
    r = V.level - e.degree
    lines = []
    for bi, top in V.block_top.items():
        if top == e:
            block = V.structure.lines[bi]
            back = []
            for q in block:
                f = V.points[q]
                # recover x from f = e + r*x
                diff = {pt: f.multiplicity(pt) - e.multiplicity(pt)
                        for pt in f.support() | e.support()}
                nonzero = {pt: m for pt, m in diff.items() if m}
                if len(nonzero) != 1 or list(nonzero.values())[0] != r:
                    raise AssertionError("block point is not a leaf translate")
                back.append(next(iter(nonzero)))
            lines.append(frozenset(back))
    return IncidenceStructure(V.base.point_count, lines)


def check_leaf_isomorphism(V: VeroneseSpace, e: Multiset) -> bool:
    """Leaf blocks pull back to exactly the base line family."""
    sub = leaf_substructure(V, e)
    return set(sub.lines) == set(V.base.lines)


def leaf_plane_family(V: VeroneseSpace,
                      base_planes: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    """Planes of V inside leaves: e + (k-|e|)*P for base planes P."""
    planes = set()
    for e in V.leaves:
        r = V.level - e.degree
        for P in base_planes:
            planes.add(frozenset(V.index[e + scale_point(r, x)] for x in P))
    return sorted(planes, key=lambda s: tuple(sorted(s)))


# ---------------------------------------------------------------------------
# restriction compatibility


def verify_restriction_points(base: IncidenceStructure, keep: Sequence[int],
                              k: int) -> bool:
    """V(k, base[keep]) equals the restriction of V(k, base) to multisets
    over keep, compared through the reindexing."""
    from .spaces import restriction
    sub, kept = restriction(base, keep)
    V_sub = build_veronese(sub, k, require_pls=False)
    V_full = build_veronese(base, k, require_pls=False)

    def lift(f: Multiset) -> Multiset:
        return Multiset(tuple(sorted((kept[q], m) for q, m in f.entries)))

    keep_set = frozenset(kept)
    inside = frozenset(i for i, f in enumerate(V_full.points)
                       if f.support() <= keep_set)
    restricted_lines = {frozenset(V_full.points[q] for q in block)
                        for block in V_full.structure.lines if block <= inside}
    sub_lines = {frozenset(lift(V_sub.points[q]) for q in block)
                 for block in V_sub.structure.lines}
    sub_points = {lift(f) for f in V_sub.points}
    full_points = {V_full.points[i] for i in inside}
    return sub_points == full_points and sub_lines == restricted_lines


def verify_line_monotonicity(smaller: IncidenceStructure,
                             larger: IncidenceStructure, k: int) -> bool:
    """Fewer base lines on the same points give a sub-family of blocks."""
    if smaller.point_count != larger.point_count:
        raise ValueError("structures must share their point set")
    if not set(smaller.lines) <= set(larger.lines):
        raise ValueError("line family is not contained in the larger one")
    V_small = build_veronese(smaller, k, require_pls=False)
    V_large = build_veronese(larger, k, require_pls=False)
    large = set(V_large.structure.lines)
    return all(b in large for b in V_small.structure.lines)
