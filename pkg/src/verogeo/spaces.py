"""Concrete finite geometries: PG(n,p), AG(n,p), symplectic and quadratic
polar spaces, restrictions, and affine reducts obtained by deleting a
hyperplane.

Every constructor labels points (coordinate tuples for PG/AG) and the
plane-family helpers export the planes that flappy and chain-connectivity
checks consume.  Point order is deterministic, and the symplectic polar
space reuses the projective point order so both live on one universe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from . import algebra
from .algebra import (BilinearForm, QuadraticForm, normalize_vector,
                      projective_points, vec_add, vec_scale)
from .incidence import IncidenceStructure, is_hyperplane


@dataclass
class ParallelStructure:
    """An incidence structure with a (pre)parallelism on its lines.

    parallel_classes partitions a subset of the line family (indices into
    base.lines); the affine flag records that every class covers the full
    point set (the Euclid axiom).
    """

    base: IncidenceStructure
    parallel_classes: tuple[tuple[int, ...], ...]
    affine: bool = False
    sub_pls_floor: bool = False

    def check_preparallelism(self) -> tuple[bool, Optional[tuple]]:
        """Classes nonempty with pairwise disjoint distinct lines."""
        for ci, cls in enumerate(self.parallel_classes):
            if not cls:
                return False, ("empty_class", ci)
            for x in range(len(cls)):
                for y in range(x + 1, len(cls)):
                    a, b = self.base.lines[cls[x]], self.base.lines[cls[y]]
                    if a != b and a & b:
                        return False, ("overlapping_parallels", ci, cls[x], cls[y])
        return True, None

    def check_euclid(self) -> tuple[bool, Optional[int]]:
        for ci, cls in enumerate(self.parallel_classes):
            covered = set()
            for li in cls:
                covered |= self.base.lines[li]
            if len(covered) != self.base.point_count:
                return False, ci
        return True, None

    def class_of(self) -> dict[int, int]:
        out = {}
        for ci, cls in enumerate(self.parallel_classes):
            for li in cls:
                out[li] = ci
        return out


# ---------------------------------------------------------------------------
# projective spaces


def projective_space(n: int, p: int) -> IncidenceStructure:
    """PG(n,p): normalized 1-spaces of GF(p)^(n+1), 2-spaces as lines."""
    if n < 1:
        raise ValueError("projective dimension must be at least 1")
    if not algebra.is_prime(p):
        raise ValueError(f"{p} is not prime")
    pts = projective_points(n + 1, p)
    index = {v: i for i, v in enumerate(pts)}
    lines = set()
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            line = frozenset(index[w] for w in algebra._line_points(pts[i], pts[j], p))
            lines.add(line)
    labels = {i: v for i, v in enumerate(pts)}
    return IncidenceStructure(len(pts), sorted(lines, key=lambda l: tuple(sorted(l))),
                              labels=labels)


def projective_hyperplanes(G: IncidenceStructure, p: int) -> list[frozenset[int]]:
    """Hyperplanes of PG from linear functionals; each is a point set."""
    pts = [G.labels[i] for i in range(G.point_count)]
    dim = len(pts[0])
    out = []
    for f in projective_points(dim, p):
        out.append(frozenset(i for i, v in enumerate(pts)
                             if sum(a * b for a, b in zip(f, v)) % p == 0))
    return sorted(set(out), key=lambda s: tuple(sorted(s)))


def projective_plane_family(G: IncidenceStructure, p: int) -> list[frozenset[int]]:
    """Point sets of the 3-dimensional vector subspaces (projective planes).

    Built by extending each line by an outside point; for PG(2,p) this is
    the whole point set.
    """
    pts = [G.labels[i] for i in range(G.point_count)]
    index = {v: i for i, v in enumerate(pts)}
    planes = set()
    for line in G.lines:
        rep = sorted(line)
        u, v = pts[rep[0]], pts[rep[1]]
        for w_idx in range(G.point_count):
            if w_idx in line:
                continue
            w = pts[w_idx]
            plane = set()
            for a, b, c in itertools.product(range(p), repeat=3):
                vec = tuple((a * x + b * y + c * z) % p for x, y, z in zip(u, v, w))
                if any(vec):
                    plane.add(index[normalize_vector(vec, p)])
            planes.add(frozenset(plane))
    return sorted(planes, key=lambda s: tuple(sorted(s)))


# ---------------------------------------------------------------------------
# affine spaces


def affine_space(n: int, p: int) -> ParallelStructure:
    """AG(n,p) with its natural parallelism (cosets of a common direction).

    p = 2 is rejected: 2-point lines sit below the line-size floor.
    """
    if n < 1:
        raise ValueError("affine dimension must be at least 1")
    if not algebra.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("GF(2) affine lines have 2 points, below the PLS floor")
    pts = sorted(itertools.product(range(p), repeat=n))
    index = {v: i for i, v in enumerate(pts)}
    directions = projective_points(n, p)
    lines = []
    classes = []
    for d in directions:
        seen: set[frozenset[int]] = set()
        cls = []
        for base in pts:
            line = frozenset(index[vec_add(base, vec_scale(t, d, p), p)]
                             for t in range(p))
            if line not in seen:
                seen.add(line)
                cls.append(line)
        classes.append(cls)
    flattened = [l for cls in classes for l in cls]
    order = sorted(range(len(flattened)), key=lambda i: tuple(sorted(flattened[i])))
    rank_of = {old: new for new, old in enumerate(order)}
    structure = IncidenceStructure(len(pts), [flattened[i] for i in order],
                                   labels={i: v for i, v in enumerate(pts)},
                                   sort_lines=False)
    class_tuples = []
    pos = 0
    for cls in classes:
        class_tuples.append(tuple(sorted(rank_of[pos + k] for k in range(len(cls)))))
        pos += len(cls)
    return ParallelStructure(structure, tuple(class_tuples), affine=True)


def affine_plane_family(A: ParallelStructure, p: int) -> list[frozenset[int]]:
    """Plane cosets of AG(n,p); the whole space when n = 2."""
    G = A.base
    pts = [G.labels[i] for i in range(G.point_count)]
    n = len(pts[0])
    if n < 2:
        return []
    if n == 2:
        return [frozenset(range(G.point_count))]
    index = {v: i for i, v in enumerate(pts)}
    dirs = projective_points(n, p)
    planes = set()
    for a_i in range(len(dirs)):
        for b_i in range(a_i + 1, len(dirs)):
            d1, d2 = dirs[a_i], dirs[b_i]
            span = set()
            for s, t in itertools.product(range(p), repeat=2):
                span.add(vec_add(vec_scale(s, d1, p), vec_scale(t, d2, p), p))
            if len(span) != p * p:
                continue
            for base in pts:
                planes.add(frozenset(index[vec_add(base, v, p)] for v in span))
    return sorted(planes, key=lambda s: tuple(sorted(s)))


# ---------------------------------------------------------------------------
# polar spaces


def polar_space_symplectic(xi: BilinearForm) -> IncidenceStructure:
    """All points of PG(n,p) with the totally isotropic lines of xi.

    Point order matches projective_space(n,p), so the polar space and the
    projective space share their universe.
    """
    if not algebra.is_symplectic(xi):
        raise ValueError("form is not symplectic (alternating)")
    if not algebra.is_nondegenerate(xi):
        raise ValueError("degenerate symplectic form rejected")
    p = xi.p
    G = projective_space(xi.dim - 1, p)
    pts = [G.labels[i] for i in range(G.point_count)]
    lines = []
    for line in G.lines:
        rep = sorted(line)
        u, v = pts[rep[0]], pts[rep[1]]
        if xi.evaluate(u, v) == 0:
            lines.append(line)
    return IncidenceStructure(G.point_count, lines, labels=dict(G.labels),
                              sort_lines=False)


def restriction(G: IncidenceStructure, S0: Sequence[int]
                ) -> tuple[IncidenceStructure, tuple[int, ...]]:
    """Substructure on S0 keeping exactly the lines fully inside S0.

    Points are reindexed densely; returns (structure, kept) with
    kept[new] = old.  An empty S0 yields the degenerate empty structure.
    """
    kept = tuple(sorted(set(S0)))
    new_of = {old: new for new, old in enumerate(kept)}
    keep_set = frozenset(kept)
    lines = [frozenset(new_of[q] for q in l) for l in G.lines if l <= keep_set]
    labels = None
    if G.labels is not None:
        labels = {new: G.labels.get(old, old) for new, old in enumerate(kept)}
    else:
        labels = {new: old for new, old in enumerate(kept)}
    return IncidenceStructure(len(kept), sorted(set(lines), key=lambda l: tuple(sorted(l))),
                              labels=labels, sort_lines=False), kept


def polar_space_quadratic(Q: QuadraticForm) -> tuple[IncidenceStructure, tuple[int, ...]]:
    """Restriction of PG to the quadric; requires the quadric to carry lines."""
    if not algebra.isotropic_index_at_least_2(Q):
        raise ValueError("quadric carries no lines: not a polar space")
    G = projective_space(Q.dim - 1, Q.p)
    on = [i for i in range(G.point_count) if Q.evaluate(G.labels[i]) == 0]
    return restriction(G, on)


def singular_plane_family(Q: QuadraticForm,
                          G: IncidenceStructure) -> list[frozenset[int]]:
    """Projective planes fully on the quadric, as point sets of G = PG."""
    p = Q.p
    pts = [G.labels[i] for i in range(G.point_count)]
    index = {v: i for i, v in enumerate(pts)}
    on = [i for i in range(G.point_count) if Q.evaluate(pts[i]) == 0]
    on_set = set(on)
    planes = set()
    sing_lines = [l for l in G.lines if l <= on_set]
    for line in sing_lines:
        rep = sorted(line)
        u, v = pts[rep[0]], pts[rep[1]]
        for w_idx in on:
            if w_idx in line:
                continue
            w = pts[w_idx]
            plane = set()
            ok = True
            for a, b, c in itertools.product(range(p), repeat=3):
                vec = tuple((a * x + b * y + c * z) % p for x, y, z in zip(u, v, w))
                if not any(vec):
                    continue
                nv = normalize_vector(vec, p)
                if Q.evaluate(nv) != 0:
                    ok = False
                    break
                plane.add(index[nv])
            if ok and len(plane) > len(line):
                planes.add(frozenset(plane))
    return sorted(planes, key=lambda s: tuple(sorted(s)))


# ---------------------------------------------------------------------------
# affine reducts of plain structures (affine polar spaces among them)


@dataclass
class AffineReductData:
    """Reduct of an incidence structure by a hyperplane trace.

    Lines are truncated; each keeps its parent line index and the unique
    deleted (infinite) point.  Parallel classes group truncated lines by
    infinite point.
    """

    structure: IncidenceStructure
    parallel: ParallelStructure
    kept: tuple[int, ...]
    parents: tuple[int, ...]
    infinite_points: tuple[int, ...]


def affine_reduct_of(G: IncidenceStructure, trace: Sequence[int]) -> AffineReductData:
    """Delete a verified hyperplane; induced parallelism by shared trace point.

    Every line not inside the trace must meet it in exactly one point (the
    1-or-all law for hyperplanes); truncated 2-point lines are allowed but
    flag the result as sub-PLS-floor.
    """
    trace_set = frozenset(trace)
    if not is_hyperplane(G, trace_set):
        raise ValueError("trace is not a hyperplane of the structure")
    kept = tuple(i for i in range(G.point_count) if i not in trace_set)
    new_of = {old: new for new, old in enumerate(kept)}
    lines = []
    parents = []
    infinites = []
    floor_broken = False
    for li, line in enumerate(G.lines):
        if line <= trace_set:
            continue
        deleted = line & trace_set
        if len(deleted) != 1:
            raise ValueError(f"line {li} meets the hyperplane in {len(deleted)} points")
        trunc = frozenset(new_of[q] for q in line - trace_set)
        if len(trunc) < 2:
            raise ValueError(f"line {li} keeps fewer than 2 points")
        if len(trunc) == 2:
            floor_broken = True
        lines.append(trunc)
        parents.append(li)
        infinites.append(next(iter(deleted)))
    order = sorted(range(len(lines)), key=lambda i: tuple(sorted(lines[i])))
    lines = [lines[i] for i in order]
    parents = tuple(parents[i] for i in order)
    infinites = tuple(infinites[i] for i in order)
    labels = {new: G.label(old) for new, old in enumerate(kept)}
    structure = IncidenceStructure(len(kept), lines, labels=labels, sort_lines=False)
    by_infinite: dict[int, list[int]] = {}
    for i, inf in enumerate(infinites):
        by_infinite.setdefault(inf, []).append(i)
    classes = tuple(tuple(v) for _, v in sorted(by_infinite.items()))
    parallel = ParallelStructure(structure, classes, affine=False,
                                 sub_pls_floor=floor_broken)
    return AffineReductData(structure, parallel, kept, parents, infinites)


def affine_polar_space(polar: IncidenceStructure, trace: Sequence[int]) -> AffineReductData:
    """Affine reduct of a polar space by a hyperplane trace."""
    return affine_reduct_of(polar, trace)
