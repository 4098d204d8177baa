"""Hyperplanes of Veronese spaces.

Level 2 over a projective space: a symplectic quasi-correlation kappa
yields the point set H = union of x + kappa(x); its leaf trace function h
has h(x) = kappa(x) and h(0) = S, and H is verified (never assumed) to be
a hyperplane.  Choosing h(0) equal to a projective hyperplane not inside
the selfconjugate set destroys the subspace property, with an explicit
witness block.

Level k over a projective space: a k-linear alternating form eta yields
H = {q1 + ... + qk : eta vanishes}; the complement consists of k-subsets.

Polar spaces: intersecting a projective-Veronese hyperplane with the
polar point universe yields a hyperplane of the polar Veronese.

Exhaustive enumeration for level-2 Veronese spaces runs over leaf-trace
assignments: every hyperplane is determined by a symmetric choice of a
base hyperplane or the full set per leaf, with the double-leaf trace
forced to the selfconjugacy diagonal; each surviving assignment is then
checked honestly against the hyperplane definition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import incidence as inc
from .algebra import (AlternatingMultiForm, BilinearForm,
                      alternating_forms_up_to_scalar, is_nondegenerate,
                      is_nondegenerate_alternating, is_symplectic)
from .configs import FalsificationError
from .incidence import CapacityError, IncidenceStructure
from .multiset import EMPTY, Multiset, scale_point
from .veronese import VeroneseSpace

FULL = "full"


@dataclass
class VeroneseHyperplane:
    ambient: VeroneseSpace
    points: frozenset[int]
    h_function: dict[Multiset, object]  # leaf key -> frozenset of base points or FULL
    degenerate: bool = False
    source: str = ""

    def trace(self, e: Multiset):
        return self.h_function[e]

    def to_json(self) -> dict:
        h_json = {}
        for e, val in self.h_function.items():
            key = str(e.to_pairs())
            h_json[key] = FULL if val == FULL else sorted(val)
        return {"points": sorted(self.points), "h": h_json,
                "degenerate": self.degenerate, "source": self.source}


def extract_h_function(V: VeroneseSpace, H: Sequence[int]) -> dict[Multiset, object]:
    """Leaf traces h(e) = {x : e + (k-|e|)x in H}, FULL when the whole base."""
    H = frozenset(H)
    n = V.base.point_count
    out: dict[Multiset, object] = {}
    for e in V.leaf_keys():
        r = V.level - e.degree
        trace = frozenset(x for x in range(n)
                          if V.index[e + scale_point(r, x)] in H)
        out[e] = FULL if len(trace) == n else trace
    return out


def assemble_from_h(V: VeroneseSpace, h: dict[Multiset, object]) -> frozenset[int]:
    pts: set[int] = set()
    n = V.base.point_count
    for e, val in h.items():
        r = V.level - e.degree
        base_pts = range(n) if val == FULL else val
        pts.update(V.index[e + scale_point(r, x)] for x in base_pts)
    return frozenset(pts)


def l_transversal_from_h(V: VeroneseSpace, h: dict[Multiset, object]) -> frozenset[int]:
    """Union of the leaf traces; every trace must be FULL or a base
    hyperplane, and the result is verified l-transversal."""
    for e, val in h.items():
        if val == FULL:
            continue
        if not inc.is_hyperplane(V.base, val):
            raise ValueError(f"trace at {e} is neither FULL nor a base hyperplane")
    missing = set(V.leaf_keys()) - set(h)
    if missing:
        raise ValueError(f"h assigns no trace to leaves {sorted(map(str, missing))}")
    pts = assemble_from_h(V, h)
    if not inc.is_l_transversal(V.structure, pts):
        raise FalsificationError("leaf-trace union failed to be l-transversal")
    return pts


# ---------------------------------------------------------------------------
# symplectic construction (level 2)


def _coordinates(V: VeroneseSpace) -> list[tuple]:
    if V.base.labels is None:
        raise ValueError("base carries no coordinate labels")
    return [V.base.labels[i] for i in range(V.base.point_count)]


def hyperplane_from_symplectic(V: VeroneseSpace, xi: BilinearForm) -> VeroneseHyperplane:
    """H = union over base points x of the leaf trace x + kappa(x).

    Requires level 2, odd p, and a symplectic (alternating) form; the
    result is verified to be a hyperplane containing the full double leaf.
    Degenerate forms are accepted and tagged: radical points contribute
    whole leaves to H.
    """
    if V.level != 2:
        raise ValueError("symplectic construction needs a level-2 Veronese space")
    if xi.p == 2:
        raise ValueError("odd characteristic required")
    if not is_symplectic(xi):
        raise ValueError("form is not symplectic; construction not applicable")
    if xi.is_zero():
        raise ValueError("zero form rejected")
    coords = _coordinates(V)
    n = len(coords)
    h: dict[Multiset, object] = {EMPTY: FULL}
    pts: set[int] = set()
    degenerate = False
    for i in range(n):
        row = frozenset(j for j in range(n)
                        if xi.evaluate(coords[i], coords[j]) == 0)
        if len(row) == n:
            h[scale_point(1, i)] = FULL
            degenerate = True
        else:
            h[scale_point(1, i)] = row
        for j in row:
            pts.add(V.index[Multiset.from_expansion([i, j])])
    pts.update(V.index[Multiset.from_expansion([i, i])] for i in range(n))
    points = frozenset(pts)
    # the union of the single-point traces already carries every double
    without_doubles = set()
    for i in range(n):
        row = h[scale_point(1, i)]
        base_pts = range(n) if row == FULL else row
        without_doubles.update(V.index[Multiset.from_expansion([i, j])]
                               for j in base_pts)
    if frozenset(without_doubles) != points:
        raise FalsificationError("symplectic union missed a double point")
    if not inc.is_hyperplane(V.structure, points):
        raise FalsificationError("symplectic construction failed the hyperplane check")
    return VeroneseHyperplane(V, points, h, degenerate=degenerate,
                              source="symplectic")


def vari1_construction(V: VeroneseSpace, xi: BilinearForm,
                       h0: frozenset[int]) -> tuple[frozenset[int], dict]:
    """Reflexive-form union with the double-leaf trace forced to h0.

    When h0 is not contained in the selfconjugate set the result is not a
    subspace; the returned report carries the witness block (two of its
    points inside the set, one outside), built exactly as the failure is
    proved: a in h0 off kappa(a), q in kappa(a) off h0, block a + join(a,q).
    """
    if V.level != 2:
        raise ValueError("construction needs level 2")
    coords = _coordinates(V)
    n = len(coords)
    kappa = [frozenset(j for j in range(n)
                       if xi.evaluate(coords[i], coords[j]) == 0)
             for i in range(n)]
    pts: set[int] = set()
    for i in range(n):
        pts.update(V.index[Multiset.from_expansion([i, j])] for j in kappa[i])
    pts.update(V.index[Multiset.from_expansion([x, x])] for x in h0)
    points = frozenset(pts)

    selfconj = frozenset(i for i in range(n) if i in kappa[i])
    report: dict = {"h0_inside_selfconjugate": h0 <= selfconj}
    if not h0 <= selfconj:
        a = min(x for x in sorted(h0) if x not in kappa[x])
        q = min(kappa[a] - h0)
        from .configs import _join
        join = _join(V.base, a, q)
        block = frozenset(V.index[Multiset.from_expansion([a, x])] for x in join)
        inside = sorted(block & points)
        outside = sorted(block - points)
        assert V.index[Multiset.from_expansion([a, a])] in block & points
        assert V.index[Multiset.from_expansion([a, q])] in block & points
        report["witness_block"] = sorted(block)
        report["witness_inside"] = inside
        report["witness_outside"] = outside
        report["is_subspace"] = inc.is_subspace(V.structure, points)
    return points, report


# ---------------------------------------------------------------------------
# alternating construction (level k)


def hyperplane_from_alternating(V: VeroneseSpace,
                                eta: AlternatingMultiForm) -> VeroneseHyperplane:
    """H = multisets whose expansions are eta-orthogonal tuples.

    The arity must equal the level; repeated points always land in H, so
    the complement consists of genuine k-subsets.  Verified hyperplane.
    """
    if eta.arity != V.level:
        raise ValueError(f"arity {eta.arity} does not match level {V.level}")
    coords = _coordinates(V)
    pts = frozenset(i for i, f in enumerate(V.points)
                    if eta.evaluate([coords[x] for x in f.expansion()]) == 0)
    for i, f in enumerate(V.points):
        if i not in pts and len(f.support()) != V.level:
            raise FalsificationError(
                "complement point with a repeated entry contradicts the "
                "alternating law")
    if not inc.is_hyperplane(V.structure, pts):
        raise FalsificationError("alternating construction failed the hyperplane check")
    nondeg = is_nondegenerate_alternating(eta, coords)
    h = extract_h_function(V, pts)
    return VeroneseHyperplane(V, pts, h, degenerate=not nondeg,
                              source="alternating")


# ---------------------------------------------------------------------------
# polar intersection


def polar_hyperplane(V_polar: VeroneseSpace, H_proj: VeroneseHyperplane,
                     base_point_map: Optional[Sequence[int]] = None) -> frozenset[int]:
    """Intersection of a projective-Veronese hyperplane with the polar
    Veronese point universe, verified to be a hyperplane there.

    base_point_map sends polar base indices to the ambient projective
    base indices (identity when the universes coincide).
    """
    V_proj = H_proj.ambient
    if V_polar.level != V_proj.level:
        raise ValueError("levels differ")
    if not V_polar.structure.lines:
        raise ValueError("polar Veronese has no lines: not a partial linear space")
    if base_point_map is None:
        if V_polar.base.point_count != V_proj.base.point_count:
            raise ValueError("base point counts differ and no map was given")
        base_point_map = list(range(V_polar.base.point_count))
    in_proj = frozenset(V_proj.points[q] for q in H_proj.points)
    got = []
    for i, f in enumerate(V_polar.points):
        lifted = Multiset(tuple(sorted((base_point_map[x], m) for x, m in f.entries)))
        if lifted in in_proj:
            got.append(i)
    pts = frozenset(got)
    if not inc.is_hyperplane(V_polar.structure, pts):
        raise FalsificationError("polar intersection failed the hyperplane check")
    return pts


# ---------------------------------------------------------------------------
# exhaustive enumeration for level-2 Veronese spaces


LEVEL2_BASE_CAP = 16


def enumerate_hyperplanes_level2(V: VeroneseSpace,
                                 base_hyperplanes: Optional[list[frozenset[int]]] = None
                                 ) -> list[frozenset[int]]:
    """All hyperplanes of a level-2 Veronese space by leaf-trace search.

    Rows h(x) range over base hyperplanes and FULL subject to the
    symmetry x in h(y) iff y in h(x); the double-leaf trace is the
    selfconjugacy diagonal {x : x in h(x)} and must itself be FULL or a
    base hyperplane.  Survivors face the honest hyperplane check.
    """
    if V.level != 2:
        raise ValueError("leaf-trace search applies to level 2 only")
    n = V.base.point_count
    if n > LEVEL2_BASE_CAP:
        raise CapacityError(f"base has {n} points, above the {LEVEL2_BASE_CAP} cap")
    if base_hyperplanes is None:
        base_hyperplanes = inc.enumerate_hyperplanes(V.base)
    full_set = frozenset(range(n))
    candidates = sorted(base_hyperplanes, key=lambda s: tuple(sorted(s)))
    candidates.append(full_set)
    admissible_diag = set(candidates)

    rows: list[frozenset[int]] = []
    found: list[frozenset[int]] = []

    def dfs(x: int) -> None:
        if x == n:
            diag = frozenset(y for y in range(n) if y in rows[y])
            if diag not in admissible_diag:
                return
            h: dict[Multiset, object] = {
                EMPTY: FULL if diag == full_set else diag}
            for y in range(n):
                h[scale_point(1, y)] = FULL if rows[y] == full_set else rows[y]
            pts = assemble_from_h(V, h)
            if len(pts) == len(V.points):
                return
            if inc.is_hyperplane(V.structure, pts):
                found.append(pts)
            return
        for cand in candidates:
            ok = True
            for y in range(x):
                if (y in cand) != (x in rows[y]):
                    ok = False
                    break
            if ok:
                rows.append(cand)
                dfs(x + 1)
                rows.pop()

    dfs(0)
    return sorted(set(found), key=lambda s: tuple(sorted(s)))


# ---------------------------------------------------------------------------
# characterization report


@dataclass
class CharacterizationReport:
    enumerated: list[frozenset[int]]
    constructed: list[frozenset[int]]
    constructed_subset_of_enumerated: bool
    equal: bool
    extras: list[dict] = field(default_factory=list)

    def summary(self) -> str:
        return (f"enumerated {len(self.enumerated)} hyperplanes, "
                f"constructed {len(self.constructed)} symplectic ones; "
                f"symplectic side contained: {self.constructed_subset_of_enumerated}; "
                f"sets equal: {self.equal}")


def leaf_pencil(V: VeroneseSpace, base_hyperplane: frozenset[int]) -> frozenset[int]:
    """Union of the leaves x + S over x in a base hyperplane."""
    pts: set[int] = set()
    for x in base_hyperplane:
        pts.update(V.leaves[scale_point(1, x)])
    return frozenset(pts)


def verify_characterization(V: VeroneseSpace, mode: str = "auto"
                            ) -> CharacterizationReport:
    """Compare exhaustively enumerated hyperplanes with the symplectic family.

    The symplectic side ranges over all nonzero alternating forms up to
    scalar (degenerate ones included).  Each is verified to be a
    hyperplane, so the containment direction is checked rather than
    assumed; any extra enumerated hyperplane is reported with its
    extracted trace function, the symmetry of its point relation, and a
    leaf-pencil match when one exists.
    """
    coords = _coordinates(V)
    dim = len(coords[0])
    p = _base_prime(V)
    constructed = []
    for xi in alternating_forms_up_to_scalar(dim, p):
        constructed.append(hyperplane_from_symplectic(V, xi).points)
    constructed = sorted(set(constructed), key=lambda s: tuple(sorted(s)))

    if mode == "auto":
        mode = "scan" if V.structure.point_count <= inc.MAX_SCAN_POINTS else "leaf-trace"
    if mode == "scan":
        enumerated = inc.enumerate_hyperplanes(V.structure)
    elif mode == "leaf-trace":
        enumerated = enumerate_hyperplanes_level2(V)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    constructed_set = set(constructed)
    extras = []
    for H in enumerated:
        if H in constructed_set:
            continue
        h = extract_h_function(V, H)
        n = V.base.point_count
        symmetric = all(
            (V.index[Multiset.from_expansion([x, y])] in H)
            == (V.index[Multiset.from_expansion([y, x])] in H)
            for x in range(n) for y in range(n))
        traces_ok = all(val == FULL or inc.is_hyperplane(V.base, val)
                        for val in h.values())
        pencil_match = None
        for bh in inc.enumerate_hyperplanes(V.base):
            if leaf_pencil(V, bh) == H:
                pencil_match = sorted(bh)
                break
        extras.append({
            "points": sorted(H),
            "traces_hyperplane_or_full": traces_ok,
            "relation_symmetric": symmetric,
            "leaf_pencil_over": pencil_match,
        })
    return CharacterizationReport(
        enumerated=enumerated,
        constructed=constructed,
        constructed_subset_of_enumerated=constructed_set <= set(enumerated),
        equal=set(enumerated) == constructed_set,
        extras=extras,
    )


def _base_prime(V: VeroneseSpace) -> int:
    # infer p from the coordinate labels: entries live in {0..p-1} and the
    # base point count is (p^dim - 1)/(p - 1)
    coords = _coordinates(V)
    dim = len(coords[0])
    top = max(max(c) for c in coords)
    for p in range(max(2, top + 1), top + 30):
        from .algebra import is_prime
        if is_prime(p) and (p ** dim - 1) // (p - 1) == len(coords):
            return p
    raise ValueError("could not infer the base field size")
