"""Incidence structures, partial linear spaces, and subspace machinery.

An incidence structure is a point count plus a family of lines, each line a
set of point indices.  A partial linear space (PLS) here requires every line
to carry at least 3 points and any two distinct points to lie on at most one
common line.

Witnesses returned by the checkers are always the lexicographically first
violation, so failure reports are reproducible.  "Plane" is not intrinsic to
an incidence structure: operations that need planes (flappy, gamma chains)
take the plane family explicitly; the concrete space constructors export
their own plane families.
"""

from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence


class IncidenceStructure:
    """Points 0..point_count-1 plus a family of lines (frozensets of points).

    Instances are immutable after construction and safe to share; the
    adjacency and point-to-line indexes are computed lazily and cached.
    Equality is identity; compare line sets explicitly when needed.
    """

    def __init__(self, point_count: int, lines: Iterable[Iterable[int]],
                 labels: Optional[dict] = None, sort_lines: bool = True):
        self.point_count = point_count
        lines = [frozenset(l) for l in lines]
        for l in lines:
            for q in l:
                if not (0 <= q < point_count):
                    raise ValueError(f"line point {q} out of range 0..{point_count - 1}")
        if sort_lines:
            lines.sort(key=lambda l: tuple(sorted(l)))
        self.lines: tuple[frozenset[int], ...] = tuple(lines)
        self.labels = dict(labels) if labels else None
        self._adjacency: Optional[list[set[int]]] = None
        self._lines_through: Optional[list[list[int]]] = None
        self._line_index: Optional[dict[frozenset, int]] = None

    def __repr__(self):
        return f"IncidenceStructure({self.point_count} points, {len(self.lines)} lines)"

    @property
    def points(self) -> range:
        return range(self.point_count)

    def adjacency(self) -> list[set[int]]:
        """adjacency()[a] = points sharing a line with a (includes a if non-isolated)."""
        if self._adjacency is None:
            adj: list[set[int]] = [set() for _ in range(self.point_count)]
            for line in self.lines:
                for a in line:
                    adj[a] |= line
            self._adjacency = adj
        return self._adjacency

    def adjacent(self, a: int, b: int) -> bool:
        return b in self.adjacency()[a]

    def lines_through(self) -> list[list[int]]:
        if self._lines_through is None:
            through: list[list[int]] = [[] for _ in range(self.point_count)]
            for i, line in enumerate(self.lines):
                for a in line:
                    through[a].append(i)
            self._lines_through = through
        return self._lines_through

    def line_index(self) -> dict[frozenset, int]:
        if self._line_index is None:
            self._line_index = {l: i for i, l in enumerate(self.lines)}
        return self._line_index

    def label(self, point: int):
        if self.labels is None:
            return point
        return self.labels.get(point, point)

    def to_json(self) -> dict:
        data = {
            "point_count": self.point_count,
            "lines": [sorted(l) for l in self.lines],
        }
        if self.labels is not None:
            data["labels"] = {str(k): _label_json(v) for k, v in self.labels.items()}
        return data

    @staticmethod
    def from_json(data: dict) -> "IncidenceStructure":
        labels = None
        if "labels" in data:
            labels = {int(k): _label_from_json(v) for k, v in data["labels"].items()}
        return IncidenceStructure(data["point_count"], data["lines"], labels=labels,
                                  sort_lines=False)


def _label_json(v):
    from .multiset import Multiset
    if isinstance(v, Multiset):
        return {"multiset": v.to_pairs()}
    if isinstance(v, tuple):
        return list(v)
    return v


def _label_from_json(v):
    from .multiset import Multiset
    if isinstance(v, dict) and "multiset" in v:
        return Multiset.from_pairs(v["multiset"])
    if isinstance(v, list):
        return tuple(v)
    return v


def dump_json(G: IncidenceStructure, path) -> None:
    with open(path, "w") as fh:
        json.dump(G.to_json(), fh, sort_keys=True)


def load_json(path) -> IncidenceStructure:
    with open(path) as fh:
        return IncidenceStructure.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# partial linear space axioms


def is_partial_linear(G: IncidenceStructure) -> tuple[bool, Optional[tuple]]:
    """Check the PLS axioms: line floor >= 3 and unique joining lines.

    Returns (ok, witness); the witness is ("undersized_line", line_index)
    or ("double_joined", a, b, line1, line2), first violation in
    deterministic order.
    """
    for i, line in enumerate(G.lines):
        if len(line) < 3:
            return False, ("undersized_line", i)
    seen: dict[tuple[int, int], int] = {}
    for i, line in enumerate(G.lines):
        pts = sorted(line)
        for x in range(len(pts)):
            for y in range(x + 1, len(pts)):
                pair = (pts[x], pts[y])
                if pair in seen and G.lines[seen[pair]] != line:
                    return False, ("double_joined", pair[0], pair[1], seen[pair], i)
                seen.setdefault(pair, i)
    return True, None


def is_connected(G: IncidenceStructure) -> bool:
    """Graph connectivity of the adjacency relation; isolated points disconnect."""
    if G.point_count <= 1:
        return True
    adj = G.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return len(seen) == G.point_count


# ---------------------------------------------------------------------------
# subspaces


def subspace_closure(G: IncidenceStructure, X: Iterable[int]) -> frozenset[int]:
    """Least superset of X containing every line that meets it twice."""
    current = set(X)
    through = G.lines_through()
    # worklist of lines that might newly qualify
    pending = {i for a in current for i in through[a]}
    while pending:
        i = pending.pop()
        line = G.lines[i]
        inside = len(line & current)
        if 2 <= inside < len(line):
            fresh = line - current
            current |= line
            for a in fresh:
                pending.update(through[a])
    return frozenset(current)


def is_subspace(G: IncidenceStructure, X: Iterable[int]) -> bool:
    X = frozenset(X)
    for line in G.lines:
        inside = len(line & X)
        if 2 <= inside < len(line):
            return False
    return True


def is_strong(G: IncidenceStructure, X: Iterable[int]) -> bool:
    """Subspace with all points pairwise adjacent."""
    X = frozenset(X)
    if not is_subspace(G, X):
        return False
    adj = G.adjacency()
    pts = sorted(X)
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            if b not in adj[a]:
                return False
    return True


def maximal_strong_subspaces(G: IncidenceStructure) -> list[frozenset[int]]:
    """All inclusion-maximal strong subspaces containing at least one line.

    Grown from each line by single-point extensions whose closure stays
    strong; a state with no valid extension is maximal (any strong proper
    superset would supply one).  Deterministic output order.
    """
    adj = G.adjacency()
    results: set[frozenset[int]] = set()
    seen: set[frozenset[int]] = set()

    def candidates(X: frozenset[int]) -> list[int]:
        if not X:
            return []
        common = None
        for a in X:
            common = adj[a] if common is None else common & adj[a]
        return sorted((common or set()) - X)

    def grow(X: frozenset[int]) -> None:
        if X in seen:
            return
        seen.add(X)
        extended = False
        for p in candidates(X):
            Y = subspace_closure(G, X | {p})
            if Y in seen:
                extended = True  # already explored a strict superset path
                continue
            if _is_clique(adj, Y):
                extended = True
                grow(Y)
        if not extended:
            results.add(X)

    for line in G.lines:
        grow(subspace_closure(G, line))

    maximal = [X for X in results
               if not any(X < Y for Y in results if Y is not X)]
    return sorted(maximal, key=lambda s: tuple(sorted(s)))


def _is_clique(adj: list[set[int]], X: frozenset[int]) -> bool:
    pts = sorted(X)
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            if b not in adj[a]:
                return False
    return True


# ---------------------------------------------------------------------------
# transversality, hyperplanes, spiky/flappy


def is_l_transversal(G: IncidenceStructure, X: Iterable[int]) -> bool:
    X = frozenset(X)
    return all(line & X for line in G.lines)


def is_hyperplane(G: IncidenceStructure, X: Iterable[int]) -> bool:
    """Proper l-transversal subspace."""
    X = frozenset(X)
    if len(X) == G.point_count:
        return False
    return is_l_transversal(G, X) and is_subspace(G, X)


def is_spiky(G: IncidenceStructure, X: Iterable[int]) -> tuple[bool, Optional[int]]:
    """Through each point of X there must go a line not contained in X.

    Returns (ok, witness_point). Vacuously true for empty X; a point of X
    with no lines at all fails.
    """
    X = frozenset(X)
    through = G.lines_through()
    for p in sorted(X):
        if not any(not (G.lines[i] <= X) for i in through[p]):
            return False, p
    return True, None


def is_flappy(G: IncidenceStructure, X: Iterable[int],
              planes: Sequence[frozenset[int]]) -> tuple[bool, Optional[int]]:
    """Through each line inside X there must pass a plane not contained in X.

    Plane families are caller-supplied (they are space-specific).  Raises
    if no planes are given while X contains a line, since the check would
    be indeterminate.
    """
    X = frozenset(X)
    inside = [i for i, line in enumerate(G.lines) if line <= X]
    if inside and not planes:
        raise ValueError("flappy check needs a plane family when X contains lines")
    for i in inside:
        line = G.lines[i]
        if not any(line <= pl and not (pl <= X) for pl in planes):
            return False, i
    return True, None


# ---------------------------------------------------------------------------
# hyperplane enumeration

MAX_SCAN_POINTS = 24


class CapacityError(RuntimeError):
    pass


def enumerate_hyperplanes(G: IncidenceStructure) -> list[frozenset[int]]:
    """Complete list of hyperplanes, via an exhaustive in/out decision scan.

    A hyperplane is exactly a proper point set meeting every line in one
    point or containing it, so the scan over the subset lattice is run as
    a DFS over per-point membership decisions with that constraint pruned
    per line.  Capped at MAX_SCAN_POINTS points; level-2 Veronese spaces
    beyond the cap have a dedicated search (hyperplanes module).
    """
    n = G.point_count
    if n > MAX_SCAN_POINTS:
        raise CapacityError(f"{n} points exceeds the {MAX_SCAN_POINTS}-point scan cap")
    lines = [sorted(l) for l in G.lines]
    per_point: list[list[int]] = [[] for _ in range(n)]
    for i, l in enumerate(lines):
        for q in l:
            per_point[q].append(i)
    size = [len(l) for l in lines]
    count_in = [0] * len(lines)
    count_out = [0] * len(lines)
    chosen: list[bool] = [False] * n
    found: list[frozenset[int]] = []

    def feasible(i: int) -> bool:
        # dead when a line has 2 in + 1 out, or is fully out
        if count_in[i] >= 2 and count_out[i] >= 1:
            return False
        if count_out[i] == size[i]:
            return False
        return True

    def dfs(q: int) -> None:
        if q == n:
            for i in range(len(lines)):
                if count_in[i] != size[i] and count_in[i] != 1:
                    return
            X = frozenset(p for p in range(n) if chosen[p])
            if len(X) < n:
                found.append(X)
            return
        for take in (False, True):
            chosen[q] = take
            bucket = count_in if take else count_out
            for i in per_point[q]:
                bucket[i] += 1
            if all(feasible(i) for i in per_point[q]):
                dfs(q + 1)
            for i in per_point[q]:
                bucket[i] -= 1
        chosen[q] = False

    dfs(0)
    found.sort(key=lambda s: tuple(sorted(s)))
    return found


# ---------------------------------------------------------------------------
# Veblen parallelism (line relation over bare incidence)


def veblen_parallel_lines(G: IncidenceStructure, i: int, j: int,
                          cross: Optional[list[set[int]]] = None) -> bool:
    """Coplanarity-style parallelism of lines i, j.

    Holds when i == j, or when the lines are disjoint and there are two
    lines L', L'' through a common point p off both, each crossing both,
    with the crossing points a1 = i cap L' and a2 = j cap L'' adjacent.
    The adjacency clause matters: not every triangle in a Veronese space
    spans a plane.
    """
    if i == j:
        return True
    li, lj = G.lines[i], G.lines[j]
    if li & lj:
        return False
    if cross is None:
        cross = crossing_index(G)
    candidates = sorted(cross[i] & cross[j])
    adj = G.adjacency()
    for a in candidates:
        la = G.lines[a]
        pa_i = next(iter(la & li))
        for b in candidates:
            if b == a:
                continue
            lb = G.lines[b]
            common = la & lb
            if not common:
                continue
            p = next(iter(common))
            if p in li or p in lj:
                continue
            a2 = next(iter(lb & lj))
            if a2 in adj[pa_i]:
                return True
    return False


def crossing_index(G: IncidenceStructure) -> list[set[int]]:
    """crossing_index(G)[i] = indexes of lines sharing a point with line i."""
    through = G.lines_through()
    cross: list[set[int]] = [set() for _ in G.lines]
    for i, line in enumerate(G.lines):
        for q in line:
            cross[i].update(through[q])
        cross[i].discard(i)
    return cross


# ---------------------------------------------------------------------------
# plane-chain (gamma) classes


def gamma_plane_classes(G: IncidenceStructure,
                        planes: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    """Chain-connectivity classes of a plane family, returned as point unions.

    Two planes chain when their intersection contains a line of G.  The
    union of each class is returned (sorted); points on no plane are not
    represented.
    """
    line_set = set(G.lines)
    parent = list(range(len(planes)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    by_point: dict[int, list[int]] = {}
    for idx, pl in enumerate(planes):
        for q in pl:
            by_point.setdefault(q, []).append(idx)
    checked: set[tuple[int, int]] = set()
    for idxs in by_point.values():
        for x in range(len(idxs)):
            for y in range(x + 1, len(idxs)):
                a, b = idxs[x], idxs[y]
                key = (min(a, b), max(a, b))
                if key in checked:
                    continue
                checked.add(key)
                shared = planes[a] & planes[b]
                if len(shared) >= 2 and any(l <= shared for l in line_set):
                    union(a, b)

    classes: dict[int, set[int]] = {}
    for idx, pl in enumerate(planes):
        classes.setdefault(find(idx), set()).update(pl)
    return sorted((frozenset(c) for c in classes.values()),
                  key=lambda s: tuple(sorted(s)))
