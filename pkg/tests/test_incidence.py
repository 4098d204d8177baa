import itertools
import random

import pytest

from verogeo.incidence import (IncidenceStructure, enumerate_hyperplanes,
                               gamma_plane_classes, is_connected, is_flappy,
                               is_hyperplane, is_l_transversal,
                               is_partial_linear, is_spiky, is_strong,
                               is_subspace, maximal_strong_subspaces,
                               subspace_closure, veblen_parallel_lines)
from verogeo.multiset import Multiset
from verogeo.spaces import projective_hyperplanes, projective_plane_family, projective_space
from verogeo.veronese import build_veronese


def fano():
    return projective_space(2, 2)


def v2_pg13():
    return build_veronese(projective_space(1, 3), 2)


def test_pls_positive():
    ok, witness = is_partial_linear(fano())
    assert ok and witness is None


def test_pls_undersized_line():
    G = IncidenceStructure(4, [[0, 1], [1, 2, 3]])
    ok, witness = is_partial_linear(G)
    assert not ok
    assert witness[0] == "undersized_line"


def test_pls_double_joined_pair():
    G = IncidenceStructure(4, [[0, 1, 2], [0, 1, 3]])
    ok, witness = is_partial_linear(G)
    assert not ok
    assert witness[:3] == ("double_joined", 0, 1)


def test_adjacency_and_connectivity():
    G = projective_space(2, 3)
    assert is_connected(G)
    two_fanos = IncidenceStructure(
        14, [sorted(l) for l in fano().lines]
        + [sorted(q + 7 for q in l) for l in fano().lines])
    assert not is_connected(two_fanos)


def test_veronese_adjacency_example():
    V = v2_pg13()
    a = V.index[Multiset.from_pairs([[0, 2]])]
    b = V.index[Multiset.from_pairs([[0, 1], [1, 1]])]
    assert V.structure.adjacent(a, b)


def test_closure_contains_line():
    G = fano()
    line = sorted(G.lines[0])
    c = subspace_closure(G, line[:2])
    assert frozenset(line) <= c


def test_closure_trivial_cases():
    G = fano()
    assert subspace_closure(G, []) == frozenset()
    assert subspace_closure(G, [3]) == frozenset({3})


def test_closure_idempotent_monotone_random():
    V = build_veronese(fano(), 2)
    G = V.structure
    rng = random.Random(20260810)
    for _ in range(50):
        X = frozenset(rng.sample(range(G.point_count), rng.randrange(0, 8)))
        c = subspace_closure(G, X)
        assert subspace_closure(G, c) == c
        assert X <= c
        Y = X | {rng.randrange(G.point_count)}
        assert c <= subspace_closure(G, Y)


def test_leaves_are_strong_in_v2_fano():
    V = build_veronese(fano(), 2)
    for leaf in V.leaves.values():
        assert is_strong(V.structure, leaf)


def test_maximal_strong_subspaces_projective():
    G = projective_space(2, 3)
    assert maximal_strong_subspaces(G) == [frozenset(range(13))]


def test_maximal_strong_subspaces_v2_pg13():
    V = v2_pg13()
    got = maximal_strong_subspaces(V.structure)
    assert got == sorted(set(V.structure.lines), key=lambda s: tuple(sorted(s)))
    assert len(got) == 5


def test_maximal_strong_subspaces_v2_pg23():
    V = build_veronese(projective_space(2, 3), 2)
    got = maximal_strong_subspaces(V.structure)
    leaves = sorted(set(V.leaves.values()), key=lambda s: tuple(sorted(s)))
    assert got == leaves
    assert len(got) == 14


def test_maximal_strong_one_point_extensions():
    V = v2_pg13()
    G = V.structure
    for X in maximal_strong_subspaces(G):
        assert is_strong(G, X)
        for q in range(G.point_count):
            if q not in X:
                assert not is_strong(G, subspace_closure(G, X | {q}))


def test_transversal_and_hyperplane():
    G = projective_space(3, 3)
    everything = frozenset(range(G.point_count))
    assert is_l_transversal(G, everything)
    assert not is_hyperplane(G, everything)
    h = projective_hyperplanes(G, 3)[0]
    assert is_hyperplane(G, h)


def test_multiset_power_of_hyperplane_not_transversal():
    # m_2(h0) is a subspace of V(2, PG(2,3)) but misses the block b + L
    # for any line L off h0 and b in L off h0
    P = projective_space(2, 3)
    h0 = projective_hyperplanes(P, 3)[0]
    V = build_veronese(P, 2)
    X = frozenset(i for i, f in enumerate(V.points) if f.support() <= h0)
    assert is_subspace(V.structure, X)
    assert not is_l_transversal(V.structure, X)
    line = next(l for l in P.lines if not l <= h0)
    b = next(iter(line - h0))
    block = frozenset(V.index[Multiset.from_expansion([b, x])] for x in line)
    assert block in set(V.structure.lines)
    assert not block & X


def test_spiky_empty_vacuous():
    G = fano()
    ok, _ = is_spiky(G, [])
    assert ok


def test_flappy_single_fano_line():
    G = fano()
    X = frozenset(G.lines[0])
    ok, witness = is_flappy(G, X, [frozenset(range(7))])
    assert ok  # the whole plane is not contained in the line
    ok, witness = is_flappy(G, frozenset(range(7)), [frozenset(range(7))])
    assert not ok
    with pytest.raises(ValueError):
        is_flappy(G, X, [])


def test_enumerate_hyperplanes_fano():
    G = fano()
    assert enumerate_hyperplanes(G) == sorted(set(G.lines),
                                              key=lambda s: tuple(sorted(s)))


def test_enumerate_hyperplanes_single_line():
    G = IncidenceStructure(3, [[0, 1, 2]])
    got = enumerate_hyperplanes(G)
    assert got == [frozenset({0}), frozenset({1}), frozenset({2})]


def test_enumerate_hyperplanes_matches_brute_force_scan():
    # independent oracle: literal scan of all 2^10 subsets
    V = v2_pg13()
    G = V.structure
    brute = []
    for mask in range(1 << G.point_count):
        X = frozenset(q for q in range(G.point_count) if mask >> q & 1)
        if is_hyperplane(G, X):
            brute.append(X)
    brute.sort(key=lambda s: tuple(sorted(s)))
    assert enumerate_hyperplanes(G) == brute
    double_leaf = frozenset(V.leaves[Multiset(())])
    assert double_leaf in brute


def test_enumerate_hyperplanes_capacity():
    from verogeo.incidence import CapacityError
    G = projective_space(3, 3)
    with pytest.raises(CapacityError):
        enumerate_hyperplanes(G)


def test_hyperplane_implies_parts():
    V = v2_pg13()
    G = V.structure
    for X in enumerate_hyperplanes(G):
        assert is_l_transversal(G, X)
        assert is_subspace(G, X)
        assert len(X) < G.point_count


def test_veblen_parallel_lines_affine_plane():
    from verogeo.spaces import affine_space
    A = affine_space(2, 3)
    G = A.base
    class_of = A.class_of()
    for i in range(len(G.lines)):
        for j in range(len(G.lines)):
            expected = class_of[i] == class_of[j]
            assert veblen_parallel_lines(G, i, j) == expected


def test_gamma_plane_classes_projective():
    G = projective_space(3, 3)
    planes = projective_plane_family(G, 3)
    classes = gamma_plane_classes(G, planes)
    assert classes == [frozenset(range(40))]


def test_json_round_trip(tmp_path):
    from verogeo.incidence import dump_json, load_json
    V = v2_pg13()
    path = tmp_path / "v.json"
    dump_json(V.structure, path)
    G = load_json(path)
    assert G.point_count == V.structure.point_count
    assert set(G.lines) == set(V.structure.lines)
    assert G.labels == V.structure.labels
