import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxtwist.diagram import INF, submasks
from coxtwist.errors import DomainError
from coxtwist.fixtures import load_fixture
from coxtwist.oracle import is_diagram_automorphism
from coxtwist.sphericity import (is_spherical, longest_automorphism, maximal_spherical_subsets,
                                 omega_image, omega_map, recognize, spherical_subsets)

from conftest import diagram, diagrams, dynkin


def gram_positive_definite(D, T):
    """Independent finiteness test: the cosine matrix of W_T is positive definite."""
    idx = [i for i in range(D.rank) if T >> i & 1]
    if not idx:
        return True
    B = np.empty((len(idx), len(idx)))
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            m = D.orders[i][j]
            B[a, b] = 1.0 if i == j else (-1.0 if m == INF else -math.cos(math.pi / m))
    return bool(np.linalg.eigvalsh(B).min() > 1e-9)


def names_of(D, factors):
    return [(str(f.type), set(D.members(f.mask))) for f in factors]


def test_recognize_a3_path():
    D = dynkin("s1 s2 s3", [("s1", "s2", 3), ("s2", "s3", 3)])
    assert names_of(D, recognize(D, D.full)) == [("A3", {"s1", "s2", "s3"})]


def test_recognize_triangle_with_commuting_pair():
    D = diagram("a1 b1 a2", [("a1", "b1", 3), ("b1", "a2", 3), ("a1", "a2", 2)])
    assert names_of(D, recognize(D, D.full)) == [("A3", {"a1", "b1", "a2"})]


def test_unlisted_pairs_are_infinite():
    # the same path with s1-s3 left out of the document is a hyperbolic triangle group
    D = diagram("s1 s2 s3", [("s1", "s2", 3), ("s2", "s3", 3)])
    assert recognize(D, D.full) is None


def test_recognize_infinite_edge():
    D = diagram("s t", [])
    assert recognize(D, D.full) is None


@pytest.mark.parametrize("names, edges, want", [
    ("a b c", [("a", "b", 4), ("b", "c", 3)], "B3"),
    ("a b c d", [("a", "b", 3), ("b", "c", 3), ("b", "d", 3)], "D4"),
    ("a b c d", [("a", "b", 3), ("b", "c", 4), ("c", "d", 3)], "F4"),
    ("a b c", [("a", "b", 5), ("b", "c", 3)], "H3"),
    ("a b c d", [("a", "b", 5), ("b", "c", 3), ("c", "d", 3)], "H4"),
    ("a b", [("a", "b", 7)], "I2(7)"),
    ("a b c d e f", [("a", "b", 3), ("b", "c", 3), ("c", "d", 3), ("d", "e", 3), ("c", "f", 3)], "E6"),
])
def test_recognize_families(names, edges, want):
    D = dynkin(names, edges)
    (f,) = recognize(D, D.full)
    assert str(f.type) == want


def test_is_spherical_examples():
    D = load_fixture("E14").diagram
    assert is_spherical(D, D.mask(["a", "b1"]))
    assert not is_spherical(D, D.mask(["a", "c"]))
    assert is_spherical(D, 0)


def test_longest_automorphism_examples():
    D = diagram("a1 b1 a2", [("a1", "b1", 3), ("b1", "a2", 3), ("a1", "a2", 2)])
    assert longest_automorphism(D, D.full) == {"a1": "a2", "b1": "b1", "a2": "a1"}
    E = diagram("a1 b1", [("a1", "b1", 3)])
    assert longest_automorphism(E, E.full) == {"a1": "b1", "b1": "a1"}
    B = dynkin("a b c", [("a", "b", 4), ("b", "c", 3)])
    assert longest_automorphism(B, B.full) == {"a": "a", "b": "b", "c": "c"}
    with pytest.raises(DomainError):
        longest_automorphism(diagram("s t", []), 3)


def test_d5_swaps_fork_leaves_d4_does_not():
    D5 = dynkin("a b c d e", [("a", "b", 3), ("b", "c", 3), ("c", "d", 3), ("c", "e", 3)])
    w = longest_automorphism(D5, D5.full)
    assert w["d"] == "e" and w["a"] == "a"
    D4 = dynkin("b c d e", [("b", "c", 3), ("c", "d", 3), ("c", "e", 3)])
    assert all(k == v for k, v in longest_automorphism(D4, D4.full).items())


def test_spherical_subsets_examples():
    D = load_fixture("E14").diagram
    want = {D.mask(p) for p in (["a", "b1"], ["a", "b2"], ["a", "b3"],
                                ["b1", "c"], ["b2", "c"], ["b3", "c"])}
    assert set(maximal_spherical_subsets(D)) == want
    R = diagram("s", [])
    assert [s.subset for s in spherical_subsets(R)] == [0, 1]
    A = load_fixture("A_i").diagram
    got = {s.subset for s in spherical_subsets(A)}
    for T in (["a1", "a2", "b1"], ["a2", "b1", "b2"], ["a2", "b2", "b3"], ["a2", "a3", "b3"]):
        assert A.mask(T) in got


def test_bound_limits_size():
    D = load_fixture("A_i").diagram
    small = spherical_subsets(D, bound=2)
    assert max(bin(s.subset).count("1") for s in small) == 2
    full = {s.subset: s.maximal for s in spherical_subsets(D)}
    for s in small:
        assert full[s.subset] == s.maximal


@given(diagrams(max_rank=6, labels=(2, 3, 4, 5, 6, INF)))
def test_sphericity_matches_gram_matrix(D):
    for T in submasks(D.full):
        assert is_spherical(D, T) == gram_positive_definite(D, T)


@given(diagrams(max_rank=6))
def test_enumeration_is_exhaustive(D):
    got = [s.subset for s in spherical_subsets(D)]
    assert got == sorted(T for T in submasks(D.full) if is_spherical(D, T))
    maximal = {s.subset for s in spherical_subsets(D) if s.maximal}
    for T in got:
        bigger = any(T | (1 << k) in set(got) for k in range(D.rank) if not T >> k & 1)
        assert (T in maximal) == (not bigger)


@given(diagrams(max_rank=6))
def test_omega_is_label_preserving_involution(D):
    for s in spherical_subsets(D):
        T = s.subset
        w = omega_map(D, T)
        assert all(w[w[a]] == a for a in w)
        assert is_diagram_automorphism(D, w)
        for sig in submasks(T):
            img = omega_image(D, T, sig)
            assert bin(img).count("1") == bin(sig).count("1")
            assert is_spherical(D, img)


@given(diagrams(max_rank=5), st.permutations(range(5)))
def test_recognition_stable_under_renaming(D, perm):
    perm = [p for p in perm if p < D.rank]
    names = [f"t{p}" for p in perm]
    order = [[D.orders[perm[i]][perm[j]] for j in range(D.rank)] for i in range(D.rank)]
    from coxtwist.diagram import CoxeterDiagram
    E = CoxeterDiagram(names, order)
    for T in submasks(D.full):
        T2 = 0
        for k, p in enumerate(perm):
            if T >> p & 1:
                T2 |= 1 << k
        a, b = recognize(D, T), recognize(E, T2)
        assert (a is None) == (b is None)
        if a is not None:
            assert sorted(str(f.type) for f in a) == sorted(str(f.type) for f in b)
