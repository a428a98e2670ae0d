import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxtwist.diagram import (components, dump_diagram, is_connected,
                              is_spherical_product, parse_diagram, perp,
                              sigma_nu_split, spherical_product_witness, submasks)
from coxtwist.errors import ParseError
from coxtwist.fixtures import fixture_path, load_fixture
from coxtwist.sphericity import is_spherical

from conftest import diagram, diagrams


def test_parse_fixture_rank():
    with open(fixture_path("E14")) as fh:
        D = parse_diagram(fh.read())
    assert D.rank == 5
    assert len(list(D.edges())) == 6


def test_parse_single_generator():
    D = parse_diagram('{"generators": ["s"]}')
    assert D.names == ("s",)
    assert list(D.edges()) == []


@pytest.mark.parametrize("doc, msg", [
    ({"generators": ["a"], "orders": [["a", "a", 3]]}, "self-edge"),
    ({"generators": ["a", "b"], "orders": [["a", "b", 1]]}, "< 2"),
    ({"generators": ["a", "b"], "orders": [["a", "b", 3], ["b", "a", 4]]}, "asymmetric"),
    ({"generators": ["a", "a"]}, "duplicate"),
    ({"generators": ["a"], "orders": [["a", "z", 3]]}, "unknown generator"),
    ({"generators": ["a", "b"], "orders": [["a", "b", 3]], "infinite": [["a", "b"]]}, "both"),
    ({"generators": ["a"], "colour": 1}, "unknown key"),
    ({"orders": []}, "missing key"),
    ({"generators": ["a", "b"], "orders": [["a", "b", 2.5]]}, "integer"),
])
def test_parse_errors(doc, msg):
    with pytest.raises(ParseError, match=msg):
        parse_diagram(json.dumps(doc))


def test_parse_empty_and_garbage():
    with pytest.raises(ParseError):
        parse_diagram("")
    with pytest.raises(ParseError):
        parse_diagram("{not json")
    with pytest.raises(ParseError):
        parse_diagram("[1, 2]")


@given(diagrams())
def test_dump_parse_round_trip(D):
    assert parse_diagram(dump_diagram(D, note="x")) == D


def test_components_examples():
    D = load_fixture("E14").diagram
    assert components(D, D.mask(["b1", "b2", "b3", "c"])) == [D.mask(["b1", "b2", "b3", "c"])]
    T = load_fixture("TRIPOD").diagram
    got = components(T, T.mask(["x", "y", "z"]))
    assert sorted(got) == sorted(T.mask([s]) for s in "xyz")
    assert components(D, 0) == []


def test_perp_examples():
    D = load_fixture("E14").diagram
    assert perp(D, 0) == D.full
    # a commutes with every b_i in the stored labels
    assert perp(D, D.mask(["a"])) == D.mask(["b1", "b2", "b3"])
    E = diagram("s t", [("s", "t", 2)])
    assert perp(E, E.mask(["s"])) & E.mask(["t"])


def test_sigma_nu_examples():
    D = load_fixture("E14").diagram
    U = D.mask(["a", "b1"])
    assert sigma_nu_split(D, U) == (U, 0)
    E = load_fixture("E10").diagram
    s = sigma_nu_split(E, E.mask(["a1", "a2", "a3", "a4"]))
    assert s.sigma == E.mask(["a1", "a2"]) and s.nu == E.mask(["a3", "a4"])
    assert tuple(sigma_nu_split(D, 0)) == (0, 0)


def test_spherical_product_examples():
    assert not is_spherical_product(load_fixture("E14").diagram, 0)
    D = diagram("s t", [])
    assert not is_spherical_product(D, D.full)
    E = diagram("s t u", [("s", "u", 2), ("t", "u", 2)])
    assert is_spherical_product(E, E.mask(["s", "t"]))


@given(diagrams(max_rank=5))
def test_spherical_product_matches_definition(D):
    """U is a spherical-product subset iff U lies in sigma + perp(sigma) for a spherical sigma."""
    spherical = [T for T in range(1, D.full + 1) if T & D.full == T and is_spherical(D, T)]
    for U in range(1, D.full + 1):
        want = any(U & ~(T | perp(D, T)) == 0 for T in spherical)
        assert is_spherical_product(D, U) == want
        w = spherical_product_witness(D, U)
        assert (w is not None) == want
        if w is not None:
            assert is_spherical(D, w) and U & ~(w | perp(D, w)) == 0


@given(diagrams(max_rank=6))
def test_sigma_nu_partition(D):
    for U in submasks(D.full):
        s = sigma_nu_split(D, U)
        assert s.sigma | s.nu == U and s.sigma & s.nu == 0
        assert is_spherical(D, s.sigma)
        if s.sigma and s.nu:
            assert s.nu & ~perp(D, s.sigma) == 0


@given(diagrams(), st.randoms(use_true_random=False))
def test_connectivity_consistent(D, rnd):
    T = rnd.randrange(D.full + 1)
    parts = components(D, T)
    union = 0
    for C in parts:
        assert is_connected(D, C)
        assert union & C == 0
        union |= C
    assert union == T
    assert is_connected(D, T) == (len(parts) == 1)
