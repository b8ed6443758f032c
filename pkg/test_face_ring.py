#!/usr/bin/env python3
"""
Tests for the face ring
M-degrees, multiplication against straightening, Hilbert function, f/h-vectors
"""

import numpy as np
import pytest

from corpus import corpus_member, glued_simplices, list_members
from face_ring import (
    InvalidMDegree,
    MDegree,
    NonTermination,
    RingElement,
    chain_of_mdegree,
    f_vector,
    h_vector,
    hilbert_dim,
    hilbert_series_check,
    make_mdegree,
    mdegree_of_chain,
    mult,
    mult_mdegree,
    ones,
    standard_monomials,
    straighten,
    ua,
    variable,
)
from linalg_exact import Field
from oracles import ring_axioms_hold, ring_products_agree
from poset_core import boolean
from testing_support import main

QQ = Field.rationals()
GF2 = Field.gf(2)


def test_digon_vectors():
    P = glued_simplices(1)
    assert f_vector(P) == (1, 2, 2)
    assert h_vector(P) == (1, 0, 1)
    assert [hilbert_dim(P, i) for i in range(4)] == [1, 2, 4, 6]


def test_known_h_vectors():
    assert h_vector(glued_simplices(3)) == (1, 0, 0, 0, 1)
    assert f_vector(glued_simplices(3)) == (1, 4, 6, 4, 2)
    assert h_vector(corpus_member("simplex_boundary(3)")) == (1, 1, 1, 1)
    assert f_vector(corpus_member("rp2_six_vertex")) == (1, 6, 15, 10)
    assert h_vector(corpus_member("rp2_six_vertex")) == (1, 3, 6, 0)
    for m in range(1, 5):
        assert h_vector(boolean(m)) == (1,) + (0,) * m
    assert hilbert_dim(boolean(3), 2) == 6


def test_hilbert_dim_counts_standard_monomials():
    for name in ("digon", "boolean(2)", "edge_plus_triangle", "glued_simplices(2)"):
        P = corpus_member(name)
        for i in range(5):
            assert len(standard_monomials(P, i)) == hilbert_dim(P, i), f"{name} degree {i}"


def test_degree_zero_is_the_unit():
    P = glued_simplices(1)
    assert standard_monomials(P, 0) == [MDegree(P.bottom)]
    for i in range(1, 4):
        for u in standard_monomials(P, i):
            assert all(e >= 1 for _, e in u.exponents), f"{u} in degree {i}"
            assert u.total_degree == i


def test_hilbert_series_on_corpus():
    for name in list_members():
        assert hilbert_series_check(corpus_member(name)), name


def test_mdegree_validation():
    P = boolean(2)
    top = P.element("{1,2}")
    u = make_mdegree(P, top, {1: 2, 2: 1})
    assert u.total_degree == 3 and u.exponent(1) == 2 and u.exponent(3) == 0
    with pytest.raises(InvalidMDegree):
        make_mdegree(P, top, {1: 2})
    with pytest.raises(InvalidMDegree):
        make_mdegree(P, top, {1: 0, 2: 1})


def test_chain_round_trip():
    P = glued_simplices(1)
    top = P.element("top1")
    assert chain_of_mdegree(P, ua(P, top)) == [top, top]
    u = make_mdegree(P, top, {1: 3, 2: 1})
    chain = chain_of_mdegree(P, u)
    assert sorted(chain) == sorted([top, P.atom(1), P.atom(1)])
    assert mdegree_of_chain(P, chain) == u
    assert mdegree_of_chain(P, []) == MDegree(P.bottom)


def test_digon_vertex_product():
    P = glued_simplices(1)
    v1, v2 = P.atom(1), P.atom(2)
    top1, top2 = P.element("top1"), P.element("top2")
    expected = RingElement(P, QQ, {ones(P, top1): QQ.one, ones(P, top2): QQ.one})
    assert mult_mdegree(P, ones(P, v1), ones(P, v2)) == expected
    assert straighten(P, [v1, v2]) == expected
    assert variable(P, v1) * variable(P, v2) == expected


def test_disjoint_tops_multiply_to_zero():
    P = glued_simplices(1)
    top1, top2 = P.element("top1"), P.element("top2")
    assert mult_mdegree(P, ones(P, top1), ones(P, top2)).is_zero()
    assert straighten(P, [top1, top2]).is_zero()


def test_unit_and_squares():
    P = glued_simplices(1)
    v1 = P.atom(1)
    assert variable(P, P.bottom) == RingElement.one(P, QQ)
    assert variable(P, v1) * RingElement.one(P, QQ) == variable(P, v1)
    square = straighten(P, [v1, v1])
    assert square.terms == {MDegree(v1, ((1, 2),)): 1}


def test_characteristic_two_cancellation():
    P = glued_simplices(1)
    x = variable(P, P.atom(1), GF2)
    assert (x + x).is_zero()
    assert (x - x).is_zero()


def test_straighten_budget():
    P = glued_simplices(1)
    with pytest.raises(NonTermination):
        straighten(P, [P.atom(1), P.atom(2)], budget=0)


def test_products_agree_with_straightening():
    for name in list_members():
        P = corpus_member(name)
        for field in (QQ, GF2):
            rng = np.random.default_rng(17)
            assert ring_products_agree(P, field, rng, 200), f"{name} over {field} (seed 17)"


def test_ring_axioms():
    for name in ("digon", "glued_simplices(2)", "edge_plus_triangle"):
        P = corpus_member(name)
        rng = np.random.default_rng(23)
        assert ring_axioms_hold(P, QQ, rng, 20), f"{name} (seed 23)"


def test_mult_distributes_over_sums():
    P = glued_simplices(1)
    v1, v2 = variable(P, P.atom(1)), variable(P, P.atom(2))
    top = variable(P, P.element("top1"))
    assert mult(P, v1, v2 + top) == mult(P, v1, v2) + mult(P, v1, top)


if __name__ == "__main__":
    main("FACE RING TESTS", globals())
