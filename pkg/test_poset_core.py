#!/usr/bin/env python3
"""
Tests for simplicial posets and incidence signs
Validation, order queries, constructions and the diamond sign identity
"""

import pytest

from corpus import corpus_member, glued_simplices, list_members
from incidence_cells import NotACover, NotMember, alpha, epsilon, verify_incidence
from poset_core import (
    BOTTOM_LABEL,
    IndexOutOfRange,
    MeetUndefined,
    NoLeastElement,
    NonBooleanInterval,
    NotAPoset,
    PosetError,
    RawPoset,
    atom_support_profile,
    boolean,
    disjoint_union,
    f_counts,
    from_facets,
    is_boolean,
    is_meet_semilattice,
    join_set,
    meet,
    multi_join_set,
    product,
    restrict,
    skeleton,
    validate,
)
from testing_support import main


def test_from_facets_path():
    P = from_facets([[1, 2], [2, 3]])
    assert P.size == 6
    assert (P.n, P.d) == (3, 2)
    assert P.labels[P.bottom] == BOTTOM_LABEL
    assert f_counts(P) == (1, 3, 2)
    edge = P.element("{1,2}")
    assert P.support[edge] == frozenset({1, 2})
    assert P.leq(P.atom(1), edge) and not P.leq(P.atom(3), edge)
    assert P.covers(edge, P.atom(2))
    assert sorted(P.labels[x] for x in P.maximal) == ["{1,2}", "{2,3}"]


def test_validate_rejects_non_boolean_interval():
    raw = RawPoset(["0", "a", "b", "c", "t"],
                   [("a", "0"), ("b", "0"), ("c", "0"), ("t", "a"), ("t", "b"), ("t", "c")])
    with pytest.raises(NonBooleanInterval) as info:
        validate(raw)
    assert info.value.element == "t"


def test_validate_rejects_bad_orders():
    with pytest.raises(NotAPoset):
        validate(RawPoset(["0", "a", "b"], [("a", "0"), ("a", "b"), ("b", "a")]))
    with pytest.raises(NotAPoset):
        validate(RawPoset(["0", "a", "a"], [("a", "0")]))
    with pytest.raises(NotAPoset):
        validate(RawPoset(["0", "a"], [("a", "z")]))
    with pytest.raises(NoLeastElement):
        validate(RawPoset(["a", "b"]))


def test_validate_accepts_corpus():
    for name in list_members():
        P = corpus_member(name)
        assert P.rank[P.bottom] == 0, name
        assert all(len(P.below[x]) == 2 ** P.rank[x] for x in P.elements), name


def test_digon_join_and_meet():
    P = glued_simplices(1)
    v1, v2 = P.atom(1), P.atom(2)
    tops = join_set(P, v1, v2)
    assert {P.labels[z] for z in tops} == {"top1", "top2"}
    assert meet(P, v1, v2) == P.bottom
    with pytest.raises(MeetUndefined):
        meet(P, P.element("top1"), P.element("top2"))
    assert not is_meet_semilattice(P)
    assert multi_join_set(P, []) == frozenset({P.bottom})


def test_meet_needs_upper_bound():
    P = from_facets([[1], [2]])
    assert join_set(P, P.atom(1), P.atom(2)) == frozenset()
    with pytest.raises(MeetUndefined):
        meet(P, P.atom(1), P.atom(2))


def test_meet_in_a_simplex():
    P = boolean(3)
    a, b = P.element("{1,2}"), P.element("{2,3}")
    assert P.labels[meet(P, a, b)] == "{2}"
    assert {P.labels[z] for z in join_set(P, a, b)} == {"{1,2,3}"}
    assert is_boolean(P) and is_meet_semilattice(P)


def test_skeleton():
    P = glued_simplices(2)
    S = skeleton(P, 0)
    assert S.d == 1 and S.size == 4
    assert skeleton(P, 1).d == 2
    with pytest.raises(IndexOutOfRange):
        skeleton(P, P.d)
    with pytest.raises(IndexOutOfRange):
        skeleton(P, -1)


def test_restrict_requires_order_ideal():
    P = boolean(2)
    with pytest.raises(PosetError):
        restrict(P, [P.element("{1,2}")])
    Q = restrict(P, [P.atom(1)])
    assert Q.size == 2


def test_product_with_boolean():
    P = product(boolean(1), glued_simplices(1))
    assert f_counts(P) == (1, 3, 4, 2)
    assert P.labels[P.atom(1)] == "({1},{})"
    assert P.labels[P.bottom] == BOTTOM_LABEL
    assert product(boolean(1), boolean(1)).size == 4


def test_disjoint_union_relabels_clashes():
    P = disjoint_union(boolean(1), boolean(1))
    assert P.size == 3 and P.n == 2
    assert set(P.labels) == {BOTTOM_LABEL, "1:{1}", "2:{1}"}


def test_disjoint_corpus_members():
    P = corpus_member("two_triangles")
    assert atom_support_profile(P) == atom_support_profile(from_facets([[1, 2, 3], [4, 5, 6]]))
    P = corpus_member("edge_plus_triangle")
    assert f_counts(P) == (1, 5, 4, 1)
    assert is_meet_semilattice(P)


def test_products_of_booleans_are_boolean():
    for a in range(3):
        for b in range(3):
            P = product(boolean(a), boolean(b))
            assert is_boolean(P), f"{a} x {b}"
            assert atom_support_profile(P) == atom_support_profile(boolean(a + b)), f"{a} x {b}"


def shape(P):
    """Labels with their lower covers, independent of element numbering"""
    return sorted((P.labels[x], tuple(sorted(P.labels[y] for y in P.lower_covers[x]))) for x in P.elements)


def test_skeleton_of_skeleton():
    for name in list_members():
        P = corpus_member(name)
        for i in range(P.d):
            S = skeleton(P, i)
            for j in range(S.d):
                assert shape(skeleton(S, j)) == shape(skeleton(P, min(i, j))), f"{name} ({i}, {j})"


def test_join_sets_are_antichains():
    for name in list_members():
        P = corpus_member(name)
        for x in P.elements:
            for y in P.elements:
                joins = join_set(P, x, y)
                assert all(P.leq(x, z) and P.leq(y, z) for z in joins)
                for z in joins:
                    for w in joins:
                        assert z == w or not P.leq(z, w), f"{name}: {P.labels[z]} <= {P.labels[w]}"


def test_boolean_zero():
    P = boolean(0)
    assert P.size == 1 and P.d == 0 and P.n == 0


def test_atom_support_profile():
    assert atom_support_profile(glued_simplices(1)) == ((), (1,), (2,), (1, 2), (1, 2))


def test_alpha():
    assert alpha(4, {1, 3, 4}) == 2
    assert alpha(3, {1, 2, 3, 5}) == 2
    assert alpha(1, {1}) == 0
    with pytest.raises(NotMember):
        alpha(2, {1, 3})


def test_epsilon():
    P = boolean(2)
    top = P.element("{1,2}")
    assert epsilon(P, top, P.atom(2)) == 1
    assert epsilon(P, top, P.atom(1)) == -1
    assert epsilon(P, P.atom(1), P.bottom) == 1
    with pytest.raises(NotACover):
        epsilon(P, top, P.bottom)


def test_incidence_identity_on_corpus():
    for name in list_members():
        report = verify_incidence(corpus_member(name))
        assert report.ok, f"{name}: {report.failing}"
    assert verify_incidence(glued_simplices(3)).diamonds_checked > 0


if __name__ == "__main__":
    main("SIMPLICIAL POSET TESTS", globals())
