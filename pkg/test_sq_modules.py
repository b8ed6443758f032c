#!/usr/bin/env python3
"""
Tests for squarefree modules and complexes of injectives
Module axioms, the dualizing complex, injective resolutions and the duality
"""

import numpy as np
import pytest

from corpus import corpus_member, glued_simplices, list_members, random_inj_complex, random_lambda_module
from linalg_exact import Field, FieldMatrix, cohomology_dims
from oracles import cohomology_profile, duality_is_involutive, resolution_matches_k_complexes, square_zero_everywhere
from poset_core import boolean, skeleton
from sq_modules import (
    InjComplex,
    InvalidComplex,
    InvalidModule,
    LambdaModule,
    canonical_module,
    complex_direct_sum,
    dd,
    dualizing_complex,
    evaluate_at,
    ideal_module,
    injective_envelope,
    injective_module,
    injective_resolution,
    module_direct_sum,
    path_map,
    ring_module,
    shift,
    simple_module,
    socle,
    truncate,
)
from testing_support import main

QQ = Field.rationals()
GF2 = Field.gf(2)


def labels(P, elements):
    return sorted(P.labels[x] for x in elements)


def test_module_constructors_are_valid():
    P = glued_simplices(1)
    for x in P.elements:
        for N in (ideal_module(P, QQ, x), injective_module(P, QQ, x), simple_module(P, QQ, x)):
            N.check()
    A = ring_module(P, QQ)
    A.check()
    assert A.total_dim == P.size
    assert module_direct_sum([A, A]).dims == tuple(2 for _ in P.elements)


def test_module_check_catches_bad_maps():
    P = boolean(1)
    with pytest.raises(InvalidModule):
        LambdaModule(P, QQ, (1, 1), {}).check()
    P = boolean(2)
    A = ring_module(P, QQ)
    maps = dict(A.maps)
    top = P.element("{1,2}")
    maps[(top, P.atom(1))] = FieldMatrix.from_dense(QQ, [[2]])
    with pytest.raises(InvalidModule):
        LambdaModule(P, QQ, A.dims, maps).check()


def test_path_map_and_socle():
    P = glued_simplices(1)
    A = ring_module(P, QQ)
    top1 = P.element("top1")
    assert path_map(A, top1, P.bottom) == FieldMatrix.identity(QQ, 1)
    soc = socle(A)
    assert [x for x in P.elements if soc[x].nrows] == [top1, P.element("top2")]
    assert labels(P, injective_envelope(ideal_module(P, QQ, P.atom(1)))) == ["top1", "top2"]


def test_path_maps_share_a_memo():
    P = boolean(2)
    A = ring_module(P, QQ)
    top = P.element("{1,2}")
    memo = {}
    assert path_map(A, top, P.bottom, memo) == FieldMatrix.identity(QQ, 1)
    assert len(memo) == 3 and memo[(P.bottom, P.bottom)] == FieldMatrix.identity(QQ, 1)
    assert not hasattr(path_map, "cache_info")


def test_dualizing_complex_of_digon():
    P = glued_simplices(1)
    I = dualizing_complex(P, QQ)
    I.check()
    assert I.start == -2
    assert [labels(P, I.term(p)) for p in I.degrees] == [["top1", "top2"], ["{1}", "{2}"], ["{}"]]
    assert I.is_minimal()
    C = evaluate_at(I, P.bottom)
    assert C.dims == (2, 2, 1)
    assert cohomology_dims(C) == (1, 0, 0)


def test_dualizing_complex_square_zero_on_corpus():
    for name in list_members():
        P = corpus_member(name)
        for field in (QQ, GF2):
            dualizing_complex(P, field).check()
            assert square_zero_everywhere(P, field), f"{name} over {field}"


def test_invalid_complex():
    P = glued_simplices(1)
    D = FieldMatrix.from_dense(QQ, [[1]])
    with pytest.raises(InvalidComplex):
        InjComplex(P, QQ, 0, ((P.bottom,), (P.atom(1),)), (D,)).check()
    with pytest.raises(InvalidComplex):
        InjComplex(P, QQ, 0, ((P.atom(1),), (P.bottom,)), ()).check()


def test_resolution_of_boolean_ring():
    P = boolean(1)
    J = injective_resolution(ring_module(P, QQ))
    assert J.terms == ((P.atom(1),),)


def test_resolution_of_digon_ring():
    P = glued_simplices(1)
    J = injective_resolution(ring_module(P, QQ))
    J.check()
    assert J.is_minimal()
    assert [labels(P, J.term(i)) for i in J.degrees] == [["top1", "top2"], ["{1}", "{2}"], ["{}"]]


def test_resolutions_are_exact():
    P = corpus_member("edge_plus_triangle")
    rng = np.random.default_rng(3)
    for trial in range(5):
        N = random_lambda_module(P, QQ, rng)
        N.check()
        J = injective_resolution(N)
        J.check()
        assert J.is_minimal(), f"trial {trial} (seed 3)"
        assert len(J.terms) <= P.d + 1
        # H^0 recovers N and nothing survives above degree 0
        profile = cohomology_profile(J)
        assert {key: v for key, v in profile.items() if key[1] != 0} == {}
        assert all(profile.get((x, 0), 0) == N.dims[x] for x in P.elements), f"trial {trial}"


def test_dd_of_single_injective():
    P = boolean(1)
    a = P.atom(1)
    J = InjComplex(P, QQ, 0, ((a,),), ())
    D = dd(J)
    D.check()
    assert D.start == -1
    assert D.terms == ((a,), (P.bottom,))
    assert cohomology_profile(D) == {(a, -1): 1}


def test_duality_involution_on_small_posets():
    for name in ("digon", "boolean(2)", "edge_plus_triangle"):
        P = corpus_member(name)
        for field in (QQ, GF2):
            rng = np.random.default_rng(29)
            for trial in range(5):
                J = random_inj_complex(P, field, rng)
                J.check()
                assert duality_is_involutive(J), f"{name} over {field}, trial {trial} (seed 29)"


def test_resolution_dual_matches_k_complexes():
    for name in ("boolean(1)", "digon", "two_triangles", "glued_simplices(2)"):
        P = corpus_member(name)
        assert resolution_matches_k_complexes(P, QQ), name


def test_truncation_is_skeleton_dualizing_complex():
    for name in ("digon", "glued_simplices(2)", "rp2_six_vertex", "edge_plus_triangle"):
        P = corpus_member(name)
        I = dualizing_complex(P, QQ)
        for i in range(P.d):
            S = skeleton(P, i)
            T = truncate(I, -(i + 1))
            expected = dualizing_complex(S, QQ)
            assert T.start == expected.start, f"{name} skeleton {i}"
            assert [labels(P, t) for t in T.terms] == [labels(S, t) for t in expected.terms]
            assert [D.nnz for D in T.differentials] == [D.nnz for D in expected.differentials]


def test_shift_and_sum():
    P = glued_simplices(1)
    I = dualizing_complex(P, QQ)
    S = shift(I, 1)
    assert S.start == I.start - 1
    assert S.differentials[0] == I.differentials[0].scale(-1)
    S.check()
    total = complex_direct_sum([I, shift(I, 2)])
    total.check()
    assert len(total.term(-2)) == len(I.term(-2)) + len(I.term(0))
    assert truncate(I, 5).is_zero()


def test_canonical_module_of_digon_is_constant():
    P = glued_simplices(1)
    omega = canonical_module(P, QQ)
    omega.module.check()
    assert omega.is_constant()
    assert not canonical_module(boolean(1), QQ).is_constant()


if __name__ == "__main__":
    main("SQUAREFREE MODULE TESTS", globals())
