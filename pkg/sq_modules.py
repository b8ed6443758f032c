"""
Squarefree Modules
Representations of the incidence algebra of P, minimal injective
resolutions, complexes of the injectives A/p_x, the dualizing complex and
the duality functor
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from incidence_cells import diamonds, incidence_function
from linalg_exact import (
    Field,
    FieldMatrix,
    SubcomplexInclusion,
    VectorSpaceComplex,
    cokernel_projection,
    induced_map_on_top_cohomology,
    kernel_basis,
    solve,
)
from poset_core import SimplicialPoset

logger = logging.getLogger(__name__)


class SqModuleError(Exception):
    """Base class for module and complex failures"""


class InvalidModule(SqModuleError):
    """Shapes are wrong or the cover maps do not commute on some diamond"""


class InvalidComplex(SqModuleError):
    """Shapes are wrong, a block violates the order, or d o d != 0"""


class ResolutionTooLong(SqModuleError):
    """An injective resolution needed more than d+1 terms"""


def _block_diagonal(field: Field, blocks: Sequence[FieldMatrix]) -> FieldMatrix:
    rows = []
    col_offset = 0
    for block in blocks:
        rows.extend({j + col_offset: v for j, v in r.items()} for r in block.rows)
        col_offset += block.ncols
    return FieldMatrix(field, len(rows), col_offset, tuple(rows))


# ============================================================================
# LAMBDA-MODULES
# ============================================================================

@dataclass(frozen=True, eq=False)
class LambdaModule:
    """
    A module over the incidence algebra: a vector space of dimension dims[x]
    per element and, for every cover x > y, maps[(x, y)]: N_y -> N_x of
    shape (dims[x], dims[y])
    """
    poset: SimplicialPoset
    field: Field
    dims: Tuple[int, ...]
    maps: Dict[Tuple[int, int], FieldMatrix]

    def is_zero(self) -> bool:
        return not any(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def check(self) -> None:
        P = self.poset
        for x in P.elements:
            for y in P.lower_covers[x]:
                m = self.maps.get((x, y))
                if m is None or m.shape != (self.dims[x], self.dims[y]):
                    raise InvalidModule(f"Cover map {P.labels[y]} -> {P.labels[x]} missing or misshapen")
        for x, z, w, y in diamonds(P):
            left = self.maps[(x, z)] @ self.maps[(z, y)]
            right = self.maps[(x, w)] @ self.maps[(w, y)]
            if left != right:
                raise InvalidModule(f"Cover maps do not commute on the diamond "
                                    f"{P.labels[y]} < {P.labels[z]}, {P.labels[w]} < {P.labels[x]}")


def path_map(N: LambdaModule, x: int, y: int,
             memo: Optional[Dict[Tuple[int, int], FieldMatrix]] = None) -> FieldMatrix:
    """
    e_{x,y}: N_y -> N_x for y <= x, composed along any saturated chain.
    Pass the same memo dict across calls on one module to share prefixes.
    """
    if memo is None:
        memo = {}
    if (x, y) in memo:
        return memo[(x, y)]
    P = N.poset
    if x == y:
        result = FieldMatrix.identity(N.field, N.dims[x])
    elif not P.leq(y, x):
        raise SqModuleError(f"'{P.labels[y]}' is not below '{P.labels[x]}'")
    else:
        z = next(z for z in P.lower_covers[x] if P.leq(y, z))
        result = N.maps[(x, z)] @ path_map(N, z, y, memo)
    memo[(x, y)] = result
    return result


def convex_module(P: SimplicialPoset, field: Field, members: Iterable[int]) -> LambdaModule:
    """k on a convex subset, identity maps inside it, zero elsewhere"""
    S = set(members)
    dims = tuple(1 if x in S else 0 for x in P.elements)
    maps = {}
    for x in P.elements:
        for y in P.lower_covers[x]:
            if x in S and y in S:
                maps[(x, y)] = FieldMatrix.identity(field, 1)
            else:
                maps[(x, y)] = FieldMatrix.zeros(field, dims[x], dims[y])
    return LambdaModule(P, field, dims, maps)


def ring_module(P: SimplicialPoset, field: Field) -> LambdaModule:
    """The module of A itself: k everywhere"""
    return convex_module(P, field, P.elements)


def ideal_module(P: SimplicialPoset, field: Field, x: int) -> LambdaModule:
    """The ideal J_x = (t_x): k on the elements above x"""
    return convex_module(P, field, P.above[x])


def injective_module(P: SimplicialPoset, field: Field, x: int) -> LambdaModule:
    """A/p_x: k on the elements below x"""
    return convex_module(P, field, P.below[x])


def simple_module(P: SimplicialPoset, field: Field, x: int) -> LambdaModule:
    return convex_module(P, field, [x])


def module_direct_sum(modules: Sequence[LambdaModule]) -> LambdaModule:
    P, F = modules[0].poset, modules[0].field
    dims = tuple(sum(N.dims[x] for N in modules) for x in P.elements)
    maps = {key: _block_diagonal(F, [N.maps[key] for N in modules]) for key in modules[0].maps}
    return LambdaModule(P, F, dims, maps)


def change_of_basis(N: LambdaModule, bases: Dict[int, FieldMatrix]) -> LambdaModule:
    """Conjugate by invertible g_x per element: new maps g_x m g_y^-1"""
    F = N.field
    inverses = {x: solve(g, FieldMatrix.identity(F, g.nrows)) for x, g in bases.items()}
    maps = {}
    for (x, y), m in N.maps.items():
        left = bases.get(x)
        right = inverses.get(y)
        if left is not None:
            m = left @ m
        if right is not None:
            m = m @ right
        maps[(x, y)] = m
    return LambdaModule(N.poset, F, N.dims, maps)


def socle(N: LambdaModule) -> Dict[int, FieldMatrix]:
    """Per element, rows spanning the vectors killed by every cover map out of x"""
    P, F = N.poset, N.field
    result = {}
    for x in P.elements:
        stacked = FieldMatrix.zeros(F, 0, N.dims[x])
        for w in P.upper_covers[x]:
            stacked = stacked.vstack(N.maps[(w, x)])
        result[x] = kernel_basis(stacked)
    return result


# ============================================================================
# COMPLEXES OF INJECTIVES
# ============================================================================

@dataclass(frozen=True, eq=False)
class InjComplex:
    """
    Bounded complex of direct sums of A/p_x. terms[k] lists the element of
    each summand in degree start+k; differentials[k] holds the scalars of
    degree start+k -> start+k+1 with shape (#target, #source), an entry
    (j, i) being allowed only when terms[k+1][j] <= terms[k][i]
    """
    poset: SimplicialPoset
    field: Field
    start: int
    terms: Tuple[Tuple[int, ...], ...]
    differentials: Tuple[FieldMatrix, ...]

    @classmethod
    def zero(cls, P: SimplicialPoset, field: Field) -> "InjComplex":
        return cls(P, field, 0, (), ())

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.terms))

    def term(self, degree: int) -> Tuple[int, ...]:
        k = degree - self.start
        return self.terms[k] if 0 <= k < len(self.terms) else ()

    def differential(self, degree: int) -> FieldMatrix:
        k = degree - self.start
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return FieldMatrix.zeros(self.field, len(self.term(degree + 1)), len(self.term(degree)))

    def multiplicities(self, degree: int) -> Dict[int, int]:
        counts: Dict[int, int] = defaultdict(int)
        for x in self.term(degree):
            counts[x] += 1
        return dict(counts)

    def is_zero(self) -> bool:
        return not any(self.terms)

    def check(self) -> None:
        P = self.poset
        if len(self.differentials) != max(len(self.terms) - 1, 0):
            raise InvalidComplex("Need one differential between each pair of adjacent terms")
        for deg in self.degrees:
            D = self.differential(deg)
            source, target = self.term(deg), self.term(deg + 1)
            if D.shape != (len(target), len(source)):
                raise InvalidComplex(f"Differential in degree {deg} has shape {D.shape}")
            for j, row in enumerate(D.rows):
                for i in row:
                    if not P.leq(target[j], source[i]):
                        raise InvalidComplex(
                            f"Degree {deg}: nonzero block from {P.labels[source[i]]} "
                            f"to {P.labels[target[j]]} which is not below it")
            if not (self.differential(deg + 1) @ D).is_zero():
                raise InvalidComplex(f"d o d != 0 starting in degree {deg}")

    def is_minimal(self) -> bool:
        """No nonzero block between two summands at the same element"""
        for deg in self.degrees:
            source, target = self.term(deg), self.term(deg + 1)
            for j, row in enumerate(self.differential(deg).rows):
                if any(source[i] == target[j] for i in row):
                    return False
        return True


def evaluate_at(J: InjComplex, x: int) -> VectorSpaceComplex:
    """The complex of degree-ua(x) pieces: one k per summand at an element >= x"""
    P = J.poset
    keep = [[k for k, y in enumerate(J.term(deg)) if P.leq(x, y)] for deg in J.degrees]
    diffs = tuple(
        J.differentials[k].submatrix(keep[k + 1], keep[k]) for k in range(len(J.differentials))
    )
    return VectorSpaceComplex(J.field, J.start, tuple(len(kp) for kp in keep), diffs)


def dualizing_complex(P: SimplicialPoset, field: Field) -> InjComplex:
    """I_A: degree -i holds one summand per rank-i element, x -> sum eps(x,y) y over y covered by x"""
    eps = incidence_function(P)
    d = P.d
    terms = tuple(tuple(P.of_rank(i)) for i in range(d, -1, -1))
    diffs = []
    for k in range(d):
        source, target = terms[k], terms[k + 1]
        pos = {y: j for j, y in enumerate(target)}
        entries = {(pos[y], i): eps(x, y) for i, x in enumerate(source) for y in P.lower_covers[x]}
        diffs.append(FieldMatrix.from_entries(field, len(target), len(source), entries))
    return InjComplex(P, field, -d, terms, tuple(diffs))


def dd(J: InjComplex) -> InjComplex:
    """
    The duality on complexes of injectives: a summand (x; i, s) in degree
    -i-rho(x) for each summand s of J^i and each x <= elem(s), with
    differential sum eps(x,y) (y; i, s) + (-1)^p sum D[s, s'] (x; i-1, s')
    """
    J.check()
    P, F = J.poset, J.field
    eps = incidence_function(P)
    buckets: Dict[int, List[Tuple[int, int, int]]] = defaultdict(list)
    for i in J.degrees:
        for s, elem in enumerate(J.term(i)):
            for x in sorted(P.below[elem]):
                buckets[-i - P.rank[x]].append((x, i, s))
    if not buckets:
        return InjComplex.zero(P, F)

    lo, hi = min(buckets), max(buckets)
    position = {p: {key: k for k, key in enumerate(buckets[p])} for p in range(lo, hi + 1)}
    diffs = []
    for p in range(lo, hi):
        target = position[p + 1]
        sign = 1 if p % 2 == 0 else -1
        entries: Dict[Tuple[int, int], int] = defaultdict(int)
        for col, (x, i, s) in enumerate(buckets[p]):
            for y in P.lower_covers[x]:
                entries[(target[(y, i, s)], col)] += eps(x, y)
            for s2, v in J.differential(i - 1).rows[s].items():
                entries[(target[(x, i - 1, s2)], col)] = F.add(
                    entries[(target[(x, i - 1, s2)], col)], F.mul(F(sign), v))
        diffs.append(FieldMatrix.from_entries(F, len(buckets[p + 1]), len(buckets[p]), dict(entries)))
    terms = tuple(tuple(x for x, _, _ in buckets[p]) for p in range(lo, hi + 1))
    return InjComplex(P, F, lo, terms, tuple(diffs))


def truncate(J: InjComplex, lo: int) -> InjComplex:
    """Brutal truncation keeping degrees >= lo"""
    if lo <= J.start:
        return J
    cut = lo - J.start
    if cut >= len(J.terms):
        return InjComplex.zero(J.poset, J.field)
    return InjComplex(J.poset, J.field, lo, J.terms[cut:], J.differentials[cut:])


def shift(J: InjComplex, k: int) -> InjComplex:
    """J[k]: degree p holds J^(p+k), differentials scaled by (-1)^k"""
    diffs = J.differentials if k % 2 == 0 else tuple(D.scale(-1) for D in J.differentials)
    return InjComplex(J.poset, J.field, J.start - k, J.terms, diffs)


def complex_direct_sum(complexes: Sequence[InjComplex]) -> InjComplex:
    live = [J for J in complexes if J.terms]
    if not live:
        return complexes[0]
    P, F = live[0].poset, live[0].field
    lo = min(J.start for J in live)
    hi = max(J.start + len(J.terms) for J in live)
    terms = tuple(sum((J.term(deg) for J in live), ()) for deg in range(lo, hi))
    diffs = tuple(_block_diagonal(F, [J.differential(deg) for J in live]) for deg in range(lo, hi - 1))
    return InjComplex(P, F, lo, terms, diffs)


# ============================================================================
# INJECTIVE RESOLUTIONS
# ============================================================================

def _at_or_above(P: SimplicialPoset, summands: Sequence[int], y: int) -> List[int]:
    return [k for k, x in enumerate(summands) if P.leq(y, x)]


def _envelope(N: LambdaModule) -> Tuple[Tuple[int, ...], Dict[int, FieldMatrix]]:
    """
    Socle envelope N -> E = sum over x of (A/p_x)^(dim soc_x). Returns the
    summand elements and, per y, the embedding N_y -> E_y whose rows follow
    the summands at elements >= y
    """
    P, F = N.poset, N.field
    summands: List[int] = []
    functionals: List[FieldMatrix] = []
    for x, S in socle(N).items():
        if S.nrows == 0:
            continue
        # left inverse of the socle inclusion, one functional per socle vector
        splitting = solve(S, FieldMatrix.identity(F, S.nrows)).transpose()
        for r in range(S.nrows):
            summands.append(x)
            functionals.append(splitting.submatrix([r], range(splitting.ncols)))
    embedding = {}
    paths: Dict[Tuple[int, int], FieldMatrix] = {}
    for y in P.elements:
        rows = FieldMatrix.zeros(F, 0, N.dims[y])
        for k in _at_or_above(P, summands, y):
            rows = rows.vstack(functionals[k] @ path_map(N, summands[k], y, paths))
        embedding[y] = rows
    return tuple(summands), embedding


def _restriction(P: SimplicialPoset, field: Field, summands: Sequence[int], x: int, y: int) -> FieldMatrix:
    """E_y -> E_x for x covering y: keep the summands at elements >= x"""
    source = _at_or_above(P, summands, y)
    target = _at_or_above(P, summands, x)
    pos = {k: i for i, k in enumerate(source)}
    return FieldMatrix.from_entries(field, len(target), len(source),
                                    {(j, pos[k]): 1 for j, k in enumerate(target)})


def injective_resolution(N: LambdaModule) -> InjComplex:
    """Minimal injective resolution 0 -> N -> E^0 -> ... -> E^l, l <= d"""
    P, F = N.poset, N.field
    terms: List[Tuple[int, ...]] = []
    diffs: List[FieldMatrix] = []
    current = N
    previous: Optional[Tuple[Tuple[int, ...], Dict[int, FieldMatrix]]] = None
    while not current.is_zero():
        if len(terms) > P.d:
            raise ResolutionTooLong(f"Injective resolution exceeds length {P.d}")
        summands, embedding = _envelope(current)
        if previous is not None:
            prev_summands, projection = previous
            entries = {}
            for j, xj in enumerate(summands):
                composite = embedding[xj] @ projection[xj]
                row = _at_or_above(P, summands, xj).index(j)
                cols = _at_or_above(P, prev_summands, xj)
                for c, v in composite.rows[row].items():
                    entries[(j, cols[c])] = v
            diffs.append(FieldMatrix.from_entries(F, len(summands), len(prev_summands), entries))
        terms.append(summands)

        projection = {y: cokernel_projection(embedding[y]) for y in P.elements}
        sections = {y: solve(Q, FieldMatrix.identity(F, Q.nrows)) for y, Q in projection.items()}
        maps = {}
        for x in P.elements:
            for y in P.lower_covers[x]:
                maps[(x, y)] = projection[x] @ _restriction(P, F, summands, x, y) @ sections[y]
        current = LambdaModule(P, F, tuple(projection[y].nrows for y in P.elements), maps)
        previous = (summands, projection)

    J = InjComplex(P, F, 0, tuple(terms), tuple(diffs))
    if not J.is_minimal():
        raise SqModuleError("Socle envelope produced a non-minimal resolution")
    logger.debug(f"Injective resolution of length {max(len(terms) - 1, 0)}")
    return J


def injective_envelope(N: LambdaModule) -> Tuple[int, ...]:
    """Summand elements of the injective envelope of N"""
    return _envelope(N)[0]


# ============================================================================
# CANONICAL MODULE
# ============================================================================

@dataclass(frozen=True)
class CanonicalModuleView:
    """omega: omega_x = H^d(K_x)^*, cover maps dual to the maps induced by K_x' in K_x"""
    module: LambdaModule

    def is_constant(self) -> bool:
        """All pieces one-dimensional and every cover map nonzero"""
        N = self.module
        return all(dim == 1 for dim in N.dims) and all(not m.is_zero() for m in N.maps.values())


def canonical_module(P: SimplicialPoset, field: Field) -> CanonicalModuleView:
    from cohomology_classify import k_complex

    d = P.d
    kx = {x: k_complex(P, x, field) for x in P.elements}
    maps = {}
    dims = []
    for x in P.elements:
        dims.append(kx[x].top_cohomology_dim())
    for x in P.elements:
        for y in P.lower_covers[x]:
            # K_x sits inside K_y; omega_y -> omega_x is the dual of H^d(K_x) -> H^d(K_y)
            incl = SubcomplexInclusion(kx[x].complex, kx[y].complex, kx[y].inclusion_from(kx[x]))
            maps[(x, y)] = induced_map_on_top_cohomology(incl, d).transpose()
    return CanonicalModuleView(LambdaModule(P, field, tuple(dims), maps))
