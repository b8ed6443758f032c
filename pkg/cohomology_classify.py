"""
Local Cohomology and Classification
K_x complexes, local cohomology tables and the ring-property decisions:
depth, Cohen-Macaulay, Buchsbaum, Gorenstein*, Gorenstein, Serre (S_r)
"""

import logging
from dataclasses import asdict, dataclass, field as dc_field
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from face_ring import f_vector, h_vector
from incidence_cells import incidence_function
from linalg_exact import Field, FieldMatrix, VectorSpaceComplex, cohomology_dims
from poset_core import SimplicialPoset, atom_support_profile, join_set, restrict, skeleton
from sq_modules import canonical_module

try:
    import config
except ImportError:
    config = None

POSET_CACHE_SIZE = getattr(config, "POSET_CACHE_SIZE", 128)
K_COMPLEX_CACHE_SIZE = getattr(config, "K_COMPLEX_CACHE_SIZE", 4096)

logger = logging.getLogger(__name__)

CM_MARKER = "CM"
FAILS_S2_MARKER = "fails S_2"

SerreValue = Union[int, str]


class ClassificationError(Exception):
    """Base class for classification failures"""


class DegenerateRankZero(ClassificationError):
    """The one-element poset; depth is defined as 0"""


class FactorizationAssertFailed(ClassificationError):
    """Peeling a cone atom did not give a product decomposition"""


# ============================================================================
# K_x COMPLEXES
# ============================================================================

@dataclass(frozen=True)
class KComplex:
    """Basis {b_z : z >= x} by rank, with b_z -> sum eps(w,z) b_w over w covering z"""
    base: int
    basis: Tuple[Tuple[int, ...], ...]
    complex: VectorSpaceComplex

    def top_cohomology_dim(self) -> int:
        dims = cohomology_dims(self.complex)
        return dims[-1] if dims else 0

    def inclusion_from(self, sub: "KComplex") -> Dict[int, FieldMatrix]:
        """Degreewise inclusion of a smaller K complex (base above ours) into this one"""
        F = self.complex.field
        maps = {}
        for deg in sub.complex.degrees:
            source = sub.basis[deg - sub.complex.start]
            target = self.basis[deg - self.complex.start]
            pos = {z: j for j, z in enumerate(target)}
            maps[deg] = FieldMatrix.from_entries(F, len(target), len(source),
                                                 {(pos[z], i): 1 for i, z in enumerate(source)})
        return maps


@lru_cache(maxsize=K_COMPLEX_CACHE_SIZE)
def k_complex(P: SimplicialPoset, x: int, field: Field) -> KComplex:
    eps = incidence_function(P)
    up = P.above[x]
    basis = tuple(tuple(z for z in P.of_rank(i) if z in up) for i in range(P.rank[x], P.d + 1))
    diffs = []
    for k in range(len(basis) - 1):
        source, target = basis[k], basis[k + 1]
        pos = {w: j for j, w in enumerate(target)}
        entries = {(pos[w], i): eps(w, z) for i, z in enumerate(source) for w in P.upper_covers[z]}
        diffs.append(FieldMatrix.from_entries(field, len(target), len(source), entries))
    C = VectorSpaceComplex(field, P.rank[x], tuple(len(b) for b in basis), tuple(diffs))
    return KComplex(x, basis, C)


@dataclass(frozen=True)
class LocalCohomologyTable:
    """dim H^i(K_x) for every element x and every degree rho(x) <= i <= d"""
    field: Field
    d: int
    entries: Dict[Tuple[int, int], int]

    def get(self, x: int, i: int) -> int:
        return self.entries.get((x, i), 0)

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {key: v for key, v in self.entries.items() if v}

    def degrees_with_cohomology(self) -> List[int]:
        return sorted({i for (_, i), v in self.entries.items() if v})


@lru_cache(maxsize=POSET_CACHE_SIZE)
def local_cohomology_table(P: SimplicialPoset, field: Field) -> LocalCohomologyTable:
    entries = {}
    for x in P.elements:
        C = k_complex(P, x, field).complex
        for deg, dim in zip(C.degrees, cohomology_dims(C)):
            entries[(x, deg)] = dim
    logger.debug(f"Local cohomology table over {field} for {P}: {len(entries)} entries")
    return LocalCohomologyTable(field, P.d, entries)


def reduced_cohomology_X(P: SimplicialPoset, field: Field) -> Tuple[int, ...]:
    """(dim H~^0(X), ..., dim H~^(d-1)(X)) read off K at the least element"""
    table = local_cohomology_table(P, field)
    return tuple(table.get(P.bottom, i) for i in range(1, P.d + 1))


# ============================================================================
# DEPTH, CM, BUCHSBAUM
# ============================================================================

def depth(P: SimplicialPoset, field: Field, strict: bool = False) -> int:
    """min{i : some H^i(K_x) != 0}"""
    if P.d == 0:
        if strict:
            raise DegenerateRankZero("The one-element poset has depth 0 by convention")
        logger.warning("Rank-0 poset: depth is 0 by convention")
        return 0
    degrees = local_cohomology_table(P, field).degrees_with_cohomology()
    if not degrees or degrees[-1] != P.d:
        raise ClassificationError(f"Top local cohomology is not in degree {P.d}: {degrees}")
    return degrees[0]


def is_cohen_macaulay(P: SimplicialPoset, field: Field) -> bool:
    return depth(P, field) == P.d


def is_buchsbaum(P: SimplicialPoset, field: Field) -> bool:
    """H^i(K_x) = 0 for every i < d and every x other than the least element"""
    table = local_cohomology_table(P, field)
    return not any(v and i < P.d and x != P.bottom for (x, i), v in table.entries.items())


def is_pure(P: SimplicialPoset) -> bool:
    return all(P.rank[x] == P.d for x in P.maximal)


# ============================================================================
# GORENSTEIN
# ============================================================================

def is_gorenstein_star(P: SimplicialPoset, field: Field) -> bool:
    """CM and the canonical module is constant: every omega_x is k and every cover map nonzero"""
    if P.d == 0:
        return True
    if not is_cohen_macaulay(P, field):
        return False
    return canonical_module(P, field).is_constant()


def _peelable(Q: SimplicialPoset, atom: int) -> bool:
    return all(len(join_set(Q, atom, z)) == 1 for z in Q.elements)


def _peel(Q: SimplicialPoset, atom: int) -> SimplicialPoset:
    """Split Q = 2^{atom} x core and check the product bijection"""
    keep = [z for z in Q.elements if not Q.leq(atom, z)]
    lifted = {}
    for z in keep:
        (top,) = join_set(Q, atom, z)
        lifted[z] = top
    psi = {(0, z): z for z in keep}
    psi.update({(1, z): lifted[z] for z in keep})
    if len(set(psi.values())) != len(psi) or set(psi.values()) != set(Q.elements):
        raise FactorizationAssertFailed(
            f"Cone atom '{Q.labels[atom]}' does not split off a boolean factor")
    for (a, z), image in psi.items():
        for (b, w), other in psi.items():
            if (a <= b and Q.leq(z, w)) != Q.leq(image, other):
                raise FactorizationAssertFailed(
                    f"Peeling '{Q.labels[atom]}' is not an order isomorphism at "
                    f"'{Q.labels[image]}' and '{Q.labels[other]}'")
    return restrict(Q, keep)


def gorenstein_factor(P: SimplicialPoset, order: Optional[Sequence[int]] = None
                      ) -> Tuple[Tuple[int, ...], SimplicialPoset]:
    """
    Repeatedly peel cone atoms (#[y_i v z] = 1 for every z). Returns the
    peeled atom numbers V of P and the core Q with P = 2^V x Q.
    order lists atom numbers in the order they are tried.
    """
    priority = list(order) if order is not None else list(range(1, P.n + 1))
    number_of = {P.labels[P.atom(i)]: i for i in range(1, P.n + 1)}
    Q = P
    peeled: List[int] = []
    while True:
        candidates = [i for i in priority if i not in peeled]
        for i in candidates:
            label = P.labels[P.atom(i)]
            if label not in Q.index:
                continue
            atom = Q.element(label)
            if _peelable(Q, atom):
                Q = _peel(Q, atom)
                peeled.append(number_of[label])
                break
        else:
            break
    logger.debug(f"Cone set {sorted(peeled)} with core of size {Q.size}")
    return tuple(sorted(peeled)), Q


def is_gorenstein(P: SimplicialPoset, field: Field) -> bool:
    _, core = gorenstein_factor(P)
    return is_gorenstein_star(core, field)


# ============================================================================
# SERRE CONDITIONS AND CROSS-CHECKS
# ============================================================================

def serre_dims(P: SimplicialPoset, field: Field) -> Tuple[Optional[int], ...]:
    """Module dimension of H^-i(I_A) for i = 0..d: max rho(x) with H^i(K_x) != 0, None if none"""
    table = local_cohomology_table(P, field)
    dims: List[Optional[int]] = []
    for i in range(P.d + 1):
        ranks = [P.rank[x] for (x, j), v in table.entries.items() if j == i and v]
        dims.append(max(ranks) if ranks else None)
    return tuple(dims)


def serre_max_r(P: SimplicialPoset, field: Field) -> SerreValue:
    """Largest r >= 2 with dim H^-i(I_A) <= i - r for all i < d, or the CM / fails S_2 markers"""
    dims = serre_dims(P, field)
    slack = [i - dims[i] for i in range(P.d) if dims[i] is not None]
    if not slack:
        return CM_MARKER
    r = min(slack)
    if r < 2:
        return FAILS_S2_MARKER
    if not is_pure(P):
        raise ClassificationError(f"Serre value {r} on a non-pure poset")
    return r


def _serre_as_int(P: SimplicialPoset, value: SerreValue) -> int:
    if value == CM_MARKER:
        return P.d
    if value == FAILS_S2_MARKER:
        return 1
    return int(value)


def skeleton_depth_crosscheck(P: SimplicialPoset, field: Field) -> bool:
    """depth A = 1 + max{i : the i-skeleton is CM}, with skeletons rebuilt from scratch"""
    if P.d == 0:
        return True
    cm_levels = [i for i in range(P.d) if is_cohen_macaulay(skeleton(P, i), field)]
    rhs = 1 + max(cm_levels) if cm_levels else 0
    lhs = depth(P, field)
    if lhs != rhs:
        logger.error(f"Skeleton depth equation fails over {field}: depth {lhs}, skeleton side {rhs}")
    return lhs == rhs


def murai_terai_check(P: SimplicialPoset, field: Field) -> bool:
    """(S_r) forces h_i >= 0 for i <= r"""
    r = min(_serre_as_int(P, serre_max_r(P, field)), P.d)
    h = h_vector(P)
    bad = [i for i in range(r + 1) if h[i] < 0]
    if bad:
        logger.error(f"h-vector {h} negative at {bad} although (S_{r}) holds over {field}")
    return not bad


def jx_local_cohomology(P: SimplicialPoset, x: int, field: Field) -> Dict[Tuple[int, int], int]:
    """dim H^i_m(J_x) in degrees with support y: sum over z in [x v y] of dim H^i(K_z)"""
    table = local_cohomology_table(P, field)
    result = {}
    for y in P.elements:
        tops = join_set(P, x, y)
        for i in range(P.d + 1):
            result[(y, i)] = sum(table.get(z, i) for z in tops)
    return result


def jx_vanishes_below_top(P: SimplicialPoset, x: int, field: Field) -> bool:
    return not any(v for (y, i), v in jx_local_cohomology(P, x, field).items() if i < P.d)


# ============================================================================
# REPORT
# ============================================================================

@dataclass
class ClassificationReport:
    """Field-dependent verdicts for one poset"""
    field: str
    d: int
    depth: int
    f_vector: List[int]
    h_vector: List[int]
    cm: bool
    buchsbaum: bool
    gorenstein_star: bool
    gorenstein: bool
    cone_set: List[int]
    max_serre_r: str
    serre_dims: List[Optional[int]] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def classify(P: SimplicialPoset, field: Field) -> ClassificationReport:
    logger.info(f"Classifying poset with {P.size} elements (rank {P.d}) over {field}")
    cone_set, core = gorenstein_factor(P)
    cm = is_cohen_macaulay(P, field)
    report = ClassificationReport(
        field=field.descriptor,
        d=P.d,
        depth=depth(P, field),
        f_vector=list(f_vector(P)),
        h_vector=list(h_vector(P)),
        cm=cm,
        buchsbaum=is_buchsbaum(P, field),
        gorenstein_star=is_gorenstein_star(P, field),
        gorenstein=is_gorenstein_star(core, field),
        cone_set=list(cone_set),
        max_serre_r=str(serre_max_r(P, field)),
        serre_dims=list(serre_dims(P, field)),
    )
    logger.info(f"Depth {report.depth}, CM {report.cm}, Gorenstein* {report.gorenstein_star}")
    return report


def peeling_orders_agree(P: SimplicialPoset, max_atoms: int = 5) -> bool:
    """Every atom order yields the same cone set and core support profile"""
    if P.n > max_atoms:
        return True
    results = set()
    for order in permutations(range(1, P.n + 1)):
        cone_set, core = gorenstein_factor(P, order)
        results.add((cone_set, atom_support_profile(core)))
    return len(results) == 1
