"""
Oracles and Cross-Checks
An independent simplicial-cochain computation of link cohomology, and the
runner that pits every pair of independent routes against each other
"""

import logging
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np

from cohomology_classify import (
    is_buchsbaum,
    is_cohen_macaulay,
    jx_vanishes_below_top,
    k_complex,
    local_cohomology_table,
    murai_terai_check,
    skeleton_depth_crosscheck,
)
from corpus import random_inj_complex, random_lambda_module
from face_ring import (
    RingElement,
    chain_of_mdegree,
    hilbert_series_check,
    make_mdegree,
    mult,
    mult_mdegree,
    straighten,
)
from incidence_cells import verify_incidence
from linalg_exact import Field, FieldMatrix, VectorSpaceComplex, cohomology_dims
from poset_core import SimplicialPoset, is_meet_semilattice
from sq_modules import (
    InjComplex,
    dd,
    dualizing_complex,
    evaluate_at,
    injective_envelope,
    injective_resolution,
    ring_module,
)

try:
    import config
except ImportError:
    config = None

ORACLE_SEED = getattr(config, "ORACLE_SEED", 0)
ORACLE_RING_PRODUCTS = getattr(config, "ORACLE_RING_PRODUCTS", 200)
ORACLE_RING_TRIPLES = getattr(config, "ORACLE_RING_TRIPLES", 100)
ORACLE_INJ_COMPLEXES = getattr(config, "ORACLE_INJ_COMPLEXES", 50)
ORACLE_LAMBDA_MODULES = getattr(config, "ORACLE_LAMBDA_MODULES", 20)

logger = logging.getLogger(__name__)

Face = FrozenSet[int]


# ============================================================================
# LINK COHOMOLOGY
# ============================================================================

def closure(facets: Iterable[Iterable[int]]) -> Set[Face]:
    """All faces of the complex generated by the facets, empty face included"""
    faces: Set[Face] = set()
    for facet in facets:
        facet = tuple(facet)
        for k in range(len(facet) + 1):
            faces.update(frozenset(c) for c in combinations(facet, k))
    return faces


def link(faces: Set[Face], face: Face) -> Set[Face]:
    return {G for G in faces if not G & face and G | face in faces}


def link_reduced_cohomology(faces: Set[Face], face: Face, field: Field) -> Dict[int, int]:
    """dim H~^j(lk face) for j = -1 .. dim lk, by the simplicial coboundary"""
    lk = link(faces, face)
    top = max(len(G) for G in lk)
    layers = [sorted((tuple(sorted(G)) for G in lk if len(G) == k)) for k in range(top + 1)]
    dims = tuple(len(layer) for layer in layers)
    diffs = []
    for k in range(top):
        source, target = layers[k], layers[k + 1]
        pos = {s: i for i, s in enumerate(source)}
        entries = {}
        for j, H in enumerate(target):
            for idx in range(len(H)):
                entries[(j, pos[H[:idx] + H[idx + 1:]])] = (-1) ** idx
        diffs.append(FieldMatrix.from_entries(field, len(target), len(source), entries))
    C = VectorSpaceComplex(field, -1, dims, tuple(diffs))
    return dict(zip(C.degrees, cohomology_dims(C)))


def link_oracle(P: SimplicialPoset, field: Field) -> bool:
    """dim H^i(K_x) = dim H~^(i-rho(x)-1)(lk x) for every face x and degree i"""
    faces = {frozenset(s) for s in P.support}
    table = local_cohomology_table(P, field)
    for x in P.elements:
        reduced = link_reduced_cohomology(faces, P.support[x], field)
        for i in range(P.rank[x], P.d + 1):
            expected = reduced.get(i - P.rank[x] - 1, 0)
            if table.get(x, i) != expected:
                logger.error(f"Link oracle disagrees at '{P.labels[x]}' degree {i}: "
                             f"K gives {table.get(x, i)}, link gives {expected}")
                return False
    return True


# ============================================================================
# RING, COMPLEX AND DUALITY CHECKS
# ============================================================================

def random_mdegree(P: SimplicialPoset, rng: np.random.Generator, max_exponent: int = 3):
    x = int(rng.integers(0, P.size))
    exps = {i: int(rng.integers(1, max_exponent + 1)) for i in P.support[x]}
    return make_mdegree(P, x, exps)


def ring_products_agree(P: SimplicialPoset, field: Field, rng: np.random.Generator, count: int) -> bool:
    """M-graded multiplication against the straightening rewrite"""
    for _ in range(count):
        a, b = random_mdegree(P, rng), random_mdegree(P, rng)
        word = chain_of_mdegree(P, a) + chain_of_mdegree(P, b)
        if mult_mdegree(P, a, b, field) != straighten(P, word, field):
            logger.error(f"Multiplication and straightening disagree on {a} * {b}")
            return False
    return True


def ring_axioms_hold(P: SimplicialPoset, field: Field, rng: np.random.Generator, count: int) -> bool:
    """Associativity and commutativity on random triples of short sums"""
    def element():
        return sum((RingElement.monomial(P, field, random_mdegree(P, rng, 2), int(rng.integers(1, 4)))
                    for _ in range(2)), RingElement.zero(P, field))

    for _ in range(count):
        a, b, c = element(), element(), element()
        if mult(P, a, b) != mult(P, b, a):
            return False
        if mult(P, mult(P, a, b), c) != mult(P, a, mult(P, b, c)):
            return False
    return True


def square_zero_everywhere(P: SimplicialPoset, field: Field) -> bool:
    if not verify_incidence(P).ok:
        return False
    try:
        dualizing_complex(P, field).check()
    except Exception as e:
        logger.error(f"Dualizing complex invalid: {e}")
        return False
    return all(k_complex(P, x, field).complex.check_square_zero() for x in P.elements)


def cohomology_profile(J: InjComplex) -> Dict[Tuple[int, int], int]:
    """Nonzero dim H^p(evaluate_at(J, x)) keyed by (x, p)"""
    profile = {}
    for x in J.poset.elements:
        C = evaluate_at(J, x)
        for p, dim in zip(C.degrees, cohomology_dims(C)):
            if dim:
                profile[(x, p)] = dim
    return profile


def duality_is_involutive(J: InjComplex) -> bool:
    return cohomology_profile(dd(dd(J))) == cohomology_profile(J)


def resolution_matches_k_complexes(P: SimplicialPoset, field: Field) -> bool:
    """The dual of a resolution of A has the cohomology of the K_x, reflected into negative degrees"""
    A = ring_module(P, field)
    # the socle of A lives on the maximal elements
    if sorted(injective_envelope(A)) != sorted(P.maximal):
        return False
    profile = cohomology_profile(dd(injective_resolution(A)))
    expected = {(x, -i): v for (x, i), v in local_cohomology_table(P, field).nonzero().items()}
    return profile == expected


@dataclass
class OracleReport:
    seed: int
    field: str
    checks: Dict[str, bool] = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]


def run_oracles(P: SimplicialPoset, field: Field, seed: Optional[int] = None,
                facet_input: Optional[bool] = None) -> OracleReport:
    seed = ORACLE_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    report = OracleReport(seed, field.descriptor)
    logger.info(f"Running oracles over {field} with seed {seed}")

    report.checks["ring_products"] = ring_products_agree(P, field, rng, ORACLE_RING_PRODUCTS)
    report.checks["ring_axioms"] = ring_axioms_hold(P, field, rng, ORACLE_RING_TRIPLES)
    report.checks["hilbert_series"] = hilbert_series_check(P)
    report.checks["square_zero"] = square_zero_everywhere(P, field)
    report.checks["duality_random_complexes"] = all(
        duality_is_involutive(random_inj_complex(P, field, rng)) for _ in range(ORACLE_INJ_COMPLEXES))
    report.checks["duality_resolutions"] = all(
        duality_is_involutive(injective_resolution(random_lambda_module(P, field, rng)))
        for _ in range(ORACLE_LAMBDA_MODULES))
    report.checks["resolution_vs_k_complexes"] = resolution_matches_k_complexes(P, field)
    report.checks["skeleton_depth"] = skeleton_depth_crosscheck(P, field)
    report.checks["murai_terai"] = murai_terai_check(P, field)
    if is_cohen_macaulay(P, field) or is_buchsbaum(P, field):
        start = 0 if is_cohen_macaulay(P, field) else 1
        report.checks["ideal_cohomology"] = all(
            jx_vanishes_below_top(P, x, field) for x in P.elements[start:])
    if facet_input if facet_input is not None else is_meet_semilattice(P):
        report.checks["link_cohomology"] = link_oracle(P, field)

    for name in report.failures():
        logger.error(f"Oracle check '{name}' failed (seed {seed})")
    return report
