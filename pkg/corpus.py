"""
Poset Files and Built-in Corpus
JSON poset files (Hasse or facet form), the named example posets, and the
seeded random generators used by the oracle runs
"""

import json
import logging
import re
from itertools import combinations
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from linalg_exact import Field, FieldMatrix, solve
from poset_core import (
    BOTTOM_LABEL,
    RawPoset,
    SimplicialPoset,
    boolean,
    disjoint_union,
    face_label,
    from_facets,
    product,
    validate,
)
from sq_modules import (
    InjComplex,
    LambdaModule,
    change_of_basis,
    complex_direct_sum,
    convex_module,
    dd,
    dualizing_complex,
    injective_resolution,
    module_direct_sum,
    shift,
)

try:
    import config
except ImportError:
    config = None

RANDOM_MAX_VERTICES = getattr(config, "RANDOM_MAX_VERTICES", 8)
RANDOM_MAX_FACET_SIZE = getattr(config, "RANDOM_MAX_FACET_SIZE", 4)
RANDOM_MAX_DOUBLINGS = getattr(config, "RANDOM_MAX_DOUBLINGS", 3)

logger = logging.getLogger(__name__)

RP2_SIX_VERTEX = [
    [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
    [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6], [3, 5, 6],
]

LISTED_MEMBERS = [
    "boolean(1)", "boolean(2)", "boolean(3)", "boolean(4)",
    "simplex_boundary(1)", "simplex_boundary(2)", "simplex_boundary(3)",
    "digon", "glued_simplices(2)", "glued_simplices(3)",
    "rp2_six_vertex", "cone(digon)", "edge_plus_triangle", "two_triangles",
]


class CorpusError(Exception):
    """Unreadable poset file, bad schema or unknown corpus member"""


# ============================================================================
# POSET FILES
# ============================================================================

def hasse_file(name: str, P: SimplicialPoset) -> dict:
    """Hasse form: one record per element other than the least one"""
    records = []
    for x in P.elements:
        if x == P.bottom:
            continue
        covers = [P.labels[y] for y in P.lower_covers[x] if y != P.bottom]
        records.append({"id": P.labels[x], "covers": covers})
    return {"name": name, "hasse": records}


def facet_file(name: str, facets: List[List]) -> dict:
    return {"name": name, "facets": [list(f) for f in facets]}


def parse_poset_file(data: dict) -> SimplicialPoset:
    if not isinstance(data, dict):
        raise CorpusError("Poset file must be a JSON object")
    has_hasse, has_facets = "hasse" in data, "facets" in data
    if has_hasse == has_facets:
        raise CorpusError("Poset file needs exactly one of 'hasse' or 'facets'")

    if has_facets:
        facets = data["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) and f for f in facets):
            raise CorpusError("'facets' must be a list of nonempty vertex lists")
        return from_facets(facets)

    records = data["hasse"]
    if not isinstance(records, list):
        raise CorpusError("'hasse' must be a list of records")
    elements = [BOTTOM_LABEL]
    covers = []
    for record in records:
        if not isinstance(record, dict) or "id" not in record or not isinstance(record.get("covers"), list):
            raise CorpusError(f"Bad Hasse record: {record!r}")
        ident = str(record["id"])
        if ident == BOTTOM_LABEL:
            raise CorpusError(f"The least element is implicit and may not be named '{BOTTOM_LABEL}'")
        elements.append(ident)
        lower = [str(c) for c in record["covers"]] or [BOTTOM_LABEL]
        covers.extend((ident, c) for c in lower)
    return validate(RawPoset(elements, covers))


def load_poset_file(path: str) -> Tuple[SimplicialPoset, dict]:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise CorpusError(f"Cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise CorpusError(f"{path} is not valid JSON: {e}")
    return parse_poset_file(data), data


def read_poset_source(source: str) -> Tuple[SimplicialPoset, dict]:
    """A file path, or corpus:<name> for a built-in member"""
    if source.startswith("corpus:"):
        data = corpus_file(source[len("corpus:"):])
        return parse_poset_file(data), data
    return load_poset_file(source)


# ============================================================================
# BUILT-IN CORPUS
# ============================================================================

def glued_simplices(d: int) -> SimplicialPoset:
    """Two d-simplices identified along their entire boundaries"""
    vertices = list(range(1, d + 2))
    faces = [c for k in range(1, d + 1) for c in combinations(vertices, k)]
    labels = {c: face_label(c) for c in faces}
    labels[()] = BOTTOM_LABEL
    elements = [BOTTOM_LABEL] + [labels[c] for c in faces] + ["top1", "top2"]
    covers = [(labels[c], labels[c[:k] + c[k + 1:]]) for c in faces for k in range(len(c))]
    ridges = [c for c in faces if len(c) == d]
    covers += [(top, labels[c]) for top in ("top1", "top2") for c in ridges]
    return validate(RawPoset(elements, covers))


def simplex_boundary_facets(m: int) -> List[List[int]]:
    return [list(c) for c in combinations(range(1, m + 2), m)]


def _parametric(name: str) -> Tuple[str, Optional[str]]:
    match = re.fullmatch(r"(\w+)\((.*)\)", name.strip())
    if match:
        return match.group(1), match.group(2)
    return name.strip(), None


def _int_arg(name: str, arg: Optional[str], low: int) -> int:
    try:
        value = int(arg)
    except (TypeError, ValueError):
        raise CorpusError(f"Corpus member '{name}' needs an integer argument")
    if value < low:
        raise CorpusError(f"Corpus member '{name}' needs an argument >= {low}")
    return value


def corpus_file(name: str) -> dict:
    """PosetFile for a named corpus member"""
    base, arg = _parametric(name)
    if base == "boolean":
        m = _int_arg(name, arg, 0)
        if m == 0:
            return {"name": name, "hasse": []}
        return facet_file(name, [list(range(1, m + 1))])
    if base == "simplex_boundary":
        return facet_file(name, simplex_boundary_facets(_int_arg(name, arg, 1)))
    if base == "digon":
        return hasse_file(name, glued_simplices(1))
    if base == "glued_simplices":
        return hasse_file(name, glued_simplices(_int_arg(name, arg, 1)))
    if base == "rp2_six_vertex":
        return facet_file(name, RP2_SIX_VERTEX)
    if base == "edge_plus_triangle":
        return hasse_file(name, disjoint_union(from_facets([[1, 2]]), from_facets([[3, 4, 5]])))
    if base == "two_triangles":
        return hasse_file(name, disjoint_union(from_facets([[1, 2, 3]]), from_facets([[4, 5, 6]])))
    if base == "cone" and arg:
        inner = parse_poset_file(corpus_file(arg))
        return hasse_file(name, product(boolean(1), inner))
    raise CorpusError(f"Unknown corpus member '{name}'")


def corpus_member(name: str) -> SimplicialPoset:
    return parse_poset_file(corpus_file(name))


def list_members() -> List[str]:
    return list(LISTED_MEMBERS)


# ============================================================================
# RANDOM INSTANCES
# ============================================================================

def random_facets(rng: np.random.Generator, max_vertices: Optional[int] = None,
                  max_facet_size: Optional[int] = None) -> List[List[int]]:
    """Facets of a random simplicial complex on at most max_vertices vertices"""
    max_vertices = max_vertices or RANDOM_MAX_VERTICES
    max_facet_size = max_facet_size or RANDOM_MAX_FACET_SIZE
    n_vertices = int(rng.integers(1, max_vertices + 1))
    n_facets = int(rng.integers(1, 6))
    facets = []
    for _ in range(n_facets):
        size = int(rng.integers(1, min(max_facet_size, n_vertices) + 1))
        chosen = rng.choice(np.arange(1, n_vertices + 1), size=size, replace=False)
        facets.append(sorted(int(v) for v in chosen))
    return facets


def random_simplicial_poset(seed: int, max_vertices: Optional[int] = None,
                            max_facet_size: Optional[int] = None,
                            max_doublings: Optional[int] = None) -> dict:
    """
    PosetFile for a random complex followed by facet doublings: a parallel
    copy of a maximal element of rank >= 2 with the same lower covers
    """
    rng = np.random.default_rng(seed)
    facets = random_facets(rng, max_vertices, max_facet_size)
    max_doublings = RANDOM_MAX_DOUBLINGS if max_doublings is None else max_doublings
    doublings = int(rng.integers(0, max_doublings + 1))
    name = f"random({seed})"
    P = from_facets(facets)
    if doublings == 0:
        return facet_file(name, facets)

    data = hasse_file(name, P)
    records = data["hasse"]
    for k in range(doublings):
        current = parse_poset_file(data)
        candidates = [x for x in current.maximal if current.rank[x] >= 2]
        if not candidates:
            break
        x = candidates[int(rng.integers(0, len(candidates)))]
        covers = [current.labels[y] for y in current.lower_covers[x] if y != current.bottom]
        records.append({"id": f"{current.labels[x]}#{k + 1}", "covers": covers})
    return data


def _random_unit(rng: np.random.Generator, field: Field):
    value = 0
    while field.is_zero(field(value)):
        value = int(rng.integers(-3, 4))
    return field(value)


def _order_automorphism(P: SimplicialPoset, field: Field, summands, rng) -> FieldMatrix:
    """Unitriangular matrix whose off-diagonal entries respect the order"""
    entries = {}
    for i, xi in enumerate(summands):
        entries[(i, i)] = 1
        for j in range(i):
            if P.leq(summands[j], xi) and rng.random() < 0.5:
                entries[(j, i)] = int(rng.integers(-2, 3))
    return FieldMatrix.from_entries(field, len(summands), len(summands), entries)


def _single(P: SimplicialPoset, field: Field, x: int, degree: int) -> InjComplex:
    return InjComplex(P, field, degree, ((x,),), ())


def _two_term(P: SimplicialPoset, field: Field, x: int, y: int, degree: int, scalar) -> InjComplex:
    D = FieldMatrix.from_entries(field, 1, 1, {(0, 0): scalar})
    return InjComplex(P, field, degree, ((x,), (y,)), (D,))


def random_inj_complex(P: SimplicialPoset, field: Field, rng: np.random.Generator) -> InjComplex:
    """
    Direct sum of small building blocks (single summands, two-term maps
    (x) -> (y) with y <= x, shifted dualizing and interval complexes, a
    resolution of a random module) conjugated by an order-respecting
    automorphism in every degree
    """
    blocks = []
    for _ in range(int(rng.integers(1, 4))):
        kind = int(rng.integers(0, 5))
        x = int(rng.integers(0, P.size))
        degree = int(rng.integers(-2, 3))
        if kind == 0:
            blocks.append(_single(P, field, x, degree))
        elif kind == 1:
            below = sorted(P.below[x])
            y = below[int(rng.integers(0, len(below)))]
            blocks.append(_two_term(P, field, x, y, degree, _random_unit(rng, field)))
        elif kind == 2:
            blocks.append(shift(dualizing_complex(P, field), degree))
        elif kind == 3:
            blocks.append(dd(_single(P, field, x, degree)))
        else:
            blocks.append(injective_resolution(random_lambda_module(P, field, rng, max_blocks=1)))
    J = complex_direct_sum(blocks)
    if not J.terms:
        return J
    autos = [_order_automorphism(P, field, J.term(deg), rng) for deg in J.degrees]
    inverses = [solve(U, FieldMatrix.identity(field, U.nrows)) for U in autos]
    diffs = tuple(autos[k + 1] @ J.differentials[k] @ inverses[k] for k in range(len(J.differentials)))
    return InjComplex(P, field, J.start, J.terms, diffs)


def _random_convex_set(P: SimplicialPoset, rng: np.random.Generator) -> List[int]:
    x = int(rng.integers(0, P.size))
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return sorted(P.above[x])
    if kind == 1:
        return sorted(P.below[x])
    below = sorted(P.below[x])
    y = below[int(rng.integers(0, len(below)))]
    return sorted(z for z in P.below[x] if P.leq(y, z))


def random_lambda_module(P: SimplicialPoset, field: Field, rng: np.random.Generator,
                         max_blocks: int = 3) -> LambdaModule:
    """Direct sum of interval-type modules under a random change of basis"""
    blocks = [convex_module(P, field, _random_convex_set(P, rng))
              for _ in range(int(rng.integers(1, max_blocks + 1)))]
    N = module_direct_sum(blocks)
    bases = {}
    for x in P.elements:
        n = N.dims[x]
        if n > 1:
            entries = {(i, i): 1 for i in range(n)}
            for i in range(n):
                for j in range(i + 1, n):
                    entries[(i, j)] = int(rng.integers(-2, 3))
            bases[x] = FieldMatrix.from_entries(field, n, n, entries)
    return change_of_basis(N, bases)
