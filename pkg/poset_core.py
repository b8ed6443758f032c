"""
Simplicial Poset Core
Validation, order queries, join sets, meets, skeletons, products and
construction from facet lists
"""

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

logger = logging.getLogger(__name__)

BOTTOM_LABEL = "{}"


class PosetError(Exception):
    """Base class for poset input and query failures"""

    def __init__(self, message: str, element: Optional[str] = None, witness=None):
        super().__init__(message)
        self.element = element
        self.witness = witness


class NotAPoset(PosetError):
    """Duplicate ids, unknown ids or a cycle in the cover relation"""


class NoLeastElement(PosetError):
    """The order has zero or several minimal elements"""


class NonBooleanInterval(PosetError):
    """Some lower interval [0, x] is not a boolean algebra"""


class MeetUndefined(PosetError):
    """x and y have no common upper bound, so their meet is not guaranteed"""


class IndexOutOfRange(PosetError):
    """Skeleton index outside 0..d-1"""


@dataclass
class RawPoset:
    """Unvalidated input: element ids plus (upper, lower) cover pairs, least element included"""
    elements: List[Hashable]
    covers: List[Tuple[Hashable, Hashable]] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class SimplicialPoset:
    """
    A validated simplicial poset. Elements are dense indices with 0 the least
    element, sorted by rank and then input position. Atom numbers are 1-based
    in input order; support[x] is the set U(x) of atom numbers below x.
    """
    labels: Tuple[str, ...]
    rank: Tuple[int, ...]
    atoms: Tuple[int, ...]
    support: Tuple[FrozenSet[int], ...]
    below: Tuple[FrozenSet[int], ...]
    above: Tuple[FrozenSet[int], ...]
    lower_covers: Tuple[Tuple[int, ...], ...]
    upper_covers: Tuple[Tuple[int, ...], ...]
    faces: Tuple[Dict[FrozenSet[int], int], ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    @property
    def bottom(self) -> int:
        return 0

    @property
    def n(self) -> int:
        return len(self.atoms)

    @cached_property
    def d(self) -> int:
        return max(self.rank)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {label: x for x, label in enumerate(self.labels)}

    def element(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise PosetError(f"No element labelled '{label}'", element=label)

    def atom(self, i: int) -> int:
        """Element index of the atom y_i (1-based)"""
        return self.atoms[i - 1]

    def leq(self, x: int, y: int) -> bool:
        return x in self.below[y]

    def covers(self, x: int, y: int) -> bool:
        """True when x covers y"""
        return y in self.lower_covers[x]

    def of_rank(self, i: int) -> List[int]:
        return [x for x in self.elements if self.rank[x] == i]

    @cached_property
    def maximal(self) -> List[int]:
        return [x for x in self.elements if not self.upper_covers[x]]

    def key(self) -> tuple:
        """Structural identity: labels, supports and covers"""
        return (self.labels, self.support, self.lower_covers)

    def to_raw(self) -> RawPoset:
        covers = [(self.labels[x], self.labels[y]) for x in self.elements for y in self.lower_covers[x]]
        return RawPoset(list(self.labels), covers)

    def __repr__(self):
        return f"SimplicialPoset(size={self.size}, n={self.n}, d={self.d})"


# ============================================================================
# VALIDATION
# ============================================================================

def validate(raw: RawPoset) -> SimplicialPoset:
    """Check the simplicial poset axioms and build the indexed representation"""
    ids = [str(e) for e in raw.elements]
    position = {}
    for k, e in enumerate(ids):
        if e in position:
            raise NotAPoset(f"Duplicate element id '{e}'", element=e)
        position[e] = k

    lower: Dict[str, Set[str]] = {e: set() for e in ids}
    upper: Dict[str, Set[str]] = {e: set() for e in ids}
    for hi, lo in raw.covers:
        hi, lo = str(hi), str(lo)
        for e in (hi, lo):
            if e not in position:
                raise NotAPoset(f"Cover relation names unknown id '{e}'", element=e)
        if hi == lo:
            raise NotAPoset(f"Element '{hi}' covers itself", element=hi)
        lower[hi].add(lo)
        upper[lo].add(hi)

    # Kahn's algorithm from the minimal elements upward
    pending = {e: len(lower[e]) for e in ids}
    queue = deque(e for e in ids if pending[e] == 0)
    topo = []
    while queue:
        e = queue.popleft()
        topo.append(e)
        for u in sorted(upper[e], key=position.get):
            pending[u] -= 1
            if pending[u] == 0:
                queue.append(u)
    if len(topo) != len(ids):
        stuck = [e for e in ids if pending[e] > 0]
        raise NotAPoset(f"Cover relation has a cycle through '{stuck[0]}'", element=stuck[0], witness=stuck)

    minimal = [e for e in ids if not lower[e]]
    if len(minimal) != 1:
        raise NoLeastElement(f"Expected one least element, found {len(minimal)}: {minimal[:5]}",
                             witness=minimal)
    bottom = minimal[0]

    down: Dict[str, FrozenSet[str]] = {}
    for e in topo:
        acc = {e}
        for lo in lower[e]:
            acc |= down[lo]
        down[e] = frozenset(acc)

    atom_ids = [e for e in ids if e != bottom and lower[e] == {bottom}]
    atom_number = {a: i + 1 for i, a in enumerate(atom_ids)}
    support = {e: frozenset(atom_number[a] for a in down[e] if a in atom_number) for e in ids}

    for e in topo:
        interval = down[e]
        expected = 2 ** len(support[e])
        if len(interval) != expected:
            raise NonBooleanInterval(
                f"Interval below '{e}' has {len(interval)} elements, expected {expected}",
                element=e, witness={"interval_size": len(interval), "atoms": sorted(support[e])})
        seen: Dict[FrozenSet[int], str] = {}
        for y in interval:
            if support[y] in seen:
                raise NonBooleanInterval(
                    f"Elements '{seen[support[y]]}' and '{y}' below '{e}' share atom set {sorted(support[y])}",
                    element=e, witness=(seen[support[y]], y))
            seen[support[y]] = y

    order = sorted(ids, key=lambda e: (len(support[e]), position[e]))
    idx = {e: k for k, e in enumerate(order)}
    below = tuple(frozenset(idx[y] for y in down[e]) for e in order)
    above_sets: List[Set[int]] = [set() for _ in order]
    for x, bx in enumerate(below):
        for y in bx:
            above_sets[y].add(x)
    rank = tuple(len(support[e]) for e in order)
    lower_covers = tuple(
        tuple(sorted(y for y in below[x] if rank[y] == rank[x] - 1)) for x in range(len(order)))
    upper_lists: List[List[int]] = [[] for _ in order]
    for x, lcs in enumerate(lower_covers):
        for y in lcs:
            upper_lists[y].append(x)
    faces = tuple({support[order[y]]: y for y in below[x]} for x in range(len(order)))

    P = SimplicialPoset(
        labels=tuple(order),
        rank=rank,
        atoms=tuple(idx[a] for a in atom_ids),
        support=tuple(support[e] for e in order),
        below=below,
        above=tuple(frozenset(s) for s in above_sets),
        lower_covers=lower_covers,
        upper_covers=tuple(tuple(sorted(u)) for u in upper_lists),
        faces=faces,
    )
    logger.debug(f"Validated simplicial poset with {P.size} elements, {P.n} atoms, rank {P.d}")
    return P


# ============================================================================
# ORDER QUERIES
# ============================================================================

def _minimal(P: SimplicialPoset, candidates: Set[int]) -> FrozenSet[int]:
    return frozenset(z for z in candidates if not (P.below[z] & candidates) - {z})


def join_set(P: SimplicialPoset, x: int, y: int) -> FrozenSet[int]:
    """[x v y]: the minimal common upper bounds (possibly empty)"""
    return _minimal(P, set(P.above[x] & P.above[y]))


def multi_join_set(P: SimplicialPoset, xs: Sequence[int]) -> FrozenSet[int]:
    if not xs:
        return frozenset({P.bottom})
    common = set(P.above[xs[0]])
    for x in xs[1:]:
        common &= P.above[x]
    return _minimal(P, common)


def meet(P: SimplicialPoset, x: int, y: int) -> int:
    if not P.above[x] & P.above[y]:
        raise MeetUndefined(f"'{P.labels[x]}' and '{P.labels[y]}' have no common upper bound",
                            element=P.labels[x], witness=P.labels[y])
    return P.faces[x][P.support[x] & P.support[y]]


# ============================================================================
# CONSTRUCTIONS
# ============================================================================

def restrict(P: SimplicialPoset, keep: Iterable[int]) -> SimplicialPoset:
    """The induced subposet on an order ideal containing the least element"""
    kept = sorted(set(keep) | {P.bottom})
    kept_set = set(kept)
    for x in kept:
        if not P.below[x] <= kept_set:
            raise PosetError(f"Restriction set is not an order ideal at '{P.labels[x]}'",
                             element=P.labels[x])
    covers = [(P.labels[x], P.labels[y]) for x in kept for y in P.lower_covers[x]]
    return validate(RawPoset([P.labels[x] for x in kept], covers))


def skeleton(P: SimplicialPoset, i: int) -> SimplicialPoset:
    """The i-skeleton: all elements of rank at most i+1"""
    if not 0 <= i <= P.d - 1:
        raise IndexOutOfRange(f"Skeleton index {i} outside 0..{P.d - 1}", witness=i)
    return restrict(P, (x for x in P.elements if P.rank[x] <= i + 1))


def product(P1: SimplicialPoset, P2: SimplicialPoset) -> SimplicialPoset:
    """Componentwise order on P1 x P2; atoms of P1 come first"""
    pairs = sorted(((a, b) for a in P1.elements for b in P2.elements),
                   key=lambda ab: (P1.rank[ab[0]] + P2.rank[ab[1]], ab[1], ab[0]))

    def label(a, b):
        if a == P1.bottom and b == P2.bottom:
            return BOTTOM_LABEL
        return f"({P1.labels[a]},{P2.labels[b]})"

    covers = []
    for a, b in pairs:
        covers.extend((label(a, b), label(c, b)) for c in P1.lower_covers[a])
        covers.extend((label(a, b), label(a, c)) for c in P2.lower_covers[b])
    return validate(RawPoset([label(a, b) for a, b in pairs], covers))


def disjoint_union(P1: SimplicialPoset, P2: SimplicialPoset) -> SimplicialPoset:
    """Glue two posets at their least elements only"""
    clash = (set(P1.labels) & set(P2.labels)) - {BOTTOM_LABEL}
    left = (lambda s: f"1:{s}") if clash else (lambda s: s)
    right = (lambda s: f"2:{s}") if clash else (lambda s: s)

    def name(P, x, tag):
        return BOTTOM_LABEL if x == P.bottom else tag(P.labels[x])

    elements = [BOTTOM_LABEL]
    elements += [name(P1, x, left) for x in P1.elements if x != P1.bottom]
    elements += [name(P2, x, right) for x in P2.elements if x != P2.bottom]
    covers = [(name(P1, x, left), name(P1, y, left)) for x in P1.elements for y in P1.lower_covers[x]]
    covers += [(name(P2, x, right), name(P2, y, right)) for x in P2.elements for y in P2.lower_covers[x]]
    return validate(RawPoset(elements, covers))


def face_label(vertices: Sequence) -> str:
    return "{" + ",".join(str(v) for v in vertices) + "}"


def from_facets(facets: Iterable[Iterable]) -> SimplicialPoset:
    """Face poset of the simplicial complex generated by the facets, with {} as least element"""
    order: Dict[str, int] = {}
    facet_lists = []
    for facet in facets:
        verts = []
        for v in facet:
            v = str(v)
            if v not in order:
                order[v] = len(order)
            if v not in verts:
                verts.append(v)
        if not verts:
            raise PosetError("Facets must be nonempty")
        facet_lists.append(verts)

    faces: Set[Tuple[str, ...]] = set()
    for verts in facet_lists:
        verts = sorted(verts, key=order.get)
        for k in range(1, len(verts) + 1):
            faces.update(combinations(verts, k))
    ordered = sorted(faces, key=lambda f: (len(f), [order[v] for v in f]))

    labels = {f: face_label(f) for f in ordered}
    labels[()] = BOTTOM_LABEL
    covers = []
    for f in ordered:
        for k in range(len(f)):
            covers.append((labels[f], labels[f[:k] + f[k + 1:]]))
    return validate(RawPoset([BOTTOM_LABEL] + [labels[f] for f in ordered], covers))


def boolean(m: int) -> SimplicialPoset:
    """2^[m]; boolean(0) is the one-element poset"""
    if m == 0:
        return validate(RawPoset([BOTTOM_LABEL]))
    return from_facets([list(range(1, m + 1))])


# ============================================================================
# SUPPORT-LEVEL INVARIANTS
# ============================================================================

def atom_support_profile(P: SimplicialPoset) -> Tuple[Tuple[int, ...], ...]:
    """Sorted multiset of atom supports: the canonical atom-support labelling"""
    return tuple(sorted((tuple(sorted(s)) for s in P.support), key=lambda t: (len(t), t)))


def is_boolean(P: SimplicialPoset) -> bool:
    return len(set(P.support)) == P.size == 2 ** P.n


def is_meet_semilattice(P: SimplicialPoset) -> bool:
    """
    #[x v y] <= 1 for all x, y. For a simplicial poset this is equivalent to
    all atom supports being distinct, i.e. P is the face poset of a
    simplicial complex.
    """
    return len(set(P.support)) == P.size


def f_counts(P: SimplicialPoset) -> Tuple[int, ...]:
    """Number of elements of each rank 0..d"""
    counts = defaultdict(int)
    for r in P.rank:
        counts[r] += 1
    return tuple(counts[i] for i in range(P.d + 1))
