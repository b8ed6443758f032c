"""
Face Ring
The ring A_P through its standard-monomial basis: M-degrees, M-graded
multiplication, the straightening rewrite of the presentation S/I_P,
Hilbert function and f/h-vectors
"""

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from linalg_exact import Field
from poset_core import SimplicialPoset, f_counts, join_set, meet

try:
    import config
except ImportError:
    config = None

STRAIGHTEN_STEP_BUDGET = getattr(config, "STRAIGHTEN_STEP_BUDGET", 100000)

logger = logging.getLogger(__name__)


class RingError(Exception):
    """Base class for face ring failures"""


class NonTermination(RingError):
    """The straightening rewrite exceeded its step budget"""


class InvalidMDegree(RingError):
    """Exponents do not sit exactly on the atoms of the carrier"""


@dataclass(frozen=True, order=True)
class MDegree:
    """
    A point of the index set M in canonical form: a carrier element x and
    strictly positive exponents on exactly the atoms of x, as sorted
    (atom number, exponent) pairs
    """
    carrier: int
    exponents: Tuple[Tuple[int, int], ...] = ()

    @property
    def total_degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def exponent(self, i: int) -> int:
        return dict(self.exponents).get(i, 0)


def make_mdegree(P: SimplicialPoset, x: int, exponents: Dict[int, int]) -> MDegree:
    if set(exponents) != set(P.support[x]) or any(e < 1 for e in exponents.values()):
        raise InvalidMDegree(f"Exponents {exponents} do not match the atoms {sorted(P.support[x])} "
                             f"of '{P.labels[x]}'")
    return MDegree(x, tuple(sorted(exponents.items())))


def ua(P: SimplicialPoset, x: int) -> MDegree:
    """The distinguished degree ua(x): every atom of x raised to rho(x)"""
    r = P.rank[x]
    return MDegree(x, tuple((i, r) for i in sorted(P.support[x])))


def ones(P: SimplicialPoset, x: int) -> MDegree:
    """Degree of the variable t_x"""
    return MDegree(x, tuple((i, 1) for i in sorted(P.support[x])))


def mdegree_of_chain(P: SimplicialPoset, chain: Iterable[int]) -> MDegree:
    """Degree of the standard monomial prod t_x over a multichain"""
    elements = [x for x in chain if x != P.bottom]
    if not elements:
        return MDegree(P.bottom)
    top = max(elements, key=lambda x: P.rank[x])
    exps: Counter = Counter()
    for x in elements:
        if not P.leq(x, top):
            raise RingError(f"'{P.labels[x]}' and '{P.labels[top]}' do not lie on one chain")
        exps.update(P.support[x])
    return MDegree(top, tuple(sorted(exps.items())))


def chain_of_mdegree(P: SimplicialPoset, u: MDegree) -> List[int]:
    """Inverse of mdegree_of_chain: the multichain from the carrier downward, with repetition"""
    exps = dict(u.exponents)
    chain = []
    previous = 0
    for level in sorted(set(exps.values())):
        face = P.faces[u.carrier][frozenset(i for i, e in exps.items() if e >= level)]
        chain.extend([face] * (level - previous))
        previous = level
    return chain


@dataclass(frozen=True, eq=False)
class RingElement:
    """Finite linear combination of standard monomials, no zero coefficients"""
    poset: SimplicialPoset
    field: Field
    terms: Dict[MDegree, object]

    @classmethod
    def zero(cls, P: SimplicialPoset, field: Field) -> "RingElement":
        return cls(P, field, {})

    @classmethod
    def one(cls, P: SimplicialPoset, field: Field) -> "RingElement":
        return cls(P, field, {MDegree(P.bottom): field.one})

    @classmethod
    def monomial(cls, P: SimplicialPoset, field: Field, u: MDegree, coeff=1) -> "RingElement":
        c = field(coeff)
        return cls(P, field, {} if field.is_zero(c) else {u: c})

    @classmethod
    def from_terms(cls, P: SimplicialPoset, field: Field, terms: Dict[MDegree, object]) -> "RingElement":
        clean = {}
        for u, c in terms.items():
            c = field(c)
            if not field.is_zero(c):
                clean[u] = c
        return cls(P, field, clean)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "RingElement") -> "RingElement":
        F = self.field
        acc = dict(self.terms)
        for u, c in other.terms.items():
            acc[u] = F.add(acc.get(u, F.zero), c)
        return RingElement(self.poset, F, {u: c for u, c in acc.items() if not F.is_zero(c)})

    def __neg__(self) -> "RingElement":
        return self.scale(-1)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def scale(self, c) -> "RingElement":
        F = self.field
        c = F(c)
        if F.is_zero(c):
            return RingElement.zero(self.poset, F)
        return RingElement(self.poset, F, {u: F.mul(c, v) for u, v in self.terms.items()})

    def __mul__(self, other: "RingElement") -> "RingElement":
        return mult(self.poset, self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.poset is other.poset and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        P = self.poset
        parts = []
        for u in sorted(self.terms):
            exps = "".join(f"[{i}^{e}]" for i, e in u.exponents)
            parts.append(f"{self.terms[u]}*t({P.labels[u.carrier]}){exps}")
        return " + ".join(parts)


def variable(P: SimplicialPoset, x: int, field: Optional[Field] = None) -> RingElement:
    """t_x; t of the least element is 1"""
    return RingElement.monomial(P, field or Field.rationals(), ones(P, x))


# ============================================================================
# MULTIPLICATION
# ============================================================================

def mult_mdegree(P: SimplicialPoset, a: MDegree, b: MDegree,
                 field: Optional[Field] = None) -> RingElement:
    """t^a t^b = sum over z in [s(a) v s(b)] of t^((a+b)|z), each with coefficient 1"""
    F = field or Field.rationals()
    return RingElement(P, F, {_sum_degree(a, b, z): F.one for z in join_set(P, a.carrier, b.carrier)})


def mult(P: SimplicialPoset, f: RingElement, g: RingElement) -> RingElement:
    F = f.field
    acc: Dict[MDegree, object] = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            c = F.mul(ca, cb)
            for z in join_set(P, a.carrier, b.carrier):
                u = _sum_degree(a, b, z)
                acc[u] = F.add(acc.get(u, F.zero), c)
    return RingElement(P, F, {u: c for u, c in acc.items() if not F.is_zero(c)})


def _sum_degree(a: MDegree, b: MDegree, z: int) -> MDegree:
    summed = Counter(dict(a.exponents))
    summed.update(dict(b.exponents))
    return MDegree(z, tuple(sorted(summed.items())))


# ============================================================================
# STRAIGHTENING
# ============================================================================

def _incomparable_pair(P: SimplicialPoset, word: Tuple[int, ...]) -> Optional[Tuple[int, int]]:
    for i, j in combinations(range(len(word)), 2):
        x, y = word[i], word[j]
        if not (P.leq(x, y) or P.leq(y, x)):
            return i, j
    return None


def straighten(P: SimplicialPoset, word: Sequence[int], field: Optional[Field] = None,
               budget: Optional[int] = None) -> RingElement:
    """
    Normal form of the product of variables t_x (x in word), rewriting
    t_x t_y -> t_(x^y) * sum_{z in [x v y]} t_z until every term is a chain
    """
    F = field or Field.rationals()
    budget = budget if budget is not None else STRAIGHTEN_STEP_BUDGET
    pending: Dict[Tuple[int, ...], object] = {tuple(sorted(word)): F.one}
    result: Dict[MDegree, object] = {}
    steps = 0
    while pending:
        current, coeff = pending.popitem()
        current = tuple(x for x in current if x != P.bottom)
        pair = _incomparable_pair(P, current)
        if pair is None:
            u = mdegree_of_chain(P, current)
            result[u] = F.add(result.get(u, F.zero), coeff)
            continue
        steps += 1
        if steps > budget:
            raise NonTermination(f"Straightening exceeded {budget} rewrite steps")
        i, j = pair
        x, y = current[i], current[j]
        rest = current[:i] + current[i + 1:j] + current[j + 1:]
        tops = join_set(P, x, y)
        if not tops:
            continue
        low = meet(P, x, y)
        for z in tops:
            key = tuple(sorted(rest + (low, z)))
            pending[key] = F.add(pending.get(key, F.zero), coeff)
            if F.is_zero(pending[key]):
                del pending[key]
    logger.debug(f"Straightened word of length {len(word)} in {steps} steps")
    return RingElement(P, F, {u: c for u, c in result.items() if not F.is_zero(c)})


# ============================================================================
# HILBERT FUNCTION, f- AND h-VECTORS
# ============================================================================

def _binom(n: int, k: int) -> int:
    if n == -1 and k == -1:
        return 1
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def f_vector(P: SimplicialPoset) -> Tuple[int, ...]:
    """(f_-1, f_0, ..., f_(d-1)) with f_(j-1) the number of rank-j elements"""
    return f_counts(P)


def h_vector(P: SimplicialPoset) -> Tuple[int, ...]:
    d = P.d
    f = f_vector(P)
    return tuple(
        sum((-1) ** (k - i) * comb(d - i, k - i) * f[i] for i in range(k + 1))
        for k in range(d + 1)
    )


def hilbert_dim(P: SimplicialPoset, i: int) -> int:
    """dim_k (A_P)_i"""
    if i < 0:
        return 0
    f = f_vector(P)
    return sum(f[j] * _binom(i - 1, j - 1) for j in range(len(f)))


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered ways to write total as parts positive integers"""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts:
        return
    for cuts in combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[k + 1] - bounds[k] for k in range(parts))


def standard_monomials(P: SimplicialPoset, i: int) -> List[MDegree]:
    """Basis of (A_P)_i as M-degrees"""
    basis = []
    for x in P.elements:
        atoms = sorted(P.support[x])
        for parts in _compositions(i, len(atoms)):
            basis.append(MDegree(x, tuple(zip(atoms, parts))))
    return basis


def hilbert_series_check(P: SimplicialPoset) -> bool:
    """sum dim A_i t^i * (1-t)^d agrees with sum h_k t^k through degree 2d"""
    d = P.d
    dims = [hilbert_dim(P, i) for i in range(2 * d + 1)]
    product = [
        sum((-1) ** k * comb(d, k) * dims[i - k] for k in range(min(i, d) + 1))
        for i in range(2 * d + 1)
    ]
    h = list(h_vector(P)) + [0] * (d + 1)
    return all(product[k] == h[k] for k in range(2 * d + 1))
