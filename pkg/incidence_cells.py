"""
Incidence Signs
The sign rule alpha(i, U), the incidence function epsilon on cover pairs,
and verification of the diamond identity
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, Optional, Tuple

from poset_core import SimplicialPoset

try:
    import config
except ImportError:
    config = None

POSET_CACHE_SIZE = getattr(config, "POSET_CACHE_SIZE", 128)

logger = logging.getLogger(__name__)


class IncidenceError(Exception):
    """Base class for sign-rule failures"""


class NotMember(IncidenceError):
    """alpha(i, U) called with i outside U"""


class NotACover(IncidenceError):
    """epsilon(x, y) called on a pair that is not a cover"""


def alpha(i: int, U) -> int:
    """#{j in U : j < i}"""
    if i not in U:
        raise NotMember(f"{i} is not a member of {sorted(U)}")
    return sum(1 for j in U if j < i)


@dataclass(frozen=True)
class IncidenceFunction:
    """Signs epsilon(x, y) for every cover x > y"""
    signs: Dict[Tuple[int, int], int]

    def __call__(self, x: int, y: int) -> int:
        return self.signs[(x, y)]


@lru_cache(maxsize=POSET_CACHE_SIZE)
def incidence_function(P: SimplicialPoset) -> IncidenceFunction:
    signs = {}
    for x in P.elements:
        U = P.support[x]
        for y in P.lower_covers[x]:
            (i,) = U - P.support[y]
            signs[(x, y)] = -1 if alpha(i, U) % 2 else 1
    return IncidenceFunction(signs)


def epsilon(P: SimplicialPoset, x: int, y: int) -> int:
    if not P.covers(x, y):
        raise NotACover(f"'{P.labels[x]}' does not cover '{P.labels[y]}'")
    return incidence_function(P)(x, y)


def diamonds(P: SimplicialPoset) -> Iterator[Tuple[int, int, int, int]]:
    """Every rank-2 interval as (top, middle, middle', bottom)"""
    for x in P.elements:
        for y in P.below[x]:
            if P.rank[y] != P.rank[x] - 2:
                continue
            middle = [z for z in P.lower_covers[x] if y in P.lower_covers[z]]
            assert len(middle) == 2, f"rank-2 interval at {P.labels[x]} has {len(middle)} middles"
            yield x, middle[0], middle[1], y


@dataclass
class IncidenceReport:
    ok: bool
    diamonds_checked: int
    failing: Optional[Tuple[str, str, str, str]] = None


def verify_incidence(P: SimplicialPoset) -> IncidenceReport:
    eps = incidence_function(P)
    checked = 0
    for x, z, w, y in diamonds(P):
        checked += 1
        if eps(x, z) * eps(z, y) + eps(x, w) * eps(w, y) != 0:
            failing = tuple(P.labels[e] for e in (x, z, w, y))
            logger.error(f"Incidence identity fails on diamond {failing}")
            return IncidenceReport(False, checked, failing)
    return IncidenceReport(True, checked)
