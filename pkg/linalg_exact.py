"""
Exact Linear Algebra
Sparse Gaussian elimination over the rationals and GF(p): rank, kernels,
images, linear solves and the cohomology of complexes of vector spaces
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

try:
    import config
except ImportError:
    config = None

DENSE_CUTOFF = getattr(config, "DENSE_CUTOFF", 64)
PIVOTING = getattr(config, "PIVOTING", "markowitz")

logger = logging.getLogger(__name__)

Row = Dict[int, Any]


class LinalgError(Exception):
    """Base class for exact linear algebra failures"""


class InvalidField(LinalgError):
    """Raised for an unparsable field flag or a non-prime modulus"""


class ShapeMismatch(LinalgError):
    """Raised when matrix shapes do not compose"""


class InconsistentSystem(LinalgError):
    """Raised when A X = B has no solution"""


@dataclass(frozen=True)
class Field:
    """A coefficient field: the rationals (characteristic 0) or GF(p)"""
    characteristic: int = 0

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def gf(cls, p: int) -> "Field":
        if p < 2 or p >= 2 ** 31 or not isprime(p):
            raise InvalidField(f"GF(p) needs a prime p < 2^31, got {p}")
        return cls(p)

    @classmethod
    def parse(cls, flag: str) -> "Field":
        """Parse the CLI flag syntax: 'rational' or 'gf:<p>'"""
        text = flag.strip().lower()
        if text in ("rational", "q", "qq"):
            return cls.rationals()
        if text.startswith("gf:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise InvalidField(f"Bad modulus in field flag '{flag}'")
            return cls.gf(p)
        raise InvalidField(f"Unknown field '{flag}' (use rational or gf:<p>)")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def descriptor(self) -> str:
        return "rational" if self.is_rational else f"gf:{self.characteristic}"

    @property
    def zero(self):
        return Fraction(0) if self.is_rational else 0

    @property
    def one(self):
        return Fraction(1) if self.is_rational else 1

    def __call__(self, value):
        """Coerce an int or Fraction into this field"""
        if self.is_rational:
            return Fraction(value)
        p = self.characteristic
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator % p, p - 2, p)) % p
        return int(value) % p

    def add(self, a, b):
        return a + b if self.is_rational else (a + b) % self.characteristic

    def sub(self, a, b):
        return a - b if self.is_rational else (a - b) % self.characteristic

    def mul(self, a, b):
        return a * b if self.is_rational else (a * b) % self.characteristic

    def neg(self, a):
        return -a if self.is_rational else (-a) % self.characteristic

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("No inverse for 0")
        if self.is_rational:
            return 1 / Fraction(a)
        p = self.characteristic
        return pow(a % p, p - 2, p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def __str__(self):
        return "QQ" if self.is_rational else f"GF({self.characteristic})"


@dataclass(frozen=True)
class FieldMatrix:
    """Sparse matrix over a Field, stored as rows of {column: scalar} with no zeros"""
    field: Field
    nrows: int
    ncols: int
    rows: Tuple[Row, ...]

    @classmethod
    def from_rows(cls, field: Field, ncols: int, rows: Iterable[Row]) -> "FieldMatrix":
        clean = []
        for row in rows:
            entries = {}
            for c, v in row.items():
                v = field(v)
                if not field.is_zero(v):
                    entries[c] = v
            clean.append(entries)
        return cls(field, len(clean), ncols, tuple(clean))

    @classmethod
    def from_entries(cls, field: Field, nrows: int, ncols: int,
                     entries: Dict[Tuple[int, int], Any]) -> "FieldMatrix":
        rows: List[Row] = [{} for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = v
        return cls.from_rows(field, ncols, rows)

    @classmethod
    def from_dense(cls, field: Field, dense: Sequence[Sequence[Any]],
                   ncols: Optional[int] = None) -> "FieldMatrix":
        width = ncols if ncols is not None else (len(dense[0]) if dense else 0)
        return cls.from_rows(field, width, ({j: v for j, v in enumerate(r)} for r in dense))

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "FieldMatrix":
        return cls(field, nrows, ncols, tuple({} for _ in range(nrows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "FieldMatrix":
        return cls(field, n, n, tuple({i: field.one} for i in range(n)))

    def entry(self, i: int, j: int):
        return self.rows[i].get(j, self.field.zero)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def transpose(self) -> "FieldMatrix":
        cols: List[Row] = [{} for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                cols[j][i] = v
        return FieldMatrix(self.field, self.ncols, self.nrows, tuple(cols))

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"Cannot multiply {self.shape} by {other.shape}")
        F = self.field
        out = []
        for row in self.rows:
            acc: Row = {}
            for k, a in row.items():
                for j, b in other.rows[k].items():
                    acc[j] = F.add(acc.get(j, F.zero), F.mul(a, b))
            out.append({j: v for j, v in acc.items() if not F.is_zero(v)})
        return FieldMatrix(F, self.nrows, other.ncols, tuple(out))

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"Cannot add {self.shape} and {other.shape}")
        F = self.field
        out = []
        for a, b in zip(self.rows, other.rows):
            acc = dict(a)
            for j, v in b.items():
                acc[j] = F.add(acc.get(j, F.zero), v)
            out.append({j: v for j, v in acc.items() if not F.is_zero(v)})
        return FieldMatrix(F, self.nrows, self.ncols, tuple(out))

    def scale(self, c) -> "FieldMatrix":
        F = self.field
        c = F(c)
        if F.is_zero(c):
            return FieldMatrix.zeros(F, self.nrows, self.ncols)
        return FieldMatrix(F, self.nrows, self.ncols,
                           tuple({j: F.mul(c, v) for j, v in r.items()} for r in self.rows))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "FieldMatrix":
        position = {c: k for k, c in enumerate(col_idx)}
        rows = []
        for i in row_idx:
            rows.append({position[j]: v for j, v in self.rows[i].items() if j in position})
        return FieldMatrix(self.field, len(row_idx), len(col_idx), tuple(rows))

    def vstack(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.ncols != other.ncols:
            raise ShapeMismatch(f"Cannot stack {self.shape} over {other.shape}")
        return FieldMatrix(self.field, self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def hstack(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.nrows != other.nrows:
            raise ShapeMismatch(f"Cannot place {self.shape} beside {other.shape}")
        shift = self.ncols
        rows = tuple({**a, **{j + shift: v for j, v in b.items()}}
                     for a, b in zip(self.rows, other.rows))
        return FieldMatrix(self.field, self.nrows, self.ncols + other.ncols, rows)

    def to_dense(self) -> List[List[Any]]:
        return [[self.entry(i, j) for j in range(self.ncols)] for i in range(self.nrows)]


# ============================================================================
# RANK
# ============================================================================

def _integer_row(row: Row) -> Dict[int, int]:
    """Scale a rational row to a primitive integer row"""
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items()}
    return _primitive(ints)


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _choose_pivot(active: List[Row], pivoting: str) -> Tuple[int, int]:
    if pivoting == "natural":
        return 0, min(active[0])
    counts = Counter(c for row in active for c in row)
    best = min(range(len(active)), key=lambda k: (len(active[k]), k))
    col = min(active[best], key=lambda c: (counts[c], c))
    return best, col


def _sparse_rank(matrix: FieldMatrix, pivoting: str) -> int:
    F = matrix.field
    p = F.characteristic
    if F.is_rational:
        active = [_integer_row(r) for r in matrix.rows if r]
    else:
        active = [dict(r) for r in matrix.rows if r]
    rank = 0
    while active:
        k, c = _choose_pivot(active, pivoting)
        pivot_row = active.pop(k)
        a = pivot_row[c]
        a_inv = pow(a, p - 2, p) if p else None
        remaining = []
        for row in active:
            b = row.get(c)
            if b is None:
                remaining.append(row)
                continue
            if p:
                f = (b * a_inv) % p
                new = dict(row)
                for j, v in pivot_row.items():
                    w = (new.get(j, 0) - f * v) % p
                    if w:
                        new[j] = w
                    else:
                        new.pop(j, None)
            else:
                # fraction-free: a*row - b*pivot, then strip the content
                new = {j: a * v for j, v in row.items()}
                for j, v in pivot_row.items():
                    w = new.get(j, 0) - b * v
                    if w:
                        new[j] = w
                    else:
                        new.pop(j, None)
                new = _primitive(new)
            if new:
                remaining.append(new)
        active = remaining
        rank += 1
    return rank


def _dense_rank(matrix: FieldMatrix) -> int:
    F = matrix.field
    p = F.characteristic
    A = np.array(matrix.to_dense(), dtype=object).reshape(matrix.nrows, matrix.ncols)
    m, n = A.shape
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if A[i, c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            A[[r, pivot], :] = A[[pivot, r], :]
        inv = F.inv(A[r, c])
        A[r, :] = A[r, :] * inv
        if p:
            A[r, :] = A[r, :] % p
        for i in range(r + 1, m):
            if A[i, c] != 0:
                f = A[i, c]
                A[i, :] = A[i, :] - f * A[r, :]
                if p:
                    A[i, :] = A[i, :] % p
        r += 1
        if r == m:
            break
    return r


def rank(matrix: FieldMatrix, method: Optional[str] = None) -> int:
    """
    Exact rank. method is 'dense', 'markowitz' or 'natural'; by default
    matrices smaller than DENSE_CUTOFF in both directions use the dense path
    """
    if matrix.nrows == 0 or matrix.ncols == 0 or matrix.is_zero():
        return 0
    if method is None:
        small = matrix.nrows < DENSE_CUTOFF and matrix.ncols < DENSE_CUTOFF
        method = "dense" if small else PIVOTING
    if method == "dense":
        return _dense_rank(matrix)
    if method not in ("markowitz", "natural"):
        raise LinalgError(f"Unknown elimination method '{method}'")
    return _sparse_rank(matrix, method)


# ============================================================================
# REDUCED ROW ECHELON FORM
# ============================================================================

class _Echelon:
    """
    Incrementally maintained reduced row echelon basis.
    Every pivot row has pivot entry 1 and no other pivot column.
    """

    def __init__(self, field: Field, pivot_limit: Optional[int] = None):
        self.field = field
        self.pivot_limit = pivot_limit
        self.pivots: Dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        F = self.field
        r = dict(row)
        for c in [c for c in r if c in self.pivots]:
            coeff = r.get(c)
            if coeff is None:
                continue
            for j, v in self.pivots[c].items():
                w = F.sub(r.get(j, F.zero), F.mul(coeff, v))
                if F.is_zero(w):
                    r.pop(j, None)
                else:
                    r[j] = w
        return r

    def insert(self, row: Row) -> Optional[int]:
        """Add a row; returns its pivot column, or None if it was dependent"""
        F = self.field
        r = self.reduce(row)
        if not r:
            return None
        eligible = [c for c in r if self.pivot_limit is None or c < self.pivot_limit]
        if not eligible:
            raise InconsistentSystem("Row reduces to a nonzero right-hand side")
        c = min(eligible)
        inv = F.inv(r[c])
        r = {j: F.mul(inv, v) for j, v in r.items()}
        for pc, prow in self.pivots.items():
            coeff = prow.get(c)
            if coeff is None:
                continue
            for j, v in r.items():
                w = F.sub(prow.get(j, F.zero), F.mul(coeff, v))
                if F.is_zero(w):
                    prow.pop(j, None)
                else:
                    prow[j] = w
        self.pivots[c] = r
        return c

    def __len__(self):
        return len(self.pivots)


def row_reduce(matrix: FieldMatrix) -> Dict[int, Row]:
    """Reduced row echelon form as {pivot column: row}"""
    ech = _Echelon(matrix.field)
    for row in matrix.rows:
        if row:
            ech.insert(row)
    return ech.pivots


def kernel_basis(matrix: FieldMatrix) -> FieldMatrix:
    """Rows of the result form a basis of {v : matrix @ v = 0}"""
    F = matrix.field
    pivots = row_reduce(matrix)
    free = [c for c in range(matrix.ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = {f: F.one}
        for pc, prow in pivots.items():
            v = prow.get(f)
            if v is not None:
                vec[pc] = F.neg(v)
        basis.append(vec)
    return FieldMatrix(F, len(basis), matrix.ncols, tuple(basis))


def image_basis(matrix: FieldMatrix) -> FieldMatrix:
    """Rows of the result form a basis of the column space"""
    pivots = row_reduce(matrix.transpose())
    rows = tuple(pivots[c] for c in sorted(pivots))
    return FieldMatrix(matrix.field, len(rows), matrix.nrows, rows)


def cokernel_projection(matrix: FieldMatrix) -> FieldMatrix:
    """A surjection Q out of the target space with ker Q = image of matrix"""
    return kernel_basis(matrix.transpose())


def solve(A: FieldMatrix, B: FieldMatrix) -> FieldMatrix:
    """Particular solution X of A @ X = B (free variables set to zero)"""
    if A.nrows != B.nrows:
        raise ShapeMismatch(f"Cannot solve {A.shape} against {B.shape}")
    F = A.field
    augmented = A.hstack(B)
    ech = _Echelon(F, pivot_limit=A.ncols)
    for row in augmented.rows:
        if row:
            ech.insert(row)
    rows: List[Row] = [{} for _ in range(A.ncols)]
    for pc, prow in ech.pivots.items():
        rows[pc] = {j - A.ncols: v for j, v in prow.items() if j >= A.ncols}
    return FieldMatrix(F, A.ncols, B.ncols, tuple(rows))


def complement_basis(span: FieldMatrix, candidates: FieldMatrix) -> FieldMatrix:
    """Candidate rows that extend a basis of span(span rows), greedily in order"""
    ech = _Echelon(span.field)
    for row in span.rows:
        if row:
            ech.insert(row)
    chosen = []
    for row in candidates.rows:
        if row and ech.insert(row) is not None:
            chosen.append(dict(row))
    return FieldMatrix(span.field, len(chosen), candidates.ncols, tuple(chosen))


# ============================================================================
# COMPLEXES OF VECTOR SPACES
# ============================================================================

@dataclass(frozen=True)
class VectorSpaceComplex:
    """
    Cochain complex V^start -> V^(start+1) -> ...; differentials[k] maps
    degree start+k to start+k+1 and has shape (dims[k+1], dims[k])
    """
    field: Field
    start: int
    dims: Tuple[int, ...]
    differentials: Tuple[FieldMatrix, ...]

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.dims))

    def dim(self, degree: int) -> int:
        k = degree - self.start
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def differential(self, degree: int) -> FieldMatrix:
        k = degree - self.start
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return FieldMatrix.zeros(self.field, self.dim(degree + 1), self.dim(degree))

    def check_square_zero(self) -> bool:
        for k in range(len(self.differentials) - 1):
            if not (self.differentials[k + 1] @ self.differentials[k]).is_zero():
                return False
        return True


def cohomology_dims(C: VectorSpaceComplex, method: Optional[str] = None) -> Tuple[int, ...]:
    """dim H^i for i in C.degrees: dim ker d^i - rank d^(i-1)"""
    ranks = {deg: rank(C.differential(deg), method) for deg in C.degrees}
    return tuple(C.dim(deg) - ranks[deg] - ranks.get(deg - 1, 0) for deg in C.degrees)


def cohomology_basis(C: VectorSpaceComplex, degree: int) -> FieldMatrix:
    """Rows are cocycles whose classes form a basis of H^degree"""
    cycles = kernel_basis(C.differential(degree))
    boundaries = image_basis(C.differential(degree - 1))
    if boundaries.nrows == 0:
        boundaries = FieldMatrix.zeros(C.field, 0, C.dim(degree))
    return complement_basis(boundaries, cycles)


@dataclass(frozen=True)
class SubcomplexInclusion:
    """A chain map sub -> ambient, given degreewise (shape ambient dim x sub dim)"""
    sub: VectorSpaceComplex
    ambient: VectorSpaceComplex
    maps: Dict[int, FieldMatrix]


def induced_map_on_top_cohomology(incl: SubcomplexInclusion, degree: int) -> FieldMatrix:
    """
    Matrix of H^degree(sub) -> H^degree(ambient) in the bases chosen by
    cohomology_basis; shape (dim H(ambient), dim H(sub))
    """
    F = incl.ambient.field
    sub_reps = cohomology_basis(incl.sub, degree)
    amb_reps = cohomology_basis(incl.ambient, degree)
    if sub_reps.nrows == 0 or amb_reps.nrows == 0:
        return FieldMatrix.zeros(F, amb_reps.nrows, sub_reps.nrows)
    images = incl.maps[degree] @ sub_reps.transpose()
    boundaries = image_basis(incl.ambient.differential(degree - 1))
    span = amb_reps if boundaries.nrows == 0 else boundaries.vstack(amb_reps)
    coords = solve(span.transpose(), images)
    offset = boundaries.nrows
    return coords.submatrix(range(offset, offset + amb_reps.nrows), range(sub_reps.nrows))
