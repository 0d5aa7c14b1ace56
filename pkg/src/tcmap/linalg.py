"""Exact rational linear algebra over graded coordinate spaces.

Everything here works with ``fractions.Fraction`` entries, so ranks, kernels
and intersections are exact set operations with no tolerances.  Subspaces are
kept in reduced row echelon form per homogeneous degree; the echelon form is
the canonical representative, so subspace equality is plain matrix equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AmbientMismatch

Vec = tuple[Fraction, ...]
Matrix = tuple[Vec, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def frac(value) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def vec(entries: Iterable) -> Vec:
    return tuple(frac(e) for e in entries)


def zero_vec(n: int) -> Vec:
    return (_ZERO,) * n


def is_zero_vec(u: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in u)


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c: Fraction, u: Sequence[Fraction]) -> Vec:
    return tuple(c * a for a in u)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def transpose(rows: Sequence[Sequence[Fraction]], width: int | None = None) -> Matrix:
    """Transpose; width is the input column count (needed when rows is empty)."""
    if not rows:
        return tuple(() for _ in range(width or 0))
    width = len(rows[0])
    return tuple(tuple(r[c] for r in rows) for c in range(width))


def rref(rows: Iterable[Iterable]) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form.

    Returns ``(echelon, pivots)`` where pivots are unit, pivot columns are
    cleared everywhere else, and zero rows are dropped.  The output row space
    equals the input row space.
    """
    work = [list(vec(r)) for r in rows]
    if not work:
        return (), ()
    ncols = len(work[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = _ONE / work[r][c]
        work[r] = [inv * x for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    echelon = tuple(tuple(row) for row in work[:r])
    return echelon, tuple(pivots)


def rank(rows: Iterable[Iterable]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], width: int | None = None) -> Matrix:
    """Canonical (echelon) basis of ``{x : M x = 0}``."""
    rows = matrix(rows)
    if width is None:
        if not rows:
            raise ValueError("nullspace of an empty matrix needs an explicit width")
        width = len(rows[0])
    echelon, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(width) if c not in pivot_set]
    basis = []
    for f in free:
        x = [_ZERO] * width
        x[f] = _ONE
        for i, p in enumerate(pivots):
            x[p] = -echelon[i][f]
        basis.append(tuple(x))
    reduced, _ = rref(basis)
    return reduced


def solve_right(rows: Sequence[Sequence], b: Sequence, width: int | None = None) -> Vec | None:
    """One solution ``x`` of ``M x = b`` with free coordinates set to zero."""
    rows = matrix(rows)
    b = vec(b)
    if width is None:
        width = len(rows[0]) if rows else 0
    if len(rows) != len(b):
        raise ValueError("right-hand side length does not match row count")
    augmented = [tuple(r) + (t,) for r, t in zip(rows, b)]
    if not augmented:
        return zero_vec(width)
    echelon, pivots = rref(augmented)
    x = [_ZERO] * width
    for row, p in zip(echelon, pivots):
        if p == width:
            return None  # inconsistent system
        x[p] = row[width]
    return tuple(x)


def express_in_rows(rows: Sequence[Sequence], target: Sequence) -> Vec | None:
    """Coefficients c with ``sum(c_i * rows_i) == target``, or None."""
    rows = matrix(rows)
    if not rows:
        return () if is_zero_vec(vec(target)) else None
    return solve_right(transpose(rows), target, width=len(rows))


def invert(rows: Sequence[Sequence]) -> Matrix | None:
    """Exact inverse of a square matrix, or None if singular."""
    rows = matrix(rows)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    augmented = [tuple(r) + tuple(_ONE if i == j else _ZERO for j in range(n)) for i, r in enumerate(rows)]
    echelon, pivots = rref(augmented)
    if tuple(pivots[:n]) != tuple(range(n)) or len(echelon) != n:
        return None
    return tuple(row[n:] for row in echelon)


@dataclass(frozen=True)
class GradedBasis:
    """Ordered basis of a graded vector space: (name, degree) pairs."""

    elements: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.elements]
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")
        if any(d < 0 for _, d in self.elements):
            raise ValueError("degrees must be non-negative")

    @property
    def dim(self) -> int:
        return len(self.elements)

    def degree(self, i: int) -> int:
        return self.elements[i][1]

    def name(self, i: int) -> str:
        return self.elements[i][0]

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.elements):
            if n == name:
                return i
        raise KeyError(name)

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({d for _, d in self.elements}))

    def positions(self, degree: int) -> tuple[int, ...]:
        return tuple(i for i, (_, d) in enumerate(self.elements) if d == degree)

    def top_degree(self) -> int:
        return max((d for _, d in self.elements), default=0)


def graded_basis(elements: Iterable[tuple[str, int]]) -> GradedBasis:
    return GradedBasis(tuple((str(n), int(d)) for n, d in elements))


def trivial_basis(n: int) -> GradedBasis:
    """Ungraded ambient space: n coordinates, all in degree 0."""
    return GradedBasis(tuple((f"e{i}", 0) for i in range(n)))


class Subspace:
    """Subspace of a graded space, stored degreewise in echelon form.

    Vectors handed to :meth:`from_vectors` must be homogeneous (supported on a
    single degree); graded operations then never mix degrees.
    """

    __slots__ = ("ambient", "_blocks")

    def __init__(self, ambient: GradedBasis, blocks: dict[int, Matrix]):
        self.ambient = ambient
        self._blocks = {d: m for d, m in sorted(blocks.items()) if m}

    @classmethod
    def zero(cls, ambient: GradedBasis) -> "Subspace":
        return cls(ambient, {})

    @classmethod
    def from_vectors(cls, ambient: GradedBasis, vectors: Iterable[Sequence]) -> "Subspace":
        by_degree: dict[int, list[Vec]] = {}
        for full in vectors:
            full = vec(full)
            if len(full) != ambient.dim:
                raise ValueError("vector length does not match ambient dimension")
            support = {ambient.degree(i) for i, x in enumerate(full) if x != 0}
            if not support:
                continue
            if len(support) > 1:
                raise ValueError(f"vector is not homogeneous (degrees {sorted(support)})")
            d = support.pop()
            local = tuple(full[i] for i in ambient.positions(d))
            by_degree.setdefault(d, []).append(local)
        blocks = {}
        for d, rows in by_degree.items():
            echelon, _ = rref(rows)
            if echelon:
                blocks[d] = echelon
        return cls(ambient, blocks)

    def block_degrees(self) -> tuple[int, ...]:
        return tuple(self._blocks)

    def component_rows(self, degree: int) -> Matrix:
        """Echelon rows in degree-local coordinates."""
        return self._blocks.get(degree, ())

    @property
    def dim(self) -> int:
        return sum(len(m) for m in self._blocks.values())

    def dim_in_degree(self, degree: int) -> int:
        return len(self._blocks.get(degree, ()))

    def is_zero(self) -> bool:
        return not self._blocks

    def _embed(self, degree: int, local: Vec) -> Vec:
        full = [_ZERO] * self.ambient.dim
        for pos, x in zip(self.ambient.positions(degree), local):
            full[pos] = x
        return tuple(full)

    def basis_vectors(self) -> tuple[Vec, ...]:
        """Canonical full-length basis, ordered by (degree, echelon row)."""
        out = []
        for d, rows in self._blocks.items():
            for row in rows:
                out.append(self._embed(d, row))
        return tuple(out)

    def contains(self, vector: Sequence) -> bool:
        full = vec(vector)
        if len(full) != self.ambient.dim:
            raise AmbientMismatch("vector length does not match ambient dimension")
        remainder = list(full)
        for d, rows in self._blocks.items():
            positions = self.ambient.positions(d)
            local = [remainder[p] for p in positions]
            _, pivots = rref(rows)
            for row, p in zip(rows, pivots):
                f = local[p]
                if f != 0:
                    local = [a - f * b for a, b in zip(local, row)]
            for pos, x in zip(positions, local):
                remainder[pos] = x
        return is_zero_vec(remainder)

    def _check_same_ambient(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise AmbientMismatch("subspaces live over different graded bases")

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_same_ambient(other)
        blocks = {}
        for d in sorted(set(self._blocks) | set(other._blocks)):
            stacked = list(self.component_rows(d)) + list(other.component_rows(d))
            echelon, _ = rref(stacked)
            if echelon:
                blocks[d] = echelon
        return Subspace(self.ambient, blocks)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_same_ambient(other)
        blocks = {}
        for d in sorted(set(self._blocks) & set(other._blocks)):
            a = self.component_rows(d)
            b = other.component_rows(d)
            # Solutions of alpha.A == beta.B give the common vectors.
            width = len(a[0])
            stacked = [tuple(a[i][c] for i in range(len(a))) + tuple(-b[j][c] for j in range(len(b)))
                       for c in range(width)]
            rows = []
            for coeffs in nullspace(stacked, width=len(a) + len(b)):
                alpha = coeffs[: len(a)]
                v = [_ZERO] * width
                for ci, row in zip(alpha, a):
                    if ci != 0:
                        v = [x + ci * y for x, y in zip(v, row)]
                if not is_zero_vec(v):
                    rows.append(tuple(v))
            echelon, _ = rref(rows)
            if echelon:
                blocks[d] = echelon
        return Subspace(self.ambient, blocks)

    def restrict_positive(self) -> "Subspace":
        return Subspace(self.ambient, {d: m for d, m in self._blocks.items() if d > 0})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self._blocks == other._blocks

    def __hash__(self):
        return hash((self.ambient, tuple(sorted(self._blocks.items()))))

    def __repr__(self):
        dims = {d: len(m) for d, m in self._blocks.items()}
        return f"Subspace(dim={self.dim}, by_degree={dims})"


def kernel_basis(rows: Sequence[Sequence], ambient: GradedBasis | None = None) -> Subspace:
    """Null space of a matrix as a Subspace (dimension = cols - rank)."""
    rows = matrix(rows)
    width = len(rows[0]) if rows else (ambient.dim if ambient else 0)
    if ambient is None:
        ambient = trivial_basis(width)
    vectors = nullspace(rows, width=width)
    return Subspace.from_vectors(ambient, vectors)


def image_basis(rows: Sequence[Sequence], ambient: GradedBasis | None = None) -> Subspace:
    """Span of the given row vectors as a Subspace."""
    rows = matrix(rows)
    width = len(rows[0]) if rows else (ambient.dim if ambient else 0)
    if ambient is None:
        ambient = trivial_basis(width)
    return Subspace.from_vectors(ambient, rows)


def intersect(s: Subspace, t: Subspace) -> Subspace:
    return s.intersect(t)


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    return s.sum(t)


def contains(s: Subspace, vector: Sequence) -> bool:
    return s.contains(vector)
