"""Finite-dimensional graded-commutative Q-algebras and their morphisms.

An algebra is given by an ordered graded basis and sparse structure constants
for lexicographic pairs i <= j; the i > j products are derived through the
Koszul sign, so graded commutativity holds by construction for derived
entries.  Products landing above the top basis degree are zero (the table
simply has no entry for them).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import InvalidParameter
from .linalg import (
    GradedBasis,
    Subspace,
    Vec,
    frac,
    graded_basis,
    is_zero_vec,
    nullspace,
    transpose,
    vec,
    zero_vec,
)

ProductTable = tuple[tuple[tuple[int, int], tuple[tuple[int, Fraction], ...]], ...]

DEFAULT_TOP_DEGREE_CAP = 64
DEFAULT_DIMENSION_CAP = 4096


def koszul_sign(d1: int, d2: int) -> int:
    return -1 if (d1 % 2 == 1 and d2 % 2 == 1) else 1


@dataclass(frozen=True)
class GradedAlgebra:
    """Graded-commutative algebra by basis and sparse structure constants."""

    name: str
    basis: GradedBasis
    unit: int
    products: ProductTable
    top_degree_cap: int = DEFAULT_TOP_DEGREE_CAP
    dimension_cap: int = DEFAULT_DIMENSION_CAP

    def __post_init__(self):
        if self.basis.dim > self.dimension_cap:
            raise InvalidParameter(
                f"dimension {self.basis.dim} exceeds cap {self.dimension_cap}")
        if self.basis.top_degree() > self.top_degree_cap:
            raise InvalidParameter(
                f"top degree {self.basis.top_degree()} exceeds cap {self.top_degree_cap}")
        if not (0 <= self.unit < self.basis.dim):
            raise InvalidParameter("unit index out of range")

    @property
    def dim(self) -> int:
        return self.basis.dim

    def top_degree(self) -> int:
        return self.basis.top_degree()

    def degree(self, i: int) -> int:
        return self.basis.degree(i)

    def _table(self) -> dict[tuple[int, int], tuple[tuple[int, Fraction], ...]]:
        return _product_lookup(self)

    def mul_basis(self, i: int, j: int) -> tuple[tuple[int, Fraction], ...]:
        """Product e_i * e_j as sparse (index, coefficient) pairs."""
        table = self._table()
        if (i, j) in table:
            return table[(i, j)]
        if (j, i) in table:
            sign = koszul_sign(self.degree(i), self.degree(j))
            return tuple((k, sign * c) for k, c in table[(j, i)])
        return ()

    def multiply(self, u: Sequence, v: Sequence) -> Vec:
        """Bilinear extension of the structure constants."""
        u = vec(u)
        v = vec(v)
        acc: dict[int, Fraction] = {}
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                for k, c in self.mul_basis(i, j):
                    acc[k] = acc.get(k, Fraction(0)) + a * b * c
        out = [Fraction(0)] * self.dim
        for k, c in acc.items():
            out[k] = c
        return tuple(out)

    def basis_vec(self, i: int) -> Vec:
        out = [Fraction(0)] * self.dim
        out[i] = Fraction(1)
        return tuple(out)

    def unit_vec(self) -> Vec:
        return self.basis_vec(self.unit)

    def element(self, coeffs: Mapping[str, object]) -> Vec:
        out = [Fraction(0)] * self.dim
        for name, c in coeffs.items():
            out[self.basis.index(name)] = frac(c)
        return tuple(out)

    def format_element(self, v: Sequence) -> str:
        terms = []
        for i, c in enumerate(vec(v)):
            if c == 0:
                continue
            name = self.basis.name(i)
            if c == 1:
                terms.append(name)
            elif c == -1:
                terms.append(f"-{name}")
            else:
                terms.append(f"{c}*{name}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


@lru_cache(maxsize=None)
def _product_lookup(algebra: GradedAlgebra) -> dict[tuple[int, int], tuple[tuple[int, Fraction], ...]]:
    return {pair: entries for pair, entries in algebra.products}


def make_algebra(name: str,
                 elements: Iterable[tuple[str, int]],
                 unit: str,
                 products: Mapping[tuple[str, str], Iterable[tuple[str, object]]],
                 **caps) -> GradedAlgebra:
    """Build a GradedAlgebra from names; unit rows are filled in automatically."""
    basis = graded_basis(elements)
    unit_idx = basis.index(unit)
    table: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
    for (ln, rn), entries in products.items():
        li, ri = basis.index(ln), basis.index(rn)
        table[(li, ri)] = tuple((basis.index(en), frac(c)) for en, c in entries)
    for i in range(basis.dim):
        table.setdefault((min(unit_idx, i), max(unit_idx, i)), ((i, Fraction(1)),))
        if i == unit_idx:
            table[(i, i)] = ((i, Fraction(1)),)
    packed = tuple(sorted(table.items()))
    return GradedAlgebra(name=name, basis=basis, unit=unit_idx, products=packed, **caps)


def validate_algebra(algebra: GradedAlgebra) -> list[str]:
    """Check every algebra invariant; returns one message per violation."""
    report: list[str] = []
    basis = algebra.basis
    degree0 = basis.positions(0)
    if len(degree0) != 1:
        report.append(f"connectedness: expected exactly one degree-0 element, found {len(degree0)}")
    elif degree0[0] != algebra.unit:
        report.append("connectedness: the degree-0 element is not the unit")
    if basis.degree(algebra.unit) != 0:
        report.append("unit element must have degree 0")

    top = algebra.top_degree()
    dim = algebra.dim
    table = algebra._table()

    for (i, j), entries in table.items():
        want = basis.degree(i) + basis.degree(j)
        for k, c in entries:
            if c == 0:
                continue
            if basis.degree(k) != want:
                report.append(
                    f"degree additivity: {basis.name(i)}*{basis.name(j)} has a term "
                    f"{basis.name(k)} of degree {basis.degree(k)}, expected {want}"
                    + (" (above top degree, product must vanish)" if want > top else ""))

    for i in range(dim):
        if algebra.mul_basis(algebra.unit, i) != ((i, Fraction(1)),):
            report.append(f"unit law fails on 1*{basis.name(i)}")
        if algebra.mul_basis(i, algebra.unit) != ((i, Fraction(1)),):
            report.append(f"unit law fails on {basis.name(i)}*1")

    # User-supplied redundant entries must agree with the Koszul sign.
    for (i, j) in table:
        if i > j and (j, i) in table:
            sign = koszul_sign(basis.degree(i), basis.degree(j))
            derived = {k: sign * c for k, c in table[(j, i)]}
            given = {k: c for k, c in table[(i, j)]}
            if derived != given:
                report.append(
                    f"graded commutativity violated at ({basis.name(i)},{basis.name(j)})")

    for i in range(dim):
        if basis.degree(i) % 2 == 1:
            if any(c != 0 for _, c in algebra.mul_basis(i, i)):
                report.append(f"odd-degree element {basis.name(i)} has nonzero square")

    for i in range(dim):
        for j in range(dim):
            si = koszul_sign(basis.degree(i), basis.degree(j))
            left = dict(algebra.mul_basis(i, j))
            right = {k: si * c for k, c in algebra.mul_basis(j, i)}
            left = {k: c for k, c in left.items() if c != 0}
            right = {k: c for k, c in right.items() if c != 0}
            if left != right:
                report.append(
                    f"graded commutativity violated at ({basis.name(i)},{basis.name(j)})")

    for i in range(dim):
        ei = algebra.basis_vec(i)
        for j in range(dim):
            ej = algebra.basis_vec(j)
            ij = algebra.multiply(ei, ej)
            for k in range(dim):
                ek = algebra.basis_vec(k)
                lhs = algebra.multiply(ij, ek)
                rhs = algebra.multiply(ei, algebra.multiply(ej, ek))
                if lhs != rhs:
                    report.append(
                        "associativity fails at "
                        f"({basis.name(i)},{basis.name(j)},{basis.name(k)})")
    return report


# ---------------------------------------------------------------------------
# Tensor products with the Koszul sign convention


def tensor_name(a: str, b: str) -> str:
    return f"{a}⊗{b}"


@lru_cache(maxsize=None)
def tensor_product(a: GradedAlgebra, b: GradedAlgebra) -> GradedAlgebra:
    """Graded tensor product: (x⊗y)(z⊗w) = (-1)^{|y||z|} (xz)⊗(yw)."""
    elements = []
    for i in range(a.dim):
        for j in range(b.dim):
            elements.append((tensor_name(a.basis.name(i), b.basis.name(j)),
                             a.degree(i) + b.degree(j)))
    basis = graded_basis(elements)
    dim_b = b.dim

    def pair(i: int, j: int) -> int:
        return i * dim_b + j

    products: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
    for i1 in range(a.dim):
        for j1 in range(b.dim):
            p = pair(i1, j1)
            for i2 in range(a.dim):
                for j2 in range(b.dim):
                    q = pair(i2, j2)
                    if p > q:
                        continue
                    sign = koszul_sign(b.degree(j1), a.degree(i2))
                    left = a.mul_basis(i1, i2)
                    right = b.mul_basis(j1, j2)
                    if not left or not right:
                        continue
                    entries: dict[int, Fraction] = {}
                    for k1, c1 in left:
                        for k2, c2 in right:
                            idx = pair(k1, k2)
                            entries[idx] = entries.get(idx, Fraction(0)) + sign * c1 * c2
                    entries = {k: c for k, c in entries.items() if c != 0}
                    if entries:
                        products[(p, q)] = tuple(sorted(entries.items()))
    packed = tuple(sorted(products.items()))
    return GradedAlgebra(
        name=f"{a.name}⊗{b.name}",
        basis=basis,
        unit=pair(a.unit, b.unit),
        products=packed,
        top_degree_cap=max(a.top_degree_cap + b.top_degree_cap, DEFAULT_TOP_DEGREE_CAP),
        dimension_cap=max(a.dimension_cap * 4, DEFAULT_DIMENSION_CAP),
    )


def tensor_square(a: GradedAlgebra) -> GradedAlgebra:
    return tensor_product(a, a)


def pair_index(a: GradedAlgebra, b: GradedAlgebra, i: int, j: int) -> int:
    return i * b.dim + j


def tensor_vector(a: GradedAlgebra, b: GradedAlgebra, u: Sequence, v: Sequence) -> Vec:
    """The element u⊗v of tensor_product(a, b)."""
    u = vec(u)
    v = vec(v)
    out = [Fraction(0)] * (a.dim * b.dim)
    for i, x in enumerate(u):
        if x == 0:
            continue
        for j, y in enumerate(v):
            if y == 0:
                continue
            out[pair_index(a, b, i, j)] = x * y
    return tuple(out)


# ---------------------------------------------------------------------------
# Morphisms


@dataclass(frozen=True)
class AlgebraMorphism:
    """Degree-preserving unital multiplicative linear map."""

    source: GradedAlgebra
    target: GradedAlgebra
    images: tuple[Vec, ...]  # one target vector per source basis element

    def apply(self, v: Sequence) -> Vec:
        v = vec(v)
        out = [Fraction(0)] * self.target.dim
        for i, c in enumerate(v):
            if c == 0:
                continue
            for k, x in enumerate(self.images[i]):
                if x != 0:
                    out[k] += c * x
        return tuple(out)

    def compose(self, inner: "AlgebraMorphism") -> "AlgebraMorphism":
        """self ∘ inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise InvalidParameter("morphisms do not compose")
        images = tuple(self.apply(img) for img in inner.images)
        return AlgebraMorphism(inner.source, self.target, images)

    @staticmethod
    def identity(algebra: GradedAlgebra) -> "AlgebraMorphism":
        return AlgebraMorphism(algebra, algebra,
                               tuple(algebra.basis_vec(i) for i in range(algebra.dim)))

    def validate(self) -> list[str]:
        report = []
        src, tgt = self.source, self.target
        if len(self.images) != src.dim:
            return ["image list length does not match source dimension"]
        for i, img in enumerate(self.images):
            d = src.degree(i)
            for k, c in enumerate(img):
                if c != 0 and tgt.degree(k) != d:
                    report.append(
                        f"degree violation: image of {src.basis.name(i)} has a "
                        f"degree-{tgt.degree(k)} term")
                    break
        if self.apply(src.unit_vec()) != tgt.unit_vec():
            report.append("unit is not mapped to the unit")
        for i in range(src.dim):
            for j in range(src.dim):
                lhs = self.apply(src.multiply(src.basis_vec(i), src.basis_vec(j)))
                rhs = tgt.multiply(self.images[i], self.images[j])
                if lhs != rhs:
                    report.append(
                        f"multiplicativity fails at ({src.basis.name(i)},{src.basis.name(j)})")
        return report


def make_morphism(source: GradedAlgebra, target: GradedAlgebra,
                  images: Mapping[str, Iterable[tuple[str, object]]]) -> AlgebraMorphism:
    """Build a morphism from generator images by basis-element name.

    Every source basis element must get an image; the unit image defaults to
    the target unit.
    """
    vecs = []
    for i in range(source.dim):
        name = source.basis.name(i)
        if i == source.unit and name not in images:
            vecs.append(target.unit_vec())
            continue
        entries = images.get(name, ())
        out = [Fraction(0)] * target.dim
        for tn, c in entries:
            out[target.basis.index(tn)] += frac(c)
        vecs.append(tuple(out))
    return AlgebraMorphism(source, target, tuple(vecs))


def tensor_square_morphism(phi: AlgebraMorphism) -> AlgebraMorphism:
    """phi⊗phi between the Koszul-signed tensor squares (no extra sign)."""
    ts_src = tensor_square(phi.source)
    ts_tgt = tensor_square(phi.target)
    images = []
    for i in range(phi.source.dim):
        for j in range(phi.source.dim):
            images.append(tensor_vector(phi.target, phi.target,
                                        phi.images[i], phi.images[j]))
    return AlgebraMorphism(ts_src, ts_tgt, tuple(images))


def cup_morphism(algebra: GradedAlgebra) -> AlgebraMorphism:
    """Multiplication map tensor_square(A) -> A, a⊗b -> a*b."""
    ts = tensor_square(algebra)
    images = []
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            out = [Fraction(0)] * algebra.dim
            for k, c in algebra.mul_basis(i, j):
                out[k] += c
            images.append(tuple(out))
    return AlgebraMorphism(ts, algebra, tuple(images))


def reduced_subspace(algebra: GradedAlgebra) -> Subspace:
    """Span of all positive-degree basis elements."""
    vectors = [algebra.basis_vec(i) for i in range(algebra.dim) if algebra.degree(i) > 0]
    return Subspace.from_vectors(algebra.basis, vectors)


def image_subspace(phi: AlgebraMorphism, reduced: bool = False) -> Subspace:
    """Span of the images of the (optionally positive-degree) source basis."""
    vectors = []
    for i in range(phi.source.dim):
        if reduced and phi.source.degree(i) == 0:
            continue
        img = phi.images[i]
        if not is_zero_vec(img):
            vectors.append(img)
    return Subspace.from_vectors(phi.target.basis, vectors)


def kernel_subspace(phi: AlgebraMorphism) -> Subspace:
    """Degreewise kernel of a degree-preserving linear map."""
    src = phi.source
    blocks = []
    for d in src.basis.degrees():
        positions = src.basis.positions(d)
        tgt_positions = phi.target.basis.positions(d)
        rows = [tuple(phi.images[p][q] for q in tgt_positions) for p in positions]
        for coeffs in nullspace(transpose(rows, width=len(tgt_positions)), width=len(positions)):
            full = [Fraction(0)] * src.dim
            for c, p in zip(coeffs, positions):
                full[p] = c
            blocks.append(tuple(full))
    return Subspace.from_vectors(src.basis, blocks)


# ---------------------------------------------------------------------------
# Work maps


@dataclass(frozen=True)
class WorkMap:
    """A map f: X -> Y described by its induced morphism f*: H*(Y) -> H*(X)."""

    domain_cohomology: GradedAlgebra     # H*(X)
    codomain_cohomology: GradedAlgebra   # H*(Y)
    induced: AlgebraMorphism             # f*, contravariant
    formal: bool = False
    codomain_coH: bool = False
    simply_connected: bool = False
    name: str = "f"

    def validate(self) -> list[str]:
        report = []
        if self.induced.source != self.codomain_cohomology:
            report.append("induced morphism source must be the codomain cohomology")
        if self.induced.target != self.domain_cohomology:
            report.append("induced morphism target must be the domain cohomology")
        no_degree_one = not (self.domain_cohomology.basis.positions(1)
                             or self.codomain_cohomology.basis.positions(1))
        if self.simply_connected != no_degree_one:
            report.append("simply_connected flag contradicts degree-1 classes")
        report.extend(self.induced.validate())
        return report


def work_map(induced: AlgebraMorphism, *, formal: bool = False,
             codomain_coH: bool = False, simply_connected: bool | None = None,
             name: str = "f") -> WorkMap:
    """WorkMap builder; simple connectivity defaults to the degree-1 test."""
    if simply_connected is None:
        simply_connected = not (induced.target.basis.positions(1)
                                or induced.source.basis.positions(1))
    return WorkMap(domain_cohomology=induced.target,
                   codomain_cohomology=induced.source,
                   induced=induced,
                   formal=formal,
                   codomain_coH=codomain_coH,
                   simply_connected=simply_connected,
                   name=name)
