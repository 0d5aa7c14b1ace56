"""Degree-truncated cochain algebras and cochain maps.

All objects expose the same small surface: per-degree monomial/basis
enumeration, basis products with Koszul signs, and a differential.  The
concrete flavours are

* :class:`FreeCDGA` - free graded-commutative algebra on generators with a
  well-ordered differential (a Sullivan algebra),
* :class:`FormalCochains` - a finite-dimensional graded algebra regarded as a
  cochain algebra with zero differential,
* :class:`TensorSquareCochains` - the Koszul-signed tensor square of any
  cochain algebra,
* :class:`ExtensionCochains` - a base algebra extended by freshly attached
  free generators whose differentials may mix base and earlier generators,
* :class:`QuotientCochains` - the quotient by a degreewise ideal, represented
  on canonical echelon complements.

Truncation means claims are made in degrees <= N only; bases above N are
still enumerable where a differential target needs them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import GradedAlgebra, koszul_sign
from .errors import InvalidParameter, TruncationExceeded
from .linalg import Vec, is_zero_vec, rref, vec, zero_vec

Mono = tuple[int, ...]
Poly = dict[Mono, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Monomial helpers over a list of generator degrees


def mono_degree(degrees: Sequence[int], m: Mono) -> int:
    return sum(e * degrees[i] for i, e in enumerate(m) if e)


def mono_mul(degrees: Sequence[int], a: Mono, b: Mono) -> tuple[int, Mono | None]:
    """Product of normalized monomials: (sign, monomial) or (0, None)."""
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    crossings = 0
    odd_tail = 0  # odd a-factors with index > current j, scanned right to left
    for j in range(n - 1, -1, -1):
        if b[j] and degrees[j] % 2 == 1:
            if a[j]:
                return 0, None  # odd generator squared
            crossings += b[j] * odd_tail
        if a[j] and degrees[j] % 2 == 1:
            odd_tail += a[j]
    out = tuple(x + y for x, y in zip(a, b))
    return (-1 if crossings % 2 else 1), out


def enumerate_monomials(degrees: Sequence[int], k: int) -> tuple[Mono, ...]:
    """All exponent tuples of total degree k (odd generators squarefree)."""
    if any(d < 1 for d in degrees):
        raise InvalidParameter("generators must have degree >= 1")
    out: list[Mono] = []
    current: list[int] = []

    def rec(i: int, remaining: int):
        if i == len(degrees):
            if remaining == 0:
                out.append(tuple(current))
            return
        d = degrees[i]
        cap = 1 if d % 2 == 1 else remaining // d
        for e in range(min(cap, remaining // d) + 1):
            current.append(e)
            rec(i + 1, remaining - e * d)
            current.pop()

    rec(0, k)
    return tuple(out)


def mono_factors(m: Mono) -> list[int]:
    """Generator indices with multiplicity, in storage order."""
    out = []
    for i, e in enumerate(m):
        out.extend([i] * e)
    return out


def mono_label(names: Sequence[str], m: Mono) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(names[i])
        elif e > 1:
            parts.append(f"{names[i]}^{e}")
    return "*".join(parts) if parts else "1"


def poly_add_into(acc: Poly, p: Poly, scale: Fraction = _ONE):
    for m, c in p.items():
        s = acc.get(m, _ZERO) + scale * c
        if s == 0:
            acc.pop(m, None)
        else:
            acc[m] = s


def poly_mul(degrees: Sequence[int], p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            s, m = mono_mul(degrees, m1, m2)
            if s == 0:
                continue
            c = out.get(m, _ZERO) + s * c1 * c2
            if c == 0:
                out.pop(m, None)
            else:
                out[m] = c
    return out


def poly_degree(degrees: Sequence[int], p: Poly) -> int | None:
    """Common degree of a homogeneous polynomial (None for 0)."""
    degs = {mono_degree(degrees, m) for m in p}
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degs)}")
    return degs.pop()


# ---------------------------------------------------------------------------
# Common cochain-algebra surface


class Cochains:
    """Shared caching layer; subclasses provide dims, products, differential."""

    truncation: int
    name: str = ""

    def __init__(self):
        self._d_cache: dict[int, tuple[Vec, ...]] = {}
        self._mul_cache: dict[tuple[int, int, int, int], Vec] = {}

    # subclass surface ----------------------------------------------------
    def dim(self, k: int) -> int:
        raise NotImplementedError

    def label(self, k: int, i: int) -> str:
        raise NotImplementedError

    def _d_basis(self, k: int, i: int) -> Vec:
        raise NotImplementedError

    def _mul_basis(self, k1: int, i1: int, k2: int, i2: int) -> Vec:
        raise NotImplementedError

    # shared helpers --------------------------------------------------------
    def _clear_caches(self):
        self._d_cache.clear()
        self._mul_cache.clear()

    def d_matrix(self, k: int) -> tuple[Vec, ...]:
        if k not in self._d_cache:
            self._d_cache[k] = tuple(self._d_basis(k, i) for i in range(self.dim(k)))
        return self._d_cache[k]

    def mul_basis(self, k1: int, i1: int, k2: int, i2: int) -> Vec:
        key = (k1, i1, k2, i2)
        if key not in self._mul_cache:
            self._mul_cache[key] = self._mul_basis(k1, i1, k2, i2)
        return self._mul_cache[key]

    def zero(self, k: int) -> Vec:
        return zero_vec(self.dim(k))

    def basis_vec(self, k: int, i: int) -> Vec:
        out = [_ZERO] * self.dim(k)
        out[i] = _ONE
        return tuple(out)

    def d_vec(self, k: int, v: Sequence) -> Vec:
        rows = self.d_matrix(k)
        out = [_ZERO] * self.dim(k + 1)
        for c, row in zip(v, rows):
            if c != 0:
                for idx, x in enumerate(row):
                    if x != 0:
                        out[idx] += c * x
        return tuple(out)

    def mul_vec(self, k1: int, v1: Sequence, k2: int, v2: Sequence) -> Vec:
        out = [_ZERO] * self.dim(k1 + k2)
        for i1, c1 in enumerate(v1):
            if c1 == 0:
                continue
            for i2, c2 in enumerate(v2):
                if c2 == 0:
                    continue
                prod = self.mul_basis(k1, i1, k2, i2)
                for idx, x in enumerate(prod):
                    if x != 0:
                        out[idx] += c1 * c2 * x
        return tuple(out)

    def format_vec(self, k: int, v: Sequence) -> str:
        terms = []
        for i, c in enumerate(v):
            if c == 0:
                continue
            lab = self.label(k, i)
            if c == 1:
                terms.append(lab)
            elif c == -1:
                terms.append(f"-{lab}")
            else:
                terms.append(f"{c}*{lab}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# ---------------------------------------------------------------------------
# Free CDGAs


class FreeCDGA(Cochains):
    """Free graded-commutative cochain algebra on well-ordered generators."""

    def __init__(self, generators: Iterable[tuple[str, int]],
                 differential: Mapping[str, Poly] | None = None,
                 truncation: int = 12,
                 allow_degree_one: bool = False,
                 name: str = ""):
        super().__init__()
        gens = tuple((str(n), int(d)) for n, d in generators)
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            raise InvalidParameter("generator names must be unique")
        if any(d < 1 for _, d in gens):
            raise InvalidParameter("generator degrees must be >= 1")
        self.generators = gens
        self.gen_names = tuple(names)
        self.gen_degrees = tuple(d for _, d in gens)
        self.truncation = int(truncation)
        self.allow_degree_one = allow_degree_one
        self.name = name or "Λ(" + ",".join(names) + ")"
        diff: dict[int, Poly] = {}
        for gname, poly in (differential or {}).items():
            idx = self.gen_names.index(gname)
            p = {tuple(m): Fraction(c) for m, c in poly.items() if c != 0}
            if p:
                diff[idx] = p
        self.gen_differential = diff
        self._mono_cache: dict[int, tuple[Mono, ...]] = {}
        self._mono_index: dict[int, dict[Mono, int]] = {}

    # basis -----------------------------------------------------------------
    def monomials(self, k: int) -> tuple[Mono, ...]:
        if k < 0:
            return ()
        if k not in self._mono_cache:
            self._mono_cache[k] = enumerate_monomials(self.gen_degrees, k)
            self._mono_index[k] = {m: i for i, m in enumerate(self._mono_cache[k])}
        return self._mono_cache[k]

    def mono_pos(self, k: int, m: Mono) -> int:
        self.monomials(k)
        return self._mono_index[k][m]

    def dim(self, k: int) -> int:
        return len(self.monomials(k))

    def label(self, k: int, i: int) -> str:
        return mono_label(self.gen_names, self.monomials(k)[i])

    def gen_index(self, name: str) -> int:
        return self.gen_names.index(name)

    def gen_mono(self, idx: int) -> Mono:
        return tuple(1 if i == idx else 0 for i in range(len(self.generators)))

    # polynomial <-> vector ---------------------------------------------------
    def to_vec(self, k: int, p: Poly) -> Vec:
        out = [_ZERO] * self.dim(k)
        for m, c in p.items():
            if c != 0:
                out[self.mono_pos(k, m)] = c
        return tuple(out)

    def to_poly(self, k: int, v: Sequence) -> Poly:
        monos = self.monomials(k)
        return {monos[i]: Fraction(c) for i, c in enumerate(v) if c != 0}

    # differential ------------------------------------------------------------
    def d_gen(self, idx: int) -> Poly:
        return dict(self.gen_differential.get(idx, {}))

    def d_poly(self, p: Poly) -> Poly:
        out: Poly = {}
        for m, c in p.items():
            poly_add_into(out, self._d_mono(m), c)
        return out

    def _d_mono(self, m: Mono) -> Poly:
        factors = mono_factors(m)
        out: Poly = {}
        prefix_degree = 0
        for pos, g in enumerate(factors):
            dg = self.gen_differential.get(g)
            if dg:
                sign = -1 if prefix_degree % 2 else 1
                prefix = _mono_from_factors(len(m), factors[:pos])
                suffix = _mono_from_factors(len(m), factors[pos + 1:])
                term = poly_mul(self.gen_degrees, {prefix: Fraction(sign)}, dg)
                term = poly_mul(self.gen_degrees, term, {suffix: _ONE})
                poly_add_into(out, term)
            prefix_degree += self.gen_degrees[g]
        return out

    def _d_basis(self, k: int, i: int) -> Vec:
        return self.to_vec(k + 1, self._d_mono(self.monomials(k)[i]))

    def _mul_basis(self, k1: int, i1: int, k2: int, i2: int) -> Vec:
        s, m = mono_mul(self.gen_degrees, self.monomials(k1)[i1], self.monomials(k2)[i2])
        out = [_ZERO] * self.dim(k1 + k2)
        if s != 0:
            out[self.mono_pos(k1 + k2, m)] = Fraction(s)
        return tuple(out)


def _mono_from_factors(length: int, factors: Sequence[int]) -> Mono:
    out = [0] * length
    for g in factors:
        out[g] += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# Finite-dimensional algebras with zero differential


class FormalCochains(Cochains):
    """A graded algebra viewed as a cochain algebra with d = 0."""

    def __init__(self, algebra: GradedAlgebra, truncation: int | None = None):
        super().__init__()
        self.algebra = algebra
        self.truncation = truncation if truncation is not None else algebra.top_degree()
        self._positions: dict[int, tuple[int, ...]] = {}
        self.name = algebra.name

    def positions(self, k: int) -> tuple[int, ...]:
        if k not in self._positions:
            self._positions[k] = self.algebra.basis.positions(k)
        return self._positions[k]

    def dim(self, k: int) -> int:
        return len(self.positions(k))

    def label(self, k: int, i: int) -> str:
        return self.algebra.basis.name(self.positions(k)[i])

    def _d_basis(self, k: int, i: int) -> Vec:
        return self.zero(k + 1)

    def _mul_basis(self, k1: int, i1: int, k2: int, i2: int) -> Vec:
        g1 = self.positions(k1)[i1]
        g2 = self.positions(k2)[i2]
        target = self.positions(k1 + k2)
        lookup = {g: idx for idx, g in enumerate(target)}
        out = [_ZERO] * len(target)
        for gk, c in self.algebra.mul_basis(g1, g2):
            out[lookup[gk]] += c
        return tuple(out)

    def to_local(self, k: int, full: Sequence) -> Vec:
        return tuple(Fraction(full[p]) for p in self.positions(k))


# ---------------------------------------------------------------------------
# Tensor squares


class TensorSquareCochains(Cochains):
    """C ⊗ C with the Koszul product (a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd."""

    def __init__(self, factor: Cochains, truncation: int | None = None):
        super().__init__()
        self.factor = factor
        self.truncation = truncation if truncation is not None else factor.truncation
        self.name = f"{factor.name}⊗{factor.name}"
        self._layout: dict[int, tuple[tuple[int, int], ...]] = {}

    def layout(self, k: int) -> tuple[tuple[int, int], ...]:
        """Per left-degree blocks: (k1, offset)."""
        if k not in self._layout:
            blocks = []
            offset = 0
            for k1 in range(k + 1):
                blocks.append((k1, offset))
                offset += self.factor.dim(k1) * self.factor.dim(k - k1)
            self._layout[k] = tuple(blocks)
        return self._layout[k]

    def dim(self, k: int) -> int:
        blocks = self.layout(k)
        k1, offset = blocks[-1]
        return offset + self.factor.dim(k1) * self.factor.dim(k - k1)

    def encode(self, k: int, k1: int, i1: int, i2: int) -> int:
        blocks = self.layout(k)
        offset = blocks[k1][1]
        return offset + i1 * self.factor.dim(k - k1) + i2

    def decode(self, k: int, idx: int) -> tuple[int, int, int]:
        blocks = self.layout(k)
        for k1, offset in reversed(blocks):
            if idx >= offset:
                rel = idx - offset
                d2 = self.factor.dim(k - k1)
                return k1, rel // d2, rel % d2
        raise IndexError(idx)

    def label(self, k: int, i: int) -> str:
        k1, i1, i2 = self.decode(k, i)
        return f"{self.factor.label(k1, i1)}⊗{self.factor.label(k - k1, i2)}"

    def tensor_vec(self, k1: int, v1: Sequence, k2: int, v2: Sequence) -> Vec:
        out = [_ZERO] * self.dim(k1 + k2)
        for i1, c1 in enumerate(v1):
            if c1 == 0:
                continue
            for i2, c2 in enumerate(v2):
                if c2 != 0:
                    out[self.encode(k1 + k2, k1, i1, i2)] = c1 * c2
        return tuple(out)

    def _mul_basis(self, ka: int, ia: int, kb: int, ib: int) -> Vec:
        k1, i1, i2 = self.decode(ka, ia)
        k2 = ka - k1
        l1, j1, j2 = self.decode(kb, ib)
        l2 = kb - l1
        sign = koszul_sign(k2, l1)
        left = self.factor.mul_basis(k1, i1, l1, j1)
        right = self.factor.mul_basis(k2, i2, l2, j2)
        out = [_ZERO] * self.dim(ka + kb)
        for a, ca in enumerate(left):
            if ca == 0:
                continue
            for b, cb in enumerate(right):
                if cb != 0:
                    out[self.encode(ka + kb, k1 + l1, a, b)] += sign * ca * cb
        return tuple(out)

    def _d_basis(self, k: int, i: int) -> Vec:
        k1, i1, i2 = self.decode(k, i)
        k2 = k - k1
        out = [_ZERO] * self.dim(k + 1)
        for a, c in enumerate(self.factor.d_matrix(k1)[i1]):
            if c != 0:
                out[self.encode(k + 1, k1 + 1, a, i2)] += c
        sign = -1 if k1 % 2 else 1
        for b, c in enumerate(self.factor.d_matrix(k2)[i2]):
            if c != 0:
                out[self.encode(k + 1, k1, i1, b)] += sign * c
        return tuple(out)


# ---------------------------------------------------------------------------
# Extensions by freshly attached free generators

SymElem = dict[tuple[int, int, Mono], Fraction]  # (base degree, base index, U-monomial)


class ExtensionCochains(Cochains):
    """base ⊗ Λ(u_1, u_2, ...) with differentials mixing base and earlier u's.

    Generators are attached in order; d(u_i) may involve the base and the
    u_j with j < i, so the well-ordering constraint holds by construction.
    """

    def __init__(self, base: Cochains, name: str = ""):
        super().__init__()
        if base.dim(0) != 1:
            raise InvalidParameter("extension base must be connected")
        self.base = base
        self.truncation = base.truncation
        self.name = name or f"{base.name}⊗ΛU"
        self.gens: list[tuple[str, int]] = []
        self._d_syms: list[SymElem | None] = []
        self._umono_cache: dict[int, tuple[Mono, ...]] = {}
        self._layout_cache: dict[int, tuple] = {}
        self._d_umono_cache: dict[Mono, SymElem] = {}

    # generator management -----------------------------------------------------
    def gen_degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.gens)

    def append_generator(self, name: str, degree: int, d_value: Sequence | None):
        """Attach one free generator; d_value is a vector in degree+1 (or None)."""
        if degree < 1:
            raise InvalidParameter("extension generators must have degree >= 1")
        sym = None
        if d_value is not None and not is_zero_vec(vec(d_value)):
            sym = self.vec_to_sym(degree + 1, d_value)
        self.gens.append((str(name), int(degree)))
        self._d_syms.append(sym)
        self._umono_cache.clear()
        self._layout_cache.clear()
        self._d_umono_cache.clear()
        self._clear_caches()

    # basis ----------------------------------------------------------------
    def umonos(self, m: int) -> tuple[Mono, ...]:
        if m not in self._umono_cache:
            degs = self.gen_degrees()
            self._umono_cache[m] = tuple(
                _trim(mo) for mo in enumerate_monomials(degs, m)) if degs or m == 0 else (
                ((),) if m == 0 else ())
        return self._umono_cache[m]

    def layout(self, k: int):
        """Blocks (umono degree, umono, base degree, offset) plus index maps."""
        if k not in self._layout_cache:
            blocks = []
            index: dict[tuple[Mono, int], int] = {}
            offset = 0
            for dm in range(k + 1):
                kb = k - dm
                nb = self.base.dim(kb)
                if nb == 0:
                    continue
                for mo in self.umonos(dm):
                    blocks.append((dm, mo, kb, offset))
                    index[(mo, kb)] = offset
                    offset += nb
            self._layout_cache[k] = (tuple(blocks), index, offset)
        return self._layout_cache[k]

    def dim(self, k: int) -> int:
        return self.layout(k)[2]

    def decode(self, k: int, idx: int) -> tuple[int, int, Mono]:
        """Position -> (base degree, base index, U-monomial)."""
        blocks, _, total = self.layout(k)
        if not 0 <= idx < total:
            raise IndexError(idx)
        for dm, mo, kb, offset in reversed(blocks):
            if idx >= offset:
                return kb, idx - offset, mo
        raise IndexError(idx)

    def encode(self, k: int, kb: int, ib: int, mo: Mono) -> int:
        _, index, _ = self.layout(k)
        return index[(_trim(mo), kb)] + ib

    def label(self, k: int, i: int) -> str:
        kb, ib, mo = self.decode(k, i)
        base = self.base.label(kb, ib)
        names = [n for n, _ in self.gens]
        ulabel = mono_label(names, mo)
        if ulabel == "1":
            return base
        if base == self.base.label(0, 0) and kb == 0:
            return ulabel
        return f"{base}*{ulabel}"

    # symbolic elements -----------------------------------------------------
    def vec_to_sym(self, k: int, v: Sequence) -> SymElem:
        out: SymElem = {}
        for i, c in enumerate(v):
            if c != 0:
                kb, ib, mo = self.decode(k, i)
                out[(kb, ib, mo)] = Fraction(c)
        return out

    def sym_to_vec(self, k: int, e: SymElem) -> Vec:
        out = [_ZERO] * self.dim(k)
        for (kb, ib, mo), c in e.items():
            out[self.encode(k, kb, ib, mo)] += c
        return tuple(out)

    def _sym_mul(self, e1: SymElem, e2: SymElem) -> SymElem:
        degs = self.gen_degrees()
        out: SymElem = {}
        for (kb1, ib1, m1), c1 in e1.items():
            dm1 = mono_degree(degs, m1)
            for (kb2, ib2, m2), c2 in e2.items():
                sign1 = koszul_sign(dm1, kb2)
                sign2, m12 = mono_mul(degs, m1, m2)
                if sign2 == 0:
                    continue
                bprod = self.base.mul_basis(kb1, ib1, kb2, ib2)
                tm = _trim(m12)
                for ib, cb in enumerate(bprod):
                    if cb != 0:
                        key = (kb1 + kb2, ib, tm)
                        s = out.get(key, _ZERO) + sign1 * sign2 * c1 * c2 * cb
                        if s == 0:
                            out.pop(key, None)
                        else:
                            out[key] = s
        return out

    def _sym_unit(self, mo: Mono) -> SymElem:
        return {(0, 0, _trim(mo)): _ONE}

    def _d_umono(self, mo: Mono) -> SymElem:
        """Leibniz differential of a pure U-monomial, as a symbolic element."""
        mo = _trim(mo)
        if mo in self._d_umono_cache:
            return self._d_umono_cache[mo]
        degs = self.gen_degrees()
        factors = mono_factors(mo)
        out: SymElem = {}
        prefix_degree = 0
        for pos, g in enumerate(factors):
            dval = self._d_syms[g]
            if dval:
                sign = Fraction(-1 if prefix_degree % 2 else 1)
                prefix = self._sym_unit(_mono_from_factors(len(mo), factors[:pos]))
                suffix = self._sym_unit(_mono_from_factors(len(mo), factors[pos + 1:]))
                term = self._sym_mul(self._sym_mul(prefix, dval), suffix)
                for key, c in term.items():
                    s = out.get(key, _ZERO) + sign * c
                    if s == 0:
                        out.pop(key, None)
                    else:
                        out[key] = s
            prefix_degree += degs[g]
        self._d_umono_cache[mo] = out
        return out

    # cochain surface ---------------------------------------------------------
    def _d_basis(self, k: int, i: int) -> Vec:
        kb, ib, mo = self.decode(k, i)
        out: SymElem = {}
        for jb, c in enumerate(self.base.d_matrix(kb)[ib]):
            if c != 0:
                key = (kb + 1, jb, mo)
                out[key] = out.get(key, _ZERO) + c
        dmo = self._d_umono(mo)
        if dmo:
            sign = Fraction(-1 if kb % 2 else 1)
            base_part: SymElem = {(kb, ib, ()): sign}
            term = self._sym_mul(base_part, dmo)
            for key, c in term.items():
                s = out.get(key, _ZERO) + c
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return self.sym_to_vec(k + 1, out)

    def _mul_basis(self, k1: int, i1: int, k2: int, i2: int) -> Vec:
        kb1, ib1, m1 = self.decode(k1, i1)
        kb2, ib2, m2 = self.decode(k2, i2)
        sym = self._sym_mul({(kb1, ib1, m1): _ONE}, {(kb2, ib2, m2): _ONE})
        return self.sym_to_vec(k1 + k2, sym)

    def base_inclusion_vec(self, kb: int, v: Sequence) -> Vec:
        """Embed a base element as base⊗1."""
        out = [_ZERO] * self.dim(kb)
        for ib, c in enumerate(v):
            if c != 0:
                out[self.encode(kb, kb, ib, ())] = Fraction(c)
        return tuple(out)

    def gen_vec(self, gen_index: int) -> Vec:
        name, degree = self.gens[gen_index]
        mo = tuple(1 if i == gen_index else 0 for i in range(len(self.gens)))
        out = [_ZERO] * self.dim(degree)
        out[self.encode(degree, 0, 0, mo)] = _ONE
        return tuple(out)


def _trim(m: Mono) -> Mono:
    i = len(m)
    while i > 0 and m[i - 1] == 0:
        i -= 1
    return m[:i]


# ---------------------------------------------------------------------------
# Quotients by degreewise ideals


class QuotientCochains(Cochains):
    """P / I on the canonical echelon complement of each degree component."""

    def __init__(self, base: Cochains, ideal_blocks: Mapping[int, tuple[Vec, ...]],
                 name: str = ""):
        super().__init__()
        self.base = base
        self.truncation = base.truncation
        self.name = name or f"{base.name}/I"
        self._rows: dict[int, tuple[Vec, ...]] = {}
        self._pivots: dict[int, tuple[int, ...]] = {}
        for k, rows in ideal_blocks.items():
            reduced, pivots = rref(rows)
            if reduced:
                self._rows[k] = reduced
                self._pivots[k] = pivots
        self._complement: dict[int, tuple[int, ...]] = {}

    def complement(self, k: int) -> tuple[int, ...]:
        if k not in self._complement:
            pivots = set(self._pivots.get(k, ()))
            self._complement[k] = tuple(
                i for i in range(self.base.dim(k)) if i not in pivots)
        return self._complement[k]

    def dim(self, k: int) -> int:
        return len(self.complement(k))

    def label(self, k: int, i: int) -> str:
        return f"[{self.base.label(k, self.complement(k)[i])}]"

    def project_full(self, k: int, v: Sequence) -> Vec:
        """Canonical representative: eliminate the ideal's pivot coordinates."""
        out = list(vec(v))
        rows = self._rows.get(k, ())
        pivots = self._pivots.get(k, ())
        for row, p in zip(rows, pivots):
            c = out[p]
            if c != 0:
                out = [a - c * b for a, b in zip(out, row)]
        return tuple(out)

    def to_local(self, k: int, canonical: Sequence) -> Vec:
        return tuple(Fraction(canonical[i]) for i in self.complement(k))

    def lift_local(self, k: int, local: Sequence) -> Vec:
        out = [_ZERO] * self.base.dim(k)
        for pos, c in zip(self.complement(k), local):
            out[pos] = Fraction(c)
        return tuple(out)

    def _d_basis(self, k: int, i: int) -> Vec:
        lifted = self.base.basis_vec(k, self.complement(k)[i])
        image = self.base.d_vec(k, lifted)
        return self.to_local(k + 1, self.project_full(k + 1, image))

    def _mul_basis(self, k1: int, i1: int, k2: int, i2: int) -> Vec:
        prod = self.base.mul_basis(k1, self.complement(k1)[i1],
                                   k2, self.complement(k2)[i2])
        return self.to_local(k1 + k2, self.project_full(k1 + k2, prod))


# ---------------------------------------------------------------------------
# Cochain maps


class CochainMap:
    """Degree-preserving linear map of cochain algebras with cached matrices."""

    def __init__(self, source: Cochains, target: Cochains,
                 image_fn: Callable[[int, int], Vec], name: str = ""):
        self.source = source
        self.target = target
        self._image_fn = image_fn
        self.name = name
        self._matrix_cache: dict[int, tuple[Vec, ...]] = {}

    def clear_cache(self):
        self._matrix_cache.clear()

    def matrix(self, k: int) -> tuple[Vec, ...]:
        if k not in self._matrix_cache:
            self._matrix_cache[k] = tuple(
                self._image_fn(k, i) for i in range(self.source.dim(k)))
        return self._matrix_cache[k]

    def apply(self, k: int, v: Sequence) -> Vec:
        rows = self.matrix(k)
        out = [_ZERO] * self.target.dim(k)
        for c, row in zip(v, rows):
            if c != 0:
                for idx, x in enumerate(row):
                    if x != 0:
                        out[idx] += c * x
        return tuple(out)

    def compose(self, inner: "CochainMap") -> "CochainMap":
        """self ∘ inner."""
        return CochainMap(inner.source, self.target,
                          lambda k, i: self.apply(k, inner.matrix(k)[i]),
                          name=f"{self.name}∘{inner.name}")

    def chain_map_defects(self, up_to: int) -> list[str]:
        """Degrees where d∘φ != φ∘d (empty when a chain map up to N-1)."""
        defects = []
        for k in range(up_to):
            for i in range(self.source.dim(k)):
                lhs = self.target.d_vec(k, self.matrix(k)[i])
                rhs = self.apply(k + 1, self.source.d_matrix(k)[i])
                if lhs != rhs:
                    defects.append(
                        f"degree {k}: d(φ({self.source.label(k, i)})) != φ(d(...))")
                    break
        return defects

    def nonsurjective_degrees(self, up_to: int) -> list[int]:
        out = []
        for k in range(up_to + 1):
            target_dim = self.target.dim(k)
            if target_dim == 0:
                continue
            reduced, _ = rref(self.matrix(k))
            if len(reduced) < target_dim:
                out.append(k)
        return out


def identity_cochain_map(c: Cochains) -> CochainMap:
    return CochainMap(c, c, lambda k, i: c.basis_vec(k, i), name="id")


def generator_cochain_map(source: FreeCDGA, target: Cochains,
                          images: Mapping[int, Vec], name: str = "") -> CochainMap:
    """Algebra map from generator images (index -> vector in gen degree)."""
    def image_of(k: int, i: int) -> Vec:
        mono = source.monomials(k)[i]
        acc_deg, acc = 0, (_ONE,)
        for g in mono_factors(mono):
            img = images.get(g)
            gdeg = source.gen_degrees[g]
            if img is None:
                img = target.zero(gdeg)
            acc = target.mul_vec(acc_deg, acc, gdeg, img)
            acc_deg += gdeg
            if is_zero_vec(acc):
                return target.zero(k)
        return acc

    return CochainMap(source, target, image_of, name=name)


def extension_cochain_map(source: ExtensionCochains, base_map: CochainMap,
                          gen_images: Sequence[Vec | None], name: str = "") -> CochainMap:
    """Extend a map on the base multiplicatively over the attached generators."""
    def image_of(k: int, i: int) -> Vec:
        kb, ib, mo = source.decode(k, i)
        acc_deg = kb
        acc = base_map.matrix(kb)[ib]
        for g in mono_factors(mo):
            gdeg = source.gens[g][1]
            img = gen_images[g]
            if img is None:
                img = base_map.target.zero(gdeg)
            acc = base_map.target.mul_vec(acc_deg, acc, gdeg, img)
            acc_deg += gdeg
            if is_zero_vec(acc):
                return base_map.target.zero(k)
        return acc

    return CochainMap(source, base_map.target, image_of, name=name)


def tensor_square_cochain_map(f: CochainMap,
                              ts_source: TensorSquareCochains | None = None,
                              ts_target: TensorSquareCochains | None = None) -> CochainMap:
    """f⊗f between tensor squares; no sign since f preserves degrees."""
    ts_source = ts_source or TensorSquareCochains(f.source)
    ts_target = ts_target or TensorSquareCochains(f.target)

    def image_of(k: int, i: int) -> Vec:
        k1, i1, i2 = ts_source.decode(k, i)
        k2 = k - k1
        v1 = f.matrix(k1)[i1]
        v2 = f.matrix(k2)[i2]
        return ts_target.tensor_vec(k1, v1, k2, v2)

    return CochainMap(ts_source, ts_target, image_of, name=f"{f.name}⊗{f.name}")


def multiplication_cochain_map(ts: TensorSquareCochains) -> CochainMap:
    """a⊗b -> a*b from the tensor square back to the factor."""
    def image_of(k: int, i: int) -> Vec:
        k1, i1, i2 = ts.decode(k, i)
        return ts.factor.mul_basis(k1, i1, k - k1, i2)

    return CochainMap(ts, ts.factor, image_of, name="μ")


def projection_cochain_map(quotient: QuotientCochains) -> CochainMap:
    base = quotient.base

    def image_of(k: int, i: int) -> Vec:
        rep = quotient.project_full(k, base.basis_vec(k, i))
        return quotient.to_local(k, rep)

    return CochainMap(base, quotient, image_of, name="π")


def formal_cochain_map(phi, source: FormalCochains, target: FormalCochains,
                       name: str = "") -> CochainMap:
    """View an AlgebraMorphism as a cochain map of zero-differential algebras."""
    def image_of(k: int, i: int) -> Vec:
        g = source.positions(k)[i]
        return target.to_local(k, phi.images[g])

    return CochainMap(source, target, image_of, name=name)
