"""Builders for the example spaces and work maps used throughout the tests.

Specs are little call expressions such as ``sphere(2)``, ``torus(2)``,
``cp_map(2,5,1)`` or ``constant(sphere(2),sphere(3))``; they can be nested.
Every entry knows its expected invariant values (with a citation string) and,
where available, an explicit surjective-able Sullivan model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .algebra import (
    AlgebraMorphism,
    GradedAlgebra,
    WorkMap,
    make_algebra,
    make_morphism,
    work_map,
)
from .cdga import CochainMap, FreeCDGA, generator_cochain_map
from .errors import InvalidParameter, UnknownEntry
from .sullivan import default_truncation

Spec = tuple[str, tuple]


# ---------------------------------------------------------------------------
# Spec expressions

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|-?\d+|[(),])")


def parse_spec(text: str) -> Spec:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InvalidParameter(f"bad spec syntax near {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()

    def parse(i: int) -> tuple[Spec | int, int]:
        tok = tokens[i]
        if re.fullmatch(r"-?\d+", tok):
            return int(tok), i + 1
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok):
            raise InvalidParameter(f"unexpected token {tok!r} in spec {text!r}")
        name = tok
        i += 1
        args: list = []
        if i < len(tokens) and tokens[i] == "(":
            i += 1
            if i < len(tokens) and tokens[i] == ")":
                i += 1
            else:
                while True:
                    arg, i = parse(i)
                    args.append(arg)
                    if i >= len(tokens):
                        raise InvalidParameter(f"unbalanced parentheses in {text!r}")
                    if tokens[i] == ",":
                        i += 1
                        continue
                    if tokens[i] == ")":
                        i += 1
                        break
                    raise InvalidParameter(f"unexpected token {tokens[i]!r} in {text!r}")
        return (name, tuple(args)), i

    spec, end = parse(0)
    if end != len(tokens):
        raise InvalidParameter(f"trailing tokens in spec {text!r}")
    if isinstance(spec, int):
        raise InvalidParameter(f"spec {text!r} is a bare integer")
    return spec


def spec_to_str(spec: Spec | int) -> str:
    if isinstance(spec, int):
        return str(spec)
    name, args = spec
    if not args:
        return name
    return f"{name}({','.join(spec_to_str(a) for a in args)})"


def _as_spec(spec: str | Spec) -> Spec:
    return parse_spec(spec) if isinstance(spec, str) else spec


# ---------------------------------------------------------------------------
# Spaces


def _sphere(n: int) -> GradedAlgebra:
    if n < 1:
        raise InvalidParameter("sphere(n) needs n >= 1")
    return make_algebra(f"H*(S^{n})", [("1", 0), ("x", n)], "1", {})


def _complex_projective(n: int) -> GradedAlgebra:
    if n < 1:
        raise InvalidParameter("complex_projective(n) needs n >= 1")
    elements = [("1", 0)] + [(f"x^{k}" if k > 1 else "x", 2 * k) for k in range(1, n + 1)]
    products = {}
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            if a + b <= n:
                na = "x" if a == 1 else f"x^{a}"
                nb = "x" if b == 1 else f"x^{b}"
                nc = "x" if a + b == 1 else f"x^{a + b}"
                products[(na, nb)] = [(nc, 1)]
    return make_algebra(f"H*(CP^{n})", elements, "1", products)


def _torus(k: int) -> GradedAlgebra:
    if k < 1:
        raise InvalidParameter("torus(k) needs k >= 1")

    def subset_name(s: tuple[int, ...]) -> str:
        return "1" if not s else "".join(f"a{i}" for i in s)

    subsets = [()]
    for size in range(1, k + 1):
        subsets.extend(combinations(range(1, k + 1), size))
    elements = [(subset_name(s), len(s)) for s in subsets]
    products = {}
    for s in subsets:
        for t in subsets:
            if not s or not t or set(s) & set(t):
                continue
            inversions = sum(1 for a in s for b in t if a > b)
            sign = -1 if inversions % 2 else 1
            union = tuple(sorted(s + t))
            products[(subset_name(s), subset_name(t))] = [(subset_name(union), sign)]
    return make_algebra(f"H*(T^{k})", elements, "1", products)


_POINT = None


def space(spec: str | Spec) -> GradedAlgebra:
    name, args = _as_spec(spec)
    if name == "sphere":
        return _sphere(*args)
    if name == "complex_projective":
        return _complex_projective(*args)
    if name == "torus":
        return _torus(*args)
    if name == "point":
        return make_algebra("H*(pt)", [("1", 0)], "1", {})
    if name == "product":
        if len(args) != 2:
            raise InvalidParameter("product takes two space specs")
        from .algebra import tensor_product
        return tensor_product(space(args[0]), space(args[1]))
    raise InvalidParameter(f"unknown space constructor {name!r}")


# ---------------------------------------------------------------------------
# Maps (work maps, contravariant induced morphisms)


def _self_sphere(n: int, d: int) -> WorkMap:
    h = _sphere(n)
    induced = make_morphism(h, h, {"x": [("x", d)]})
    return work_map(induced, formal=True, codomain_coH=True,
                    name=f"degree_self_sphere({n},{d})")


def _sphere_to_sphere(n: int, m: int, d: int) -> WorkMap:
    if n == m:
        return _self_sphere(n, d)
    src = _sphere(m)   # codomain cohomology
    tgt = _sphere(n)
    induced = make_morphism(src, tgt, {"x": []})
    return work_map(induced, formal=True, codomain_coH=True,
                    name=f"sphere_to_sphere({n},{m},{d})")


def _cp_map(n: int, m: int, d: int) -> WorkMap:
    if not 1 <= n <= m:
        raise InvalidParameter("cp_map(n,m,d) needs 1 <= n <= m")
    src = _complex_projective(m)
    tgt = _complex_projective(n)
    images = {}
    for k in range(1, m + 1):
        nk = "x" if k == 1 else f"x^{k}"
        if d != 0 and k <= n:
            images[nk] = [(("x" if k == 1 else f"x^{k}"), d ** k)]
        else:
            images[nk] = []
    induced = make_morphism(src, tgt, images)
    return work_map(induced, formal=True, codomain_coH=False,
                    name=f"cp_map({n},{m},{d})")


def _torus_projection() -> WorkMap:
    circle = _sphere(1)
    torus = _torus(2)
    induced = make_morphism(circle, torus, {"x": [("a1", 1)]})
    return work_map(induced, formal=True, codomain_coH=True,
                    name="torus_projection")


def _torus_identity() -> WorkMap:
    torus = _torus(2)
    induced = AlgebraMorphism.identity(torus)
    return work_map(induced, formal=True, codomain_coH=False,
                    name="torus_identity")


def _constant(x_spec, y_spec) -> WorkMap:
    hx = space(x_spec)
    hy = space(y_spec)
    images = {hy.basis.name(i): [] for i in range(hy.dim) if i != hy.unit}
    induced = make_morphism(hy, hx, images)
    y_name = _as_spec(y_spec)[0]
    return work_map(induced, formal=True, codomain_coH=(y_name == "sphere"),
                    name=f"constant({spec_to_str(_as_spec(x_spec))},{spec_to_str(_as_spec(y_spec))})")


def _identity(space_spec) -> WorkMap:
    h = space(space_spec)
    induced = AlgebraMorphism.identity(h)
    name = _as_spec(space_spec)[0]
    return work_map(induced, formal=True, codomain_coH=(name == "sphere"),
                    name=f"identity({spec_to_str(_as_spec(space_spec))})")


def map(spec: str | Spec) -> WorkMap:  # noqa: A001 - catalog surface name
    name, args = _as_spec(spec)
    if name == "degree_self_sphere":
        n, d = args
        if d == 0:
            return _constant(("sphere", (n,)), ("sphere", (n,)))
        return _self_sphere(n, d)
    if name == "sphere_to_sphere":
        n, m, d = args
        if d == 0 and n == m:
            return _constant(("sphere", (n,)), ("sphere", (m,)))
        return _sphere_to_sphere(n, m, d)
    if name == "cp_map":
        n, m, d = args
        if d == 0:
            return _constant(("complex_projective", (n,)), ("complex_projective", (m,)))
        return _cp_map(n, m, d)
    if name == "torus_projection":
        return _torus_projection()
    if name == "torus_identity":
        return _torus_identity()
    if name == "constant":
        return _constant(args[0], args[1])
    if name == "identity":
        return _identity(args[0])
    raise InvalidParameter(f"unknown map constructor {name!r}")


build_map = map


# ---------------------------------------------------------------------------
# Sullivan models


def _merge_models(a: FreeCDGA, b: FreeCDGA, truncation: int) -> FreeCDGA:
    gens = []
    diff = {}
    for suffix, model in (("_1", a), ("_2", b)):
        offset = len(gens)
        for name, degree in model.generators:
            gens.append((name + suffix, degree))
        for idx, poly in model.gen_differential.items():
            shifted = {}
            for mono, c in poly.items():
                new = [0] * (len(a.generators) + len(b.generators))
                for g, e in enumerate(mono):
                    new[offset + g] = e
                shifted[tuple(new)] = c
            diff[model.gen_names[idx] + suffix] = shifted
    allow = a.allow_degree_one or b.allow_degree_one
    fixed = {}
    total = len(gens)
    for gname, poly in diff.items():
        fixed[gname] = {tuple(m) + (0,) * (total - len(m)): c for m, c in poly.items()}
    return FreeCDGA(gens, fixed, truncation=truncation, allow_degree_one=allow)


def sullivan_model(spec: str | Spec, truncation: int | None = None) -> FreeCDGA:
    """Minimal Sullivan model of a catalog space, truncated."""
    name, args = _as_spec(spec)
    if truncation is None:
        truncation = default_truncation(space((name, args)).top_degree())
    if name == "sphere":
        (n,) = args
        if n % 2 == 1:
            return FreeCDGA([("x", n)], {}, truncation=truncation,
                            allow_degree_one=(n == 1), name=f"M(S^{n})")
        return FreeCDGA([("x", n), ("y", 2 * n - 1)],
                        {"y": {(2, 0): Fraction(1)}},
                        truncation=truncation, name=f"M(S^{n})")
    if name == "complex_projective":
        (n,) = args
        return FreeCDGA([("x", 2), ("y", 2 * n + 1)],
                        {"y": {(n + 1, 0): Fraction(1)}},
                        truncation=truncation, name=f"M(CP^{n})")
    if name == "torus":
        (k,) = args
        return FreeCDGA([(f"a{i}", 1) for i in range(1, k + 1)], {},
                        truncation=truncation, allow_degree_one=True,
                        name=f"M(T^{k})")
    if name == "point":
        return FreeCDGA([], {}, truncation=truncation, name="M(pt)")
    if name == "product":
        left = sullivan_model(args[0], truncation)
        right = sullivan_model(args[1], truncation)
        return _merge_models(left, right, truncation)
    raise InvalidParameter(f"no Sullivan model for space constructor {name!r}")


def _gen_image(model: FreeCDGA, poly: dict) -> tuple:
    degree = None
    for mono in poly:
        from .cdga import mono_degree
        degree = mono_degree(model.gen_degrees, mono)
    return model.to_vec(degree, poly) if degree is not None else None


def sullivan_morphism(spec: str | Spec, truncation: int | None = None) -> CochainMap:
    """Model of a catalog map: model(codomain) -> model(domain)."""
    name, args = _as_spec(spec)
    wm = map((name, args))
    if truncation is None:
        top_x = wm.domain_cohomology.top_degree()
        top_y = wm.codomain_cohomology.top_degree()
        truncation = max(default_truncation(top_x), top_y + 2)

    def zero_map(src_spec, tgt_spec):
        src = sullivan_model(src_spec, truncation)
        tgt = sullivan_model(tgt_spec, truncation)
        return generator_cochain_map(src, tgt, {}, name=spec_to_str((name, args)))

    if name == "degree_self_sphere":
        n, d = args
        if d == 0:
            return zero_map(("sphere", (n,)), ("sphere", (n,)))
        src = sullivan_model(("sphere", (n,)), truncation)
        tgt = sullivan_model(("sphere", (n,)), truncation)
        images = {0: tgt.to_vec(n, {tgt.gen_mono(0): Fraction(d)})}
        if n % 2 == 0:
            images[1] = tgt.to_vec(2 * n - 1, {tgt.gen_mono(1): Fraction(d * d)})
        return generator_cochain_map(src, tgt, images, name=spec_to_str((name, args)))
    if name == "sphere_to_sphere":
        n, m, d = args
        if n == m:
            return sullivan_morphism(("degree_self_sphere", (n, d)), truncation)
        return zero_map(("sphere", (m,)), ("sphere", (n,)))
    if name == "cp_map":
        n, m, d = args
        if d == 0:
            return zero_map(("complex_projective", (n,)), ("complex_projective", (m,)))
        src = sullivan_model(("complex_projective", (m,)), truncation)
        tgt = sullivan_model(("complex_projective", (n,)), truncation)
        images = {0: tgt.to_vec(2, {tgt.gen_mono(0): Fraction(d)})}
        y_mono = tuple(a + b for a, b in zip(
            tuple(m - n if i == 0 else 0 for i in range(2)), tgt.gen_mono(1)))
        images[1] = tgt.to_vec(2 * m + 1, {y_mono: Fraction(d ** (m + 1))})
        return generator_cochain_map(src, tgt, images, name=spec_to_str((name, args)))
    if name == "torus_projection":
        src = sullivan_model(("sphere", (1,)), truncation)
        tgt = sullivan_model(("torus", (2,)), truncation)
        images = {0: tgt.to_vec(1, {tgt.gen_mono(0): Fraction(1)})}
        return generator_cochain_map(src, tgt, images, name="torus_projection")
    if name == "torus_identity":
        model = sullivan_model(("torus", (2,)), truncation)
        images = {i: model.to_vec(1, {model.gen_mono(i): Fraction(1)})
                  for i in range(2)}
        return generator_cochain_map(model, model, images, name="torus_identity")
    if name == "constant":
        return zero_map(args[1], args[0])
    if name == "identity":
        model = sullivan_model(args[0], truncation)
        images = {i: model.to_vec(model.gen_degrees[i], {model.gen_mono(i): Fraction(1)})
                  for i in range(len(model.generators))}
        return generator_cochain_map(model, model, images,
                                     name=spec_to_str((name, args)))
    raise InvalidParameter(f"no Sullivan model for map constructor {name!r}")


# ---------------------------------------------------------------------------
# Canonical entries and expected values


@dataclass(frozen=True)
class CatalogEntry:
    name: str                     # canonical spec string
    kind: str                     # "space" | "map"
    expected: tuple[tuple[str, int, str], ...]  # (invariant, value, citation)
    sullivan_sweep: bool = False  # include in the formal factorization sweep

    def expected_table(self) -> dict[str, dict]:
        return {inv: {"value": val, "citation": cite}
                for inv, val, cite in self.expected}


_SPHERE_TC = "nonzero-degree sphere self-maps: value 1 for odd n, 2 for even n"
_CP_TC = "nonzero-degree maps of complex projective spaces: value 2n"
_NULL_TC = "inessential maps have value 0"
_TORUS_PROJ = "planar two-link arm work map: two-region planner, value 1"
_TORUS_ID = "transversal two-link arm work map: value of the torus, 2"
_TC_SPACE = "specialization to the identity map: value of the space"


def _entries() -> list[CatalogEntry]:
    out: list[CatalogEntry] = []
    for spec in ["sphere(1)", "sphere(2)", "sphere(3)", "sphere(4)",
                 "complex_projective(1)", "complex_projective(2)",
                 "complex_projective(3)", "torus(2)", "point"]:
        name, args = parse_spec(spec)
        expected = []
        if name == "sphere":
            expected = [("TC(X)", 1 if args[0] % 2 else 2, _TC_SPACE)]
        elif name == "complex_projective":
            expected = [("TC(X)", 2 * args[0], _TC_SPACE)]
        elif name == "torus":
            expected = [("TC(X)", args[0], _TC_SPACE)]
        elif name == "point":
            expected = [("TC(X)", 0, _TC_SPACE)]
        out.append(CatalogEntry(spec, "space", tuple(expected)))
    sphere_selfs = [(1, 2), (2, 2), (3, 2), (4, 1), (5, 1), (6, 1), (7, 3)]
    for n, d in sphere_selfs:
        out.append(CatalogEntry(
            f"degree_self_sphere({n},{d})", "map",
            (("TC(f)", 1 if n % 2 else 2, _SPHERE_TC),),
            sullivan_sweep=(n >= 2)))
    out.append(CatalogEntry("sphere_to_sphere(2,3,1)", "map",
                            (("TC(f)", 0, _NULL_TC),), sullivan_sweep=True))
    for n, m, d in [(1, 1, 2), (1, 2, 1), (2, 2, 1), (2, 3, 2), (2, 5, 1)]:
        out.append(CatalogEntry(
            f"cp_map({n},{m},{d})", "map",
            (("TC(f)", 2 * n, _CP_TC),), sullivan_sweep=True))
    out.append(CatalogEntry("torus_projection", "map",
                            (("TC(f)", 1, _TORUS_PROJ),)))
    out.append(CatalogEntry("torus_identity", "map",
                            (("TC(f)", 2, _TORUS_ID),)))
    out.append(CatalogEntry("constant(sphere(2),sphere(2))", "map",
                            (("TC(f)", 0, _NULL_TC),), sullivan_sweep=True))
    return out


@lru_cache(maxsize=1)
def entries() -> tuple[CatalogEntry, ...]:
    return tuple(_entries())


def entry(name: str) -> CatalogEntry:
    canonical = spec_to_str(parse_spec(name))
    for e in entries():
        if e.name == canonical:
            return e
    raise UnknownEntry(f"no catalog entry named {name!r}")


def expected(name: str) -> dict[str, dict]:
    return entry(name).expected_table()


def known_exact_tc(name: str) -> tuple[int, str] | None:
    """Catalog-certified exact TC(f) for a map spec, if recorded."""
    try:
        e = entry(name)
    except UnknownEntry:
        return None
    for inv, val, cite in e.expected:
        if inv == "TC(f)":
            return val, cite
    return None
