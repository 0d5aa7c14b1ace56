"""JSON document formats: algebras, morphisms, CDGAs, and report documents.

All rationals travel as strings ("p/q" or "p") so round trips are bit exact;
omitted product pairs mean zero, and unit rows are implied.  Canonical
emission is deterministic: identical inputs yield byte-identical documents.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction

from .algebra import (
    AlgebraMorphism,
    GradedAlgebra,
    WorkMap,
    make_algebra,
    make_morphism,
    work_map,
)
from .cdga import CochainMap, FreeCDGA, Mono, Poly, generator_cochain_map, poly_degree
from .errors import ParseError

TOOL_NAME = "tcmap"
TOOL_VERSION = "0.1.0"


def parse_rational(value) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {value!r}: {exc}") from None
    raise ParseError(f"rational must be an int or a string, got {type(value).__name__}")


def rational_str(value: Fraction) -> str:
    return str(value)


# ---------------------------------------------------------------------------
# Algebra documents


def algebra_to_doc(algebra: GradedAlgebra) -> dict:
    basis = [{"name": n, "degree": d} for n, d in algebra.basis.elements]
    products = []
    for i in range(algebra.dim):
        for j in range(i, algebra.dim):
            if i == algebra.unit or j == algebra.unit:
                continue
            entries = algebra.mul_basis(i, j)
            entries = [(k, c) for k, c in entries if c != 0]
            if not entries:
                continue
            products.append({
                "left": algebra.basis.name(i),
                "right": algebra.basis.name(j),
                "result": [{"basis": algebra.basis.name(k), "coeff": rational_str(c)}
                           for k, c in entries],
            })
    return {"kind": "algebra", "name": algebra.name, "basis": basis,
            "unit": algebra.basis.name(algebra.unit), "products": products}


def algebra_from_doc(doc: dict) -> GradedAlgebra:
    try:
        basis = [(e["name"], int(e["degree"])) for e in doc["basis"]]
        unit = doc["unit"]
        products = {}
        for entry in doc.get("products", []):
            key = (entry["left"], entry["right"])
            products[key] = [(t["basis"], parse_rational(t["coeff"]))
                             for t in entry.get("result", [])]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed algebra document: missing field {exc}") from None
    name = doc.get("name", "A")
    try:
        return make_algebra(name, basis, unit, products)
    except KeyError as exc:
        raise ParseError(f"algebra document references unknown basis name {exc}") from None


# ---------------------------------------------------------------------------
# Morphism / work-map documents


def _resolve_algebra(side, loader) -> GradedAlgebra:
    if isinstance(side, str):
        return loader(side)
    return algebra_from_doc(side)


def workmap_to_doc(wm: WorkMap) -> dict:
    images = {}
    src = wm.codomain_cohomology
    tgt = wm.domain_cohomology
    for i in range(src.dim):
        if i == src.unit:
            continue
        entries = [(k, c) for k, c in enumerate(wm.induced.images[i]) if c != 0]
        images[src.basis.name(i)] = [
            {"basis": tgt.basis.name(k), "coeff": rational_str(c)} for k, c in entries]
    return {
        "kind": "workmap",
        "name": wm.name,
        "source": algebra_to_doc(src),
        "target": algebra_to_doc(tgt),
        "images": images,
        "flags": {
            "formal": wm.formal,
            "coH_target": wm.codomain_coH,
            "simply_connected": wm.simply_connected,
        },
    }


def workmap_from_doc(doc: dict, loader=None) -> WorkMap:
    loader = loader or (lambda s: (_ for _ in ()).throw(
        ParseError(f"no loader for algebra reference {s!r}")))
    try:
        source = _resolve_algebra(doc["source"], loader)
        target = _resolve_algebra(doc["target"], loader)
        raw_images = doc.get("images", {})
    except KeyError as exc:
        raise ParseError(f"malformed morphism document: missing field {exc}") from None
    images = {}
    for gen, entries in raw_images.items():
        try:
            source.basis.index(gen)
        except KeyError:
            raise ParseError(f"images refer to unknown source element {gen!r}") from None
        converted = []
        for t in entries:
            try:
                target.basis.index(t["basis"])
            except KeyError:
                raise ParseError(
                    f"image of {gen!r} refers to unknown target element {t['basis']!r}") from None
            converted.append((t["basis"], parse_rational(t["coeff"])))
        images[gen] = converted
    for i in range(source.dim):
        if i != source.unit and source.basis.name(i) not in images:
            images[source.basis.name(i)] = []
    induced = make_morphism(source, target, images)
    flags = doc.get("flags", {})
    return work_map(
        induced,
        formal=bool(flags.get("formal", False)),
        codomain_coH=bool(flags.get("coH_target", False)),
        simply_connected=flags.get("simply_connected"),
        name=doc.get("name", "f"),
    )


def morphism_from_doc(doc: dict, loader=None) -> AlgebraMorphism:
    return workmap_from_doc(doc, loader).induced


# ---------------------------------------------------------------------------
# Polynomial expressions and CDGA documents

_POLY_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+|-)")


def parse_poly(text: str, names: list[str]) -> Poly:
    """Parse expressions like '-1/2*x^3 + 2*x*y' over the given generators."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"bad polynomial syntax near {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        return {}
    index = {n: i for i, n in enumerate(names)}
    poly: Poly = {}
    i = 0
    sign = Fraction(1)
    while i < len(tokens):
        coeff = sign
        mono = [0] * len(names)
        expect_factor = True
        while i < len(tokens):
            tok = tokens[i]
            if tok in {"+", "-"}:
                if expect_factor:
                    coeff *= -1 if tok == "-" else 1
                    i += 1
                    continue
                break
            if tok == "*":
                i += 1
                expect_factor = True
                continue
            if re.fullmatch(r"\d+(/\d+)?", tok):
                coeff *= parse_rational(tok)
            elif tok in index:
                exp = 1
                if i + 2 < len(tokens) and tokens[i + 1] == "^":
                    if not tokens[i + 2].isdigit():
                        raise ParseError(f"bad exponent after {tok!r}")
                    exp = int(tokens[i + 2])
                    i += 2
                elif i + 1 < len(tokens) and tokens[i + 1] == "^":
                    raise ParseError(f"dangling exponent after {tok!r}")
                mono[index[tok]] += exp
            else:
                raise ParseError(f"unknown generator {tok!r} in polynomial")
            i += 1
            expect_factor = False
        key = tuple(mono)
        if coeff != 0:
            poly[key] = poly.get(key, Fraction(0)) + coeff
            if poly[key] == 0:
                del poly[key]
        sign = Fraction(1)
        if i < len(tokens):
            sign = Fraction(-1) if tokens[i] == "-" else Fraction(1)
            i += 1
    return poly


def poly_to_str(poly: Poly, names: list[str]) -> str:
    if not poly:
        return "0"
    terms = []
    for mono, coeff in sorted(poly.items()):
        factors = []
        if coeff == -1:
            head = "-"
        elif coeff == 1:
            head = ""
        else:
            head = f"{coeff}*"
        for g, e in enumerate(mono):
            if e == 1:
                factors.append(names[g])
            elif e > 1:
                factors.append(f"{names[g]}^{e}")
        if not factors:
            terms.append(str(coeff))
        else:
            terms.append(head + "*".join(factors))
    return " + ".join(terms).replace("+ -", "- ")


def cdga_to_doc(model: FreeCDGA) -> dict:
    names = list(model.gen_names)
    return {
        "kind": "cdga",
        "name": model.name,
        "generators": [{"name": n, "degree": d} for n, d in model.generators],
        "differential": {
            model.gen_names[idx]: poly_to_str(poly, names)
            for idx, poly in sorted(model.gen_differential.items())
        },
        "truncation": model.truncation,
        "allow_degree_one": model.allow_degree_one,
    }


def cdga_from_doc(doc: dict) -> FreeCDGA:
    try:
        gens = [(e["name"], int(e["degree"])) for e in doc["generators"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed cdga document: missing field {exc}") from None
    names = [n for n, _ in gens]
    differential = {}
    for gname, expr in doc.get("differential", {}).items():
        if gname not in names:
            raise ParseError(f"differential given for unknown generator {gname!r}")
        differential[gname] = parse_poly(expr, names)
    return FreeCDGA(gens, differential,
                    truncation=int(doc.get("truncation", 12)),
                    allow_degree_one=bool(doc.get("allow_degree_one", False)),
                    name=doc.get("name", ""))


def cdga_morphism_from_doc(doc: dict) -> CochainMap:
    try:
        source = cdga_from_doc(doc["source"])
        target = cdga_from_doc(doc["target"])
        raw = doc.get("images", {})
    except KeyError as exc:
        raise ParseError(f"malformed cdga morphism document: missing {exc}") from None
    images = {}
    target_names = list(target.gen_names)
    for gname, expr in raw.items():
        if gname not in source.gen_names:
            raise ParseError(f"image given for unknown generator {gname!r}")
        poly = parse_poly(expr, target_names)
        if not poly:
            continue
        degree = poly_degree(target.gen_degrees, poly)
        expected = source.gen_degrees[source.gen_index(gname)]
        if degree != expected:
            raise ParseError(
                f"image of {gname!r} has degree {degree}, expected {expected}")
        images[source.gen_index(gname)] = target.to_vec(degree, poly)
    return generator_cochain_map(source, target, images,
                                 name=doc.get("name", "psi"))


def cdga_morphism_to_doc(psi: CochainMap, name: str = "psi") -> dict:
    if not isinstance(psi.source, FreeCDGA) or not isinstance(psi.target, FreeCDGA):
        raise ParseError("only free cdga morphisms can be serialized")
    source: FreeCDGA = psi.source
    target: FreeCDGA = psi.target
    names = list(target.gen_names)
    images = {}
    for idx, (gname, degree) in enumerate(source.generators):
        v = psi.matrix(degree)[source.mono_pos(degree, source.gen_mono(idx))]
        poly = target.to_poly(degree, v)
        images[gname] = poly_to_str(poly, names)
    return {
        "kind": "cdga-morphism",
        "name": name,
        "source": cdga_to_doc(source),
        "target": cdga_to_doc(target),
        "images": images,
    }


# ---------------------------------------------------------------------------
# Documents kind detection


def detect_kind(doc: dict) -> str:
    if "kind" in doc:
        return doc["kind"]
    if "basis" in doc:
        return "algebra"
    if "generators" in doc:
        return "cdga"
    if "images" in doc and isinstance(doc.get("source"), dict) and "generators" in doc["source"]:
        return "cdga-morphism"
    if "images" in doc:
        return "workmap"
    raise ParseError("cannot determine document kind")


# ---------------------------------------------------------------------------
# Report documents


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_text(text: str) -> str:
    return digest_bytes(text.encode("utf-8"))


def report_document(command: str, inputs: dict[str, str],
                    reports: list[dict] | None = None,
                    extra: dict | None = None) -> dict:
    doc = {
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "command": command,
        "inputs": inputs,
    }
    if reports is not None:
        doc["reports"] = reports
    if extra:
        doc.update(extra)
    return doc


def dumps_canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
