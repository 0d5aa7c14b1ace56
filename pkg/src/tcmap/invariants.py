"""Numerical invariants: nilpotency indices and TC bounds for work maps.

Conventions: the reduced count is used throughout (the invariant of a point
is 0, of a circle 1), and ``nil`` of a subspace S is the largest n with
S^n != 0, so nil(0) = 0 and a nonzero S with S^2 = 0 has nil 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    AlgebraMorphism,
    GradedAlgebra,
    WorkMap,
    cup_morphism,
    image_subspace,
    kernel_subspace,
    tensor_square,
    tensor_square_morphism,
)
from .errors import AmbientMismatch, CompositionMismatch, NotFormal, NotPositiveDegree, NotSimplyConnected
from .linalg import Subspace, is_zero_vec

CITATIONS = {
    "zero-divisor-lower": "nil ker(cup)|_{Im(f x f)*} <= TC(f)",
    "cat-lower": "cup-length of Im f~* <= cat(f) <= TC(f)",
    "upper-min": "TC(f) <= min{TC(X), cat(f x f)}",
    "coH-upper": "co-H codomain: TC(f) <= cat(f x f) <= 2 cat(Y) = 2",
    "inessential-zero": "TC(f) = 0 exactly when f is inessential",
    "essential-lower": "nonzero f~* forces f essential, hence TC(f) >= 1",
    "formal-exact": "formal f: TC(f_Q) = nil ker(cup)|_{Im(f x f)*}",
    "rationalization-lower": "TC(f_Q) <= TC(f)",
    "catalog-known": "established value for this catalog entry",
    "secat-lower": "secat_f(p) >= nil ker p*|_{Im f*}",
}


@dataclass(frozen=True)
class BoundReport:
    """One named bound: value, kind and where the inequality comes from."""

    invariant: str
    value: int | str
    kind: str                      # lower | upper | exact | certificate
    citation: str
    inputs: tuple[str, ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.kind not in {"lower", "upper", "exact", "certificate"}:
            raise ValueError(f"unknown report kind {self.kind!r}")
        if not self.citation:
            raise ValueError("every report needs a citation")

    def as_dict(self) -> dict:
        out = {
            "invariant": self.invariant,
            "value": self.value,
            "kind": self.kind,
            "citation": self.citation,
            "inputs": list(self.inputs),
        }
        if self.note:
            out["note"] = self.note
        return out


def nil_index(subspace: Subspace, algebra: GradedAlgebra) -> int:
    """Largest n with subspace^n != 0 under the algebra product.

    Iterates P_1 = S, P_{k+1} = span{u*v : u in P_k, v in S}.  Terminates
    because the minimal degree of P_k grows linearly while the algebra is
    bounded above.
    """
    if subspace.ambient != algebra.basis:
        raise AmbientMismatch("subspace does not live in the given algebra")
    if any(d <= 0 for d in subspace.block_degrees()):
        raise NotPositiveDegree("nil index needs a positive-degree subspace")
    if subspace.is_zero():
        return 0
    gens = subspace.basis_vectors()
    power = subspace
    n = 1
    limit = algebra.top_degree() + 1
    while n <= limit:
        products = []
        for u in power.basis_vectors():
            for v in gens:
                w = algebra.multiply(u, v)
                if not is_zero_vec(w):
                    products.append(w)
        nxt = Subspace.from_vectors(algebra.basis, products)
        if nxt.is_zero():
            return n
        power = nxt
        n += 1
    raise RuntimeError("nil index iteration failed to terminate")  # pragma: no cover


def restricted_zero_divisors(f: WorkMap) -> Subspace:
    """L = Im(f*⊗f*) ∩ ker(cup) in positive degrees of H*(X)⊗H*(X)."""
    phi2 = tensor_square_morphism(f.induced)
    mu = cup_morphism(f.domain_cohomology)
    image = image_subspace(phi2)
    kernel = kernel_subspace(mu)
    return image.intersect(kernel).restrict_positive()


def tc_lower_bound(f: WorkMap) -> int:
    """Restricted zero-divisor cup-length, a lower bound for TC(f)."""
    ts = tensor_square(f.domain_cohomology)
    return nil_index(restricted_zero_divisors(f), ts)


def secat_lower_bound(p_star: AlgebraMorphism, f_star: AlgebraMorphism) -> int:
    """nil of Im f~* ∩ ker p* inside the middle algebra.

    Cohomological directions: f_star: H*(X) -> H*(B), p_star: H*(B) -> H*(E).
    """
    if f_star.target != p_star.source:
        raise CompositionMismatch("target of f* must be the source of p*")
    middle = p_star.source
    image = image_subspace(f_star, reduced=True)
    kernel = kernel_subspace(p_star).restrict_positive()
    return nil_index(image.intersect(kernel), middle)


def cat_image_cuplength(f: WorkMap) -> int:
    """Cup-length of Im f~* in H*(X), a lower bound for cat(f)."""
    image = image_subspace(f.induced, reduced=True)
    return nil_index(image, f.domain_cohomology)


def is_essential(f: WorkMap) -> bool:
    """True when the reduced induced morphism is nonzero."""
    return image_subspace(f.induced, reduced=True).dim > 0


def formal_tc(f: WorkMap, override: bool = False) -> int:
    """Exact TC(f_Q) for formal simply connected maps.

    With ``override`` the hypotheses are not enforced and the value is only a
    lower bound; callers must downgrade the label accordingly.
    """
    if not f.formal and not override:
        raise NotFormal(f"{f.name} is not flagged formal")
    if not f.simply_connected and not override:
        raise NotSimplyConnected(f"{f.name} is not simply connected")
    return tc_lower_bound(f)


def bounds_report(f: WorkMap, known_exact: tuple[int, str] | None = None) -> list[BoundReport]:
    """All bounds this module can certify for TC(f), with citations."""
    reports: list[BoundReport] = []
    name = f.name
    lzd = tc_lower_bound(f)
    lcat = cat_image_cuplength(f)
    essential = is_essential(f)
    lower = max(lzd, lcat, 1 if essential else 0)
    reports.append(BoundReport(
        invariant="TC(f)",
        value=lower,
        kind="lower",
        citation=CITATIONS["zero-divisor-lower"] if lzd >= lcat else CITATIONS["cat-lower"],
        inputs=(name,),
        note=f"max of zero-divisor bound {lzd}, image cup-length {lcat}"
             + (", essentiality 1" if essential else ""),
    ))
    if f.formal and f.simply_connected:
        reports.append(BoundReport(
            invariant="TC(f_Q)",
            value=lzd,
            kind="exact",
            citation=CITATIONS["formal-exact"],
            inputs=(name,),
            note="also a lower bound for TC(f): " + CITATIONS["rationalization-lower"],
        ))
    elif f.formal and not f.simply_connected:
        reports.append(BoundReport(
            invariant="TC(f_Q)",
            value=lzd,
            kind="lower",
            citation=CITATIONS["formal-exact"],
            inputs=(name,),
            note="formal but not simply connected: reported as a lower bound only",
        ))
    if known_exact is not None and f.simply_connected:
        value, citation = known_exact
        reports.append(BoundReport(
            invariant="TC(f)",
            value=value,
            kind="exact",
            citation=citation,
            inputs=(name, "catalog"),
        ))
    if f.codomain_coH:
        reports.append(BoundReport(
            invariant="TC(f)",
            value=2,
            kind="upper",
            citation=CITATIONS["coH-upper"],
            inputs=(name,),
        ))
    if essential:
        reports.append(BoundReport(
            invariant="TC(f)=0?",
            value=1,
            kind="certificate",
            citation=CITATIONS["essential-lower"],
            inputs=(name,),
            note="inconsistent: the reduced induced morphism is nonzero, so TC(f) >= 1",
        ))
    else:
        reports.append(BoundReport(
            invariant="TC(f)=0?",
            value=0,
            kind="certificate",
            citation=CITATIONS["inessential-zero"],
            inputs=(name,),
            note="consistent: cohomologically inessential (exactness unknown from ring data)",
        ))
    return reports


def render_chain(reports: list[BoundReport]) -> str:
    """Human-readable inequality chain, e.g. '2 <= TC(f) <= 2'."""
    lower = max((r.value for r in reports if r.kind == "lower" and isinstance(r.value, int)),
                default=None)
    upper = min((r.value for r in reports if r.kind == "upper" and isinstance(r.value, int)),
                default=None)
    exact = [r for r in reports if r.kind == "exact"]
    pieces = []
    if exact:
        for r in exact:
            pieces.append(f"{r.invariant} = {r.value}  [{r.citation}]")
    chain = []
    if lower is not None:
        chain.append(str(lower))
    chain.append("TC(f)")
    if upper is not None:
        chain.append(str(upper))
    if lower is not None or upper is not None:
        pieces.append(" <= ".join(chain))
    return "\n".join(pieces)
