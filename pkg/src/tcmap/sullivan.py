"""Factorization certificates for tensor squares of surjective cochain models.

Given a surjective model psi and a level n, the pipeline builds the kernel
ideal K of (multiplication) ∘ (psi⊗psi), its power K^{n+1}, the quotient of
the tensor square by that power, a degreewise free extension replacing the
quotient, and then tries to push psi⊗psi across the extension.

Certificates are truncation-aware: CERTIFIED statements hold in degrees <= N.
The strict certificate is a complete yes/no test for on-the-nose factoring;
the homotopy certificate is a semi-decision (CERTIFIED is sound, UNKNOWN is
inconclusive) driven by a deterministic greedy lift with no backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import GradedAlgebra
from .cdga import (
    Cochains,
    CochainMap,
    ExtensionCochains,
    FormalCochains,
    FreeCDGA,
    Mono,
    QuotientCochains,
    TensorSquareCochains,
    extension_cochain_map,
    formal_cochain_map,
    mono_degree,
    mono_factors,
    multiplication_cochain_map,
    poly_degree,
    projection_cochain_map,
    tensor_square_cochain_map,
)
from .errors import NotFormal, NotSurjective, TruncationExceeded
from .linalg import (
    Vec,
    express_in_rows,
    is_zero_vec,
    nullspace,
    rank,
    rref,
    solve_right,
    transpose,
    vec,
    zero_vec,
)

MAX_INJECTIVITY_PASSES = 6
MAX_EXTENSION_GENERATORS = 512


def default_truncation(top_degree: int) -> int:
    """Default N: covers twice the nonzero cohomology range with margin."""
    return max(12, 2 * top_degree + 2)


# ---------------------------------------------------------------------------
# Validation and cohomology


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.errors


def validate_cdga(m: FreeCDGA) -> ValidationReport:
    """Check generator degrees, well-ordering, homogeneity and d² = 0."""
    report = ValidationReport()
    for idx, (name, degree) in enumerate(m.generators):
        if degree == 1:
            if m.allow_degree_one:
                report.warnings.append(
                    f"generator {name} has degree 1 (allowed by override; "
                    "simply-connected conclusions do not apply)")
            else:
                report.errors.append(
                    f"generator {name} has degree 1; pass allow_degree_one to accept")
        dpoly = m.gen_differential.get(idx)
        if not dpoly:
            continue
        try:
            d = poly_degree(m.gen_degrees, dpoly)
        except ValueError:
            report.errors.append(f"d({name}) is not homogeneous")
            continue
        if d != degree + 1:
            report.errors.append(
                f"d({name}) has degree {d}, expected {degree + 1}")
        for mono in dpoly:
            if any(e and g >= idx for g, e in enumerate(mono)):
                report.errors.append(
                    f"d({name}) involves {name} or later generators "
                    "(well-ordering violated)")
                break
        dd = m.d_poly(dpoly)
        if dd:
            report.errors.append(
                f"d²({name}) != 0 in degree {degree + 2}")
    return report


@dataclass
class DegreeCohomology:
    dim: int
    cocycles: tuple[Vec, ...]     # echelon basis of ker d
    boundaries: tuple[Vec, ...]   # echelon basis of im d
    reps: tuple[Vec, ...]         # canonical representatives of H

    def class_coords(self, cocycle: Vec) -> Vec | None:
        rows = self.reps + self.boundaries
        coeffs = express_in_rows(rows, cocycle)
        if coeffs is None:
            return None
        return coeffs[: len(self.reps)]


def cohomology_degree(c: Cochains, k: int) -> DegreeCohomology:
    d_rows = c.d_matrix(k)
    cocycles = nullspace(transpose(d_rows, width=c.dim(k + 1)), width=c.dim(k))
    if k > 0:
        boundaries, _ = rref(c.d_matrix(k - 1))
    else:
        boundaries = ()
    reps: list[Vec] = []
    span = list(boundaries)
    current_rank = len(boundaries)
    for z in cocycles:
        candidate = span + [z]
        r = rank(candidate)
        if r > current_rank:
            span = list(rref(candidate)[0])
            current_rank = r
            reps.append(z)
    return DegreeCohomology(dim=len(cocycles) - len(boundaries),
                            cocycles=cocycles, boundaries=boundaries,
                            reps=tuple(reps))


def cdga_cohomology(c: Cochains, up_to: int) -> dict[int, DegreeCohomology]:
    """Cohomology tables in degrees 0..up_to (<= the truncation)."""
    if up_to > c.truncation:
        raise TruncationExceeded(
            f"cohomology requested to degree {up_to} beyond truncation {c.truncation}")
    return {k: cohomology_degree(c, k) for k in range(up_to + 1)}


# ---------------------------------------------------------------------------
# Surjectivization


def generator_candidates(target: Cochains, up_to: int) -> list[tuple[int, Vec, str]]:
    """Elements whose coverage forces degreewise surjectivity of an algebra map."""
    out = []
    if isinstance(target, FreeCDGA):
        for idx, (name, degree) in enumerate(target.generators):
            if degree <= up_to:
                v = target.to_vec(degree, {target.gen_mono(idx): vec([1])[0]})
                out.append((degree, v, name))
    elif isinstance(target, FormalCochains):
        for k in range(1, up_to + 1):
            for i in range(target.dim(k)):
                out.append((k, target.basis_vec(k, i), target.label(k, i)))
    else:
        for k in range(1, up_to + 1):
            for i in range(target.dim(k)):
                out.append((k, target.basis_vec(k, i), target.label(k, i)))
    out.sort(key=lambda t: t[0])
    return out


def surjectivize(psi: CochainMap) -> CochainMap:
    """Extend psi over an acyclic free factor until degreewise surjective.

    For each uncovered target element w a closed generator s (mapping to dw)
    and a generator r with dr = s (mapping to w) are attached, so the source
    inclusion is a quasi-isomorphism and the extension is surjective <= N.
    Surjective inputs are returned unchanged.
    """
    n = min(psi.source.truncation, psi.target.truncation)
    if not psi.nonsurjective_degrees(n):
        return psi
    ext = ExtensionCochains(psi.source, name=f"{psi.source.name}⊗Λ(R,dR)")
    gen_images: list[Vec] = []
    gamma = extension_cochain_map(ext, psi, gen_images, name=f"{psi.name}~")
    counter = 0
    for degree, w, wname in generator_candidates(psi.target, n):
        gamma.clear_cache()
        rows = list(gamma.matrix(degree))
        if express_in_rows(rref(rows)[0], w) is not None:
            continue
        dw = psi.target.d_vec(degree, w)
        ext.append_generator(f"s{counter}<{wname}>", degree + 1, None)
        gen_images.append(dw)
        s_vec = ext.gen_vec(len(ext.gens) - 1)
        ext.append_generator(f"r{counter}<{wname}>", degree, s_vec)
        gen_images.append(w)
        counter += 1
    gamma.clear_cache()
    bad = gamma.nonsurjective_degrees(n)
    if bad:
        raise NotSurjective(f"surjectivization failed in degrees {bad}")
    return gamma


# ---------------------------------------------------------------------------
# Kernel ideal and its powers


@dataclass
class DegreewiseIdeal:
    """Per-degree echelon bases of a homogeneous ideal inside a tensor square."""

    owner: Cochains
    blocks: dict[int, tuple[Vec, ...]]

    def component(self, k: int) -> tuple[Vec, ...]:
        return self.blocks.get(k, ())

    def dim(self, k: int) -> int:
        return len(self.component(k))

    def is_zero(self) -> bool:
        return not any(self.blocks.values())

    def contains(self, k: int, v: Vec) -> bool:
        return express_in_rows(self.component(k), v) is not None

    def closure_defects(self, sample_degrees: tuple[int, ...] = ()) -> list[str]:
        """Spot-check closure under multiplication by owner basis elements."""
        defects = []
        degrees = sample_degrees or tuple(self.blocks)
        for k in degrees:
            for row in self.component(k):
                for g in range(1, min(3, self.owner.truncation - k) + 1):
                    for i in range(self.owner.dim(g)):
                        prod = self.owner.mul_vec(k, row, g, self.owner.basis_vec(g, i))
                        if not is_zero_vec(prod) and not self.contains(k + g, prod):
                            defects.append(
                                f"not closed: degree-{k} element times "
                                f"{self.owner.label(g, i)}")
        return defects


class FactorizationPipeline:
    """Shared objects for one (psi, N) factorization problem."""

    def __init__(self, psi: CochainMap, truncation: int | None = None):
        self.psi = psi
        self.N = truncation if truncation is not None else min(
            psi.source.truncation, psi.target.truncation)
        bad = psi.nonsurjective_degrees(self.N)
        if bad:
            raise NotSurjective(
                f"model is not degreewise surjective (degrees {bad}); "
                "apply surjectivize first")
        self.P = TensorSquareCochains(psi.source, self.N)
        self.WW = TensorSquareCochains(psi.target, self.N)
        self.psi2 = tensor_square_cochain_map(psi, self.P, self.WW)
        self.mu = multiplication_cochain_map(self.WW)
        self.comp = self.mu.compose(self.psi2)

    def kernel_ideal(self) -> DegreewiseIdeal:
        blocks = {}
        for k in range(1, self.N + 1):
            rows = nullspace(transpose(self.comp.matrix(k), width=self.psi.target.dim(k)),
                             width=self.P.dim(k))
            if rows:
                blocks[k] = rows
        return DegreewiseIdeal(self.P, blocks)


def kernel_ideal(psi: CochainMap, truncation: int | None = None) -> DegreewiseIdeal:
    """K = ker( multiplication ∘ psi⊗psi ), degree by degree."""
    return FactorizationPipeline(psi, truncation).kernel_ideal()


def ideal_power(ideal: DegreewiseIdeal, m: int) -> DegreewiseIdeal:
    """Span of m-fold products of homogeneous ideal elements, degreewise."""
    if m < 1:
        raise ValueError("ideal powers need m >= 1")
    owner = ideal.owner
    n = owner.truncation
    current = ideal
    for _ in range(m - 1):
        blocks: dict[int, list[Vec]] = {}
        for a, rows_a in current.blocks.items():
            for b, rows_b in ideal.blocks.items():
                k = a + b
                if k > n:
                    continue
                bucket = blocks.setdefault(k, [])
                for u in rows_a:
                    for v in rows_b:
                        w = owner.mul_vec(a, u, b, v)
                        if not is_zero_vec(w):
                            bucket.append(w)
        reduced = {}
        for k, rows in blocks.items():
            echelon, _ = rref(rows)
            if echelon:
                reduced[k] = echelon
        current = DegreewiseIdeal(owner, reduced)
    return current


# ---------------------------------------------------------------------------
# Outcomes


@dataclass
class FactorizationOutcome:
    verdict: str                      # CERTIFIED | FAILED_WITNESS | UNKNOWN
    level: int                        # the n that was tested
    truncation: int
    witness_degree: int | None = None
    witness: Vec | None = None
    witness_label: str = ""
    obstruction_log: tuple[str, ...] = ()
    note: str = ""

    def as_dict(self) -> dict:
        out = {"verdict": self.verdict, "n": self.level, "truncation": self.truncation}
        if self.witness is not None:
            out["witness_degree"] = self.witness_degree
            out["witness"] = self.witness_label
        if self.obstruction_log:
            out["obstructions"] = list(self.obstruction_log)
        if self.note:
            out["note"] = self.note
        return out


def strict_certificate(psi: CochainMap, n: int, truncation: int | None = None) -> FactorizationOutcome:
    """On-the-nose test: does psi⊗psi kill K^{n+1} in all degrees <= N?

    CERTIFIED is sound and, once N >= 2·topdeg + 2 for finite cohomology,
    complete for strict factoring; FAILED_WITNESS carries an explicit element
    of K^{n+1} with nonzero image (re-verified here).  Never UNKNOWN.
    """
    pipe = FactorizationPipeline(psi, truncation)
    kp = ideal_power(pipe.kernel_ideal(), n + 1)
    for k in sorted(kp.blocks):
        for row in kp.component(k):
            image = pipe.psi2.apply(k, row)
            if not is_zero_vec(image):
                if not kp.contains(k, row):  # pragma: no cover - internal check
                    raise RuntimeError("witness fell outside the ideal power")
                return FactorizationOutcome(
                    verdict="FAILED_WITNESS", level=n, truncation=pipe.N,
                    witness_degree=k, witness=row,
                    witness_label=pipe.P.format_vec(k, row),
                    note="image " + pipe.WW.format_vec(k, image))
    return FactorizationOutcome(verdict="CERTIFIED", level=n, truncation=pipe.N,
                                note="strict: psi⊗psi vanishes on K^{n+1}")


# ---------------------------------------------------------------------------
# Relative model of the quotient


@dataclass
class RelativeModel:
    extension: ExtensionCochains
    quotient: QuotientCochains
    comparison: CochainMap             # extension -> quotient
    gen_images: list[Vec]              # comparison images of attached generators
    obstructions: tuple[str, ...] = ()


def relative_model_of_quotient(psi: CochainMap, n: int,
                               truncation: int | None = None,
                               _pipe: FactorizationPipeline | None = None) -> RelativeModel:
    """Degreewise free extension quasi-isomorphic to P/K^{n+1} below N.

    Works stage by stage: at stage k it adds closed degree-k generators until
    H^k maps onto the quotient, then degree-k generators killing the kernel
    of H^{k+1}.  Cohomology that cannot be corrected with degree >= 1
    generators (a kernel in H^1, or a non-stabilizing cascade) is recorded as
    an obstruction instead of silently looping.
    """
    pipe = _pipe or FactorizationPipeline(psi, truncation)
    kp = ideal_power(pipe.kernel_ideal(), n + 1)
    quotient = QuotientCochains(pipe.P, kp.blocks, name=f"{pipe.P.name}/K^{n + 1}")
    ext = ExtensionCochains(pipe.P, name=f"{pipe.P.name}⊗ΛU")
    gen_images: list[Vec] = []
    projection = projection_cochain_map(quotient)
    phi = extension_cochain_map(ext, projection, gen_images, name="φ")
    obstructions: list[str] = []

    def refresh():
        phi.clear_cache()

    def h_map_rows(k: int, h_ext: DegreeCohomology, h_q: DegreeCohomology):
        return [h_q.class_coords(phi.apply(k, z)) for z in h_ext.reps]

    # H^1 kernels cannot be fixed without degree-0 generators.
    h1 = cohomology_degree(ext, 1)
    hq1 = cohomology_degree(quotient, 1)
    rows1 = h_map_rows(1, h1, hq1)
    kernel1 = nullspace(transpose([r for r in rows1], width=len(hq1.reps)) if rows1 else (),
                        width=len(h1.reps)) if h1.reps else ()
    if kernel1:
        obstructions.append(
            "H^1 of the tensor square has classes dying in the quotient; "
            "no degree-0 generators are available to correct this")

    counter = 0
    for k in range(1, pipe.N):
        # (a) make H^k surjective with closed degree-k generators
        refresh()
        h_ext = cohomology_degree(ext, k)
        h_q = cohomology_degree(quotient, k)
        if h_q.dim:
            image_rows = [r for r in h_map_rows(k, h_ext, h_q) if r is not None]
            span = list(rref(image_rows)[0]) if image_rows else []
            for j in range(h_q.dim):
                unit = tuple(vec([1 if t == j else 0 for t in range(h_q.dim)]))
                if express_in_rows(span, unit) is None:
                    ext.append_generator(f"u{counter}", k, None)
                    gen_images.append(h_q.reps[j])
                    counter += 1
                    span = list(rref(span + [unit])[0])
        # (b) kill the kernel of H^{k+1} with degree-k generators
        for _ in range(MAX_INJECTIVITY_PASSES):
            refresh()
            h_ext1 = cohomology_degree(ext, k + 1)
            if not h_ext1.reps:
                break
            h_q1 = cohomology_degree(quotient, k + 1)
            rows = h_map_rows(k + 1, h_ext1, h_q1)
            if any(r is None for r in rows):  # pragma: no cover - internal check
                raise RuntimeError("cocycle image failed to reduce in the quotient")
            kernel = nullspace(transpose(rows, width=len(h_q1.reps)),
                               width=len(h_ext1.reps))
            if not kernel:
                break
            snapshots = []
            for coeffs in kernel:
                z = zero_vec(ext.dim(k + 1))
                for c, rep in zip(coeffs, h_ext1.reps):
                    if c != 0:
                        z = tuple(a + c * b for a, b in zip(z, rep))
                fz = phi.apply(k + 1, z)
                w = solve_right(transpose(quotient.d_matrix(k), width=quotient.dim(k + 1)),
                                fz, width=quotient.dim(k))
                if w is None:  # pragma: no cover - kernel classes map to exact cocycles
                    raise RuntimeError("kernel class image is not exact in the quotient")
                snapshots.append((ext.vec_to_sym(k + 1, z), w))
            for zsym, w in snapshots:
                ext.append_generator(f"u{counter}", k, ext.sym_to_vec(k + 1, zsym))
                gen_images.append(w)
                counter += 1
            if len(ext.gens) > MAX_EXTENSION_GENERATORS:
                obstructions.append(
                    f"extension exceeded {MAX_EXTENSION_GENERATORS} generators at degree {k}")
                break
        else:
            obstructions.append(
                f"kernel of H^{k + 1} did not stabilize within "
                f"{MAX_INJECTIVITY_PASSES} passes")
        if obstructions and len(ext.gens) > MAX_EXTENSION_GENERATORS:
            break
    refresh()
    return RelativeModel(extension=ext, quotient=quotient, comparison=phi,
                         gen_images=gen_images, obstructions=tuple(obstructions))


# ---------------------------------------------------------------------------
# Homotopy factorization (greedy lift)


def homotopy_factorization(psi: CochainMap, n: int,
                           truncation: int | None = None,
                           verify: bool = True) -> FactorizationOutcome:
    """Best-effort lift of psi⊗psi across the relative model of the quotient.

    Returns CERTIFIED when either the strict certificate already holds or the
    greedy degreewise lift solves every generator up to N.  A greedy failure
    is reported as UNKNOWN with the unsolvable system logged; it is not a
    proof of non-existence.  Never FAILED_WITNESS.
    """
    pipe = FactorizationPipeline(psi, truncation)
    strict = strict_certificate(psi, n, pipe.N)
    if strict.verdict == "CERTIFIED":
        return FactorizationOutcome(
            verdict="CERTIFIED", level=n, truncation=pipe.N,
            note="strict factorization; the identity lift suffices")
    rel = relative_model_of_quotient(psi, n, pipe.N, _pipe=pipe)
    if rel.obstructions:
        return FactorizationOutcome(
            verdict="UNKNOWN", level=n, truncation=pipe.N,
            obstruction_log=rel.obstructions,
            note="relative model could not be completed")
    ext = rel.extension
    ww = pipe.WW
    rho_images: list[Vec] = []

    def rho_apply_sym(sym, degree: int) -> Vec:
        out = list(zero_vec(ww.dim(degree)))
        for (kb, ib, mo), c in sym.items():
            acc_deg = kb
            acc = pipe.psi2.matrix(kb)[ib]
            dead = False
            for g in mono_factors(mo):
                gdeg = ext.gens[g][1]
                acc = ww.mul_vec(acc_deg, acc, gdeg, rho_images[g])
                acc_deg += gdeg
                if is_zero_vec(acc):
                    dead = True
                    break
            if dead:
                continue
            for idx, x in enumerate(acc):
                if x != 0:
                    out[idx] += c * x
        return tuple(out)

    log: list[str] = []
    for g, (gname, gdeg) in enumerate(ext.gens):
        dsym = ext._d_syms[g]
        if dsym:
            rhs = rho_apply_sym(dsym, gdeg + 1)
        else:
            rhs = ww.zero(gdeg + 1)
        x = solve_right(transpose(ww.d_matrix(gdeg), width=ww.dim(gdeg + 1)),
                        rhs, width=ww.dim(gdeg))
        if x is None:
            log.append(
                f"generator {gname} (degree {gdeg}): d·x = ρ(d{gname}) has no "
                f"solution; rhs = {ww.format_vec(gdeg + 1, rhs)}")
            return FactorizationOutcome(
                verdict="UNKNOWN", level=n, truncation=pipe.N,
                obstruction_log=tuple(log),
                note="greedy lift got stuck; failure is not a proof of non-existence")
        rho_images.append(x)

    if verify:
        rho = extension_cochain_map(ext, pipe.psi2, rho_images, name="ρ")
        defects = rho.chain_map_defects(min(pipe.N, ext.truncation))
        if defects:  # pragma: no cover - internal consistency
            raise RuntimeError("constructed lift is not a chain map: " + "; ".join(defects))
    return FactorizationOutcome(
        verdict="CERTIFIED", level=n, truncation=pipe.N,
        note=f"greedy lift over {len(ext.gens)} attached generators")


# ---------------------------------------------------------------------------
# Formal consistency


@dataclass
class ConsistencyReport:
    level: int
    strict: FactorizationOutcome
    homotopy: FactorizationOutcome
    defect: bool

    def as_dict(self) -> dict:
        return {
            "n": self.level,
            "strict": self.strict.as_dict(),
            "homotopy": self.homotopy.as_dict(),
            "defect": self.defect,
        }


def formal_consistency(work, model: CochainMap | None = None,
                       truncation: int | None = None) -> ConsistencyReport:
    """Cross-check: the homotopy certificate should reach the cohomological n.

    ``model`` is a cochain model of the map (model of codomain -> model of
    domain).  Without one, the zero-differential pair built from the
    cohomology ring is used; that route is only reliable when the induced
    morphism is surjective, and honest UNKNOWNs are reported otherwise.
    """
    from .invariants import tc_lower_bound  # local import to avoid a cycle

    if not work.formal:
        raise NotFormal(f"{work.name} is not flagged formal")
    n = tc_lower_bound(work)
    if truncation is None:
        truncation = default_truncation(work.domain_cohomology.top_degree())
    if model is None:
        source = FormalCochains(work.codomain_cohomology, truncation)
        target = FormalCochains(work.domain_cohomology, truncation)
        model = formal_cochain_map(work.induced, source, target, name=f"{work.name}*")
    gamma = surjectivize(model)
    strict = strict_certificate(gamma, n, truncation)
    homotopy = homotopy_factorization(gamma, n, truncation)
    return ConsistencyReport(level=n, strict=strict, homotopy=homotopy,
                             defect=homotopy.verdict != "CERTIFIED")
