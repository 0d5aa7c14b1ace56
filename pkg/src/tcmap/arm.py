"""Two-link planar arm: work map, two-region planner, naive identity planner.

The arm has joint angles (theta, phi) on a torus and link lengths l1 > l2.
The realized work map sends a configuration to the polar angle of the end
effector (the workspace strip retracts onto its core circle), and the section
s(a) = (theta=a, phi=0) satisfies angle(s(a)) = a on the nose, so planner
guarantees are strict equalities up to float precision rather than
homotopies.

This is the only module that uses floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import InvalidParameter, RegionMismatch

TAU = 2.0 * math.pi
DEFAULT_MARGIN = 1e-6
ENDPOINT_TOL = 1e-9
GAP_BOUND = math.pi / 8.0


def normalize_angle(x: float) -> float:
    """Wrap into (-pi, pi]."""
    y = math.fmod(x, TAU)
    if y > math.pi:
        y -= TAU
    elif y <= -math.pi:
        y += TAU
    return y


def circ_dist(a: float, b: float) -> float:
    """Circle distance in [0, pi]."""
    d = abs(normalize_angle(a - b))
    return d


@dataclass(frozen=True)
class Arm:
    l1: float
    l2: float

    def __post_init__(self):
        if not (self.l1 > self.l2 > 0):
            raise InvalidParameter("need l1 > l2 > 0")


@dataclass(frozen=True)
class ArmConfig:
    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(self.theta))
        object.__setattr__(self, "phi", normalize_angle(self.phi))


def end_effector(arm: Arm, c: ArmConfig) -> tuple[float, float]:
    """Planar position of the tool tip."""
    x = arm.l1 * math.cos(c.theta) + arm.l2 * math.cos(c.theta + c.phi)
    y = arm.l1 * math.sin(c.theta) + arm.l2 * math.sin(c.theta + c.phi)
    return x, y


def angle_map(arm: Arm, c: ArmConfig) -> float:
    """Polar angle of the end effector (well-defined since l1 > l2)."""
    x, y = end_effector(arm, c)
    return math.atan2(y, x)


def section(a: float) -> ArmConfig:
    """Right inverse of the angle map: elbow straight, base at the angle."""
    return ArmConfig(theta=a, phi=0.0)


def classify_region(arm: Arm, c1: ArmConfig, c2: ArmConfig,
                    margin: float = DEFAULT_MARGIN) -> tuple[str, ...]:
    """Which of the two planner regions accept this configuration pair.

    With a = angle(c1), b = angle(c2): U1 needs the images to be strictly
    non-antipodal, U2 strictly distinct.  Both conditions fail only when the
    circle distance sits inside both margin bands at once, which is
    impossible for margin < pi/2, so the result is never empty.
    """
    a = angle_map(arm, c1)
    b = angle_map(arm, c2)
    regions = []
    if circ_dist(a, b + math.pi) > margin:
        regions.append("U1")
    if circ_dist(a, b) > margin:
        regions.append("U2")
    return tuple(regions)


def _arc(a: float, b: float, mode: str) -> float:
    """Signed angular displacement from a to b for the given section."""
    if mode == "shorter":
        return normalize_angle(b - a)
    if mode == "ccw":
        delta = math.fmod(b - a, TAU)
        if delta < 0:
            delta += TAU
        return delta
    raise ValueError(mode)


@dataclass(frozen=True)
class PlannerPath:
    """Sampled path on a uniform time grid, tagged with the region used."""

    region: str
    thetas: tuple[float, ...]
    phis: tuple[float, ...]

    @property
    def samples(self) -> tuple[ArmConfig, ...]:
        return tuple(ArmConfig(t, p) for t, p in zip(self.thetas, self.phis))

    def max_gap(self) -> float:
        gap = 0.0
        for seq in (self.thetas, self.phis):
            for u, v in zip(seq, seq[1:]):
                gap = max(gap, circ_dist(u, v))
        return gap


def plan(arm: Arm, c1: ArmConfig, c2: ArmConfig, region: str,
         steps: int = 64, margin: float = DEFAULT_MARGIN) -> PlannerPath:
    """Work-map planner: lift the circle plan through the straight-elbow section.

    The output path starts and ends over the end-effector angles of c1 and c2
    (within 1e-9 rad); its configurations all have phi = 0.
    """
    if steps < 2:
        raise InvalidParameter("steps must be >= 2")
    if region not in classify_region(arm, c1, c2, margin):
        raise RegionMismatch(f"pair does not lie in region {region}")
    a = angle_map(arm, c1)
    b = angle_map(arm, c2)
    delta = _arc(a, b, "shorter" if region == "U1" else "ccw")
    thetas = tuple(normalize_angle(a + delta * i / (steps - 1)) for i in range(steps))
    return PlannerPath(region=region, thetas=thetas, phis=(0.0,) * steps)


def _component_region(x1: float, x2: float, margin: float) -> str:
    if circ_dist(x1, x2 + math.pi) > margin:
        return "1"
    return "2"


def plan_naive_identity(arm: Arm, c1: ArmConfig, c2: ArmConfig,
                        steps: int = 64, margin: float = DEFAULT_MARGIN) -> PlannerPath:
    """Component-wise torus planner with 4 regions; endpoints are exact configs."""
    if steps < 2:
        raise InvalidParameter("steps must be >= 2")
    r_theta = _component_region(c1.theta, c2.theta, margin)
    r_phi = _component_region(c1.phi, c2.phi, margin)
    d_theta = _arc(c1.theta, c2.theta, "shorter" if r_theta == "1" else "ccw")
    d_phi = _arc(c1.phi, c2.phi, "shorter" if r_phi == "1" else "ccw")
    thetas = tuple(normalize_angle(c1.theta + d_theta * i / (steps - 1)) for i in range(steps))
    phis = tuple(normalize_angle(c1.phi + d_phi * i / (steps - 1)) for i in range(steps))
    return PlannerPath(region=f"W{r_theta}{r_phi}", thetas=thetas, phis=phis)


@dataclass
class PlannerStats:
    samples: int
    steps: int
    region_hits: dict[str, int] = field(default_factory=dict)
    naive_region_hits: dict[str, int] = field(default_factory=dict)
    max_endpoint_error: float = 0.0
    max_naive_endpoint_error: float = 0.0
    max_gap: float = 0.0
    max_naive_gap: float = 0.0
    uncovered_pairs: int = 0
    annulus_violations: int = 0
    paths_checked: int = 0

    def work_region_count(self) -> int:
        return len([r for r, c in self.region_hits.items() if c])

    def naive_region_count(self) -> int:
        return len([r for r, c in self.naive_region_hits.items() if c])

    def as_dict(self) -> dict:
        return {
            "samples": self.samples,
            "steps": self.steps,
            "region_hits": dict(sorted(self.region_hits.items())),
            "naive_region_hits": dict(sorted(self.naive_region_hits.items())),
            "max_endpoint_error": self.max_endpoint_error,
            "max_naive_endpoint_error": self.max_naive_endpoint_error,
            "max_gap": self.max_gap,
            "max_naive_gap": self.max_naive_gap,
            "uncovered_pairs": self.uncovered_pairs,
            "annulus_violations": self.annulus_violations,
            "paths_checked": self.paths_checked,
        }


def verify_planner(arm: Arm, seed: int = 7, samples: int = 1000, steps: int = 64,
                   margin: float = DEFAULT_MARGIN, deep_checks: int = 2000) -> PlannerStats:
    """Randomized cover-and-continuity audit of both planners.

    Draws seeded uniform configuration pairs, checks the two-region cover,
    plans each pair in the first admissible region, and tracks endpoint
    errors and continuity gaps (gap = |arc| / (steps-1) on the uniform grid;
    the first ``deep_checks`` pairs also materialize the full sample list and
    re-measure everything sample by sample).
    """
    if samples < 1:
        raise InvalidParameter("samples must be >= 1")
    rng = random.Random(seed)
    stats = PlannerStats(samples=samples, steps=steps,
                         region_hits={"U1": 0, "U2": 0},
                         naive_region_hits={f"W{i}{j}": 0 for i in "12" for j in "12"})
    lo = arm.l1 - arm.l2 - 1e-9
    hi = arm.l1 + arm.l2 + 1e-9
    for index in range(samples):
        c1 = ArmConfig(rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi))
        c2 = ArmConfig(rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi))
        regions = classify_region(arm, c1, c2, margin)
        if not regions:
            stats.uncovered_pairs += 1
            continue
        region = regions[0]
        stats.region_hits[region] += 1
        a = angle_map(arm, c1)
        b = angle_map(arm, c2)
        delta = _arc(a, b, "shorter" if region == "U1" else "ccw")
        stats.max_gap = max(stats.max_gap, abs(delta) / (steps - 1))
        start_err = circ_dist(angle_map(arm, section(a)), a)
        end_err = circ_dist(angle_map(arm, section(normalize_angle(a + delta))), b)
        stats.max_endpoint_error = max(stats.max_endpoint_error, start_err, end_err)

        naive = None
        r_theta = _component_region(c1.theta, c2.theta, margin)
        r_phi = _component_region(c1.phi, c2.phi, margin)
        stats.naive_region_hits[f"W{r_theta}{r_phi}"] += 1
        dt = _arc(c1.theta, c2.theta, "shorter" if r_theta == "1" else "ccw")
        dp = _arc(c1.phi, c2.phi, "shorter" if r_phi == "1" else "ccw")
        stats.max_naive_gap = max(stats.max_naive_gap,
                                  abs(dt) / (steps - 1), abs(dp) / (steps - 1))
        stats.max_naive_endpoint_error = max(
            stats.max_naive_endpoint_error,
            circ_dist(normalize_angle(c1.theta + dt), c2.theta),
            circ_dist(normalize_angle(c1.phi + dp), c2.phi))

        if index < deep_checks:
            stats.paths_checked += 1
            path = plan(arm, c1, c2, region, steps=steps, margin=margin)
            stats.max_gap = max(stats.max_gap, path.max_gap())
            stats.max_endpoint_error = max(
                stats.max_endpoint_error,
                circ_dist(angle_map(arm, ArmConfig(path.thetas[0], path.phis[0])), a),
                circ_dist(angle_map(arm, ArmConfig(path.thetas[-1], path.phis[-1])), b))
            for t, p in zip(path.thetas, path.phis):
                r = math.hypot(*end_effector(arm, ArmConfig(t, p)))
                if not lo <= r <= hi:
                    stats.annulus_violations += 1
            naive = plan_naive_identity(arm, c1, c2, steps=steps, margin=margin)
            stats.max_naive_gap = max(stats.max_naive_gap, naive.max_gap())
            stats.max_naive_endpoint_error = max(
                stats.max_naive_endpoint_error,
                circ_dist(naive.thetas[-1], c2.theta),
                circ_dist(naive.phis[-1], c2.phi))
    return stats
