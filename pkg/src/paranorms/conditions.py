"""Grid audits of every generator-function hypothesis used by the theory.

All checks are midpoint/inequality tests on finite grids, not proofs; a
"holds-on-grid" verdict means no violation beyond rounding slack was found.
Margins are oriented so that >= 0 means the condition holds at that point.
Verdicts use margins normalized by the magnitude of the compared quantities,
so that the same slack works at 1e-12 and at 1e+12 scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .generator import Generator, is_exp_e
from .measure import CaseFlags, MeasureSpace, classify

HOLD_SLACK = 1e-9          # normalized slack below zero still counts as holds
STRICT_FLOOR = 1e-12       # strictness floor, relative to the value scale
QUAD_AXIS_CAP = 24         # axis subsampling cap for 4-variable checks

HOLDS = "holds-on-grid"
FAILS = "fails"


@dataclass(frozen=True)
class Grid2:
    lo: float
    hi: float
    n: int
    spacing: str = "log"

    def __post_init__(self):
        if not (0 < self.lo < self.hi):
            raise ValueError(f"need 0 < lo < hi, got lo={self.lo}, hi={self.hi}")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(math.log10(self.lo), math.log10(self.hi), self.n)
        return np.linspace(self.lo, self.hi, self.n)

    def describe(self) -> str:
        return f"{self.spacing}[{self.lo:g}:{self.hi:g}] n={self.n}"


def default_grid(g: Generator, n: int = 120) -> Grid2:
    """Log grid on [1e-4, 30], capped so pair sums stay inside t_max."""
    hi = min(30.0, 0.45 * g.t_max)
    return Grid2(1e-4, hi, n, "log")


@dataclass
class ConditionReport:
    name: str
    verdict: str                  # HOLDS or FAILS
    margin: float                 # raw LHS-RHS at the worst point
    normalized_margin: float      # margin / max(1, |LHS|, |RHS|) at that point
    witness: tuple | None         # worst point; always present on FAILS
    grid: str
    excluded: int = 0             # grid cells skipped (overflow / degenerate)
    notes: list = field(default_factory=list)
    discrepancy: bool = False     # cross-check disagreement

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "margin": self.margin,
            "normalized_margin": self.normalized_margin,
            "witness": list(self.witness) if self.witness is not None else None,
            "grid": self.grid,
            "excluded": self.excluded,
            "notes": list(self.notes),
            "discrepancy": self.discrepancy,
        }


def _report(name, margins, scales, witness_of, grid_desc, notes=None):
    """Assemble a report from margin and scale arrays of equal shape."""
    margins = np.asarray(margins, dtype=float)
    scales = np.asarray(scales, dtype=float)
    valid = np.isfinite(margins) & np.isfinite(scales) & (scales > 0)
    excluded = int(margins.size - valid.sum())
    notes = list(notes) if notes else []
    if not valid.any():
        return ConditionReport(name, FAILS, math.nan, math.nan, None, grid_desc,
                               excluded, notes + ["no valid grid cells"])
    with np.errstate(all="ignore"):
        normalized = np.where(valid, margins / np.where(valid, scales, 1.0),
                              np.inf)
    flat = int(np.argmin(normalized))
    worst_norm = float(normalized.flat[flat])
    worst_raw = float(margins.flat[flat])
    witness = witness_of(flat)
    verdict = HOLDS if worst_norm >= -HOLD_SLACK else FAILS
    return ConditionReport(name, verdict, worst_raw, worst_norm, witness,
                           grid_desc, excluded, notes)


def _pair_arrays(grid: Grid2):
    pts = grid.points()
    r = pts[:, None]
    s = pts[None, :]
    return pts, r, s


def _pair_witness(pts):
    n = len(pts)

    def witness_of(flat):
        i, j = divmod(flat, n)
        return (float(pts[i]), float(pts[j]))

    return witness_of


# ---------------------------------------------------------------------------
# pointwise margins (used by grid drivers and by witness re-evaluation)

def superquadratic_margin(g: Generator, r, s):
    """phi(r+s) + phi(|r-s|) - 2 phi(r) - 2 phi(s)."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    lhs = g.value_array(r + s) + g.value_array(np.abs(r - s))
    rhs = 2.0 * g.value_array(r) + 2.0 * g.value_array(s)
    return lhs - rhs, np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def midpoint_convexity_margin(g: Generator, r, s):
    """(phi(r) + phi(s))/2 - phi((r+s)/2); >= 0 on convex generators."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    lhs = 0.5 * (g.value_array(r) + g.value_array(s))
    rhs = g.value_array(0.5 * (r + s))
    return lhs - rhs, np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def geometric_convexity_margin(g: Generator, s, t):
    """sqrt(phi(s) phi(t)) - phi(sqrt(s t)); >= 0 on geometrically convex."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    lhs = np.sqrt(g.value_array(s) * g.value_array(t))
    rhs = g.value_array(np.sqrt(s * t))
    return lhs - rhs, np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def _ratio(g: Generator, t):
    """phi' / phi''; nan where phi'' vanishes or either is non-finite."""
    t = np.asarray(t, dtype=float)
    d1 = g.deriv1_array(t)
    d2 = g.deriv2_array(t)
    with np.errstate(all="ignore"):
        out = np.where(d2 != 0.0, d1 / np.where(d2 != 0.0, d2, 1.0), np.nan)
    return np.where(np.isfinite(out), out, np.nan)


def ratio_superadditive_margin(g: Generator, r, s):
    """ratio(r+s) - ratio(r) - ratio(s) with ratio = phi'/phi''."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    lhs = _ratio(g, r + s)
    rhs = _ratio(g, r) + _ratio(g, s)
    return lhs - rhs, np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def f_value(g: Generator, r, s):
    """F(r, s) = phi(phi^-1(r) + phi^-1(s))."""
    return g.value_array(g.inverse_array(r) + g.inverse_array(s))


def g_value(g: Generator, r, s):
    """G(r, s) = phi(|phi^-1(r) - phi^-1(s)|)."""
    return g.value_array(np.abs(g.inverse_array(r) - g.inverse_array(s)))


def h_value(g: Generator, r, s):
    """H(r, s) = F(r, s) + G(r, s)."""
    ir = g.inverse_array(r)
    iz = g.inverse_array(s)
    return g.value_array(ir + iz) + g.value_array(np.abs(ir - iz))


def h_subadditivity_margin(g: Generator, r1, s1, r2, s2):
    """H(r1, s1) + H(r2, s2) - H(r1+r2, s1+s2)."""
    lhs = h_value(g, np.asarray(r1, float), np.asarray(s1, float)) + \
        h_value(g, np.asarray(r2, float), np.asarray(s2, float))
    rhs = h_value(g, np.asarray(r1, float) + np.asarray(r2, float),
                  np.asarray(s1, float) + np.asarray(s2, float))
    return lhs - rhs, np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def remark4_margins(g: Generator, r, s):
    """The three sufficient inequalities for H convexity, at pairs r > s > 0.

    Returns ((m1, m2, m3), (scale1, scale2, scale3), ill_conditioned): m2 and
    m3 are the cross-multiplied forms of the two ratio inequalities, m1 is
    the determinant-style inequality in its displayed form, which divides by
    phi'(r+s) - phi'(r-s).  Cells where that difference has lost more than
    six significant digits to cancellation are flagged ill-conditioned; m1
    is numerically meaningless there.
    """
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    d1p = g.deriv1_array(r + s)
    d1m = g.deriv1_array(r - s)
    d2p = g.deriv2_array(r + s)
    d2m = g.deriv2_array(r - s)
    d1r = g.deriv1_array(r)
    d2r = g.deriv2_array(r)
    d1s = g.deriv1_array(s)
    d2s = g.deriv2_array(s)
    with np.errstate(all="ignore"):
        m2 = (d2p + d2m) * d1r - (d1p + d1m) * d2r
        m3 = (d2p + d2m) * d1s - (d1p - d1m) * d2s
        lhs1 = 4.0 * d2p * d2m / (d1p ** 2 - d1m ** 2) + (d2r / d1r) * (d2s / d1s)
        rhs1 = (d2r / d1r) * (d2p + d2m) / (d1p - d1m) \
            + (d2s / d1s) * (d2p + d2m) / (d1p + d1m)
        m1 = lhs1 - rhs1
        scale1 = np.maximum(1.0, np.maximum(np.abs(lhs1), np.abs(rhs1)))
        scale2 = np.maximum(1.0, np.maximum(np.abs((d2p + d2m) * d1r),
                                            np.abs((d1p + d1m) * d2r)))
        scale3 = np.maximum(1.0, np.maximum(np.abs((d2p + d2m) * d1s),
                                            np.abs((d1p - d1m) * d2s)))
        ill = np.abs(d1p - d1m) < 1e-6 * np.abs(d1p)
    return (m1, m2, m3), (scale1, scale2, scale3), ill


# ---------------------------------------------------------------------------
# grid drivers

def check_superquadratic(g: Generator, grid: Grid2) -> ConditionReport:
    pts, r, s = _pair_arrays(grid)
    margins, scales = superquadratic_margin(g, r, s)
    return _report("superquadratic", margins, scales, _pair_witness(pts),
                   grid.describe())


def check_subquadratic(g: Generator, grid: Grid2) -> ConditionReport:
    pts, r, s = _pair_arrays(grid)
    margins, scales = superquadratic_margin(g, r, s)
    return _report("subquadratic", -margins, scales, _pair_witness(pts),
                   grid.describe())


def check_convex(g: Generator, grid: Grid2) -> ConditionReport:
    pts, r, s = _pair_arrays(grid)
    margins, scales = midpoint_convexity_margin(g, r, s)
    return _report("convex", margins, scales, _pair_witness(pts),
                   grid.describe())


def check_strictly_convex(g: Generator, grid: Grid2) -> ConditionReport:
    """Midpoint convexity with a strictness floor at r != s.

    The floor is relative to the compared phi values (not to 1): near 0 a
    strictly convex generator with vanishing curvature has genuinely tiny
    midpoint margins, and an absolute floor would misreport it as
    non-strict.
    """
    pts, r, s = _pair_arrays(grid)
    margins, _ = midpoint_convexity_margin(g, r, s)
    vals = np.abs(g.value_array(pts))
    value_scale = np.maximum(1e-300, np.maximum(vals[:, None], vals[None, :]))
    off_diag = ~np.eye(len(pts), dtype=bool)
    valid = off_diag & np.isfinite(margins)
    excluded = int(np.sum(off_diag & ~np.isfinite(margins)))
    slack = np.where(valid, (margins - STRICT_FLOOR * value_scale) / value_scale,
                     np.inf)
    flat = int(np.argmin(slack))
    worst = _pair_witness(pts)(flat)
    verdict = HOLDS if float(slack.flat[flat]) >= 0.0 else FAILS
    return ConditionReport(
        "strictly-convex", verdict, float(margins.flat[flat]),
        float(slack.flat[flat]), worst, grid.describe(), excluded,
        notes=[f"strictness floor {STRICT_FLOOR:g} relative to the phi scale"])


def check_geometric_convex(g: Generator, grid: Grid2) -> ConditionReport:
    """phi(sqrt(st)) <= sqrt(phi(s) phi(t)), cross-checked against the
    monotonicity of t phi'(t)/phi(t)."""
    pts, s, t = _pair_arrays(grid)
    margins, scales = geometric_convexity_margin(g, s, t)
    report = _report("geometric-convex", margins, scales, _pair_witness(pts),
                     grid.describe())
    with np.errstate(all="ignore"):
        q = pts * g.deriv1_array(pts) / g.value_array(pts)
    dq = np.diff(q)
    qscale = np.maximum(1.0, np.maximum(np.abs(q[:-1]), np.abs(q[1:])))
    valid = np.isfinite(dq)
    ratio_holds = bool(valid.any()) and bool(
        np.min(np.where(valid, dq / qscale, np.inf)) >= -HOLD_SLACK)
    if ratio_holds != report.holds:
        report.discrepancy = True
        report.notes.append(
            f"derivative-ratio monotonicity test disagrees: ratio test "
            f"{'holds' if ratio_holds else 'fails'}")
    else:
        report.notes.append("derivative-ratio monotonicity test agrees")
    return report


def check_ratio_superadditive(g: Generator, grid: Grid2) -> ConditionReport:
    pts, r, s = _pair_arrays(grid)
    point_ratios = _ratio(g, pts)
    degenerate = int(np.sum(~np.isfinite(point_ratios)))
    margins, scales = ratio_superadditive_margin(g, r, s)
    notes = [f"{degenerate} degenerate grid points (phi'' vanishing)"] \
        if degenerate else None
    return _report("ratio-superadditive", margins, scales, _pair_witness(pts),
                   grid.describe(), notes=notes)


def check_ratio_subadditive(g: Generator, grid: Grid2) -> ConditionReport:
    pts, r, s = _pair_arrays(grid)
    point_ratios = _ratio(g, pts)
    degenerate = int(np.sum(~np.isfinite(point_ratios)))
    margins, scales = ratio_superadditive_margin(g, r, s)
    notes = [f"{degenerate} degenerate grid points (phi'' vanishing)"] \
        if degenerate else None
    return _report("ratio-subadditive", -margins, scales, _pair_witness(pts),
                   grid.describe(), notes=notes)


def _subsample(pts: np.ndarray, cap: int = QUAD_AXIS_CAP) -> np.ndarray:
    if len(pts) <= cap:
        return pts
    idx = np.unique(np.linspace(0, len(pts) - 1, cap).round().astype(int))
    return pts[idx]


def _midpoint_4var(name, grid, table_of, convex: bool):
    """Midpoint convexity/concavity of a two-variable transform.

    table_of(u, v) evaluates the transform on broadcastable arrays.  The
    pairs run over a subsampled grid^2 x grid^2; margins are oriented with
    `convex` (True: mean above midpoint)."""
    pts = _subsample(grid.points())
    m = len(pts)
    mids = 0.5 * (pts[:, None] + pts[None, :])            # (m, m)
    T = table_of(pts[:, None], pts[None, :])              # T[i, j]
    # midpoint of P=(r_i, s_j), Q=(r_k, s_l): (mids[i,k], mids[j,l])
    Tm = table_of(mids[:, :, None, None], mids[None, None, :, :])  # [i,k,j,l]
    TP = T[:, None, :, None]
    TQ = T[None, :, None, :]
    mean = 0.5 * (TP + TQ)
    margins = (mean - Tm) if convex else (Tm - mean)
    scales = np.maximum(1.0, np.maximum(np.abs(mean), np.abs(Tm)))

    def witness_of(flat):
        i, k, j, l = np.unravel_index(flat, margins.shape)
        return (float(pts[i]), float(pts[j]), float(pts[k]), float(pts[l]))

    notes = [f"axes subsampled to {m} points for the 4-variable test"]
    return _report(name, margins, scales, witness_of, grid.describe(),
                   notes=notes)


def check_F_concave(g: Generator, grid: Grid2) -> ConditionReport:
    report = _midpoint_4var(
        "F-concave", grid,
        lambda u, v: g.value_array(g.inverse_array(u) + g.inverse_array(v)),
        convex=False)
    ratio_rep = check_ratio_superadditive(g, grid)
    if ratio_rep.holds and not report.holds:
        report.discrepancy = True
        report.notes.append(
            "inconsistent with ratio superadditivity on the same grid")
    return report


def check_G_convex(g: Generator, grid: Grid2) -> ConditionReport:
    report = _midpoint_4var(
        "G-convex", grid,
        lambda u, v: g.value_array(np.abs(g.inverse_array(u) - g.inverse_array(v))),
        convex=True)
    ratio_rep = check_ratio_superadditive(g, grid)
    if ratio_rep.holds and not report.holds:
        report.discrepancy = True
        report.notes.append(
            "inconsistent with ratio superadditivity on the same grid")
    return report


def check_H_convex(g: Generator, grid: Grid2) -> ConditionReport:
    def H(u, v):
        iu = g.inverse_array(u)
        iv = g.inverse_array(v)
        return g.value_array(iu + iv) + g.value_array(np.abs(iu - iv))

    return _midpoint_4var("H-convex", grid, H, convex=True)


def check_H_subadditive(g: Generator, grid: Grid2) -> ConditionReport:
    """H(r1+r2, s1+s2) <= H(r1, s1) + H(r2, s2) over grid quadruples."""
    pts = _subsample(grid.points())
    m = len(pts)
    sums = pts[:, None] + pts[None, :]                    # (m, m)
    inv = g.inverse_array(pts)
    inv_sums = g.inverse_array(sums)

    def H_of(iu, iv):
        return g.value_array(iu + iv) + g.value_array(np.abs(iu - iv))

    T = H_of(inv[:, None], inv[None, :])                  # H[i, j]
    Tsum = H_of(inv_sums[:, :, None, None], inv_sums[None, None, :, :])
    lhs = T[:, None, :, None] + T[None, :, None, :]
    margins = lhs - Tsum
    scales = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(Tsum)))

    def witness_of(flat):
        i, k, j, l = np.unravel_index(flat, margins.shape)
        return (float(pts[i]), float(pts[j]), float(pts[k]), float(pts[l]))

    return _report("H-subadditive", margins, scales, witness_of,
                   grid.describe(),
                   notes=[f"axes subsampled to {m} points for the quadruple test"])


def check_remark4_inequalities(g: Generator, grid: Grid2) -> ConditionReport:
    """Three sufficient differential inequalities for H convexity, on pairs
    r > s separated by at least the grid floor."""
    pts = grid.points()
    r = pts[:, None]
    s = pts[None, :]
    band = (r - s) >= grid.lo
    (m1, m2, m3), (s1, s2, s3), ill = remark4_margins(g, r, s)
    m1 = np.where(ill, np.inf, m1)   # cancellation floor, counted as excluded
    margins = np.stack([np.where(band, m, np.inf) for m in (m1, m2, m3)])
    scales = np.stack([s1, s2, s3])

    def witness_of(flat):
        which, i, j = np.unravel_index(flat, margins.shape)
        return (float(pts[i]), float(pts[j]), float(which + 1))

    report = _report("remark4-inequalities", margins, scales, witness_of,
                     grid.describe(),
                     notes=[f"pairs restricted to r - s >= {grid.lo:g}",
                            "witness third entry = index of the failing inequality"])
    if report.holds:
        h_rep = check_H_convex(g, grid)
        if not h_rep.holds:
            report.discrepancy = True
            report.notes.append("H convexity fails although the sufficient "
                                "inequalities hold")
    return report


def check_lemma6_identity(g: Generator, n_pairs: int = 10000, seed: int = 0,
                          scale: float | None = None) -> ConditionReport:
    """phi(|s|+|t|) + phi(||s|-|t||) == phi(|s+t|) + phi(|s-t|) on signed
    pairs; an algebraic identity, so the margin is the worst absolute
    difference and must sit at rounding level."""
    if scale is None:
        scale = min(15.0, 0.45 * g.t_max)
    rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
    s = rng.uniform(-scale, scale, size=n_pairs)
    t = rng.uniform(-scale, scale, size=n_pairs)
    # deterministic sign-case corners
    s = np.concatenate([s, [1.0, 2.0, -1.0, 0.0, 0.5]])
    t = np.concatenate([t, [-1.0, 3.0, -2.0, 1.0, 0.0]])
    lhs = g.value_array(np.abs(s) + np.abs(t)) \
        + g.value_array(np.abs(np.abs(s) - np.abs(t)))
    rhs = g.value_array(np.abs(s + t)) + g.value_array(np.abs(s - t))
    diff = np.abs(lhs - rhs)
    worst = int(np.argmax(diff))
    margin = float(diff[worst])
    verdict = HOLDS if margin <= 1e-12 else FAILS
    return ConditionReport(
        "lemma6-identity", verdict, margin, margin,
        (float(s[worst]), float(t[worst])),
        f"{n_pairs} seeded signed pairs in [-{scale:g}, {scale:g}]^2",
        notes=["margin is the maximum absolute two-sided difference"])


AUDIT_CHECKS = (
    ("superquadratic", check_superquadratic),
    ("subquadratic", check_subquadratic),
    ("convex", check_convex),
    ("strictly-convex", check_strictly_convex),
    ("geometric-convex", check_geometric_convex),
    ("ratio-superadditive", check_ratio_superadditive),
    ("ratio-subadditive", check_ratio_subadditive),
    ("F-concave", check_F_concave),
    ("G-convex", check_G_convex),
    ("H-convex", check_H_convex),
    ("H-subadditive", check_H_subadditive),
    ("remark4-inequalities", check_remark4_inequalities),
)


def audit_all(g: Generator, grid: Grid2 | None = None) -> list:
    """Every condition check plus the sign identity, in a fixed order."""
    grid = grid or default_grid(g)
    reports = [fn(g, grid) for _, fn in AUDIT_CHECKS]
    reports.append(check_lemma6_identity(g))
    return reports


# ---------------------------------------------------------------------------
# certification

PARANORM_LEMMA1 = "Lemma1-F-concave"
PARANORM_LEMMA3 = "Lemma3-Mulholland"
UC_THM1 = "Thm1-superquadratic"
UC_THM4 = "Thm4-eC"
UC_THM11 = "Thm11-strict-convexity"
UC_THM5 = "Thm5-exact"


@dataclass
class Certificate:
    generator: str
    weights: tuple
    flags: CaseFlags
    paranorm_routes: list
    uc_routes: list
    reports: dict
    notes: list

    def to_dict(self) -> dict:
        return {
            "generator": self.generator,
            "weights": list(self.weights),
            "case_flags": {
                "sub_probability": self.flags.sub_probability,
                "counting_like": self.flags.counting_like,
                "witness": dict(self.flags.witness),
            },
            "paranorm_routes": list(self.paranorm_routes) or ["none"],
            "uniform_convexity_routes": list(self.uc_routes) or ["none"],
            "conditions": {name: rep.to_dict()
                           for name, rep in self.reports.items()},
            "notes": list(self.notes),
        }


def certify(g: Generator, space: MeasureSpace,
            grid: Grid2 | None = None) -> Certificate:
    """Decide which paranorm and uniform-convexity routes the grid evidence
    supports.  A route is claimed only if all of its constituent checks
    hold; claiming nothing is a valid outcome."""
    grid = grid or default_grid(g)
    flags = classify(space)
    reports = {}

    def run(name, fn):
        if name not in reports:
            reports[name] = fn(g, grid)
        return reports[name]

    convex = run("convex", check_convex)
    strictly = run("strictly-convex", check_strictly_convex)
    superq = run("superquadratic", check_superquadratic)
    geo = run("geometric-convex", check_geometric_convex)

    paranorm_routes = []
    if flags.sub_probability:
        f_rep = run("F-concave", check_F_concave)
        if f_rep.holds:
            paranorm_routes.append(PARANORM_LEMMA1)
    if flags.counting_like and convex.holds and geo.holds:
        paranorm_routes.append(PARANORM_LEMMA3)

    uc_routes = []
    if paranorm_routes:
        if superq.holds:
            uc_routes.append(UC_THM1)
        eC = False
        if strictly.holds:
            if flags.sub_probability:
                eC = eC or run("H-convex", check_H_convex).holds
            if flags.counting_like:
                eC = eC or run("H-subadditive", check_H_subadditive).holds
            if eC:
                uc_routes.append(UC_THM4)
            uc_routes.append(UC_THM11)
        if is_exp_e(g) and space.weights == (1.0, 1.0):
            uc_routes.append(UC_THM5)

    notes = [
        "all verdicts are finite-grid audits, not proofs (grid-audited)",
    ]
    if flags.sub_probability and space.total < 1.0 and PARANORM_LEMMA1 in paranorm_routes:
        notes.append(
            "total mass < 1: F-concavity is sufficient for the paranorm "
            "property here; the if-and-only-if form needs total mass 1 with "
            "a set of intermediate measure")
    if not flags.sub_probability and not flags.counting_like:
        notes.append(
            "space is neither sub-probability nor counting-like: no general "
            "finite certification procedure is implemented for this case")
    if UC_THM11 in uc_routes and len(uc_routes) == 1:
        notes.append(
            "strict-convexity route certifies uniform convexity without a "
            "modulus formula; use the empirical search for bounds")

    return Certificate(
        generator=g.name,
        weights=space.weights,
        flags=flags,
        paranorm_routes=paranorm_routes,
        uc_routes=uc_routes,
        reports=reports,
        notes=notes,
    )
