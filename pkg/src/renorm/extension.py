"""Graph-transform extension of the piecewise-affine fixed point.

Two seed curve pieces cover [0, y_1] and [z_1, 1]: affine branches of the
fixed point where those exist, monotone C^1 interpolants across the gaps.
The box map F (horizontal: the central rescale; vertical: y -> 1 - s_last
(1 - y)) pushes the seeds into the central interval level by level; the
union is a sampled C^{1+Lip} unimodal curve whose only unresolved part is
a geometrically small window around the critical point, closed by the
quadratic-tip parabola.

Slopes transform by -s_last/s2 per level and derivative Lipschitz bounds
by s_last/s2^2, which equals 1 exactly at the fixed points: that identity
is why the Lipschitz profile does not grow.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .quadratic import eval_raw
from .scaling import Period
from .tower import Affine, Tower

DERIV_MATCH_TOL = 1e-12
MONOTONE_GRID = 257
TIP_FLOOR = 1e-8


class FillerOvershoot(RuntimeError):
    """The gap interpolant lost monotonicity or left the unit square."""


class NonConvergent(RuntimeError):
    pass


@dataclass(frozen=True)
class GraphTransform:
    horizontal: Affine   # x -> anchor + s2*(1 - x)
    vertical: Affine     # y -> 1 - s_last*(1 - y)

    @property
    def horizontal_factor(self) -> float:
        return abs(self.horizontal.a)

    @property
    def vertical_factor(self) -> float:
        return abs(self.vertical.a)

    @property
    def slope_factor(self) -> float:
        # dy'/dx' for a graph piece pushed through the box map; the
        # reversing horizontal makes this negative
        return self.vertical.a / self.horizontal.a

    @property
    def lip_factor(self) -> float:
        return self.vertical_factor / self.horizontal_factor**2


def graph_transform(t: Tower, vertical_factor: float | None = None) -> GraphTransform:
    """The box map of a tower's level-1 data.  vertical_factor overrides
    s_last for negative-control experiments."""
    s = t.factors[0].s
    v = s[-1] if vertical_factor is None else vertical_factor
    return GraphTransform(t.rescale[0], Affine(v, 1.0 - v))


@dataclass(frozen=True)
class CurvePiece:
    xs: np.ndarray
    ys: np.ndarray
    ds: np.ndarray
    level: int
    kind: str  # "affine" | "filler" | "tip"

    @property
    def lo(self) -> float:
        return float(self.xs[0])

    @property
    def hi(self) -> float:
        return float(self.xs[-1])

    def lipschitz(self) -> float:
        dd = np.abs(np.diff(self.ds))
        dx = np.diff(self.xs)
        return float(np.max(dd / dx)) if len(dd) else 0.0


def transform_piece(F: GraphTransform, p: CurvePiece) -> CurvePiece:
    xs = F.horizontal(p.xs)[::-1]
    ys = F.vertical(p.ys)[::-1]
    ds = (F.slope_factor * p.ds)[::-1]
    return CurvePiece(xs, ys, ds, p.level + 1, p.kind)


@dataclass(frozen=True)
class GapFiller:
    """Monotone C^1 interpolant factory for the gaps of D_s.

    Cubic Hermite by default; if the cubic loses monotonicity for some
    endpoint data, fall back to the rational quadratic-over-linear form,
    which is monotone whenever both endpoint slopes share the secant's
    sign.
    """

    kind: str = "monotone-cubic"

    def build(self, x0, x1, v0, v1, m0, m1, resolution) -> CurvePiece:
        xs = np.linspace(x0, x1, resolution)
        for attempt in (self.kind, "rational-quadratic"):
            ys, ds = _hermite_eval(attempt, xs, x0, x1, v0, v1, m0, m1)
            secant = np.sign(v1 - v0)
            if np.all(secant * ds >= -1e-15) and np.all(ys >= -1e-12) and np.all(
                ys <= 1.0 + 1e-12
            ):
                return CurvePiece(xs, ys, ds, 0, "filler")
        raise FillerOvershoot(
            f"no monotone interpolant for gap [{x0}, {x1}] with slopes ({m0}, {m1})"
        )


def _hermite_eval(kind, xs, x0, x1, v0, v1, m0, m1):
    h = x1 - x0
    t = (xs - x0) / h
    if kind == "monotone-cubic":
        h00 = (1.0 + 2.0 * t) * (1.0 - t) ** 2
        h10 = t * (1.0 - t) ** 2
        h01 = t * t * (3.0 - 2.0 * t)
        h11 = t * t * (t - 1.0)
        ys = v0 * h00 + h * m0 * h10 + v1 * h01 + h * m1 * h11
        dh00 = 6.0 * t * t - 6.0 * t
        dh10 = 3.0 * t * t - 4.0 * t + 1.0
        dh01 = -dh00
        dh11 = 3.0 * t * t - 2.0 * t
        ds = (v0 * dh00 + h * m0 * dh10 + v1 * dh01 + h * m1 * dh11) / h
        return ys, ds
    if kind == "rational-quadratic":
        if (v1 - v0) == 0.0 or m0 * m1 <= 0.0:
            return np.full_like(xs, np.nan), np.full_like(xs, np.nan)
        vbar = (m0 * v1 + m1 * v0) / (m0 + m1)
        w = m0 * h / (2.0 * (vbar - v0))
        num = v0 * (1 - t) ** 2 + 2 * w * vbar * t * (1 - t) + v1 * t * t
        den = (1 - t) ** 2 + 2 * w * t * (1 - t) + t * t
        ys = num / den
        dnum = -2 * v0 * (1 - t) + 2 * w * vbar * (1 - 2 * t) + 2 * v1 * t
        dden = -2 * (1 - t) + 2 * w * (1 - 2 * t) + 2 * t
        ds = (dnum * den - num * dden) / (den * den) / h
        return ys, ds
    raise ValueError(f"unknown filler kind {kind!r}")


@dataclass
class SampledCurve:
    pieces: list
    period: Period
    c_star: float
    factor: tuple
    transform: GraphTransform | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pieces = sorted(self.pieces, key=lambda p: p.lo)

    @property
    def grid(self) -> np.ndarray:
        return np.concatenate([p.xs for p in self.pieces])

    @property
    def values(self) -> np.ndarray:
        return np.concatenate([p.ys for p in self.pieces])

    @property
    def derivatives(self) -> np.ndarray:
        return np.concatenate([p.ds for p in self.pieces])

    @property
    def levels(self) -> np.ndarray:
        return np.concatenate([np.full(len(p.xs), p.level) for p in self.pieces])

    @property
    def depth(self) -> int:
        return max(p.level for p in self.pieces)

    def junctions(self, gap_tol: float = 1e-9):
        """Marked points where two pieces meet, with one-sided slopes."""
        out = []
        for a, b in zip(self.pieces[:-1], self.pieces[1:]):
            if b.kind == "tip" or a.kind == "tip":
                continue
            if abs(b.lo - a.hi) <= gap_tol:
                out.append(
                    {
                        "x": a.hi,
                        "left_slope": float(a.ds[-1]),
                        "right_slope": float(b.ds[0]),
                        "left_level": a.level,
                        "right_level": b.level,
                    }
                )
        return out

    def junction_mismatch(self) -> float:
        js = self.junctions()
        if not js:
            return 0.0
        return max(abs(j["left_slope"] - j["right_slope"]) for j in js)


def _branch_piece(f, branch, resolution) -> CurvePiece:
    xs = np.linspace(branch.lo, branch.hi, resolution)
    ys = branch.map.a * xs + branch.map.b
    ds = np.full(resolution, branch.map.a)
    return CurvePiece(xs, ys, ds, 0, "affine")


def seed_pieces(f, filler: GapFiller | None = None, resolution: int = 256):
    """The two seed curves: K2 over [0, y_1] and K1 over [z_1, 1].

    Branch pieces carry the affine fixed-point data; gap fillers match
    value and slope on both sides.  The slopes at y_1 and z_1 come from
    the box-map images of the opposite seed's outer ends, which is what
    makes every marked point a C^1 junction after extension.
    """
    if filler is None:
        filler = GapFiller()
    if resolution < 64:
        raise ValueError("resolution must be >= 64 samples per piece")
    t = f.tower
    if t.depth < 2:
        raise ValueError("seed pieces need a depth >= 2 fixed point")
    F = graph_transform(t)
    gen1 = {b.family: b for b in f.branches if b.level == 1}
    y1, z1 = t.y(1), t.z(1)
    fams = sorted(gen1)
    first, last = gen1[fams[0]], gen1[fams[-1]]

    # K2: branch over I_1^1, then the left gap up to y_1
    k2_pieces = [_branch_piece(f, first, resolution)]
    m_y1 = F.slope_factor * last.map.a
    k2_pieces.append(
        filler.build(
            first.hi, y1, first.map(first.hi), f(y1), first.map.a, m_y1, resolution
        )
    )
    k2 = SampledCurve(k2_pieces, f.period, f.c0, t.factors[0].s, F)

    # K1: the right gap from z_1, then the remaining branches and gaps to 1
    m_z1 = F.slope_factor * first.map.a
    inner = [gen1[i] for i in fams[1:]]
    k1_pieces = [
        filler.build(
            z1, inner[0].lo, f(z1), inner[0].map(inner[0].lo), m_z1,
            inner[0].map.a, resolution,
        )
    ]
    for a, b in zip(inner[:-1], inner[1:]):
        k1_pieces.append(_branch_piece(f, a, resolution))
        k1_pieces.append(
            filler.build(
                a.hi, b.lo, a.map(a.hi), b.map(b.lo), a.map.a, b.map.a, resolution
            )
        )
    k1_pieces.append(_branch_piece(f, inner[-1], resolution))
    k1 = SampledCurve(k1_pieces, f.period, f.c0, t.factors[0].s, F)
    return k1, k2


def extend(
    k1: SampledCurve,
    k2: SampledCurve,
    F: GraphTransform | None = None,
    depth: int = 8,
    resolution: int = 256,
) -> SampledCurve:
    """Union of the box-map images of the seeds, levels 0..depth, plus the
    quadratic-tip closure over the remaining central window."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    if F is None:
        F = k1.transform
    if any(len(p.xs) < 64 for p in k1.pieces + k2.pieces):
        raise ValueError("seed pieces are sampled below 64 points")
    pieces = list(k1.pieces) + list(k2.pieces)
    current = pieces
    for _ in range(depth):
        current = [transform_piece(F, p) for p in current]
        pieces.extend(current)

    c = k1.c_star
    left = max(p.hi for p in pieces if p.hi <= c)
    right = min(p.lo for p in pieces if p.lo >= c)

    # close the unresolved window with the parabola 1 - l*(x-c)^2 through
    # the innermost resolved point (resolved: 1-y still above float noise)
    cands = []
    for p in pieces:
        sel = (1.0 - p.ys) >= TIP_FLOOR
        if sel.any():
            xs, ys = p.xs[sel], p.ys[sel]
            i = int(np.argmin(np.abs(xs - c)))
            cands.append((abs(xs[i] - c), (1.0 - ys[i]) / (xs[i] - c) ** 2))
    l_hat = min(cands)[1]
    xs = np.linspace(left, right, resolution)
    tip = CurvePiece(
        xs, 1.0 - l_hat * (xs - c) ** 2, -2.0 * l_hat * (xs - c),
        depth + 1, "tip",
    )
    pieces.append(tip)
    curve = SampledCurve(pieces, k1.period, c, k1.factor, F)
    curve.meta["window"] = (left, right)
    curve.meta["tip_parabola"] = l_hat
    return curve


def lipschitz_profile(curve: SampledCurve, per_level: bool = True):
    """Per-level Lipschitz constants of the sampled derivative."""
    depth = curve.depth
    lam = []
    for m in range(depth + 1):
        vals = [p.lipschitz() for p in curve.pieces if p.level == m and p.kind != "tip"]
        if vals:
            lam.append(max(vals))
    return lam if per_level else max(lam)


def max_slope_profile(curve: SampledCurve):
    out = []
    for m in range(curve.depth + 1):
        vals = [
            float(np.max(np.abs(p.ds)))
            for p in curve.pieces
            if p.level == m and p.kind != "tip"
        ]
        if vals:
            out.append(max(vals))
    return out


def quadratic_tip(curve: SampledCurve, c_star: float, use_levels: int = 4) -> float:
    """Tip constant from the marked points approaching the critical point.

    The tip limit is taken along the sequence of piece junctions (the
    y_n/z_n endpoints, where the curve meets the quadratic family), using
    the innermost junction of each level whose 1 - value is still above
    the float noise floor; the deepest resolved levels are extrapolated.
    """
    ratios = []
    for m in range(curve.depth + 1):
        best = None
        for p in curve.pieces:
            if p.level != m or p.kind == "tip":
                continue
            for x, y in ((p.lo, float(p.ys[0])), (p.hi, float(p.ys[-1]))):
                if 1.0 - y < TIP_FLOOR:
                    continue
                cand = (abs(x - c_star), (1.0 - y) / (x - c_star) ** 2)
                if best is None or cand < best:
                    best = cand
        if best is not None:
            ratios.append(best[1])
    if not ratios:
        raise NonConvergent("no resolved samples near the critical point")
    tail = ratios[-use_levels:]
    spread = (max(tail) - min(tail)) / abs(tail[-1])
    if spread > 1e-3:
        raise NonConvergent(f"tip ratios spread {spread:.2e} over the last levels: {tail}")
    # Aitken acceleration when the differences allow it, else the mean
    if len(tail) >= 3:
        r0, r1, r2 = tail[-3], tail[-2], tail[-1]
        denom = (r2 - r1) - (r1 - r0)
        if abs(denom) > 1e-3 * abs(r2 - r1):
            return r2 - (r2 - r1) ** 2 / denom
    return float(np.mean(tail))


def boxes(t: Tower, depth: int):
    """B_n = I_2^n x [ytilde_n, 1] for n = 0..depth."""
    out = [((0.0, 1.0), (0.0, 1.0))]
    vprod = 1.0
    for n in range(1, depth + 1):
        vprod *= t.factors[n - 1].s[-1]
        out.append((t.generations[n - 1][2], (1.0 - vprod, 1.0)))
    return out


def marked_points(t: Tower, count: int):
    """p_n: alternating (y_k, u(y_k)) and (z_k, u(z_k)) junction points."""
    c = t.levels[0].c
    pts = []
    for n in range(1, count + 1):
        x = t.y((n + 1) // 2) if n % 2 == 1 else t.z(n // 2)
        pts.append((x, eval_raw(c, x)))
    return pts


def unimodal_check(curve: SampledCurve) -> bool:
    """Sampled values increase left of c* and decrease right of it.

    Near the apex, adjacent samples differ by less than an ulp of 1.0, so
    "strictly" is enforced up to float resolution: a wrong-sign move above
    1e-15 fails, an unresolvable flat step does not.
    """
    xs, ys = curve.grid, curve.values
    order = np.argsort(xs)
    xs, ys = xs[order], ys[order]
    move = np.abs(np.diff(xs)) > 1e-13
    dy = np.diff(ys)[move]
    mid = 0.5 * (xs[1:] + xs[:-1])[move]
    left = mid < curve.c_star
    return bool(np.all(dy[left] > -1e-15) and np.all(dy[~left] < 1e-15))
