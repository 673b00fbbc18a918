"""Nested interval towers generated by scaling data.

Each level m of a scaling sequence carries a critical point (and an eps
for the perturbed tripling variant); the induced affine maps place the
next generation of intervals inside the current central interval.  The
central rescalings are orientation reversing, so endpoint labels follow
parity automatically: with H_n the n-fold composition, y_n = H_n(1) and
z_n = H_n(0) reproduce the min/max alternation of the labeled endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadratic import QuadraticUnimodal, eval_raw, orbit
from .scaling import Period, ScalingFactor, scaling_eps, scaling_from_critical


# |I_2^12| ~ 1e-12 at the tripling fixed point, the floor of useful binary64
DEFAULT_DEPTH = 12


class InvalidFactor(ValueError):
    def __init__(self, depth, factor):
        self.depth = depth
        self.factor = factor
        super().__init__(f"scaling factor leaves the simplex at depth {depth}: {factor.s}")


@dataclass(frozen=True)
class Affine:
    """x -> a*x + b with exact composition and inversion."""

    a: float
    b: float

    def __call__(self, x):
        return self.a * x + self.b

    def inverse(self) -> "Affine":
        return Affine(1.0 / self.a, -self.b / self.a)

    def __matmul__(self, other: "Affine") -> "Affine":
        # (self @ other)(x) == self(other(x))
        return Affine(self.a * other.a, self.a * other.b + self.b)

    @staticmethod
    def identity() -> "Affine":
        return Affine(1.0, 0.0)

    @staticmethod
    def through(x0, v0, x1, v1) -> "Affine":
        a = (v1 - v0) / (x1 - x0)
        return Affine(a, v0 - a * x0)


@dataclass(frozen=True)
class LevelData:
    c: float
    eps: float = 1.0


@dataclass(frozen=True)
class ScalingSequence:
    """A rule assigning level data (critical point, eps) to each depth.

    length is None for rules defined at every depth; symbol-driven data
    built from a finite word has finite length.
    """

    period: Period
    kind: str
    _fn: object
    length: int | None = None

    def level(self, m: int) -> LevelData:
        if m < 1:
            raise ValueError("levels are 1-indexed")
        if self.length is not None and m > self.length:
            raise ValueError(f"sequence of length {self.length} has no level {m}")
        return self._fn(m)

    def levels(self, n: int) -> list:
        return [self.level(m) for m in range(1, n + 1)]

    def shift(self, k: int = 1) -> "ScalingSequence":
        fn = self._fn
        return ScalingSequence(
            self.period,
            self.kind,
            lambda m, _fn=fn, _k=k: _fn(m + _k),
            None if self.length is None else self.length - k,
        )

    def factor(self, m: int) -> ScalingFactor:
        lv = self.level(m)
        if lv.eps != 1.0:
            return scaling_eps(lv.c, lv.eps)
        return scaling_from_critical(self.period, lv.c)

    @staticmethod
    def stationary(period: Period, c: float) -> "ScalingSequence":
        return ScalingSequence(period, "stationary", lambda m: LevelData(c, 1.0))

    @staticmethod
    def eps_stationary(c: float, eps: float) -> "ScalingSequence":
        return ScalingSequence(
            Period.THREE, "eps-stationary", lambda m: LevelData(c, eps)
        )

    @staticmethod
    def from_levels(period: Period, levels, kind: str) -> "ScalingSequence":
        levels = tuple(levels)
        return ScalingSequence(
            period, kind, lambda m, _lv=levels: _lv[m - 1], len(levels)
        )

    @staticmethod
    def from_factor(factor: ScalingFactor) -> "ScalingSequence":
        """Stationary rule from a factor that remembers its critical point."""
        if factor.c is None:
            raise ValueError("factor carries no generating critical point")
        if factor.eps != 1.0:
            return ScalingSequence.eps_stationary(factor.c, factor.eps)
        return ScalingSequence.stationary(factor.period, factor.c)


def level_anchor(period: Period, lv: LevelData) -> float:
    """Left endpoint of the local central interval: u(0) or u^3(0)."""
    o = orbit(QuadraticUnimodal(lv.c), 3)
    return o[1] if period is Period.THREE else o[3]


def local_intervals(period: Period, lv: LevelData, factor: ScalingFactor):
    """Unit-square positions of the next-generation intervals."""
    s = factor.s
    o = orbit(QuadraticUnimodal(lv.c), 2)
    if period is Period.THREE:
        a = o[1]
        return {1: (0.0, s[0]), 2: (a, a + s[1]), 3: (1.0 - s[2], 1.0)}
    o3 = eval_raw(lv.c, o[2])
    return {
        1: (0.0, s[0]),
        2: (o3, o3 + s[1]),
        3: (o[1], o[1] + s[2]),
        4: (o[2] - s[3], o[2]),
        5: (1.0 - s[4], 1.0),
    }


@dataclass
class Tower:
    period: Period
    depth: int
    seq: ScalingSequence
    levels: list
    factors: list
    rescale: list       # h_m for m = 1..depth  (index m-1)
    chains: list        # H_0 .. H_depth        (index m)
    generations: list   # n = 1..depth (index n-1): {family: (lo, hi)}
    local_lengths: list # n = 1..depth (index n-1): {family: unit-square length}
    labels: dict

    @property
    def critical_enclosure(self):
        return self.generations[-1][2]

    def size(self, n: int, i: int) -> float:
        # slope-product form: exact relative precision at any depth, unlike
        # differencing the absolute endpoints
        return abs(self.chains[n - 1].a) * self.local_lengths[n - 1][i]

    @property
    def families(self):
        return (1, 2, 3) if self.period is Period.THREE else (1, 2, 3, 4, 5)

    def y(self, n: int) -> float:
        return self.labels["y"][n]

    def z(self, n: int) -> float:
        return self.labels["z"][n]


def build_tower(seq: ScalingSequence, depth: int) -> Tower:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    period = seq.period
    levels = seq.levels(depth)
    factors = []
    for m, lv in enumerate(levels, start=1):
        f = seq.factor(m)
        if not f.is_valid:
            raise InvalidFactor(m, f)
        factors.append(f)

    rescale = []
    chains = [Affine.identity()]
    for m, (lv, f) in enumerate(zip(levels, factors), start=1):
        a = level_anchor(period, lv)
        h = Affine(-f.s[1], a + f.s[1])  # t -> a + s2*(1-t), orientation reversing
        rescale.append(h)
        chains.append(chains[-1] @ h)

    generations = []
    local_lengths = []
    for n, (lv, f) in enumerate(zip(levels, factors), start=1):
        H = chains[n - 1]
        gen = {}
        loc = {}
        for i, (lo, hi) in local_intervals(period, lv, f).items():
            p, q = H(lo), H(hi)
            gen[i] = (p, q) if p <= q else (q, p)
            loc[i] = hi - lo
        generations.append(gen)
        local_lengths.append(loc)

    labels = {
        "y": [H(1.0) for H in chains],
        "z": [H(0.0) for H in chains],
    }
    if period is Period.THREE:
        labels["x"] = [None] + [
            chains[n - 1](factors[n - 1].s[0]) for n in range(1, depth + 1)
        ]
        labels["w"] = [None] + [
            chains[n - 1](1.0 - factors[n - 1].s[2]) for n in range(1, depth + 1)
        ]
    else:
        labels["a"] = [None] + [
            chains[n - 1](factors[n - 1].s[0]) for n in range(1, depth + 1)
        ]
        labels["h"] = [None] + [
            chains[n - 1](1.0 - factors[n - 1].s[4]) for n in range(1, depth + 1)
        ]
        # d/f mark the image of the local lower endpoint, e/g the upper;
        # whether that lands at the min or max side follows the chain's
        # orientation, so the min/max parity alternation emerges untracked
        for name, fam, local_t in (("d", 3, 0), ("e", 3, 1), ("f", 4, 0), ("g", 4, 1)):
            vals = [None]
            for n in range(1, depth + 1):
                lv, f = levels[n - 1], factors[n - 1]
                lo_loc, hi_loc = local_intervals(period, lv, f)[fam]
                t_val = lo_loc if local_t == 0 else hi_loc
                vals.append(chains[n - 1](t_val))
            labels[name] = vals

    return Tower(
        period, depth, seq, levels, factors, rescale, chains,
        generations, local_lengths, labels,
    )


def verify_proper(seq: ScalingSequence, depth: int):
    """(margin, decay_ok): distance to the simplex boundary over the first
    `depth` factors, and the geometric-decay certificate |I_j^n| <= (1-margin)^n."""
    t = build_tower(seq, depth)
    margin = min(f.simplex_margin for f in t.factors)
    decay_ok = margin > 0.0
    for n in range(1, depth + 1):
        bound = (1.0 - margin) ** n
        for i in t.families:
            if t.size(n, i) > bound:
                decay_ok = False
    return margin, decay_ok


@dataclass(frozen=True)
class RatioReport:
    period: Period
    child_over_center: dict   # i -> array over n of |I_i^{n+1}| / |I_2^n|
    child_over_parent: dict   # i -> array over n of |I_i^{n+1}| / |I_i^n|
    factor: tuple
    max_deviation: float
    constant: bool


def ratio_report(t: Tower, tol: float = 1e-12) -> RatioReport:
    """Generation-ratio table; meaningful for stationary data, where every
    listed ratio equals the generating factor component."""
    if t.depth < 2:
        raise ValueError("need depth >= 2 for ratios")
    s = t.factors[0].s
    over_center = {}
    over_parent = {}
    dev = 0.0
    for i in t.families:
        oc = np.array(
            [t.size(n + 1, i) / t.size(n, 2) for n in range(1, t.depth)]
        )
        op = np.array(
            [t.size(n + 1, i) / t.size(n, i) for n in range(1, t.depth)]
        )
        over_center[i] = oc
        over_parent[i] = op
        dev = max(dev, float(np.max(np.abs(oc - s[i - 1]))))
        dev = max(dev, float(np.max(np.abs(op - s[1]))))
    return RatioReport(t.period, over_center, over_parent, s, dev, dev <= tol)


@dataclass(frozen=True)
class HorBoundReport:
    rho: float
    satisfied: bool
    ratios: tuple
    resolved_depth: int


def hor_bound(t: Tower, u: QuadraticUnimodal | None = None) -> HorBoundReport:
    """Bounded-geometry certificate |I-hat_2^n| / |I_2^n|^2 within [1/rho, rho].

    I-hat_2^n = [u(y_n), 1] is the image of the central interval; rho is the
    smallest power of two enclosing every ratio at this depth.  Levels where
    y_n - c falls below float resolution are excluded (the differencing
    noise would swamp the ratio there).
    """
    if u is None:
        u = QuadraticUnimodal(t.levels[0].c)
    ratios = []
    for n in range(1, t.depth + 1):
        yn = t.y(n)
        if abs(yn - u.c) < 1e-14:
            break
        # 1 - u(y_n) written without the cancellation of 1 - (1 - t^2)
        rel = (yn - u.c) / (1.0 - u.c)
        num = rel * rel
        den = t.size(n, 2) ** 2
        ratios.append(num / den)
    ratios = tuple(ratios)
    if not ratios or min(ratios) <= 0.0:
        return HorBoundReport(math.inf, False, ratios, len(ratios))
    need = max(max(ratios), 1.0 / min(ratios))
    k = max(0, math.ceil(math.log2(need)))
    return HorBoundReport(float(2**k), True, ratios, len(ratios))


def cantor_dimension(f: ScalingFactor, tol: float = 1e-12) -> float:
    """Moran similarity dimension: the unique d with sum_i s_i^d = 1."""
    s = np.asarray(f.s, dtype=float)
    if np.any(s <= 0.0) or np.any(s >= 1.0):
        raise ValueError(f"need every component in (0, 1), got {f.s}")
    if float(np.sum(s)) > 1.0 + 1e-12:
        raise ValueError("component sum exceeds 1; no dimension in (0, 1]")

    def g(d):
        return float(np.sum(s**d)) - 1.0

    lo, hi = 1e-9, 1.0
    if g(hi) >= 0.0:
        return 1.0  # boundary case: the components tile the interval
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
