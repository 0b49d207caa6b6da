"""Generators for the microstructures the energy scaling is tested on.

All generators return exact lattice fields: every construction below is
rasterized by integer cell counts, so phase fractions and defects computed
from the output are rational numbers with known closed forms whenever the
grid divides the geometry (each generator documents what it needs).

The zoo, roughly in order of sophistication:

* constant fields and laminates (zero relaxed elastic energy when oriented
  along a coordinate axis),
* crossing twins: a coarse laminate in one direction crossed with a sheared
  fine laminate in the other, the shear following the staircase primitive of
  the coarse profile,
* self-similar branching: stripes that split in two and shrink toward the
  top and bottom of the cell, with mirrored refinement inside two horizontal
  bands,
* a zigzag concentration: an explicit sequence with gradients bounded in
  mean square whose one-directional projections stay far from every
  one-directional profile,
* seeded random block partitions, the null model for calibration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import (
    Grid,
    ModifiedIndicators,
    PhaseField,
    from_modified,
    shear_resample,
)

__all__ = [
    "BranchingParams",
    "ZigzagPotential",
    "staircase_shifts",
    "gen_constant",
    "gen_laminate",
    "gen_crossing_twin",
    "gen_branching",
    "branching_bound",
    "plan_branching",
    "gen_counterexample",
    "gen_random_partition",
]


def staircase_shifts(profile: np.ndarray, step: float) -> np.ndarray:
    """Cumulative primitive of a per-row profile, in transverse grid cells.

    Entry j is ``step * sum(profile[anchor:j])`` with the anchor at row
    ``n // 2``, negated sums below the anchor; no periodic wrap-around is
    applied, so the result is the exact primitive of the step function on
    the fundamental domain.
    """
    profile = np.asarray(profile, dtype=float)
    partial = np.concatenate([[0.0], np.cumsum(profile)])
    anchor = profile.shape[0] // 2
    return (partial[:-1] - partial[anchor]) * step


def _check_pm1(profile: np.ndarray, name: str, n: int) -> np.ndarray:
    profile = np.asarray(profile, dtype=float)
    if profile.shape != (n,):
        raise ValueError(f"{name} must have shape ({n},), got {profile.shape}")
    if not np.isin(profile, (-1.0, 1.0)).all():
        idx = int(np.flatnonzero(~np.isin(profile, (-1.0, 1.0)))[0])
        raise ValueError(f"{name}[{idx}] = {profile[idx]} is not +-1")
    return profile


def gen_constant(phase: int, grid: Grid) -> PhaseField:
    """A single phase everywhere."""
    if phase not in (1, 2, 3, 4):
        raise ValueError(f"phase must be 1..4, got {phase!r}")
    return PhaseField(grid, np.full(grid.shape, phase, dtype=np.int64))


def gen_laminate(axis: str, profile: np.ndarray, grid: Grid) -> PhaseField:
    """Stripes normal to one axis: the in-plane indicator follows ``profile``
    and the two out-of-plane ones are slaved so the triple stays admissible
    with zero relaxed elastic energy."""
    if axis == "y1":
        f = _check_pm1(profile, "profile", grid.n1)[:, None]
        chi3 = np.broadcast_to(f, grid.shape)
        chi1 = np.ones(grid.shape)
        chi2 = chi3.copy()
    elif axis == "y2":
        f = _check_pm1(profile, "profile", grid.n2)[None, :]
        chi3 = np.broadcast_to(f, grid.shape)
        chi2 = np.ones(grid.shape)
        chi1 = chi3.copy()
    else:
        raise ValueError(f"axis must be 'y1' or 'y2', got {axis!r}")
    return from_modified(ModifiedIndicators(grid, chi1, chi2, chi3))


def _crossing_arrays(
    f: np.ndarray, g: np.ndarray, n_along: int, n_trans: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Canonical crossing twin with the coarse direction on axis 0.

    Returns (coarse, sheared, product): the coarse profile broadcast along
    axis 1, the transverse profile sheared by the staircase primitive of the
    coarse one, and their product.
    """
    if n_trans % n_along != 0:
        raise ValueError(
            f"transverse resolution {n_trans} must be a multiple of {n_along} "
            "so the staircase shear lands on whole cells"
        )
    step = n_trans // n_along
    shifts = staircase_shifts(f, float(step)).astype(np.int64)
    coarse = np.broadcast_to(f[:, None], (n_along, n_trans)).copy()
    sheared = shear_resample(np.broadcast_to(g[None, :], (n_along, n_trans)), shifts)
    return coarse, sheared, coarse * sheared


def gen_crossing_twin(
    axis: str, f_profile: np.ndarray, g_profile: np.ndarray, grid: Grid
) -> PhaseField:
    """Two twin systems crossed at right angles.

    ``f_profile`` sets the coarse laminate normal to ``axis``; the fine
    laminate ``g_profile`` runs the other way, sheared so its stripes follow
    the zero-elastic-energy direction of the coarse structure.  The shear is
    the exact staircase primitive of ``f_profile``, which requires the
    transverse resolution to be a multiple of the coarse one.
    """
    if axis == "y1":
        f = _check_pm1(f_profile, "f_profile", grid.n1)
        g = _check_pm1(g_profile, "g_profile", grid.n2)
        coarse, sheared, product = _crossing_arrays(f, g, grid.n1, grid.n2)
        chi1, chi2, chi3 = sheared, product, coarse
    elif axis == "y2":
        f = _check_pm1(f_profile, "f_profile", grid.n2)
        g = _check_pm1(g_profile, "g_profile", grid.n1)
        coarse, sheared, product = _crossing_arrays(f, g, grid.n2, grid.n1)
        chi1, chi2, chi3 = product.T, sheared.T, coarse.T
    else:
        raise ValueError(f"axis must be 'y1' or 'y2', got {axis!r}")
    return from_modified(ModifiedIndicators(grid, chi1, chi2, chi3))


# ---------------------------------------------------------------------------
# branching


@dataclass(frozen=True)
class BranchingParams:
    """Geometry of the self-similar refinement.

    mu is the minority-stripe volume fraction, lam the height of the lower
    band, beta the height-decay exponent, N the number of generations, w1
    the coarsest stripe period (the reciprocal of an integer) and eta the
    energy ratio the construction is tuned for.

    Admissibility (every generation wider than tall would break the energy
    bound) is a separate check, :meth:`check_admissible`, because the bound
    formula itself is well defined for any parameters.
    """

    mu: float
    lam: float
    beta: float
    N: int
    w1: float
    eta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.mu < 1.0:
            raise ValueError(f"mu must lie in (0, 1), got {self.mu!r}")
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lam must lie in (0, 1), got {self.lam!r}")
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if not (isinstance(self.N, (int, np.integer)) and self.N >= 1):
            raise ValueError(f"N must be an integer >= 1, got {self.N!r}")
        if not 0.0 < self.w1 <= 1.0:
            raise ValueError(f"w1 must lie in (0, 1], got {self.w1!r}")
        inv = 1.0 / self.w1
        if abs(inv - round(inv)) > 1e-9:
            raise ValueError(f"w1 must be the reciprocal of an integer, got {self.w1!r}")
        if not (self.eta > 0.0 and math.isfinite(self.eta)):
            raise ValueError(f"eta must be positive and finite, got {self.eta!r}")

    def widths(self) -> np.ndarray:
        """Stripe periods w_n = 2^(1-n) w1 for n = 1..N."""
        return self.w1 * 0.5 ** np.arange(self.N)

    def heights(self) -> np.ndarray:
        """Slab heights l_n per half-stack of the upper band; they sum to
        (1 - lam) / 2."""
        decay = 0.5**self.beta
        l1 = 0.5 * (1.0 - self.lam) * (1.0 - decay) / (1.0 - decay**self.N)
        return l1 * decay ** np.arange(self.N)

    @property
    def is_admissible(self) -> bool:
        try:
            self.check_admissible()
        except ValueError:
            return False
        return True

    def check_admissible(self) -> None:
        """Raise ValueError naming the first violated proportion."""
        w = self.widths()
        l = self.heights()
        for n in range(self.N):
            if w[n] > l[n]:
                raise ValueError(
                    f"generation {n + 1} is wider than tall: w={w[n]:.6g} > l={l[n]:.6g}"
                )
        tip = self.w1 * 0.5**self.N
        if tip > 0.5 * self.lam:
            raise ValueError(
                f"finest period {tip:.6g} exceeds half the lower band {0.5 * self.lam:.6g}"
            )


def branching_bound(p: BranchingParams) -> float:
    """Closed-form energy of the branched construction.

    Interface and elastic contributions per generation, plus one crossing
    term for the band boundaries and one for the unrefined tips.  Valid as
    an upper bound for the relaxed energy only when ``p`` is admissible,
    but evaluable for any parameters.
    """
    w = p.widths()
    l = p.heights()
    root = float(np.cbrt(p.eta))
    per_gen = root * (l / w) + (w**2 / l) / root**2
    tips = 0.5**(p.N + 1) * p.w1 / root**2
    return float(per_gen.sum() + root + tips)


def plan_branching(
    eta: float,
    mu: float = 0.25,
    lam: float = 0.25,
    beta: float = 1.5,
    max_grid: int = 2048,
) -> tuple[BranchingParams, Grid]:
    """Choose admissible branching parameters and a grid for a given eta.

    The coarsest period starts at roughly ``eta^(1/3) * (1 - lam)`` and the
    generation count at the largest N with ``2^-N >= eta^(2/3)``; both are
    walked down until the proportions are admissible and the grid that
    resolves every generation exactly fits within ``max_grid``.
    """
    if not (eta > 0.0 and math.isfinite(eta)):
        raise ValueError(f"eta must be positive and finite, got {eta!r}")
    root = float(np.cbrt(eta))
    den_start = max(1, math.ceil(1.0 / (root * (1.0 - lam)) - 1e-9))
    n_start = max(1, math.floor(-math.log2(root**2) + 1e-9))
    for den in range(den_start, den_start + 4096):
        for n_gen in range(n_start, 0, -1):
            stride = den * 2 ** (n_gen - 1)
            kk = min(32, max_grid // stride) // 8 * 8
            if kk < 8:
                continue
            params = BranchingParams(mu=mu, lam=lam, beta=beta, N=n_gen, w1=1.0 / den, eta=eta)
            if not params.is_admissible:
                continue
            g = stride * kk
            if abs(g * lam / 2 - round(g * lam / 2)) > 1e-9:
                raise ValueError(
                    f"grid {g} cannot split the bands evenly for lam={lam!r}; "
                    "use a lam with a small power-of-two denominator"
                )
            return params, Grid(g, g)
    raise ValueError(
        f"no admissible branching geometry for eta={eta!r} fits within "
        f"max_grid={max_grid}; raise the grid cap"
    )


def _branch_pattern(period: int, stripe: int, mu: float, tau: float) -> np.ndarray:
    """One period of a slab cross-section at inward coordinate tau.

    +1 background with two -1 stripes of ``stripe`` cells: one pinned to the
    right edge, one migrating from adjacent at tau=0 to the half-period
    position at tau=1, where the pattern equals two half-period copies of
    its own tau=0 state.
    """
    pattern = np.ones(period)
    start = math.floor((1.0 - mu) * period * (1.0 - 0.5 * tau) + 0.5)
    pattern[start : start + stripe] = -1.0
    pattern[period - stripe :] = -1.0
    return pattern


def _require_integer(value: float, what: str) -> int:
    if abs(value - round(value)) > 1e-9:
        raise ValueError(f"{what} = {value!r} must be an integer")
    return int(round(value))


def gen_branching(p: BranchingParams, grid: Grid) -> PhaseField:
    """Rasterize the branched microstructure exactly on ``grid``.

    Two bands are stacked along the second coordinate: the lower one of
    height lam and the upper one of height 1 - lam.  Each band refines
    symmetrically from its midline outward, stripes halving in period from
    one generation to the next.  Requires the grid to resolve every
    generation: the column count must carry w1 times a power of two, the row
    count the band split, and the finest stripes at least one cell.
    """
    p.check_admissible()
    n1, n2 = grid.shape
    cols_w1 = _require_integer(n1 * p.w1, "n1 * w1 (coarsest period in cells)")
    if cols_w1 % 2 ** (p.N - 1) != 0:
        raise ValueError(
            f"coarsest period {cols_w1} cells must be divisible by 2^(N-1) = {2 ** (p.N - 1)}"
        )
    half_rows = {
        "lower": _require_integer(n2 * p.lam / 2, "n2 * lam / 2 (lower half-band rows)"),
        "upper": _require_integer(n2 * (1 - p.lam) / 2, "n2 * (1-lam) / 2 (upper half-band rows)"),
    }

    heights = p.heights()
    sigma = np.ones(grid.shape)

    for band, rows_half in half_rows.items():
        if band == "lower":
            mid = half_rows["lower"]
            scale = p.lam / (1.0 - p.lam)
        else:
            mid = 2 * half_rows["lower"] + half_rows["upper"]
            scale = 1.0
        # Slab boundaries in rows, measured outward from the band midline.
        half_height = heights.sum() * scale
        bounds = np.concatenate([[0.0], np.cumsum(heights) * scale]) / half_height * rows_half
        bounds = np.rint(bounds).astype(np.int64)
        for n in range(p.N):
            period = cols_w1 >> n
            stripe = int(round(0.5 * p.mu * period))
            if stripe < 1:
                raise ValueError(
                    f"generation {n + 1} stripes need mu * w_n / 2 of at least one cell; "
                    f"period {period} cells resolves none"
                )
            count = int(bounds[n + 1] - bounds[n])
            for r in range(count):
                tau = (r + 0.5) / count
                pattern = np.tile(_branch_pattern(period, stripe, p.mu, tau), n1 // period)
                sigma[:, mid + bounds[n] + r] = pattern
                sigma[:, mid - 1 - bounds[n] - r] = pattern

    rows_lower = 2 * half_rows["lower"]
    lower = slice(0, rows_lower)
    upper = slice(rows_lower, n2)
    chi1 = np.ones(grid.shape)
    chi1[:, lower] = -1.0
    chi2 = -sigma
    chi3 = np.ones(grid.shape)
    chi3[:, lower] = sigma[:, lower]
    chi3[:, upper] = -sigma[:, upper]
    return from_modified(ModifiedIndicators(grid, chi1, chi2, chi3))


# ---------------------------------------------------------------------------
# zigzag concentration


@dataclass(frozen=True)
class ZigzagPotential:
    """Samples of the k-th rescaled zigzag potential and its exact gradient.

    The potential folds a unit triangle wave along characteristics: its slope
    along the second coordinate is +-1 everywhere while the slope along the
    first is exactly 1/k in modulus, yet no one-directional profile comes
    close to the slope field.
    """

    grid: Grid
    k: int
    values: np.ndarray
    grad_s: np.ndarray
    grad_t: np.ndarray


def _wrap(x: np.ndarray) -> np.ndarray:
    """Reduce to [-1/2, 1/2); exact-half inputs follow round-half-to-even."""
    return x - np.round(x)


def _slope_sign(x: np.ndarray) -> np.ndarray:
    """+1 where x >= 0 else -1, as floats."""
    return np.where(x >= 0.0, 1.0, -1.0)


def gen_counterexample(k: int, grid: Grid) -> tuple[ModifiedIndicators, ZigzagPotential]:
    """The k-th member of the zigzag sequence together with its potential.

    The second indicator-slot field equals the t-slope of the potential, the
    in-plane one is a symmetric two-stripe profile in s, and the third slot
    their product, so the triple is admissible.  Requires n2 >= 8 k^2 to
    resolve the fast oscillation.
    """
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    if grid.n2 < 8 * k * k:
        raise ValueError(
            f"n2 = {grid.n2} cannot resolve the fast direction; need n2 >= 8 k^2 = {8 * k * k}"
        )
    s = grid.axis_coords(0)[:, None]
    t = grid.axis_coords(1)[None, :]
    ks_wrapped = _wrap(k * s)
    arg = k * k * t + np.abs(ks_wrapped)
    slope = -_slope_sign(_wrap(arg))

    values = -np.abs(_wrap(arg)) / k**2
    grad_t = np.broadcast_to(slope, grid.shape).copy()
    grad_s = _slope_sign(ks_wrapped) * slope / k

    chi1 = grad_t.copy()
    chi3 = np.broadcast_to(_slope_sign(s), grid.shape).copy()
    chi2 = chi3 * chi1
    m = ModifiedIndicators(grid, chi1, chi2, chi3)
    pot = ZigzagPotential(
        grid=grid,
        k=int(k),
        values=np.broadcast_to(values, grid.shape).copy(),
        grad_s=np.broadcast_to(grad_s, grid.shape).copy(),
        grad_t=grad_t,
    )
    return m, pot


def gen_random_partition(seed: int, grid: Grid, feature_scale: float = 0.125) -> PhaseField:
    """Uniform random phase labels on square-ish blocks of the given scale.

    Block edges are the divisors of each grid dimension closest to
    ``feature_scale`` in domain units, so the partition tiles exactly; the
    same seed always yields the same field.
    """
    if not 0.0 < feature_scale <= 1.0:
        raise ValueError(f"feature_scale must lie in (0, 1], got {feature_scale!r}")

    def block(n: int) -> int:
        target = feature_scale * n
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        return min(divisors, key=lambda d: (abs(d - target), d))

    b1, b2 = block(grid.n1), block(grid.n2)
    rng = np.random.default_rng(seed)
    coarse = rng.integers(1, 5, size=(grid.n1 // b1, grid.n2 // b2))
    labels = np.repeat(np.repeat(coarse, b1, axis=0), b2, axis=1)
    return PhaseField(grid, labels.astype(np.int64))
