"""Elastic and interfacial energies of a phase arrangement.

Two elastic energies appear.  The pointwise one measures the distance of a
given symmetric strain field from the well selected at each cell.  The
relaxed one minimizes over all compatible strains, which in Fourier space
decouples into independent small least-squares problems; their closed-form
solution reduces to a two-term multiplier acting on the indicator
coefficients.  An independent brute-force oracle for the same minimum lives
in :mod:`fourwell.spectral` so the algebra here never checks itself.

The total energy weights interfacial area by ``eta^(1/3)`` and relaxed
elastic energy by ``eta^(-2/3)``; cube roots are taken with ``np.cbrt`` so
scaling ``eta`` by 8 shifts the two weights by exact binary factors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .fields import (
    Grid,
    ModifiedIndicators,
    PhaseField,
    ScalarField,
    to_modified,
    total_variation,
)
from .spectral import _deriv_freqs, _freqs, inv_gradient, spectral_derivative

__all__ = [
    "DEFAULT_DIAG",
    "SymStrainField",
    "EnergyBreakdown",
    "ResidualDecomposition",
    "strain_from_displacement",
    "elastic_energy_pointwise",
    "relaxed_elastic_energy",
    "full_multiplier_energy",
    "surface_energy",
    "total_energy",
    "compute_residuals",
    "interpolation_gap",
]

#: Well diagonal (d1, d2, d3) at the reference strain anisotropy.
DEFAULT_DIAG: tuple[float, float, float] = (-1.0 / 3.0, 24.0, -1.0 / 3.0)


@dataclass(frozen=True)
class SymStrainField:
    """Six independent components of a symmetric 3x3 strain on a grid."""

    grid: Grid
    e11: np.ndarray
    e22: np.ndarray
    e33: np.ndarray
    e12: np.ndarray
    e13: np.ndarray
    e23: np.ndarray

    def __post_init__(self) -> None:
        for name in ("e11", "e22", "e33", "e12", "e13", "e23"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if arr.shape != self.grid.shape:
                raise ValueError(
                    f"SymStrainField.{name} has shape {arr.shape}, expected {self.grid.shape}"
                )


@dataclass(frozen=True)
class EnergyBreakdown:
    """Weighted energy tally: total = eta^(1/3) surface + eta^(-2/3) elastic."""

    eta: float
    elastic: float
    surface: float
    total: float

    def as_dict(self) -> dict[str, float]:
        return {
            "elastic": self.elastic,
            "eta": self.eta,
            "surface": self.surface,
            "total": self.total,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def strain_from_displacement(
    u1: ScalarField, u2: ScalarField, u3: ScalarField
) -> SymStrainField:
    """Symmetrized gradient of a periodic displacement constant in the third
    direction."""
    if not (u1.grid == u2.grid == u3.grid):
        raise ValueError("displacement components live on different grids")
    d1u1 = spectral_derivative(u1, 0).values
    d2u1 = spectral_derivative(u1, 1).values
    d1u2 = spectral_derivative(u2, 0).values
    d2u2 = spectral_derivative(u2, 1).values
    d1u3 = spectral_derivative(u3, 0).values
    d2u3 = spectral_derivative(u3, 1).values
    zero = np.zeros(u1.grid.shape)
    return SymStrainField(
        u1.grid,
        e11=d1u1,
        e22=d2u2,
        e33=zero,
        e12=0.5 * (d1u2 + d2u1),
        e13=0.5 * d1u3,
        e23=0.5 * d2u3,
    )


def elastic_energy_pointwise(
    e: SymStrainField,
    m: ModifiedIndicators,
    diag: tuple[float, float, float] = DEFAULT_DIAG,
) -> float:
    """Mean squared distance of the strain from the local well.

    Off-diagonal misfits count twice, matching the Frobenius norm of the
    full symmetric matrix.
    """
    if e.grid != m.grid:
        raise ValueError(f"strain grid {e.grid.shape} != indicator grid {m.grid.shape}")
    d1, d2, d3 = diag
    sq = (
        (e.e11 - d1) ** 2
        + (e.e22 - d2) ** 2
        + (e.e33 - d3) ** 2
        + 2.0 * (e.e12 - m.chi3t) ** 2
        + 2.0 * (e.e13 - m.chi2t) ** 2
        + 2.0 * (e.e23 - m.chi1t) ** 2
    )
    return float(sq.mean())


RawTriple = tuple[ScalarField, ScalarField, ScalarField]


def _triple_arrays(m: ModifiedIndicators | RawTriple) -> tuple[Grid, np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(m, ModifiedIndicators):
        return m.grid, m.chi1t, m.chi2t, m.chi3t
    f1, f2, f3 = m
    if not (f1.grid == f2.grid == f3.grid):
        raise ValueError("the three fields live on different grids")
    return f1.grid, f1.values, f2.values, f3.values


def relaxed_elastic_energy(m: ModifiedIndicators | RawTriple) -> float:
    """Minimal elastic energy over all compatible strains.

    Works on admissible indicators or any raw triple of fields occupying the
    off-diagonal slots.  The common well diagonal is constant in space, hence
    invisible to every nonzero frequency and dropped.  The closed form per
    mode k /= 0 is

        2 |k|^-4 ( |k|^2 |k2 c2 - k1 c1|^2  +  2 k1^2 k2^2 |c3|^2 )

    which is invariant under rescaling k, so integer frequencies suffice.
    """
    grid, a1, a2, a3 = _triple_arrays(m)
    n = grid.n1 * grid.n2
    c1 = np.fft.fft2(a1) / n
    c2 = np.fft.fft2(a2) / n
    c3 = np.fft.fft2(a3) / n
    k1, k2 = _freqs(grid)
    ksq = (k1**2 + k2**2).astype(float)
    ksq[0, 0] = 1.0
    shear = np.abs(k2 * c2 - k1 * c1) ** 2
    cross = 2.0 * (k1**2) * (k2**2) * np.abs(c3) ** 2
    per_mode = 2.0 * (ksq * shear + cross) / ksq**2
    per_mode[0, 0] = 0.0
    return float(per_mode.sum())


def full_multiplier_energy(u0: SymStrainField) -> float:
    """Distance of a symmetric target field from all compatible strains.

    Evaluates, per nonzero mode with in-plane frequency k embedded as
    (k1, k2, 0),

        |U|_F^2 - 2 |U k|^2 / |k|^2 + |k . U k|^2 / |k|^4 .

    Agrees with :func:`relaxed_elastic_energy` when the target carries
    indicator fields off-diagonal and a constant diagonal.
    """
    grid = u0.grid
    n = grid.n1 * grid.n2
    comps = {
        name: np.fft.fft2(getattr(u0, name)) / n
        for name in ("e11", "e22", "e33", "e12", "e13", "e23")
    }
    k1, k2 = _freqs(grid)
    k1 = k1.astype(float)
    k2 = k2.astype(float)
    ksq = k1**2 + k2**2
    ksq0 = ksq.copy()
    ksq0[0, 0] = 1.0

    frob = (
        np.abs(comps["e11"]) ** 2
        + np.abs(comps["e22"]) ** 2
        + np.abs(comps["e33"]) ** 2
        + 2.0 * np.abs(comps["e12"]) ** 2
        + 2.0 * np.abs(comps["e13"]) ** 2
        + 2.0 * np.abs(comps["e23"]) ** 2
    )
    uk1 = comps["e11"] * k1 + comps["e12"] * k2
    uk2 = comps["e12"] * k1 + comps["e22"] * k2
    uk3 = comps["e13"] * k1 + comps["e23"] * k2
    uk_sq = np.abs(uk1) ** 2 + np.abs(uk2) ** 2 + np.abs(uk3) ** 2
    kuk = k1 * uk1 + k2 * uk2

    per_mode = frob - 2.0 * uk_sq / ksq0 + np.abs(kuk) ** 2 / ksq0**2
    per_mode[0, 0] = 0.0
    return float(per_mode.sum())


def surface_energy(p: PhaseField) -> float:
    """Total interfacial perimeter, each interface counted from both sides."""
    return sum(
        total_variation(ScalarField(p.grid, (p.labels == phase).astype(float)))
        for phase in (1, 2, 3, 4)
    )


def total_energy(
    p: PhaseField,
    eta: float,
    e: SymStrainField | None = None,
    diag: tuple[float, float, float] = DEFAULT_DIAG,
) -> EnergyBreakdown:
    """Weighted sum of surface and elastic parts.

    Without an explicit strain the elastic part is the relaxed minimum; with
    one it is the pointwise misfit against ``diag`` and the cell's well.
    """
    if not (eta > 0.0 and np.isfinite(eta)):
        raise ValueError(f"eta must be positive and finite, got {eta!r}")
    m = to_modified(p)
    elastic = (
        relaxed_elastic_energy(m) if e is None else elastic_energy_pointwise(e, m, diag)
    )
    surface = surface_energy(p)
    root = float(np.cbrt(eta))
    total = root * surface + elastic / root**2
    return EnergyBreakdown(eta=eta, elastic=elastic, surface=surface, total=total)


@dataclass(frozen=True)
class ResidualDecomposition:
    """Per-cell misfits split by strain slot, plus one compatibility check.

    rho11 and rho22 carry half the diagonal misfits of the in-plane block in
    crossed order, rho12 the in-plane shear misfit, rho13 and rho23 the two
    out-of-plane shear misfits.  With these weights the second mixed
    derivative of the in-plane indicator equals a divergence-form combination
    of the first three fields whenever the strain is a symmetrized gradient;
    ``identity_residual`` measures that combination in the second-order
    negative norm.
    """

    grid: Grid
    rho11: np.ndarray
    rho12: np.ndarray
    rho22: np.ndarray
    rho13: np.ndarray
    rho23: np.ndarray
    identity_residual: float

    def sum_sq(self) -> float:
        """Mean of the squared residual fields; bounded by the pointwise energy."""
        total = (
            self.rho11**2 + self.rho12**2 + self.rho22**2 + self.rho13**2 + self.rho23**2
        )
        return float(total.mean())


def compute_residuals(
    e: SymStrainField,
    m: ModifiedIndicators,
    diag: tuple[float, float, float] = DEFAULT_DIAG,
) -> ResidualDecomposition:
    """Split the pointwise misfit into the fields entering the compatibility
    identity."""
    if e.grid != m.grid:
        raise ValueError(f"strain grid {e.grid.shape} != indicator grid {m.grid.shape}")
    grid = e.grid
    d1, d2, d3 = diag
    rho11 = 0.5 * (e.e22 - d2)
    rho22 = 0.5 * (e.e11 - d1)
    rho12 = m.chi3t - e.e12
    rho13 = m.chi2t - e.e13
    rho23 = m.chi1t - e.e23

    n = grid.n1 * grid.n2
    c3 = np.fft.fft2(m.chi3t) / n
    r11 = np.fft.fft2(rho11) / n
    r12 = np.fft.fft2(rho12) / n
    r22 = np.fft.fft2(rho22) / n
    k1d, k2d = _deriv_freqs(grid)
    combo = (
        -4.0
        * np.pi**2
        * (k1d * k2d * c3 - k1d**2 * r11 - k1d * k2d * r12 - k2d**2 * r22)
    )
    k1, k2 = _freqs(grid)
    ksq = (k1**2 + k2**2).astype(float)
    ksq[0, 0] = 1.0
    weighted = np.abs(combo) ** 2 / ksq**2
    weighted[0, 0] = 0.0
    residual = float(np.sqrt(weighted.sum()))

    return ResidualDecomposition(
        grid=grid,
        rho11=rho11,
        rho12=rho12,
        rho22=rho22,
        rho13=rho13,
        rho23=rho23,
        identity_residual=residual,
    )


def _gradient_l1(f: ScalarField) -> float:
    """Anisotropic total gradient mass: one-cell jumps weighted by face length."""
    v = f.values
    n1, n2 = f.grid.shape
    d1 = np.abs(np.roll(v, -1, axis=0) - v).sum() / n2
    d2 = np.abs(np.roll(v, -1, axis=1) - v).sum() / n1
    return float(d1 + d2)


def interpolation_gap(f: ScalarField, eta: float) -> tuple[float, float, float]:
    """Compare the squared size of ``f`` against its weighted interpolants.

    Returns ``(lhs, rhs, ratio)`` with ``lhs`` the mean square of ``f`` and
    ``rhs = eta^(1/3) * |gradient| * sup + eta^(-2/3) * |potential|^2`` built
    from the total gradient mass and the mean-square primitive of ``f``.
    The identically zero field yields ``(0.0, 0.0, 0.0)``; otherwise ``f``
    must have zero mean.
    """
    if not (eta > 0.0 and np.isfinite(eta)):
        raise ValueError(f"eta must be positive and finite, got {eta!r}")
    if not f.values.any():
        return (0.0, 0.0, 0.0)
    lhs = float(np.mean(f.values**2))
    grad = _gradient_l1(f)
    sup = float(np.abs(f.values).max())
    potential_sq = float(np.mean(inv_gradient(f).values ** 2))
    root = float(np.cbrt(eta))
    rhs = root * grad * sup + potential_sq / root**2
    return (lhs, rhs, lhs / rhs)
