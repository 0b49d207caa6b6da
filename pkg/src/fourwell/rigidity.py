"""Quantitative rigidity: how close a microstructure is to a crossing twin.

The in-plane indicator of a low-energy state is nearly one-directional; the
out-of-plane pair then nearly follows a single transverse profile carried
along the sheared characteristics of the outer one.  The extractors below
recover those profiles from any admissible field and report the defects,
which the energy controls from below.  Everything here is read-only
diagnostics: no generator imports this module.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from numbers import Real
from typing import Sequence

import numpy as np

from .energy import EnergyBreakdown, total_energy
from .fields import (
    Grid,
    ModifiedIndicators,
    PhaseField,
    ScalarField,
    VectorField,
    shear_resample,
    to_modified,
    volume_fractions,
)
from .microstructures import staircase_shifts
from .spectral import (
    helmholtz_potential,
    neg_sobolev_norm,
    spectral_derivative,
)

__all__ = [
    "OuterProfile",
    "InnerProfile",
    "RigidityReport",
    "extract_outer",
    "extract_inner",
    "wave_decompose",
    "incompatibility_defect",
    "uncorrelatedness_gap",
    "characteristic_residual",
    "rigidity_report",
]


@dataclass(frozen=True)
class OuterProfile:
    """Best one-directional +-1 approximation of the in-plane indicator.

    f holds the sign profile along ``axis``, defect_l1 the mean absolute
    deviation from it, and F the staircase primitive of f in transverse
    grid cells (zero at the central row, no wrap), which is the shear the
    inner structure is expected to follow.
    """

    axis: str
    f: np.ndarray
    defect_l1: float
    F: np.ndarray


@dataclass(frozen=True)
class InnerProfile:
    """Transverse profile of the out-of-plane pair after undoing the shear.

    g is the sheared-frame average of the first out-of-plane field,
    defect_l2 the mean *squared* deviation from it, and defect_chi2 the
    root-mean-square misfit of the second field against the slaved product
    profile."""

    g: np.ndarray
    defect_l2: float
    defect_chi2: float


def extract_outer(m: ModifiedIndicators) -> OuterProfile:
    """Column-sign profile of the in-plane indicator, on the better axis.

    Both axes are tried; the one with the smaller mean absolute defect wins,
    the first axis on ties.  Sign ties within a column resolve to +1.
    """
    candidates = []
    for axis in ("y1", "y2"):
        if axis == "y1":
            means = m.chi3t.mean(axis=1)
            f = np.where(means >= 0.0, 1.0, -1.0)
            defect = float(np.abs(m.chi3t - f[:, None]).mean())
            step = m.grid.n2 / m.grid.n1
        else:
            means = m.chi3t.mean(axis=0)
            f = np.where(means >= 0.0, 1.0, -1.0)
            defect = float(np.abs(m.chi3t - f[None, :]).mean())
            step = m.grid.n1 / m.grid.n2
        candidates.append(OuterProfile(axis, f, defect, staircase_shifts(f, step)))
    first, second = candidates
    return second if second.defect_l1 < first.defect_l1 else first


def _canonical_pair(
    m: ModifiedIndicators, outer: OuterProfile
) -> tuple[np.ndarray, np.ndarray]:
    """The (sheared, slaved-product) field pair with the outer axis on axis 0."""
    if outer.axis == "y1":
        return m.chi1t, m.chi2t
    return m.chi2t.T, m.chi1t.T


def _integer_shifts(outer: OuterProfile) -> np.ndarray:
    rounded = np.rint(outer.F)
    if not np.allclose(outer.F, rounded, atol=1e-9):
        worst = int(np.argmax(np.abs(outer.F - rounded)))
        raise ValueError(
            f"shear profile is not grid-aligned: F[{worst}] = {outer.F[worst]!r} "
            "is not a whole number of cells"
        )
    return rounded.astype(np.int64)


def extract_inner(m: ModifiedIndicators, outer: OuterProfile) -> InnerProfile:
    """Average the out-of-plane pair along the sheared characteristics.

    Undoes the staircase shear recorded in ``outer`` (which must land on
    whole cells), averages the first out-of-plane field over the outer
    direction, and measures both residuals.
    """
    shifts = _integer_shifts(outer)
    primary, product = _canonical_pair(m, outer)
    pulled = shear_resample(primary, -shifts)
    g = pulled.mean(axis=0)
    defect_l2 = float(np.mean((pulled - g[None, :]) ** 2))
    pulled_product = shear_resample(product, -shifts)
    misfit = pulled_product - outer.f[:, None] * g[None, :]
    defect_chi2 = float(np.sqrt(np.mean(misfit**2)))
    return InnerProfile(g=g, defect_l2=defect_l2, defect_chi2=defect_chi2)


def wave_decompose(f: ScalarField) -> tuple[np.ndarray, np.ndarray, float]:
    """Split a field into two one-directional waves plus a small remainder.

    Returns per-axis profiles ``(g1, g2)`` and the mean absolute remainder.
    Each profile is the average over the other direction with half the
    global mean removed, so the remainder equals the average over all offset
    pairs of the double difference of ``f`` and is bounded by four times the
    worst mixed-difference mass.
    """
    v = f.values
    half_mean = 0.5 * float(v.mean())
    g1 = v.mean(axis=1) - half_mean
    g2 = v.mean(axis=0) - half_mean
    residual = float(np.abs(v - g1[:, None] - g2[None, :]).mean())
    return g1, g2, residual


def incompatibility_defect(theta: Sequence) -> tuple:
    """Pairwise-product gaps of the phase fractions.

    Returns ``(|t1 t2 - t3 t4|, |t1 t4 - t2 t3|)``: the first vanishes for
    every crossing twin built on the first axis, the second for the second
    axis.  Exact fractions in give exact fractions out.
    """
    if len(theta) != 4:
        raise ValueError(f"need exactly four phase fractions, got {len(theta)}")
    for i, t in enumerate(theta, start=1):
        if not isinstance(t, Real):
            raise ValueError(f"theta{i} = {t!r} is not a number")
        if t < 0:
            raise ValueError(f"theta{i} = {t} is negative")
    t1, t2, t3, t4 = theta
    total = t1 + t2 + t3 + t4
    if abs(float(total) - 1.0) > 1e-9:
        raise ValueError(f"phase fractions sum to {float(total)!r}, not 1")
    return (abs(t1 * t2 - t3 * t4), abs(t1 * t4 - t2 * t3))


def uncorrelatedness_gap(f: ScalarField, g: ScalarField) -> float:
    """Covariance ``<fg> - <f><g>``; zero when the two factors decouple."""
    if f.grid != g.grid:
        raise ValueError(f"grids differ: {f.grid.shape} vs {g.grid.shape}")
    return float((f.values * g.values).mean() - f.values.mean() * g.values.mean())


def characteristic_residual(u: ScalarField, outer: OuterProfile) -> float:
    """Mean-square failure of ``u`` to ride the sheared characteristics.

    Measures the derivative along the outer axis minus the outer sign times
    the transverse derivative; any function constant along the (unit-slope,
    sign f) characteristic field nulls it.
    """
    d1 = spectral_derivative(u, 0).values
    d2 = spectral_derivative(u, 1).values
    if outer.axis == "y1":
        resid = d1 - outer.f[:, None] * d2
    else:
        resid = d2 - outer.f[None, :] * d1
    return float(np.sqrt(np.mean(resid**2)))


@dataclass(frozen=True)
class RigidityReport:
    """Everything the twin-likeness of one field boils down to."""

    eta: float
    energy: EnergyBreakdown
    theta: tuple[float, float, float, float]
    outer: OuterProfile
    inner: InnerProfile
    d14: float
    d12: float
    char_residual: float
    weak_defect: float
    diagnostics: dict[str, float | None]

    def as_dict(self) -> dict:
        return {
            "char_residual": self.char_residual,
            "d12": self.d12,
            "d14": self.d14,
            "diagnostics": self.diagnostics,
            "energy": self.energy.as_dict(),
            "eta": self.eta,
            "inner": {
                "defect_chi2": self.inner.defect_chi2,
                "defect_l2": self.inner.defect_l2,
                "g": [float(x) for x in self.inner.g],
            },
            "outer": {
                "F": [float(x) for x in self.outer.F],
                "axis": self.outer.axis,
                "defect_l1": self.outer.defect_l1,
                "f": [int(x) for x in self.outer.f],
            },
            "theta": list(self.theta),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _log10_or_none(value: float) -> float | None:
    return math.log10(value) if value > 0.0 else None


def _weak_defect(m: ModifiedIndicators, outer: OuterProfile, inner: InnerProfile) -> float:
    """Negative-norm distance of the out-of-plane pair from its twin template.

    The template is the spectral transverse derivative of the periodic
    midpoint primitive of the inner profile, carried along the staircase
    shear; both components are compared in the inhomogeneous first-order
    negative norm and combined in quadrature.
    """
    shifts = _integer_shifts(outer)
    primary, product = _canonical_pair(m, outer)
    n_along, n_trans = primary.shape

    gm = inner.g - inner.g.mean()
    primitive = (np.cumsum(gm) - 0.5 * gm) / n_trans
    freqs = np.rint(np.fft.fftfreq(n_trans) * n_trans).astype(np.int64)
    freqs = np.where(2 * freqs == -n_trans, 0, freqs)
    deriv = np.fft.ifft(np.fft.fft(primitive) * 2j * np.pi * freqs).real

    template = shear_resample(np.broadcast_to(deriv[None, :], primary.shape), shifts)
    canon_grid = Grid(n_along, n_trans)
    gap_primary = neg_sobolev_norm(
        ScalarField(canon_grid, primary - template), "full1"
    )
    gap_product = neg_sobolev_norm(
        ScalarField(canon_grid, product - outer.f[:, None] * template), "full1"
    )
    return float(math.hypot(gap_primary, gap_product))


def rigidity_report(p: PhaseField, eta: float) -> RigidityReport:
    """Run the full diagnostic suite on one phase arrangement.

    Deterministic: equal inputs give byte-identical JSON.  The shear
    pull-back requires grid-aligned staircases, which square grids always
    provide.
    """
    m = to_modified(p)
    energy = total_energy(p, eta)
    theta = volume_fractions(p)
    outer = extract_outer(m)
    inner = extract_inner(m, outer)
    d14, d12 = incompatibility_defect(theta)
    potential = helmholtz_potential(VectorField(p.grid, m.chi2t, m.chi1t))
    char = characteristic_residual(potential, outer)
    weak = _weak_defect(m, outer, inner)
    diagnostics = {
        "log10_char_residual": _log10_or_none(char),
        "log10_d12": _log10_or_none(float(d12)),
        "log10_d14": _log10_or_none(float(d14)),
        "log10_elastic": _log10_or_none(energy.elastic),
        "log10_inner_defect_l2": _log10_or_none(inner.defect_l2),
        "log10_outer_defect_l1": _log10_or_none(outer.defect_l1),
        "log10_total": _log10_or_none(energy.total),
        "log10_weak_defect": _log10_or_none(weak),
    }
    return RigidityReport(
        eta=eta,
        energy=energy,
        theta=theta,
        outer=outer,
        inner=inner,
        d14=float(d14),
        d12=float(d12),
        char_residual=char,
        weak_defect=weak,
        diagnostics=diagnostics,
    )
