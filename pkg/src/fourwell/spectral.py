"""Fourier-side operations: norms, potentials, projections, and an oracle.

Conventions, used consistently across the package:

* Forward coefficients are ``fft2(values) / (n1 * n2)``, so Parseval reads
  ``sum |c_k|^2 = mean |f|^2`` and norms below are mean-square quantities.
* Frequencies are the integer lattice duals from ``fftfreq(n) * n``; on even
  grids the unpaired mode sits at ``-n/2``.
* Negative-order norms weight by integer ``|k|``; derivatives carry the
  physical factor ``2 pi i k`` and drop the unpaired mode, which has no
  well-defined sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Grid, ModifiedIndicators, ScalarField, VectorField

__all__ = [
    "SpectralField",
    "forward",
    "inverse",
    "spectral_derivative",
    "neg_sobolev_norm",
    "inv_gradient",
    "leray_project",
    "helmholtz_potential",
    "curl_neg_sobolev",
    "permode_elastic_oracle",
]


@dataclass(frozen=True)
class SpectralField:
    """Normalized Fourier coefficients of a scalar field."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coeffs shape {coeffs.shape} does not match grid {self.grid.shape}"
            )


def _freqs(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Integer frequencies, shaped to broadcast over a coefficient array."""
    k1 = np.rint(np.fft.fftfreq(grid.n1) * grid.n1).astype(np.int64)
    k2 = np.rint(np.fft.fftfreq(grid.n2) * grid.n2).astype(np.int64)
    return k1[:, None], k2[None, :]


def _deriv_freqs(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Frequencies for differentiation: unpaired even-grid modes zeroed."""
    k1, k2 = _freqs(grid)
    k1 = np.where(2 * k1 == -grid.n1, 0, k1)
    k2 = np.where(2 * k2 == -grid.n2, 0, k2)
    return k1, k2


def _unpaired_mask(grid: Grid) -> np.ndarray:
    """Modes whose conjugate partner aliases onto themselves (even grids).

    Sign-sensitive multipliers are ill-defined there: keeping such a mode
    breaks the Hermitian symmetry a real output needs, so the projection
    family below zeroes them, exactly as differentiation does.
    """
    k1, k2 = _freqs(grid)
    return (2 * k1 == -grid.n1) | (2 * k2 == -grid.n2)


def forward(f: ScalarField) -> SpectralField:
    return SpectralField(f.grid, np.fft.fft2(f.values) / (f.grid.n1 * f.grid.n2))


def inverse(sf: SpectralField) -> ScalarField:
    values = np.fft.ifft2(sf.coeffs) * (sf.grid.n1 * sf.grid.n2)
    return ScalarField(sf.grid, values.real)


def spectral_derivative(f: ScalarField, axis: int) -> ScalarField:
    """Partial derivative along one axis via the 2 pi i k multiplier."""
    if axis not in (0, 1):
        raise ValueError(f"axis must be 0 or 1, got {axis!r}")
    c = forward(f).coeffs
    k = _deriv_freqs(f.grid)[axis]
    return inverse(SpectralField(f.grid, 2j * np.pi * k * c))


def _mean_coeff_checked(f: ScalarField, what: str) -> np.ndarray:
    c = forward(f).coeffs
    scale = max(1.0, float(np.sqrt(np.mean(f.values**2))))
    if abs(c[0, 0]) > 1e-12 * scale:
        raise ValueError(f"{what} requires a zero-mean field; mean is {c[0, 0].real:.3e}")
    return c


def neg_sobolev_norm(f: ScalarField, s: int | str = 1) -> float:
    """Negative-order norm of a scalar field.

    ``s=1`` and ``s=2`` weight squared coefficients by ``|k|^(-2s)`` over
    nonzero modes and reject fields with nonzero mean.  ``s="full1"`` uses the
    inhomogeneous weight ``1/(1+|k|^2)`` and keeps the mean.
    """
    if s == "full1":
        c = forward(f).coeffs
        k1, k2 = _freqs(f.grid)
        w = 1.0 / (1.0 + k1**2 + k2**2)
        return float(np.sqrt((np.abs(c) ** 2 * w).sum()))
    if s not in (1, 2):
        raise ValueError(f"order must be 1, 2 or 'full1', got {s!r}")
    c = _mean_coeff_checked(f, f"neg_sobolev_norm(s={s})")
    k1, k2 = _freqs(f.grid)
    ksq = (k1**2 + k2**2).astype(float)
    ksq[0, 0] = 1.0
    w = ksq ** (-int(s))
    w[0, 0] = 0.0
    return float(np.sqrt((np.abs(c) ** 2 * w).sum()))


def inv_gradient(f: ScalarField) -> ScalarField:
    """The zero-mean potential with ``|gradient| = |f|`` mode by mode.

    Divides each nonzero coefficient by ``2 pi |k|``; the gradient of the
    result has the same mean-square size as the negative-order content of
    ``f`` measured with physical frequencies.
    """
    c = _mean_coeff_checked(f, "inv_gradient").copy()
    k1, k2 = _freqs(f.grid)
    kabs = np.sqrt((k1**2 + k2**2).astype(float))
    kabs[0, 0] = 1.0
    c /= 2.0 * np.pi * kabs
    c[0, 0] = 0.0
    return inverse(SpectralField(f.grid, c))


def leray_project(w: VectorField) -> VectorField:
    """Divergence-free part of a vector field, mean and unpaired modes removed.

    Acts as the transverse projection on every properly paired nonzero mode;
    the remainder ``w - mean - Pw`` is exactly orthogonal to the result, so
    the three pieces split the mean-square size of ``w`` with no cross term.
    """
    grid = w.grid
    n = grid.n1 * grid.n2
    c1 = np.fft.fft2(w.v1) / n
    c2 = np.fft.fft2(w.v2) / n
    k1, k2 = _freqs(grid)
    ksq = (k1**2 + k2**2).astype(float)
    ksq[0, 0] = 1.0
    dot = (k1 * c1 + k2 * c2) / ksq
    p1 = c1 - k1 * dot
    p2 = c2 - k2 * dot
    drop = _unpaired_mask(grid)
    p1[drop] = 0.0
    p2[drop] = 0.0
    p1[0, 0] = 0.0
    p2[0, 0] = 0.0
    return VectorField(
        grid,
        (np.fft.ifft2(p1) * n).real,
        (np.fft.ifft2(p2) * n).real,
    )


def helmholtz_potential(w: VectorField) -> ScalarField:
    """Zero-mean scalar u whose gradient is the curl-free part of ``w``."""
    grid = w.grid
    n = grid.n1 * grid.n2
    c1 = np.fft.fft2(w.v1) / n
    c2 = np.fft.fft2(w.v2) / n
    k1, k2 = _freqs(grid)
    ksq = (k1**2 + k2**2).astype(float)
    ksq[0, 0] = 1.0
    u = (k1 * c1 + k2 * c2) / (2j * np.pi * ksq)
    u[_unpaired_mask(grid)] = 0.0
    u[0, 0] = 0.0
    return inverse(SpectralField(grid, u))


def curl_neg_sobolev(w: VectorField) -> float:
    """Size of the rotational content: the lattice curl in the H^-1 weight.

    Mode by mode the weighted curl modulus equals the modulus of the
    transverse projection, so over the same paired modes the result
    coincides with the mean-square size of :func:`leray_project` of ``w``.
    """
    grid = w.grid
    n = grid.n1 * grid.n2
    c1 = np.fft.fft2(w.v1) / n
    c2 = np.fft.fft2(w.v2) / n
    k1, k2 = _freqs(grid)
    ksq = (k1**2 + k2**2).astype(float)
    ksq[0, 0] = 1.0
    curl = k1 * c2 - k2 * c1
    weighted = np.abs(curl) ** 2 / ksq
    weighted[_unpaired_mask(grid)] = 0.0
    weighted[0, 0] = 0.0
    return float(np.sqrt(weighted.sum()))


def _indicator_coeffs(
    m: ModifiedIndicators,
) -> tuple[Grid, np.ndarray, np.ndarray, np.ndarray]:
    n = m.grid.n1 * m.grid.n2
    return (
        m.grid,
        np.fft.fft2(m.chi1t) / n,
        np.fft.fft2(m.chi2t) / n,
        np.fft.fft2(m.chi3t) / n,
    )


def permode_elastic_oracle(m: ModifiedIndicators) -> float:
    """Relaxed elastic energy by brute-force least squares, mode by mode.

    For every nonzero frequency the target matrix carries the indicator
    coefficients on its off-diagonal; the best compatible strain at that
    frequency is ``sym(2 pi i k (x) u)`` over all complex displacements u,
    found by solving the 3x3 normal equations directly.  The summed squared
    misfits equal the relaxed elastic energy; this routine exists as an
    independent check of the closed-form multiplier and shares none of its
    algebra.
    """
    grid, c1, c2, c3 = _indicator_coeffs(m)
    k1, k2 = _freqs(grid)
    k1b, k2b = np.broadcast_arrays(k1, k2)
    mask = (k1b != 0) | (k2b != 0)
    q = np.stack(
        [
            2.0 * np.pi * k1b[mask],
            2.0 * np.pi * k2b[mask],
            np.zeros(int(mask.sum())),
        ],
        axis=1,
    )
    nmodes = q.shape[0]
    target = np.zeros((nmodes, 3, 3), dtype=complex)
    target[:, 0, 1] = target[:, 1, 0] = c3[mask]
    target[:, 0, 2] = target[:, 2, 0] = c2[mask]
    target[:, 1, 2] = target[:, 2, 1] = c1[mask]

    qsq = (q**2).sum(axis=1)
    normal = qsq[:, None, None] * np.eye(3)[None] + q[:, :, None] * q[:, None, :]
    rhs = 2.0 * np.einsum("mij,mj->mi", target, q.astype(complex))
    disp = np.linalg.solve(normal.astype(complex), rhs[:, :, None])[:, :, 0]
    strain = 0.5 * (q[:, :, None] * disp[:, None, :] + disp[:, :, None] * q[:, None, :])
    return float((np.abs(strain - target) ** 2).sum())
