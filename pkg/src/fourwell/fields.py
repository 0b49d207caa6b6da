"""Fields on the periodic unit square and their discrete calculus.

Everything lives on a regular cell grid over [-1/2, 1/2)^2 with periodic
boundary conditions.  Arrays are indexed ``[j, i]`` where axis 0 runs along
the first coordinate and axis 1 along the second; cell centers sit at
``(index + 1/2) / n - 1/2``.

A microstructure is stored either as a :class:`PhaseField` of labels 1..4 or
as the equivalent :class:`ModifiedIndicators`, three fields with values in
{-1, +1} whose sign triple at each cell identifies the phase.  The two forms
are interconvertible through :func:`to_modified` / :func:`from_modified`;
only four of the eight sign triples are admissible, since the third is always
the product of the other two.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .model import ADMISSIBLE_TUPLES

__all__ = [
    "Grid",
    "ScalarField",
    "VectorField",
    "PhaseField",
    "ModifiedIndicators",
    "to_modified",
    "from_modified",
    "volume_fractions",
    "finite_difference",
    "total_variation",
    "shear_resample",
    "write_phase_field",
    "read_phase_field",
    "write_pgm",
]


@dataclass(frozen=True)
class Grid:
    """A periodic n1 x n2 cell grid on the unit square."""

    n1: int
    n2: int

    def __post_init__(self) -> None:
        for name in ("n1", "n2"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or n < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {n!r}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def spacing(self) -> tuple[float, float]:
        return (1.0 / self.n1, 1.0 / self.n2)

    @property
    def cell_area(self) -> float:
        return 1.0 / (self.n1 * self.n2)

    def axis_coords(self, axis: int) -> np.ndarray:
        """Cell-center coordinates along one axis, in [-1/2, 1/2)."""
        n = self.shape[axis]
        return (np.arange(n) + 0.5) / n - 0.5


def _check_shape(grid: Grid, values: np.ndarray, what: str) -> None:
    if values.shape != grid.shape:
        raise ValueError(
            f"{what} has shape {values.shape}, expected {grid.shape} from its grid"
        )


@dataclass(frozen=True)
class ScalarField:
    """Real values sampled at the cell centers of ``grid``."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        _check_shape(self.grid, self.values, "ScalarField.values")

    def mean(self) -> float:
        return float(self.values.mean())

    def l2_norm(self) -> float:
        return float(np.sqrt(np.mean(self.values**2)))


@dataclass(frozen=True)
class VectorField:
    """A pair of scalar components sampled on a common grid."""

    grid: Grid
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "v1", np.asarray(self.v1, dtype=float))
        object.__setattr__(self, "v2", np.asarray(self.v2, dtype=float))
        _check_shape(self.grid, self.v1, "VectorField.v1")
        _check_shape(self.grid, self.v2, "VectorField.v2")

    def l2_norm(self) -> float:
        return float(np.sqrt(np.mean(self.v1**2 + self.v2**2)))


@dataclass(frozen=True)
class PhaseField:
    """Integer phase labels 1..4 on a grid."""

    grid: Grid
    labels: np.ndarray

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels)
        if not np.issubdtype(labels.dtype, np.integer):
            raise ValueError(f"labels must be integers, got dtype {labels.dtype}")
        object.__setattr__(self, "labels", labels.astype(np.int64))
        _check_shape(self.grid, self.labels, "PhaseField.labels")
        bad = (self.labels < 1) | (self.labels > 4)
        if bad.any():
            j, i = np.argwhere(bad)[0]
            raise ValueError(
                f"phase label out of range 1..4 at cell ({j}, {i}): {self.labels[j, i]}"
            )


@dataclass(frozen=True)
class ModifiedIndicators:
    """The three sign fields (chi1t, chi2t, chi3t) of a microstructure.

    No admissibility is enforced here; raw triples are allowed so that
    intermediate constructions can be inspected.  :func:`from_modified`
    performs the strict check.
    """

    grid: Grid
    chi1t: np.ndarray
    chi2t: np.ndarray
    chi3t: np.ndarray

    def __post_init__(self) -> None:
        for name in ("chi1t", "chi2t", "chi3t"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            _check_shape(self.grid, arr, f"ModifiedIndicators.{name}")


_LABEL_TO_TUPLE = np.zeros((5, 3))
for _phase, _t in enumerate(ADMISSIBLE_TUPLES, start=1):
    _LABEL_TO_TUPLE[_phase] = _t


def to_modified(p: PhaseField) -> ModifiedIndicators:
    """Expand phase labels into their sign triples."""
    t = _LABEL_TO_TUPLE[p.labels]
    return ModifiedIndicators(p.grid, t[..., 0], t[..., 1], t[..., 2])


def from_modified(m: ModifiedIndicators) -> PhaseField:
    """Collapse sign triples back to phase labels.

    Raises ValueError naming the first offending cell (row-major order) if any
    triple is not one of the four admissible ones.
    """
    c1, c2, c3 = m.chi1t, m.chi2t, m.chi3t
    bad = (np.abs(c1) != 1.0) | (np.abs(c2) != 1.0) | (np.abs(c3) != 1.0) | (c2 != c1 * c3)
    if bad.any():
        j, i = np.argwhere(bad)[0]
        raise ValueError(
            "inadmissible indicator triple at cell "
            f"({j}, {i}): ({c1[j, i]}, {c2[j, i]}, {c3[j, i]})"
        )
    neg1 = c1 < 0
    neg3 = c3 < 0
    labels = np.ones(m.grid.shape, dtype=np.int64)
    labels[neg1 & neg3] = 2
    labels[neg1 & ~neg3] = 3
    labels[~neg1 & neg3] = 4
    return PhaseField(m.grid, labels)


def volume_fractions(p: PhaseField) -> tuple[float, float, float, float]:
    """Fraction of cells carrying each phase label, in label order."""
    counts = np.bincount(p.labels.ravel(), minlength=5)[1:5]
    total = p.labels.size
    return tuple(c / total for c in counts)  # type: ignore[return-value]


def finite_difference(f: ScalarField, axis: int, h: int) -> ScalarField:
    """Periodic difference f(x + h e_axis) - f(x) in grid-cell steps."""
    if axis not in (0, 1):
        raise ValueError(f"axis must be 0 or 1, got {axis!r}")
    shifted = np.roll(f.values, -int(h), axis=axis)
    return ScalarField(f.grid, shifted - f.values)


def total_variation(f: ScalarField) -> float:
    """Perimeter of a binary {0, 1} field: jump count weighted by face length.

    Jumps across faces perpendicular to axis 0 carry the transverse spacing
    1/n2 and vice versa, so for a resolved straight interface the result is
    its length.  Non-binary input is rejected.
    """
    v = f.values
    if not np.isin(v, (0.0, 1.0)).all():
        bad = ~np.isin(v, (0.0, 1.0))
        j, i = np.argwhere(bad)[0]
        raise ValueError(f"total_variation needs a 0/1 field; cell ({j}, {i}) holds {v[j, i]}")
    n1, n2 = f.grid.shape
    jumps1 = np.abs(np.roll(v, -1, axis=0) - v).sum() / n2
    jumps2 = np.abs(np.roll(v, -1, axis=1) - v).sum() / n1
    return float(jumps1 + jumps2)


def shear_resample(values: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Translate each axis-0 row periodically along axis 1 by an integer shift.

    ``out[j, i] = values[j, (i + shifts[j]) % n2]``.  Shifts must be integers,
    one per row; positive shifts pull content toward smaller axis-1 indices.
    """
    values = np.asarray(values)
    shifts = np.asarray(shifts)
    if values.ndim != 2:
        raise ValueError(f"expected a 2d array, got shape {values.shape}")
    if shifts.shape != (values.shape[0],):
        raise ValueError(
            f"need one shift per row: shifts shape {shifts.shape}, rows {values.shape[0]}"
        )
    if not np.issubdtype(shifts.dtype, np.integer):
        if not np.equal(np.mod(shifts, 1), 0).all():
            raise ValueError("row shifts must be integers (whole grid cells)")
        shifts = shifts.astype(np.int64)
    n1, n2 = values.shape
    cols = (np.arange(n2)[None, :] + shifts[:, None]) % n2
    return values[np.arange(n1)[:, None], cols]


# ---------------------------------------------------------------------------
# serialization

_HEADER_RE = re.compile(r"^# ([A-Za-z0-9_.\-]+)=(.*)$")


def write_phase_field(
    path: str | Path, p: PhaseField, header: Mapping[str, str] | None = None
) -> None:
    """Write labels as text: sorted ``# key=value`` lines, then one row per line.

    The keys n1 and n2 are always present; extra header entries must not
    collide with them.  Output is byte-deterministic for equal inputs.
    """
    entries = {"n1": str(p.grid.n1), "n2": str(p.grid.n2)}
    for key, value in (header or {}).items():
        if key in entries and value != entries[key]:
            raise ValueError(f"header key {key!r} conflicts with the grid")
        if "\n" in key or "\n" in str(value):
            raise ValueError(f"header entry {key!r} contains a newline")
        entries[key] = str(value)
    lines = [f"# {k}={entries[k]}" for k in sorted(entries)]
    for row in p.labels:
        lines.append(" ".join(str(int(x)) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_phase_field(path: str | Path) -> tuple[PhaseField, dict[str, str]]:
    """Inverse of :func:`write_phase_field`; returns field and header dict."""
    header: dict[str, str] = {}
    rows: list[list[int]] = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        m = _HEADER_RE.match(line)
        if m:
            header[m.group(1)] = m.group(2)
        else:
            rows.append([int(tok) for tok in line.split()])
    if "n1" not in header or "n2" not in header:
        raise ValueError(f"{path}: missing n1/n2 in header")
    grid = Grid(int(header["n1"]), int(header["n2"]))
    labels = np.array(rows, dtype=np.int64)
    if labels.shape != grid.shape:
        raise ValueError(f"{path}: data shape {labels.shape} does not match header {grid.shape}")
    return PhaseField(grid, labels), header


def write_pgm(path: str | Path, p: PhaseField) -> None:
    """Render phase labels to a plain-text PGM image.

    Labels 1..4 map to gray levels 0, 85, 170, 255.  Image columns follow the
    first coordinate and rows the second, with the top row at the largest
    second coordinate so the picture matches the usual orientation.
    """
    levels = (p.labels.T[::-1, :] - 1) * 85
    height, width = levels.shape
    lines = ["P2", f"{width} {height}", "255"]
    lines.extend(" ".join(str(v) for v in row) for row in levels)
    Path(path).write_text("\n".join(lines) + "\n")
