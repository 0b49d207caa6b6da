"""Tests for material parameters and the energy-well construction."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fourwell.model import ADMISSIBLE_TUPLES, MaterialParams, eta, make_wells

# The six stress-free strains at the default parameters, written out in full.
EXPECTED_ORIGINAL = np.array(
    [
        [[0.01, 0.0025, 0.0], [0.0025, 0.01, 0.0], [0.0, 0.0, -0.02]],
        [[0.01, -0.0025, 0.0], [-0.0025, 0.01, 0.0], [0.0, 0.0, -0.02]],
        [[0.01, 0.0, 0.0025], [0.0, -0.02, 0.0], [0.0025, 0.0, 0.01]],
        [[0.01, 0.0, -0.0025], [0.0, -0.02, 0.0], [-0.0025, 0.0, 0.01]],
        [[-0.02, 0.0, 0.0], [0.0, 0.01, 0.0025], [0.0, 0.0025, 0.01]],
        [[-0.02, 0.0, 0.0], [0.0, 0.01, -0.0025], [0.0, -0.0025, 0.01]],
    ]
)


def test_default_derived_quantities():
    p = MaterialParams()
    assert p.d == pytest.approx(8.0 / 3.0, rel=1e-15)
    assert p.diag == (-1.0 / 3.0, 24.0, -1.0 / 3.0)
    assert p.amplitude == pytest.approx(0.001875, rel=1e-15)


@pytest.mark.parametrize("name", ["epsilon", "delta", "kappa", "mu", "L"])
@pytest.mark.parametrize("bad", [0.0, -2.0, math.inf, math.nan])
def test_params_reject_nonpositive(name, bad):
    with pytest.raises(ValueError, match=name):
        MaterialParams(**{name: bad})


def test_original_wells_match_literal_arrays():
    ws = make_wells(MaterialParams())
    assert ws.original.shape == (6, 3, 3)
    assert_allclose(ws.original, EXPECTED_ORIGINAL, rtol=0, atol=0)


def test_original_wells_are_symmetric_and_trace_free():
    ws = make_wells(MaterialParams(epsilon=0.037, delta=0.11))
    for w in ws.original:
        assert_allclose(w, w.T, rtol=0, atol=0)
        assert w.trace() == 0.0


def test_original_wells_pair_up_by_offdiagonal_sign():
    """Variants come in pairs sharing a diagonal, differing by a sign flip."""
    ws = make_wells(MaterialParams())
    for even in (0, 2, 4):
        a, b = ws.original[even], ws.original[even + 1]
        assert_allclose(a + b, 2.0 * np.diag(np.diag(a)), rtol=0, atol=0)


def test_change_of_coords_frozen_values():
    ws = make_wells(MaterialParams())
    expected = np.array(
        [
            [0.0, 3.0 / math.sqrt(2.0), 0.25],
            [math.sqrt(2.0) * 0.25, 0.0, 0.0],
            [0.0, 3.0 / math.sqrt(2.0), -0.25],
        ]
    )
    assert_allclose(ws.change_of_coords, expected, rtol=1e-15, atol=1e-16)


def test_renormalized_well_phase1_literal():
    ws = make_wells(MaterialParams())
    expected = np.array(
        [
            [-0.000625, 0.001875, 0.001875],
            [0.001875, 0.045, 0.001875],
            [0.001875, 0.001875, -0.000625],
        ]
    )
    assert_allclose(ws.renormalized[0], expected, rtol=1e-15)


def test_renormalized_wells_follow_sign_tuples():
    params = MaterialParams(epsilon=0.02, delta=0.3)
    ws = make_wells(params)
    amp = params.amplitude
    d1, d2, d3 = params.diag
    for phase, (c1, c2, c3) in enumerate(ADMISSIBLE_TUPLES):
        w = ws.renormalized[phase]
        assert_allclose(w, w.T, rtol=0, atol=0)
        assert_allclose(np.diag(w), amp * np.array([d1, d2, d3]), rtol=1e-15)
        assert w[1, 2] == amp * c1
        assert w[0, 2] == amp * c2
        assert w[0, 1] == amp * c3


def test_admissible_tuples_structure():
    assert len(ADMISSIBLE_TUPLES) == 4
    assert len(set(ADMISSIBLE_TUPLES)) == 4
    for c1, c2, c3 in ADMISSIBLE_TUPLES:
        assert abs(c1) == abs(c2) == abs(c3) == 1
        assert c2 == c1 * c3


def test_eta_frozen_default():
    assert eta(MaterialParams()) == pytest.approx(0.0014222222222222223, rel=1e-15)


def test_eta_closed_form():
    p = MaterialParams(epsilon=0.02, delta=0.1, kappa=0.3, mu=2.0e9, L=0.05)
    expected = 2.0 * p.d**2 * p.kappa / (p.epsilon**2 * p.mu * p.L)
    assert eta(p) == expected


@pytest.mark.parametrize(
    "change, factor",
    [
        (dict(L=0.02), 0.5),
        (dict(kappa=0.2), 2.0),
        (dict(epsilon=0.02), 0.25),
        (dict(mu=2.0e9), 0.5),
        (dict(delta=0.5), 1.0 / 16.0),
    ],
)
def test_eta_homogeneity(change, factor):
    """Scaling one input rescales the ratio by the advertised power."""
    base = eta(MaterialParams())
    assert eta(MaterialParams(**change)) == pytest.approx(base * factor, rel=1e-14)
