import math

import numpy as np
import pytest

from wellbarrier import (
    OracleMismatchError,
    SpectrumRequest,
    build_operator,
    cross_validate,
    lowest_eigenvalues,
    solve_spectrum,
    sturm_count_below,
)
from wellbarrier.model import SpectrumResult

from conftest import geom


def solve(v0, n_states=6):
    return solve_spectrum(SpectrumRequest(geometry=geom(v0), n_states=n_states),
                          with_diagnostics=False)


def test_operator_shape_and_rejection():
    g = geom(5.0)
    with pytest.raises(ValueError):
        build_operator(g, 15)
    op = build_operator(g, 2000)
    assert op.n_points == 2000
    assert op.h == pytest.approx(12.0 / 2001)
    assert op.offdiag == pytest.approx(-1.0 / op.h ** 2)


def test_diagonal_entries_inside_barrier():
    g = geom(5.0)
    op = build_operator(g, 2000)
    x = -g.a + op.h * np.arange(1, op.n_points + 1)
    # nodes strictly inside (0, b), at least one cell away from both jumps
    inside = (x > op.h) & (x < g.b - op.h)
    assert np.allclose(op.diag[inside], 2.0 / op.h ** 2 + g.v0, rtol=0, atol=1e-9)
    flank = (x > g.b + op.h) & (x < g.a - op.h)
    assert np.allclose(op.diag[flank], 2.0 / op.h ** 2, rtol=0, atol=1e-9)


def test_free_well_eigenvalues():
    op = build_operator(geom(0.0), 4000)
    eigs = lowest_eigenvalues(op, 6)
    exact = [(n + 1) ** 2 * math.pi ** 2 / 144.0 for n in range(6)]
    assert np.max(np.abs(eigs - exact)) < 1e-4


def test_deep_well_ground_state():
    op = build_operator(geom(5.0), 8000)
    eigs = lowest_eigenvalues(op, 1)
    assert eigs[0] == pytest.approx(-3.7338, abs=1e-3)


def test_tiny_v0_row():
    op = build_operator(geom(0.0001), 4000)
    eigs = lowest_eigenvalues(op, 6)
    ref = [0.0685, 0.2741, 0.6169, 1.0966, 1.7135, 2.4674]
    assert np.max(np.abs(eigs - ref)) < 1e-3


def test_deepest_row_at_16000(f_roots):
    op = build_operator(geom(f_roots[3]), 16000)
    eigs = lowest_eigenvalues(op, 4)
    ref = [-24.5023, -19.1399, -10.4840, 0.0]
    assert np.max(np.abs(eigs - ref)) < 1e-2


def test_sturm_count_matches_eigenvalues():
    op = build_operator(geom(5.0), 2000)
    eigs = lowest_eigenvalues(op, 8)
    for i in range(7):
        mid = 0.5 * (eigs[i] + eigs[i + 1])
        assert sturm_count_below(op, mid) == i + 1
    assert sturm_count_below(op, eigs[0] - 0.1) == 0


def test_cross_validate_row2():
    report = cross_validate(solve(5.0), grids=(2000, 4000, 8000))
    assert np.max(np.abs(report.deviations)) < 1e-3
    ratios = report.convergence_ratios[:6]
    assert np.all((ratios > 3.5) & (ratios < 4.5))
    assert report.unmatched_analytic == ()
    assert report.unmatched_oracle == ()


def test_cross_validate_finds_zero_energy_partner(f_roots):
    report = cross_validate(solve(f_roots[1]), grids=(1000, 2000, 4000))
    # the E=0 special state must have a finite-difference partner
    i = int(np.argmin(np.abs(report.analytic)))
    assert report.analytic[i] == 0.0
    assert abs(report.deviations[i]) < 1e-3


def test_cross_validate_extrapolation_helps():
    res = solve(5.0)
    report = cross_validate(res, grids=(2000, 4000, 8000))
    finest = report.eigenvalues_per_grid[-1][:6]
    analytic = report.analytic
    finest_err = np.abs(analytic - finest)
    extrap_err = np.abs(report.deviations)
    assert np.all(extrap_err <= finest_err)


def test_cross_validate_free_well():
    report = cross_validate(solve(0.0), grids=(1000, 2000, 4000))
    assert np.max(np.abs(report.deviations)) < 1e-5


def test_missing_state_detector_fires(f_roots):
    full = solve(f_roots[1])
    # drop one interior state: the oracle partner check must fail loudly
    pruned = SpectrumResult(geometry=full.geometry,
                            states=full.states[:2] + full.states[3:])
    with pytest.raises(OracleMismatchError) as err:
        cross_validate(pruned, grids=(1000, 2000))
    assert err.value.report is not None
    dropped = full.states[2].energy
    assert any(abs(v - dropped) < 1e-2 for v in err.value.report.unmatched_oracle)


def test_convergence_order_for_ground_state():
    ops = [build_operator(geom(5.0), n) for n in (2000, 4000, 8000)]
    eigs = [lowest_eigenvalues(op, 1)[0] for op in ops]
    ratio = (eigs[0] - eigs[1]) / (eigs[1] - eigs[2])
    assert 3.5 < ratio < 4.5
