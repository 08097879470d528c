import math

import numpy as np
import pytest

from wellbarrier import (
    SpecialCondition,
    SpectrumRequest,
    StateKind,
    count_nodes,
    doubly_special_v0,
    normalize,
    overlap,
    solve_spectrum,
    special_v0_catalog,
    uncertainty_product,
)
from wellbarrier.characteristic import build_eigenfunction
from wellbarrier.model import PiecewiseWavefunction, Segment, SegmentBasis
from wellbarrier.spectrum import norm_integral

from conftest import geom

ROW2 = [-3.733845, -0.4354, 0.4972, 0.7227, 1.9639, 2.3852]


def solve(v0, n_states=6, diagnostics=False):
    return solve_spectrum(SpectrumRequest(geometry=geom(v0), n_states=n_states),
                          with_diagnostics=diagnostics)


def test_request_validation():
    with pytest.raises(ValueError):
        SpectrumRequest(geometry=geom(1.0))
    with pytest.raises(ValueError):
        SpectrumRequest(geometry=geom(1.0), n_states=3, e_max=1.0)
    with pytest.raises(ValueError):
        SpectrumRequest(geometry=geom(1.0), n_states=0)


def test_row2_spectrum():
    res = solve(5.0)
    assert len(res.states) == 6
    for st, ref in zip(res.states, ROW2):
        assert st.energy == pytest.approx(ref, abs=1e-3)
        assert st.kind is StateKind.GENERIC
    energies = [st.energy for st in res.states]
    assert energies == sorted(energies)


def test_tiny_v0_recovers_infinite_well():
    exact = [(n + 1) ** 2 * math.pi ** 2 / 144.0 for n in range(6)]
    res = solve(0.0001)
    for st, e in zip(res.states, exact):
        assert st.energy == pytest.approx(e, abs=1e-3)
    res = solve(1e-8)
    for st, e in zip(res.states, exact):
        assert st.energy == pytest.approx(e, abs=1e-6)
    res = solve(0.0)
    for st, e in zip(res.states, exact):
        assert st.energy == pytest.approx(e, rel=1e-12)


def test_e_max_request():
    res = solve_spectrum(SpectrumRequest(geometry=geom(5.0), e_max=1.0),
                         with_diagnostics=False)
    assert [round(st.energy, 4) for st in res.states] == [-3.7338, -0.4354, 0.4973, 0.7228]
    assert all(st.energy <= 1.0 for st in res.states)


def test_zero_energy_state_splices_in(f_roots):
    res = solve(f_roots[2], n_states=13)
    kinds = {st.index: st.kind for st in res.states}
    assert res.states[2].energy == 0.0
    assert kinds[2] is StateKind.ZERO_ENERGY
    assert sum(1 for st in res.states if st.kind is StateKind.ZERO_ENERGY) == 1


def test_barrier_top_state_splices_in(g_roots):
    res = solve(g_roots[0])
    assert res.states[0].energy == pytest.approx(g_roots[0], abs=1e-15)
    assert res.states[0].kind is StateKind.BARRIER_TOP
    res = solve(g_roots[3])
    assert res.states[3].kind is StateKind.BARRIER_TOP


def test_near_special_v0_stays_generic(f_roots):
    # a v0 close to (but off) a special root keeps its near-seam root generic
    res = solve(f_roots[0] + 1e-4)
    assert all(st.kind is StateKind.GENERIC for st in res.states)
    assert abs(res.states[0].energy) < 5e-4
    assert res.states[0].energy != 0.0


def test_special_catalog_f(f_roots):
    cat = special_v0_catalog(SpecialCondition.F_ZERO, 4, geom(1.0))
    assert [r.v0 for r in cat] == pytest.approx([0.3333, 4.09982, 12.7396, 26.31113], abs=1e-3)
    assert [r.state_index for r in cat] == [0, 1, 2, 3]
    for r in cat:
        assert r.f_residual <= 1e-8


def test_special_catalog_g(g_roots):
    cat = special_v0_catalog(SpecialCondition.G_TOP, 4, geom(1.0))
    assert [r.v0 for r in cat] == pytest.approx([0.0655, 0.2981, 0.5816, 1.3322], abs=1e-3)
    assert [r.state_index for r in cat] == [0, 1, 2, 3]
    for r in cat:
        assert r.g_residual <= 1e-8


def test_special_root_resolves_at_annotated_index():
    for cond in (SpecialCondition.F_ZERO, SpecialCondition.G_TOP):
        for root in special_v0_catalog(cond, 3, geom(1.0)):
            res = solve(root.v0, n_states=root.state_index + 1)
            st = res.states[root.state_index]
            if cond is SpecialCondition.F_ZERO:
                assert st.kind is StateKind.ZERO_ENERGY
            else:
                assert st.kind is StateKind.BARRIER_TOP


def test_doubly_special_pairs():
    pairs = doubly_special_v0(4, geom(1.0))
    assert len(pairs) == 4
    assert [p.zero_energy_index for p in pairs] == [0, 1, 2, 3]
    assert [p.barrier_top_index for p in pairs] == [1, 6, 12, 17]
    mids = [p.v0 for p in pairs]
    for mid, anchor in zip(mids, (0.3125, 4.09, 12.74, 26.31)):
        assert abs(mid - anchor) <= 0.05 * max(1.0, anchor)
    for p in pairs:
        assert p.f_residual <= 1e-8
        assert p.g_residual <= 1e-8
        assert p.gap > 1e-3  # the two conditions genuinely have distinct roots


def test_normalize_self_overlap():
    res = solve(5.0)
    for st in res.states:
        assert norm_integral(st.wavefunction) == pytest.approx(1.0, abs=1e-10)


def test_normalize_infinite_well_amplitude():
    g = geom(0.0)
    res = solve(0.0, n_states=1)
    psi = res.states[0].wavefunction
    xs = np.linspace(-g.a, g.a, 501)
    k = math.pi / (2 * g.a)
    exact = np.sin(k * (xs + g.a)) / math.sqrt(g.a)
    assert np.max(np.abs(np.abs(psi(xs)) - np.abs(exact))) < 1e-10


def test_normalize_zero_energy_state(f_roots):
    raw = build_eigenfunction(StateKind.ZERO_ENERGY, 0.0, geom(f_roots[0]))
    n = norm_integral(raw)
    assert math.isfinite(n) and n > 0
    psi = normalize(raw)
    assert norm_integral(psi) == pytest.approx(1.0, abs=1e-10)


def test_normalize_rejects_zero_input():
    g = geom(1.0)
    segs = (
        Segment(-g.a, -g.b, SegmentBasis.LINEAR, 0.0, 0.0, 0.0, x_ref=-g.a),
        Segment(-g.b, 0.0, SegmentBasis.LINEAR, 0.0, 0.0, 0.0),
        Segment(0.0, g.b, SegmentBasis.LINEAR, 0.0, 0.0, 0.0),
        Segment(g.b, g.a, SegmentBasis.LINEAR, 0.0, 0.0, 0.0, x_ref=g.a),
    )
    dead = PiecewiseWavefunction(geometry=g, segments=segs)
    with pytest.raises(ValueError):
        normalize(dead)


def test_node_counts_match_indices():
    res = solve(5.0, diagnostics=True)
    assert list(res.diagnostics.node_counts) == [0, 1, 2, 3, 4, 5]


def test_zero_energy_node_count(f_roots):
    psi = normalize(build_eigenfunction(StateKind.ZERO_ENERGY, 0.0, geom(f_roots[2])))
    assert count_nodes(psi) == 2


def test_barrier_top_node_count_deep():
    # the n=17 barrier-top state near v0=26.3
    cat = special_v0_catalog(SpecialCondition.G_TOP, 18, geom(1.0))
    root = cat[-1]
    assert root.v0 == pytest.approx(26.3029, abs=1e-3)
    assert root.state_index == 17


def test_overlap_diagnostics(f_roots):
    res = solve(f_roots[1], n_states=7, diagnostics=True)
    ov = res.diagnostics.overlap_matrix
    n = len(res.states)
    assert np.allclose(np.diag(ov), 1.0, atol=1e-8)
    off = ov[~np.eye(n, dtype=bool)]
    assert np.max(np.abs(off)) <= 1e-6


def test_overlap_rejects_geometry_mismatch():
    res5 = solve(5.0, n_states=1)
    res0 = solve(0.0, n_states=1)
    with pytest.raises(ValueError):
        overlap(res5.states[0].wavefunction, res0.states[0].wavefunction)


def test_infinite_well_orthogonality():
    res = solve(0.0, n_states=2)
    ov = overlap(res.states[0].wavefunction, res.states[1].wavefunction)
    assert abs(ov) <= 1e-10


def test_uncertainty_products(f_roots, g_roots):
    top = normalize(build_eigenfunction(StateKind.BARRIER_TOP, g_roots[0], geom(g_roots[0])))
    assert uncertainty_product(top) == pytest.approx(0.5696, abs=1e-3)
    zero = normalize(build_eigenfunction(StateKind.ZERO_ENERGY, 0.0, geom(f_roots[0])))
    assert uncertainty_product(zero) == pytest.approx(0.5647, abs=1e-3)
    well = solve(0.0, n_states=1).states[0].wavefunction
    assert uncertainty_product(well) == pytest.approx(math.sqrt(math.pi ** 2 / 3 - 2) / 2, abs=1e-9)


def test_uncertainty_floor():
    res = solve(5.0, diagnostics=True)
    assert all(u >= 0.5 for u in res.diagnostics.uncertainty_products)


def test_ground_state_monotone_in_v0():
    previous = math.inf
    for v0 in (0.1, 1.0, 5.0, 10.0, 20.0):
        e0 = solve(v0, n_states=1).states[0].energy
        assert e0 <= previous + 1e-12
        previous = e0


def test_c1_residuals_reported(f_roots):
    res = solve(f_roots[3], n_states=6, diagnostics=True)
    assert all(r <= 1e-10 for r in res.diagnostics.c1_residuals)
