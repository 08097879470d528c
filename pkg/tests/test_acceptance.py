"""Acceptance gate: one check per shipped criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see every verdict line.

Two checks are expected to stay red and are kept that way deliberately:

* A1 (strict): three entries of the bundled reference table disagree with
  both independent solvers here (closed-form matching and the
  finite-difference oracle agree with each other to 1e-8).  Row 9 skips the
  true fifth level at E=2.1464, and row 12 claims exact special states at
  v0=0.3125 where neither condition vanishes.  A1b verifies everything
  outside those three entries.
* A3 (strict single-v0): the zero-energy and barrier-top conditions have no
  common root at this geometry; they come in close pairs.  The pair check in
  A3 is the attainable phrasing, and the strict check documents how far from
  simultaneous the conditions actually are.
"""

import math
import time

import numpy as np
import pytest

import wellbarrier as wb
from wellbarrier import SpectrumRequest, StateKind
from wellbarrier.characteristic import f_scale, g_scale
from wellbarrier.reference import REFERENCE_TABLE, compare_table
from wellbarrier.spectrum import normalize
from wellbarrier.characteristic import build_eigenfunction, f_zero_energy, g_barrier_top

from conftest import geom

# entries where the printed reference values are contradicted by both solvers
KNOWN_REFERENCE_DEFECTS = {(9, 5), (12, 0), (12, 1)}


def _line(tag: str, ok: bool, detail: str = ""):
    suffix = f" - {detail}" if detail else ""
    print(f"\nACCEPTANCE {tag}: {'PASS' if ok else 'FAIL'}{suffix}")


@pytest.fixture(scope="module")
def table_comparisons():
    t0 = time.monotonic()
    comparisons = compare_table()
    return comparisons, time.monotonic() - t0


@pytest.fixture(scope="module")
def special_pairs():
    return wb.doubly_special_v0(4, geom(1.0))


def test_a1_reference_table_strict(table_comparisons):
    """First six levels of all 11 rows, index-wise, marked entries by kind."""
    comparisons, elapsed = table_comparisons
    failures = []
    for comp in comparisons:
        for entry in comp.entries:
            if not entry.ok:
                failures.append(
                    f"row {comp.row_id} E{entry.level}: computed "
                    f"{entry.computed_energy:.6g} vs printed {entry.reference} "
                    f"(dev {entry.deviation:+.2e})")
    ok = not failures and elapsed < 10.0
    _line("A1 reference table (strict)", ok,
          f"runtime {elapsed:.1f}s; " + ("all entries match" if not failures
                                         else "; ".join(failures)))
    assert elapsed < 10.0
    assert not failures, "; ".join(failures)


def test_a1b_reference_table_excluding_verified_defects(table_comparisons):
    """Everything outside the three cross-validated defective entries."""
    comparisons, elapsed = table_comparisons
    unexpected = []
    defects_seen = set()
    for comp in comparisons:
        for entry in comp.entries:
            key = (comp.row_id, entry.level)
            if entry.ok:
                continue
            if key in KNOWN_REFERENCE_DEFECTS:
                defects_seen.add(key)
            else:
                unexpected.append(key)
    ok = not unexpected and elapsed < 10.0
    _line("A1b reference table (verified entries)", ok,
          f"63/66 entries match at tolerance; known defects reproduced: "
          f"{sorted(defects_seen)}")
    assert elapsed < 10.0
    assert not unexpected, f"unexpected mismatches: {unexpected}"
    assert defects_seen == KNOWN_REFERENCE_DEFECTS


def test_a2_special_root_lists(f_roots, g_roots):
    g = geom(1.0)
    f_benchmark = [0.3333, 4.09982, 12.7396, 26.31113]
    g_benchmark = [0.0655, 0.2981, 0.5816, 1.3322]
    ok = True
    details = []
    for computed, printed in zip(f_roots, f_benchmark):
        ok &= abs(computed - printed) <= 1e-3
        ok &= abs(f_zero_energy(computed, g)) <= 1e-9 * f_scale(computed, g)
    for computed, printed in zip(g_roots, g_benchmark):
        ok &= abs(computed - printed) <= 1e-3
        ok &= abs(g_barrier_top(computed, g)) <= 1e-9 * g_scale(computed, g)
    details.append(f"f-roots {[round(r, 5) for r in f_roots]}")
    details.append(f"g-roots {[round(r, 5) for r in g_roots]}")
    _line("A2 special-root lists", ok, "; ".join(details))
    assert ok


def test_a3_doubly_special_pairs(special_pairs):
    pairs = special_pairs
    anchors = [(0.3125, 0.3125), (4.09, 4.10), (12.73, 12.74), (26.31, 26.31)]
    ok = len(pairs) == 4
    details = []
    for pair, (a_lo, a_hi), zi, ti in zip(pairs, anchors, (0, 1, 2, 3), (1, 6, 12, 17)):
        lo = min(pair.v0_zero_energy, pair.v0_barrier_top)
        hi = max(pair.v0_zero_energy, pair.v0_barrier_top)
        ok &= lo - 0.01 <= a_hi and hi + 0.01 >= a_lo
        ok &= pair.f_residual <= 1e-8
        ok &= pair.g_residual <= 1e-8
        ok &= pair.zero_energy_index == zi
        ok &= pair.barrier_top_index == ti
        details.append(f"({pair.v0_zero_energy:.5f}, {pair.v0_barrier_top:.5f}) "
                       f"indices ({pair.zero_energy_index}, {pair.barrier_top_index}) "
                       f"gap {pair.gap:.4f}")
    # each member's spectrum carries its special state at the annotated index
    for pair in pairs:
        res = wb.solve_spectrum(SpectrumRequest(
            geometry=geom(pair.v0_zero_energy),
            n_states=pair.zero_energy_index + 1), with_diagnostics=False)
        ok &= res.states[pair.zero_energy_index].kind is StateKind.ZERO_ENERGY
        res = wb.solve_spectrum(SpectrumRequest(
            geometry=geom(pair.v0_barrier_top),
            n_states=pair.barrier_top_index + 1), with_diagnostics=False)
        ok &= res.states[pair.barrier_top_index].kind is StateKind.BARRIER_TOP
    _line("A3 doubly-special pairs", ok, "; ".join(details))
    assert ok, details


def test_a3_strict_single_v0_simultaneity(special_pairs):
    """No single v0 satisfies both conditions to 1e-8; document how close."""
    g = geom(1.0)
    minima = []
    for pair in special_pairs:
        lo = min(pair.v0_zero_energy, pair.v0_barrier_top) - 1e-3
        hi = max(pair.v0_zero_energy, pair.v0_barrier_top) + 1e-3
        vs = np.linspace(lo, hi, 20001)
        worst = np.maximum(np.abs(f_zero_energy(vs, g)) / f_scale(vs, g),
                           np.abs(g_barrier_top(vs, g)) / g_scale(vs, g))
        minima.append(float(np.min(worst)))
    ok = all(m <= 1e-8 for m in minima)
    _line("A3-strict single-v0 simultaneous residuals", ok,
          "min of max(|f|,|g|)/scale per pair: "
          + ", ".join(f"{m:.2e}" for m in minima))
    assert ok, (
        "the two special conditions have no common root at this geometry; "
        f"best simultaneous residuals {minima}")


def test_a4_uncertainty_products(f_roots, g_roots):
    top = normalize(build_eigenfunction(StateKind.BARRIER_TOP, g_roots[0], geom(g_roots[0])))
    zero = normalize(build_eigenfunction(StateKind.ZERO_ENERGY, 0.0, geom(f_roots[0])))
    u_top = wb.uncertainty_product(top)
    u_zero = wb.uncertainty_product(zero)
    ok = abs(u_top - 0.5696) <= 1e-3 and abs(u_zero - 0.5647) <= 1e-3
    floor_ok = True
    for v0 in (g_roots[0], f_roots[0], 5.0):
        res = wb.solve_spectrum(SpectrumRequest(geometry=geom(v0), n_states=6))
        floor_ok &= all(u >= 0.5 for u in res.diagnostics.uncertainty_products)
    _line("A4 uncertainty products", ok and floor_ok,
          f"barrier-top U={u_top:.4f} (0.5696), zero-energy U={u_zero:.4f} "
          f"(0.5647), floor 0.5 held: {floor_ok}")
    assert ok and floor_ok


def test_a5_orthogonality(f_roots):
    cases = [(f_roots[0], 6), (f_roots[1], 8), (f_roots[2], 13),
             (f_roots[3], 18), (0.3125, 6)]
    worst = 0.0
    for v0, n in cases:
        res = wb.solve_spectrum(SpectrumRequest(geometry=geom(v0), n_states=n))
        ov = res.diagnostics.overlap_matrix
        off = np.abs(ov[~np.eye(len(ov), dtype=bool)])
        worst = max(worst, float(np.max(off)))
    ok = worst <= 1e-6
    _line("A5 orthogonality", ok, f"max off-diagonal overlap {worst:.2e}")
    assert ok


def test_a6_nodal_completeness_randomized():
    rng = np.random.default_rng(20260808)
    sturm_checks = 0
    for _ in range(50):
        v0 = float(rng.uniform(1e-3, 30.0))
        g = geom(v0)
        res = wb.solve_spectrum(SpectrumRequest(geometry=g, n_states=6),
                                with_diagnostics=False)  # audits nodes internally
        energies = [st.energy for st in res.states]
        op = wb.build_operator(g, 2000)
        probes = [(energies[0] - 0.5 * (energies[1] - energies[0]), 0)]
        for i in range(len(energies) - 1):
            mid = 0.5 * (energies[i] + energies[i + 1])
            gap = min(abs(mid - energies[i]), abs(mid - energies[i + 1]))
            if gap > 5e-3 * max(1.0, abs(mid)):
                probes.append((mid, i + 1))
        for energy, expected in probes:
            assert wb.sturm_count_below(op, energy) == expected, (
                f"v0={v0}: oracle count below {energy} != {expected}")
            sturm_checks += 1
    _line("A6 nodal completeness (50 random v0)", True,
          f"node audits clean; {sturm_checks} Sturm count checks agreed")


def test_a7_oracle_agreement():
    worst_dev = 0.0
    ratio_lo, ratio_hi = math.inf, -math.inf
    from wellbarrier.reference import resolve_v0
    for row in REFERENCE_TABLE:
        v0 = resolve_v0(row)
        res = wb.solve_spectrum(SpectrumRequest(geometry=geom(v0), n_states=6),
                                with_diagnostics=False)
        grids = (4000, 8000, 16000) if row.row_id in (9, 10) else (2000, 4000, 8000)
        report = wb.cross_validate(res, grids=grids)
        worst_dev = max(worst_dev, float(np.max(np.abs(report.deviations))))
        ratios = report.convergence_ratios[:6]
        ratios = ratios[~np.isnan(ratios)]
        ratio_lo = min(ratio_lo, float(np.min(ratios)))
        ratio_hi = max(ratio_hi, float(np.max(ratios)))
    ok = worst_dev <= 1e-3 and 3.5 <= ratio_lo and ratio_hi <= 4.5
    _line("A7 oracle agreement", ok,
          f"max |analytic - extrapolated| = {worst_dev:.2e}; "
          f"convergence ratios in [{ratio_lo:.3f}, {ratio_hi:.3f}]")
    assert ok


def test_a8_limits_and_seam_continuity():
    exact = [(n + 1) ** 2 * math.pi ** 2 / 144.0 for n in range(6)]
    res = wb.solve_spectrum(SpectrumRequest(geometry=geom(1e-8), n_states=6),
                            with_diagnostics=True)
    limit_dev = max(abs(st.energy - e) for st, e in zip(res.states, exact))
    worst_c1 = max(res.diagnostics.c1_residuals)
    from wellbarrier.reference import resolve_v0
    for row in REFERENCE_TABLE:
        r = wb.solve_spectrum(SpectrumRequest(geometry=geom(resolve_v0(row)),
                                              n_states=6))
        worst_c1 = max(worst_c1, max(r.diagnostics.c1_residuals))
    for v0 in (20.0, 29.5, 30.0):
        r = wb.solve_spectrum(SpectrumRequest(geometry=geom(v0), n_states=6))
        worst_c1 = max(worst_c1, max(r.diagnostics.c1_residuals))
    ok = limit_dev <= 1e-6 and worst_c1 <= 1e-10
    _line("A8 limits and seam continuity", ok,
          f"v0=1e-8 vs rigid box max dev {limit_dev:.2e}; "
          f"worst relative C1 residual {worst_c1:.2e}")
    assert ok
