"""Pure request handlers shared by the HTTP routes and the CLI client."""

from __future__ import annotations

import numpy as np

from ..model import PotentialGeometry
from ..oracle import OracleMismatchError, cross_validate
from ..reference import TOP_MARK, compare_table
from ..spectrum import (
    SpecialCondition,
    SpectrumRequest,
    doubly_special_v0,
    solve_spectrum,
    special_v0_catalog,
)
from .schemas import (
    OracleParams,
    OracleResponse,
    OracleRow,
    SpecialParams,
    SpecialResponse,
    SpecialRow,
    SpectrumParams,
    SpectrumResponse,
    SpectrumRow,
    TableParams,
    TableResponse,
    TableRow,
    WavefunctionMeta,
    WavefunctionParams,
    WavefunctionResponse,
    WavefunctionRow,
)

__all__ = ["spectrum_response", "special_response", "wavefunction_response",
           "oracle_response", "table_response"]


def _solve(params: SpectrumParams, n_states_override: int | None = None):
    geom = PotentialGeometry(a=params.a, b=params.b, v0=params.v0)
    n = n_states_override if n_states_override is not None else params.resolved_n_states()
    req = SpectrumRequest(geometry=geom, n_states=n,
                          e_max=None if n is not None else params.e_max)
    return solve_spectrum(req)


def spectrum_response(params: SpectrumParams) -> SpectrumResponse:
    result = _solve(params)
    diag = result.diagnostics
    rows = [SpectrumRow(index=st.index, energy=st.energy, kind=st.kind.value,
                        nodes=diag.node_counts[st.index],
                        uncertainty=diag.uncertainty_products[st.index])
            for st in result.states]
    n = len(result.states)
    off = 0.0
    if n > 1:
        mask = ~np.eye(n, dtype=bool)
        off = float(np.max(np.abs(diag.overlap_matrix[mask])))
    return SpectrumResponse(params=params, rows=rows,
                            max_offdiag_overlap=off,
                            max_c1_residual=float(max(diag.c1_residuals, default=0.0)))


def special_response(params: SpecialParams) -> SpecialResponse:
    geom = PotentialGeometry(a=params.a, b=params.b, v0=params.v0)
    rows: list[SpecialRow] = []
    if params.condition == "both":
        for pair in doubly_special_v0(params.count, geom):
            rows.append(SpecialRow(
                condition="both", index=pair.zero_energy_index,
                v0=pair.v0_zero_energy,
                f_residual=pair.f_residual, g_residual=pair.g_residual,
                paired_index=pair.barrier_top_index, paired_v0=pair.v0_barrier_top))
    else:
        cond = SpecialCondition.F_ZERO if params.condition == "f" else SpecialCondition.G_TOP
        for root in special_v0_catalog(cond, params.count, geom):
            rows.append(SpecialRow(condition=params.condition, index=root.state_index,
                                   v0=root.v0, f_residual=root.f_residual,
                                   g_residual=root.g_residual))
    return SpecialResponse(params=params, rows=rows)


def wavefunction_response(params: WavefunctionParams) -> WavefunctionResponse:
    result = _solve(params, n_states_override=params.state_index + 1)
    if params.state_index >= len(result.states):
        raise ValueError(f"state index {params.state_index} out of range")
    st = result.states[params.state_index]
    diag = result.diagnostics
    xs = np.linspace(-params.a, params.a, params.samples)
    psi = st.wavefunction(xs)
    meta = WavefunctionMeta(index=st.index, energy=st.energy, kind=st.kind.value,
                            nodes=diag.node_counts[st.index],
                            norm_constant=st.norm_constant,
                            uncertainty=diag.uncertainty_products[st.index])
    rows = [WavefunctionRow(x=float(x), psi=float(p)) for x, p in zip(xs, psi)]
    return WavefunctionResponse(params=params, meta=meta, rows=rows)


def oracle_response(params: OracleParams) -> OracleResponse:
    result = _solve(params)
    grids = (params.grid_n // 4, params.grid_n // 2, params.grid_n)
    try:
        report = cross_validate(result, grids=grids)
        matched = True
    except OracleMismatchError as exc:
        if exc.report is None:
            raise
        report = exc.report
        matched = False
    rows: list[OracleRow] = []
    n_analytic = len(report.analytic)
    for gi, n in enumerate(report.grid_sizes):
        for idx in range(report.eigenvalues_per_grid.shape[1]):
            val = float(report.eigenvalues_per_grid[gi, idx])
            dev = float(report.analytic[idx] - val) if idx < n_analytic else None
            rows.append(OracleRow(grid_n=n, index=idx, eigenvalue=val, deviation=dev))
    for idx in range(len(report.extrapolated)):
        val = float(report.extrapolated[idx])
        dev = None
        if idx < n_analytic and not np.isnan(report.deviations[idx]):
            dev = float(report.deviations[idx])
        ratio = float(report.convergence_ratios[idx])
        rows.append(OracleRow(grid_n=0, index=idx, eigenvalue=val, deviation=dev,
                              ratio=None if np.isnan(ratio) else ratio))
    return OracleResponse(params=params, rows=rows, matched=matched,
                          unmatched_analytic=list(report.unmatched_analytic),
                          unmatched_oracle=list(report.unmatched_oracle))


def table_response(params: TableParams) -> TableResponse:
    comparisons = compare_table(params.a, params.b)
    rows: list[TableRow] = []
    extra: list[str] = []
    max_dev = 0.0
    all_ok = True
    for comp in comparisons:
        for entry in comp.entries:
            rows.append(TableRow(
                row_id=comp.row_id, level=f"E{entry.level}",
                v0_nominal=comp.v0_nominal, v0_used=comp.v0_used,
                reference=str(entry.reference), computed=entry.computed_energy,
                deviation=entry.deviation, kind=entry.computed_kind.value,
                ok=entry.ok))
            max_dev = max(max_dev, abs(entry.deviation))
            all_ok = all_ok and entry.ok
        if comp.estar is not None:
            rows.append(TableRow(
                row_id=comp.row_id, level=f"E{comp.estar.level}*",
                v0_nominal=comp.v0_nominal, v0_used=comp.v0_used,
                reference=TOP_MARK, computed=comp.estar.computed_energy,
                deviation=comp.estar.deviation, kind=comp.estar.computed_kind.value,
                ok=comp.estar.ok))
        for e in comp.extra_states:
            extra.append(f"row {comp.row_id} (v0={comp.v0_used:.9g}): E={e:.9g}")
    return TableResponse(params=params, rows=rows, extra_states=extra,
                         max_abs_deviation=max_dev, all_ok=all_ok)
