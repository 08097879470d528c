"""Pinned reference spectra for the standard geometry (a=6, b=2).

The benchmark table lists the first six levels at eleven values of
v0, marking levels that sit exactly at E = 0 or E = v0, plus a trailing
column for higher barrier-top levels.  Special v0 values are printed there
with four or five digits; the solver refines each one to the nearby exact root
of its condition before solving, since the special states only exist at the
exact roots.

Verified caveats, reproduced faithfully by the comparison (they fail, and are
reported as reference defects rather than papered over):

* row 9 skips a level: the computed spectrum at v0=12.7396 has a state at
  E=2.1464 (confirmed independently by the finite-difference oracle), so the
  printed sixth entry 2.72435 is really the seventh level;
* row 12 (v0=0.3125) marks E0="0" and E1="v0", but neither condition holds
  there (f=0.477, g=0.474); the true levels are 0.00749 and 0.29999;
* the trailing barrier-top claims at rows 8-10 hold only approximately at
  those v0; the exact barrier-top states live at the paired roots of the
  barrier-top condition (e.g. 4.0369 rather than 4.0998).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import characteristic as ch
from .model import PotentialGeometry, StateKind
from .rootfind import Bracket, refine
from .spectrum import SpectrumRequest, solve_spectrum

__all__ = ["ZERO_MARK", "TOP_MARK", "ReferenceRow", "REFERENCE_TABLE",
           "EntryComparison", "RowComparison", "resolve_v0", "compare_row",
           "compare_table"]

#: Entry markers: a level claimed to sit exactly at E = 0 / E = v0.
ZERO_MARK = "0"
TOP_MARK = "V0"

TIGHT_TOL = 1e-4
LOOSE_TOL = 2e-3


@dataclass(frozen=True)
class ReferenceRow:
    row_id: int
    v0_nominal: float
    entries: tuple  # floats, ZERO_MARK, or TOP_MARK
    tolerance: float
    special: str | None = None        # "f" -> refine v0 to a zero-energy root,
    #                                   "g" -> to a barrier-top root
    estar_index: int | None = None    # claimed higher barrier-top level index


REFERENCE_TABLE: tuple[ReferenceRow, ...] = (
    ReferenceRow(1, 0.0001, (0.0685, 0.2741, 0.6169, 1.0966, 1.7135, 2.4674), TIGHT_TOL),
    ReferenceRow(2, 5.0, (-3.733845, -0.4354, 0.4972, 0.7227, 1.9639, 2.3852), LOOSE_TOL),
    ReferenceRow(3, 0.0655, (TOP_MARK, 0.2756, 0.6162, 1.0979, 1.7132, 2.4678), TIGHT_TOL, special="g"),
    ReferenceRow(4, 0.2981, (0.0124, TOP_MARK, 0.6057, 1.1216, 1.7088, 2.4763), TIGHT_TOL, special="g"),
    ReferenceRow(5, 0.5816, (-0.1096, 0.3349, TOP_MARK, 1.1795, 1.6970, 2.5001), TIGHT_TOL, special="g"),
    ReferenceRow(6, 1.3322, (-0.5809, 0.4015, 0.5112, TOP_MARK, 1.6639, 2.6041), TIGHT_TOL, special="g"),
    ReferenceRow(7, 0.3333, (ZERO_MARK, 0.3027, 0.6032, 1.1275, 1.7077, 2.4784), TIGHT_TOL, special="f"),
    ReferenceRow(8, 4.0998, (-2.909757, ZERO_MARK, 0.4865, 0.8392, 1.9127, 2.4882), LOOSE_TOL,
                 special="f", estar_index=6),
    ReferenceRow(9, 12.7396, (-11.1434197, -6.510498, ZERO_MARK, 0.53823, 0.88086, 2.72435), LOOSE_TOL,
                 special="f", estar_index=12),
    ReferenceRow(10, 26.31113, (-24.50234846, -19.139948039, -10.484039, ZERO_MARK, 0.560662, 0.8940711),
                 LOOSE_TOL, special="f", estar_index=17),
    ReferenceRow(12, 0.3125, (ZERO_MARK, TOP_MARK, 0.6047, 1.1240, 1.7084, 2.4771), LOOSE_TOL),
)

V0_SNAP_WINDOW_REL = 1e-3


def resolve_v0(row: ReferenceRow, geom_a: float = 6.0, geom_b: float = 2.0) -> float:
    """Refine a printed special v0 to the exact root of its condition.

    Non-special rows use the printed value as-is.  The refinement window is
    narrow (0.1% relative), so a nominal value only snaps to the root it is a
    truncation of.
    """
    if row.special is None:
        return row.v0_nominal
    geom = PotentialGeometry(a=geom_a, b=geom_b, v0=max(row.v0_nominal, 1e-6))
    fn = ch.f_zero_energy if row.special == "f" else ch.g_barrier_top
    half = V0_SNAP_WINDOW_REL * max(1.0, row.v0_nominal)
    lo = max(row.v0_nominal - half, 1e-9)
    hi = row.v0_nominal + half
    f_lo, f_hi = fn(lo, geom), fn(hi, geom)
    if f_lo * f_hi > 0.0:
        raise ValueError(
            f"row {row.row_id}: no {row.special}-root within {half} of v0={row.v0_nominal}")
    res = refine(lambda v: fn(float(v), geom), Bracket(lo, hi, f_lo, f_hi))
    return res.root


@dataclass(frozen=True)
class EntryComparison:
    level: int                 # 0..5, or the estar index
    reference: object          # float, ZERO_MARK or TOP_MARK
    computed_energy: float
    computed_kind: StateKind
    deviation: float
    tolerance: float
    ok: bool


@dataclass(frozen=True)
class RowComparison:
    row_id: int
    v0_nominal: float
    v0_used: float
    entries: tuple[EntryComparison, ...]
    estar: EntryComparison | None
    extra_states: tuple[float, ...]  # computed levels the reference row skips

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def max_deviation(self) -> float:
        return max(abs(e.deviation) for e in self.entries)


def _reference_value(entry, v0: float) -> float:
    if entry == ZERO_MARK:
        return 0.0
    if entry == TOP_MARK:
        return v0
    return float(entry)


def compare_row(row: ReferenceRow, a: float = 6.0, b: float = 2.0) -> RowComparison:
    """Solve at the row's (refined) v0 and compare the first six levels.

    A marked entry ("0"/"V0") passes only if the computed state at that
    position has the matching special kind; numeric entries pass on absolute
    deviation within the row tolerance.
    """
    v0 = resolve_v0(row, a, b)
    geom = PotentialGeometry(a=a, b=b, v0=v0)
    n_main = len(row.entries)
    n_solve = max(n_main, (row.estar_index + 1) if row.estar_index else 0)
    result = solve_spectrum(SpectrumRequest(geometry=geom, n_states=n_solve),
                            with_diagnostics=False)
    comparisons = []
    for i, entry in enumerate(row.entries):
        st = result.states[i]
        ref_val = _reference_value(entry, v0)
        dev = st.energy - ref_val
        if entry == ZERO_MARK:
            ok = st.kind is StateKind.ZERO_ENERGY
        elif entry == TOP_MARK:
            ok = st.kind is StateKind.BARRIER_TOP
        else:
            ok = abs(dev) <= row.tolerance
        comparisons.append(EntryComparison(
            level=i, reference=entry, computed_energy=st.energy,
            computed_kind=st.kind, deviation=dev, tolerance=row.tolerance, ok=ok))

    estar = None
    if row.estar_index is not None:
        st = result.states[row.estar_index]
        estar = EntryComparison(
            level=row.estar_index, reference=TOP_MARK, computed_energy=st.energy,
            computed_kind=st.kind, deviation=st.energy - v0, tolerance=row.tolerance,
            ok=st.kind is StateKind.BARRIER_TOP)

    # levels present in the solved spectrum but absent from the printed row:
    # a computed low-lying E that is not the best match of any printed entry
    n_all = len(result.states)
    matched = set()
    for entry in row.entries:
        ref_val = _reference_value(entry, v0)
        j = min(range(n_all), key=lambda idx: abs(result.states[idx].energy - ref_val))
        matched.add(j)
    extra = tuple(result.states[j].energy for j in range(min(n_main, n_all))
                  if j not in matched)

    return RowComparison(row_id=row.row_id, v0_nominal=row.v0_nominal, v0_used=v0,
                         entries=tuple(comparisons), estar=estar, extra_states=extra)


def compare_table(a: float = 6.0, b: float = 2.0) -> list[RowComparison]:
    """Compare every reference row; see module docstring for known defects."""
    return [compare_row(row, a, b) for row in REFERENCE_TABLE]
