"""Spectrum assembly, eigenfunction normalization, and diagnostics.

``solve_spectrum`` combines the three quantization conditions: generic roots
are bracketed branch by branch (seam neighborhoods excluded), then the
zero-energy and barrier-top conditions are evaluated at the requested v0 and,
when satisfied, the corresponding special states are spliced into the ordered
spectrum.  Every solve ends with a completeness audit: the node count of the
i-th state must equal i, otherwise a state was missed somewhere and the solver
raises instead of returning a silently defective spectrum.

All integrals are composite Simpson with 4096 panels per segment, split at the
potential breakpoints {-b, 0, b} where the integrands lose smoothness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import characteristic as ch
from .model import (
    Eigenstate,
    EnergyBranch,
    PiecewiseWavefunction,
    PotentialGeometry,
    SpectrumResult,
    StateKind,
    seam_tolerance,
)
from .rootfind import RootScan, roots_in_range

__all__ = [
    "SIMPSON_PANELS",
    "SpectrumAuditError",
    "SpectrumRequest",
    "SpecialCondition",
    "SpecialRoot",
    "DoublySpecialRoot",
    "DiagnosticsReport",
    "norm_integral",
    "normalize",
    "count_nodes",
    "overlap",
    "uncertainty_product",
    "solve_spectrum",
    "compute_diagnostics",
    "special_v0_catalog",
    "doubly_special_v0",
]

SIMPSON_PANELS = 4096
ENERGY_STEP_CAP = 0.01
V0_SCAN_STEP = 0.005
V0_SCAN_START = 1e-4
SEAM_CONDITION_REL = 1e-9
NODE_AMPLITUDE_REL = 1e-9
COEFF_RESIDUAL_MAX = 1e-9


class SpectrumAuditError(RuntimeError):
    """A completeness or consistency audit failed; the spectrum is suspect."""


@dataclass(frozen=True)
class SpectrumRequest:
    """Ask for the lowest n_states levels, or all levels up to e_max."""

    geometry: PotentialGeometry
    n_states: int | None = None
    e_max: float | None = None

    def __post_init__(self):
        if (self.n_states is None) == (self.e_max is None):
            raise ValueError("set exactly one of n_states / e_max")
        if self.n_states is not None and self.n_states < 1:
            raise ValueError("n_states must be >= 1")


class SpecialCondition(Enum):
    F_ZERO = "f_zero"
    G_TOP = "g_top"
    BOTH = "both"


@dataclass(frozen=True)
class SpecialRoot:
    """A v0 at which one of the special-state conditions vanishes."""

    condition: SpecialCondition
    v0: float
    state_index: int
    f_residual: float | None = None
    g_residual: float | None = None


@dataclass(frozen=True)
class DoublySpecialRoot:
    """A near-coincident pair of zero-energy and barrier-top special values.

    The two conditions have no common zero at this geometry; what exists is a
    pair of distinct special v0 values lying close together.  Each member is
    refined to machine precision of its own condition and annotated with the
    index of the special state it creates.
    """

    v0_zero_energy: float
    v0_barrier_top: float
    zero_energy_index: int
    barrier_top_index: int
    f_residual: float
    g_residual: float

    @property
    def gap(self) -> float:
        return abs(self.v0_zero_energy - self.v0_barrier_top)

    @property
    def v0(self) -> float:
        """Representative location of the pair (midpoint)."""
        return 0.5 * (self.v0_zero_energy + self.v0_barrier_top)


@dataclass(frozen=True)
class DiagnosticsReport:
    overlap_matrix: np.ndarray
    node_counts: tuple[int, ...]
    uncertainty_products: tuple[float, ...]
    c1_residuals: tuple[float, ...]
    suspected_double_roots: tuple[float, ...] = ()


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def _simpson(ys: np.ndarray, h: float) -> float:
    return h / 3.0 * (ys[0] + ys[-1] + 4.0 * np.sum(ys[1:-1:2]) + 2.0 * np.sum(ys[2:-1:2]))


def _integrate(psi: PiecewiseWavefunction, integrand) -> float:
    """Sum of per-segment Simpson integrals of integrand(segment, xs)."""
    total = 0.0
    for seg in psi.segments:
        xs = np.linspace(seg.x_lo, seg.x_hi, SIMPSON_PANELS + 1)
        total += _simpson(integrand(seg, xs), (seg.x_hi - seg.x_lo) / SIMPSON_PANELS)
    return total


def norm_integral(psi: PiecewiseWavefunction) -> float:
    """Self-overlap integral of psi over [-a, a]."""
    return _integrate(psi, lambda seg, xs: seg.value(xs) ** 2)


def normalize(psi: PiecewiseWavefunction) -> PiecewiseWavefunction:
    """Rescale so the self-overlap is 1; zero-norm input rejected."""
    raw = norm_integral(psi)
    if not (raw > 0.0) or not math.isfinite(raw):
        raise ValueError(f"cannot normalize wavefunction with norm integral {raw}")
    scaled = psi.scaled(1.0 / math.sqrt(raw))
    return PiecewiseWavefunction(geometry=scaled.geometry, segments=scaled.segments, norm=1.0)


def overlap(psi_i: PiecewiseWavefunction, psi_j: PiecewiseWavefunction) -> float:
    """Overlap integral of two states of the same geometry."""
    if psi_i.geometry != psi_j.geometry:
        raise ValueError("overlap requires states of the same geometry")
    total = 0.0
    for si, sj in zip(psi_i.segments, psi_j.segments):
        xs = np.linspace(si.x_lo, si.x_hi, SIMPSON_PANELS + 1)
        total += _simpson(si.value(xs) * sj.value(xs), (si.x_hi - si.x_lo) / SIMPSON_PANELS)
    return total


def count_nodes(psi: PiecewiseWavefunction, samples_per_segment: int = 4096) -> int:
    """Interior sign changes of psi on (-a, a).

    Samples below 1e-9 of the peak amplitude (wall zeros, linear tails merged
    with the axis) carry no sign of their own; such stretches contribute at
    most the sign change implied by the significant values on either side.
    """
    chunks = [seg.value(np.linspace(seg.x_lo, seg.x_hi, samples_per_segment))
              for seg in psi.segments]
    vals = np.concatenate(chunks)
    peak = float(np.max(np.abs(vals)))
    if peak == 0.0:
        return 0
    sig = vals[np.abs(vals) > NODE_AMPLITUDE_REL * peak]
    if sig.size < 2:
        return 0
    signs = np.sign(sig)
    return int(np.sum(signs[1:] * signs[:-1] < 0))


def uncertainty_product(psi: PiecewiseWavefunction) -> float:
    """U = dx * dp for a normalized real state.

    <p> vanishes for real psi and <p^2> is taken as the integral of (psi')^2,
    which equals -<psi psi''> by parts under the hard-wall boundary values.
    """
    x1 = _integrate(psi, lambda seg, xs: xs * seg.value(xs) ** 2)
    x2 = _integrate(psi, lambda seg, xs: xs * xs * seg.value(xs) ** 2)
    p2 = _integrate(psi, lambda seg, xs: seg.derivative(xs) ** 2)
    var_x = x2 - x1 * x1
    return math.sqrt(max(var_x, 0.0)) * math.sqrt(max(p2, 0.0))


# ---------------------------------------------------------------------------
# spectrum assembly
# ---------------------------------------------------------------------------

def _energy_step(geom: PotentialGeometry) -> float:
    return min(ENERGY_STEP_CAP, math.pi ** 2 / (8.0 * geom.a ** 2))


def _window_width(geom: PotentialGeometry) -> float:
    return 10.0 * math.pi ** 2 / (2.0 * geom.a) ** 2


def _scan_branch(geom: PotentialGeometry, branch: EnergyBranch,
                 lo: float, hi: float) -> RootScan:
    if hi <= lo:
        return RootScan(roots=())

    def fn(E):
        return ch.char_on_branch(np.asarray(E, dtype=float), geom, branch) \
            / ch.char_scale(np.asarray(E, dtype=float), geom.v0)

    return roots_in_range(fn, lo, hi, _energy_step(geom))


def _is_zero_energy_special(geom: PotentialGeometry) -> bool:
    if geom.v0 <= 0.0:
        return False
    return abs(ch.f_zero_energy(geom.v0, geom)) <= SEAM_CONDITION_REL * ch.f_scale(geom.v0, geom)


def _is_barrier_top_special(geom: PotentialGeometry) -> bool:
    if geom.v0 <= 0.0:
        return False
    return abs(ch.g_barrier_top(geom.v0, geom)) <= SEAM_CONDITION_REL * ch.g_scale(geom.v0, geom)


def _polish_root(kind: StateKind, E: float, geom: PotentialGeometry) -> float:
    """Secant-polish a refined root on the join Wronskian.

    States attenuated through the barrier are exponentially stiffer in E than
    the bracketing tolerance resolves; a few secant steps on the construction
    Wronskian move the root by O(1e-14) and push the wavefunction's seam
    defect to the double-precision floor.  The step is clamped to the
    bracketing tolerance neighborhood, so it can only sharpen a root, never
    relocate it.
    """
    clamp = 10.0 * 1e-13 * max(1.0, abs(E))
    e1, e2 = E, E + 0.01 * clamp
    w1 = ch.join_wronskian(kind, e1, geom)
    w2 = ch.join_wronskian(kind, e2, geom)
    best_e, best_w = (e1, abs(w1)) if abs(w1) <= abs(w2) else (e2, abs(w2))
    for _ in range(12):
        if w2 == w1:
            break
        e3 = e2 - w2 * (e2 - e1) / (w2 - w1)
        if not math.isfinite(e3) or abs(e3 - E) > clamp:
            break
        e1, w1 = e2, w2
        e2, w2 = e3, ch.join_wronskian(kind, e3, geom)
        if abs(w2) < best_w:
            best_e, best_w = e2, abs(w2)
        if w2 == 0.0:
            break
    return best_e


def _make_state(kind: StateKind, E: float, geom: PotentialGeometry) -> Eigenstate:
    """Build and normalize one eigenstate; index assigned after sorting."""
    if kind is StateKind.GENERIC:
        E = _polish_root(kind, E, geom)
    coeffs, raw = ch.construct_state(kind, E, geom)
    if coeffs.residual > COEFF_RESIDUAL_MAX:
        raise SpectrumAuditError(
            f"matching residual {coeffs.residual:.3e} at E={E} exceeds "
            f"{COEFF_RESIDUAL_MAX}; spurious root suspected")
    raw_norm = norm_integral(raw)
    if not (raw_norm > 0.0) or not math.isfinite(raw_norm):
        raise SpectrumAuditError(f"degenerate norm integral {raw_norm} at E={E}")
    psi = normalize(raw)
    return Eigenstate(index=-1, energy=E, kind=kind, coefficients=coeffs,
                      wavefunction=psi, norm_constant=1.0 / math.sqrt(raw_norm))


def solve_spectrum(req: SpectrumRequest, with_diagnostics: bool = True) -> SpectrumResult:
    """Complete labeled spectrum with node audit; see the module docstring."""
    geom = req.geometry
    v0 = geom.v0
    eps = seam_tolerance(geom)
    target = req.n_states
    e_cap = req.e_max
    width = _window_width(geom)

    energies: list[tuple[float, StateKind]] = []
    if _is_zero_energy_special(geom):
        energies.append((0.0, StateKind.ZERO_ENERGY))
    if _is_barrier_top_special(geom):
        energies.append((v0, StateKind.BARRIER_TOP))

    dips: list[float] = []

    def add_scan(scan: RootScan):
        dips.extend(scan.suspected_double_roots)
        for res in scan.roots:
            E = res.root
            if abs(E) <= eps or abs(E - v0) <= eps:
                continue  # seam grazer: governed by the f/g conditions
            energies.append((E, StateKind.GENERIC))

    if v0 > 0.0:
        add_scan(_scan_branch(geom, EnergyBranch.BELOW_ZERO, -v0 + eps, -eps))
        add_scan(_scan_branch(geom, EnergyBranch.MID_BAND, eps, v0 - eps))

    # above-barrier windows, extended until the request is satisfiable
    top_lo = v0 + eps
    if e_cap is not None:
        if e_cap > top_lo:
            add_scan(_scan_branch(geom, EnergyBranch.ABOVE_BARRIER, top_lo, e_cap))
    else:
        hi = top_lo
        for _ in range(400):
            lo, hi = hi, hi + width
            add_scan(_scan_branch(geom, EnergyBranch.ABOVE_BARRIER, lo, hi))
            if len(energies) >= target:
                break
        else:
            raise SpectrumAuditError(
                f"could not locate {target} states below E={hi}; scan aborted")

    energies.sort(key=lambda t: t[0])
    if e_cap is not None:
        energies = [(E, kind) for (E, kind) in energies if E <= e_cap]

    built = [_make_state(kind, E, geom) for E, kind in energies]
    nodes = [count_nodes(st.wavefunction) for st in built]
    for i, (st, n) in enumerate(zip(built, nodes)):
        if n != i:
            lo = built[i - 1].energy if i > 0 else -v0
            raise SpectrumAuditError(
                f"node audit failed: state #{i} at E={st.energy:.9g} has {n} nodes; "
                f"a state appears to be missing in ({lo:.9g}, {st.energy:.9g})")

    if target is not None:
        built = built[:target]
        nodes = nodes[:target]
    states = tuple(
        Eigenstate(index=i, energy=st.energy, kind=st.kind,
                   coefficients=st.coefficients, wavefunction=st.wavefunction,
                   norm_constant=st.norm_constant)
        for i, st in enumerate(built))

    diagnostics = None
    if with_diagnostics:
        diagnostics = compute_diagnostics(states, node_counts=tuple(nodes),
                                          suspected_double_roots=tuple(dips))
    return SpectrumResult(geometry=geom, states=states, diagnostics=diagnostics)


def compute_diagnostics(states: tuple[Eigenstate, ...],
                        node_counts: tuple[int, ...] | None = None,
                        suspected_double_roots: tuple[float, ...] = ()) -> DiagnosticsReport:
    n = len(states)
    overlaps = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            overlaps[i, j] = overlaps[j, i] = overlap(states[i].wavefunction,
                                                      states[j].wavefunction)
        overlaps[i, i] = norm_integral(states[i].wavefunction)
    if node_counts is None:
        node_counts = tuple(count_nodes(st.wavefunction) for st in states)
    uncertainties = tuple(uncertainty_product(st.wavefunction) for st in states)
    residuals = []
    for st in states:
        dv, dd = st.wavefunction.seam_residuals()
        residuals.append(max(dv, dd) / st.wavefunction.amplitude())
    return DiagnosticsReport(
        overlap_matrix=overlaps,
        node_counts=node_counts,
        uncertainty_products=uncertainties,
        c1_residuals=tuple(residuals),
        suspected_double_roots=suspected_double_roots,
    )


# ---------------------------------------------------------------------------
# special-v0 catalogs
# ---------------------------------------------------------------------------

def _condition_roots(condition: SpecialCondition, count: int,
                     geom: PotentialGeometry, v0_stop: float | None = None) -> list[float]:
    """First roots of f or g in v0, excluding the degenerate q = 0 limit."""
    if condition is SpecialCondition.F_ZERO:
        fn_raw, scale = ch.f_zero_energy, ch.f_scale
    else:
        fn_raw, scale = ch.g_barrier_top, ch.g_scale

    def fn(v):
        v = np.asarray(v, dtype=float)
        return fn_raw(v, geom) / np.maximum(scale(v, geom), 1e-300)

    roots: list[float] = []
    lo = V0_SCAN_START
    window = 10.0
    for _ in range(200):
        hi = lo + window
        scan = roots_in_range(fn, lo, hi, V0_SCAN_STEP)
        roots.extend(r.root for r in scan.roots)
        enough = len(roots) >= count
        covered = v0_stop is None or hi > v0_stop
        if enough and covered:
            break
        lo = hi
    return roots


def _special_state_index(condition: SpecialCondition, v0_root: float,
                         geom: PotentialGeometry) -> int:
    special_geom = PotentialGeometry(a=geom.a, b=geom.b, v0=v0_root)
    if condition is SpecialCondition.F_ZERO:
        kind, E = StateKind.ZERO_ENERGY, 0.0
    else:
        kind, E = StateKind.BARRIER_TOP, v0_root
    psi = normalize(ch.build_eigenfunction(kind, E, special_geom))
    return count_nodes(psi)


def special_v0_catalog(condition: SpecialCondition, count: int,
                       geom: PotentialGeometry) -> list[SpecialRoot]:
    """First `count` special v0 values for one condition, with state indices."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if condition is SpecialCondition.BOTH:
        raise ValueError("use doubly_special_v0 for paired special values")
    roots = _condition_roots(condition, count, geom)[:count]
    out = []
    for r in roots:
        idx = _special_state_index(condition, r, geom)
        probe = PotentialGeometry(a=geom.a, b=geom.b, v0=r)
        fr = abs(ch.f_zero_energy(r, probe))
        gr = abs(ch.g_barrier_top(r, probe))
        out.append(SpecialRoot(condition=condition, v0=r, state_index=idx,
                               f_residual=fr, g_residual=gr))
    return out


PAIR_GAP_REL = 0.05


def doubly_special_v0(count: int, geom: PotentialGeometry) -> list[DoublySpecialRoot]:
    """Near-coincident (zero-energy, barrier-top) special pairs.

    The two conditions have no exact common root at a given geometry; what the
    spectrum exhibits is a pair of distinct special v0 values close enough
    that both special states appear in essentially the same potential.  Each
    returned pair couples a zero-energy root with its mutually nearest
    barrier-top root within 5% relative separation.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    f_roots = _condition_roots(SpecialCondition.F_ZERO, count + 2, geom)
    if not f_roots:
        return []
    g_roots = _condition_roots(SpecialCondition.G_TOP, count + 2, geom,
                               v0_stop=f_roots[-1] + 1.0)
    pairs: list[DoublySpecialRoot] = []
    for fr in f_roots:
        if not g_roots:
            break
        gaps = [abs(fr - gr) for gr in g_roots]
        j = int(np.argmin(gaps))
        gr = g_roots[j]
        # mutual nearest: fr must also be the closest f-root to gr
        if min(abs(gr - x) for x in f_roots) < abs(gr - fr) - 1e-15:
            continue
        mid = 0.5 * (fr + gr)
        if abs(fr - gr) > PAIR_GAP_REL * max(1.0, mid):
            continue
        zero_idx = _special_state_index(SpecialCondition.F_ZERO, fr, geom)
        top_idx = _special_state_index(SpecialCondition.G_TOP, gr, geom)
        pairs.append(DoublySpecialRoot(
            v0_zero_energy=fr,
            v0_barrier_top=gr,
            zero_energy_index=zero_idx,
            barrier_top_index=top_idx,
            f_residual=abs(ch.f_zero_energy(fr, geom)),
            g_residual=abs(ch.g_barrier_top(gr, geom)),
        ))
        if len(pairs) == count:
            break
    return pairs
