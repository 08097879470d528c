"""Core model: potential geometry, energy branches, and piecewise wavefunctions.

Units are fixed to 2m = 1 and hbar = 1 throughout, so hbar^2/2m = 1 and the
wavenumber of a free region is simply sqrt(E).  All lengths, energies and
wavenumbers are dimensionless; there is no runtime unit conversion anywhere.

The potential is an anti-symmetric square well/barrier block of half-width b
centered at the origin (well of depth v0 on [-b, 0], barrier of height v0 on
(0, b]) between hard walls at x = +/-a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "WALL",
    "PotentialGeometry",
    "EnergyBranch",
    "WaveParams",
    "SegmentBasis",
    "Segment",
    "PiecewiseWavefunction",
    "StateKind",
    "CoefficientSet",
    "Eigenstate",
    "SpectrumResult",
    "potential_at",
    "classify_energy",
    "seam_tolerance",
    "wavenumbers",
    "evaluate_wavefunction",
]

#: Marker returned by :func:`potential_at` at and beyond the rigid walls.
WALL = math.inf


@dataclass(frozen=True)
class PotentialGeometry:
    """Geometry of the well/barrier block between walls at x = +/-a.

    a  : right wall position (walls at +/-a)
    b  : half-width of the well+barrier block, 0 < b < a
    v0 : depth of the well and height of the barrier, v0 >= 0
    """

    a: float = 6.0
    b: float = 2.0
    v0: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.b < self.a):
            raise ValueError(f"geometry requires 0 < b < a, got a={self.a}, b={self.b}")
        if self.v0 < 0.0:
            raise ValueError(f"v0 must be >= 0, got {self.v0}")
        if not all(math.isfinite(v) for v in (self.a, self.b, self.v0)):
            raise ValueError("geometry parameters must be finite")

    @property
    def d(self) -> float:
        """Width of each zero-potential flank, d = a - b."""
        return self.a - self.b


class EnergyBranch(Enum):
    """Branch of the spectrum an energy belongs to.

    The two seams E = 0 and E = v0 are handled only by the dedicated
    special-state conditions, never by the generic characteristic function.
    """

    BELOW_ZERO = "below_zero"      # -v0 < E < 0
    MID_BAND = "mid_band"          # 0 < E < v0
    ABOVE_BARRIER = "above_barrier"  # E > v0
    SEAM_ZERO = "seam_zero"        # E = 0
    SEAM_TOP = "seam_top"          # E = v0


def seam_tolerance(geom: PotentialGeometry) -> float:
    """Snap distance below which an energy is treated as sitting on a seam."""
    return 1e-9 * max(1.0, geom.v0)


def classify_energy(E: float, geom: PotentialGeometry) -> EnergyBranch:
    """Map an energy to its branch, snapping to seams within tolerance."""
    if E <= -geom.v0:
        if geom.v0 == 0.0 and E == 0.0:
            return EnergyBranch.SEAM_ZERO
        raise ValueError(f"E={E} is at or below the potential minimum -v0={-geom.v0}")
    tol = seam_tolerance(geom)
    if abs(E) <= tol:
        return EnergyBranch.SEAM_ZERO
    if abs(E - geom.v0) <= tol:
        return EnergyBranch.SEAM_TOP
    if E < 0.0:
        return EnergyBranch.BELOW_ZERO
    if E < geom.v0:
        return EnergyBranch.MID_BAND
    return EnergyBranch.ABOVE_BARRIER


def potential_at(x: float, geom: PotentialGeometry) -> float:
    """Potential value at x; WALL (inf) at and beyond the walls.

    The block is -v0 on [-b, 0] and +v0 on (0, b]; x = 0 belongs to the well
    side so that sampled data is reproducible bit-for-bit.
    """
    if abs(x) >= geom.a:
        return WALL
    if -geom.b <= x <= 0.0:
        return -geom.v0
    if 0.0 < x <= geom.b:
        return geom.v0
    return 0.0


@dataclass(frozen=True)
class WaveParams:
    """Branch-resolved wave parameters for a given (E, v0).

    Exactly one of k/kappa is set (k for E >= 0) and exactly one of r/rho
    (r for E <= v0).  p = sqrt(E + v0) is real for every admissible energy,
    q = sqrt(v0) and s = q*sqrt(2) depend on the geometry alone.
    """

    branch: EnergyBranch
    p: float
    q: float
    s: float
    k: float | None = None
    kappa: float | None = None
    r: float | None = None
    rho: float | None = None


def wavenumbers(E: float, geom: PotentialGeometry) -> WaveParams:
    """Resolve the wave parameters of energy E; rejects E <= -v0."""
    v0 = geom.v0
    if E <= -v0 and not (v0 == 0.0 and E == 0.0):
        raise ValueError(f"no bound state below the potential minimum: E={E}, -v0={-v0}")
    branch = classify_energy(E, geom)
    p = math.sqrt(max(E + v0, 0.0))
    q = math.sqrt(v0)
    s = q * math.sqrt(2.0)
    k = kappa = r = rho = None
    if E >= 0.0:
        k = math.sqrt(E)
    else:
        kappa = math.sqrt(-E)
    if E <= v0:
        r = math.sqrt(v0 - E)
    else:
        rho = math.sqrt(E - v0)
    return WaveParams(branch=branch, p=p, q=q, s=s, k=k, kappa=kappa, r=r, rho=rho)


class SegmentBasis(Enum):
    TRIG_SIN_COS = "trig_sin_cos"      # c1*sin(w*u) + c2*cos(w*u)
    HYPER_SINH_COSH = "hyper_sinh_cosh"  # c1*exp(w*u) + c2*exp(-w*u)
    LINEAR = "linear"                  # c1*u + c2
    WALL_SINE = "wall_sine"            # c1*sin(w*u), pinned to zero at u = 0


@dataclass(frozen=True)
class Segment:
    """One closed-form piece of a wavefunction on [x_lo, x_hi].

    The basis argument is u = x - x_ref; wall segments use x_ref = -/+a so the
    Dirichlet zero at the wall is exact by construction.  Hyperbolic segments
    are stored as growing/decaying exponential components rather than a
    sinh/cosh pair: deep levels mix components whose magnitudes differ by
    e^(2 w b), and the exponential split keeps their evaluation free of
    catastrophic cancellation (sinh/cosh combinations remain expressible
    exactly, e.g. sinh(w u) has c1 = 1/2, c2 = -1/2).
    """

    x_lo: float
    x_hi: float
    basis: SegmentBasis
    c1: float
    c2: float
    w: float
    x_ref: float = 0.0

    def value(self, x):
        u = np.asarray(x, dtype=float) - self.x_ref
        if self.basis is SegmentBasis.LINEAR:
            return self.c1 * u + self.c2
        if self.basis is SegmentBasis.HYPER_SINH_COSH:
            return self.c1 * np.exp(self.w * u) + self.c2 * np.exp(-self.w * u)
        # TRIG_SIN_COS and WALL_SINE evaluate identically (c2 = 0 for walls)
        return self.c1 * np.sin(self.w * u) + self.c2 * np.cos(self.w * u)

    def derivative(self, x):
        u = np.asarray(x, dtype=float) - self.x_ref
        if self.basis is SegmentBasis.LINEAR:
            return self.c1 * np.ones_like(u)
        if self.basis is SegmentBasis.HYPER_SINH_COSH:
            return self.w * (self.c1 * np.exp(self.w * u) - self.c2 * np.exp(-self.w * u))
        return self.w * (self.c1 * np.cos(self.w * u) - self.c2 * np.sin(self.w * u))

    def scaled(self, factor: float) -> "Segment":
        return Segment(self.x_lo, self.x_hi, self.basis,
                       self.c1 * factor, self.c2 * factor, self.w, self.x_ref)


@dataclass(frozen=True)
class PiecewiseWavefunction:
    """Four-segment closed-form wavefunction on [-a, a].

    Segments partition [-a, a] with breakpoints exactly at -b, 0, b.  norm is
    the current value of the self-overlap integral (1.0 once normalized).
    """

    geometry: PotentialGeometry
    segments: tuple[Segment, ...]
    norm: float = math.nan

    def __post_init__(self):
        a, b = self.geometry.a, self.geometry.b
        breaks = [-a, -b, 0.0, b, a]
        if len(self.segments) != 4:
            raise ValueError("wavefunction must have exactly 4 segments")
        for seg, lo, hi in zip(self.segments, breaks[:-1], breaks[1:]):
            if seg.x_lo != lo or seg.x_hi != hi:
                raise ValueError("segment intervals must break exactly at -b, 0, b")

    def _segment_index(self, x: np.ndarray) -> np.ndarray:
        b = self.geometry.b
        edges = np.array([-b, 0.0, b])
        return np.searchsorted(edges, x, side="left")

    def __call__(self, x):
        return self._eval(x, deriv=False)

    def derivative(self, x):
        return self._eval(x, deriv=True)

    def _eval(self, x, deriv: bool):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(np.abs(arr) > self.geometry.a * (1 + 1e-15)):
            raise ValueError("position outside [-a, a]")
        out = np.empty_like(arr)
        idx = self._segment_index(arr)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if np.any(mask):
                vals = seg.derivative(arr[mask]) if deriv else seg.value(arr[mask])
                out[mask] = vals
        if np.isscalar(x) or np.ndim(x) == 0:
            return float(out[0])
        return out

    def amplitude(self, samples_per_segment: int = 2048) -> float:
        """Max |psi| over a dense sample of the domain."""
        peak = 0.0
        for seg in self.segments:
            xs = np.linspace(seg.x_lo, seg.x_hi, samples_per_segment)
            peak = max(peak, float(np.max(np.abs(seg.value(xs)))))
        return peak

    def seam_residuals(self) -> tuple[float, float]:
        """Worst value and derivative mismatch across the interior breakpoints."""
        dv = dd = 0.0
        for left, right in zip(self.segments[:-1], self.segments[1:]):
            xj = left.x_hi
            dv = max(dv, abs(float(left.value(xj)) - float(right.value(xj))))
            dd = max(dd, abs(float(left.derivative(xj)) - float(right.derivative(xj))))
        return dv, dd

    def scaled(self, factor: float) -> "PiecewiseWavefunction":
        return PiecewiseWavefunction(
            geometry=self.geometry,
            segments=tuple(seg.scaled(factor) for seg in self.segments),
            norm=self.norm * factor * factor,
        )


def evaluate_wavefunction(psi: PiecewiseWavefunction, x):
    """Evaluate psi at x (scalar or array); positions outside [-a, a] rejected."""
    return psi(x)


class StateKind(Enum):
    GENERIC = "generic"
    ZERO_ENERGY = "zero_energy"
    BARRIER_TOP = "barrier_top"


@dataclass(frozen=True)
class CoefficientSet:
    """Matching coefficients with the left-wall amplitude pinned to A = 1.

    residual is ||M @ (A, B, C, D)|| / ||M||_F for the branch matching matrix
    the coefficients were solved from; a large value signals a spurious root.
    """

    A: float
    B: float
    C: float
    D: float
    residual: float

    def as_vector(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C, self.D])


@dataclass(frozen=True)
class Eigenstate:
    index: int
    energy: float
    kind: StateKind
    coefficients: CoefficientSet
    wavefunction: PiecewiseWavefunction
    norm_constant: float  # factor applied to the A=1 solution during normalization


@dataclass(frozen=True)
class SpectrumResult:
    geometry: PotentialGeometry
    states: tuple[Eigenstate, ...]
    diagnostics: "object | None" = None  # DiagnosticsReport, attached by the solver
