"""Scalar root location: dense bracketing scan plus safeguarded refinement.

The scan walks a uniform grid, collects every sign-change cell, and adaptively
halves the step (up to six times) inside any cell where |F| dips well below
the local scale without changing sign, so near-tangent doublets are resolved
rather than skipped.  Dips that survive all refinement levels are reported as
suspected double roots instead of being dropped silently.

Everything here is deterministic: fixed scan order, no randomized steps, so
identical inputs produce bit-identical root lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["Bracket", "RootResult", "RootScan", "bracket_scan", "refine", "roots_in_range"]

DIP_RATIO = 1e-3
MAX_HALVINGS = 6
WIDTH_REL = 1e-13
DEDUP_REL = 1e-10
MAX_ITER = 200


def _scalar(y) -> float:
    """Collapse a scalar-or-single-element function value to a float."""
    arr = np.asarray(y)
    return float(arr.item()) if arr.ndim else float(arr)


@dataclass(frozen=True)
class Bracket:
    """Sign-change interval: f_lo * f_hi < 0 with lo < hi."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    bracket_width_final: float


@dataclass(frozen=True)
class RootScan:
    """Roots found in a range plus any unresolved near-tangent dips."""

    roots: tuple[RootResult, ...]
    suspected_double_roots: tuple[float, ...] = field(default_factory=tuple)


def _maximize_against(fn: Callable, lo: float, hi: float, sign: float) -> float:
    """Golden-section peak of sign*fn on [lo, hi] (the dip's far side)."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = sign * _scalar(fn(x1)), sign * _scalar(fn(x2))
    while hi - lo > 1e-14 * max(1.0, abs(lo), abs(hi)):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = sign * _scalar(fn(x1))
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = sign * _scalar(fn(x2))
    return 0.5 * (lo + hi)


def _subdivide(fn: Callable, lo: float, hi: float, f_lo: float, f_hi: float,
               brackets: list[Bracket], dips: list[float]) -> None:
    """Resolve a dip cell at six-halvings resolution.

    The cell is sampled at 2^6 sub-steps hunting for sign changes.  If the
    dip still refuses to change sign, a golden-section pass pushes the
    narrowest sampled neighborhood toward the opposite sign: a crossing pair
    tighter than the finest sub-step (a sub-resolution doublet) peaks on the
    far side of zero and splits into two genuine brackets, while a true
    tangency never makes it across and is reported as a suspected double
    root instead.
    """
    n = 2 ** MAX_HALVINGS + 1
    xs = np.linspace(lo, hi, n)
    vals = np.asarray(fn(xs), dtype=float)
    found = False
    for i in range(n - 1):
        if vals[i] == 0.0 or vals[i] * vals[i + 1] < 0.0:
            brackets.append(Bracket(float(xs[i]), float(xs[i + 1]),
                                    float(vals[i]), float(vals[i + 1])))
            found = True
    if found:
        return
    j = int(np.argmin(np.abs(vals)))
    l = float(xs[max(j - 1, 0)])
    h = float(xs[min(j + 1, n - 1)])
    xm = _maximize_against(fn, l, h, -math.copysign(1.0, f_lo))
    fm = _scalar(fn(xm))
    if fm != 0.0 and fm * f_lo < 0.0:
        brackets.append(Bracket(l, xm, _scalar(fn(l)), fm))
        brackets.append(Bracket(xm, h, fm, _scalar(fn(h))))
    else:
        dips.append(xm)


def bracket_scan(fn: Callable, lo: float, hi: float, step: float,
                 dips_out: list[float] | None = None) -> list[Bracket]:
    """Every sign-change interval of fn on a uniform grid over [lo, hi].

    fn must accept an ndarray of abscissae.  Two near-tangency triggers guard
    against sub-grid doublets: a grid value dipping below 1e-3 of the local
    scale, and a local minimum of |F| whose fitted parabola extrapolates to
    the opposite sign (a crossing pair narrower than the grid).  Triggered
    cells are halved up to six times; a dip that still refuses to change sign
    is localized by golden section and either split into two brackets or
    appended to dips_out as a suspected double root.

    An empty list is a valid result.
    """
    if not (lo < hi):
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if step <= 0.0:
        raise ValueError(f"need step > 0, got {step}")
    n = max(int(np.ceil((hi - lo) / step)) + 1, 3)
    xs = np.linspace(lo, hi, n)
    vals = np.asarray(fn(xs), dtype=float)
    absv = np.abs(vals)
    brackets: list[Bracket] = []
    dips: list[float] = [] if dips_out is None else dips_out
    crossing = np.zeros(n - 1, dtype=bool)
    for i in range(n - 1):
        fl, fh = float(vals[i]), float(vals[i + 1])
        if fl == 0.0 or fl * fh < 0.0:
            # an exact grid-point zero makes refine() return it immediately
            brackets.append(Bracket(float(xs[i]), float(xs[i + 1]), fl, fh))
            crossing[i] = True
    for i in range(1, n - 1):
        if crossing[i - 1] or crossing[i]:
            continue
        if not (absv[i] <= absv[i - 1] and absv[i] <= absv[i + 1]):
            continue
        local_scale = float(np.max(absv[max(i - 3, 0):min(i + 4, n)]))
        if local_scale <= 0.0:
            continue
        # parabola through the three points estimates how deep the dip really
        # goes between grid points; an extremum on the far side of zero means
        # the curve crossed and came back inside one cell
        depth = absv[i]
        hidden_pair = False
        curv = vals[i + 1] - 2.0 * vals[i] + vals[i - 1]
        if curv != 0.0:
            slope = 0.5 * (vals[i + 1] - vals[i - 1])
            extremum = vals[i] - slope * slope / (2.0 * curv)
            hidden_pair = extremum * vals[i] < 0.0
            depth = min(depth, abs(extremum))
        if hidden_pair or depth < DIP_RATIO * local_scale:
            _subdivide(fn, float(xs[i - 1]), float(xs[i + 1]),
                       float(vals[i - 1]), float(vals[i + 1]), brackets, dips)
    brackets.sort(key=lambda br: br.lo)
    return brackets


def refine(fn: Callable, bracket: Bracket, width_rel: float = WIDTH_REL,
           max_iter: int = MAX_ITER) -> RootResult:
    """Shrink a sign-change bracket to width <= width_rel * max(1, |root|).

    Brent-style hybrid: bisection safeguarded by secant / inverse-quadratic
    steps, guaranteed to converge for a valid bracket.
    """
    a, fa = bracket.lo, bracket.f_lo
    b, fb = bracket.hi, bracket.f_hi
    if not (a < b):
        raise ValueError("bracket endpoints out of order")
    if fa == 0.0:
        return RootResult(a, 0.0, 0, 0.0)
    if fb == 0.0:
        return RootResult(b, 0.0, 0, 0.0)
    if fa * fb > 0.0:
        raise ValueError("not a sign-change bracket")
    c, fc = a, fa
    e = d = b - a
    eps = np.finfo(float).eps
    for it in range(1, max_iter + 1):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = max(2.0 * eps * abs(b), 0.5 * width_rel * max(1.0, abs(b)))
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return RootResult(float(b), float(fb), it, float(abs(c - b)))
        if abs(e) < tol or abs(fa) <= abs(fb):
            e = d = m
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            s, e = e, d
            if 2.0 * p < 3.0 * m * q - abs(tol * q) and p < abs(0.5 * s * q):
                d = p / q
            else:
                e = d = m
        a, fa = b, fb
        if abs(d) > tol:
            b += d
        else:
            b += tol if m > 0.0 else -tol
        fb = _scalar(fn(b))
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            e = d = b - a
    raise RuntimeError(f"root refinement did not converge in {max_iter} iterations")


def roots_in_range(fn: Callable, lo: float, hi: float, step: float) -> RootScan:
    """Scan + refine, deduplicated and sorted ascending."""
    dips: list[float] = []
    brackets = bracket_scan(fn, lo, hi, step, dips_out=dips)
    results = [refine(fn, br) for br in brackets]
    results.sort(key=lambda r: r.root)
    kept: list[RootResult] = []
    for res in results:
        if kept and abs(res.root - kept[-1].root) <= DEDUP_REL * max(1.0, abs(res.root)):
            continue
        kept.append(res)
    survived = [x for x in dips
                if all(abs(x - r.root) > 10 * step for r in kept)]
    return RootScan(roots=tuple(kept), suspected_double_roots=tuple(survived))
