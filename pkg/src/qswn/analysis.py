"""Post-processing of sweep curves: polynomial fits, derivative peaks,
transition location, and localization cross-checks."""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly


class FitConditioningError(ValueError):
    """Least-squares system is rank deficient (near-duplicate abscissae)."""


@dataclass(frozen=True)
class FittedCurve:
    """Weighted least-squares polynomial with its fit diagnostics.

    Coefficients are in ascending power order.
    """

    degree: int
    coefficients: np.ndarray
    domain: tuple
    residual_rms: float

    def __call__(self, x) -> np.ndarray:
        return npoly.polyval(np.asarray(x, dtype=float), self.coefficients)

    def derivative(self, x) -> np.ndarray:
        return npoly.polyval(np.asarray(x, dtype=float), npoly.polyder(self.coefficients))


@dataclass(frozen=True)
class TransitionEstimate:
    """Location of the derivative peak of a fitted sweep curve.

    ``is_transition`` is False when the peak sits on the domain boundary or
    the derivative is flat; such results must not be read as transitions.
    """

    p_star: float
    derivative_peak: float
    window: tuple
    is_transition: bool = True
    flag_reason: str = ""


def fit_polynomial(x, y, degree: int, weights=None) -> FittedCurve:
    """Weighted least-squares polynomial fit.

    ``weights`` follow the error-bar convention 1/stderr**2 (None means
    uniform).  Requires at least degree+2 strictly increasing abscissae.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < degree + 2:
        raise ValueError(f"need at least degree+2={degree + 2} points, got {len(x)}")
    if np.any(np.diff(x) <= 0):
        raise ValueError("abscissae must be strictly increasing")
    if weights is None:
        w = np.ones_like(x)
    else:
        w = np.asarray(weights, dtype=float)
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
    with warnings.catch_warnings():
        warnings.simplefilter("error", np.exceptions.RankWarning)
        try:
            # polyfit applies w to the residuals, so pass sqrt of the
            # 1/stderr**2 convention.
            coeffs = npoly.polyfit(x, y, degree, w=np.sqrt(w))
        except np.exceptions.RankWarning as exc:
            raise FitConditioningError(f"rank-deficient fit at degree {degree}") from exc
    resid = y - npoly.polyval(x, coeffs)
    return FittedCurve(
        degree=degree,
        coefficients=coeffs,
        domain=(float(x[0]), float(x[-1])),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )


def _sweep_fit_inputs(sweep, allow_incomplete: bool = False):
    pts = list(sweep.points)
    if not allow_incomplete and any(not pt.complete for pt in pts):
        bad = [pt.grid_value for pt in pts if not pt.complete]
        raise ValueError(f"sweep has incomplete grid points at {bad}; refusing to fit")
    pts = [pt for pt in pts if pt.complete]
    x = np.array([pt.grid_value for pt in pts])
    y = np.array([pt.mean_entropy for pt in pts])
    se = np.array([pt.stderr_entropy for pt in pts])
    w = 1.0 / se**2 if np.all(se > 0) else None
    return x, y, w


def _derivative_peak(curve: FittedCurve, resolution: int, absolute: bool):
    """Largest interior local maximum of the (possibly absolute) derivative.

    Polynomial fits of step-like data ring hardest at the domain edges, so a
    global argmax would often sit on the boundary; only interior local maxima
    count as candidate transitions.
    """
    lo, hi = curve.domain
    grid = np.linspace(lo, hi, resolution)
    d = curve.derivative(grid)
    vals = np.abs(d) if absolute else d
    interior = np.flatnonzero(
        (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
    ) + 1
    if len(interior) == 0:
        i = int(np.argmax(vals))
        return float(grid[i]), float(d[i]), True
    i = int(interior[np.argmax(vals[interior])])
    return float(grid[i]), float(d[i]), False


def _locate(sweep, degree: int, absolute: bool, allow_incomplete: bool,
            min_peak: float = 1e-6) -> TransitionEstimate:
    x, y, w = _sweep_fit_inputs(sweep, allow_incomplete)
    resolution = max(10 * (len(x) - 1) + 1, 101)

    candidates = {}
    for d in (degree - 1, degree, degree + 1):
        if d < 1 or len(x) < d + 2:
            continue
        curve = fit_polynomial(x, y, d, weights=w)
        candidates[d] = _derivative_peak(curve, resolution, absolute)

    p_star, peak, on_boundary = candidates[degree]
    interior = [loc for loc, _, bnd in candidates.values() if not bnd]
    window = (min(interior), max(interior)) if interior else (p_star, p_star)

    flat = abs(peak) <= min_peak * max(1.0, float(np.ptp(y)) / max(x[-1] - x[0], 1e-30))
    if on_boundary:
        return TransitionEstimate(p_star, peak, window, False, "derivative peak on domain boundary")
    if flat:
        return TransitionEstimate(p_star, peak, window, False, "derivative indistinguishable from flat")
    return TransitionEstimate(p_star, peak, window, True)


def locate_transition(sweep, degree: int = 6, allow_incomplete: bool = False) -> TransitionEstimate:
    """Peak of d<entropy>/dp from a polynomial fit of a density sweep.

    The derivative is evaluated analytically on a grid at least 10x finer
    than the data; the window comes from repeating at degree +- 1.
    """
    return _locate(sweep, degree, absolute=False, allow_incomplete=allow_incomplete)


def locate_lambda_drop(sweep, degree: int = 6, allow_incomplete: bool = False) -> TransitionEstimate:
    """Peak of |d<entropy>/dlambda| for strength sweeps (the entropy drops
    across the transition, so the signed derivative is negative there)."""
    return _locate(sweep, degree, absolute=True, allow_incomplete=allow_incomplete)


def participation_ratio(psi: np.ndarray) -> float:
    """Inverse participation ratio sum |psi_n|^4: 1/N for uniform states,
    1 for delta states."""
    psi = np.asarray(psi, dtype=float)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"vector norm {nrm} deviates from 1 beyond tolerance")
    return float(np.sum(psi**4))


def derivative_csv(curve: FittedCurve, resolution: int = 201) -> str:
    """Derivative of the fitted curve on a fine grid, for plotting."""
    lo, hi = curve.domain
    grid = np.linspace(lo, hi, resolution)
    d = curve.derivative(grid)
    out = io.StringIO()
    out.write("p,dEv_dp\n")
    for xi, di in zip(grid, d):
        out.write(f"{float(xi)!r},{float(di)!r}\n")
    return out.getvalue()


def analysis_report(sweep, degree: int = 6, absolute: bool = False,
                    allow_incomplete: bool = False) -> tuple[str, FittedCurve, TransitionEstimate]:
    """Structured text report plus the fitted curve and transition estimate."""
    x, y, w = _sweep_fit_inputs(sweep, allow_incomplete)
    curve = fit_polynomial(x, y, degree, weights=w)
    est = _locate(sweep, degree, absolute=absolute, allow_incomplete=allow_incomplete)
    lines = [
        f"fit degree: {degree}",
        "coefficients (ascending power): "
        + ", ".join(repr(float(c)) for c in curve.coefficients),
        f"residual rms: {curve.residual_rms!r}",
        f"derivative peak location: {est.p_star!r}",
        f"derivative peak value: {est.derivative_peak!r}",
        f"degree-sensitivity window: [{est.window[0]!r}, {est.window[1]!r}]",
        f"interior transition: {'yes' if est.is_transition else 'no (' + est.flag_reason + ')'}",
    ]
    return "\n".join(lines) + "\n", curve, est
