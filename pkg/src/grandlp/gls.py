"""Grand Lebesgue norms: suprema of |f|_p / psi(p) over the support of psi.

The sup over the open support is approximated on a clipped grid
``[A + eps, min(B - eps, P_MAX)]`` with ``eps = EDGE_FRACTION * (B - A)``
(``B`` replaced by ``P_MAX`` when infinite), then sharpened by a
golden-section pass around the best grid point.  Because psi blows up at
the endpoints for the named families, the clipped sup converges to the true
one for functions with finite norm; ``P_MAX`` bounds the quadrature cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import InvalidParameterError
from .norms import DomainSpec, TestFunction, gradient_magnitude_function, lp_norm
from .psi import PsiFamily, PsiFunction

P_MAX = 256.0
EDGE_FRACTION = 1e-4
GRID_POINTS = 33
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class GlsNormResult:
    """Value of the sup, where it was attained, and the p grid that saw it."""

    value: float
    argmax_p: float | None
    p_grid_used: list[float] = field(default_factory=list)
    degenerate: bool = False
    hit_upper_edge: bool = False


def clipped_support_grid(psi: PsiFunction, n: int = GRID_POINTS,
                         p_max: float = P_MAX) -> np.ndarray:
    """Log-spaced grid over the clipped support of psi."""
    lo, hi = psi.support_lo, psi.support_hi
    top = min(hi, p_max)
    eps = EDGE_FRACTION * (top - lo)
    upper = (hi - eps) if math.isfinite(hi) else top
    lower = lo + eps
    if not lower < upper:
        raise InvalidParameterError("support too narrow for a grid")
    return np.geomspace(lower, upper, n)


def golden_section_max(fn, lo: float, hi: float, *, rel_tol: float = 1e-6,
                       max_iter: int = 120) -> tuple[float, float]:
    """Maximize a scalar function on [lo, hi]; returns (argmax, value)."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    best_x, best_v = (x1, f1) if f1 >= f2 else (x2, f2)
    for _ in range(max_iter):
        if hi - lo <= rel_tol * (abs(best_x) + 1e-12):
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = fn(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = fn(x1)
        if f1 > best_v:
            best_x, best_v = x1, f1
        if f2 > best_v:
            best_x, best_v = x2, f2
    for edge in (lo, hi):
        v = fn(edge)
        if v > best_v:
            best_x, best_v = edge, v
    return best_x, best_v


def gls_norm(f: TestFunction, psi: PsiFunction, D: DomainSpec,
             grid: np.ndarray | None = None, tol: float = 1e-6,
             quad_tol: float = 1e-9) -> GlsNormResult:
    """sup over p in supp(psi) of |f|_p / psi(p).

    The degenerate family collapses to the plain L_r norm.  The result's
    ``hit_upper_edge`` flag reports a ratio still rising at the top of the
    clipped grid, i.e. a norm the clipping may be underestimating.
    """
    if psi.is_degenerate:
        r = psi.degenerate_p
        v = lp_norm(f, D, r, quad_tol)
        return GlsNormResult(v, r, [r], degenerate=True)

    ps = np.asarray(grid, dtype=float) if grid is not None else clipped_support_grid(psi)
    cache: dict[float, float] = {}

    def ratio(p: float) -> float:
        p = float(p)
        if p not in cache:
            denom = psi(p)
            cache[p] = 0.0 if math.isinf(denom) else lp_norm(f, D, p, quad_tol) / denom
        return cache[p]

    vals = np.array([ratio(p) for p in ps])
    i = int(np.argmax(vals))
    lo = ps[max(i - 1, 0)]
    hi = ps[min(i + 1, len(ps) - 1)]
    best_p, best_v = golden_section_max(ratio, lo, hi, rel_tol=tol)
    if vals[i] > best_v:
        best_p, best_v = float(ps[i]), float(vals[i])

    rising_edge = (i == len(ps) - 1 and len(ps) > 1
                   and vals[-1] > vals[-2] * (1.0 + tol))
    return GlsNormResult(best_v, best_p, [float(p) for p in ps],
                         hit_upper_edge=bool(rising_edge))


def reduced_sobolev_gls_norm(f: TestFunction, psi: PsiFunction, D: DomainSpec,
                             order: int = 1, grid=None, tol: float = 1e-6,
                             quad_tol: float = 1e-9) -> float:
    """The gradient-only norm ||grad^l f||_{G(psi)} (equivalent to the full
    Sobolev norm for functions vanishing on the boundary)."""
    g = gradient_magnitude_function(f, D, order)
    return gls_norm(g, psi, D, grid, tol, quad_tol).value


def sobolev_gls_norm(f: TestFunction, psi: PsiFunction, D: DomainSpec,
                     order: int = 1, grid=None, tol: float = 1e-6,
                     quad_tol: float = 1e-9) -> float:
    """||f||_{G(psi)} + ||grad^l f||_{G(psi)} for l = order in {1, 2}."""
    if order not in (1, 2):
        raise InvalidParameterError("order must be 1 or 2")
    base = gls_norm(f, psi, D, grid, tol, quad_tol).value
    return base + reduced_sobolev_gls_norm(f, psi, D, order, grid, tol, quad_tol)


def natural_psi(f: TestFunction, D: DomainSpec, p_lo: float, p_hi: float,
                n_points: int = 33, quad_tol: float = 1e-9) -> PsiFunction:
    """The natural generating function of f: psi(p) = |f|_p.

    |f|_p is sampled on a log-spaced grid and interpolated monotonically in
    log-log coordinates (shape-preserving cubic), which keeps the evaluator
    positive.  By construction the grand Lebesgue norm of f under its own
    natural psi is 1.
    """
    if p_lo < 1:
        raise InvalidParameterError("p_lo must be >= 1")
    if not p_hi > p_lo:
        raise InvalidParameterError("p_hi must exceed p_lo")
    if n_points < 4:
        raise InvalidParameterError("need at least 4 sample points")
    ps = np.geomspace(p_lo, p_hi, n_points)
    norms = np.array([lp_norm(f, D, float(p), quad_tol) for p in ps])
    if np.any(norms <= 0.0) or not np.all(np.isfinite(norms)):
        raise InvalidParameterError(
            "natural psi requires finite positive |f|_p on the whole grid")
    interp = PchipInterpolator(np.log(ps), np.log(norms))

    def ev(p: float) -> float:
        return float(np.exp(interp(np.log(p))))

    return PsiFunction(float(p_lo), float(p_hi), PsiFamily.NATURAL, ev,
                       {"p_nodes": [float(p) for p in ps],
                        "norms": [float(v) for v in norms],
                        "source": f.name or "function"})
