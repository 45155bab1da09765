"""Fundamental functions of grand Lebesgue spaces.

The fundamental function is ``phi(delta) = sup_p delta^(1/p) / psi(p)``;
its truncated variant restricts the sup to a window intersected with the
support.  The optimization runs in the variable ``t = 1/p``, where the
log-objective ``t log(delta) - log psi(1/t)`` is smooth and unimodal for
the named families; a dense scan guards custom shapes before the
golden-section refinement.

Closed-form small-delta asymptotics for the two named families are
implemented exactly as printed in the literature.  For the finite-pole
family that printed constant disagrees with a direct Laplace optimization
of the sup, so the numeric optimizer stays the authority and the closed
form is reported alongside, never asserted against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, UnsupportedFamilyError
from .gls import golden_section_max
from .psi import PsiFamily, PsiFunction

SCAN_POINTS = 512
P_CAP = 1e6
_BRACKET_TOL = 1e-10


@dataclass
class FundamentalResult:
    delta: float
    value: float
    argmax_p: float | None


def _optimize(psi: PsiFunction, delta: float, t_lo: float, t_hi: float) -> FundamentalResult:
    log_delta = math.log(delta)

    def objective(t: float) -> float:
        denom = psi(1.0 / t)
        if not math.isfinite(denom) or denom <= 0.0:
            return -math.inf
        return t * log_delta - math.log(denom)

    margin = 1e-9 * (t_hi - t_lo)
    ts = np.linspace(t_lo + margin, t_hi - margin, SCAN_POINTS)
    vals = np.array([objective(t) for t in ts])
    i = int(np.argmax(vals))
    if vals[i] == -math.inf:
        return FundamentalResult(delta, 0.0, None)
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, SCAN_POINTS - 1)]
    t_best, v_best = golden_section_max(objective, lo, hi, rel_tol=_BRACKET_TOL,
                                        max_iter=200)
    if vals[i] > v_best:
        t_best, v_best = float(ts[i]), float(vals[i])
    return FundamentalResult(delta, math.exp(v_best), 1.0 / t_best)


def fundamental_function(psi: PsiFunction, delta: float,
                         tol: float = 1e-10) -> FundamentalResult:
    """sup over the support of psi of delta^(1/p) / psi(p), delta > 0."""
    if not (delta > 0.0) or not math.isfinite(delta):
        raise InvalidParameterError(f"delta must be positive and finite, got {delta}")
    if psi.is_degenerate:
        r = psi.degenerate_p
        return FundamentalResult(delta, delta ** (1.0 / r), r)
    t_lo = 1.0 / min(psi.support_hi, P_CAP)
    t_hi = 1.0 / psi.support_lo
    return _optimize(psi, delta, t_lo, t_hi)


def truncated_fundamental(psi: PsiFunction, p_minus: float, p_plus: float,
                          delta: float, tol: float = 1e-10) -> FundamentalResult:
    """The sup restricted to (p_minus, p_plus) intersected with supp(psi).

    An empty intersection is a defined result, ``+inf`` with no maximizer,
    not an error.  The degenerate single point participates whenever it lies
    in the closed window [p_minus, p_plus], so L_r behaviour is recovered at
    window edges.  A window covering the whole support reproduces the plain
    fundamental function exactly (same optimizer, same grid).
    """
    if not (delta > 0.0) or not math.isfinite(delta):
        raise InvalidParameterError(f"delta must be positive and finite, got {delta}")
    if p_minus < 1:
        raise InvalidParameterError("p_minus must be >= 1")
    if not p_plus > p_minus:
        raise InvalidParameterError("p_plus must exceed p_minus")
    if psi.is_degenerate:
        r = psi.degenerate_p
        if p_minus <= r <= p_plus:
            return FundamentalResult(delta, delta ** (1.0 / r), r)
        return FundamentalResult(delta, math.inf, None)
    if p_minus <= psi.support_lo and p_plus >= psi.support_hi:
        return fundamental_function(psi, delta, tol)
    lo = max(p_minus, psi.support_lo)
    hi = min(p_plus, psi.support_hi)
    if not lo < hi:
        return FundamentalResult(delta, math.inf, None)
    return _optimize(psi, delta, 1.0 / min(hi, P_CAP), 1.0 / lo)


def asymptotic_fundamental(psi: PsiFunction, delta: float) -> float:
    """Closed-form small-delta behaviour of the fundamental function.

    Exponent family ``p^beta``: ``e^-beta beta^beta |log delta|^-beta``.
    Power pair with ``alpha = 0`` and pole exponent ``beta > 0`` at ``b``:
    ``beta^-beta b^-2beta delta^(1/b) |log delta|^-beta`` (as printed; see
    the module docstring for its status).  Scaled families divide by the
    scale factor.
    """
    if not (0.0 < delta < 1.0 / math.e):
        raise InvalidParameterError("asymptotics require delta in (0, 1/e)")
    if psi.family is PsiFamily.EXPONENT:
        beta = psi.params["beta"]
        s = -math.log(delta)
        return math.exp(-beta) * beta ** beta * s ** (-beta) / psi.scale
    if psi.family is PsiFamily.POWER_PAIR:
        alpha = psi.params["alpha"]
        beta = psi.params["beta"]
        if alpha != 0.0:
            raise UnsupportedFamilyError(
                "closed form covers the pure pole shape (alpha = 0) only")
        if beta <= 0.0:
            raise UnsupportedFamilyError("closed form requires beta > 0")
        b = psi.params["B"]
        s = -math.log(delta)
        return (beta ** (-beta) * b ** (-2.0 * beta) * delta ** (1.0 / b)
                * s ** (-beta) / psi.scale)
    raise UnsupportedFamilyError(
        f"no closed-form asymptotic for family {psi.family.value!r}")
