"""Extremal families that witness the sharpness of the continuity bounds.

Four families, all with exact analytic derivatives:

* interval-log  ``f(x) = x |log x|^q`` on [0, 1].  Its derivative behaves
  like ``|log x|^q`` near 0, so the derivative's p-norms grow like
  ``q^q e^-q p^q`` and the natural generating function of the derivative
  normalizes the one-dimensional bound to constant 1.  For q < 1 the
  derivative has a ``|log x|^(q-1)`` blow-up at x = 1 and leaves every
  L_p with p >= 1/(1-q); the natural support is capped accordingly and the
  sharp-ratio asymptotics are only meaningful for q >= 1.
* radial-log    ``f(x) = |x| |log |x||^q`` on the unit ball, the d >= 2
  analogue.  Its generating function is the exponent family ``p^q`` scaled
  to the natural size of the gradient norms, ``q^q e^-q d^-q``.
* radial-singular  the bounded primitive of the gradient-scale profile
  ``(a/(a-1)) r^(-1/a) |log r|^g``; the primitive has that profile as its
  exact radial derivative (an incomplete-gamma closed form), its gradient
  p-norms blow up like ``(b - p)^(-g - 1/b)`` at ``b = a d``, and it lives
  in the finite-pole family.
* shift-witness  ``w(x) = x^(1-1/b) |log x|^q`` on [0, 1] together with its
  circular shifts; the shifts stay in one ball of the pole-family Sobolev
  space while keeping their pairwise Holder distance above
  ``2 - 2^(1-1/b)``, which is what makes the embedding non-compact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from . import norms as _norms
from .bounds import HolderWeight, holder_norm, sup_abs
from .errors import InvalidParameterError
from .fundamental import fundamental_function, truncated_fundamental
from .gls import clipped_support_grid, gls_norm, natural_psi
from .modulus import ModulusStrategy, empirical_modulus
from .norms import DomainSpec, TestFunction, gradient_magnitude_function
from .psi import PsiFunction, SlowlyVaryingSpec, make_exponent_psi, make_power_psi


class FamilyKind(enum.Enum):
    INTERVAL_LOG = "interval-log"
    RADIAL_LOG = "radial-log"
    RADIAL_SINGULAR = "radial-singular"
    SHIFT_WITNESS = "shift-witness"


@dataclass(frozen=True)
class ExtremalFamily:
    kind: FamilyKind
    params: dict
    function: TestFunction
    psi: PsiFunction
    domain: DomainSpec
    gradient_scale: TestFunction | None = None


def _indicator_eval(raw, lo: float = 0.0, hi: float = 1.0):
    def fn(r):
        r = np.asarray(r, dtype=float)
        safe = np.clip(r, 1e-320, None)
        with np.errstate(all="ignore"):
            vals = raw(safe)
        return np.where((r > lo) & (r <= hi), np.nan_to_num(vals, nan=0.0,
                                                            posinf=0.0,
                                                            neginf=0.0), 0.0)
    return fn


def _log_pow_profile(q: float, varying: SlowlyVaryingSpec | None):
    """r |log r|^q (optionally times L(1 + |log r|)), 0 outside (0, 1]."""
    def raw(r):
        L = np.abs(np.log(r))
        out = r * L ** q
        if varying is not None:
            out = out * np.vectorize(varying.evaluator)(1.0 + L)
        return out
    return _indicator_eval(raw)


def _log_pow_derivative(q: float):
    """d/dr of r |log r|^q on (0, 1): |log r|^(q-1) (|log r| - q)."""
    def raw(r):
        L = np.abs(np.log(r))
        return L ** (q - 1.0) * (L - q)
    def fn(r):
        r = np.asarray(r, dtype=float)
        safe = np.clip(r, 1e-320, 1.0 - 1e-16)
        with np.errstate(all="ignore"):
            vals = raw(safe)
        return np.where((r > 0) & (r < 1), vals, 0.0)
    return fn


def _numeric_profile_derivative(profile):
    h = float(np.finfo(float).eps) ** (1.0 / 3.0)
    def fn(r):
        r = np.asarray(r, dtype=float)
        step = h * np.clip(np.minimum(r, 1.0 - r) * 0.5, 1e-12, None)
        return (profile(r + step) - profile(r - step)) / (2.0 * step)
    return fn


def _guarded_log(expr):
    """Exact log-magnitude in y = -log(x) coordinates, -inf at y <= 0."""
    def fn(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(all="ignore"):
            out = expr(y)
        return np.where(y > 0, out, -np.inf)
    return fn


def _log_pow_exp_coords(q: float):
    """log |f(e^-y)| and log |f'(e^-y)| for f(x) = x |log x|^q."""
    value = _guarded_log(lambda y: -y + q * np.log(y))
    grad = _guarded_log(lambda y: (q - 1.0) * np.log(y) + np.log(np.abs(y - q)))
    return value, grad


def make_radial_log_family(beta: float, d: int,
                           varying: SlowlyVaryingSpec | None = None) -> ExtremalFamily:
    """Radial profile r |log r|^beta on the unit ball, d >= 2."""
    if beta <= 0:
        raise InvalidParameterError("beta must be > 0")
    if d < 2:
        raise InvalidParameterError("d must be >= 2")
    profile = _log_pow_profile(beta, varying)
    derivative = (_log_pow_derivative(beta) if varying is None
                  else _numeric_profile_derivative(profile))
    la_val, la_grad = ((None, None) if varying is not None
                       else _log_pow_exp_coords(beta))
    fn = TestFunction.radial(profile, derivative,
                             vanishes_on_boundary=True, singular_origin=True,
                             log_abs_exp=la_val, log_abs_exp_grad=la_grad,
                             name=f"radial-log(beta={beta}, d={d})")
    natural_scale = beta ** beta * math.exp(-beta) * float(d) ** (-beta)
    psi = make_exponent_psi(beta).with_scale(natural_scale)
    return ExtremalFamily(FamilyKind.RADIAL_LOG,
                          {"beta": beta, "d": d}, fn, psi,
                          DomainSpec.unit_ball(d))


def make_interval_log_family(exponent: float,
                             varying: SlowlyVaryingSpec | None = None,
                             p_hi: float = 256.0, n_psi: int = 40,
                             quad_tol: float = 1e-9) -> ExtremalFamily:
    """f(x) = x |log x|^exponent on [0, 1], with the natural generating
    function of its derivative (capped below 1/(1-exponent) when that is
    finite, where the derivative's norms blow up)."""
    if exponent <= 0:
        raise InvalidParameterError("exponent must be > 0")
    profile = _log_pow_profile(exponent, varying)
    derivative = (_log_pow_derivative(exponent) if varying is None
                  else _numeric_profile_derivative(profile))
    la_val, la_grad = ((None, None) if varying is not None
                       else _log_pow_exp_coords(exponent))
    fn = TestFunction.one_dimensional(profile, derivative,
                                      vanishes_on_boundary=True,
                                      singular_origin=True,
                                      log_abs_exp=la_val,
                                      log_abs_exp_grad=la_grad,
                                      name=f"interval-log({exponent})")
    D = DomainSpec.unit_interval()
    hi = p_hi if exponent >= 1 else min(p_hi, 0.9 / (1.0 - exponent))
    deriv_fn = gradient_magnitude_function(fn, D, 1)
    psi = natural_psi(deriv_fn, D, 1.02, hi, n_psi, quad_tol)
    return ExtremalFamily(FamilyKind.INTERVAL_LOG,
                          {"exponent": exponent, "p_hi": hi}, fn, psi, D)


def make_singular_radial_family(alpha: float, gamma: float, d: int) -> ExtremalFamily:
    """The bounded primitive of (a/(a-1)) r^(-1/a) |log r|^g on the unit ball.

    With k = (a-1)/a the primitive is the incomplete-gamma expression
        V(r) = (a/(a-1)) k^-(g+1) Gamma(g+1) P(g+1, k |log r|),
    whose radial derivative is exactly minus the gradient-scale profile.
    The pole sits at b = a d with pole exponent g + 1/b.
    """
    if alpha <= 1:
        raise InvalidParameterError("alpha must be > 1")
    if gamma <= 0:
        raise InvalidParameterError("gamma must be > 0")
    if d < 2:
        raise InvalidParameterError("d must be >= 2")
    b = alpha * d
    beta = gamma + 1.0 / b
    lead = alpha / (alpha - 1.0)
    k = (alpha - 1.0) / alpha
    amp = lead * k ** (-(gamma + 1.0)) * math.gamma(gamma + 1.0)

    def value_raw(r):
        return amp * gammainc(gamma + 1.0, k * np.abs(np.log(r)))

    profile = _indicator_eval(value_raw)

    def deriv_raw(r):
        return -lead * r ** (-1.0 / alpha) * np.abs(np.log(r)) ** gamma

    def derivative(r):
        r = np.asarray(r, dtype=float)
        safe = np.clip(r, 1e-320, 1.0)
        with np.errstate(all="ignore"):
            vals = deriv_raw(safe)
        return np.where((r > 0) & (r < 1), vals, 0.0)

    fn = TestFunction.radial(profile, derivative,
                             vanishes_on_boundary=True, singular_origin=True,
                             name=f"radial-singular(a={alpha}, g={gamma}, d={d})")
    psi = make_power_psi(1.0, b, 0.0, beta)
    return ExtremalFamily(FamilyKind.RADIAL_SINGULAR,
                          {"alpha": alpha, "gamma": gamma, "d": d,
                           "b": b, "beta": beta}, fn, psi,
                          DomainSpec.unit_ball(d))


def make_shift_witness_family(b: float, beta: float) -> ExtremalFamily:
    """w(x) = x^(1-1/b) |log x|^beta on [0, 1] plus its gradient-scale
    profile x^(-1/b) |log x|^beta, in the pole family (1, b) with exponent
    beta + 1/b."""
    if b <= 1:
        raise InvalidParameterError("b must be > 1")
    if beta <= 0:
        raise InvalidParameterError("beta must be > 0")
    e1 = 1.0 - 1.0 / b

    def w_raw(r):
        return r ** e1 * np.abs(np.log(r)) ** beta

    def dw_raw(r):
        L = np.abs(np.log(r))
        return r ** (-1.0 / b) * L ** (beta - 1.0) * (e1 * L - beta)

    def g_raw(r):
        return r ** (-1.0 / b) * np.abs(np.log(r)) ** beta

    w = _indicator_eval(w_raw)

    def dw(r):
        r = np.asarray(r, dtype=float)
        safe = np.clip(r, 1e-320, 1.0 - 1e-16)
        with np.errstate(all="ignore"):
            vals = dw_raw(safe)
        return np.where((r > 0) & (r < 1), vals, 0.0)

    fn = TestFunction.one_dimensional(w, dw, vanishes_on_boundary=True,
                                      singular_origin=True,
                                      name=f"shift-witness(b={b}, beta={beta})")
    gscale = TestFunction.one_dimensional(_indicator_eval(g_raw),
                                          singular_origin=True,
                                          name="shift-witness gradient scale")
    psi = make_power_psi(1.0, b, 0.0, beta + 1.0 / b)
    return ExtremalFamily(FamilyKind.SHIFT_WITNESS,
                          {"b": b, "beta": beta}, fn, psi,
                          DomainSpec.unit_interval(), gradient_scale=gscale)


def shift_witness_eta(b: float, beta: float) -> HolderWeight:
    """The Holder weight delta^(1-1/b) |log delta|^beta."""
    e1 = 1.0 - 1.0 / b
    return HolderWeight(lambda dl: dl ** e1 * abs(math.log(dl)) ** beta,
                        provenance=f"pole family b={b}, beta={beta}")


def gradient_norm_of_family(family: ExtremalFamily, quad_tol: float = 1e-9) -> float:
    """||grad f||_G(psi) of the family's function under its own psi."""
    g = gradient_magnitude_function(family.function, family.domain, 1)
    return gls_norm(g, family.psi, family.domain, quad_tol=quad_tol).value


def sharpness_ratio(family: ExtremalFamily, delta_grid, tol: float = 1e-6,
                    budget: int = 200_000, seed: int = 0) -> list[float]:
    """Measured modulus over theoretical bound, per family convention.

    interval-log: omega * phi(psi, delta) / (delta * ||f'||), the sharp
    one-dimensional ratio whose limit is 1.
    radial-log:   omega * phi(psi, delta^d) / delta, the d >= 2 positivity
    ratio (the natural scaling of psi absorbs the norm).
    radial-singular: the d >= 2 ratio including the gradient norm and the
    truncated denominator window.
    """
    deltas = [float(d) for d in delta_grid]
    if family.kind is FamilyKind.INTERVAL_LOG:
        n = gradient_norm_of_family(family)
        out = []
        for dl in deltas:
            om = empirical_modulus(family.function, family.domain, dl,
                                   ModulusStrategy.DENSE_GRID_1D, budget, seed).value
            phi = fundamental_function(family.psi, dl).value
            out.append(om * phi / (dl * n))
        return out
    if family.kind is FamilyKind.RADIAL_LOG:
        d = family.domain.dimension
        out = []
        for dl in deltas:
            om = empirical_modulus(family.function, family.domain, dl,
                                   ModulusStrategy.RADIAL_PROFILE, budget, seed).value
            phi = fundamental_function(family.psi, dl ** d).value
            out.append(om * phi / dl)
        return out
    if family.kind is FamilyKind.RADIAL_SINGULAR:
        d = family.domain.dimension
        n = gradient_norm_of_family(family)
        lo = max(family.psi.support_lo, float(d))
        out = []
        for dl in deltas:
            om = empirical_modulus(family.function, family.domain, dl,
                                   ModulusStrategy.RADIAL_PROFILE, budget, seed).value
            phi = truncated_fundamental(family.psi, lo, family.psi.support_hi,
                                        dl ** d).value
            out.append(om * phi / (dl * n))
        return out
    raise InvalidParameterError(
        "sharpness ratios are defined for the interval-log, radial-log, and "
        "radial-singular families; use noncompactness_check for shift witnesses")


def _wrapped_values(fn, h: float):
    def wrapped(x):
        x = np.asarray(x, dtype=float)
        return fn(np.mod(x + h, 1.0))
    return wrapped


def _wrapped_lp_unit(profile, h: float, p: float, quad_tol: float = 1e-8) -> float:
    """L_p norm over [0,1] of x -> profile((x + h) mod 1), profile singular
    at 0.  Split at the seam: the left piece is smooth, the right piece is
    the head integral of the profile mapped through x = e^-y."""
    def log_left(x):
        with np.errstate(all="ignore"):
            return p * _norms._log_abs(profile(x + h))

    l_left = _norms._quad_log_integral(log_left, 0.0, 1.0 - h, quad_tol)

    def log_head(y):
        with np.errstate(all="ignore"):
            return -y + p * _norms._log_abs(profile(np.exp(-y)))

    y_lo = math.log(1.0 / h)
    y_hi = max(_norms._substituted_tail_cut(log_head), y_lo + 10.0)
    l_right = _norms._quad_log_integral(log_head, y_lo, y_hi, quad_tol)
    return math.exp(np.logaddexp(l_left, l_right) / p)


def noncompactness_check(b: float, beta: float, h_grid,
                         delta_grid=None, budget: int = 60_000,
                         seed: int = 0, quad_tol: float = 1e-8) -> dict:
    """Shift-family witness of non-compactness.

    For each shift h the Holder distance between the witness and its shift
    is bounded below through the modulus quotient
        zeta(h) = sup_delta omega(w_h - w, delta) / eta(delta),
    which must stay above 2 - 2^(1-1/b).  The check also verifies that the
    shifts share their norms: representative wrapped p-norms of the
    gradient-scale profile and the Holder norm of the witness itself are
    compared across the h grid.
    """
    family = make_shift_witness_family(b, beta)
    w = family.function.value
    g = family.gradient_scale.value
    eta = shift_witness_eta(b, beta)
    D = family.domain
    threshold = 2.0 - 2.0 ** (1.0 - 1.0 / b)
    if delta_grid is None:
        delta_grid = np.geomspace(1e-6, (1.0 / math.e) * (1.0 - 1e-9), 15)

    entries = []
    for h in h_grid:
        h = float(h)
        if not (0.0 < h < 0.5):
            raise InvalidParameterError("shifts must lie in (0, 1/2)")
        wh = _wrapped_values(w, h)
        diff = TestFunction.one_dimensional(lambda x: wh(x) - w(x))
        zeta = 0.0
        arg = None
        for dl in delta_grid:
            om = empirical_modulus(diff, D, float(dl),
                                   ModulusStrategy.DENSE_GRID_1D, budget, seed,
                                   focus=(1.0 - h,)).value
            q = om / eta(float(dl))
            if q > zeta:
                zeta, arg = q, float(dl)
        entries.append({"h": h, "zeta": zeta, "argmax_delta": arg,
                        "pass": bool(zeta >= threshold - 0.05)})

    # shift invariance: wrapped p-norms of the gradient scale at
    # representative p, and the Holder norm of the wrapped witness
    ps = [1.25, (1.0 + b) / 2.0, 0.9 * b]
    inv_delta = np.geomspace(1e-4, (1.0 / math.e) * (1.0 - 1e-9), 10)
    lp_rows = {}
    holder_rows = {}
    for h in h_grid:
        h = float(h)
        lp_rows[h] = [_wrapped_lp_unit(g, h, p, quad_tol) for p in ps]
        wh_fn = TestFunction.one_dimensional(_wrapped_values(w, h))

        def mod(dl, _f=wh_fn, _h=h):
            return empirical_modulus(_f, D, dl, ModulusStrategy.DENSE_GRID_1D,
                                     max(budget // 2, 10_000), seed,
                                     focus=(1.0 - _h,)).value

        holder_rows[h] = holder_norm(wh_fn, D, eta, inv_delta, mod)

    def spread(rows):
        arr = np.asarray(rows, dtype=float)
        return float(np.max(arr) / np.min(arr) - 1.0)

    lp_spread = max(spread([lp_rows[h][i] for h in lp_rows])
                    for i in range(len(ps)))
    holder_spread = spread(list(holder_rows.values()))

    return {
        "b": b, "beta": beta, "threshold": threshold,
        "entries": entries,
        "zeta_min": min(e["zeta"] for e in entries),
        "shift_invariance": {
            "p_sample": ps,
            "lp_norms": lp_rows,
            "holder_norms": holder_rows,
            "lp_spread": lp_spread,
            "holder_spread": holder_spread,
            "pass": bool(lp_spread <= 0.01 and holder_spread <= 0.01),
        },
        "pass": bool(all(e["pass"] for e in entries)
                     and lp_spread <= 0.01 and holder_spread <= 0.01),
    }
