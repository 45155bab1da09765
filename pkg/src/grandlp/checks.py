"""Composite verification suites.

Each check returns a plain dict of measured quantities plus pass flags so
the CLI can serialize it and the test suite can assert on it at pinned
tolerances.
"""

from __future__ import annotations

import math

import numpy as np

from .bounds import (BoundParams, MorreyForm, gradient_continuity_bound,
                     higher_order_continuity_bound, holder_exponent,
                     morrey_bound, talenti_constant)
from .errors import SupportTooLowError
from .extremals import (make_interval_log_family, make_radial_log_family,
                        make_singular_radial_family, noncompactness_check,
                        sharpness_ratio)
from .fundamental import fundamental_function
from .gls import gls_norm
from .modulus import (ModulusStrategy, empirical_modulus,
                      piecewise_linear_modulus)
from .norms import (DomainSpec, TestFunction, gradient_magnitude_function,
                    lp_norm)
from .psi import make_degenerate_psi


def _random_poly_1d(rng) -> TestFunction:
    coeffs = rng.uniform(-1.0, 1.0, 6)
    poly = np.polynomial.Polynomial(coeffs)
    return TestFunction.one_dimensional(poly, poly.deriv(), name="poly")


def _random_radial_poly(rng) -> TestFunction:
    base = np.polynomial.Polynomial(rng.uniform(-1.0, 1.0, 4))
    prof = np.polynomial.Polynomial([1.0, 0.0, -1.0]) * base  # vanishes at r=1
    return TestFunction.radial(prof, prof.deriv(),
                               vanishes_on_boundary=True, name="radial poly")


def lp_degeneration_check(ps=(2.0, 3.0, 5.0), n_functions: int = 10,
                          seed: int = 20240801, quad_tol: float = 1e-10) -> dict:
    """Single-point generating functions must reproduce plain L_p behaviour:
    the grand norm collapses to the L_p norm, and the d >= 2 continuity
    bound collapses to the generic classical form C delta^(1-d/p) |grad f|_p
    (the classical p/(p-d) factor folds into the constant)."""
    rng = np.random.default_rng(seed)
    interval = DomainSpec.unit_interval()
    ball = DomainSpec.unit_ball(2)
    delta, C = 1e-2, 1.0

    max_norm_err = 0.0
    max_bound_err = 0.0
    support_error_raised = False
    for _ in range(n_functions):
        f1 = _random_poly_1d(rng)
        f2 = _random_radial_poly(rng)
        for p in ps:
            psi = make_degenerate_psi(p)
            got = gls_norm(f1, psi, interval, quad_tol=quad_tol)
            want = lp_norm(f1, interval, p, quad_tol)
            max_norm_err = max(max_norm_err, abs(got.value / want - 1.0))

            if p > ball.dimension:
                g = gradient_magnitude_function(f2, ball, 1)
                grad_lp = lp_norm(g, ball, p, quad_tol)
                b1 = gradient_continuity_bound(f2, psi, ball, delta, C,
                                               grad_norm=grad_lp)
                params = BoundParams(d=ball.dimension,
                                     C_domain=C * (p - ball.dimension) / p)
                b2 = morrey_bound(MorreyForm.GENERIC, params, p, delta, grad_lp)
                max_bound_err = max(max_bound_err, abs(b1 / b2 - 1.0))
            else:
                try:
                    gradient_continuity_bound(f2, psi, ball, delta, C,
                                              grad_norm=1.0)
                except SupportTooLowError:
                    support_error_raised = True
    return {
        "max_norm_rel_err": max_norm_err,
        "max_bound_rel_err": max_bound_err,
        "support_error_raised": support_error_raised,
        "pass": bool(max_norm_err <= 1e-8 and max_bound_err <= 1e-12
                     and support_error_raised),
    }


def fundamental_forms_check(betas=(0.5, 1.0, 2.0), k_lo: int = 20,
                            k_hi: int = 200, n_k: int = 19,
                            degenerate_ps=(2.0, 3.0, 5.0)) -> dict:
    """delta^(1/p) exactly for single-point families; for the exponent
    family the log-log slope of phi against |log delta| must equal -beta."""
    from .psi import make_exponent_psi

    exact = True
    for p in degenerate_ps:
        psi = make_degenerate_psi(p)
        for delta in (1e-2, 1e-5, 0.3):
            if fundamental_function(psi, delta).value != delta ** (1.0 / p):
                exact = False

    slopes = {}
    max_rel = 0.0
    ks = np.linspace(k_lo, k_hi, n_k)
    for beta in betas:
        psi = make_exponent_psi(beta)
        logphi = [math.log(fundamental_function(psi, math.exp(-k)).value)
                  for k in ks]
        slope = float(np.polyfit(np.log(ks), logphi, 1)[0])
        slopes[beta] = slope
        max_rel = max(max_rel, abs(slope / (-beta) - 1.0))
    return {"degenerate_exact": exact, "slopes": slopes,
            "max_slope_rel_err": max_rel,
            "pass": bool(exact and max_rel <= 0.02)}


def sharpness_1d_check(exponent: float, deltas=None, budget: int = 150_000,
                       quad_tol: float = 1e-9, seed: int = 0) -> dict:
    """Ratio of measured modulus to the constant-1 one-dimensional bound."""
    if deltas is None:
        deltas = [10.0 ** (-j) for j in range(2, 11)]
    family = make_interval_log_family(exponent, quad_tol=quad_tol)
    ratios = sharpness_ratio(family, deltas, budget=budget, seed=seed)
    tail = ratios[-3:]
    return {
        "exponent": exponent,
        "deltas": list(deltas),
        "ratios": ratios,
        "max_ratio": max(ratios),
        "final_ratio": ratios[-1],
        "tail_increasing": bool(tail[0] < tail[1] < tail[2]),
    }


def radial_band_check(beta: float, d: int = 2, deltas=None,
                      budget: int = 150_000, seed: int = 0) -> dict:
    """The d >= 2 positivity ratio must stay inside a fixed multiplicative
    band across the delta grid."""
    if deltas is None:
        deltas = [10.0 ** (-j) for j in range(2, 7)]
    family = make_radial_log_family(beta, d)
    ratios = sharpness_ratio(family, deltas, budget=budget, seed=seed)
    lo = min(ratios)
    return {
        "beta": beta, "d": d,
        "deltas": list(deltas),
        "ratios": ratios,
        "fitted_c": lo,
        "band_factor": max(ratios) / lo if lo > 0 else math.inf,
        "all_positive": bool(lo > 0),
    }


def gradient_asymptotics_check(exponents=(1.0, 2.0), alpha: float = 2.0,
                               gamma: float = 0.5, d: int = 2,
                               quad_tol: float = 1e-9) -> dict:
    """Growth exponents of gradient p-norms for the extremal families.

    interval-log: |f'|_p grows like q^q e^-q p^q, so the log-log slope in p
    is q and the level at p = 200 approaches q^q e^-q.
    radial-singular: |grad f|_p blows up like (b - p)^(-beta) at the pole,
    so the slope in log(b - p) is -beta.
    """
    interval = DomainSpec.unit_interval()
    rows = {}
    for q in exponents:
        family = make_interval_log_family(q, quad_tol=quad_tol)
        deriv = gradient_magnitude_function(family.function, interval, 1)
        ps = np.geomspace(120.0, 500.0, 9)
        vals = [math.log(lp_norm(deriv, interval, float(p), quad_tol)) for p in ps]
        slope = float(np.polyfit(np.log(ps), vals, 1)[0])
        level = lp_norm(deriv, interval, 200.0, quad_tol) / 200.0 ** q
        target = q ** q * math.exp(-q)
        rows[q] = {"slope": slope, "slope_rel_err": abs(slope / q - 1.0),
                   "level": level, "level_rel_err": abs(level / target - 1.0)}

    family = make_singular_radial_family(alpha, gamma, d)
    ball = family.domain
    b, beta = family.params["b"], family.params["beta"]
    deriv = gradient_magnitude_function(family.function, ball, 1)
    us = np.geomspace(0.002, 0.05, 9)
    vals = [math.log(lp_norm(deriv, ball, float(b - u), quad_tol)) for u in us]
    pole_slope = float(np.polyfit(np.log(us), vals, 1)[0])
    return {
        "interval_log": rows,
        "pole": {"b": b, "beta": beta, "slope": pole_slope,
                 "slope_rel_err": abs(pole_slope / (-beta) - 1.0)},
    }


def morrey_arithmetic_check() -> dict:
    """Direct formula evaluations against hand-computed values."""
    rows = []
    p2 = BoundParams(d=2)
    rows.append(("leoni d2 p4", morrey_bound(MorreyForm.LEONI, p2, 4.0, 0.01, 1.0),
                 8.0 * math.sqrt(0.02)))
    rows.append(("mazja d2 p4", morrey_bound(MorreyForm.MAZJA, p2, 4.0, 0.01, 1.0),
                 math.sqrt(0.01) * 1.5 ** 0.75))
    p1 = BoundParams(d=1)
    rows.append(("generic d1 p2", morrey_bound(MorreyForm.GENERIC, p1, 2.0, 0.04, 1.0),
                 2.0 * 0.2))
    rows.append(("talenti d2 p1", talenti_constant(2, 1.0),
                 1.0 / (2.0 * math.sqrt(math.pi))))
    rows.append(("talenti d3 p1", talenti_constant(3, 1.0),
                 math.pi ** -0.5 / 3.0 * math.gamma(2.5) ** (1.0 / 3.0)))
    # independently computed with arbitrary-precision gamma beforehand
    rows.append(("talenti d4 p2", talenti_constant(4, 2.0),
                 0.31218920569777795168))
    max_err = max(abs(got - want) for _, got, want in rows)
    return {"rows": [{"case": c, "got": g, "want": w} for c, g, w in rows],
            "max_abs_err": max_err, "pass": bool(max_err <= 1e-12)}


def higher_order_consistency_check(quad_tol: float = 1e-9) -> dict:
    """(l, k) = (1, 0) must reproduce the first-order bound; impossible
    windows must raise; the per-p exponent is l - k - d/p."""
    from .errors import EmptyWindowError
    from .psi import make_exponent_psi, make_power_psi

    rng = np.random.default_rng(7)
    f = _random_radial_poly(rng)
    ball = DomainSpec.unit_ball(2)
    psi = make_exponent_psi(1.0)
    delta = 1e-3
    g = gradient_magnitude_function(f, ball, 1)
    n = gls_norm(g, psi, ball, quad_tol=quad_tol).value
    b1 = gradient_continuity_bound(f, psi, ball, delta, 1.0, grad_norm=n)
    b4 = higher_order_continuity_bound(f, psi, ball, 1, 0, delta, 1.0, grad_norm=n)
    rel = abs(b4 / b1 - 1.0)

    empty_raised = False
    narrow = make_power_psi(1.2, 1.4, 0.0, 1.0)
    try:
        higher_order_continuity_bound(f, narrow, DomainSpec.unit_ball(3),
                                      2, 0, delta, 1.0, grad_norm=1.0)
    except EmptyWindowError:
        empty_raised = True

    lam = holder_exponent(2, 1, 2, 4.0)
    return {"first_order_rel_err": rel, "empty_window_raised": empty_raised,
            "lambda_2_1_d2_p4": lam,
            "pass": bool(rel <= 1e-10 and empty_raised and lam == 0.5)}


def modulus_oracle_check(n_functions: int = 20, seed: int = 11,
                         budget: int = 400_000) -> dict:
    """Dense-grid estimates against the exact piecewise-linear modulus."""
    rng = np.random.default_rng(seed)
    interval = DomainSpec.unit_interval()
    max_rel = 0.0
    for _ in range(n_functions):
        n_break = rng.integers(6, 12)
        gaps = rng.uniform(0.05, 1.0, n_break + 1)
        xs = np.concatenate([[0.0], np.cumsum(gaps)])
        xs /= xs[-1]
        ys = rng.uniform(-1.0, 1.0, len(xs))
        delta = float(rng.uniform(0.02, 0.06))
        exact = piecewise_linear_modulus(xs, ys, delta)
        fn = TestFunction.one_dimensional(lambda x, _x=xs, _y=ys: np.interp(x, _x, _y))
        est = empirical_modulus(fn, interval, delta,
                                ModulusStrategy.DENSE_GRID_1D, budget,
                                step_divisor=64).value
        max_rel = max(max_rel, abs(est / exact - 1.0))
    return {"max_rel_err": max_rel, "pass": bool(max_rel <= 0.01)}


def noncompactness_suite(bs=(2.0, 4.0), beta: float = 0.5,
                         h_grid=(0.4, 0.2, 0.1, 0.05, 0.01),
                         budget: int = 60_000, seed: int = 0) -> dict:
    reports = {b: noncompactness_check(b, beta, h_grid, budget=budget, seed=seed)
               for b in bs}
    return {"reports": reports,
            "pass": bool(all(r["pass"] for r in reports.values()))}
