"""Modulus-of-continuity bounds.

Classical forms for p > d (constants as printed in the sources they are
named after):

* Maz'ja:   K_M * delta^(1-d/p) * ((p-1)/(p-d))^(1-1/p) * |grad f|_p
* Leoni:    (2dp/(p-d)) * (2 delta)^(1-d/p) * |grad f|_p
* generic:  C * (p/(p-d)) * delta^(1-d/p) * |grad f|_p

Grand-Lebesgue forms, obtained by optimizing the generic form over p in the
support of the generating function:

* dimension d >= 2:
    omega(f, delta) <= C * delta * ||grad f||_G(psi)
                         / phi_trunc(psi; max(A, d), B; delta^d)
* dimension 1 (sharp constant 1, derivative norm in the numerator):
    omega(f, delta) <= delta * ||f'||_G(psi) / phi(psi; delta)
* higher order (l-th gradient controls the k-th, l - k >= 1): the window is
    (d/(l-k), d/(l-k-1)) with d/0 = +inf, the bound scales like
    delta^(l-k), and the per-p form carries the exponent
    lambda = l - k - d/p.

All delta arguments live in (0, 1/e).  The domain-dependent constants are
never pinned by the theory, so they are caller parameters defaulting to 1;
reports carry fitted values instead of assumed ones.
"""

from __future__ import annotations

import csv
import enum
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (DegenerateBoundWarning, EmptyWindowError,
                     InvalidParameterError, SupportTooLowError)
from .fundamental import fundamental_function, truncated_fundamental
from .gls import gls_norm
from .norms import DomainSpec, TestFunction, gradient_magnitude_function
from .psi import PsiFunction


def _check_delta(delta: float) -> None:
    if not (0.0 < delta < 1.0 / math.e):
        raise InvalidParameterError(
            f"delta must lie in (0, 1/e), got {delta}")


@dataclass(frozen=True)
class BoundParams:
    """Dimensions, derivative orders, and the free constants of the bounds."""

    d: int
    l: int = 1
    k: int = 0
    C_domain: float = 1.0
    K_M: float = 1.0

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameterError("d must be >= 1")
        if self.l - self.k < 1:
            raise InvalidParameterError("need l - k >= 1")
        if self.C_domain <= 0 or self.K_M <= 0:
            raise InvalidParameterError("constants must be positive")


@dataclass(frozen=True)
class HolderWeight:
    """A positive weight eta(delta) on (0, 1/e) for the generalized Holder norm."""

    eta: Callable[[float], float]
    provenance: str = ""

    def __call__(self, delta: float) -> float:
        v = self.eta(delta)
        if not v > 0.0:
            raise InvalidParameterError(f"eta({delta}) = {v} is not positive")
        return v


class MorreyForm(enum.Enum):
    MAZJA = "mazja"
    LEONI = "leoni"
    GENERIC = "generic"


def talenti_constant(d: int, p: float) -> float:
    """Sharp constant of the d >= 2 Sobolev embedding for 1 <= p < d."""
    if d < 2:
        raise InvalidParameterError("d must be >= 2")
    if not (1.0 <= p < d):
        raise InvalidParameterError(f"p must lie in [1, d), got {p}")
    middle = 1.0 if p == 1.0 else ((p - 1.0) / (d - p)) ** (1.0 - 1.0 / p)
    gammas = (math.gamma(1.0 + d / 2.0) * math.gamma(float(d))
              / (math.gamma(d / p) * math.gamma(1.0 + d - d / p)))
    return math.pi ** -0.5 * d ** (-1.0 / p) * middle * gammas ** (1.0 / d)


def morrey_bound(form: MorreyForm, params: BoundParams, p: float, delta: float,
                 grad_lp: float) -> float:
    """One of the three classical continuity bounds, evaluated at a single p."""
    d = params.d
    if not p > d:
        raise InvalidParameterError(f"the bounds require p > d, got p={p}, d={d}")
    _check_delta(delta)
    if grad_lp < 0:
        raise InvalidParameterError("grad_lp must be >= 0")
    if form is MorreyForm.MAZJA:
        return (params.K_M * delta ** (1.0 - d / p)
                * ((p - 1.0) / (p - d)) ** (1.0 - 1.0 / p) * grad_lp)
    if form is MorreyForm.LEONI:
        return (2.0 * d * p / (p - d)) * (2.0 * delta) ** (1.0 - d / p) * grad_lp
    if form is MorreyForm.GENERIC:
        return params.C_domain * (p / (p - d)) * delta ** (1.0 - d / p) * grad_lp
    raise InvalidParameterError(f"unknown form {form!r}")


def _gradient_norm(f: TestFunction, psi: PsiFunction, D: DomainSpec,
                   order: int, quad_tol: float) -> float:
    g = gradient_magnitude_function(f, D, order)
    return gls_norm(g, psi, D, quad_tol=quad_tol).value


def gradient_continuity_bound(f: TestFunction, psi: PsiFunction, D: DomainSpec,
                              delta: float, C_domain: float = 1.0,
                              quad_tol: float = 1e-9,
                              grad_norm: float | None = None) -> float:
    """Continuity bound in dimension >= 2 from the gradient's grand norm.

    The denominator is the truncated fundamental function on the window
    (max(A, d), B) evaluated at delta^d; when the support already starts at
    or above d it coincides with the plain fundamental function.  An empty
    window makes the denominator infinite and the bound collapses to 0,
    which is flagged with a warning rather than raised so delta sweeps can
    continue.
    """
    d = D.dimension
    if d < 2:
        raise InvalidParameterError("this bound needs dimension >= 2")
    _check_delta(delta)
    if C_domain <= 0:
        raise InvalidParameterError("C_domain must be positive")
    B = psi.support_hi
    if B <= d:
        raise SupportTooLowError(
            f"support ends at {B} <= d = {d}; no admissible p remains")
    p_floor = max(psi.support_lo, float(d))
    if psi.is_degenerate:
        phi_value = (delta ** d) ** (1.0 / psi.degenerate_p)
    else:
        phi_value = truncated_fundamental(psi, p_floor, B, delta ** d).value
    if math.isinf(phi_value):
        warnings.warn("empty truncation window; bound degenerates to 0",
                      DegenerateBoundWarning, stacklevel=2)
        return 0.0
    n = grad_norm if grad_norm is not None else _gradient_norm(f, psi, D, 1, quad_tol)
    return C_domain * delta * n / phi_value


def continuity_bound_1d(f: TestFunction, psi: PsiFunction, delta: float,
                        quad_tol: float = 1e-9,
                        grad_norm: float | None = None) -> float:
    """One-dimensional continuity bound on [0, 1] with the sharp constant 1.

    The numerator carries the grand norm of the derivative (the proof's
    Holder step controls increments through |f'|_p, and the natural
    normalization of the extremal family makes this the norm that is 1).
    """
    _check_delta(delta)
    D = DomainSpec.unit_interval()
    phi = fundamental_function(psi, delta)
    n = grad_norm if grad_norm is not None else _gradient_norm(f, psi, D, 1, quad_tol)
    return delta * n / phi.value


def derivative_window(d: int, order: int, target_order: int) -> tuple[float, float]:
    """The admissible p window (d/(l-k), d/(l-k-1)) with d/0 = +inf."""
    if order - target_order < 1:
        raise InvalidParameterError("need order - target_order >= 1")
    gap = order - target_order
    p1 = d / gap
    p2 = math.inf if gap == 1 else d / (gap - 1)
    return p1, p2


def holder_exponent(order: int, target_order: int, d: int, p: float) -> float:
    """The per-p Holder exponent lambda = l - k - d/p."""
    return order - target_order - d / p


def per_p_continuity_bound(psi: PsiFunction, order: int, target_order: int,
                           d: int, p: float, delta: float, C: float,
                           grad_norm: float) -> float:
    """Single-p form: C * delta^lambda * psi(p) * ||grad^l f||_G(psi)."""
    _check_delta(delta)
    lam = holder_exponent(order, target_order, d, p)
    return C * delta ** lam * psi(p) * grad_norm


def higher_order_continuity_bound(f: TestFunction, psi: PsiFunction,
                                  D: DomainSpec, order: int, target_order: int,
                                  delta: float, C: float = 1.0,
                                  quad_tol: float = 1e-9,
                                  grad_norm: float | None = None) -> float:
    """Bound on the modulus of the k-th gradient from the l-th gradient's norm.

    Raises EmptyWindowError when the admissible p window misses the support
    of psi entirely.
    """
    _check_delta(delta)
    if C <= 0:
        raise InvalidParameterError("C must be positive")
    d = D.dimension
    p1, p2 = derivative_window(d, order, target_order)
    phi = truncated_fundamental(psi, max(p1, 1.0), p2, delta ** d)
    if math.isinf(phi.value):
        raise EmptyWindowError(
            f"window ({p1}, {p2}) misses supp(psi) = "
            f"({psi.support_lo}, {psi.support_hi})")
    n = grad_norm if grad_norm is not None else _gradient_norm(f, psi, D, order,
                                                               quad_tol)
    return C * delta ** (order - target_order) * n / phi.value


def eta_from_gradient_bound(psi: PsiFunction, D: DomainSpec,
                            grad_gls_norm: float, delta: float) -> float:
    """The Holder weight induced by the d >= 2 bound:
    eta(delta) = delta * ||grad f||_G(psi) / phi_trunc(psi; delta^d)."""
    d = D.dimension
    if d < 2:
        raise InvalidParameterError("this weight needs dimension >= 2")
    _check_delta(delta)
    B = psi.support_hi
    if B <= d:
        raise SupportTooLowError(f"support ends at {B} <= d = {d}")
    if psi.is_degenerate:
        phi_value = (delta ** d) ** (1.0 / psi.degenerate_p)
    else:
        phi_value = truncated_fundamental(psi, max(psi.support_lo, float(d)),
                                          B, delta ** d).value
    return delta * grad_gls_norm / phi_value


def sup_abs(f: TestFunction, D: DomainSpec, samples: int = 100_001) -> float:
    """Dense-grid estimate of sup |f| (interval or radial-ball functions)."""
    if D.is_interval:
        a, b = D.interval_bounds
        xs = np.linspace(a, b, samples)
        ends = np.geomspace(1e-12, (b - a) / 2, 200)
        xs = np.concatenate([xs, a + ends, b - ends])
        return float(np.max(np.abs(f.value(xs))))
    if f.radial_profile is not None:
        rs = np.concatenate([np.linspace(0.0, 1.0, samples),
                             np.geomspace(1e-12, 0.5, 200)])
        return float(np.max(np.abs(f.radial_profile(rs))))
    raise InvalidParameterError("sup estimation needs an interval or radial function")


def holder_norm(f: TestFunction, D: DomainSpec, eta: HolderWeight,
                delta_grid: Sequence[float],
                modulus_fn: Callable[[float], float] | None = None) -> float:
    """sup |f| plus the largest modulus-to-weight quotient over the grid."""
    if modulus_fn is None:
        from .modulus import empirical_modulus
        modulus_fn = lambda dl: empirical_modulus(f, D, dl).value
    quotient = 0.0
    for dl in delta_grid:
        _check_delta(dl)
        quotient = max(quotient, modulus_fn(dl) / eta(dl))
    return sup_abs(f, D) + quotient


@dataclass
class BoundReport:
    """Per-delta record of a theoretical bound against the measured modulus."""

    delta_grid: list[float]
    bound_values: list[float]
    empirical_modulus: list[float]
    ratios: list[float] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.delta_grid)
        if len(self.bound_values) != n or len(self.empirical_modulus) != n:
            raise InvalidParameterError("report columns must share one length")
        if not self.ratios:
            self.ratios = [m / b if b > 0 else math.inf
                           for m, b in zip(self.empirical_modulus, self.bound_values)]

    def fitted_constant(self) -> float:
        """Smallest C making the bound dominate the measured modulus."""
        return max(self.ratios)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["delta", "bound", "empirical", "ratio"])
            for row in zip(self.delta_grid, self.bound_values,
                           self.empirical_modulus, self.ratios):
                w.writerow([repr(v) for v in row])

    def to_json_dict(self) -> dict:
        return {"params": self.params,
                "rows": [{"delta": d, "bound": b, "empirical": e, "ratio": r}
                         for d, b, e, r in zip(self.delta_grid, self.bound_values,
                                               self.empirical_modulus, self.ratios)]}


def bound_report(delta_grid: Sequence[float],
                 bound_fn: Callable[[float], float],
                 modulus_fn: Callable[[float], float],
                 params: dict | None = None) -> BoundReport:
    deltas = [float(d) for d in delta_grid]
    bounds = [bound_fn(d) for d in deltas]
    moduli = [modulus_fn(d) for d in deltas]
    return BoundReport(deltas, bounds, moduli, params=params or {})
