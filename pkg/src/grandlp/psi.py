"""Generating functions for grand Lebesgue norms.

A generating function ``psi`` is positive and continuous on an open interval
``(support_lo, support_hi)`` with a positive infimum there, and evaluates to
``+inf`` everywhere else (including at the endpoints themselves).  The norm
built on top of it is ``sup_p |f|_p / psi(p)``, so the convention
``C / inf = 0`` makes points outside the support drop out of suprema.

Families provided here:

* power pair     ``(p - A)^(-alpha) * (B - p)^(-beta)`` on ``(A, B)``
* exponent       ``p^beta`` on ``(1, inf)``
* degenerate     ``1`` at a single point ``r``, ``inf`` elsewhere; the norm
                 collapses to the plain ``L_r`` norm
* natural        interpolated ``p -> |f|_p`` of a concrete function (built in
                 :mod:`grandlp.gls`)
* slowly-varying variants of the exponent and pole shapes, multiplied by a
  user-supplied slowly varying factor ``L``
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import InvalidParameterError

INF = math.inf


class PsiFamily(enum.Enum):
    POWER_PAIR = "power"
    EXPONENT = "exponent"
    DEGENERATE = "degenerate"
    NATURAL = "natural"
    SLOWLY_VARYING_EXPONENT = "sv-exponent"
    SLOWLY_VARYING_POLE = "sv-pole"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SlowlyVaryingSpec:
    """A slowly varying factor ``L(u)``, positive for ``u >= 1``."""

    evaluator: Callable[[float], float]
    description: str = "L"

    def __call__(self, u: float) -> float:
        return self.evaluator(u)


@dataclass(frozen=True)
class PsiFunction:
    """An immutable generating function; safe to share across threads.

    ``scale`` multiplies the evaluator inside the support.  It is used to
    renormalize a named family (for example to the natural scale of a
    concrete function) without losing the family tag.
    """

    support_lo: float
    support_hi: float
    family: PsiFamily
    evaluator: Callable[[float], float]
    params: dict = field(default_factory=dict)
    scale: float = 1.0

    def __call__(self, p: float) -> float:
        if self.family is PsiFamily.DEGENERATE:
            return 1.0 if p == self.params["r"] else INF
        if not (self.support_lo < p < self.support_hi):
            return INF
        return self.scale * self.evaluator(p)

    @property
    def is_degenerate(self) -> bool:
        return self.family is PsiFamily.DEGENERATE

    @property
    def degenerate_p(self) -> float:
        return self.params["r"]

    def with_scale(self, scale: float) -> "PsiFunction":
        if scale <= 0:
            raise InvalidParameterError("scale must be positive")
        return dataclasses.replace(self, scale=scale)

    def describe(self) -> str:
        kv = " ".join(f"{k}={v}" for k, v in sorted(self.params.items())
                      if isinstance(v, (int, float)))
        s = f" scale={self.scale}" if self.scale != 1.0 else ""
        return f"{self.family.value} {kv}{s}".strip()


def support(psi: PsiFunction) -> tuple[float, float]:
    """The open interval where ``psi`` is finite (a single point collapsed
    to ``(r, r)`` for the degenerate family)."""
    return (psi.support_lo, psi.support_hi)


def make_power_psi(A: float, B: float, alpha: float, beta: float) -> PsiFunction:
    """``psi(p) = (p - A)^(-alpha) * (B - p)^(-beta)`` on the open ``(A, B)``."""
    if not (A >= 1.0):
        raise InvalidParameterError(f"A must be >= 1, got {A}")
    if not (math.isfinite(B) and B > A):
        raise InvalidParameterError(f"B must be finite and > A, got {B}")
    if alpha < 0 or beta < 0:
        raise InvalidParameterError("alpha and beta must be >= 0")

    def ev(p: float) -> float:
        return (p - A) ** (-alpha) * (B - p) ** (-beta)

    return PsiFunction(A, B, PsiFamily.POWER_PAIR, ev,
                       {"A": A, "B": B, "alpha": alpha, "beta": beta})


def make_exponent_psi(beta: float) -> PsiFunction:
    """``psi(p) = p^beta`` on ``(1, inf)``, ``beta > 0``."""
    if not (beta > 0):
        raise InvalidParameterError(f"beta must be > 0, got {beta}")
    return PsiFunction(1.0, INF, PsiFamily.EXPONENT, lambda p: p ** beta,
                       {"beta": beta})


def make_degenerate_psi(r: float) -> PsiFunction:
    """The single-point generating function: 1 at ``r``, ``inf`` elsewhere.

    Downstream suprema over ``p`` collapse to the single point, so the
    associated norm is exactly the ``L_r`` norm.
    """
    if not (r >= 1.0):
        raise InvalidParameterError(f"r must be >= 1, got {r}")
    return PsiFunction(r, r, PsiFamily.DEGENERATE, lambda p: 1.0, {"r": r})


class SlowlyVaryingKind(enum.Enum):
    EXPONENT = "exponent"
    POLE = "pole"


def make_slowly_varying_psi(kind: SlowlyVaryingKind, beta: float, b: float,
                            L: SlowlyVaryingSpec) -> PsiFunction:
    """Exponent shape ``p^beta * L(p)`` on ``(1, inf)`` (requires ``b = inf``),
    or pole shape ``(b - p)^(-beta) * L(1/(b - p))`` on ``(1, b)`` for finite
    ``b > 1``."""
    if beta <= 0:
        raise InvalidParameterError("beta must be > 0")
    if kind is SlowlyVaryingKind.EXPONENT:
        if math.isfinite(b):
            raise InvalidParameterError("exponent kind requires b = +inf")
        return PsiFunction(1.0, INF, PsiFamily.SLOWLY_VARYING_EXPONENT,
                           lambda p: p ** beta * L(p),
                           {"beta": beta, "L": L.description})
    if kind is SlowlyVaryingKind.POLE:
        if not (math.isfinite(b) and b > 1):
            raise InvalidParameterError("pole kind requires finite b > 1")
        return PsiFunction(1.0, b, PsiFamily.SLOWLY_VARYING_POLE,
                           lambda p: (b - p) ** (-beta) * L(1.0 / (b - p)),
                           {"beta": beta, "b": b, "L": L.description})
    raise InvalidParameterError(f"unknown kind {kind!r}")


def parse_psi_spec(text: str) -> PsiFunction:
    """Build a generating function from a key-value snippet.

    Examples: ``"power A=1 B=3 alpha=1 beta=1"``, ``"exponent beta=2"``,
    ``"degenerate r=2"``.  Used by the CLI and its config files.
    """
    parts = text.split()
    if not parts:
        raise InvalidParameterError("empty psi spec")
    family, kv = parts[0].lower(), {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise InvalidParameterError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        kv[k] = float(v)
    try:
        if family == "power":
            return make_power_psi(kv["A"], kv["B"], kv.get("alpha", 0.0),
                                  kv.get("beta", 0.0))
        if family == "exponent":
            return make_exponent_psi(kv["beta"])
        if family == "degenerate":
            return make_degenerate_psi(kv["r"])
    except KeyError as exc:
        raise InvalidParameterError(f"psi spec {text!r} missing key {exc}") from None
    raise InvalidParameterError(f"unknown psi family {family!r}")
