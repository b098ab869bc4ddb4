"""Record types shared by the bound registry and the block identity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadParams

CONJUGATE_TOL = 1e-12


@dataclass(frozen=True)
class BoundParams:
    """The exponent bundle appearing across the registered bounds.

    ``p`` and ``q`` are conjugate exponents (1/p + 1/q = 1), as are
    ``alpha2`` and ``beta2``; ``alpha`` is a power in [0, 1]; ``r`` is a
    positive exponent. Constraints specific to one bound (r >= 1,
    p r >= 2, ...) are validated where that bound is evaluated.
    """

    r: float = 1.0
    p: float = 2.0
    q: float = 2.0
    alpha: float = 0.5
    alpha2: float = 2.0
    beta2: float = 2.0

    def __post_init__(self):
        if not (self.r > 0.0 and np.isfinite(self.r)):
            raise BadParams(f"r must be a positive real, got {self.r}")
        if not (self.p > 1.0 and self.q > 1.0):
            raise BadParams(f"p, q must exceed 1, got p={self.p}, q={self.q}")
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > CONJUGATE_TOL:
            raise BadParams(f"p, q must be conjugate, got p={self.p}, q={self.q}")
        if not (0.0 <= self.alpha <= 1.0):
            raise BadParams(f"alpha must lie in [0, 1], got {self.alpha}")
        if not (self.alpha2 > 1.0 and self.beta2 > 1.0):
            raise BadParams(f"alpha2, beta2 must exceed 1, got {self.alpha2}, {self.beta2}")
        if abs(1.0 / self.alpha2 + 1.0 / self.beta2 - 1.0) > CONJUGATE_TOL:
            raise BadParams(f"alpha2, beta2 must be conjugate, got {self.alpha2}, {self.beta2}")

    def require(self, **mins: float) -> None:
        """Validate per-bound lower bounds, e.g. require(r=1.0, pr=2.0)."""
        values = {
            "r": self.r,
            "p": self.p,
            "q": self.q,
            "pr": self.p * self.r,
            "qr": self.q * self.r,
        }
        for name, lo in mins.items():
            if values[name] < lo - CONJUGATE_TOL:
                raise BadParams(f"bound requires {name} >= {lo}, got {values[name]}")

    def asdict(self) -> dict[str, float]:
        return {
            "r": self.r,
            "p": self.p,
            "q": self.q,
            "alpha": self.alpha,
            "alpha2": self.alpha2,
            "beta2": self.beta2,
        }


@dataclass(frozen=True)
class ScalarFnPair:
    """A pair (f, g) of nonnegative functions on [0, inf) with f(t) g(t) = t.

    Either a power pair f = t^a, g = t^(1-a) with a in [0, 1] (with the
    convention t^0 = 1 for every t >= 0, including 0), or a custom pair of
    callables. ``validate_on`` checks the defining constraint on the
    spectrum samples actually used.
    """

    power_alpha: float | None = None
    f: Callable[[np.ndarray], np.ndarray] | None = None
    g: Callable[[np.ndarray], np.ndarray] | None = None

    @classmethod
    def power(cls, alpha: float) -> "ScalarFnPair":
        if not (0.0 <= alpha <= 1.0):
            raise BadParams(f"power pair exponent must lie in [0, 1], got {alpha}")
        return cls(power_alpha=float(alpha))

    @classmethod
    def custom(cls, f: Callable, g: Callable) -> "ScalarFnPair":
        return cls(power_alpha=None, f=f, g=g)

    @property
    def label(self) -> str:
        return "custom" if self.power_alpha is None else f"power({self.power_alpha:g})"

    def f_vals(self, t: np.ndarray, power: float = 1.0) -> np.ndarray:
        t = np.maximum(np.asarray(t, dtype=np.float64), 0.0)
        if self.power_alpha is None:
            base = np.asarray(self.f(t), dtype=np.float64)
            return np.power(base, power)
        return np.power(t, self.power_alpha * power)

    def g_vals(self, t: np.ndarray, power: float = 1.0) -> np.ndarray:
        t = np.maximum(np.asarray(t, dtype=np.float64), 0.0)
        if self.power_alpha is None:
            base = np.asarray(self.g(t), dtype=np.float64)
            return np.power(base, power)
        return np.power(t, (1.0 - self.power_alpha) * power)

    def validate_on(self, spectrum: np.ndarray, tol: float = 1e-10) -> None:
        t = np.maximum(np.asarray(spectrum, dtype=np.float64).reshape(-1), 0.0)
        if t.size == 0:
            return
        fg = self.f_vals(t) * self.g_vals(t)
        if np.any(fg < -tol) or float(np.max(np.abs(fg - t))) > tol * max(1.0, float(np.max(t))):
            raise BadParams("function pair violates f(t) g(t) = t on the evaluated spectrum")


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one bound or identity evaluation.

    For one-sided bounds ``slack = rhs - lhs``; nonnegative slack means
    the bound holds. Two-sided checks also carry ``lower`` and use
    ``slack = min(lhs - lower, rhs - lhs)``. Equality checks use
    ``slack = -residual / max(1, |lhs|, |rhs|)``. For bounds quantified
    over sampled vectors, (lhs, rhs) belong to the worst sampled tuple.
    ``verdict`` is "skipped" exactly when a hypothesis failed, otherwise
    "holds" or "violated" by the sign of slack against the tolerance.
    """

    theorem_id: str
    hypotheses_ok: bool
    hypothesis_residuals: dict[str, float] = field(default_factory=dict)
    lhs: float = 0.0
    rhs: float = 0.0
    slack: float = 0.0
    params: BoundParams | None = None
    seed: int = 0
    verdict: str = "holds"
    kind: str = "inequality"
    lower: float | None = None

    def asdict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "hypotheses_ok": self.hypotheses_ok,
            "hypothesis_residuals": dict(self.hypothesis_residuals),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "params": None if self.params is None else self.params.asdict(),
            "seed": self.seed,
            "verdict": self.verdict,
            "kind": self.kind,
            "lower": self.lower,
        }


def finish_record(
    theorem_id: str,
    residuals: dict[str, float],
    lhs: float,
    rhs: float,
    tol: float,
    params: BoundParams | None = None,
    seed: int = 0,
    kind: str = "inequality",
    lower: float | None = None,
    residual: float | None = None,
    hyp_tol: float = 1e-8,
) -> CheckRecord:
    """Assemble a CheckRecord with the uniform verdict rule.

    Equality checks pass the two side values as (lhs, rhs) plus the raw
    ``residual`` (defaults to |lhs - rhs|); it is scaled by
    max(1, |lhs|, |rhs|) and stored negated as the slack.
    """
    hypotheses_ok = all(v <= hyp_tol for v in residuals.values())
    if not hypotheses_ok:
        return CheckRecord(
            theorem_id=theorem_id,
            hypotheses_ok=False,
            hypothesis_residuals=residuals,
            lhs=lhs,
            rhs=rhs,
            slack=0.0,
            params=params,
            seed=seed,
            verdict="skipped",
            kind=kind,
            lower=lower,
        )
    if kind == "equality":
        raw = abs(lhs - rhs) if residual is None else residual
        slack = -raw / max(1.0, abs(lhs), abs(rhs))
        ok = -slack <= tol
    elif kind == "two_sided" and lower is not None:
        slack = min(lhs - lower, rhs - lhs)
        ok = slack >= -tol * max(1.0, abs(rhs), abs(lower))
    else:
        slack = rhs - lhs
        ok = slack >= -tol * max(1.0, abs(rhs))
    return CheckRecord(
        theorem_id=theorem_id,
        hypotheses_ok=True,
        hypothesis_residuals=residuals,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        params=params,
        seed=seed,
        verdict="holds" if ok else "violated",
        kind=kind,
        lower=lower,
    )
