"""Closed-form precision bounds and the Monte Carlo sandwich check.

Conventions: natural logarithms in all Gaussian-measure bounds; base-2
logarithms in the hyperplane count (it counts binary sign patterns).
Big-O remainders are reported as magnitudes with unit constant and never
folded into the leading value; vacuous or precondition-violating
configurations are flagged, not clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .generator import (GeneratorStar, epsilon_max, epsilon_min,
                        generate_batch)
from .measure import boundary_measure
from .metrics import precision_support
from .sampling import task_seed

# remainder magnitude above this fraction of the gap to 1 marks the
# bound as dominated by its error term
_REMAINDER_SHARE = 0.10


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound: leading value, remainder magnitude, flags."""

    bound_name: str
    inputs: dict
    leading_value: float
    order_term: float
    regime: str
    valid: bool
    notes: str = ""

    def __post_init__(self):
        # raw values above 1 are allowed only on flagged-invalid reports
        if self.valid and self.leading_value > 1.0:
            raise ValueError("a valid precision bound cannot exceed 1")
        if self.order_term < 0.0:
            raise ValueError("order_term is a magnitude")

    def to_dict(self) -> dict:
        return {"bound_name": self.bound_name, "inputs": self.inputs,
                "leading_value": self.leading_value,
                "order_term": self.order_term, "regime": self.regime,
                "valid": self.valid, "notes": self.notes}

    def csv_row(self) -> str:
        ins = self.inputs
        cells = [self.bound_name, ins.get("eps", ""), ins.get("m", ""),
                 ins.get("d", ""), ins.get("L", ""), self.leading_value,
                 self.order_term, self.regime, self.valid]
        return ",".join(str(c) for c in cells)

    @staticmethod
    def csv_header() -> str:
        return "bound_name,eps,m,d,L,leading_value,order_term,regime,valid"


def precision_upper_bound(eps_min: float, m: int, L: float | None = None,
                          d: int | None = None) -> BoundReport:
    """Finite-m upper bound: 1 - eps(1 - eps*sqrt(2 ln m)) / sqrt(2 pi).

    Valid under the side condition ``L >= d sqrt(ln m)``, which is only
    checkable when the caller supplies ``L`` and ``d``; it is reported as
    a flag, never enforced.  The formula itself is also flagged when the
    inner factor ``1 - eps sqrt(2 ln m)`` turns negative (the raw value
    is still reported).
    """
    if not eps_min > 0:
        raise ValueError("eps_min must be positive")
    if m < 2:
        raise ValueError("m must be >= 2")
    inner = 1.0 - eps_min * math.sqrt(2.0 * math.log(m))
    value = 1.0 - eps_min * inner / math.sqrt(2.0 * math.pi)
    notes = []
    valid = True
    if inner < 0.0:
        valid = False
        notes.append("inner factor negative: bound exceeds the trivial 1")
    if L is not None and d is not None:
        if L < d * math.sqrt(math.log(m)):
            valid = False
            notes.append("precondition L >= d*sqrt(ln m) not met")
    return BoundReport(bound_name="precision_upper",
                       inputs={"eps": eps_min, "m": m, "d": d, "L": L},
                       leading_value=value, order_term=0.0, regime="finite",
                       valid=valid, notes="; ".join(notes))


def precision_upper_bound_asymptotic(eps_min: float, m: int) -> BoundReport:
    """Large-m upper bound: exp(-eps^2/8) * exp(-eps sqrt(ln m / 2))."""
    if eps_min < 0:
        raise ValueError("eps_min must be nonnegative")
    if m < 2:
        raise ValueError("m must be >= 2")
    value = math.exp(-eps_min ** 2 / 8.0) \
        * math.exp(-eps_min * math.sqrt(math.log(m) / 2.0))
    return BoundReport(bound_name="precision_upper_asymptotic",
                       inputs={"eps": eps_min, "m": m},
                       leading_value=value, order_term=0.0,
                       regime="asymptotic-in-m", valid=True)


def precision_lower_bound(eps_max: float, m: int, d: int) -> BoundReport:
    """Best-generator lower bound, in its two regimes.

    ``m <= d``: leading ``1 - eps sqrt(pi ln m)/sqrt(2)`` with remainder
    ``eps ln m / m``.  ``m > d``: leading ``1 - eps ln d / sqrt(2 pi)``
    with remainder ``m / (d ln d)``; requires ``d >= 2``.  Flagged when
    the remainder magnitude exceeds 10% of the gap to 1.
    """
    if not eps_max > 0:
        raise ValueError("eps_max must be positive")
    if m < 2:
        raise ValueError("m must be >= 2")
    if m <= d:
        leading = 1.0 - eps_max * math.sqrt(math.pi * math.log(m) / 2.0)
        order = eps_max * math.log(m) / m
        regime = "m<=d"
    else:
        if d < 2:
            raise ValueError("the m > d bound needs d >= 2 (log d > 0)")
        leading = 1.0 - eps_max * math.log(d) / math.sqrt(2.0 * math.pi)
        order = m / (d * math.log(d))
        regime = "m>d"
    gap = 1.0 - leading
    valid = order <= _REMAINDER_SHARE * gap if gap > 0 else False
    notes = "" if valid else "remainder dominates the leading decrement"
    return BoundReport(bound_name="precision_lower",
                       inputs={"eps": eps_max, "m": m, "d": d},
                       leading_value=leading, order_term=order,
                       regime=regime, valid=valid, notes=notes)


def hyperplane_count(m: int, d: int) -> int:
    """Hyperplanes sufficient to give m points distinct sign patterns.

    ``ceil((m - 2^ceil(log2 d)) / d) + ceil(log2 d)`` with the first term
    clamped at zero, floored at the information bound ``ceil(log2 m)``.
    """
    if m < 2 or d < 2:
        raise ValueError("hyperplane_count needs m >= 2 and d >= 2")
    log2d = math.ceil(math.log2(d))
    first = max(0, math.ceil((m - 2 ** log2d) / d))
    return max(first + log2d, math.ceil(math.log2(m)))


@dataclass(frozen=True)
class SandwichReport:
    """Monte Carlo check of the two-sided precision bracket."""

    alpha: float
    alpha_half_width: float
    lower: float
    lower_half_width: float
    upper: float
    upper_half_width: float
    eps_min: float
    eps_max: float
    slack: float
    holds: bool
    n_samples: int
    seed: int

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("alpha", "alpha_half_width", "lower", "lower_half_width",
                 "upper", "upper_half_width", "eps_min", "eps_max",
                 "slack", "holds", "n_samples", "seed")}


def sandwich_check(gstar: GeneratorStar, n_samples: int,
                   seed: int) -> SandwichReport:
    """Verify  1 - bd(eps_min) >= alpha >= 1 - bd(eps_max)  by Monte Carlo.

    ``alpha`` is the exact-memorization rate of a generated batch;
    the two boundary measures come from independent sample streams.
    ``holds`` allows three standard errors of combined slack on each
    side.  Requires the generator to be built at the eps_max radius.
    """
    L = gstar.lipschitz_budget
    e_min = epsilon_min(gstar.modes, L)
    e_max = epsilon_max(gstar.modes, L)
    if not math.isclose(gstar.epsilon, e_max, rel_tol=1e-9):
        raise ValueError("sandwich_check requires epsilon = epsilon_max")

    batch = generate_batch(gstar, n_samples, task_seed(seed, 0))
    alpha = precision_support(batch, gstar.modes, tol=0.0)
    bd_max = boundary_measure(gstar.frame, e_max, n_samples,
                              task_seed(seed, 1))
    bd_min = boundary_measure(gstar.frame, e_min, n_samples,
                              task_seed(seed, 2))
    lower = 1.0 - bd_max.value
    upper = 1.0 - bd_min.value

    def se(p: float) -> float:
        return math.sqrt(max(p * (1.0 - p), 1e-12) / n_samples)

    slack = 3.0 * math.sqrt(se(alpha) ** 2
                            + max(se(lower), se(upper)) ** 2)
    holds = (alpha >= lower - slack) and (alpha <= upper + slack)
    return SandwichReport(alpha=alpha, alpha_half_width=se(alpha) * 1.96,
                          lower=lower, lower_half_width=bd_max.half_width,
                          upper=upper, upper_half_width=bd_min.half_width,
                          eps_min=e_min, eps_max=e_max, slack=slack,
                          holds=holds, n_samples=n_samples, seed=seed)
