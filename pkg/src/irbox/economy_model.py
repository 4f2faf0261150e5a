"""Two-date firm optimization and regulator welfare accounting.

A firm funds risky-asset purchases out of debt d and equity e, storing
the fraction (1 - pi_store) of funding in a safe asset. The risky unit
return is uniform on [r - z, r + z] (variance z^2 / 3), so the portfolio
payoff variance is z^2 y^2 / 3 for y units held, and a mean-variance firm
maximizes a concave quadratic in y. The storage split pi_store is an
exogenous scenario parameter throughout: payoff, utility and the
optimizer all hold it fixed, and the split actually implied by a choice
(x * y / (d + e)) is reported on the choice instead of being forced to
match.

The regulator's welfare adds the sum of firm utilities to an aggregate
equity-balance term; at the balance point the aggregate at-risk fraction
is 1 - sum(e - d) / sum(a), which for a single firm reduces to the
record-level at-risk fraction of risk_indices.pi_fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError

BUDGET_TOL = 1e-9


class BudgetViolation(ValidationError):
    """Explicit assets deviate from debt + equity."""


class UnboundedProgram(ValidationError):
    """r <= z leaves the risk-free debt constraint non-binding upward."""


class ZeroAggregateAssets(ValidationError):
    """Welfare needs a nonzero asset aggregate."""


@dataclass(frozen=True)
class EconomyParams:
    """Market and preference parameters shared across firms.

    r: expected unit return (> 0); z: return half-width (> 0);
    tau: risk tolerance (> 0); p: unit market price;
    pi_store: fraction of funding placed at risk, the rest stored safely.
    """

    r: float
    z: float
    tau: float
    p: float
    pi_store: float = 0.0

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if self.z <= 0:
            raise ValueError(f"z must be positive, got {self.z}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not 0.0 <= self.pi_store <= 1.0:
            raise ValueError(f"pi_store must lie in [0, 1], got {self.pi_store}")

    @property
    def return_support(self) -> tuple[float, float]:
        return (self.r - self.z, self.r + self.z)

    @property
    def return_variance(self) -> float:
        return self.z * self.z / 3.0


@dataclass(frozen=True)
class FirmChoice:
    """One firm's position: unit investment x, units held y, funding (d, e).

    ``assets`` defaults to d + e (the budget identity); passing an
    inconsistent explicit value raises at payoff evaluation.
    """

    x: float
    y: float
    d: float
    e: float
    assets: float | None = None

    @property
    def total_assets(self) -> float:
        return self.d + self.e if self.assets is None else self.assets

    @property
    def risky_assets(self) -> float:
        return self.x * self.y

    @property
    def funding_fraction(self) -> float:
        """Risk split implied by the position: x*y / (d + e)."""
        return self.x * self.y / (self.d + self.e)

    def debt_risk_free(self, params: EconomyParams) -> bool:
        """Worst-case risky proceeds cover debt: (r - z) * y <= d."""
        return (params.r - params.z) * self.y <= self.d


def _check_budget(choice: FirmChoice) -> None:
    total = choice.d + choice.e
    if total <= 0:
        raise BudgetViolation(f"debt + equity must be positive, got {total}")
    if choice.assets is not None:
        if abs(choice.assets - total) > BUDGET_TOL * max(1.0, abs(total)):
            raise BudgetViolation(
                f"assets {choice.assets} != debt + equity {total}"
            )


def expected_payoff(choice: FirmChoice, params: EconomyParams) -> float:
    """Expected portfolio payoff:
    x*y*r + (1 - pi_store)*(d + e) + (p*y - (d + e))."""
    _check_budget(choice)
    funding = choice.d + choice.e
    return (
        choice.x * choice.y * params.r
        + (1.0 - params.pi_store) * funding
        + (params.p * choice.y - funding)
    )


def utility(choice: FirmChoice, params: EconomyParams) -> float:
    """Mean-variance utility: expected payoff minus z^2 y^2 / (3 tau)."""
    penalty = params.z**2 * choice.y**2 / (3.0 * params.tau)
    return expected_payoff(choice, params) - penalty


def optimize_firm(d: float, e: float, x: float, params: EconomyParams) -> FirmChoice:
    """Choose the utility-maximizing number of risky units.

    The objective is concave in y with stationary point
    y* = 3 tau (x r + p) / (2 z^2); the risk-free debt condition caps y at
    d / (r - z), and y >= 0. Because the objective is concave, clipping the
    stationary point to the feasible interval is the constrained argmax.
    x is an exogenous scenario input. Requires r > z so the debt cap is a
    genuine upper bound; otherwise the constraint never binds from above
    and the program is rejected as unbounded.
    """
    if d < 0 or e < 0:
        raise ValidationError(f"debt and equity must be nonnegative, got ({d}, {e})")
    if d + e <= 0:
        raise ValidationError("debt + equity must be positive")
    if params.r <= params.z:
        raise UnboundedProgram(
            f"r = {params.r} <= z = {params.z}: risk-free debt condition "
            "cannot cap the position"
        )
    y_stationary = 3.0 * params.tau * (x * params.r + params.p) / (2.0 * params.z**2)
    y_cap = d / (params.r - params.z)
    y = min(max(y_stationary, 0.0), y_cap)
    return FirmChoice(x=x, y=y, d=d, e=e)


@dataclass(frozen=True)
class WelfareReport:
    """Aggregate welfare decomposition.

    p2 is the equity-balance value sum(e - d); p2_at_funding_split is the
    alternative reading sum(a) * (1 - pi_store), the aggregate not placed
    at risk under the scenario split. w uses the equity-balance reading.
    """

    p1: float
    p2: float
    p2_at_funding_split: float
    w: float
    equilibrium_pi: float


def welfare(choices: Sequence[FirmChoice], params: EconomyParams) -> WelfareReport:
    """Aggregate firm utilities and the regulator's balance terms.

    equilibrium_pi = 1 - sum(e - d) / sum(a) is the at-risk fraction at
    which aggregate non-risky assets exactly match the equity surplus.
    """
    total_assets = sum(c.d + c.e for c in choices)
    if total_assets == 0:
        raise ZeroAggregateAssets("aggregate debt + equity is zero")
    p1 = sum(utility(c, params) for c in choices)
    surplus = sum(c.e - c.d for c in choices)
    p2_at_split = total_assets * (1.0 - params.pi_store)
    equilibrium_pi = 1.0 - surplus / total_assets
    return WelfareReport(
        p1=p1,
        p2=surplus,
        p2_at_funding_split=p2_at_split,
        w=p1 + surplus,
        equilibrium_pi=equilibrium_pi,
    )
