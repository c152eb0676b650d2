"""Asymptotic independence test built on the maximum entry statistic.

Under the null of i.i.d. standardized coordinates the centered statistic
T follows the Gumbel-type limit, so the upper tail 1 - F(T) serves as an
asymptotic p-value.  Inputs are assumed variance-1; the test does not
studentize internally because empirical rescaling changes the law of the
statistic.  The CLI offers an explicit opt-in studentize flag, clearly a
heuristic outside the theory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import statcore
from .asymptotics import ONE_SIDED, TWO_SIDED, GumbelLimit, normalize
from .populations import AssumptionProfile, RegimeReport, check_regime
from .statcore import StatResult

LEVELS = (0.01, 0.05, 0.10)


@dataclass(frozen=True)
class TestResult:
    """Statistic, normalized value, p-value and fixed-level decisions.

    ``signed_nonpositive`` marks the degenerate one-sided case where the
    signed maximum is <= 0; the statistic is then clipped to 0 before
    normalization (the event is asymptotically negligible under the
    null) and the p-value is effectively 1.
    """

    stat: StatResult
    t_value: float
    p_value: float
    decisions: dict = field(default_factory=dict)
    regime: RegimeReport | None = None
    sided: str = TWO_SIDED
    signed_nonpositive: bool = False

    def to_json(self) -> dict:
        return {
            "stat": self.stat.to_json(),
            "t_value": self.t_value,
            "p_value": self.p_value,
            "decisions": {f"{lvl:.2f}": bool(rej) for lvl, rej in self.decisions.items()},
            "regime": None if self.regime is None else self.regime.to_json(),
            "sided": self.sided,
            "signed_nonpositive": self.signed_nonpositive,
        }


def _finish(stat: StatResult, sided: str, profile: AssumptionProfile | None) -> TestResult:
    if sided == TWO_SIDED:
        w = stat.w_abs
        flagged = False
    elif sided == ONE_SIDED:
        w = max(stat.w_signed, 0.0)
        flagged = stat.w_signed <= 0.0
    else:
        raise ValueError(f"sided must be {TWO_SIDED!r} or {ONE_SIDED!r}, got {sided!r}")
    ns = normalize(w, stat.n, stat.p, stat.m)
    limit = GumbelLimit(stat.m, sided)
    p_value = limit.sf(ns.t_value)
    decisions = {lvl: p_value < lvl for lvl in LEVELS}
    regime = check_regime(stat.n, stat.p, stat.m, profile)
    return TestResult(
        stat=stat,
        t_value=ns.t_value,
        p_value=p_value,
        decisions=decisions,
        regime=regime,
        sided=sided,
        signed_nonpositive=flagged,
    )


def test_independence(
    X,
    m: int,
    sided: str = TWO_SIDED,
    workers: int = 1,
    cost_ceiling: int = statcore.DEFAULT_COST_CEILING,
    profile: AssumptionProfile | None = None,
) -> TestResult:
    """Test coordinate independence from a single n-by-p sample.

    Parameters
    ----------
    X : array_like
        Data matrix with variance-1 coordinates (not checked).
    m : int
        Tensor order of the statistic.
    sided : str
        ``"two_sided"`` uses the absolute maximum and its limit law;
        ``"one_sided"`` uses the signed maximum with the halved rate
        constant.

    Returns
    -------
    TestResult
        p_value is strictly decreasing in the statistic for fixed
        (n, p, m); decisions compare it against levels 0.01/0.05/0.10.
    """
    stat = statcore.max_entry(X, m, workers=workers, cost_ceiling=cost_ceiling)
    return _finish(stat, sided, profile)


def test_independence_multi(
    matrices,
    sided: str = TWO_SIDED,
    workers: int = 1,
    cost_ceiling: int = statcore.DEFAULT_COST_CEILING,
    profile: AssumptionProfile | None = None,
) -> TestResult:
    """Independence test for the multi-population product tensor."""
    stat = statcore.max_entry_multi(matrices, workers=workers, cost_ceiling=cost_ceiling)
    return _finish(stat, sided, profile)
