"""Asymptotic conference-key rates and their expected per-round values."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass

from confkey.core.errors import ContractViolationError, InvalidArgumentError
from confkey.quantum.closed_form import ErrorRates, star_error_rates

logger = logging.getLogger(__name__)

LEADER_TIE_TOL = 1e-12
Q_X_TOL = 1e-12


def binary_entropy(x: float) -> float:
    """Base-2 binary entropy with ``H(0) = H(1) = 0``."""
    if not 0.0 <= x <= 1.0:
        raise InvalidArgumentError(f"entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def asymptotic_rate(rates: ErrorRates) -> float:
    """Raw ``1 − H(Q_X) − max_i H(Q_{A,B_i})``; negative when no key can be distilled."""
    return 1.0 - binary_entropy(rates.q_x) - max(binary_entropy(q) for q in rates.q_ab)


# ---------------------------------------------------------------------------
# Leader selection and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeaderChoice:
    leader: int
    rates: ErrorRates
    r_asymptotic: float

    @property
    def r_clamped(self) -> float:
        return max(0.0, self.r_asymptotic)


@dataclass(frozen=True)
class KeyRateReport:
    """Key rate of one distribution structure.

    ``swap_success`` is the probability that every non-leaf node of the
    structure succeeds; with a uniform ``q`` it equals ``q ** swap_count``.
    """

    leader: int
    rates: ErrorRates
    r_asymptotic: float
    r_clamped: float
    r_round: float
    swap_count: int
    swap_success: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.r_clamped <= 1.0:
            raise ContractViolationError(f"clamped rate {self.r_clamped} outside [0, 1]")
        if self.r_round < 0.0 or self.r_round > self.r_clamped:
            raise ContractViolationError(
                f"round rate {self.r_round} outside [0, {self.r_clamped}]"
            )


def select_leader(per_leader_rates: Mapping[int, ErrorRates]) -> LeaderChoice:
    """Leader minimizing the worst pairwise entropy; ties go to the lowest index."""
    if not per_leader_rates:
        raise InvalidArgumentError("select_leader needs at least one candidate")
    items = sorted(per_leader_rates.items())
    reference = items[0][1].q_x
    for leader, rates in items:
        if abs(rates.q_x - reference) > Q_X_TOL:
            raise ContractViolationError(
                f"q_x differs across leaders: {reference} vs {rates.q_x} (leader {leader})"
            )

    best_leader, best_rates = items[0]
    best_key = max(binary_entropy(q) for q in best_rates.q_ab)
    for leader, rates in items[1:]:
        key = max(binary_entropy(q) for q in rates.q_ab)
        if key < best_key - LEADER_TIE_TOL:
            best_leader, best_rates, best_key = leader, rates, key
    return LeaderChoice(best_leader, best_rates, asymptotic_rate(best_rates))


def expected_round_rate(choice: LeaderChoice, q: float, n_nonleaf: int) -> float:
    """``q ** n · max(0, r)``."""
    if n_nonleaf < 1:
        raise InvalidArgumentError(f"a structure has at least one non-leaf node, got {n_nonleaf}")
    if not 0.0 <= q <= 1.0:
        raise InvalidArgumentError(f"q must lie in [0, 1], got {q}")
    return q**n_nonleaf * choice.r_clamped


def build_report(choice: LeaderChoice, swap_success: float, n_nonleaf: int) -> KeyRateReport:
    if not 0.0 <= swap_success <= 1.0:
        raise InvalidArgumentError(f"swap success must lie in [0, 1], got {swap_success}")
    return KeyRateReport(
        leader=choice.leader,
        rates=choice.rates,
        r_asymptotic=choice.r_asymptotic,
        r_clamped=choice.r_clamped,
        r_round=swap_success * choice.r_clamped,
        swap_count=n_nonleaf,
        swap_success=swap_success,
    )


# ---------------------------------------------------------------------------
# Routing proxies
# ---------------------------------------------------------------------------


def pairwise_rate_proxy(path_gamma: float, n_links: int, q: float) -> float:
    """Two-party BB84 rate over a swapped path, scaled by its swap success."""
    if n_links < 1:
        raise InvalidArgumentError(f"a path has at least one link, got {n_links}")
    qber = (1.0 - path_gamma) / 2.0
    return q ** (n_links - 1) * max(0.0, 1.0 - 2.0 * binary_entropy(qber))


def uniform_star_rate(n_parties: int, gamma: float) -> float:
    """Asymptotic rate of a star whose every arm has the same path γ."""
    return asymptotic_rate(star_error_rates(gamma, [gamma] * (n_parties - 1)))


def min_uniform_gamma(n_parties: int, tolerance: float = 1e-10) -> float:
    """Smallest uniform per-arm γ giving a positive asymptotic rate, by bisection."""
    if n_parties < 2:
        raise InvalidArgumentError(f"need at least 2 parties, got {n_parties}")
    if tolerance <= 0.0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tolerance}")
    lo, hi = 0.0, 1.0
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if uniform_star_rate(n_parties, mid) > 0.0:
            hi = mid
        else:
            lo = mid
    logger.debug("threshold gamma for %d parties: %s", n_parties, hi)
    return hi
