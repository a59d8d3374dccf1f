"""Asymptotic annulus radii for the n-th zero at the critical modulus tau_n.

With alpha0 = sqrt(3)/(2 pi), separation of the zeros xi_k holds for
k >= n once |q| <= tau_n := 1 - 1/(alpha0 n), and then

    m_n := tau_n^{-n+1/2}  <=  |xi_n|  <=  M_n := tau_n^{-n-1/2}.

Both radii decrease to e^{1/alpha0} = 37.62236657... as n grows.  Reported
tables list tau_n truncated (not rounded) to 2 decimals and m_n, M_n to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

DEFAULT_TABLE_INDICES = (5, 6, 7, 8, 9, 10, 15, 20, 25, 30)


def alpha0():
    """sqrt(3) / (2 pi) = 0.2756644477..."""
    return math.sqrt(3.0) / (2.0 * math.pi)


def truncate(x, decimals):
    """Truncate toward zero at the given number of decimals (no rounding)."""
    scale = 10.0 ** decimals
    return math.floor(x * scale) / scale if x >= 0 else -math.floor(-x * scale) / scale


@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    tau: float
    m: float
    M: float

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise DomainError(f"tau must lie in (0, 1), got {self.tau!r}")
        if not self.m < self.M:
            raise DomainError("need m < M")

    def truncated(self):
        """(tau to 2 decimals, m to 1, M to 1), truncated."""
        return truncate(self.tau, 2), truncate(self.m, 1), truncate(self.M, 1)


def table_row(n):
    """Row (n, tau_n, m_n, M_n); requires n > 1/alpha0 ~ 3.63 so that tau_n > 0."""
    if not isinstance(n, int) or n <= 3:
        raise DomainError(f"n must be an integer >= 4 (tau_n <= 0 otherwise), got {n!r}")
    tau = 1.0 - 1.0 / (alpha0() * n)
    return AsymptoticRow(n=n, tau=tau, m=tau ** -(n - 0.5), M=tau ** -(n + 0.5))


def table(ns=DEFAULT_TABLE_INDICES):
    return [table_row(n) for n in ns]
