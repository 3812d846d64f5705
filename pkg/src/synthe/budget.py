"""Synthesis budgets.

Wall-clock budgets give the usual timeout behavior; granule budgets count
abstract work units (one candidate validation = one granule) so that runs
are reproducible byte-for-byte regardless of machine speed.
"""
from __future__ import annotations

import time


class BudgetExpired(Exception):
    pass


class Budget:
    def tick(self, cost: int = 1) -> None:
        pass

    def expired(self) -> bool:
        return False

    def check(self) -> None:
        if self.expired():
            raise BudgetExpired()


class NoBudget(Budget):
    pass


class WallClockBudget(Budget):
    def __init__(self, seconds: float):
        self.seconds = seconds
        self.start = time.monotonic()

    def expired(self) -> bool:
        return time.monotonic() - self.start >= self.seconds


class GranuleBudget(Budget):
    def __init__(self, granules: int):
        self.limit = granules
        self.used = 0

    def tick(self, cost: int = 1) -> None:
        self.used += cost

    def expired(self) -> bool:
        return self.used >= self.limit
