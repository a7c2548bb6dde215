"""Time accounting for the search phases.

Two interchangeable budgets: wall-clock (normal operation) and iteration
count (fully deterministic runs, e.g. for reproducibility checks). Both are
only consulted between search iterations, never mid-move.
"""
from __future__ import annotations

import time


class WallClockBudget:
    def __init__(self, seconds: float):
        self.seconds = float(seconds)
        self.start = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    @property
    def expired(self) -> bool:
        return self.elapsed >= self.seconds

    @property
    def fraction(self) -> float:
        """Fraction of the budget consumed, capped at 1."""
        return min(1.0, self.elapsed / self.seconds) if self.seconds > 0 else 1.0

    def tick(self, n: int = 1):
        pass


class IterationBudget:
    """Counts search iterations instead of seconds; deterministic by construction."""

    def __init__(self, iterations: int):
        self.iterations = int(iterations)
        self.done = 0

    @property
    def elapsed(self) -> float:
        return float(self.done)

    @property
    def expired(self) -> bool:
        return self.done >= self.iterations

    @property
    def fraction(self) -> float:
        return min(1.0, self.done / self.iterations) if self.iterations > 0 else 1.0

    def tick(self, n: int = 1):
        self.done += n


class UnlimitedBudget:
    elapsed = 0.0
    expired = False
    fraction = 0.0

    def tick(self, n: int = 1):
        pass


UNLIMITED = UnlimitedBudget()
