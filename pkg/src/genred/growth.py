"""Growth functions g and their iterates g^k (k-fold composition)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable


@dataclass(frozen=True)
class GrowthFunction:
    name: str
    fn: Callable[[int], int] = field(compare=False)
    # declared only; never checked mechanically
    time_constructible: bool = True

    def __call__(self, n: int) -> int:
        return self.fn(n)


SQUARE = GrowthFunction("n^2", lambda n: n * n)
CUBE = GrowthFunction("n^3", lambda n: n * n * n)
SUCCESSOR = GrowthFunction("n+1", lambda n: n + 1)
EXPONENTIAL = GrowthFunction("2^n", lambda n: 2 ** n)

REGISTRY = {g.name: g for g in (SQUARE, CUBE, SUCCESSOR, EXPONENTIAL)}


def growth_by_name(name: str) -> GrowthFunction:
    try:
        return REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown growth function {name!r}; known: {', '.join(REGISTRY)}") from None


def iterate(g: GrowthFunction, k: int, n: int) -> int:
    """g^k(n), with g^0(n) = n."""
    if k < 0:
        raise ValueError("k must be non-negative")
    for _ in range(k):
        n = g(n)
    return n


@dataclass(frozen=True)
class GrowthReport:
    name: str
    checked_up_to: int
    violations: tuple[tuple[int, str], ...]
    time_constructible: str = "declared, unchecked"

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def first_failure(self) -> int | None:
        return min((n for n, _ in self.violations), default=None)


def validate_growth(g: GrowthFunction, N: int) -> GrowthReport:
    """Check strict monotonicity and g(n) >= n^2 for all n <= N."""
    violations = []
    prev = None
    for n in range(N + 1):
        v = g(n)
        if prev is not None and v <= prev:
            violations.append((n, f"not increasing: g({n - 1})={prev} >= g({n})={v}"))
        if v < n * n:
            violations.append((n, f"g({n})={v} < {n * n}"))
        prev = v
    return GrowthReport(g.name, N, tuple(violations))
