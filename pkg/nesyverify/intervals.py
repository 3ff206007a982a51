"""Closed-interval arithmetic over doubles.

Endpoints use native rounding (no outward rounding). Intervals are
immutable and validated at construction: ``lo <= hi`` and both finite.
"""
import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed real interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"Interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"Interval lower bound {self.lo} exceeds upper bound {self.hi}")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def subset_of(self, other: "Interval", tol: float = 0.0) -> bool:
        return other.lo - tol <= self.lo and self.hi <= other.hi + tol

    def clamped(self, lo: float = 0.0, hi: float = 1.0) -> "Interval":
        """Clamp for display; never used in bound computations."""
        return Interval(min(max(self.lo, lo), hi), max(min(self.hi, hi), lo))

    def __add__(self, other: "Interval") -> "Interval":
        return iv_add(self, other)

    def __mul__(self, other: "Interval") -> "Interval":
        return iv_mul(self, other)

    def __contains__(self, x: float) -> bool:
        return iv_contains(self, x)

    def __str__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def iv_add(a: Interval, b: Interval) -> Interval:
    return Interval(a.lo + b.lo, a.hi + b.hi)


def iv_mul(a: Interval, b: Interval) -> Interval:
    products = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return Interval(min(products), max(products))


def iv_one_minus(a: Interval) -> Interval:
    return Interval(1.0 - a.hi, 1.0 - a.lo)


def iv_contains(a: Interval, x: float) -> bool:
    return a.lo <= x <= a.hi


def iv_sum(items) -> Interval:
    """Sum of a non-empty iterable of intervals."""
    items = iter(items)
    total = next(items)
    for item in items:
        total = iv_add(total, item)
    return total


def iv_prod(items) -> Interval:
    """Product of a non-empty iterable of intervals."""
    items = iter(items)
    total = next(items)
    for item in items:
        total = iv_mul(total, item)
    return total
