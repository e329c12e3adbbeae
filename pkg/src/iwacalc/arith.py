"""Base coefficient arithmetic: odd-prime configuration and p-adic valuations.

Every computation in the package happens over Z/p^N for an odd prime p and a
precision exponent N fixed per configuration.  PrimeConfig carries those two
numbers plus the polynomial degree cap; all other modules receive it rather
than global state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "PrimeConfig",
    "is_odd_prime",
    "valuation",
    "unit_part",
    "inv_mod",
    "DEFAULT_DEGREE_CAP",
]

DEFAULT_DEGREE_CAP = 256


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeConfig:
    """Arithmetic context: odd prime p, precision exponent N, degree cap."""

    p: int
    N: int
    degree_cap: int = DEFAULT_DEGREE_CAP

    def __post_init__(self) -> None:
        if not is_odd_prime(self.p):
            raise ValueError(f"p must be an odd prime >= 3, got {self.p}")
        if self.N < 1:
            raise ValueError(f"precision exponent must be >= 1, got {self.N}")
        if self.degree_cap < 1:
            raise ValueError("degree cap must be positive")

    @property
    def modulus(self) -> int:
        return _pow_cached(self.p, self.N)

    def with_precision(self, N: int) -> "PrimeConfig":
        return PrimeConfig(self.p, N, self.degree_cap)

    def with_cap(self, cap: int) -> "PrimeConfig":
        return PrimeConfig(self.p, self.N, cap)


@lru_cache(maxsize=None)
def _pow_cached(p: int, k: int) -> int:
    return p**k


def valuation(x: int, p: int, cap: int | None = None) -> int:
    """p-adic valuation of x; for x == 0 returns `cap` (must be supplied).

    The cap convention suits finite-precision work: an element that is zero
    mod p^N has every valuation an observer at precision N can measure.
    """
    if x == 0:
        if cap is None:
            raise ValueError("valuation of 0 needs an explicit cap")
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v


def unit_part(x: int, p: int) -> int:
    """x with all factors of p removed (x must be nonzero)."""
    if x == 0:
        raise ValueError("unit part of 0 is undefined")
    while x % p == 0:
        x //= p
    return x


def inv_mod(x: int, m: int) -> int:
    """Inverse of x mod m; raises ValueError when gcd(x, m) != 1."""
    return pow(x, -1, m)
