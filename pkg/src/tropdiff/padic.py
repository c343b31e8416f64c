"""p-adic valuations and norms on the rationals, as maps into ``PosRat``."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .semiring import PosRat


@lru_cache(maxsize=None)
def _check_prime(p: int) -> int:
    from sympy import isprime

    if not isinstance(p, int) or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def padic_valuation(q, p: int) -> int | None:
    """Exponent of ``p`` in ``q``; ``None`` for ``q == 0``."""
    _check_prime(p)
    q = Fraction(q)
    if q == 0:
        return None
    from sympy import multiplicity

    return multiplicity(p, abs(q.numerator)) - multiplicity(p, q.denominator)


def padic_norm(q, p: int) -> PosRat:
    """``|q|_p = p**(-k)`` where ``k`` is the exponent of ``p`` in ``q``; ``|0|_p = 0``."""
    k = padic_valuation(q, p)
    if k is None:
        return PosRat(0)
    return PosRat(Fraction(1, p**k) if k >= 0 else Fraction(p ** (-k)))


def degenerate_padic_norm(n: int, p: int) -> PosRat:
    """0 when ``p`` divides ``n`` (including ``n == 0``), 1 otherwise."""
    _check_prime(p)
    return PosRat(0 if n % p == 0 else 1)
