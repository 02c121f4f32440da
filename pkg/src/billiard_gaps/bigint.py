"""Big-integer kernels backed by GMP.

CPython's own ``gcd``, ``isqrt`` and ``str`` are quadratic on the
multi-megabit integers produced by the Pell and Lucas pipelines; these
wrappers route through gmpy2 and always hand back plain ``int``.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable

import gmpy2

mpz = gmpy2.mpz


def gcd(*values: int) -> int:
    return int(gmpy2.gcd(*values))


def isqrt(n: int) -> int:
    return int(gmpy2.isqrt(n))


def lcm(values: Iterable[int]) -> int:
    return int(reduce(gmpy2.lcm, values, mpz(1)))


def int_str(n: int) -> str:
    """Decimal string of an integer of any size."""
    return mpz(n).digits(10)


# below this size CPython's own arithmetic is as fast as the conversion
SMALL_BITS = 1 << 13


def divides(d: int, n: int) -> bool:
    """``d | n``."""
    if n.bit_length() < SMALL_BITS:
        return n % d == 0
    return gmpy2.is_divisible(mpz(n), mpz(d))


def floordiv(n: int, d: int) -> int:
    if n.bit_length() < SMALL_BITS:
        return n // d
    return int(mpz(n) // mpz(d))


def square(n: int) -> int:
    if n.bit_length() < SMALL_BITS:
        return n * n
    return int(mpz(n) ** 2)
