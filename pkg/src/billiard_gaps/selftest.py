"""Exhaustive integer identity suites for the Chebyshev layer."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd

from .chebyshev import FAST_INDEX, SDSSpec, cheb_T2, cheb_U, cheb_T2_table, cheb_U_table, lucas_uv, verify_pell_poly


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def to_dict(self) -> dict:
        return {"name": self.name, "checked": self.checked, "failures": len(self.failures),
                "first_failures": [list(f) for f in self.failures[:5]],
                "seconds": round(self.seconds, 3), "ok": self.ok}


def _run(name: str, cases) -> SuiteResult:
    res = SuiteResult(name)
    t0 = time.perf_counter()
    for case, ok in cases:
        res.checked += 1
        if not ok:
            res.failures.append(case)
    res.seconds = time.perf_counter() - t0
    return res


def pell_polynomial_suite(n_max: int = 50, x_max: int = 20) -> SuiteResult:
    """``T_n(x)^2 - (x^2 - 1) U_{n-1}(x)^2 = 1`` at integer points."""
    return _run("pell_polynomial", (((n, x), verify_pell_poly(n, x))
                                    for x in range(1, x_max + 1) for n in range(1, n_max + 1)))


def composition_suite(nm_max: int = 100, x_max: int = 30) -> SuiteResult:
    """``2T_{n+m} = 2T_n 2T_m - 2T_{n-m}`` at ``x/2`` for ``n >= m >= 0``."""
    def cases():
        for x in range(1, x_max + 1):
            t = cheb_T2_table(2 * nm_max, x)
            for n in range(nm_max + 1):
                for m in range(n + 1):
                    yield (n, m, x), t[n + m] == t[n] * t[m] - t[n - m]
    return _run("composition", cases())


def u_gcd_suite(nm_max: int = 100, x_max: int = 30) -> SuiteResult:
    """``gcd(U_{n-1}(x/2), U_{m-1}(x/2)) = |U_{gcd(n,m)-1}(x/2)|``."""
    def cases():
        for x in range(1, x_max + 1):
            a = [0] + cheb_U_table(nm_max - 1, x)  # a[n] = U_{n-1}
            for n in range(1, nm_max + 1):
                for m in range(1, nm_max + 1):
                    yield (n, m, x), gcd(a[n], a[m]) == abs(a[gcd(n, m)])
    return _run("u_strong_divisibility", cases())


def t_gcd_suite(nm_max: int = 99, x_max: int = 30) -> SuiteResult:
    """``gcd(2T_n(x/2), 2T_m(x/2)) = |2T_gcd(n,m)(x/2)|`` for odd ``n, m``."""
    def cases():
        for x in range(1, x_max + 1):
            a = cheb_T2_table(nm_max, x)
            for n in range(1, nm_max + 1, 2):
                for m in range(1, nm_max + 1, 2):
                    yield (n, m, x), gcd(a[n], a[m]) == abs(a[gcd(n, m)])
    return _run("t_strong_divisibility_odd", cases())


def fast_path_suite() -> SuiteResult:
    """The doubling ladder agrees with the plain recurrence past ``FAST_INDEX``."""
    def cases():
        for n in (FAST_INDEX, FAST_INDEX + 1, FAST_INDEX + 777):
            for x in (3, 4, 7):
                u0, u1, v0, v1 = 0, 1, 2, x
                for _ in range(n):
                    u0, u1 = u1, x * u1 - u0
                    v0, v1 = v1, x * v1 - v0
                yield (n, x), lucas_uv(n, x, 1) == (u0, v0) and cheb_T2(n, x) == v0 \
                    and cheb_U(n - 1, x) == u0
    return _run("doubling_fast_path", cases())


def linear_recurrence_suite(nm_max: int = 60) -> SuiteResult:
    """Strong divisibility for ``a_{n+1} = b a_n + d a_{n-1}`` with coprime ``(b, d)``."""
    def cases():
        for b in range(1, 6):
            for d in (-3, -2, -1, 1, 2, 3):
                if gcd(b, d) != 1:
                    continue
                a = SDSSpec("linear_recurrence", b=b, d=d).table(nm_max)
                for n in range(1, nm_max + 1):
                    for m in range(1, nm_max + 1):
                        yield (n, m, b, d), gcd(a[n], a[m]) == abs(a[gcd(n, m)])
    return _run("linear_recurrence_sds", cases())


SUITES = (pell_polynomial_suite, composition_suite, u_gcd_suite, t_gcd_suite,
          fast_path_suite, linear_recurrence_suite)


def run_all() -> list[SuiteResult]:
    return [suite() for suite in SUITES]
