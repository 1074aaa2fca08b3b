"""Closed-form stability bounds, rates and density recurrences.

Exact quantities are Fractions.  Irrational quantities (theta, the rate
constant) are evaluated in mpmath interval arithmetic so that comparisons
against exact values are certified rather than rounded.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv

from .errors import InvalidInput

IV_PREC = 113  # bits used for certified comparisons


@contextmanager
def _prec():
    old = iv.prec
    iv.prec = max(old, IV_PREC)
    try:
        yield
    finally:
        iv.prec = old


def _frac(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))  # decimal reading, so 0.01 is 1/100
    return Fraction(x)


@dataclass(frozen=True)
class ConstructionProfile:
    p: int
    C: int
    rho: Fraction
    d: int = 2
    grid_note: str = ""

    def __post_init__(self):
        if self.p < 1 or self.C < 0 or not 0 <= self.rho <= 1 or self.d < 1:
            raise InvalidInput(f"invalid construction profile {self}")


def besicovitch_bound(profile: ConstructionProfile, eps) -> Fraction:
    """48 (2 (C + ceil(p/2)) + 1)^d eps + rho, exactly."""
    eps = _frac(eps)
    if not 0 <= eps <= 1:
        raise InvalidInput("eps must lie in [0, 1]")
    width = 2 * (profile.C + -(-profile.p // 2)) + 1
    return 48 * width**profile.d * eps + profile.rho


def r_sequence(n: int) -> list[int]:
    """Cells inside Red squares of a (2n+1)-macro-tile: r_1 = 25,
    r_{n+1} = 12 r_n + (4^{n+1} + 1)^2."""
    if n < 1:
        raise InvalidInput("n must be at least 1")
    r = [25]
    for m in range(1, n):
        r.append(12 * r[-1] + (4 ** (m + 1) + 1) ** 2)
    return r


def r_n(n: int) -> int:
    return r_sequence(n)[-1]


def construction_constants(which: str, n: int) -> ConstructionProfile:
    if n < 1:
        raise InvalidInput("n must be at least 1")
    if which == "enhanced":
        side = 2**n - 1
        return ConstructionProfile(2 ** (n + 1), side, 1 - Fraction(side * side, 4**n), 2,
                                   "bumpy-corner lattice of the enhanced Robinson tiling")
    if which == "p1":
        side = 2 ** (2 * n + 1) - 1
        return ConstructionProfile(4 ** (n + 1), side, 1 - Fraction(r_n(n), side * side), 2,
                                   "cells outside Red squares of (2n+1)-macro-tiles")
    raise InvalidInput(f"unknown construction {which!r}")


# ---------------------------------------------------------------------------
# rates


@dataclass(frozen=True)
class RateReport:
    alpha: Fraction
    beta: Fraction
    theta: float
    exponent: float
    constant: float
    theta_iv: object
    exponent_iv: object
    constant_iv: object

    def validity(self, K: int):
        """Interval enclosing theta / alpha^(K (1 + theta))."""
        with _prec():
            a = _iv(self.alpha)
            return self.theta_iv / a ** (K * (1 + self.theta_iv))

    def bound(self, eps):
        """Interval enclosing constant * eps^(theta / (1 + theta))."""
        eps = _frac(eps)
        with _prec():
            if eps == 0:
                return iv.mpf(0)
            return self.constant_iv * _iv(eps) ** self.exponent_iv


def _iv(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _mid(x) -> float:
    return float(mpmath.mpf(x.mid))


def polynomial_rate(alpha, beta) -> RateReport:
    alpha, beta = _frac(alpha), _frac(beta)
    if not (0 < beta < 1 < alpha):
        raise InvalidInput("need 0 < beta < 1 < alpha")
    with _prec():
        a, b = _iv(alpha), _iv(beta)
        theta = -iv.log(b) / iv.log(a)
        expo = theta / (1 + theta)
        amp = iv.sqrt(a) if alpha * beta >= 1 else iv.sqrt(1 / b)
        const = amp * (theta ** (1 / (1 + theta)) + (1 / theta) ** (1 / (1 + 1 / theta)))
    return RateReport(alpha, beta, _mid(theta), _mid(expo), _mid(const), theta, expo, const)


def min_Dk_bruteforce(alpha, beta, eps, K: int, k_max: int) -> tuple[Fraction, int]:
    """Exact min of eps alpha^k + beta^k over integers K <= k <= k_max
    (ties go to the smallest k)."""
    alpha, beta, eps = _frac(alpha), _frac(beta), _frac(eps)
    if k_max < K:
        raise InvalidInput("k_max must be at least K")
    best, arg = None, None
    for k in range(K, k_max + 1):
        v = eps * alpha**k + beta**k
        if best is None or v < best:
            best, arg = v, k
    return best, arg


def real_argmin_k(alpha, beta, eps) -> float:
    """log_alpha of the real minimiser x = (theta/eps)^(1/(1+theta))."""
    rep = polynomial_rate(alpha, beta)
    x = (rep.theta / float(_frac(eps))) ** (1 / (1 + rep.theta))
    return math.log(x) / math.log(float(_frac(alpha)))


def certified_le(lhs: Fraction, rhs_iv) -> bool | None:
    """True if lhs <= rhs is certified, False if refuted, None if undecided."""
    with _prec():
        left = _iv(_frac(lhs))
        if left.b <= rhs_iv.a:
            return True
        if left.a > rhs_iv.b:
            return False
    return None


@dataclass(frozen=True)
class LemmaCheck:
    alpha: Fraction
    beta: Fraction
    eps: Fraction
    K: int
    valid: bool | None
    brute_min: Fraction
    argmin: int
    bound_lo: float
    holds: bool | None


def check_lemma(alpha, beta, eps, K: int, window: int = 64) -> LemmaCheck:
    """Compare the brute-force minimum over [K, K + window] with the
    closed-form bound, both certified."""
    rep = polynomial_rate(alpha, beta)
    eps = _frac(eps)
    valid = certified_le(eps, rep.validity(K))
    m, k = min_Dk_bruteforce(rep.alpha, rep.beta, eps, K, K + window)
    bound = rep.bound(eps)
    return LemmaCheck(rep.alpha, rep.beta, eps, K, valid, m, k,
                      float(mpmath.mpf(bound.a)), certified_le(m, bound))


def p1_density(n: int) -> Fraction:
    return construction_constants("p1", n).rho


def outside_red(n: int) -> int:
    side = 2 ** (2 * n + 1) - 1
    return side * side - r_n(n)


def rate_table(which: str, ns, eps_values):
    """Rows (construction, n, eps, bound) for CSV export."""
    rows = []
    for n in ns:
        prof = construction_constants(which, n)
        for e in eps_values:
            rows.append((which, n, _frac(e), besicovitch_bound(prof, e)))
    return rows
