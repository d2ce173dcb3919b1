"""Homogeneous Koornwinder moments K_(N-r, 0^r)(xi) by two routes.

The determinant route builds K from normalized single-species partition
functions; the tableaux route divides the two-species fugacity partition
function by an explicit product. Both are evaluated exactly at rational points
with u = 1.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import Polynomial, RationalMatrix, determinant, format_rational
from .asep import random_params, random_rational
from .tableaux import partition_function
from .transfer import fugacity_bracket_sum

GREEK = ("alpha", "beta", "gamma", "delta", "q")


class PoleError(ZeroDivisionError):
    """A factor αβ − q^i γδ (or 1 − q) vanishes at the requested point."""


class SingularDenominatorError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class MomentSpec:
    N: int
    r: int
    xi: Fraction
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.r <= self.N:
            raise ValueError("need N >= r >= 0")
        missing = [p for p in GREEK if p not in self.params]
        if missing:
            raise ValueError(f"missing parameters: {', '.join(missing)}")
        object.__setattr__(self, "params", {p: Fraction(self.params[p]) for p in GREEK})
        object.__setattr__(self, "xi", Fraction(self.xi))

    @property
    def key(self) -> tuple:
        return tuple(self.params[p] for p in GREEK)


def _point(params: dict, xi) -> dict:
    return {**{p: Fraction(params[p]) for p in GREEK}, "u": Fraction(1), "xi": Fraction(xi)}


def _factor(params: dict, i: int) -> Fraction:
    a, b, c, d, q = (Fraction(params[p]) for p in GREEK)
    return a * b - q ** i * c * d


@lru_cache(maxsize=None)
def _single_species(n: int) -> Polynomial:
    return fugacity_bracket_sum(n, 0)


@lru_cache(maxsize=None)
def _cal_z(n: int, key: tuple, xi: Fraction) -> Fraction:
    params = dict(zip(GREEK, key))
    prod = Fraction(1)
    for i in range(n):
        f = _factor(params, i)
        if f == 0:
            raise PoleError(f"pole: alpha*beta - q^{i}*gamma*delta = 0 (needed for the size-{n} normalization)")
        prod *= f
    return _single_species(n).substitute(_point(params, xi)) / prod


def cal_z(n: int, xi, params: dict) -> Fraction:
    """Normalized single-species partition function at a rational point."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _cal_z(n, tuple(Fraction(params[p]) for p in GREEK), Fraction(xi))


def moment_det(spec: MomentSpec) -> Fraction:
    """Ratio of determinants of normalized partition functions, λ = (N−r, 0^r)."""
    m = spec.r + 1
    lam = [spec.N - spec.r] + [0] * spec.r

    def z(n):
        return cal_z(n, spec.xi, spec.params)

    den = determinant(RationalMatrix.from_rows(
        [[z(2 * m - i - j) for j in range(1, m + 1)] for i in range(1, m + 1)]))
    if den == 0:
        raise SingularDenominatorError(f"denominator determinant vanishes for m = {m}")
    num = determinant(RationalMatrix.from_rows(
        [[z(lam[i - 1] + m - i + m - j) for j in range(1, m + 1)] for i in range(1, m + 1)]))
    return num / den


@lru_cache(maxsize=None)
def _two_species(n: int, r: int) -> Polynomial:
    return partition_function(n, r, track_xi=True)


def tableaux_prefactor(spec: MomentSpec) -> Fraction:
    """(1−q)^r ∏_{i<N−r} (αβ − q^{i+2r} γδ)."""
    q = spec.params["q"]
    if spec.r > 0 and q == 1:
        raise PoleError("pole: 1 - q = 0 with r > 0")
    out = (1 - q) ** spec.r
    for i in range(spec.N - spec.r):
        f = _factor(spec.params, i + 2 * spec.r)
        if f == 0:
            raise PoleError(f"pole: alpha*beta - q^{i + 2 * spec.r}*gamma*delta = 0")
        out *= f
    return out


def moment_tableaux(spec: MomentSpec) -> Fraction:
    """Z_{N,r}(ξ) / ((1−q)^r ∏_{i<N−r}(αβ − q^{i+2r}γδ)) at u = 1."""
    pref = tableaux_prefactor(spec)
    return _two_species(spec.N, spec.r).substitute(_point(spec.params, spec.xi)) / pref


def positive_coefficients(p: Polynomial) -> bool:
    return not p.is_zero() and all(c > 0 for c in p.coefficients())


def pole_free(params: dict, N: int, r: int) -> bool:
    if r > 0 and params["q"] == 1:
        return False
    return all(_factor(params, i) != 0 for i in range(N + r))


def draw_tuple(rng: random.Random, N: int, r: int, max_den: int = 16) -> tuple[dict, Fraction]:
    """Seeded rational parameters avoiding every pole and a singular denominator."""
    while True:
        params = {k: v for k, v in random_params(rng, max_den, q_below_one=True).items() if k != "u"}
        xi = random_rational(rng, max_den)
        if not pole_free(params, N, r):
            continue
        try:
            moment_det(MomentSpec(N, r, xi, params))
        except SingularDenominatorError:
            continue
        return params, xi


def cross_check(N: int, r: int, trials: int, seed: int) -> dict:
    """Compare the determinant and tableaux routes at seeded rational points."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    rows = []
    for _ in range(trials):
        params, xi = draw_tuple(rng, N, r)
        spec = MomentSpec(N, r, xi, params)
        d, t = moment_det(spec), moment_tableaux(spec)
        rows.append({"params": {k: format_rational(v) for k, v in params.items()},
                     "xi": format_rational(xi), "det": format_rational(d),
                     "tableaux": format_rational(t), "equal": d == t})
    return {"N": N, "r": r, "trials": rows,
            "positivity": positive_coefficients(_two_species(N, r))}
