"""Generating functions in u and the classical oracles.

A :class:`ULaurent` is a product ``N(u^-1) * P(u)`` where ``N`` is a product
of factors ``1/(c + beta u^-1)`` and ``P = sum_j A_j u^j`` has ``A_j`` of
non-beta valuation at least ``j``.  Hence ``A_j`` vanishes in the truncation
once ``j > cap`` and every coefficient extraction is a finite sum.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Callable, Sequence

from .combinat import KStrictPartition
from .exactalg import (
    DomainError,
    GradedPoly,
    TruncSeries,
    UsageError,
    bar,
    binom,
    exact_divide,
    oplus,
    pfaffian,
)


@lru_cache(maxsize=None)
def _neg_coeffs(cs: tuple[int, ...], upto: int) -> tuple[Fraction, ...]:
    """Rational n_i with prod 1/(c + beta v) = sum n_i beta^i v^i."""
    seq = [Fraction(1)] + [Fraction(0)] * upto
    for c in cs:
        geo = [Fraction(1, c) * Fraction(-1, c) ** s for s in range(upto + 1)]
        seq = [sum(seq[a] * geo[i - a] for a in range(i + 1)) for i in range(upto + 1)]
    return tuple(seq)


class ULaurent:
    """Laurent series in u with truncated-series coefficients."""

    __slots__ = ("cap", "neg", "pos")

    def __init__(self, cap: int, neg: Sequence[int] = (), pos: Sequence[TruncSeries] | None = None):
        self.cap = cap
        self.neg = tuple(sorted(neg))
        if pos is None:
            pos = [TruncSeries.const(1, cap)]
        pos = list(pos)[: cap + 1]
        for j, a in enumerate(pos):
            v = a.valuation()
            if v is not None and v < j:
                raise DomainError(f"u^{j} coefficient has valuation {v} < {j}")
        self.pos = pos

    @classmethod
    def one(cls, cap: int) -> ULaurent:
        return cls(cap)

    def __mul__(self, other: ULaurent) -> ULaurent:
        if other.cap != self.cap:
            raise UsageError("mismatched caps")
        cap = self.cap
        out = [TruncSeries.zero(cap) for _ in range(min(cap, len(self.pos) + len(other.pos) - 2) + 1)]
        for i, a in enumerate(self.pos):
            if a.is_zero():
                continue
            for j, b in enumerate(other.pos):
                if i + j > cap:
                    break
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return ULaurent(cap, self.neg + other.neg, out)

    def times_neg(self, c: int) -> ULaurent:
        """Multiply by 1/(c + beta u^-1)."""
        return ULaurent(self.cap, self.neg + (c,), self.pos)

    def coeff(self, m: int) -> TruncSeries:
        """Coefficient of u^m."""
        cap = self.cap
        top = len(self.pos) - 1
        if m > top:
            return TruncSeries.zero(cap)
        start = max(0, -m)
        ns = _neg_coeffs(self.neg, top - m) if self.neg else (Fraction(1),)
        out = TruncSeries.zero(cap)
        for i in range(start, min(len(ns) - 1, top - m) + 1):
            if ns[i]:
                out = out + self.pos[m + i].times_beta(i, ns[i])
        return out

    def coeffs(self, lo: int, hi: int) -> dict[int, TruncSeries]:
        return {m: self.coeff(m) for m in range(lo, hi + 1)}

    def substitute(self, values) -> ULaurent:
        return ULaurent(self.cap, self.neg, [a.substitute(values) for a in self.pos])

    def equal_coeffs(self, other: ULaurent, lo: int, hi: int) -> bool:
        return all(self.coeff(m) == other.coeff(m) for m in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# elementary factors (positive parts)
# ---------------------------------------------------------------------------

def _one(cap: int) -> TruncSeries:
    return TruncSeries.const(1, cap)


def root_factor(x: TruncSeries) -> ULaurent:
    """(1 + beta x) / (1 - x u)."""
    cap = x.cap
    pre = _one(cap) + x.times_beta(1)
    pos = [pre]
    power = pre
    for _ in range(cap):
        power = power * x
        if power.is_zero():
            break
        pos.append(power)
    return ULaurent(cap, (), pos)


def inverse_root_factor(y: TruncSeries) -> ULaurent:
    """(1 - y u) / (1 + beta y), i.e. 1 + (u + beta) bar(y)."""
    return plus_factor(bar(y))


def plus_factor(w: TruncSeries) -> ULaurent:
    """1 + (u + beta) w."""
    return ULaurent(w.cap, (), [_one(w.cap) + w.times_beta(1), w])


def inv_plus_factor(w: TruncSeries) -> ULaurent:
    """1 / (1 + (u + beta) w) = (1 + beta wbar) / (1 - wbar u)."""
    return root_factor(bar(w))


def theta_factor(x: TruncSeries) -> ULaurent:
    """(1 + (u + beta) x) / (1 + (u + beta) xbar)."""
    return plus_factor(x) * root_factor(x)


def neg_factor(c: int, cap: int) -> ULaurent:
    """1 / (c + beta u^-1)."""
    return ULaurent(cap, (c,))


def _prod(parts: Sequence[ULaurent], cap: int) -> ULaurent:
    out = ULaurent.one(cap)
    for p in parts:
        out = out * p
    return out


def V(name: str, cap: int) -> TruncSeries:
    return TruncSeries.var(name, cap)


# ---------------------------------------------------------------------------
# Segre classes
# ---------------------------------------------------------------------------

def segre_series(E: Sequence[TruncSeries], F: Sequence[TruncSeries], cap: int) -> ULaurent:
    """1/(1 + beta u^-1) * c(E - F; beta) / c(E - F; -u)."""
    parts = [neg_factor(1, cap)]
    parts += [root_factor(x) for x in E]
    parts += [inverse_root_factor(y) for y in F]
    return _prod(parts, cap)


def segre_dual_form(E: Sequence[TruncSeries], cap: int) -> ULaurent:
    """1/(1 + beta u^-1) * 1 / c(E^vee; u + beta) with E^vee roots bar(x)."""
    parts = [neg_factor(1, cap)] + [inv_plus_factor(bar(x)) for x in E]
    return _prod(parts, cap)


def segre_formula0(m: int, E: Sequence[TruncSeries], F: Sequence[TruncSeries], cap: int) -> TruncSeries:
    """S_m(E - F) = sum_p c_p(F^vee) sum_q binom(p, q) beta^q S_{m-p+q}(E)."""
    from .exactalg import elementary

    SE = segre_series(E, [], cap)
    Fdual = [bar(y) for y in F]
    out = TruncSeries.zero(cap)
    for p in range(len(F) + 1):
        cp = elementary(Fdual, p, cap)
        for q in range(p + 1):
            out = out + (cp * SE.coeff(m - p + q)).times_beta(q, binom(p, q))
    return out


def vishik_pushforward(m: int, roots: Sequence[str], cap: int) -> TruncSeries:
    """sum_i z_i^{m+e-1} prod_{j != i} (1 + beta z_j) / (z_i - z_j), reduced exactly."""
    e = len(roots)
    if m + e - 1 < 0:
        raise UsageError("m + e - 1 must be nonnegative")
    zs = [GradedPoly.var(n) for n in roots]
    beta = GradedPoly.beta()
    vandermonde = GradedPoly(1)
    for i in range(e):
        for j in range(i + 1, e):
            vandermonde = vandermonde * (zs[i] - zs[j])
    num = GradedPoly(0)
    for i in range(e):
        term = zs[i] ** (m + e - 1)
        local = GradedPoly(1)
        for j in range(e):
            if j != i:
                term = term * (1 + beta * zs[j])
                local = local * (zs[i] - zs[j])
        num = num + term * exact_divide(vandermonde, local)
    return exact_divide(num, vandermonde).truncate(cap)


def g_series(d: int, ell: int, cap: int, z: str = "z", b: str = "b", dual_flag: bool = False) -> ULaurent:
    """1/(1+beta u^-1) prod_{i<=d} (1+beta z_i)/(1-z_i u) prod_{i<=ell} (1-b_i u)/(1+beta b_i).

    With ``dual_flag`` every b_i is replaced by bar(b_i), making the b-factor
    1 + (u + beta) b_i; this is the convention under which the determinant
    reproduces the bialternant built from z (+) b_i.
    """
    if ell < 0:
        raise UsageError("g_series needs ell >= 0")
    E = [V(f"{z}{i}", cap) for i in range(1, d + 1)]
    F = [V(f"{b}{i}", cap) for i in range(1, ell + 1)]
    if dual_flag:
        F = [bar(y) for y in F]
    return segre_series(E, F, cap)


# ---------------------------------------------------------------------------
# equivariant type C / B classes
# ---------------------------------------------------------------------------

def flag_dual_roots(n: int, ell: int, cap: int) -> list[TruncSeries]:
    """Roots of (E/F^ell)^vee.

    E/F^0 has roots bar(b_1..b_n), so its dual has roots b_i; F^0/F^ell
    contributes b_1..b_ell for ell > 0 (dual roots bar(b_i)); for ell < 0 the
    quotient loses bar(b_1..b_|ell|).
    """
    if abs(ell) > n:
        raise UsageError(f"flag index {ell} outside [-{n}, {n}]")
    if ell >= 0:
        return [V(f"b{i}", cap) for i in range(1, n + 1)] + [bar(V(f"b{i}", cap)) for i in range(1, ell + 1)]
    return [V(f"b{i}", cap) for i in range(-ell + 1, n + 1)]


def scX_series(type_: str, n: int, ell: int, k: int, cap: int, U_dual: Sequence[TruncSeries] | None = None) -> ULaurent:
    """Generating function of C_m^(ell) (type C) or B_m^(ell) (type B).

    ``U_dual`` are the Chern roots of U^vee; by default the symbols
    z_{k+1}..z_n.
    """
    if type_ not in ("B", "C"):
        raise UsageError(f"unknown type {type_!r}")
    if U_dual is None:
        U_dual = [V(f"z{i}", cap) for i in range(k + 1, n + 1)]
    S = segre_series(U_dual, flag_dual_roots(n, ell, cap), cap)
    if type_ == "B" and ell >= 0:
        S = S.times_neg(2)
    return S


def geometric_basis(type_: str, n: int, k: int, cap: int, U_dual: Sequence[TruncSeries] | None = None) -> Callable[[int, int], TruncSeries]:
    """(ell, m) -> C_m^(ell) or B_m^(ell), with C_{-i}^(-n-1) = (-beta)^i."""
    series: dict[int, ULaurent] = {}

    def get(ell: int, m: int) -> TruncSeries:
        if ell == -n - 1:
            if m > 0:
                raise DomainError(f"basis index ({ell}, {m}) out of range")
            return TruncSeries.beta_power(-m, (-1) ** (-m), cap)
        if ell < -n - 1 or ell > n:
            raise DomainError(f"flag index {ell} outside [-{n + 1}, {n}]")
        if ell not in series:
            series[ell] = scX_series(type_, n, ell, k, cap, U_dual)
        return series[ell].coeff(m)

    return get


# ---------------------------------------------------------------------------
# GTheta functions
# ---------------------------------------------------------------------------

def gtheta_series(k: int, n_x: int, cap: int, mode: str = "theta") -> ULaurent:
    """GTheta(x, a; u), or GTheta*(x, a; u) when mode == 'star'."""
    parts = [neg_factor(1, cap)]
    parts += [theta_factor(V(f"x{i}", cap)) for i in range(1, n_x + 1)]
    parts += [plus_factor(V(f"a{i}", cap)) for i in range(1, k + 1)]
    S = _prod(parts, cap)
    if mode == "star":
        S = S.times_neg(2)
    elif mode != "theta":
        raise UsageError(f"unknown mode {mode!r}")
    return S


def gtheta_prime_coeff(m: int, k: int, n_x: int, cap: int) -> TruncSeries:
    """GTheta'_m: GTheta_m for m <= k, GTheta*_m otherwise."""
    return gtheta_series(k, n_x, cap, "theta" if m <= k else "star").coeff(m)


def gtheta_factorial_series(k: int, n_x: int, ell: int, cap: int, prime: bool = False, m_b: int | None = None) -> ULaurent:
    """GTheta^(ell)(x, a | b) or GTheta'^(ell)(x, a | b).

    ``m_b`` caps the b-alphabet: b_i = 0 for i > m_b.
    """
    nb = abs(ell) if m_b is None else min(abs(ell), m_b)
    base = gtheta_series(k, n_x, cap, "star" if prime and ell >= 0 else "theta")
    if ell >= 0:
        parts = [plus_factor(V(f"b{i}", cap)) for i in range(1, nb + 1)]
    else:
        parts = [inv_plus_factor(bar(V(f"b{i}", cap))) for i in range(1, nb + 1)]
    return base * _prod(parts, cap)


def functional_basis(k: int, n_x: int, cap: int, prime: bool = False, m_b: int | None = None) -> Callable[[int, int], TruncSeries]:
    series: dict[int, ULaurent] = {}

    def get(ell: int, m: int) -> TruncSeries:
        if ell not in series:
            series[ell] = gtheta_factorial_series(k, n_x, ell, cap, prime, m_b)
        return series[ell].coeff(m)

    return get


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def _permute_vars(p: GradedPoly, names: Sequence[str], perm: Sequence[int]) -> GradedPoly:
    return p.subs({names[i]: GradedPoly.var(names[perm[i]]) for i in range(len(names))})


def gp_symmetrized(lam: Sequence[int] | KStrictPartition, n_x: int, cap: int) -> TruncSeries:
    """1/(n-r)! sum_{w in S_n} w[x^lambda prod_{i<=r, j>i} (x_i (+) x_j) / (x_i (-) x_j)].

    Computed over the common Vandermonde denominator with one exact division.
    """
    parts = tuple(lam.parts if isinstance(lam, KStrictPartition) else lam)
    r = len(parts)
    if any(parts[i] <= parts[i + 1] for i in range(r - 1)):
        raise DomainError(f"{parts} is not strict")
    if r > n_x:
        return TruncSeries.zero(cap)
    names = [f"x{i}" for i in range(1, n_x + 1)]
    xs = [GradedPoly.var(nm) for nm in names]
    beta = GradedPoly.beta()
    num = GradedPoly(1)
    for i in range(r):
        num = num * xs[i] ** parts[i]
        for j in range(i + 1, n_x):
            num = num * (xs[i] + xs[j] + beta * xs[i] * xs[j]) * (1 + beta * xs[j])
    for i in range(r, n_x):
        for j in range(i + 1, n_x):
            num = num * (xs[i] - xs[j])
    vandermonde = GradedPoly(1)
    for i in range(n_x):
        for j in range(i + 1, n_x):
            vandermonde = vandermonde * (xs[i] - xs[j])
    total = GradedPoly(0)
    for perm in permutations(range(n_x)):
        sign = _perm_sign(perm)
        total = total + sign * _permute_vars(num, names, perm)
    q = exact_divide(total, vandermonde) * Fraction(1, factorial(n_x - r))
    return q.truncate(cap)


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def classical_q(m: int, n_x: int) -> GradedPoly:
    """q_m from prod (1 + x_i u) / (1 - x_i u), beta-free."""
    if m < 0:
        return GradedPoly(0)
    xs = [GradedPoly.var(f"x{i}") for i in range(1, n_x + 1)]
    # coefficients of prod (1 + x u)/(1 - x u), built one variable at a time
    coeffs = [GradedPoly(1)] + [GradedPoly(0)] * m
    for x in xs:
        factor = [GradedPoly(1)] + [2 * x**j for j in range(1, m + 1)]
        coeffs = [sum((coeffs[a] * factor[i - a] for a in range(i + 1)), GradedPoly(0)) for i in range(m + 1)]
    return coeffs[m]


def schur_q_classical(lam: Sequence[int] | KStrictPartition, n_x: int, cap: int) -> TruncSeries:
    """Schur Q-polynomial via the two-row formula and a Pfaffian."""
    parts = list(lam.parts if isinstance(lam, KStrictPartition) else lam)
    if any(parts[i] <= parts[i + 1] for i in range(len(parts) - 1)):
        raise DomainError(f"{parts} is not strict")
    if len(parts) % 2:
        parts.append(0)
    qs: dict[int, GradedPoly] = {}

    def q(m: int) -> GradedPoly:
        if m not in qs:
            qs[m] = classical_q(m, n_x)
        return qs[m]

    def two_row(a: int, b: int) -> GradedPoly:
        out = q(a) * q(b)
        for i in range(1, b + 1):
            out = out + 2 * (-1) ** i * q(a + i) * q(b - i)
        return out

    size = len(parts)
    entries = {(i, j): two_row(parts[i], parts[j]) for i in range(size) for j in range(i + 1, size)}
    return pfaffian(entries, size=size, one=GradedPoly(1)).truncate(cap)


# ---------------------------------------------------------------------------
# validators
# ---------------------------------------------------------------------------

PLACEHOLDER = "z12"


def gamma_cancellation(f: TruncSeries, i: int = 1, j: int = 2) -> bool:
    """f(x_i := t, x_j := bar(t)) equals f(x_i := 0, x_j := 0).

    ``t`` is represented by the otherwise unused variable z12.
    """
    cap = f.cap
    t = V(PLACEHOLDER, cap)
    lhs = f.substitute({f"x{i}": t, f"x{j}": bar(t)})
    rhs = f.substitute({f"x{i}": 0, f"x{j}": 0})
    return lhs == rhs


def is_symmetric(f: TruncSeries, names: Sequence[str]) -> bool:
    """Invariance under adjacent transpositions of the listed variables."""
    for a, b in zip(names, names[1:]):
        swapped = f.substitute({a: V(b, f.cap), b: V(a, f.cap)})
        if swapped != f:
            return False
    return True


def s0_action(f: TruncSeries, n_x: int) -> TruncSeries:
    """f(a_1, x_1, ..., x_{n-1}; bar(a_1), a_2, ...) for f in x_1..x_n."""
    cap = f.cap
    vals = {f"x{i}": V(f"x{i - 1}", cap) for i in range(2, n_x + 1)}
    vals["x1"] = V("a1", cap)
    vals["a1"] = bar(V("a1", cap))
    return f.substitute(vals)
