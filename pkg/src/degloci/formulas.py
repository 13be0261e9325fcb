"""Closed formulas: the type A determinant, the type C/B Pfaffian sums and the
GTheta class builders.

Every Pfaffian class can be obtained two ways: substituting basis classes
into the raising-operator series (the phi route), or assembling the explicit
Pfaffian sum over subsets of D(lambda) from the f-coefficients.  Both are
exposed so they can be compared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .combinat import KStrictPartition, pair_sets, subset_enumerate
from .exactalg import (
    DomainError,
    GradedPoly,
    TruncSeries,
    UsageError,
    binom,
    determinant,
    exact_divide,
    pfaffian,
)
from .genfun import functional_basis, g_series, geometric_basis
from .umbral import f_coeffs, f_coeffs_single, phi_substitute, r_prime, raising_series

Basis = Callable[[int, int], TruncSeries]


@dataclass(frozen=True)
class ClassExpr:
    value: TruncSeries
    meta: dict = field(default_factory=dict, compare=False)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ClassExpr):
            return self.value == other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)


def _as_kstrict(lam: KStrictPartition | Sequence[int], k: int) -> KStrictPartition:
    return lam if isinstance(lam, KStrictPartition) else KStrictPartition(tuple(lam), k)


def _parts(lam) -> tuple[int, ...]:
    parts = tuple(lam.parts if isinstance(lam, KStrictPartition) else lam)
    if any(p < 0 for p in parts) or any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise DomainError(f"{parts} is not a partition")
    return tuple(p for p in parts if p)


# ---------------------------------------------------------------------------
# type A
# ---------------------------------------------------------------------------

def _zb_power(z: GradedPoly, m: int, m_b: int) -> GradedPoly:
    """[z|b]^m = (z (+) b_1)...(z (+) b_m), with b_l = 0 for l > m_b."""
    beta = GradedPoly.beta()
    out = GradedPoly(1)
    for l in range(1, m + 1):
        if l <= m_b:
            b = GradedPoly.var(f"b{l}")
            out = out * (z + b + beta * z * b)
        else:
            out = out * z
    return out


def grothendieck_ratio(lam: Sequence[int], d: int, m_b: int, cap: int) -> ClassExpr:
    """det([z_i|b]^{lambda_j+d-j} (1+beta z_i)^{j-1}) / prod_{i<j} (z_i - z_j)."""
    parts = _parts(lam)
    if len(parts) > d:
        raise DomainError(f"{parts} has more than {d} parts")
    lp = parts + (0,) * (d - len(parts))
    beta = GradedPoly.beta()
    zs = [GradedPoly.var(f"z{i}") for i in range(1, d + 1)]
    M = [[_zb_power(zs[i], lp[j] + d - j - 1, m_b) * (1 + beta * zs[i]) ** j for j in range(d)] for i in range(d)]
    num = determinant(M, one=GradedPoly(1))
    vandermonde = GradedPoly(1)
    for i in range(d):
        for j in range(i + 1, d):
            vandermonde = vandermonde * (zs[i] - zs[j])
    value = exact_divide(num, vandermonde).truncate(cap)
    return ClassExpr(value, {"type": "A", "lambda": parts, "d": d, "m_b": m_b, "cap": cap, "method": "ratio"})


def grothendieck_det(lam: Sequence[int], d: int, m_b: int, cap: int) -> ClassExpr:
    """det(sum_s binom(i-j, s) beta^s G_{lambda_i+j-i+s}^{(lambda_i+d-i)}(z|b))."""
    parts = _parts(lam)
    if len(parts) > d:
        raise DomainError(f"{parts} has more than {d} parts")
    lp = parts + (0,) * (d - len(parts))
    series = {}

    def G(ell: int, m: int) -> TruncSeries:
        ell_eff = min(ell, m_b)
        if ell_eff not in series:
            series[ell_eff] = g_series(d, ell_eff, cap, dual_flag=True)
        return series[ell_eff].coeff(m)

    M = []
    for i in range(1, d + 1):
        row = []
        for j in range(1, d + 1):
            base = lp[i - 1] + j - i
            ell = lp[i - 1] + d - i
            entry = TruncSeries.zero(cap)
            # G_{base+s} has valuation >= base+s, so s stops once base+s > cap;
            # for i >= j the binomial vanishes beyond i-j anyway
            top = cap - base if i < j else min(i - j, cap - base)
            for s in range(0, max(top, -1) + 1):
                c = binom(i - j, s)
                if c:
                    entry = entry + G(ell, base + s).times_beta(s, c)
            row.append(entry)
        M.append(row)
    value = determinant(M, one=TruncSeries.const(1, cap))
    return ClassExpr(value, {"type": "A", "lambda": parts, "d": d, "m_b": m_b, "cap": cap, "method": "det"})


# ---------------------------------------------------------------------------
# type C / B Pfaffian sums
# ---------------------------------------------------------------------------

def make_basis(source: str, type_: str, k: int, cap: int, n: int | None = None, n_x: int | None = None, m_b: int | None = None,
               explicit: bool = False) -> Basis:
    """Basis classes (ell, m) -> X_m^(ell).

    ``source`` is 'geometric' (C or B Segre classes in z_{k+1}..z_n, b_1..b_n)
    or 'functional' (GTheta / GTheta').  For type B the phi route absorbs the
    1/(2 + beta t_i) factors into the raising series and so uses the type C
    basis; the explicit route uses the type B basis.
    """
    btype = "B" if (type_ == "B" and explicit) else "C"
    if source == "geometric":
        if n is None:
            raise UsageError("geometric source needs n")
        return geometric_basis(btype, n, k, cap)
    if source == "functional":
        if n_x is None:
            raise UsageError("functional source needs n_x")
        return functional_basis(k, n_x, cap, prime=(btype == "B"), m_b=m_b)
    raise UsageError(f"unknown basis source {source!r}")


def pfaffian_class_phi(lam: KStrictPartition, type_: str, basis: Basis, cap: int) -> TruncSeries:
    """phi_lambda applied to the raising series of lambda."""
    r = lam.length
    if r == 0:
        return TruncSeries.const(1, cap)
    series = raising_series(lam, lam.k, type_, (cap,) * r)
    chi = lam.chi
    return phi_substitute(series, lambda slot, m: basis(chi[slot - 1], m), cap)


def _entry(f: dict, X: Callable[[int, int], TruncSeries], ai: int, aj: int, cap: int) -> TruncSeries:
    out = TruncSeries.zero(cap)
    for (p, q), (c, e) in f.items():
        left = X(0, ai + p)
        if left.is_zero():
            continue
        out = out + (left * X(1, aj + q)).times_beta(e, c)
    return out


def pfaffian_class_explicit(lam: KStrictPartition, basis: Basis, cap: int) -> TruncSeries:
    """sum_{I in D(lambda)_r} Pf(sum_{p,q} f_pq^{ij,I} X_{lambda_i+d_i+p}^(chi_i) X_{lambda_j+d_j+q}^(chi_j))."""
    r = lam.length
    one = TruncSeries.const(1, cap)
    if r == 0:
        return one
    chi = lam.chi
    ps = pair_sets(lam)
    rp = r_prime(r)
    total = TruncSeries.zero(cap)
    for I in subset_enumerate(ps.D, r):
        a = [lam.part(i) + I.di(i) for i in range(1, r + 1)]
        entries = {}
        for i in range(1, r + 1):
            Xi = lambda m, i=i: basis(chi[i - 1], m)
            for j in range(i + 1, r + 1):
                Xj = lambda m, j=j: basis(chi[j - 1], m)
                f = f_coeffs(r, I, i, j, (cap - a[i - 1], cap - a[i - 1] - a[j - 1]))
                entries[(i - 1, j - 1)] = _entry(f, lambda side, m: (Xi if side == 0 else Xj)(m), a[i - 1], a[j - 1], cap)
            if rp > r:
                f1 = f_coeffs_single(r, I, i, cap - a[i - 1])
                col = TruncSeries.zero(cap)
                for p, (c, e) in f1.items():
                    col = col + Xi(a[i - 1] + p).times_beta(e, c)
                entries[(i - 1, r)] = col
        total = total + pfaffian(entries, size=rp, one=one)
    return total


def pfaffian_sum_class(
    lam: KStrictPartition | Sequence[int],
    k: int,
    type_: str = "C",
    source: str = "geometric",
    cap: int = 8,
    n: int | None = None,
    n_x: int | None = None,
    m_b: int | None = None,
    route: str = "both",
) -> ClassExpr:
    """The Pfaffian class of lambda; with route='both' the two routes are compared.

    A disagreement raises ``DomainError``.
    """
    if type_ not in ("B", "C"):
        raise UsageError(f"unknown type {type_!r}")
    lam = _as_kstrict(lam, k)
    if source == "geometric":
        if n is None:
            raise UsageError("geometric source needs n")
        if min(lam.chi[: lam.length], default=0) < -n - 1:
            raise DomainError(f"{lam} needs flag indices below -{n + 1}")
    meta = {"type": type_, "lambda": lam.parts, "k": k, "source": source, "n": n, "n_x": n_x, "m_b": m_b, "cap": cap}
    value = None
    if route in ("phi", "both"):
        value = pfaffian_class_phi(lam, type_, make_basis(source, type_, k, cap, n, n_x, m_b), cap)
    if route in ("explicit", "both"):
        other = pfaffian_class_explicit(lam, make_basis(source, type_, k, cap, n, n_x, m_b, explicit=True), cap)
        if value is not None and other != value:
            raise DomainError(f"phi and explicit routes disagree for {lam}")
        value = other
    if value is None:
        raise UsageError(f"unknown route {route!r}")
    return ClassExpr(value, {**meta, "route": route})


def route_equivalence(lam: KStrictPartition | Sequence[int], k: int, type_: str, source: str, cap: int, **kw) -> tuple[TruncSeries, TruncSeries]:
    """Both routes, for tests that want to inspect the two values."""
    lam = _as_kstrict(lam, k)
    n, n_x, m_b = kw.get("n"), kw.get("n_x"), kw.get("m_b")
    phi = pfaffian_class_phi(lam, type_, make_basis(source, type_, k, cap, n, n_x, m_b), cap)
    expl = pfaffian_class_explicit(lam, make_basis(source, type_, k, cap, n, n_x, m_b, explicit=True), cap)
    return phi, expl


# ---------------------------------------------------------------------------
# the Lagrangian case
# ---------------------------------------------------------------------------

def lagrangian_pf(lam: Sequence[int] | KStrictPartition, basis: Basis, cap: int) -> ClassExpr:
    """k = 0 formula: one Pfaffian, or for odd r the last-column expansion

    sum_s (-1)^{s+r} (sum_p f_p^s X_{lambda_s+p}^{(lambda_s-1)}) Pf(minor without s).
    """
    lam = _as_kstrict(lam, 0)
    parts = lam.parts
    if any(parts[i] <= parts[i + 1] for i in range(len(parts) - 1)):
        raise DomainError(f"{parts} is not strict")
    r = lam.length
    one = TruncSeries.const(1, cap)
    if r == 0:
        return ClassExpr(one, {"type": "C", "lambda": parts, "k": 0})
    ps = pair_sets(lam)
    if ps.D:
        raise DomainError(f"D({parts}) is not empty")
    I = next(iter(subset_enumerate(ps.D, r)))
    chi = lam.chi
    X = {i: (lambda m, i=i: basis(chi[i - 1], m)) for i in range(1, r + 1)}
    A = {}
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            f = f_coeffs(r, I, i, j, (cap - parts[i - 1], cap - parts[i - 1] - parts[j - 1]))
            A[(i - 1, j - 1)] = _entry(f, lambda side, m, i=i, j=j: X[i if side == 0 else j](m), parts[i - 1], parts[j - 1], cap)
    if r % 2 == 0:
        value = pfaffian(A, size=r, one=one)
    else:
        value = TruncSeries.zero(cap)
        for s in range(1, r + 1):
            col = TruncSeries.zero(cap)
            for p, (c, e) in f_coeffs_single(r, I, s, cap - parts[s - 1]).items():
                col = col + X[s](parts[s - 1] + p).times_beta(e, c)
            keep = [i for i in range(r) if i != s - 1]
            minor = {(a, b): A[(keep[a], keep[b])] for a in range(r - 1) for b in range(a + 1, r - 1)}
            value = value + col * pfaffian(minor, size=r - 1, one=one) * (-1) ** (s + r)
    return ClassExpr(value, {"type": "C", "lambda": parts, "k": 0, "cap": cap})


# ---------------------------------------------------------------------------
# GTheta classes
# ---------------------------------------------------------------------------

def gtheta_lambda(lam: KStrictPartition | Sequence[int], k: int, n_x: int, m_b: int | None, cap: int, prime: bool = False) -> ClassExpr:
    """GTheta_lambda (prime=False) or GTheta'_lambda (prime=True) via phi_lambda."""
    lam = _as_kstrict(lam, k)
    basis = functional_basis(k, n_x, cap, prime=False, m_b=m_b)
    value = pfaffian_class_phi(lam, "B" if prime else "C", basis, cap)
    return ClassExpr(value, {"type": "B" if prime else "C", "lambda": lam.parts, "k": k, "n_x": n_x, "m_b": m_b, "cap": cap})
