"""Cone-supported Laurent series in t_1..t_r and the substitution maps phi.

A :class:`ConeLaurent` is homogeneous of a fixed degree ``deg`` over Q[beta]
(t_i has degree 1, beta degree -1), so the coefficient of ``t^s`` is stored
as a rational ``c_s`` standing for ``c_s * beta^(|s| - deg)``.

Internally exponents are kept in partial-sum coordinates
``P_k = s_1 + ... + s_k``.  Every series has a *floor* ``L`` with
``P_k >= L_k`` on its support (the shifted cone condition) and a *window*
``W``: the stored terms are exactly the true ones with ``P_k <= W_k``.
Products track both, so truncation never produces wrong coefficients.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from flint import fmpq, fmpq_mpoly_ctx

from .combinat import KStrictPartition, SubsetData, pair_sets, subset_enumerate
from .exactalg import DomainError, TruncSeries, UsageError, binom, pfaffian

INF = None  # an unbounded window entry


@lru_cache(maxsize=None)
def _ctx(r: int) -> fmpq_mpoly_ctx:
    return fmpq_mpoly_ctx.get(tuple(f"y{i}" for i in range(1, r + 1)) or ("y0",), "lex")


def _psums(s: Sequence[int]) -> tuple[int, ...]:
    out = []
    acc = 0
    for v in s:
        acc += v
        out.append(acc)
    return tuple(out)


def _unpsum(P: Sequence[int]) -> tuple[int, ...]:
    prev = 0
    out = []
    for v in P:
        out.append(v - prev)
        prev = v
    return tuple(out)


def _wmin(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _wadd(a: int | None, b: int) -> int | None:
    return None if a is None else a + b


class ConeLaurent:
    """A windowed, cone-supported Laurent series homogeneous of degree ``deg``."""

    __slots__ = ("r", "deg", "floor", "window", "poly")

    def __init__(self, r: int, deg: int, floor: Sequence[int], window: Sequence[int | None], poly):
        self.r = r
        self.deg = deg
        self.floor = tuple(floor)
        self.window = tuple(window)
        self.poly = poly

    # -- construction -----------------------------------------------------
    @classmethod
    def from_terms(
        cls,
        terms: Mapping[Sequence[int], Fraction | int],
        r: int,
        deg: int,
        window: Sequence[int | None] | None = None,
        floor: Sequence[int] | None = None,
    ) -> ConeLaurent:
        window = tuple(window) if window is not None else (INF,) * r
        items = [(_psums(s), Fraction(c)) for s, c in terms.items() if c]
        if floor is None:
            floor = tuple(min((P[k] for P, _ in items), default=0) for k in range(r))
        floor = tuple(floor)
        data = {}
        for P, c in items:
            if any(P[k] < floor[k] for k in range(r)):
                raise DomainError(f"term with partial sums {P} violates floor {floor}")
            if any(window[k] is not None and P[k] > window[k] for k in range(r)):
                continue
            e = tuple(P[k] - floor[k] for k in range(r)) if r else (0,)
            data[e] = fmpq(c.numerator, c.denominator)
        return cls(r, deg, floor, window, _ctx(r).from_dict(data))

    @classmethod
    def one(cls, r: int) -> ConeLaurent:
        return cls.from_terms({(0,) * r: 1}, r, 0, floor=(0,) * r)

    @classmethod
    def monomial(cls, s: Sequence[int], coeff: Fraction | int = 1) -> ConeLaurent:
        s = tuple(s)
        return cls.from_terms({s: coeff}, len(s), sum(s), floor=_psums(s))

    # -- conversion ---------------------------------------------------------
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        out = {}
        for e, c in self.poly.to_dict().items():
            P = tuple(e[k] + self.floor[k] for k in range(self.r))
            out[_unpsum(P)] = Fraction(int(c.p), int(c.q))
        return out

    def coefficient(self, s: Sequence[int]) -> tuple[Fraction, int]:
        """(c, e) such that the coefficient of t^s is c * beta^e."""
        s = tuple(s)
        return self.terms().get(s, Fraction(0)), sum(s) - self.deg

    def __len__(self) -> int:
        return len(self.poly.to_dict())

    def __repr__(self) -> str:
        return f"ConeLaurent(r={self.r}, deg={self.deg}, floor={self.floor}, window={self.window}, nterms={len(self)})"

    # -- arithmetic ---------------------------------------------------------
    def _shift_to(self, floor: Sequence[int]):
        diff = tuple(self.floor[k] - floor[k] for k in range(self.r))
        if not any(diff):
            return self.poly
        if any(d < 0 for d in diff):
            raise DomainError("cannot lower-shift below the floor")
        ctx = _ctx(self.r)
        return self.poly * ctx.from_dict({diff: 1})

    def _check(self, other: ConeLaurent) -> None:
        if not isinstance(other, ConeLaurent):
            raise UsageError("ConeLaurent arithmetic needs ConeLaurent operands")
        if other.r != self.r:
            raise UsageError(f"variable count mismatch {self.r} vs {other.r}")

    def __add__(self, other: ConeLaurent) -> ConeLaurent:
        self._check(other)
        if self.deg != other.deg and not (self.is_zero() or other.is_zero()):
            raise UsageError("adding series of different degrees")
        if self.is_zero() and self.window == (INF,) * self.r:
            return other
        if other.is_zero() and other.window == (INF,) * self.r:
            return self
        floor = tuple(min(a, b) for a, b in zip(self.floor, other.floor))
        window = tuple(_wmin(a, b) for a, b in zip(self.window, other.window))
        poly = self._shift_to(floor) + other._shift_to(floor)
        return ConeLaurent(self.r, self.deg, floor, window, poly)._truncated()

    def __neg__(self) -> ConeLaurent:
        return ConeLaurent(self.r, self.deg, self.floor, self.window, -self.poly)

    def __sub__(self, other: ConeLaurent) -> ConeLaurent:
        return self + (-other)

    def scale(self, c: Fraction | int) -> ConeLaurent:
        c = Fraction(c)
        return ConeLaurent(self.r, self.deg, self.floor, self.window, self.poly * fmpq(c.numerator, c.denominator))

    def __mul__(self, other: ConeLaurent | int | Fraction) -> ConeLaurent:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        floor = tuple(a + b for a, b in zip(self.floor, other.floor))
        window = tuple(
            _wmin(_wadd(wf, lg), _wadd(wg, lf))
            for wf, wg, lf, lg in zip(self.window, other.window, self.floor, other.floor)
        )
        out = ConeLaurent(self.r, self.deg + other.deg, floor, window, self.poly * other.poly)
        return out._truncated()

    __rmul__ = __mul__

    def _truncated(self) -> ConeLaurent:
        if all(w is None for w in self.window):
            return self
        bounds = [None if w is None else w - l for w, l in zip(self.window, self.floor)]
        data = self.poly.to_dict()
        keep = {e: c for e, c in data.items() if all(b is None or e[k] <= b for k, b in enumerate(bounds))}
        if len(keep) == len(data):
            return self
        return ConeLaurent(self.r, self.deg, self.floor, self.window, _ctx(self.r).from_dict(keep))

    def restrict(self, window: Sequence[int | None]) -> ConeLaurent:
        """Narrow the window (never widens: knowledge cannot grow)."""
        w = tuple(_wmin(a, b) for a, b in zip(self.window, window))
        return ConeLaurent(self.r, self.deg, self.floor, w, self.poly)._truncated()

    def shift(self, s: Sequence[int]) -> ConeLaurent:
        """Multiply by the monomial t^s exactly."""
        P = _psums(s)
        return ConeLaurent(
            self.r,
            self.deg + sum(s),
            tuple(a + b for a, b in zip(self.floor, P)),
            tuple(_wadd(w, p) for w, p in zip(self.window, P)),
            self.poly,
        )

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def equal_on(self, other: ConeLaurent, window: Sequence[int | None] | None = None) -> bool:
        """Coefficientwise equality on the common (optionally narrowed) window."""
        self._check(other)
        w = tuple(_wmin(a, b) for a, b in zip(self.window, other.window))
        if window is not None:
            w = tuple(_wmin(a, b) for a, b in zip(w, window))
        a = self.restrict(w)
        b = other.restrict(w)
        if a.is_zero() and b.is_zero():
            return True
        return a.deg == b.deg and a.terms() == b.terms()

    def cube_terms(self, T: int) -> dict[tuple[int, ...], Fraction]:
        """Terms with every |s_i| <= T."""
        return {s: c for s, c in self.terms().items() if all(abs(v) <= T for v in s)}

    def cone_shift(self) -> tuple[int, ...]:
        """A shift n with n + s in the cone for every support exponent."""
        return _unpsum(tuple(-l for l in self.floor))

    def validate_cone(self) -> bool:
        for s in self.terms():
            if any(p < l for p, l in zip(_psums(s), self.floor)):
                return False
        return True

    def specialize_beta0(self) -> dict[tuple[int, ...], Fraction]:
        """Terms surviving beta = 0 (those whose beta exponent is zero)."""
        return {s: c for s, c in self.terms().items() if sum(s) == self.deg}


def cube_window(T: int, r: int) -> tuple[int, ...]:
    """Partial-sum window containing the cube |s_i| <= T."""
    return tuple(T * (k + 1) for k in range(r))


# ---------------------------------------------------------------------------
# factor expansions
# ---------------------------------------------------------------------------

def _minw(window: Sequence[int | None], lo: int, hi: int) -> int | None:
    """min of window entries lo..hi (0-based inclusive), None if unbounded."""
    vals = [w for w in window[lo:hi + 1] if w is not None]
    return min(vals) if vals else None


def _bounded_range(bound: int | None, start: int = 0) -> Iterable[int]:
    if bound is None:
        raise UsageError("an unbounded window needs a finite bound for infinite expansions")
    return range(start, bound + 1)


FACTOR_KINDS = ("tbar_ratio", "inv_t_tbar", "inv_1_beta_pow", "inv_2_beta", "monomial", "tbar", "one_plus_beta")


def expand_factor(
    kind: str,
    r: int,
    window: Sequence[int | None],
    i: int = 1,
    j: int | None = None,
    m: int = 1,
) -> ConeLaurent:
    """Expand one elementary factor (indices are 1-based).

    kinds:
      ``tbar_ratio``      1 - tbar_i / tbar_j           (i < j)
      ``inv_t_tbar``      1 / (1 - t_i / tbar_j)        (i < j)
      ``inv_1_beta_pow``  1 / (1 + beta t_i)^m          (any integer m)
      ``inv_2_beta``      1 / (2 + beta t_i)
      ``monomial``        t_i^m
      ``tbar``            tbar_i = -t_i / (1 + beta t_i)
      ``one_plus_beta``   1 + beta t_i
    """
    window = tuple(window)
    if len(window) != r:
        raise UsageError("window length must equal the number of variables")
    if not 1 <= i <= r or (j is not None and not i < j <= r):
        raise UsageError(f"bad indices i={i}, j={j} for r={r}")
    terms: dict[tuple[int, ...], Fraction] = {}
    zero = [0] * r

    def put(pos: dict[int, int], c) -> None:
        s = list(zero)
        for idx, e in pos.items():
            s[idx - 1] += e
        terms[tuple(s)] = terms.get(tuple(s), 0) + Fraction(c)

    if kind == "tbar_ratio":
        if j is None:
            raise UsageError("tbar_ratio needs j")
        # tbar_i/tbar_j = (t_i/t_j) (1 + beta t_j) / (1 + beta t_i)
        put({}, 1)
        for a in _bounded_range(_minw(window, i - 1, j - 2), 1):
            sign = -((-1) ** (a - 1))
            put({i: a, j: -1}, sign)
            put({i: a}, sign)
        deg = 0
    elif kind == "inv_t_tbar":
        if j is None:
            raise UsageError("inv_t_tbar needs j")
        # (t_i/tbar_j)^c = (-1)^c t_i^c t_j^-c (1 + beta t_j)^c
        cmax = _minw(window, i - 1, j - 2)
        emax = _minw(window, j - 1, r - 1)
        for c in _bounded_range(cmax):
            for e in range(0, c + 1 if emax is None else min(c, emax) + 1):
                put({i: c, j: e - c}, (-1) ** c * binom(c, e))
        deg = 0
    elif kind == "inv_1_beta_pow":
        if m <= 0:
            for s in range(0, -m + 1):
                put({i: s}, binom(-m, s))
        else:
            for s in _bounded_range(_minw(window, i - 1, r - 1)):
                put({i: s}, binom(-m, s))
        deg = 0
    elif kind == "inv_2_beta":
        for s in _bounded_range(_minw(window, i - 1, r - 1)):
            put({i: s}, Fraction(1, 2) * Fraction(-1, 2) ** s)
        deg = 0
    elif kind == "monomial":
        put({i: m}, 1)
        deg = m
        s = [0] * r
        s[i - 1] = m
        return ConeLaurent.from_terms(terms, r, deg, window=(INF,) * r, floor=_psums(s)).restrict(window)
    elif kind == "tbar":
        for s in _bounded_range(_minw(window, i - 1, r - 1), 1):
            put({i: s}, (-1) ** s)
        deg = 1
    elif kind == "one_plus_beta":
        put({}, 1)
        put({i: 1}, 1)
        deg = 0
    else:
        raise UsageError(f"unsupported factor kind {kind!r}; expected one of {FACTOR_KINDS}")
    return ConeLaurent.from_terms(terms, r, deg, window=window, floor=(0,) * r)


def _product(factors: Iterable[ConeLaurent], r: int) -> ConeLaurent:
    out = ConeLaurent.one(r)
    for f in factors:
        out = out * f
    return out


def _sub_window(window: Sequence[int | None], s: Sequence[int]) -> tuple[int | None, ...]:
    P = _psums(s)
    return tuple(None if w is None else w - p for w, p in zip(window, P))


# ---------------------------------------------------------------------------
# raising-operator series
# ---------------------------------------------------------------------------

def raising_series(
    lam: KStrictPartition | Sequence[int],
    k: int = 0,
    type_: str = "C",
    window: Sequence[int | None] | None = None,
    d: int | None = None,
) -> ConeLaurent:
    """The raising-operator series of lambda.

    type A: t^lambda prod_{i<j<=d} (1 - tbar_i/tbar_j) over d variables.
    type C: t^lambda prod_{i<j<=r} (1 - tbar_i/tbar_j) / prod_{C(lambda)} (1 - t_i/tbar_j).
    type B: type C times prod_{chi_i >= 0} 1/(2 + beta t_i).
    """
    if type_ == "A":
        parts = tuple(lam.parts if isinstance(lam, KStrictPartition) else lam)
        d = len(parts) if d is None else d
        if len(parts) > d:
            raise UsageError("partition longer than the number of variables")
        s = parts + (0,) * (d - len(parts))
        window = tuple(window) if window is not None else (INF,) * d
        inner = _sub_window(window, s)
        factors = [expand_factor("tbar_ratio", d, inner, i, j) for i in range(1, d + 1) for j in range(i + 1, d + 1)]
        return _product(factors, d).shift(s)
    if type_ not in ("B", "C"):
        raise UsageError(f"unknown type {type_!r}")
    if not isinstance(lam, KStrictPartition):
        lam = KStrictPartition(tuple(lam), k)
    r = lam.length
    s = lam.parts
    window = tuple(window) if window is not None else (INF,) * r
    inner = _sub_window(window, s)
    ps = pair_sets(lam)
    factors = []
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            factors.append(expand_factor("tbar_ratio", r, inner, i, j))
            if (i, j) in ps.C:
                factors.append(expand_factor("inv_t_tbar", r, inner, i, j))
    if type_ == "B":
        for i in range(1, r + 1):
            if lam.chi[i - 1] >= 0:
                factors.append(expand_factor("inv_2_beta", r, inner, i))
    return _product(factors, r).shift(s)


# ---------------------------------------------------------------------------
# F coefficients and the Pfaffian side
# ---------------------------------------------------------------------------

def r_prime(r: int) -> int:
    """Smallest even integer >= r."""
    return r + (r % 2)


def F_pair_series(
    r: int, I: SubsetData, i: int, j: int, window: Sequence[int | None], nvars: int | None = None, slots: tuple[int, int] | None = None
) -> ConeLaurent:
    """F_{i,j}^I as a series; by default in two local variables (t_i, t_j).

    ``nvars``/``slots`` place it inside a larger variable set instead.
    """
    rp = r_prime(r)
    nv = 2 if nvars is None else nvars
    si, sj = (1, 2) if slots is None else slots
    fs = [
        expand_factor("inv_1_beta_pow", nv, window, si, m=rp - i - I.ci(i) - 1),
        expand_factor("inv_1_beta_pow", nv, window, sj, m=rp - j - I.ci(j)),
        expand_factor("tbar_ratio", nv, window, si, sj),
        expand_factor("inv_t_tbar", nv, window, si, sj),
    ]
    return _product(fs, nv)


def F_single_series(r: int, I: SubsetData, i: int, window: Sequence[int | None], nvars: int = 1, slot: int = 1) -> ConeLaurent:
    """F_i^I = 1 / (1 + beta t_i)^(r' - i - c_i - 1)."""
    rp = r_prime(r)
    return expand_factor("inv_1_beta_pow", nvars, window, slot, m=rp - i - I.ci(i) - 1)


def f_coeffs(r: int, I: SubsetData, i: int, j: int, window: Sequence[int | None]) -> dict[tuple[int, int], tuple[Fraction, int]]:
    """(p, q) -> (c, e) meaning c * beta^e; window bounds (p, p + q)."""
    F = F_pair_series(r, I, i, j, window)
    return {s: (c, s[0] + s[1]) for s, c in F.terms().items()}


def f_coeffs_single(r: int, I: SubsetData, i: int, bound: int) -> dict[int, tuple[Fraction, int]]:
    F = F_single_series(r, I, i, (bound,))
    return {s[0]: (c, s[0]) for s, c in F.terms().items()}


def pfaffian_sum_series(lam: KStrictPartition, window: Sequence[int | None]) -> ConeLaurent:
    """Sum over I in D(lambda)_r of Pf(Lambda^I) as a windowed series.

    Lambda_{ij} = t_i^{lambda_i+d_i} t_j^{lambda_j+d_j} F_{ij}, so
    Pf(Lambda) = t^{lambda+d} Pf(F); the monomial is pulled out exactly and
    the F-Pfaffian is computed with the compensated window.
    """
    r = lam.length
    window = tuple(window)
    if r == 0:
        return ConeLaurent.one(0)
    ps = pair_sets(lam)
    rp = r_prime(r)
    total: ConeLaurent | None = None
    for I in subset_enumerate(ps.D, r):
        s = tuple(lam.part(i) + I.di(i) for i in range(1, r + 1))
        inner = _sub_window(window, s)
        entries: dict[tuple[int, int], ConeLaurent] = {}
        for i in range(1, rp + 1):
            for j in range(i + 1, rp + 1):
                if j <= r:
                    entries[(i - 1, j - 1)] = F_pair_series(r, I, i, j, inner, nvars=r, slots=(i, j))
                else:
                    entries[(i - 1, j - 1)] = F_single_series(r, I, i, inner, nvars=r, slot=i)
        pf = pfaffian(entries, size=rp, one=ConeLaurent.one(r)).shift(s)
        total = pf if total is None else total + pf
    return total


# ---------------------------------------------------------------------------
# substitution homomorphisms
# ---------------------------------------------------------------------------

Basis = Callable[[int, int], TruncSeries]


def phi_substitute(series: ConeLaurent, basis: Basis, cap: int, prune: bool = True) -> TruncSeries:
    """Replace t^s by prod_i basis(i, s_i), linearly.

    ``basis(i, m)`` must have non-beta valuation >= m for m > 0; with
    ``prune`` terms whose positive exponents sum beyond ``cap`` are skipped
    because their image vanishes in the truncation.  Evaluation is nested
    (Horner style) over slots to share partial products.
    """
    r = series.r
    if r == 0:
        c = series.terms().get((), Fraction(0))
        if -series.deg < 0 and c:
            raise DomainError("negative beta power")
        return TruncSeries.beta_power(-series.deg, c, cap) if c else TruncSeries.zero(cap)
    tree: dict = {}
    for s, c in series.terms().items():
        if prune and sum(v for v in s if v > 0) > cap:
            continue
        e = sum(s) - series.deg
        if e < 0:
            raise DomainError(f"term t^{s} carries a negative beta power")
        node = tree
        for v in s[:-1]:
            node = node.setdefault(v, {})
        node.setdefault(s[-1], []).append((c, e))

    cache: dict[tuple[int, int], TruncSeries] = {}

    def B(slot: int, m: int) -> TruncSeries:
        key = (slot, m)
        if key not in cache:
            val = basis(slot, m)
            if val is None:
                raise DomainError(f"missing basis entry ({slot}, {m})")
            cache[key] = val
        return cache[key]

    def rec(node: dict, slot: int) -> TruncSeries:
        acc = TruncSeries.zero(cap)
        if slot == r:
            for m, items in node.items():
                for c, e in items:
                    acc = acc + B(slot, m).times_beta(e, c)
            return acc
        for m, child in node.items():
            inner = rec(child, slot + 1)
            if not inner.is_zero():
                acc = acc + B(slot, m) * inner
        return acc

    return rec(tree, 1)
