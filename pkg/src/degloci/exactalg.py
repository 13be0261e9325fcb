"""Exact graded polynomial and truncated-series arithmetic over Q[beta].

Every variable except ``beta`` has degree +1; ``beta`` has degree -1.  The
*non-beta degree* of a monomial is the sum of its non-beta exponents, and a
:class:`TruncSeries` keeps exactly the monomials whose non-beta degree is at
most a fixed cap.  Polynomials are backed by ``flint.fmpq_mpoly`` in one
shared context so that all objects interoperate without conversion.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Iterable, Mapping, Sequence, Union

from flint import fmpq, fmpq_mpoly, fmpq_mpoly_ctx

FAMILIES = ("x", "z", "a", "b")
MAX_INDEX = 12
NAMES: tuple[str, ...] = ("beta",) + tuple(f"{f}{i}" for f in FAMILIES for i in range(1, MAX_INDEX + 1))
NVARS = len(NAMES)
INDEX = {name: i for i, name in enumerate(NAMES)}
CTX = fmpq_mpoly_ctx.get(NAMES, "deglex")
_GENS = CTX.gens()
_ZERO = CTX.from_dict({})
_ONE = CTX.from_dict({(0,) * NVARS: 1})


class UsageError(ValueError):
    """Raised for malformed arguments (wrong shapes, mismatched caps, ...)."""


class DomainError(ArithmeticError):
    """Raised when a mathematical precondition fails (inexact division, ...)."""


Scalar = Union[int, Fraction, fmpq]


def _fmpq(c: Scalar) -> fmpq:
    if isinstance(c, Fraction):
        return fmpq(c.numerator, c.denominator)
    return fmpq(c)


def _frac(c: Any) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _check_name(name: str) -> int:
    try:
        return INDEX[name]
    except KeyError:
        raise UsageError(f"unknown variable {name!r} (families {FAMILIES}, indices 1..{MAX_INDEX})") from None


def _nonbeta_degree(exps: Sequence[int]) -> int:
    return sum(exps) - exps[0]


def _split(p: fmpq_mpoly) -> dict[int, fmpq_mpoly]:
    """Split a raw polynomial into homogeneous non-beta-degree components."""
    buckets: dict[int, dict] = {}
    for exps, c in p.to_dict().items():
        buckets.setdefault(_nonbeta_degree(exps), {})[exps] = c
    return {d: CTX.from_dict(t) for d, t in buckets.items()}


def _monomial(exps: Mapping[str, int], coeff: Scalar = 1) -> fmpq_mpoly:
    vec = [0] * NVARS
    for name, e in exps.items():
        if e < 0:
            raise UsageError("negative exponent")
        vec[_check_name(name)] += e
    return CTX.from_dict({tuple(vec): _fmpq(coeff)})


class GradedPoly:
    """An exact polynomial in beta and the x, z, a, b families."""

    __slots__ = ("raw",)

    def __init__(self, raw: fmpq_mpoly | Scalar = 0):
        if isinstance(raw, fmpq_mpoly):
            self.raw = raw
        else:
            self.raw = _ONE * _fmpq(raw)

    @classmethod
    def var(cls, name: str) -> GradedPoly:
        return cls(_GENS[_check_name(name)])

    @classmethod
    def beta(cls) -> GradedPoly:
        return cls(_GENS[0])

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Scalar = 1) -> GradedPoly:
        return cls(_monomial(exps, coeff))

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Scalar, Mapping[str, int]]]) -> GradedPoly:
        out = _ZERO
        for c, exps in terms:
            out = out + _monomial(exps, c)
        return cls(out)

    def _coerce(self, other: Any) -> fmpq_mpoly:
        if isinstance(other, GradedPoly):
            return other.raw
        if isinstance(other, (int, Fraction, fmpq)):
            return _ONE * _fmpq(other)
        return NotImplemented

    def __add__(self, other: Any) -> GradedPoly:
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GradedPoly(self.raw + o)

    __radd__ = __add__

    def __sub__(self, other: Any) -> GradedPoly:
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GradedPoly(self.raw - o)

    def __rsub__(self, other: Any) -> GradedPoly:
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GradedPoly(o - self.raw)

    def __neg__(self) -> GradedPoly:
        return GradedPoly(-self.raw)

    def __mul__(self, other: Any) -> GradedPoly:
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else GradedPoly(self.raw * o)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> GradedPoly:
        return GradedPoly(self.raw**e)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.raw == o

    def __hash__(self) -> int:
        return hash(str(self.raw))

    def __repr__(self) -> str:
        return f"GradedPoly({self.raw})"

    def __str__(self) -> str:
        return str(self.raw)

    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def terms(self) -> list[tuple[Fraction, dict[str, int]]]:
        """Terms in canonical (flint deglex) order with named exponents."""
        out = []
        for exps, c in self.raw.terms():
            out.append((_frac(c), {NAMES[i]: int(e) for i, e in enumerate(exps) if e}))
        return out

    def components(self) -> dict[int, GradedPoly]:
        return {d: GradedPoly(p) for d, p in sorted(_split(self.raw).items())}

    def max_degree(self) -> int:
        comps = _split(self.raw)
        return max(comps) if comps else -1

    def truncate(self, cap: int) -> TruncSeries:
        return TruncSeries.from_poly(self, cap)

    def variables(self) -> set[str]:
        return {NAMES[i] for i, d in enumerate(self.raw.degrees()) if d}

    def subs(self, values: Mapping[str, Any]) -> GradedPoly:
        """Substitute polynomials (or scalars) for variables, exactly."""
        images = list(_GENS)
        for name, v in values.items():
            images[_check_name(name)] = GradedPoly(v).raw if not isinstance(v, GradedPoly) else v.raw
        return GradedPoly(self.raw.compose(*images))

    def specialize_beta(self, value: Scalar = 0) -> GradedPoly:
        return self.subs({"beta": value})


def exact_divide(num: GradedPoly, den: GradedPoly) -> GradedPoly:
    """Exact polynomial quotient; raises :class:`DomainError` if inexact."""
    if den.is_zero():
        raise DomainError("division by zero")
    try:
        return GradedPoly(num.raw / den.raw)
    except Exception as exc:  # flint raises DomainError of its own
        raise DomainError(f"inexact division: {exc}") from None


class TruncSeries:
    """A graded series truncated above non-beta degree ``cap``.

    Stored as a tuple of ``cap + 1`` homogeneous components.  Products are
    re-truncated, so results agree with exact arithmetic modulo monomials of
    non-beta degree greater than ``cap``.
    """

    __slots__ = ("cap", "comps")

    def __init__(self, comps: Sequence[fmpq_mpoly], cap: int):
        if cap < 0:
            raise UsageError("cap must be nonnegative")
        comps = list(comps)[: cap + 1]
        comps += [_ZERO] * (cap + 1 - len(comps))
        self.cap = cap
        self.comps: tuple[fmpq_mpoly, ...] = tuple(comps)

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, cap: int) -> TruncSeries:
        return cls([], cap)

    @classmethod
    def const(cls, c: Scalar | GradedPoly, cap: int) -> TruncSeries:
        if isinstance(c, GradedPoly):
            return cls.from_poly(c, cap)
        return cls([_ONE * _fmpq(c)], cap)

    @classmethod
    def var(cls, name: str, cap: int) -> TruncSeries:
        if name == "beta":
            return cls([_GENS[0]], cap)
        return cls([_ZERO, _GENS[_check_name(name)]], cap)

    @classmethod
    def beta_power(cls, e: int, coeff: Scalar, cap: int) -> TruncSeries:
        return cls([_GENS[0] ** e * _fmpq(coeff)], cap)

    @classmethod
    def from_poly(cls, p: GradedPoly | fmpq_mpoly, cap: int) -> TruncSeries:
        raw = p.raw if isinstance(p, GradedPoly) else p
        parts = _split(raw)
        return cls([parts.get(d, _ZERO) for d in range(cap + 1)], cap)

    @classmethod
    def _homog(cls, p: fmpq_mpoly, degree: int, cap: int) -> TruncSeries:
        comps = [_ZERO] * (cap + 1)
        if 0 <= degree <= cap:
            comps[degree] = p
        return cls(comps, cap)

    # -- basic protocol ---------------------------------------------------
    def _like(self, other: Any) -> TruncSeries:
        if isinstance(other, TruncSeries):
            if other.cap != self.cap:
                raise UsageError(f"mismatched caps {self.cap} and {other.cap}")
            return other
        if isinstance(other, (int, Fraction, fmpq)):
            return TruncSeries.const(other, self.cap)
        if isinstance(other, GradedPoly):
            return TruncSeries.from_poly(other, self.cap)
        return NotImplemented

    def __add__(self, other: Any) -> TruncSeries:
        o = self._like(other)
        if o is NotImplemented:
            return o
        return TruncSeries([a + b for a, b in zip(self.comps, o.comps)], self.cap)

    __radd__ = __add__

    def __neg__(self) -> TruncSeries:
        return TruncSeries([-a for a in self.comps], self.cap)

    def __sub__(self, other: Any) -> TruncSeries:
        o = self._like(other)
        if o is NotImplemented:
            return o
        return TruncSeries([a - b for a, b in zip(self.comps, o.comps)], self.cap)

    def __rsub__(self, other: Any) -> TruncSeries:
        o = self._like(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other: Any) -> TruncSeries:
        if isinstance(other, (int, Fraction, fmpq)):
            c = _fmpq(other)
            return TruncSeries([a * c for a in self.comps], self.cap)
        o = self._like(other)
        if o is NotImplemented:
            return o
        cap = self.cap
        out = [_ZERO] * (cap + 1)
        left = [(i, a) for i, a in enumerate(self.comps) if not a.is_zero()]
        right = [(j, b) for j, b in enumerate(o.comps) if not b.is_zero()]
        for i, a in left:
            for j, b in right:
                if i + j > cap:
                    break
                out[i + j] = out[i + j] + a * b
        return TruncSeries(out, cap)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> TruncSeries:
        if e < 0:
            raise UsageError("negative power of a truncated series")
        result = TruncSeries.const(1, self.cap)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        try:
            o = self._like(other)
        except UsageError:
            return False
        if o is NotImplemented:
            return NotImplemented
        return all(a == b for a, b in zip(self.comps, o.comps))

    def __hash__(self) -> int:
        return hash(tuple(str(c) for c in self.comps))

    def __repr__(self) -> str:
        return f"TruncSeries({self.to_poly().raw}, cap={self.cap})"

    def __str__(self) -> str:
        return str(self.to_poly().raw)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def valuation(self) -> int | None:
        """Lowest non-beta degree present, or None for zero."""
        for d, c in enumerate(self.comps):
            if not c.is_zero():
                return d
        return None

    def to_poly(self) -> GradedPoly:
        out = _ZERO
        for c in self.comps:
            out = out + c
        return GradedPoly(out)

    def terms(self) -> list[tuple[Fraction, dict[str, int]]]:
        return self.to_poly().terms()

    def variables(self) -> set[str]:
        return self.to_poly().variables()

    def with_cap(self, cap: int) -> TruncSeries:
        return TruncSeries(self.comps, cap)

    def times_monomial(self, exps: Mapping[str, int], coeff: Scalar = 1) -> TruncSeries:
        m = _monomial(exps, coeff)
        shift = sum(e for n, e in exps.items() if n != "beta")
        comps = [_ZERO] * shift + [c * m for c in self.comps]
        return TruncSeries(comps, self.cap)

    def times_beta(self, e: int, coeff: Scalar = 1) -> TruncSeries:
        m = _GENS[0] ** e * _fmpq(coeff)
        return TruncSeries([c * m for c in self.comps], self.cap)

    def specialize_beta(self, value: Scalar = 0) -> TruncSeries:
        images = list(_GENS)
        images[0] = _ONE * _fmpq(value)
        return TruncSeries([c.compose(*images) for c in self.comps], self.cap)

    # -- substitution -----------------------------------------------------
    def substitute(self, values: Mapping[str, Any]) -> TruncSeries:
        """Substitute truncated series (or polynomials/scalars) for variables.

        Images must have no constant term when they replace a degree-1
        variable by something of lower degree, otherwise truncation would be
        unsound; this is checked.  Degree-1 linear images go through flint's
        ``compose`` directly, general images through grouped expansion.
        """
        if not values:
            return self
        imgs: dict[int, TruncSeries] = {}
        for name, v in values.items():
            idx = _check_name(name)
            if idx == 0:
                raise UsageError("beta cannot be substituted by substitute(); use specialize_beta")
            s = self._like(v) if not isinstance(v, TruncSeries) else v
            if s.cap != self.cap:
                raise UsageError("mismatched caps in substitution")
            if not s.comps[0].is_zero():
                raise DomainError(f"image of {name} has a constant term")
            imgs[idx] = s
        if all(all(c.is_zero() for i, c in enumerate(s.comps) if i != 1) for s in imgs.values()):
            images = list(_GENS)
            for idx, s in imgs.items():
                images[idx] = s.comps[1]
            return TruncSeries([c.compose(*images) for c in self.comps], self.cap)
        return self._substitute_general(imgs)

    def _substitute_general(self, imgs: dict[int, TruncSeries]) -> TruncSeries:
        cap = self.cap
        idxs = sorted(imgs)
        powers: dict[int, list[TruncSeries]] = {i: [TruncSeries.const(1, cap)] for i in idxs}

        def power(i: int, e: int) -> TruncSeries:
            lst = powers[i]
            while len(lst) <= e:
                lst.append(lst[-1] * imgs[i])
            return lst[e]

        result = TruncSeries.zero(cap)
        for d, comp in enumerate(self.comps):
            if comp.is_zero():
                continue
            groups: dict[tuple[int, ...], dict] = {}
            for exps, c in comp.to_dict().items():
                key = tuple(exps[i] for i in idxs)
                if any(key):
                    rest = list(exps)
                    for i in idxs:
                        rest[i] = 0
                    rest = tuple(rest)
                else:
                    rest = exps
                groups.setdefault(key, {})[rest] = c
            for key, tdict in groups.items():
                rest_deg = d - sum(key)
                q = TruncSeries._homog(CTX.from_dict(tdict), rest_deg, cap)
                if not any(key):
                    result = result + q
                    continue
                term = q
                for i, e in zip(idxs, key):
                    if e:
                        term = term * power(i, e)
                result = result + term
        return result

    def substitute_zero(self, names: Iterable[str]) -> TruncSeries:
        """Set the listed variables to zero."""
        return self.substitute({n: 0 for n in names}) if names else self

    def to_json(self) -> dict:
        return poly_to_json(self.to_poly())


# ---------------------------------------------------------------------------
# formal group law
# ---------------------------------------------------------------------------

def oplus(p: TruncSeries, q: TruncSeries) -> TruncSeries:
    """Formal group law p + q + beta p q."""
    if p.cap != q.cap:
        raise UsageError("mismatched caps")
    return p + q + (p * q).times_beta(1)


def geometric_inverse(p: TruncSeries) -> TruncSeries:
    """1 / (1 + beta p) as a truncated geometric series; p needs no constant term."""
    if not p.comps[0].is_zero():
        raise DomainError("series 1/(1+beta p) is not degree-filtered: p has a constant term")
    x = -p.times_beta(1)
    result = TruncSeries.const(1, p.cap)
    term = result
    for _ in range(p.cap):
        term = term * x
        if term.is_zero():
            break
        result = result + term
    return result


def bar(p: TruncSeries) -> TruncSeries:
    """Formal inverse -p / (1 + beta p)."""
    return -(p * geometric_inverse(p))


def ominus(p: TruncSeries, q: TruncSeries) -> TruncSeries:
    """(p - q) / (1 + beta q), computed as p (+) bar(q)."""
    return oplus(p, bar(q))


def chern_tensor_expand(e: int, L_root: TruncSeries, E_roots: Sequence[TruncSeries]) -> TruncSeries:
    """Top Chern class of L (x) E as the product of the x_i (+) c_1(L).

    The product is checked against the binomial expansion
    sum_p c_p(E) sum_q binom(p, q) beta^q c_1(L)^(e-p+q).
    """
    if len(E_roots) != e:
        raise UsageError(f"expected {e} roots, got {len(E_roots)}")
    cap = L_root.cap
    prod = TruncSeries.const(1, cap)
    for x in E_roots:
        prod = prod * oplus(x, L_root)
    expansion = TruncSeries.zero(cap)
    for p in range(e + 1):
        cp = elementary(E_roots, p, cap)
        for q in range(p + 1):
            expansion = expansion + (cp * L_root ** (e - p + q)).times_beta(q, _binom(p, q))
    if prod != expansion:
        raise DomainError("tensor expansion disagrees with the product of roots")
    return prod


def elementary(roots: Sequence[TruncSeries], p: int, cap: int) -> TruncSeries:
    """The p-th elementary symmetric function of the roots."""
    out = TruncSeries.zero(cap)
    for combo in combinations(roots, p):
        term = TruncSeries.const(1, cap)
        for x in combo:
            term = term * x
        out = out + term
    return out


@lru_cache(maxsize=None)
def _binom(m: int, s: int) -> int:
    """Generalized binomial coefficient binom(m, s) for integer m, s >= 0."""
    if s < 0:
        return 0
    num = 1
    den = 1
    for i in range(s):
        num *= m - i
        den *= i + 1
    return num // den


binom = _binom


# ---------------------------------------------------------------------------
# determinants and Pfaffians over arbitrary commutative rings
# ---------------------------------------------------------------------------

def determinant(M: Sequence[Sequence[Any]], one: Any = 1) -> Any:
    """Determinant by Laplace expansion along rows, memoized on column sets."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise UsageError("determinant of a non-square matrix")
    if n == 0:
        return one
    memo: dict[tuple[int, frozenset], Any] = {}

    def rec(row: int, cols: frozenset) -> Any:
        if row == n:
            return one
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = None
        sign = 1
        for c in range(n):
            if c not in cols:
                continue
            entry = M[row][c]
            minor = rec(row + 1, cols - {c})
            term = entry * minor
            term = term if sign > 0 else -term
            total = term if total is None else total + term
            sign = -sign
        memo[key] = total
        return total

    return rec(0, frozenset(range(n)))


def pfaffian(upper: Any, size: int | None = None, one: Any = 1) -> Any:
    """Pfaffian of an antisymmetric matrix given by its strict upper triangle.

    ``upper`` may be a full square matrix, a dict keyed by (i, j) with i < j
    (0-based), or a callable ``upper(i, j)``.  Uses first-row cofactor
    recursion memoized on the remaining index set.
    """
    if callable(upper):
        get = upper
        if size is None:
            raise UsageError("size required with a callable entry function")
    elif isinstance(upper, Mapping):
        get = lambda i, j: upper[(i, j)]  # noqa: E731
        if size is None:
            size = 1 + max((j for _, j in upper), default=-1)
    else:
        rows = upper
        size = len(rows)
        get = lambda i, j: rows[i][j]  # noqa: E731
    if size % 2:
        raise UsageError("Pfaffian of an odd-dimensional matrix")
    memo: dict[tuple[int, ...], Any] = {}

    def rec(idx: tuple[int, ...]) -> Any:
        if not idx:
            return one
        if idx in memo:
            return memo[idx]
        first = idx[0]
        total = None
        for pos in range(1, len(idx)):
            j = idx[pos]
            rest = idx[1:pos] + idx[pos + 1:]
            term = get(first, j) * rec(rest)
            term = term if pos % 2 == 1 else -term
            total = term if total is None else total + term
        memo[idx] = total
        return total

    return rec(tuple(range(size)))


# ---------------------------------------------------------------------------
# JSON codec
# ---------------------------------------------------------------------------

def _coeff_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _parse_coeff(s: str) -> Fraction:
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def _term_key(exps: Mapping[str, int]) -> tuple:
    vec = [0] * NVARS
    for n, e in exps.items():
        vec[INDEX[n]] = e
    return (-(sum(vec) - vec[0]), -vec[0], tuple(-v for v in vec[1:]))


def poly_to_json(p: GradedPoly | TruncSeries) -> dict:
    """Canonical JSON encoding (degree-descending, then lexicographic)."""
    if isinstance(p, TruncSeries):
        p = p.to_poly()
    terms = sorted(p.terms(), key=lambda t: _term_key(t[1]))
    return {"terms": [{"coeff": _coeff_str(c), "exps": dict(sorted(e.items(), key=lambda kv: INDEX[kv[0]]))} for c, e in terms]}


def poly_from_json(obj: Mapping) -> GradedPoly:
    return GradedPoly.from_terms((_parse_coeff(t["coeff"]), t.get("exps", {})) for t in obj["terms"])


def latex_name(name: str) -> str:
    if name == "beta":
        return r"\beta"
    return f"{name[0]}_{{{name[1:]}}}"


def poly_to_latex(p: GradedPoly | TruncSeries) -> str:
    if isinstance(p, TruncSeries):
        p = p.to_poly()
    terms = sorted(p.terms(), key=lambda t: _term_key(t[1]))
    if not terms:
        return "0"
    pieces = []
    for c, exps in terms:
        mono = " ".join(
            latex_name(n) + (f"^{{{e}}}" if e > 1 else "")
            for n, e in sorted(exps.items(), key=lambda kv: INDEX[kv[0]])
        )
        mag = abs(c)
        if mono:
            cs = "" if mag == 1 else (str(mag) if mag.denominator == 1 else rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}")
        else:
            cs = str(mag) if mag.denominator == 1 else rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, (cs + " " + mono).strip()))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def poly_to_text(p: GradedPoly | TruncSeries) -> str:
    if isinstance(p, TruncSeries):
        p = p.to_poly()
    terms = sorted(p.terms(), key=lambda t: _term_key(t[1]))
    if not terms:
        return "0"
    out = []
    for c, exps in terms:
        mono = "*".join(n + (f"^{e}" if e > 1 else "") for n, e in sorted(exps.items(), key=lambda kv: INDEX[kv[0]]))
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        elif c == -1:
            out.append("-" + mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out).replace("+ -", "- ")

