"""Equivariant localization: the maps Phi_v, fixed-point tables and the GKM
divisibility conditions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .combinat import (
    KStrictPartition,
    Root,
    SignedPerm,
    enumerate_spk,
    partition_to_perm,
    perm_fixed_point_data,
    positive_roots,
    weyl_act,
)
from .exactalg import TruncSeries, UsageError, bar, poly_to_json
from .genfun import (
    ULaurent,
    _prod,
    gtheta_factorial_series,
    inv_plus_factor,
    neg_factor,
    plus_factor,
    scX_series,
    theta_factor,
)

MAX_INDEX = 12


def _b(i: int, cap: int) -> TruncSeries:
    """b_i, with b_{-i} meaning bar(b_i)."""
    v = TruncSeries.var(f"b{abs(i)}", cap)
    return bar(v) if i < 0 else v


def phi_map(v: SignedPerm, k: int, n: int, cap: int, n_x: int = MAX_INDEX) -> dict[str, TruncSeries | int]:
    """The substitution of Phi_v followed by b_i := 0 for i > n.

    x_i -> b_{v(k+i)} when v(k+i) < 0 and 0 otherwise; a_i -> bar(b_{v(i)}).
    """
    vals: dict[str, TruncSeries | int] = {}
    for i in range(1, MAX_INDEX + 1):
        w = v(k + i)
        if w < 0:
            if i > n_x:
                raise UsageError(f"x_{i} is needed but only {n_x} x-variables are available")
            vals[f"x{i}"] = _b(w, cap) if -w <= n else 0
        else:
            vals[f"x{i}"] = 0
    for i in range(1, k + 1):
        w = v(i)
        vals[f"a{i}"] = _b(-w, cap) if abs(w) <= n else 0
    for i in range(n + 1, MAX_INDEX + 1):
        vals[f"b{i}"] = 0
    return vals


def phi_v(f: TruncSeries, v: SignedPerm, k: int, n: int, n_x: int = MAX_INDEX) -> TruncSeries:
    used = f.variables()
    vals = {name: val for name, val in phi_map(v, k, n, f.cap, n_x).items() if name in used}
    return f.substitute(vals) if vals else f


@dataclass
class LocalizationTable:
    n: int
    k: int
    cap: int
    entries: dict[KStrictPartition, TruncSeries] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.entries.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "cap": self.cap,
            "entries": [{"lambda": list(mu.parts), "value": poly_to_json(val)} for mu, val in self.entries.items()],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalizationTable):
            return NotImplemented
        return (self.n, self.k) == (other.n, other.k) and self.entries == other.entries


def localization_table(f: TruncSeries | Callable[[KStrictPartition], TruncSeries], n: int, k: int, cap: int | None = None) -> LocalizationTable:
    """mu -> Phi_{w_mu}(f) for mu in SP^k(n).

    ``f`` may also be a callable returning the value at each fixed point
    directly (used for geometric classes localized by root assignment).
    """
    if isinstance(f, TruncSeries):
        cap = f.cap
        entries = {mu: phi_v(f, partition_to_perm(mu, n), k, n) for mu in enumerate_spk(n, k)}
    else:
        if cap is None:
            raise UsageError("cap is required with a callable class")
        entries = {mu: f(mu) for mu in enumerate_spk(n, k)}
    return LocalizationTable(n, k, cap, entries)


def root_substitution(alpha: Root, cap: int) -> dict[str, TruncSeries | int]:
    """A substitution killing e(alpha) up to a unit."""
    if alpha.kind in ("e", "2e"):
        return {f"b{alpha.i}": 0}
    if alpha.kind == "minus":
        return {f"b{alpha.j}": _b(alpha.i, cap)}
    return {f"b{alpha.j}": _b(-alpha.i, cap)}


@dataclass
class GKMResult:
    ok: bool
    checked: int
    witness: tuple[KStrictPartition, KStrictPartition, Root] | None = None

    def __bool__(self) -> bool:
        return self.ok


def gkm_verify(table: LocalizationTable, type_: str = "C") -> GKMResult:
    """psi(s_alpha mu) - psi(mu) divisible by e(alpha) for all mu and alpha."""
    n, k, cap = table.n, table.k, table.cap
    checked = 0
    for mu, val in table.entries.items():
        for alpha in positive_roots(n, type_):
            nu = weyl_act(alpha, mu, n)
            if nu == mu:
                continue
            diff = table.entries[nu] - val
            checked += 1
            if diff.is_zero():
                continue
            if not diff.substitute(root_substitution(alpha, cap)).is_zero():
                return GKMResult(False, checked, (mu, nu, alpha))
    return GKMResult(True, checked)


# ---------------------------------------------------------------------------
# localization of generating functions
# ---------------------------------------------------------------------------

def _flag_factors(ell: int, n: int, cap: int) -> list[ULaurent]:
    nb = min(abs(ell), n)
    if ell >= 0:
        return [plus_factor(_b(i, cap)) for i in range(1, nb + 1)]
    return [inv_plus_factor(_b(-i, cap)) for i in range(1, nb + 1)]


def localized_u_roots(mu: KStrictPartition, n: int, cap: int) -> list[TruncSeries]:
    """Roots of U^vee at the fixed point w_mu: bar(b_zeta) and b_u for u <= n."""
    v, zeta, u = perm_fixed_point_data(partition_to_perm(mu, n), mu.k)
    return [_b(-z, cap) for z in zeta] + [_b(x, cap) for x in u if x <= n]


def loc_closed_form(mu: KStrictPartition, ell: int, n: int, cap: int) -> ULaurent:
    """1/(1+beta u^-1) prod_zeta theta(bar b_zeta) prod_v (1+(u+beta) bar b_v) * flag factors."""
    v, zeta, _ = perm_fixed_point_data(partition_to_perm(mu, n), mu.k)
    parts = [neg_factor(1, cap)]
    parts += [theta_factor(_b(-z, cap)) for z in zeta]
    parts += [plus_factor(_b(-x, cap)) for x in v]
    parts += _flag_factors(ell, n, cap)
    return _prod(parts, cap)


def loc_genfun_check(mu: KStrictPartition, ell: int, k: int, n: int, cap: int) -> bool:
    """Phi_mu of the GTheta^(ell) series, the closed form and the localized C^(ell) series agree."""
    if mu.k != k:
        raise UsageError("mu must be k-strict for the same k")
    w = partition_to_perm(mu, n)
    lhs = gtheta_factorial_series(k, n, ell, cap, m_b=n)
    used = set().union(*(a.variables() for a in lhs.pos))
    vals = {name: val for name, val in phi_map(w, k, n, cap).items() if name in used}
    lhs = lhs.substitute(vals)
    mid = loc_closed_form(mu, ell, n, cap)
    rhs = scX_series("C", n, ell, k, cap, U_dual=localized_u_roots(mu, n, cap))
    return lhs.equal_coeffs(mid, -cap, cap) and mid.equal_coeffs(rhs, -cap, cap)


def localize_geometric(f: TruncSeries, mu: KStrictPartition, n: int) -> TruncSeries:
    """Evaluate a class in z_{k+1}..z_n, b_1..b_n at the fixed point w_mu."""
    k = mu.k
    roots = localized_u_roots(mu, n, f.cap)
    vals: dict[str, TruncSeries | int] = {f"z{k + 1 + i}": r for i, r in enumerate(roots)}
    used = f.variables()
    return f.substitute({name: val for name, val in vals.items() if name in used})


# ---------------------------------------------------------------------------
# vanishing, stability, triangularity
# ---------------------------------------------------------------------------

def restrict_table(table: LocalizationTable, n: int) -> LocalizationTable:
    """Set b_{n+1} = ... = 0 and keep only mu in SP^k(n)."""
    dead = {f"b{i}": 0 for i in range(n + 1, MAX_INDEX + 1)}
    entries = {}
    for mu in enumerate_spk(n, table.k):
        val = table.entries[mu]
        used = val.variables()
        entries[mu] = val.substitute({a: b for a, b in dead.items() if a in used})
    return LocalizationTable(n, table.k, table.cap, entries)


def stability_check(builder: Callable[[int], TruncSeries], n: int, k: int) -> bool:
    """builder(N) returns the class with b_i = 0 for i > N; tables at N = n+1 and n are compared."""
    big = localization_table(builder(n + 1), n + 1, k)
    small = localization_table(builder(n), n, k)
    return restrict_table(big, n) == small


def triangularity_report(f: TruncSeries, lam: KStrictPartition, n: int) -> list[KStrictPartition]:
    """Fixed points mu with |mu| < |lambda| at which f does not vanish (informational)."""
    out = []
    for mu in enumerate_spk(n, lam.k):
        if mu.size < lam.size and not phi_v(f, partition_to_perm(mu, n), lam.k, n).is_zero():
            out.append(mu)
    return out


def mutate_table(table: LocalizationTable, mu: KStrictPartition, delta: TruncSeries) -> LocalizationTable:
    entries = dict(table.entries)
    entries[mu] = entries[mu] + delta
    return LocalizationTable(table.n, table.k, table.cap, entries)
