"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Callable

from .combinat import (
    KStrictPartition,
    enumerate_kstrict,
    enumerate_spk,
    parse_partition,
    partition_to_perm,
    partitions_in_box,
)
from .exactalg import DomainError, TruncSeries, UsageError, poly_to_json, poly_to_latex, poly_to_text
from .formulas import (
    gtheta_lambda,
    grothendieck_det,
    grothendieck_ratio,
    pfaffian_sum_class,
    route_equivalence,
)
from .genfun import (
    V,
    gamma_cancellation,
    gp_symmetrized,
    schur_q_classical,
    segre_formula0,
    segre_series,
    vishik_pushforward,
)
from .gkm import (
    gkm_verify,
    loc_genfun_check,
    localization_table,
    mutate_table,
    stability_check,
)
from .umbral import cube_window, pfaffian_sum_series, raising_series

DEFAULT_CAP = 8


def default_cap() -> int:
    raw = os.environ.get("DEGLOCI_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"DEGLOCI_CAP={raw!r} is not an integer") from None
    if cap < 1:
        raise UsageError("DEGLOCI_CAP must be at least 1")
    return cap


def render(p: TruncSeries, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(poly_to_json(p), sort_keys=True)
    if fmt == "latex":
        return poly_to_latex(p)
    return poly_to_text(p)


def _strict(lam: KStrictPartition) -> bool:
    return all(lam.parts[i] > lam.parts[i + 1] for i in range(lam.length - 1))


# ---------------------------------------------------------------------------
# verification suites; each returns (ok, witness)
# ---------------------------------------------------------------------------

Result = tuple[bool, dict | None]


def suite_typea(d: int = 3, m_b: int = 6, cap: int = 10, box: int = 3) -> Result:
    for lam in partitions_in_box(d, box):
        if grothendieck_det(lam, d, m_b, cap) != grothendieck_ratio(lam, d, m_b, cap):
            return False, {"lambda": list(lam), "d": d, "m_b": m_b, "cap": cap}
    return True, None


def suite_lem4c(rmax: int = 3, kmax: int = 2, window: int = 8, size: int = 6) -> Result:
    for k in range(kmax + 1):
        for lam in enumerate_kstrict(k, size, rmax):
            if lam.length == 0:
                continue
            W = cube_window(window, lam.length)
            if not raising_series(lam, k, "C", W).equal_on(pfaffian_sum_series(lam, W), W):
                return False, {"lambda": list(lam.parts), "k": k, "window": window}
    return True, None


def suite_schurpf(n: int = 3, k: int = 1, cap: int = 8, n_x: int = 3) -> Result:
    for lam in enumerate_spk(n, k):
        for type_ in ("C", "B"):
            for source, kw in (("geometric", {"n": n}), ("functional", {"n_x": n_x, "m_b": n})):
                a, b = route_equivalence(lam, k, type_, source, cap, **kw)
                if a != b:
                    return False, {"lambda": list(lam.parts), "k": k, "type": type_, "source": source}
    return True, None


def suite_pushbeta(emax: int = 4, cap: int = 8) -> Result:
    for e in range(1, emax + 1):
        roots = [f"z{i}" for i in range(1, e + 1)]
        for m in range(-e + 1, 1):
            expected = TruncSeries.beta_power(-m, (-1) ** (-m), cap)
            if vishik_pushforward(m, roots, cap) != expected:
                return False, {"e": e, "m": m}
    return True, None


def suite_segre(emax: int = 4, mmax: int = 4, cap: int = 8) -> Result:
    for e in range(1, emax + 1):
        roots = [f"z{i}" for i in range(1, e + 1)]
        S = segre_series([V(r, cap) for r in roots], [], cap)
        for m in range(-e + 1, mmax + 1):
            if S.coeff(m) != vishik_pushforward(m, roots, cap):
                return False, {"check": "vishik", "e": e, "m": m}
        for m in range(-e, 0):
            if S.coeff(m) != TruncSeries.beta_power(-m, (-1) ** (-m), cap):
                return False, {"check": "negative", "e": e, "m": m}
    for e in range(1, 4):
        E = [V(f"z{i}", cap) for i in range(1, e + 1)]
        S1 = segre_series(E, [], cap)
        S2 = segre_series(E + [TruncSeries.zero(cap)], [], cap)
        if not S1.equal_coeffs(S2, -cap, cap):
            return False, {"check": "trivial-root", "e": e}
        for f in range(0, 4):
            F = [V(f"b{i}", cap) for i in range(1, f + 1)]
            S = segre_series(E, F, cap)
            for m in range(-2, mmax + 1):
                if S.coeff(m) != segre_formula0(m, E, F, cap):
                    return False, {"check": "formula0", "e": e, "f": f, "m": m}
    return True, None


def suite_gkm(n: int = 3, k: int = 1, cap: int = 8) -> Result:
    last = None
    for lam in enumerate_spk(n, k):
        for prime in (False, True):
            f = gtheta_lambda(lam, k, n, n, cap, prime).value
            table = localization_table(f, n, k)
            res = gkm_verify(table, "B" if prime else "C")
            if not res:
                mu, nu, alpha = res.witness
                return False, {"lambda": list(lam.parts), "prime": prime, "mu": list(mu.parts), "nu": list(nu.parts), "root": str(alpha)}
            last = table
    if last is not None and len(last.entries) > 1:
        mu = sorted(last.entries, key=lambda m: m.parts)[-1]
        bad = mutate_table(last, mu, V("b1", cap) * V("b2", cap) if n >= 2 else V("b1", cap))
        if gkm_verify(bad):
            return False, {"check": "mutation", "mu": list(mu.parts)}
    return True, None


def suite_k0gp(size: int = 5, n_x: int = 3, cap: int = 8) -> Result:
    for lam in enumerate_kstrict(0, size):
        if not _strict(lam):
            continue
        f = gtheta_lambda(lam, 0, n_x, 0, cap, prime=True).value
        g = gp_symmetrized(lam.parts, n_x, cap)
        if f != g:
            return False, {"lambda": list(lam.parts)}
        if lam.length and n_x >= 2 and not gamma_cancellation(g):
            return False, {"check": "cancellation", "lambda": list(lam.parts)}
    return True, None


def suite_k0schurq(size: int = 6, n_x: int = 3, cap: int = 8) -> Result:
    for lam in enumerate_kstrict(0, size):
        if not _strict(lam):
            continue
        q = schur_q_classical(lam.parts, n_x, cap)
        for prime in (False, True):
            f = gtheta_lambda(lam, 0, n_x, 0, cap, prime).value.specialize_beta(0)
            expected = q * Fraction(1, 2 ** lam.length) if prime else q
            if f != expected:
                return False, {"lambda": list(lam.parts), "prime": prime}
    return True, None


def suite_locgen(n: int = 3, k: int = 1, cap: int = 8, ell_max: int = 2) -> Result:
    for mu in enumerate_spk(n, k):
        for ell in range(-ell_max, ell_max + 1):
            if not loc_genfun_check(mu, ell, k, n, cap):
                return False, {"mu": list(mu.parts), "ell": ell}
    return True, None


def suite_stability(n: int = 3, k: int = 1, cap: int = 8) -> Result:
    for lam in enumerate_spk(n + 1, k):
        if lam.in_spk(n):
            if not stability_check(lambda N, lam=lam: gtheta_lambda(lam, k, N, N, cap).value, n, k):
                return False, {"check": "stability", "lambda": list(lam.parts)}
        else:
            f = gtheta_lambda(lam, k, n, n, cap).value
            if not localization_table(f, n, k).is_zero():
                return False, {"check": "vanishing", "lambda": list(lam.parts)}
    return True, None


SUITES: dict[str, Callable[[argparse.Namespace], Result]] = {
    "typea": lambda a: suite_typea(a.d or 3, a.nb if a.nb is not None else 6, a.cap_given or 10),
    "lem4c": lambda a: suite_lem4c(a.rmax, a.k if a.k is not None else 2, a.window or 8),
    "schurpf": lambda a: suite_schurpf(a.n or 3, a.k if a.k is not None else 1, a.cap),
    "pushbeta": lambda a: suite_pushbeta(a.emax, a.cap),
    "segre": lambda a: suite_segre(a.emax, 4, a.cap),
    "gkm": lambda a: suite_gkm(a.n or 3, a.k if a.k is not None else 1, a.cap),
    "k0gp": lambda a: suite_k0gp(5, a.nx or 3, a.cap),
    "k0schurq": lambda a: suite_k0schurq(6, a.nx or 3, a.cap),
    "locgen": lambda a: suite_locgen(a.n or 3, a.k if a.k is not None else 1, a.cap),
    "stability": lambda a: suite_stability(a.n or 3, a.k if a.k is not None else 1, a.cap),
}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_groth(a: argparse.Namespace) -> int:
    lam = parse_partition(a.lam, 10**6).parts
    d = a.d if a.d is not None else max(len(lam), 1)
    m_b = a.nb if a.nb is not None else 0
    if a.method in ("ratio", "both"):
        val = grothendieck_ratio(lam, d, m_b, a.cap).value
    else:
        val = grothendieck_det(lam, d, m_b, a.cap).value
    print(render(val, a.format))
    if a.method == "both":
        other = grothendieck_det(lam, d, m_b, a.cap).value
        if other == val:
            print(f"EQUAL (mod deg>{a.cap})")
            return 0
        print(f"DIFFERENT (mod deg>{a.cap})")
        return 1
    return 0


def cmd_gtheta(a: argparse.Namespace) -> int:
    k = a.k or 0
    lam = parse_partition(a.lam, k)
    n_x = a.nx if a.nx is not None else max(lam.length, 2)
    val = gtheta_lambda(lam, k, n_x, a.nb, a.cap, a.prime).value
    # the validator needs the full beta dependence, so it runs before specializing
    cancels = n_x < 2 or gamma_cancellation(val)
    if a.beta is not None:
        val = val.specialize_beta(Fraction(a.beta))
    if a.localize:
        table = localization_table(val, a.localize, k)
        if a.format == "json":
            print(json.dumps(table.to_json(), sort_keys=True))
        else:
            for mu, v in table.entries.items():
                print(f"{mu}\t{render(v, a.format)}")
        return 0
    print(render(val, a.format))
    if a.format == "text" and n_x >= 2:
        print(f"cancellation in x1, x2: {'holds' if cancels else 'FAILS'}")
    return 0


def cmd_pfclass(a: argparse.Namespace) -> int:
    k = a.k or 0
    lam = parse_partition(a.lam, k)
    n = a.n if a.n is not None else max(lam.length + k, 1)
    val = pfaffian_sum_class(lam, k, a.type, "geometric", a.cap, n=n).value
    print(render(val, a.format))
    return 0


def cmd_enumerate(a: argparse.Namespace) -> int:
    n = a.n if a.n is not None else 2
    k = a.k or 0
    items = enumerate_spk(n, k)
    if a.format == "json":
        print(json.dumps([{"lambda": list(l.parts), "w": list(partition_to_perm(l, n).one_line)} for l in items]))
    else:
        for l in items:
            print(f"{l}\t{partition_to_perm(l, n)}")
    return 0


def cmd_verify(a: argparse.Namespace) -> int:
    names = list(SUITES) if a.suite == "all" else [a.suite]
    for name in names:
        ok, witness = SUITES[name](a)
        if not ok:
            print(json.dumps({"suite": name, "status": "fail", "witness": witness}, sort_keys=True))
            return 1
        print(f"{name}: pass")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="degloci", description="K-theoretic degeneracy loci classes")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", default="")
    common.add_argument("--k", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--nx", type=int)
    common.add_argument("--nb", type=int)
    common.add_argument("--cap", type=int, dest="cap_given")
    common.add_argument("--window", type=int)
    common.add_argument("--format", choices=("json", "latex", "text"), default="text")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("groth", parents=[common], help="factorial Grothendieck polynomial")
    g.add_argument("--method", choices=("ratio", "det", "both"), default="ratio")
    g.set_defaults(func=cmd_groth)

    t = sub.add_parser("gtheta", parents=[common], help="GTheta / GTheta' class")
    t.add_argument("--prime", action="store_true")
    t.add_argument("--beta", help="specialize beta to this rational value")
    t.add_argument("--localize", type=int, metavar="N", help="print the localization table at rank N")
    t.set_defaults(func=cmd_gtheta)

    c = sub.add_parser("pfclass", parents=[common], help="Pfaffian class with the geometric basis")
    c.add_argument("--type", choices=("B", "C"), default="C")
    c.set_defaults(func=cmd_pfclass)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    v.add_argument("--rmax", type=int, default=3)
    v.add_argument("--emax", type=int, default=4)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", parents=[common], help="list SP^k(n) with its signed permutations")
    e.set_defaults(func=cmd_enumerate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.cap = args.cap_given if args.cap_given is not None else default_cap()
        if args.cap < 1:
            raise UsageError("--cap must be at least 1")
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
