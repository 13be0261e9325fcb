import pytest

from degloci.combinat import KStrictPartition, Root, SignedPerm, enumerate_spk
from degloci.exactalg import TruncSeries, UsageError, bar
from degloci.formulas import gtheta_lambda, pfaffian_sum_class
from degloci.genfun import V
from degloci.gkm import (
    LocalizationTable,
    gkm_verify,
    loc_genfun_check,
    localization_table,
    localize_geometric,
    mutate_table,
    phi_v,
    stability_check,
    triangularity_report,
)

CAP = 6


def test_phi_identity():
    f = V("x1", CAP) * V("a1", CAP) + V("a2", CAP)
    out = phi_v(f, SignedPerm.identity(3), 2, 3)
    assert out == bar(V("b2", CAP))


def test_phi_negative_value():
    f = V("x1", CAP)
    assert phi_v(f, SignedPerm((-1, 2)), 0, 2) == bar(V("b1", CAP))
    c = TruncSeries.const(5, CAP)
    assert phi_v(c, SignedPerm((-1, 2)), 0, 2) == c


def test_phi_needs_enough_x_variables():
    with pytest.raises(UsageError):
        phi_v(V("x2", CAP), SignedPerm((2, -1)), 0, 2, n_x=1)


def test_constant_and_empty_tables():
    one = TruncSeries.const(1, CAP)
    t = localization_table(one, 3, 1)
    assert all(v == one for v in t.entries.values())
    assert gkm_verify(t)
    empty = localization_table(gtheta_lambda((), 1, 3, 3, CAP).value, 3, 1)
    assert all(v == one for v in empty.entries.values())


@pytest.mark.parametrize("n,k", [(2, 0), (3, 0), (2, 1)])
def test_gkm_tables(n, k):
    for lam in enumerate_spk(n, k):
        for prime in (False, True):
            t = localization_table(gtheta_lambda(lam, k, n, n, CAP, prime).value, n, k)
            assert gkm_verify(t, "B" if prime else "C"), (lam, prime)


def test_gkm_mutation_gives_witness():
    n, k = 2, 0
    t = localization_table(gtheta_lambda((1,), k, n, n, CAP).value, n, k)
    mu = KStrictPartition((2,), 0)
    res = gkm_verify(mutate_table(t, mu, V("b1", CAP) * V("b2", CAP)))
    assert not res
    assert mu in res.witness[:2]


def test_type_b_and_c_use_same_divisibility():
    n, k = 2, 0
    t = localization_table(gtheta_lambda((2,), k, n, n, CAP, True).value, n, k)
    assert gkm_verify(t, "B").ok == gkm_verify(t, "C").ok


def test_vanishing_outside_spk():
    lam = KStrictPartition((3,), 0)
    assert not lam.in_spk(2)
    assert localization_table(gtheta_lambda(lam, 0, 2, 2, CAP).value, 2, 0).is_zero()


@pytest.mark.parametrize("lam", [(), (1,), (2,), (2, 1)])
def test_stability_rank_two(lam):
    assert stability_check(lambda N: gtheta_lambda(lam, 0, N, N, CAP).value, 2, 0)


def test_stability_restricted_table_is_zero():
    from degloci.gkm import restrict_table

    lam = KStrictPartition((3,), 0)
    big = localization_table(gtheta_lambda(lam, 0, 3, 3, CAP).value, 3, 0)
    assert restrict_table(big, 2).is_zero()


@pytest.mark.parametrize("mu", [(), (2,)])
@pytest.mark.parametrize("ell", [-1, 0, 1])
def test_loc_genfun(mu, ell):
    assert loc_genfun_check(KStrictPartition(mu, 1), ell, 1, 3, CAP)


def test_geometric_and_functional_tables_agree():
    n, k = 3, 1
    for lam in [(1,), (2,), (1, 1)]:
        lam = KStrictPartition(lam, k)
        g = pfaffian_sum_class(lam, k, "C", "geometric", CAP, n=n).value
        f = gtheta_lambda(lam, k, n, n, CAP).value
        A = localization_table(lambda mu: localize_geometric(g, mu, n), n, k, CAP)
        assert A == localization_table(f, n, k)


def test_triangularity_is_reported():
    lam = KStrictPartition((2, 1), 0)
    f = gtheta_lambda(lam, 0, 2, 2, CAP).value
    assert triangularity_report(f, lam, 2) == []


def test_table_json_shape():
    t = localization_table(TruncSeries.const(1, CAP), 2, 0)
    obj = t.to_json()
    assert obj["n"] == 2 and obj["k"] == 0 and len(obj["entries"]) == 4
    assert isinstance(t, LocalizationTable)
