import pytest
from hypothesis import given
from hypothesis import strategies as st

from degloci.combinat import (
    KStrictPartition,
    Root,
    SignedPerm,
    char_index,
    enumerate_kstrict,
    enumerate_spk,
    is_k_grassmannian,
    min_coset_rep,
    pair_sets,
    parse_partition,
    partition_to_perm,
    partitions_in_box,
    perm_to_partition,
    positive_roots,
    subset_enumerate,
    weyl_act,
    weyl_length,
)
from degloci.exactalg import DomainError, UsageError

SMALL = [(2, 0), (3, 0), (3, 1), (4, 2), (4, 1)]


def test_kstrict_validation():
    KStrictPartition((2, 2, 1), 2)
    with pytest.raises(DomainError):
        KStrictPartition((3, 3), 2)
    with pytest.raises(DomainError):
        KStrictPartition((1, 2), 2)


def test_parse_partition():
    assert parse_partition("3,1", 0).parts == (3, 1)
    assert parse_partition("", 1).parts == ()
    with pytest.raises(UsageError):
        parse_partition("3,a", 0)


@pytest.mark.parametrize(
    "parts,k,expected",
    [((6, 1), 2, (3, -2)), ((2, 1), 0, (1, 0)), ((1, 1), 1, (-1, -2))],
)
def test_characteristic_index(parts, k, expected):
    chi = char_index(KStrictPartition(parts, k))
    assert tuple(chi[:2]) == expected
    assert all(a > b for a, b in zip(chi, chi[1:]))


def test_pair_sets():
    ps = pair_sets(KStrictPartition((3, 2, 1), 1))
    assert ps.C == {(1, 2)}
    assert ps.D == {(1, 3), (2, 3)}
    assert pair_sets(KStrictPartition((3, 2, 1), 0)).D == frozenset()


def test_subset_data_counts():
    D = {(1, 3), (2, 3)}
    subsets = list(subset_enumerate(D, 3))
    assert len(subsets) == 4
    full = [I for I in subsets if len(I.I) == 2][0]
    # tuples carry one padding slot for the index r + 1
    assert full.d[:3] == (1, 1, -2)
    assert full.c[:3] == (0, 0, 2)


@pytest.mark.parametrize("n,k,count", [(2, 0, 4), (3, 1, 12), (3, 0, 8), (4, 2, 24)])
def test_spk_counts(n, k, count):
    assert len(enumerate_spk(n, k)) == count


def test_example_bijection():
    w = partition_to_perm(KStrictPartition((6, 1), 2), 6)
    assert w.one_line[:4] == (1, 3, -4, 2)
    assert perm_to_partition(w, 2).parts == (6, 1)


@pytest.mark.parametrize("n,k", SMALL)
def test_bijection_roundtrip(n, k):
    for lam in enumerate_spk(n, k):
        w = partition_to_perm(lam, n)
        assert is_k_grassmannian(w, k)
        assert weyl_length(w) == lam.size
        assert perm_to_partition(w, k) == lam


def test_signed_perm_evaluation():
    w = SignedPerm((2, -1))
    assert w(-1) == -2
    assert w(5) == 5
    with pytest.raises(DomainError):
        SignedPerm((1, 1))


@given(st.permutations(range(1, 5)), st.lists(st.booleans(), min_size=4, max_size=4), st.integers(0, 3))
def test_min_coset_rep_is_grassmannian(perm, signs, k):
    w = SignedPerm(tuple(-p if s else p for p, s in zip(perm, signs)))
    rep = min_coset_rep(w, k)
    assert is_k_grassmannian(rep, k)
    assert weyl_length(rep) <= weyl_length(w)


@pytest.mark.parametrize("n,k", SMALL)
def test_weyl_action_is_involution(n, k):
    for mu in enumerate_spk(n, k):
        for alpha in positive_roots(n):
            assert weyl_act(alpha, weyl_act(alpha, mu, n), n) == mu


def test_weyl_action_example():
    assert weyl_act(Root("2e", 1), KStrictPartition((), 0), 2).parts == (1,)
    # a reflection fixing the coset
    assert weyl_act(Root("minus", 1, 2), KStrictPartition((), 2), 2).parts == ()


def test_enumerators():
    assert len(partitions_in_box(3, 3)) == 20
    strict = enumerate_kstrict(0, 6)
    assert KStrictPartition((3, 2, 1), 0) in strict
    assert all(l.size <= 6 for l in strict)
