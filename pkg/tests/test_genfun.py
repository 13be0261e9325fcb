from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from degloci.exactalg import GradedPoly, TruncSeries, bar
from degloci.genfun import (
    V,
    functional_basis,
    g_series,
    gamma_cancellation,
    geometric_basis,
    gp_symmetrized,
    gtheta_factorial_series,
    gtheta_prime_coeff,
    gtheta_series,
    is_symmetric,
    s0_action,
    schur_q_classical,
    scX_series,
    segre_dual_form,
    segre_formula0,
    segre_series,
    vishik_pushforward,
)
from degloci.exactalg import DomainError

CAP = 6


def neg_beta(m, cap=CAP):
    """(-beta)^(-m) for m <= 0."""
    return TruncSeries.beta_power(-m, (-1) ** (-m), cap)


def x(i, cap=CAP):
    return V(f"x{i}", cap)


def test_g_series_examples():
    G = g_series(1, 0, CAP)
    assert G.coeff(1) == V("z1", CAP)
    assert G.coeff(0) == TruncSeries.const(1, CAP)
    assert g_series(3, 0, CAP).coeff(0) == TruncSeries.const(1, CAP)
    G11 = g_series(1, 1, CAP).coeff(1).specialize_beta(0)
    assert G11 == V("z1", CAP) - V("b1", CAP)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_g_series_negative_degrees(d):
    G = g_series(d, 0, CAP)
    for m in range(-4, 1):
        assert G.coeff(m) == neg_beta(m)


@pytest.mark.parametrize("e", [1, 2, 3, 4])
def test_segre_matches_pushforward(e):
    roots = [f"z{i}" for i in range(1, e + 1)]
    S = segre_series([V(r, CAP) for r in roots], [], CAP)
    for m in range(-e + 1, 5):
        assert S.coeff(m) == vishik_pushforward(m, roots, CAP)
    for m in range(-e + 1, 1):
        assert vishik_pushforward(m, roots, CAP) == neg_beta(m)


def test_segre_dual_form_agrees():
    E = [V("z1", CAP), V("z2", CAP)]
    assert segre_series(E, [], CAP).equal_coeffs(segre_dual_form(E, CAP), -CAP, CAP)


@pytest.mark.parametrize("e", [1, 2, 3])
def test_trivial_summand_does_not_change_segre(e):
    E = [V(f"z{i}", CAP) for i in range(1, e + 1)]
    assert segre_series(E, [], CAP).equal_coeffs(segre_series(E + [TruncSeries.zero(CAP)], [], CAP), -CAP, CAP)


@pytest.mark.parametrize("e,f", [(1, 1), (2, 1), (2, 2), (3, 2), (1, 3)])
def test_relative_segre_expansion(e, f):
    E = [V(f"z{i}", CAP) for i in range(1, e + 1)]
    F = [V(f"b{i}", CAP) for i in range(1, f + 1)]
    S = segre_series(E, F, CAP)
    for m in range(-2, 5):
        assert S.coeff(m) == segre_formula0(m, E, F, CAP)


def test_type_b_segre_slices():
    C = scX_series("C", 2, -1, 0, CAP)
    B = scX_series("B", 2, -1, 0, CAP)
    assert C.equal_coeffs(B, -CAP, CAP)
    Cp = scX_series("C", 2, 1, 0, CAP)
    Bp = scX_series("B", 2, 1, 0, CAP)
    for m in range(0, 4):
        assert Bp.coeff(m).specialize_beta(0) == Cp.coeff(m).specialize_beta(0) * Fraction(1, 2)


def test_geometric_basis_boundary():
    basis = geometric_basis("C", 2, 0, CAP)
    assert basis(-3, -2) == neg_beta(-2)
    with pytest.raises(DomainError):
        basis(-3, 1)
    with pytest.raises(DomainError):
        basis(-4, 0)


def test_gtheta_examples():
    G = gtheta_series(0, 1, CAP)
    for m in range(-4, 1):
        assert G.coeff(m) == neg_beta(m)
    assert G.coeff(1).specialize_beta(0) == x(1) * 2


@pytest.mark.parametrize("m", range(1, 5))
def test_gtheta_one_row_is_classical_q(m):
    G = gtheta_series(0, 3, CAP)
    assert G.coeff(m).specialize_beta(0) == schur_q_classical([m], 3, CAP)


def test_gtheta_symmetry_and_s0():
    G = gtheta_series(2, 3, CAP)
    for m in range(0, 4):
        c = G.coeff(m)
        assert is_symmetric(c, ["x1", "x2", "x3"])
        assert is_symmetric(c, ["a1", "a2"])
    G1 = gtheta_series(1, 3, CAP)
    for m in range(0, 4):
        c = G1.coeff(m)
        assert s0_action(c, 3) == c.substitute({"x3": 0})


@pytest.mark.parametrize("m", range(0, 5))
def test_gtheta_cancellation(m):
    c = gtheta_factorial_series(1, 3, 0, CAP).coeff(m).substitute({"a1": V("b1", CAP)})
    assert gamma_cancellation(c)


def test_factorial_gtheta():
    assert gtheta_factorial_series(1, 2, 0, CAP).equal_coeffs(gtheta_series(1, 2, CAP), -CAP, CAP)
    neg = gtheta_factorial_series(1, 2, -2, CAP)
    negp = gtheta_factorial_series(1, 2, -2, CAP, prime=True)
    assert neg.equal_coeffs(negp, -CAP, CAP)
    # at x = a = 0 only the b-product survives
    G = gtheta_factorial_series(0, 2, 2, CAP)
    zero = {"x1": 0, "x2": 0}
    ref = g_series(0, 2, CAP, dual_flag=True)
    for m in range(-3, 4):
        assert G.coeff(m).substitute(zero) == ref.coeff(m)


def test_gtheta_prime_selector():
    assert gtheta_prime_coeff(1, 1, 2, CAP) == gtheta_series(1, 2, CAP).coeff(1)
    assert gtheta_prime_coeff(2, 1, 2, CAP) == gtheta_series(1, 2, CAP, "star").coeff(2)
    assert functional_basis(0, 2, CAP, prime=True)(0, 1) == gtheta_series(0, 2, CAP, "star").coeff(1)


def test_gp_examples():
    assert gp_symmetrized([3], 1, CAP) == x(1) ** 3
    assert gp_symmetrized([2, 1], 2, CAP).specialize_beta(0) == x(1) * x(2) * (x(1) + x(2))
    with pytest.raises(DomainError):
        gp_symmetrized([1, 1], 2, CAP)


@pytest.mark.parametrize("lam", [(1,), (2,), (2, 1), (3, 1), (3, 2), (4, 1)])
def test_gp_cancellation_and_symmetry(lam):
    g = gp_symmetrized(lam, 3, CAP)
    assert is_symmetric(g, ["x1", "x2", "x3"])
    assert gamma_cancellation(g)


def test_schur_q_examples():
    assert schur_q_classical([1], 2, CAP) == (x(1) + x(2)) * 2
    assert schur_q_classical([], 2, CAP) == TruncSeries.const(1, CAP)
    assert schur_q_classical([2, 1], 2, CAP) == x(1) * x(2) * (x(1) + x(2)) * 4


@given(st.integers(1, 3), st.integers(0, 2))
def test_ulaurent_coefficients_have_degree_m(m, ell):
    """Every coefficient is homogeneous of degree m in the beta-compensated grading."""
    G = g_series(2, ell, CAP)
    c = G.coeff(m)
    for coeff, exps in c.terms():
        deg = sum(v for k, v in exps.items() if k != "beta") - exps.get("beta", 0)
        assert deg == m
