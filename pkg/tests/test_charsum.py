import cmath
import math
import random

import pytest

from cdu.field import Field, FieldError
from cdu import charsum as cs


def test_chi1_basics(gf8, gf9):
    assert cs.chi1(gf8, 0) == 1
    assert cs.chi1(gf8, 1) == -1  # Tr(1) = 3 mod 2 = 1
    assert abs(cs.chi1(gf9, 1) - cmath.exp(4j * cmath.pi / 3)) < 1e-12  # Tr(1) = 2


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (3, 3), (2, 4)])
def test_chi1_is_additive_character(p, n):
    K = Field(p, n)
    for x in K.elements():
        assert abs(abs(cs.chi1(K, x)) - 1) < 1e-12
        for y in K.elements():
            assert abs(cs.chi1(K, K.add(x, y)) - cs.chi1(K, x) * cs.chi1(K, y)) < 1e-9


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (3, 3), (3, 4), (2, 6)])
def test_orthogonality(p, n):
    """sum_x chi1(alpha*x) = q * [alpha == 0], exhaustively."""
    K = Field(p, n)
    for alpha in K.elements():
        s = sum(cs.chi1(K, K.mul(alpha, x)) for x in K.elements())
        expect = K.q if alpha == 0 else 0
        assert abs(s - expect) < 1e-7


def test_psi_and_eta(gf9):
    for x in gf9.units():
        assert cs.psi(gf9, 0, x) == 1
    g = gf9.g
    assert cs.eta(gf9, g) == -1
    assert cs.eta(gf9, gf9.mul(g, g)) == 1
    K7 = Field(7, 1)
    assert cs.eta(K7, 2) == 1  # squares mod 7 are {1, 2, 4}
    assert cs.eta(K7, 3) == -1
    with pytest.raises(FieldError):
        cs.eta(gf9, 0)
    with pytest.raises(FieldError):
        cs.psi(gf9, 1, 0)
    K8 = Field(2, 3)
    with pytest.raises(FieldError):
        cs.eta(K8, 1)


def test_psi_multiplicative(gf9):
    for kidx in (1, 3, 4):
        for x in gf9.units():
            for y in gf9.units():
                lhs = cs.psi(gf9, kidx, gf9.mul(x, y))
                rhs = cs.psi(gf9, kidx, x) * cs.psi(gf9, kidx, y)
                assert abs(lhs - rhs) < 1e-9


def test_eta_detects_squares(gf27):
    squares = {gf27.mul(x, x) for x in gf27.units()}
    for x in gf27.units():
        assert cs.eta(gf27, x) == (1 if x in squares else -1)


def test_gauss_sum_trivial_and_magnitude(gf9):
    assert abs(cs.gauss_sum(gf9, 0, 0) - (gf9.q - 1)) < 1e-9
    assert abs(cs.gauss_sum(gf9, 4, 0)) < 1e-9  # orthogonality
    G = cs.gauss_sum(gf9, 4, 1)  # eta, since (q-1)/2 = 4
    assert abs(abs(G) - 3) < 1e-9  # |G| = sqrt(q)


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (5, 2), (2, 4)])
def test_gauss_sum_sqrt_q(p, n):
    K = Field(p, n)
    for kidx in (1, K.q // 2, K.q - 2):
        for shift in (1, K.g):
            if kidx % (K.q - 1) == 0:
                continue
            assert abs(abs(cs.gauss_sum(K, kidx, shift)) - math.sqrt(K.q)) < 1e-7


def test_incomplete_gauss(gf9):
    assert cs.incomplete_gauss(gf9, [], 4, lambda a: a) == 0
    full = cs.incomplete_gauss(gf9, list(gf9.units()), 4, lambda a: a)
    assert abs(full - cs.gauss_sum(gf9, 4, 1)) < 1e-9
    x = gf9.g
    single = cs.incomplete_gauss(gf9, [x], 4, {x: gf9.mul(3, x)})
    assert abs(single - cs.psi(gf9, 4, x) * cs.chi1(gf9, gf9.mul(3, x))) < 1e-12
    with pytest.raises(FieldError):
        cs.incomplete_gauss(gf9, [0, 1], 4, lambda a: a)


def test_weil_direct_trivial(gf9):
    assert abs(cs.weil_direct(gf9, cs.WeilParams(1, 0, 0)) - gf9.q) < 1e-9
    assert abs(cs.weil_direct(gf9, cs.WeilParams(1, 0, 3))) < 1e-9


def test_weil_gf9_frozen_values(gf9):
    # m/d = 1, A = 1: 1^2 != -1 so S = -3
    w = cs.WeilParams(1, 1, 0)
    assert abs(cs.weil_direct(gf9, w) - (-3)) < 1e-9
    assert abs(cs.weil_closed_odd(gf9, w) - (-3)) < 1e-9
    # A of multiplicative order 4 satisfies A^2 = -1, giving +9
    A4 = gf9.pow(gf9.g, 2)
    w4 = cs.WeilParams(1, A4, 0)
    assert abs(cs.weil_closed_odd(gf9, w4) - 9) < 1e-9
    assert abs(cs.weil_direct(gf9, w4) - 9) < 1e-9
    # sanity: the B=0 sums over all nonzero A cancel: 6*(-3) + 2*9 = 0
    tot = sum(cs.weil_direct(gf9, cs.WeilParams(1, A, 0)) for A in gf9.units())
    assert abs(tot) < 1e-7


def test_weil_gf8_frozen_values(gf8):
    w = cs.WeilParams(1, 1, 1)
    # direct oracle: sum of (-1)^Tr(x^3 + x) = -4 = (2/3) * 2^2
    direct = sum(cs.chi1(gf8, gf8.add(gf8.pow(x, 3), x)) for x in gf8.elements())
    assert abs(direct - (-4)) < 1e-12
    assert abs(cs.weil_closed_even(gf8, w) - (-4)) < 1e-9
    assert abs(cs.weil_closed_even(gf8, cs.WeilParams(1, 1, 0))) < 1e-9  # bijective power map


def test_weil_gf16_power_a_unsolvable_gives_zero(gf16):
    K = gf16
    found = 0
    for A in K.units():
        if K.dlog(A) % 3 != 0:  # want cubes only
            continue
        from cdu import linpoly as lp
        L = lp.from_terms(K, [(2, K.pow(A, 2)), (0, A)])
        solver = lp.LinearSolver(K, L)
        for B in K.units():
            if solver.solve_one(K.pow(B, 2)) is None:
                found += 1
                w = cs.WeilParams(1, A, B)
                assert abs(cs.weil_closed_even(K, w)) < 1e-12
                assert abs(cs.weil_direct(K, w)) < 1e-9
    assert found > 0


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (2, 3), (2, 4), (2, 6)])
def test_weil_closed_matches_direct_exhaustive(p, n):
    K = Field(p, n)
    for k in range(1, n):
        for A in K.units():
            for B in K.elements():
                w = cs.WeilParams(k, A, B)
                assert abs(cs.weil_direct(K, w) - cs.weil_closed(K, w)) < 1e-6, (p, n, k, A, B)


def test_weil_closed_matches_direct_sampled_gf729():
    """Odd characteristic with d > 1 and n/d odd (n=6, k=2)."""
    K = Field(3, 6)
    rng = random.Random(42)
    for _ in range(150):
        A = rng.randrange(1, K.q)
        B = rng.randrange(K.q)
        w = cs.WeilParams(2, A, B)
        assert abs(cs.weil_direct(K, w) - cs.weil_closed_odd(K, w)) < 1e-6


def test_weil_real_when_predicted(gf16):
    # characteristic 2: every character value is +-1, so all sums are real
    for k in (1, 2):
        for A in list(gf16.units())[:8]:
            for B in list(gf16.elements())[:8]:
                assert abs(cs.weil_direct(gf16, cs.WeilParams(k, A, B)).imag) < 1e-9
    # p odd, n even, B = 0: branch values are +-p^m or +-p^(m+d), no phase factor
    K81 = Field(3, 4)
    for k in (1, 2, 3):
        for A in K81.units():
            v = cs.weil_direct(K81, cs.WeilParams(k, A, 0))
            assert abs(v.imag) < 1e-9
            assert abs(v.real - round(v.real)) < 1e-9


def test_gamma_phase_choice_independence():
    """chi1(gamma^(2^k+1) + gamma) is constant on the whole solution coset."""
    from cdu import linpoly as lp

    for (n, k) in [(3, 1), (5, 2), (6, 2)]:
        K = Field(2, n)
        d = math.gcd(n, k)
        gsolver = lp.LinearSolver(K, lp.from_terms(K, [(2 * k, 1), (0, 1)]))
        assert len(gsolver.kernel) == 2 ** d
        for bb in K.elements():
            sols = gsolver.solve(bb)
            if not sols:
                continue
            vals = {cs.chi1(K, K.add(K.pow(g, 2 ** k + 1), g) if g else 0) for g in sols}
            assert len(vals) == 1


def test_weil_error_branches(gf8, gf9):
    with pytest.raises(FieldError):
        cs.weil_closed_odd(gf8, cs.WeilParams(1, 1, 0))
    with pytest.raises(FieldError):
        cs.weil_closed_even(gf9, cs.WeilParams(1, 1, 0))
    with pytest.raises(FieldError):
        cs.weil_closed_odd(gf9, cs.WeilParams(1, 0, 1))
    with pytest.raises(FieldError):
        cs.weil_closed_even(gf8, cs.WeilParams(1, 0, 1))


def test_jacobi2():
    assert cs.jacobi2(3) == -1
    assert cs.jacobi2(7) == 1
    assert cs.jacobi2(15) == 1
    assert cs.jacobi2(1) == 1
    assert cs.jacobi2(5) == -1
    with pytest.raises(ValueError):
        cs.jacobi2(4)
    with pytest.raises(ValueError):
        cs.jacobi2(-3)


def test_as_integer_contract():
    assert cs.as_integer(3.0000000001 + 0j) == 3
    assert cs.as_integer(-2 + 1e-9j) == -2
    with pytest.raises(cs.NonIntegralError):
        cs.as_integer(2.5)
    with pytest.raises(cs.NonIntegralError):
        cs.as_integer(1 + 0.01j)
