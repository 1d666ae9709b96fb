"""Characters, Gauss sums and Weil sums over GF(p^n).

Character sums are accumulated as Python complex in double precision.
Final quantities that are integers by theory must round cleanly within a
tolerance; `as_integer` enforces that contract.  Closed-form Weil sum
evaluations dispatch on structural predicates (matrix rank, affine
solvability, discrete-log divisibility) rather than exponent identities,
and always agree with the literal summation `weil_direct`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .field import Felt, Field, FieldError
from .linpoly import LinearSolver, from_terms

DEFAULT_TOL = 1e-6


class NonIntegralError(ArithmeticError):
    """A sum that must be an integer failed to round within tolerance."""


def as_integer(z: complex, tol: float = DEFAULT_TOL) -> int:
    """Round a complex accumulator to int, enforcing the integrality contract."""
    z = complex(z)
    r = round(z.real)
    if abs(z.imag) >= tol or abs(z.real - r) >= tol:
        raise NonIntegralError(f"{z!r} is not an integer within tol={tol}")
    return int(r)


def _i_power(k: int) -> complex:
    return (1, 1j, -1, -1j)[k % 4]


def chi1(K: Field, x: Felt) -> complex:
    """Principal additive character exp(2*pi*i*Tr(x)/p)."""
    return complex(K.chi_table()[x])


def psi(K: Field, kidx: int, x: Felt) -> complex:
    """k-th multiplicative character: psi_k(g^l) = exp(2*pi*i*k*l/(q-1))."""
    if x == 0:
        raise FieldError("multiplicative character of zero")
    if kidx % (K.q - 1) == 0:
        return 1.0 + 0j
    return complex(np.exp(2j * np.pi * (kidx * K.dlog(x)) / (K.q - 1)))


def eta(K: Field, x: Felt) -> int:
    """Quadratic character (p odd): +1 on nonzero squares, -1 otherwise."""
    if K.p == 2:
        raise FieldError("quadratic character requires odd characteristic")
    if x == 0:
        raise FieldError("quadratic character of zero")
    return 1 if K.dlog(x) % 2 == 0 else -1


def gauss_sum(K: Field, kidx: int, shift: Felt) -> complex:
    """G(psi_kidx, chi_shift) = sum over nonzero z of psi(z) * chi1(shift*z)."""
    ells = np.arange(K.q - 1)
    phases = np.exp(2j * np.pi * (kidx % (K.q - 1)) * ells / (K.q - 1))
    chis = K.chi_table()[K.vmul_const(shift, K.exp)]
    return complex(np.sum(phases * chis))


def incomplete_gauss(K: Field, U: Iterable[Felt], kidx: int,
                     weight: Mapping[Felt, Felt] | Callable[[Felt], Felt]) -> complex:
    """G_U(psi, chi) = sum over alpha in U of psi_kidx(alpha) * chi1(weight(alpha))."""
    if isinstance(weight, Mapping):
        wfun = weight.__getitem__
    else:
        wfun = weight
    total = 0j
    nontrivial = kidx % (K.q - 1) != 0
    for alpha in U:
        if alpha == 0 and nontrivial:
            raise FieldError("0 in U with a nontrivial multiplicative character")
        pa = psi(K, kidx, alpha) if alpha else 1.0
        total += pa * chi1(K, wfun(alpha))
    return total


@dataclass(frozen=True)
class WeilParams:
    """Parameters of S_k(A, B) = sum over x of chi1(A x^(p^k+1) + B x)."""

    k: int
    A: Felt
    B: Felt

    def derived(self, n: int) -> tuple[int, int, int | None]:
        """(d, e, m) with d = gcd(n,k), e = gcd(n,2k), m = n/2 when n is even."""
        d = math.gcd(n, self.k)
        e = math.gcd(n, 2 * self.k)
        m = n // 2 if n % 2 == 0 else None
        return d, e, m


def weil_direct(K: Field, w: WeilParams) -> complex:
    """Literal summation of S_k(A, B) over the whole field."""
    pk1 = K.p ** w.k + 1
    xs = np.arange(K.q)
    arg = K.vadd_arrays(K.vmul_const(w.A, K.pow_vector(pk1)), K.vmul_const(w.B, xs))
    return complex(np.sum(K.chi_table()[arg]))


def _f_solver(K: Field, k: int, A: Felt) -> LinearSolver:
    """Cached solver for f(x) = A^(p^k) x^(p^2k) + A x."""
    key = ("weil_solver", k, A)
    solver = K._cache.get(key)
    if solver is None:
        L = from_terms(K, [(2 * k, K.pow(A, K.p ** k)), (0, A)])
        solver = LinearSolver(K, L)
        K._cache[key] = solver
    return solver


def weil_closed_odd(K: Field, w: WeilParams) -> complex:
    """Closed form of S_k(A, B) for odd characteristic, A != 0.

    B = 0 uses the quadratic-character evaluation; B != 0 completes the
    square through a solution x0 of f(x0) = -B^(p^k) and multiplies the
    conjugated phase chi1(A x0^(p^k+1)) into the B = 0 value.
    """
    p, n, q = K.p, K.n, K.q
    if p == 2:
        raise FieldError("weil_closed_odd requires odd characteristic")
    if w.A == 0:
        raise FieldError("A must be nonzero")
    k, A, B = w.k, w.A, w.B
    d, _, _ = w.derived(n)
    nd = n // d

    if B == 0:
        if nd % 2 == 0:
            m = n // 2
            s = K.pow(A, (q - 1) // (p ** d + 1))
            target = 1 if (m // d) % 2 == 0 else K.neg_one
            if s != target:
                return (-1.0) ** (m // d) * p ** m
            return (-1.0) ** (m // d + 1) * p ** (m + d)
        eps = 1 if p % 4 == 1 else _i_power(n)
        return (-1.0) ** (n - 1) * eps * math.sqrt(q) * eta(K, A)

    solver = _f_solver(K, k, A)
    sols = solver.solve(K.neg(K.pow(B, p ** k)))
    if not sols:
        return 0j
    x0 = sols[0]
    phase = chi1(K, K.neg(K.mul(A, K.pow(x0, p ** k + 1))))  # conj(chi1(A x0^(p^k+1)))
    if solver.is_bijective:
        if nd % 2 == 1:
            mu = 1 if p % 4 == 1 else _i_power(3 * n)
            return (-1.0) ** (n - 1) * mu * math.sqrt(q) * eta(K, K.neg(A)) * phase
        m = n // 2
        return (-1.0) ** (m // d) * p ** m * phase
    if nd % 2 == 1:
        raise FieldError("f is always a permutation for odd n/d in odd characteristic")
    m = n // 2
    return (-1.0) ** (m // d + 1) * p ** (m + d) * phase


def jacobi2(s: int) -> int:
    """Jacobi symbol (2/s) for odd positive s: +1 iff s = +-1 mod 8."""
    if s < 1 or s % 2 == 0:
        raise ValueError(f"Jacobi symbol (2/s) needs odd positive s, got {s}")
    return 1 if s % 8 in (1, 7) else -1


def weil_closed_even(K: Field, w: WeilParams) -> complex:
    """Closed form of S_k(A, B) in characteristic 2, A != 0.

    Odd n/d: normalise A = C^(2^k+1); the sum vanishes unless the relative
    trace of B/C into GF(2^d) equals 1, and otherwise carries the phase
    chi1(gamma^(2^k+1) + gamma) for any gamma with
    gamma^(2^2k) + gamma = B/C + 1 times the Jacobi-signed magnitude
    2^((n+d)/2).  Even n/d dispatches on (2^d+1)-th-power membership of A
    and solvability of f(x) = B^(2^k); solvable power-A cases carry the
    factor (-1)^(m/d+1) 2^(m+d) with no further trace condition (verified
    exhaustively against weil_direct).
    """
    p, n, q = K.p, K.n, K.q
    if p != 2:
        raise FieldError("weil_closed_even requires characteristic 2")
    if w.A == 0:
        raise FieldError("A must be nonzero")
    k, A, B = w.k, w.A, w.B
    d, _, _ = w.derived(n)
    nd = n // d

    if nd % 2 == 1:
        # gcd(2^k+1, q-1) = 1, so A has a unique (2^k+1)-th root C
        e_inv = pow(2 ** k + 1, -1, q - 1)
        C = K.pow(A, e_inv)
        bb = K.mul(B, K.inv(C)) if B else 0
        if K.trace_rel(bb, d) != 1:
            return 0j
        key = ("gamma_solver", k)
        gsolver = K._cache.get(key)
        if gsolver is None:
            gsolver = LinearSolver(K, from_terms(K, [(2 * k, 1), (0, 1)]))
            K._cache[key] = gsolver
        gam = gsolver.solve_one(K.add(bb, 1))
        if gam is None:
            raise FieldError("inconsistent trace condition in even-characteristic closed form")
        t = K.add(K.pow(gam, 2 ** k + 1), gam) if gam else 0
        return chi1(K, t) * jacobi2(nd) ** d * 2 ** ((n + d) // 2)

    m = n // 2
    solver = _f_solver(K, k, A)
    sols = solver.solve(K.pow(B, 2 ** k) if B else 0)
    if not sols:
        return 0j
    x0 = sols[0]
    phase = chi1(K, K.mul(A, K.pow(x0, 2 ** k + 1)) if x0 else 0)
    if K.dlog(A) % (2 ** d + 1) == 0:
        return (-1.0) ** (m // d + 1) * 2 ** (m + d) * phase
    return (-1.0) ** (m // d) * 2 ** m * phase


def weil_closed(K: Field, w: WeilParams) -> complex:
    """Characteristic dispatch for the closed-form Weil sum."""
    if K.p == 2:
        return weil_closed_even(K, w)
    return weil_closed_odd(K, w)
