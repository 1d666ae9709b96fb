"""Linearized polynomials sum a_i x^(p^i) as F_p-linear maps of GF(p^n).

A polynomial is a plain length-n tuple of field elements (coefficient of
x^(p^i) at index i).  Solvability and permutation questions are answered by
rank computations on the digit-basis matrix, never by exponent criteria.
"""

from __future__ import annotations

from .field import Felt, Field, FieldError

LinPoly = tuple  # length-n tuple of Felt


def zero(K: Field) -> LinPoly:
    return (0,) * K.n


def mono(K: Field, i: int, coeff: Felt = 1) -> LinPoly:
    """coeff * x^(p^i)."""
    c = [0] * K.n
    c[i % K.n] = coeff
    return tuple(c)


def identity(K: Field) -> LinPoly:
    return mono(K, 0)


def from_terms(K: Field, terms) -> LinPoly:
    """Build sum coeff * x^(p^i) from (i, coeff) pairs, accumulating collisions."""
    c = [0] * K.n
    for i, coeff in terms:
        i %= K.n
        c[i] = K.add(c[i], coeff)
    return tuple(c)


def parse_linpoly(K: Field, spec: str) -> LinPoly:
    """Parse "mono:i", "bin:i,j", "zero" or a comma list "a0,a1,...,a(n-1)"."""
    s = spec.strip().lower()
    if s in ("zero", "0") and "," not in s:
        return zero(K)
    if s == "id" or s == "identity":
        return identity(K)
    if s.startswith("mono:"):
        return mono(K, int(s[5:]))
    if s.startswith("bin:"):
        i_s, j_s = s[4:].split(",")
        return from_terms(K, [(int(i_s), 1), (int(j_s), 1)])
    coeffs = [int(t) for t in s.split(",")]
    if len(coeffs) != K.n:
        raise ValueError(f"expected {K.n} coefficients, got {len(coeffs)}")
    if any(not 0 <= c < K.q for c in coeffs):
        raise ValueError("coefficients must lie in [0, q)")
    return tuple(coeffs)


def format_linpoly(P: LinPoly) -> str:
    return ",".join(str(c) for c in P)


def lp_eval(K: Field, P: LinPoly, x: Felt) -> Felt:
    acc = 0
    for i, a in enumerate(P):
        if a:
            acc = K.add(acc, K.mul(a, K.frobenius(x, i)))
    return acc


def lp_matrix(K: Field, P: LinPoly):
    """n x n matrix over F_p; column j is the digit vector of P(basis_j)."""
    import numpy as np

    M = np.zeros((K.n, K.n), dtype=np.int64)
    for j in range(K.n):
        M[:, j] = K.digits(lp_eval(K, P, K.p ** j))
    return M


class LinearSolver:
    """Row-reduced form of a linearized polynomial for repeated affine solves."""

    def __init__(self, K: Field, P: LinPoly):
        self.K = K
        self.P = tuple(P)
        p, n = K.p, K.n
        # Gauss-Jordan on [M | I] over F_p.
        M = [[int(v) for v in row] for row in lp_matrix(K, P)]
        T = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        pivots = []
        row = 0
        for col in range(n):
            pr = next((r for r in range(row, n) if M[r][col] % p), None)
            if pr is None:
                continue
            M[row], M[pr] = M[pr], M[row]
            T[row], T[pr] = T[pr], T[row]
            inv = pow(M[row][col], p - 2, p)
            M[row] = [v * inv % p for v in M[row]]
            T[row] = [v * inv % p for v in T[row]]
            for r in range(n):
                if r != row and M[r][col] % p:
                    f = M[r][col] % p
                    M[r] = [(a - f * b) % p for a, b in zip(M[r], M[row])]
                    T[r] = [(a - f * b) % p for a, b in zip(T[r], T[row])]
            pivots.append(col)
            row += 1
        self.rank = row
        self._rref = M
        self._transform = T
        self._pivots = pivots
        free = [c for c in range(n) if c not in pivots]
        # kernel basis vectors in digit space
        kern = []
        for fc in free:
            v = [0] * n
            v[fc] = 1
            for r, pc in enumerate(pivots):
                v[pc] = (-M[r][fc]) % p
            kern.append(v)
        self._kernel_basis = kern
        self.kernel = sorted(self._span(kern))

    def _span(self, basis):
        K, p = self.K, self.K.p
        out = []
        total = p ** len(basis)
        for idx in range(total):
            v = [0] * K.n
            ii = idx
            for b in basis:
                c = ii % p
                ii //= p
                if c:
                    v = [(a + c * bb) % p for a, bb in zip(v, b)]
            out.append(K.from_digits(v))
        return out

    @property
    def is_bijective(self) -> bool:
        return self.rank == self.K.n

    def solve_one(self, b: Felt) -> Felt | None:
        """One solution of P(x) = b, or None when inconsistent."""
        K, p, n = self.K, self.K.p, self.K.n
        y = K.digits(b)
        z = [sum(t * yy for t, yy in zip(row, y)) % p for row in self._transform]
        # consistency: non-pivot rows of the rref are zero, so z there must vanish
        for r in range(self.rank, n):
            if z[r] % p:
                return None
        v = [0] * n
        for r, pc in enumerate(self._pivots):
            v[pc] = z[r] % p
        return K.from_digits(v)

    def solve(self, b: Felt) -> list[Felt]:
        """All solutions of P(x) = b, sorted; empty when inconsistent."""
        x0 = self.solve_one(b)
        if x0 is None:
            return []
        K = self.K
        return sorted(K.add(x0, k) for k in self.kernel)


def lp_solve_affine(K: Field, L: LinPoly, b: Felt) -> list[Felt]:
    """All x with L(x) = b (possibly empty; otherwise a coset of the kernel)."""
    return LinearSolver(K, L).solve(b)


def lp_is_pp(K: Field, L: LinPoly) -> bool:
    """True iff L permutes the field, i.e. its matrix has full rank."""
    return LinearSolver(K, L).is_bijective


def companion(K: Field, P: LinPoly, c: Felt) -> LinPoly:
    """The c-companion of P: coefficient ((1-c)a_i)^(p^(n-i)) at index (n-i) mod n.

    Satisfies the adjoint identity Tr((1-c) alpha P(x)) = Tr(companion(alpha) x).
    """
    one_minus_c = K.sub(1, c)
    out = [0] * K.n
    for i, a in enumerate(P):
        if a:
            j = (K.n - i) % K.n
            out[j] = K.add(out[j], K.frobenius(K.mul(one_minus_c, a), K.n - i))
    return tuple(out)
