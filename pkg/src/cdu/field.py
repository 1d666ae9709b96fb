"""Exact arithmetic and structure of small finite fields GF(p^n).

Field elements are plain ints in [0, q).  The base-p digits of the value,
least significant first, are the coefficients of the residue polynomial in
the fixed polynomial basis.  Multiplicative structure is table driven: a
primitive element is found at construction and full exp/log tables are
built, so every operation after that is O(1) lookups plus digit arithmetic.
"""

from __future__ import annotations

import math

import numpy as np

Felt = int  # a field element: int in [0, q)

DEFAULT_MAX_ORDER = 1 << 22
# Largest q for which dense q x q helper tables (add/mul) are materialised.
DENSE_TABLE_LIMIT = 1 << 11


class FieldError(ValueError):
    """Invalid field construction or an operation outside its domain."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    f = 2
    while f * f <= m:
        if m % f == 0:
            return False
        f += 1
    return True


def _distinct_prime_factors(m: int) -> list[int]:
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# Raw polynomial arithmetic over F_p (coefficient lists, lowest degree first).
# Only used during construction; everything afterwards runs on tables.
# ---------------------------------------------------------------------------

def _poly_mul_mod(a: list[int], b: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    n = len(modulus) - 1
    prod = [0] * (2 * n - 1 if n > 1 else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # x^n = -(m_0 + m_1 x + ... + m_{n-1} x^{n-1})
    for deg in range(len(prod) - 1, n - 1, -1):
        c = prod[deg]
        if c:
            prod[deg] = 0
            for j in range(n):
                prod[deg - n + j] = (prod[deg - n + j] - c * modulus[j]) % p
    return prod[:n]


def _poly_pow_p(a: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    """a(x)^p mod modulus, square and multiply."""
    n = len(modulus) - 1
    result = [1] + [0] * (n - 1)
    base = list(a)
    e = p
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, modulus, p)
        e >>= 1
        if e:
            base = _poly_mul_mod(base, base, modulus, p)
    return result


def _poly_strip(a: list[int]) -> list[int]:
    d = len(a) - 1
    while d >= 0 and a[d] == 0:
        d -= 1
    return a[: d + 1]


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_strip(list(a)), _poly_strip(list(b))
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        # a mod b
        a = list(a)
        while len(a) >= len(b) and a:
            coef = a[-1] * inv_lead % p
            shift = len(a) - len(b)
            for i, bi in enumerate(b):
                a[shift + i] = (a[shift + i] - coef * bi) % p
            a = _poly_strip(a)
        a, b = b, a
    return a


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Deterministic gcd-with-Frobenius irreducibility test for a monic polynomial."""
    n = len(modulus) - 1
    if n < 1 or modulus[-1] != 1:
        return False
    if n == 1:
        return True
    x_poly = [0, 1] + [0] * (n - 2)
    frob = {}
    u = list(x_poly)
    for m in range(1, n + 1):
        u = _poly_pow_p(u, modulus, p)
        frob[m] = list(u)
    if frob[n] != x_poly:
        return False
    for r in _distinct_prime_factors(n):
        diff = [(ui - xi) % p for ui, xi in zip(frob[n // r], x_poly)]
        g = _poly_gcd(diff, list(modulus), p)
        if len(g) != 1:
            return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """The monic irreducible of degree n whose non-leading digit vector, read as a
    base-p integer c_0 + c_1*p + ..., is smallest."""
    for v in range(p ** n):
        digs = _int_digits(v, p, n)
        candidate = tuple(digs) + (1,)
        if is_irreducible(candidate, p):
            return candidate
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


def _int_digits(v: int, p: int, n: int) -> list[int]:
    digs = []
    for _ in range(n):
        digs.append(v % p)
        v //= p
    return digs


def _digits_int(digs, p: int) -> int:
    v = 0
    for d in reversed(list(digs)):
        v = v * p + int(d)
    return v


class Field:
    """Immutable description of GF(p^n) with exp/log tables.

    Shareable across threads: all methods are pure functions of the inputs,
    and the internal cache only memoises derived read-only tables.
    """

    def __init__(self, p: int, n: int, modulus=None, max_order: int = DEFAULT_MAX_ORDER):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        q = p ** n
        if q > max_order:
            raise FieldError(f"q = {p}^{n} exceeds the table budget {max_order}")
        self.p = p
        self.n = n
        self.q = q
        if modulus is None:
            modulus = default_modulus(p, n)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree n")
            if not is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self.g = self._find_generator()
        self._build_tables()
        self._cache: dict = {}

    # -- construction helpers ------------------------------------------------

    def _find_generator(self) -> Felt:
        q = self.q
        if q == 2:
            return 1
        order = q - 1
        checks = [order // r for r in _distinct_prime_factors(order)]
        for v in range(2, q):
            digs = _int_digits(v, self.p, self.n)
            if all(self._raw_pow(digs, e) != 1 for e in checks):
                return v
        raise FieldError("no primitive element found")  # unreachable for a field

    def _raw_pow(self, digs: list[int], e: int) -> int:
        result = [1] + [0] * (self.n - 1)
        base = list(digs)
        while e:
            if e & 1:
                result = _poly_mul_mod(result, base, self.modulus, self.p)
            e >>= 1
            if e:
                base = _poly_mul_mod(base, base, self.modulus, self.p)
        return _digits_int(result, self.p)

    def _build_tables(self):
        q, p = self.q, self.p
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        g_digs = _int_digits(self.g, p, self.n)
        cur = [1] + [0] * (self.n - 1)
        for i in range(q - 1):
            v = _digits_int(cur, p)
            exp[i] = v
            log[v] = i
            cur = _poly_mul_mod(cur, g_digs, self.modulus, p)
        if _digits_int(cur, p) != 1:
            raise FieldError("generator does not have order q-1")  # unreachable
        self.exp = exp
        self.log = log

    # -- scalar element operations --------------------------------------------

    def add(self, x: Felt, y: Felt) -> Felt:
        if self.p == 2:
            return x ^ y
        p, out, place = self.p, 0, 1
        while x or y:
            out += ((x + y) % p) * place
            x //= p
            y //= p
            place *= p
        return out

    def neg(self, x: Felt) -> Felt:
        if self.p == 2:
            return x
        p, out, place = self.p, 0, 1
        while x:
            out += (-x % p) * place
            x //= p
            place *= p
        return out

    def sub(self, x: Felt, y: Felt) -> Felt:
        if self.p == 2:
            return x ^ y
        p, out, place = self.p, 0, 1
        while x or y:
            out += ((x - y) % p) * place
            x //= p
            y //= p
            place *= p
        return out

    def mul(self, x: Felt, y: Felt) -> Felt:
        if x == 0 or y == 0:
            return 0
        return int(self.exp[(int(self.log[x]) + int(self.log[y])) % (self.q - 1)])

    def inv(self, x: Felt) -> Felt:
        if x == 0:
            raise FieldError("inverse of zero")
        return int(self.exp[-int(self.log[x]) % (self.q - 1)])

    def pow(self, x: Felt, e: int) -> Felt:
        if x == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise FieldError("negative power of zero")
        return int(self.exp[(int(self.log[x]) * e) % (self.q - 1)])

    def frobenius(self, x: Felt, i: int) -> Felt:
        """x^(p^i); frobenius(x, n) == x."""
        return self.pow(x, self.p ** (i % self.n))

    def trace_abs(self, x: Felt) -> int:
        """Absolute trace sum_i x^(p^i), a prime-field value in [0, p)."""
        acc, y = 0, x
        for _ in range(self.n):
            acc = self.add(acc, y)
            y = self.pow(y, self.p)
        return acc

    def trace_rel(self, x: Felt, d: int) -> Felt:
        """Relative trace into the subfield GF(p^d); requires d | n."""
        if d < 1 or self.n % d != 0:
            raise FieldError(f"degree {d} does not divide n = {self.n}")
        acc, y = 0, x
        step = self.p ** d
        for _ in range(self.n // d):
            acc = self.add(acc, y)
            y = self.pow(y, step)
        return acc

    def dlog(self, x: Felt) -> int:
        """Exponent e with g^e == x, for nonzero x."""
        if x == 0:
            raise FieldError("discrete log of zero")
        return int(self.log[x])

    def digits(self, x: Felt) -> tuple[int, ...]:
        return tuple(_int_digits(x, self.p, self.n))

    def from_digits(self, digs) -> Felt:
        return _digits_int([int(d) % self.p for d in digs], self.p)

    @property
    def neg_one(self) -> Felt:
        return self.p - 1 if self.p > 2 else 1

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def __repr__(self):
        terms = []
        for i in range(self.n, -1, -1):
            c = self.modulus[i]
            if c:
                if i == 0:
                    terms.append(str(c))
                else:
                    s = "x" if i == 1 else f"x^{i}"
                    terms.append(s if c == 1 else f"{c}{s}")
        return f"GF({self.p}^{self.n}) mod {'+'.join(terms)}"

    # -- cached derived tables (used by the sweep kernels and character sums) --

    def _cached(self, key, builder):
        tab = self._cache.get(key)
        if tab is None:
            tab = builder()
            self._cache[key] = tab
        return tab

    def _require_dense(self):
        if self.q > DENSE_TABLE_LIMIT:
            raise FieldError(f"q = {self.q} exceeds the dense-table limit {DENSE_TABLE_LIMIT}")

    def digit_matrix(self) -> np.ndarray:
        """(q, n) matrix of base-p digits for every element."""
        def build():
            xs = np.arange(self.q, dtype=np.int64)
            digs = np.empty((self.q, self.n), dtype=np.int64)
            for i in range(self.n):
                digs[:, i] = xs % self.p
                xs = xs // self.p
            return digs
        return self._cached("digit_matrix", build)

    def vadd(self, xs, y: Felt) -> np.ndarray:
        """Elementwise xs + y for an array of elements."""
        xs = np.asarray(xs, dtype=np.int64)
        if self.p == 2:
            return xs ^ y
        digs = (self.digit_matrix()[xs] + np.array(self.digits(y))) % self.p
        return digs @ self.p ** np.arange(self.n, dtype=np.int64)

    def vadd_arrays(self, xs, ys) -> np.ndarray:
        """Elementwise xs + ys for two arrays of elements."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self.p == 2:
            return xs ^ ys
        dm = self.digit_matrix()
        digs = (dm[xs] + dm[ys]) % self.p
        return digs @ self.p ** np.arange(self.n, dtype=np.int64)

    def vmul_const(self, c: Felt, xs) -> np.ndarray:
        """Elementwise c * xs for an array of elements."""
        xs = np.asarray(xs, dtype=np.int64)
        if c == 0:
            return np.zeros_like(xs)
        out = np.zeros_like(xs)
        nz = xs != 0
        out[nz] = self.exp[(int(self.log[c]) + self.log[xs[nz]]) % (self.q - 1)]
        return out

    def add_table(self) -> np.ndarray:
        def build():
            self._require_dense()
            if self.p == 2:
                xs = np.arange(self.q, dtype=np.int64)
                return xs[:, None] ^ xs[None, :]
            digs = self.digit_matrix()
            s = (digs[:, None, :] + digs[None, :, :]) % self.p
            return s @ self.p ** np.arange(self.n, dtype=np.int64)
        return self._cached("add_table", build)

    def mul_table(self) -> np.ndarray:
        def build():
            self._require_dense()
            tab = np.zeros((self.q, self.q), dtype=np.int64)
            lg = self.log[1:]
            tab[1:, 1:] = self.exp[(lg[:, None] + lg[None, :]) % (self.q - 1)]
            return tab
        return self._cached("mul_table", build)

    def neg_vector(self) -> np.ndarray:
        def build():
            xs = np.arange(self.q, dtype=np.int64)
            if self.p == 2:
                return xs
            digs = (-self.digit_matrix()) % self.p
            return digs @ self.p ** np.arange(self.n, dtype=np.int64)
        return self._cached("neg_vector", build)

    def mul_const_vector(self, c: Felt) -> np.ndarray:
        """Vector of c*x over all x."""
        def build():
            out = np.zeros(self.q, dtype=np.int64)
            if c != 0:
                out[1:] = self.exp[(int(self.log[c]) + self.log[1:]) % (self.q - 1)]
            return out
        return self._cached(("mul_const", c), build)

    def pow_vector(self, e: int) -> np.ndarray:
        """Vector of x^e over all x, for e >= 1."""
        if e < 1:
            raise FieldError("pow_vector requires a positive exponent")
        def build():
            out = np.zeros(self.q, dtype=np.int64)
            out[1:] = self.exp[(self.log[1:] * e) % (self.q - 1)]
            return out
        return self._cached(("pow_vector", e), build)

    def trace_vector(self) -> np.ndarray:
        def build():
            return np.array([self.trace_abs(x) for x in range(self.q)], dtype=np.int64)
        return self._cached("trace_vector", build)

    def chi_table(self) -> np.ndarray:
        """chi1(x) = exp(2*pi*i*Tr(x)/p) for every element."""
        def build():
            tr = self.trace_vector()
            if self.p == 2:
                return np.where(tr == 0, 1.0, -1.0).astype(np.complex128)
            return np.exp(2j * np.pi * tr / self.p)
        return self._cached("chi_table", build)


def make_field(p: int, n: int, modulus=None, max_order: int = DEFAULT_MAX_ORDER) -> Field:
    """Construct GF(p^n); modulus defaults to the lexicographically least irreducible."""
    return Field(p, n, modulus=modulus, max_order=max_order)


def parse_field(spec: str, modulus: str | None = None) -> Field:
    """Parse a field specifier like "2^6" or "9^1"-style "p^n" strings ("p" means n=1)."""
    spec = spec.strip()
    if "^" in spec:
        p_s, n_s = spec.split("^", 1)
        p, n = int(p_s), int(n_s)
    else:
        p, n = int(spec), 1
    mod = None
    if modulus:
        mod = [int(t) for t in modulus.split(",")]
    return Field(p, n, modulus=mod)


def gcd_lemma(p: int, t: int, n: int) -> int:
    """gcd(p^t+1, p^n-1) by case analysis on d = gcd(n,t), e = gcd(n,2t).

    For p = 2 the value is (2^e-1)/(2^d-1); for odd p it is 2 when n/d is odd
    and p^d+1 when n/d is even.
    """
    if not (1 <= t <= n):
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    d = math.gcd(n, t)
    e = math.gcd(n, 2 * t)
    if p == 2:
        return (2 ** e - 1) // (2 ** d - 1)
    if (n // d) % 2 == 1:
        return 2
    return p ** d + 1
