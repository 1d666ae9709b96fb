"""Cross-verification suites: every closed-form route against its oracle.

Each suite returns a SuiteResult with counterexamples (never just a bool),
so the CLI can emit a machine-readable report and the test suite can assert
emptiness.  Scopes default to the full verification grid; pass smaller
field lists for smoke runs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import cddt as _cddt
from . import gold as _gold
from .charsum import NonIntegralError, WeilParams, chi1, weil_closed, weil_direct
from .field import Field
from .linpoly import LinearSolver, from_terms, identity, lp_eval, mono, zero

DEFAULT_TOL = 1e-6

WEIL_FIELDS = [(3, 2), (3, 3), (3, 4), (5, 2),
               (2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (2, 8)]
THREEWAY_FIELDS = [(3, 2), (3, 3), (5, 2), (2, 3), (2, 4), (2, 6)]
SMALL_FIELDS = [(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2)]
BLUHER_CASES = [(2, 1, 4), (2, 1, 5), (2, 1, 6), (3, 1, 4), (3, 1, 3), (2, 2, 6)]
BOUND_CASES = [(p, n, k, t)
               for p in (2, 3) for n in (4, 5, 6) if p ** n <= 729
               for k in range(1, n) for t in (0, k)]


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str):
        if len(self.failures) < 50:
            self.failures.append(msg)
        else:
            self.failures[-1] = "... additional failures suppressed"

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "failures": list(self.failures), "notes": list(self.notes)}


def _fields(specs) -> list[Field]:
    return [Field(p, n) for p, n in specs]


def suite_orthogonality(field_specs=None) -> SuiteResult:
    """sum_x chi1(alpha x) = q [alpha = 0], exhaustive over small fields."""
    res = SuiteResult("orthogonality")
    for K in _fields(field_specs or SMALL_FIELDS):
        chi = K.chi_table()
        for alpha in K.elements():
            s = chi[K.vmul_const(alpha, np.arange(K.q))].sum()
            expect = K.q if alpha == 0 else 0.0
            res.checked += 1
            if abs(s - expect) > 1e-7:
                res.fail(f"GF({K.p}^{K.n}) alpha={alpha}: sum={s}")
    return res


def suite_weil(field_specs=None, tol: float = DEFAULT_TOL) -> SuiteResult:
    """weil_closed == weil_direct exhaustively over (k, A, B)."""
    res = SuiteResult("weil")
    worst = 0.0
    for K in _fields(field_specs or WEIL_FIELDS):
        for k in range(1, K.n):
            for A in K.units():
                for B in K.elements():
                    w = WeilParams(k, A, B)
                    err = abs(weil_direct(K, w) - weil_closed(K, w))
                    worst = max(worst, err)
                    res.checked += 1
                    if err > tol:
                        res.fail(f"GF({K.p}^{K.n}) k={k} A={A} B={B}: |diff|={err:.3g}")
    res.notes.append(f"max |closed - direct| = {worst:.3e}")
    return res


def _threeway_perturbations(K: Field, k: int):
    return [("zero", zero(K)), ("identity", identity(K)),
            (f"mono:{k}", mono(K, k)), ("bin:0,1", from_terms(K, [(0, 1), (1, 1)]))]


def suite_entry_threeway(field_specs=None, n_c: int = 8, seed: int = 2024,
                         tol: float = DEFAULT_TOL, variant: str | None = None) -> SuiteResult:
    """brute == character formula == closed form on every (a, b) entry.

    variant injects a rejected formula convention ("t1" or "grouping") so the
    suite can demonstrate it fails; None runs the resolved conventions.
    """
    res = SuiteResult("entry-threeway")
    rng = random.Random(seed)
    for K in _fields(field_specs or THREEWAY_FIELDS):
        cs = set()
        candidates = [c for c in K.elements() if c != 1]
        while len(cs) < min(n_c, len(candidates)):
            cs.add(rng.choice(candidates))
        for k in range(1, K.n):
            for pname, P in _threeway_perturbations(K, k):
                for c in sorted(cs):
                    spec = _gold.make_gold_spec(K, k, P, c)
                    F = _gold.gold_table(K, spec)
                    brute = _cddt.cddt_brute(K, F, c).counts
                    tag = f"GF({K.p}^{K.n}) k={k} P={pname} c={c}"
                    try:
                        char = _cddt.cddt_char_table(K, F, c, tol)
                    except NonIntegralError as exc:
                        res.fail(f"{tag}: char formula {exc}")
                        continue
                    try:
                        closed = _closed_table_variant(K, spec, tol, variant)
                    except NonIntegralError as exc:
                        res.fail(f"{tag}: closed form {exc}")
                        continue
                    res.checked += brute.size
                    if not (char == brute).all():
                        a, b = np.argwhere(char != brute)[0]
                        res.fail(f"{tag}: char({a},{b})={char[a, b]} brute={brute[a, b]}")
                    if not (closed == brute).all():
                        a, b = np.argwhere(closed != brute)[0]
                        res.fail(f"{tag}: closed({a},{b})={closed[a, b]} brute={brute[a, b]}")
    return res


def _closed_table_variant(K, spec, tol, variant):
    if variant is None:
        return _gold.closed_table(K, spec, tol)
    q = K.q
    out = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            if K.p == 2:
                out[a, b] = _gold.entry_closed_even(
                    K, spec, a, b, tol,
                    grouping="printed" if variant == "grouping" else "resolved")
            else:
                d = math.gcd(K.n, spec.k)
                t1 = K.p ** d - 1 if variant == "t1" else None
                out[a, b] = _gold.entry_closed_odd(K, spec, a, b, tol, t1_factor=t1)
    return out


def suite_bluher(cases=None) -> SuiteResult:
    """Brute root-count distribution of y^(p^k+1) - By + B vs the closed count."""
    res = SuiteResult("bluher")
    for p, k, n in cases or BLUHER_CASES:
        K = Field(p, n)
        count, witnesses = _gold.bluher_count(K, k)
        expect = _gold.bluher_expected(p, k, n)
        res.checked += 1
        if count != expect:
            res.fail(f"(p,k,n)=({p},{k},{n}): counted {count}, formula {expect}")
        if len(witnesses) != count:
            res.fail(f"(p,k,n)=({p},{k},{n}): witness list inconsistent")
    return res


def suite_bounds(cases=None) -> SuiteResult:
    """Uniformity bound sweeps for G = x^(p^k+1) + x^(p^t)."""
    res = SuiteResult("bounds")
    for p, n, k, t in cases or BOUND_CASES:
        K = Field(p, n)
        rep = _gold.thm21_bounds(K, k, t)
        res.checked += len(rep.per_c)
        if rep.hypothesis_failures:
            res.notes.append(f"(p,n,k,t)=({p},{n},{k},{t}): skipped assertions, "
                             f"hypotheses failed: {rep.hypothesis_failures}")
            continue
        if rep.upper_violations:
            res.fail(f"(p,n,k,t)=({p},{n},{k},{t}): upper bound broken {rep.upper_violations[:3]}")
        if rep.lower_violations:
            res.fail(f"(p,n,k,t)=({p},{n},{k},{t}): lower bound broken {rep.lower_violations[:3]}")
        if rep.special_attained is False:
            res.fail(f"(p,n,k,t)=({p},{n},{k},{t}): special lower bound never attained")
    return res


def suite_properties(field_specs=None, seed: int = 99) -> SuiteResult:
    """Structural invariants: row sums, PcN iff bijective derivatives, adjoint
    identity, X_a solution-count trichotomy, coset choice-independence."""
    res = SuiteResult("properties")
    rng = random.Random(seed)
    for K in _fields(field_specs or [(2, 3), (3, 2), (2, 4), (3, 3)]):
        # row sums + PcN equivalence on random tables
        for _ in range(2):
            F = np.array([rng.randrange(K.q) for _ in range(K.q)])
            for c in K.elements():
                t = _cddt.cddt_brute(K, F, c)
                res.checked += 1
                if not t.row_sums_ok():
                    res.fail(f"GF({K.p}^{K.n}) c={c}: row sums broken")
                if c != 1:
                    bij = all(len({K.sub(int(F[K.add(x, a)]), K.mul(c, int(F[x])))
                                   for x in K.elements()}) == K.q
                              for a in K.elements())
                    if (t.uniformity == 1) != bij:
                        res.fail(f"GF({K.p}^{K.n}) c={c}: PcN/bijection mismatch")
        # companion adjoint identity
        from .linpoly import companion
        for _ in range(2):
            P = tuple(rng.randrange(K.q) for _ in range(K.n))
            c = rng.randrange(K.q)
            Pstar = companion(K, P, c)
            omc = K.sub(1, c)
            for alpha in K.elements():
                pa = lp_eval(K, Pstar, alpha)
                for x in K.elements():
                    res.checked += 1
                    if (K.trace_abs(K.mul(K.mul(alpha, lp_eval(K, P, x)), omc))
                            != K.trace_abs(K.mul(pa, x))):
                        res.fail(f"GF({K.p}^{K.n}): adjoint identity broken")
                        break
        # X_a trichotomy: counts lie in {0, 1, p^e}, e = gcd(n, 2k)
        k = 1 if K.n == 2 else rng.randrange(1, K.n)
        e = math.gcd(K.n, 2 * k)
        P = tuple(rng.randrange(K.q) for _ in range(K.n))
        c = rng.choice([c for c in range(K.q) if c != 1])
        spec = _gold.make_gold_spec(K, k, P, c)
        from .linpoly import companion as _companion
        pstar = _companion(K, P, c)
        for alpha in K.units():
            count = sum(1 for a in K.elements()
                        if _gold._b_alpha(K, spec, a, alpha)[1] == 0)
            M = from_terms(K, [(k, alpha), (K.n - k, K.frobenius(alpha, K.n - k))])
            sols = LinearSolver(K, M).solve(K.neg(lp_eval(K, pstar, alpha)))
            res.checked += 1
            if count != len(sols) or count not in (0, 1, K.p ** e):
                res.fail(f"GF({K.p}^{K.n}) alpha={alpha}: trichotomy broken (count={count})")
        # coset choice-independence, in the branches that consume the phase
        # (odd p, or characteristic 2 with even n/d)
        pk = K.p ** k
        if K.p != 2 or (K.n // math.gcd(K.n, k)) % 2 == 0:
            for alpha in list(K.units())[:8]:
                A, B = _gold._b_alpha(K, spec, 1 % K.q, alpha)
                if A == 0:
                    continue
                solver = _gold._alpha_solver(K, k, A)
                if solver.is_bijective:
                    continue
                sols = solver.solve(K.pow(B, pk) if B else 0)
                if len(sols) > 1:
                    vals = {complex(chi1(K, K.mul(A, K.pow(x, pk + 1) if x else 0)))
                            for x in sols}
                    res.checked += 1
                    if len(vals) != 1:
                        res.fail(f"GF({K.p}^{K.n}) alpha={alpha}: coset phase not constant")
    return res


SUITES = {
    "orthogonality": suite_orthogonality,
    "weil": suite_weil,
    "threeway": suite_entry_threeway,
    "bluher": suite_bluher,
    "bounds": suite_bounds,
    "properties": suite_properties,
}


def run_suites(names=None, quick: bool = False, seed: int = 2024,
               tol: float = DEFAULT_TOL, variant: str | None = None) -> dict:
    """Run the named suites (all by default) and report pass/fail with
    counterexamples."""
    names = list(names) if names else list(SUITES)
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        if name == "orthogonality":
            r = suite_orthogonality()
        elif name == "weil":
            specs = [(3, 2), (2, 3), (2, 4)] if quick else None
            r = suite_weil(specs, tol)
        elif name == "threeway":
            specs = [(3, 2), (2, 3)] if quick else None
            r = suite_entry_threeway(specs, n_c=4 if quick else 8,
                                     seed=seed, tol=tol, variant=variant)
        elif name == "bluher":
            r = suite_bluher()
        elif name == "bounds":
            cases = [(2, 4, 1, 0), (3, 4, 1, 0)] if quick else None
            r = suite_bounds(cases)
        else:
            r = suite_properties(seed=seed)
        results.append(r)
    return {
        "passed": all(r.passed for r in results),
        "suites": [r.as_dict() for r in results],
    }
