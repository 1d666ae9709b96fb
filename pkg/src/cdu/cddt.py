"""c-Difference Distribution Tables for arbitrary value-table functions.

Two independent routes to the same grid: `cddt_brute` counts solutions of
F(x+a) - c F(x) = b directly, `cddt_entry_char` evaluates the generic
character-sum formula 1 + (1/q) sum_{alpha != 0} chi1(-b alpha) U_alpha
with U_alpha = sum_x chi1(alpha (F(x+a) - c F(x))).
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .charsum import DEFAULT_TOL, NonIntegralError
from .field import Felt, Field


def as_fn_table(K: Field, values) -> np.ndarray:
    """Validate and normalise a length-q value table."""
    F = np.asarray(values, dtype=np.int64)
    if F.shape != (K.q,):
        raise ValueError(f"function table must have length q = {K.q}")
    if F.min() < 0 or F.max() >= K.q:
        raise ValueError("function values must lie in [0, q)")
    return F


def identity_table(K: Field) -> np.ndarray:
    return np.arange(K.q, dtype=np.int64)


def power_map_table(K: Field, e: int) -> np.ndarray:
    """Value table of x -> x^e (e >= 1)."""
    return K.pow_vector(e).astype(np.int64)


@dataclass
class CDDT:
    """The q x q grid of counts for one fixed c, with its uniformity."""

    c: Felt
    counts: np.ndarray
    uniformity: int = dc_field(init=False)

    def __post_init__(self):
        self.uniformity = uniformity_of(self.counts, self.c)

    @property
    def q(self) -> int:
        return self.counts.shape[0]

    def row_sums_ok(self) -> bool:
        return bool((self.counts.sum(axis=1) == self.q).all())


def uniformity_of(counts: np.ndarray, c: Felt) -> int:
    """Max over admissible (a, b): rows with a = 0 count except when c = 1."""
    if c == 1:
        return int(counts[1:].max())
    return int(counts.max())


def cddt_brute(K: Field, F, c: Felt) -> CDDT:
    """Brute-force c-DDT: one pass over (a, x), O(q^2)."""
    return CDDT(c, kernels.ddt_counts(K, F, c))


def _derivative_row(K: Field, F: np.ndarray, c: Felt, a: Felt) -> np.ndarray:
    """Values F(x+a) - c F(x) over all x."""
    xs = np.arange(K.q, dtype=np.int64)
    negmc = K.neg_vector()[K.vmul_const(c, F)]
    return K.vadd_arrays(F[K.vadd(xs, a)], negmc)


def cddt_entry_char(K: Field, F, c: Felt, a: Felt, b: Felt,
                    tol: float = DEFAULT_TOL) -> int:
    """One c-DDT entry by the character formula; must round to the brute count."""
    F = as_fn_table(K, F)
    q = K.q
    chi = K.chi_table()
    da = _derivative_row(K, F, c, a)
    total = 0j
    nb = K.neg(b)
    for alpha in K.units():
        u_alpha = chi[K.vmul_const(alpha, da)].sum()
        total += chi[K.mul(nb, alpha)] * u_alpha
    return int(_round_counts(np.array([1.0 + total / q]), tol)[0])


def _char_weight_matrix(K: Field) -> np.ndarray:
    """W[b, alpha] = chi1(-b * alpha) for alpha != 0; cached per field."""
    def build():
        chi = K.chi_table()
        mul = K.mul_table()
        return chi[mul[K.neg_vector()][:, 1:]]
    return K._cached("char_weight_matrix", build)


def _round_counts(arr: np.ndarray, tol: float) -> np.ndarray:
    re = arr.real
    ri = np.rint(re)
    bad = (np.abs(arr.imag) >= tol) | (np.abs(re - ri) >= tol)
    if bad.any():
        idx = np.argwhere(bad)[0]
        raise NonIntegralError(
            f"character-formula entry {arr[tuple(idx)]!r} is not integral within tol={tol}")
    return ri.astype(np.int64)


def cddt_char_table(K: Field, F, c: Felt, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Whole c-DDT by the character formula (vectorised, same formula as the
    scalar entry)."""
    F = as_fn_table(K, F)
    q = K.q
    chi = K.chi_table()
    mul = K.mul_table()
    W = _char_weight_matrix(K)
    out = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        da = _derivative_row(K, F, c, a)
        U = chi[mul[1:][:, da]].sum(axis=1)
        out[a] = _round_counts(1.0 + (W @ U) / q, tol)
    return out


def uniformity_spectrum(K: Field, F, c: Felt) -> Counter:
    """Multiset {entry value: multiplicity} over all admissible (a, b)."""
    counts = cddt_brute(K, F, c).counts
    rows = counts[1:] if c == 1 else counts
    return Counter(int(v) for v in rows.ravel())


def default_thread_count() -> int:
    env = os.environ.get("CDU_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def beta_max(K: Field, F, c_values=None, threads: int | None = None) -> tuple[int, list[Felt]]:
    """Max uniformity over a c range (default: all c != 1), with every argmax c.

    The per-c sweeps are independent; results are merged in c order so the
    output is deterministic for any thread count.
    """
    if c_values is None:
        c_values = [c for c in K.elements() if c != 1]
    c_values = list(c_values)
    if not c_values:
        raise ValueError("empty c range")
    threads = threads if threads is not None else default_thread_count()

    def one(c):
        return cddt_brute(K, F, c).uniformity

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            unis = list(ex.map(one, c_values))
    else:
        unis = [one(c) for c in c_values]
    beta = max(unis)
    argmax = [c for c, u in zip(c_values, unis) if u == beta]
    return beta, argmax


# -- export formats ----------------------------------------------------------

def cddt_to_csv(cddt: CDDT, admissible_only: bool = False) -> str:
    """CSV of (a, b, count) triples; admissible_only drops a = 0 when c = 1."""
    lines = ["a,b,count"]
    start = 1 if (admissible_only and cddt.c == 1) else 0
    for a in range(start, cddt.q):
        for b in range(cddt.q):
            lines.append(f"{a},{b},{int(cddt.counts[a, b])}")
    return "\n".join(lines) + "\n"


def cddt_to_json_obj(cddt: CDDT) -> dict:
    return {
        "c": int(cddt.c),
        "q": cddt.q,
        "uniformity": cddt.uniformity,
        "counts": [[int(v) for v in row] for row in cddt.counts],
    }


def cddt_to_markdown(cddt: CDDT, max_q: int = 32) -> str:
    if cddt.q > max_q:
        raise ValueError(f"markdown rendering limited to q <= {max_q}")
    header = "| a\\b | " + " | ".join(str(b) for b in range(cddt.q)) + " |"
    sep = "|" + "---|" * (cddt.q + 1)
    rows = [header, sep]
    for a in range(cddt.q):
        rows.append(f"| {a} | " + " | ".join(str(int(v)) for v in cddt.counts[a]) + " |")
    return "\n".join(rows) + "\n"
