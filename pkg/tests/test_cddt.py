import random
from collections import Counter

import numpy as np
import pytest

from cdu.field import Field, gcd_lemma
from cdu import cddt as dt
from cdu.charsum import NonIntegralError


def brute_oracle(K, F, c):
    """Reference counting with scalar field ops only."""
    q = K.q
    counts = [[0] * q for _ in range(q)]
    for a in range(q):
        for x in range(q):
            v = K.sub(int(F[K.add(x, a)]), K.mul(c, int(F[x])))
            counts[a][v] += 1
    return np.array(counts)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2)])
def test_brute_matches_scalar_oracle(p, n):
    K = Field(p, n)
    rng = random.Random(5)
    for _ in range(3):
        F = [rng.randrange(K.q) for _ in range(K.q)]
        for c in (0, 1, 2, K.q - 1):
            got = dt.cddt_brute(K, F, c)
            assert (got.counts == brute_oracle(K, F, c)).all()
            assert got.row_sums_ok()


def test_identity_function_uniformity(gf9):
    F = dt.identity_table(gf9)
    for c in gf9.elements():
        t = dt.cddt_brute(gf9, F, c)
        if c == 1:
            # F(x+a)-F(x) = a: column a holds q, rest 0
            assert t.uniformity == gf9.q
            assert t.counts[2, 2] == gf9.q
        else:
            assert t.uniformity == 1  # PcN: linear bijection in x


def test_uniformity_admissibility_rule(gf8):
    F = dt.identity_table(gf8)
    t1 = dt.cddt_brute(gf8, F, 1)
    # a = 0 rows excluded only at c = 1, yet the max is still q here
    assert t1.uniformity == gf8.q
    assert dt.uniformity_of(t1.counts, 0) == gf8.q  # with a=0 admitted


def test_gold_x5_gf16_uniformity_and_spectrum(gf16):
    # x^5 over GF(2^4): c = 0 count is the preimage count gcd(5, 15) = 5
    F = dt.power_map_table(gf16, 5)
    spec0 = dt.uniformity_spectrum(gf16, F, 0)
    assert max(spec0) == 5
    assert gcd_lemma(2, 2, 4) == 5
    beta, _ = dt.beta_max(gf16, F)
    assert beta == 5


def test_x3_gf8_bijection_case(gf8):
    F = dt.power_map_table(gf8, 3)  # gcd(3,7)=1: bijection
    spec = dt.uniformity_spectrum(gf8, F, 0)
    assert max(spec) == 1
    assert spec[1] == gf8.q * gf8.q


def test_spectrum_pcn(gf9):
    F = dt.identity_table(gf9)
    spec = dt.uniformity_spectrum(gf9, F, 2)
    assert spec == Counter({1: gf9.q * gf9.q})


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (2, 4)])
def test_row_sums_invariant(p, n):
    K = Field(p, n)
    rng = random.Random(11)
    for _ in range(4):
        F = [rng.randrange(K.q) for _ in range(K.q)]
        for c in K.elements():
            assert dt.cddt_brute(K, F, c).row_sums_ok()


def test_char_entry_trivial_identity(gf9):
    F = dt.identity_table(gf9)
    for c in (0, 2, 5):
        for a in (0, 1, 4):
            for b in (0, 3, 8):
                assert dt.cddt_entry_char(gf9, F, c, a, b) == 1


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_char_formula_matches_brute_randomised(p, n):
    K = Field(p, n)
    rng = random.Random(p * 100 + n)
    for _ in range(3):
        F = [rng.randrange(K.q) for _ in range(K.q)]
        for c in {0, 1, 2 % K.q, rng.randrange(K.q)}:
            brute = dt.cddt_brute(K, F, c).counts
            table = dt.cddt_char_table(K, F, c)
            assert (table == brute).all()
            # scalar path spot checks agree with the vector path
            for _ in range(5):
                a, b = rng.randrange(K.q), rng.randrange(K.q)
                assert dt.cddt_entry_char(K, F, c, a, b) == brute[a][b]


def test_char_formula_a0_matches_corollary_form(gf9):
    """At a = 0 the inner sum collapses to chi1(alpha (1-c) F(x))."""
    K = gf9
    rng = random.Random(3)
    F = [rng.randrange(K.q) for _ in range(K.q)]
    chi = K.chi_table()
    for c in (0, 2, 7):
        omc = K.sub(1, c)
        for b in (0, 1, 5):
            total = 0j
            for alpha in K.units():
                u = sum(chi[K.mul(K.mul(alpha, omc), int(F[x]))] for x in K.elements())
                total += chi[K.mul(K.neg(b), alpha)] * u
            corollary = 1 + total / K.q
            assert abs(corollary - dt.cddt_entry_char(K, F, c, 0, b)) < 1e-6


def test_pcn_iff_bijection(gf8, gf9):
    """uniformity == 1 for c != 1 iff every c-derivative is a bijection."""
    for K in (gf8, gf9):
        rng = random.Random(17)
        tables = [dt.identity_table(K), dt.power_map_table(K, 3),
                  [rng.randrange(K.q) for _ in range(K.q)]]
        for F in tables:
            F = dt.as_fn_table(K, F)
            for c in K.elements():
                if c == 1:
                    continue
                uni = dt.cddt_brute(K, F, c).uniformity
                bij = all(
                    len({K.sub(int(F[K.add(x, a)]), K.mul(c, int(F[x]))) for x in K.elements()}) == K.q
                    for a in K.elements())
                assert (uni == 1) == bij


def test_beta_max_argmax_and_empty_range(gf8):
    F = dt.power_map_table(gf8, 3)
    beta, argmax = dt.beta_max(gf8, F)
    assert beta >= 1 and argmax
    for c in argmax:
        assert dt.cddt_brute(gf8, F, c).uniformity == beta
    with pytest.raises(ValueError):
        dt.beta_max(gf8, F, c_values=[])


def test_beta_max_threaded_deterministic(gf16):
    F = dt.power_map_table(gf16, 5)
    assert dt.beta_max(gf16, F, threads=1) == dt.beta_max(gf16, F, threads=4)


def test_as_fn_table_validation(gf8):
    with pytest.raises(ValueError):
        dt.as_fn_table(gf8, [0, 1, 2])
    with pytest.raises(ValueError):
        dt.as_fn_table(gf8, [99] * 8)


def test_exports(gf8):
    t = dt.cddt_brute(gf8, dt.identity_table(gf8), 0)
    csv = dt.cddt_to_csv(t)
    assert csv.splitlines()[0] == "a,b,count"
    assert len(csv.splitlines()) == 1 + 64
    obj = dt.cddt_to_json_obj(t)
    assert obj["uniformity"] == 1 and obj["q"] == 8
    md = dt.cddt_to_markdown(t)
    assert md.count("\n") == 2 + 8
    big = dt.CDDT(0, np.zeros((64, 64), dtype=np.int64))
    with pytest.raises(ValueError):
        dt.cddt_to_markdown(big)
    # admissible-only drops the a = 0 block exactly when c = 1
    t1 = dt.cddt_brute(gf8, dt.identity_table(gf8), 1)
    assert len(dt.cddt_to_csv(t1, admissible_only=True).splitlines()) == 1 + 56
