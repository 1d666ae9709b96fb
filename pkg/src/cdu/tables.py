"""Maximal c-differential uniformity sweeps for binomial-perturbed Gold maps
over GF(2^n), and the frozen reference grids they must reproduce.

A grid covers G(x) = x^(2^k+1) + x^(2^i) + x^(2^j) for all 0 <= i < j < n and
1 <= k < n, plus the unperturbed Gold row labelled (0,0).  beta is the max
uniformity over all c != 1 (c = 0 included; a CLI flag restricts the range
for sensitivity checks).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .cddt import beta_max, default_thread_count
from .field import Field
from .gold import gold_table, make_gold_spec
from .linpoly import from_terms, zero

# beta values for n = 3..6, keyed by perturbation pair (i, j) with one value
# per k = 1..n-1; row (0, 0) is the plain Gold function.
EXPECTED_BETA: dict[int, dict[tuple[int, int], tuple[int, ...]]] = {
    3: {
        (0, 0): (3, 3),
        (0, 1): (3, 4),
        (0, 2): (4, 3),
        (1, 2): (4, 4),
    },
    4: {
        (0, 0): (3, 5, 3),
        (0, 1): (3, 5, 4),
        (0, 2): (4, 5, 6),
        (0, 3): (6, 5, 3),
        (1, 2): (4, 5, 5),
        (1, 3): (6, 5, 4),
        (2, 3): (5, 5, 6),
    },
    5: {
        (0, 0): (3, 3, 3, 3),
        (0, 1): (3, 5, 5, 4),
        (0, 2): (4, 3, 6, 6),
        (0, 3): (6, 5, 3, 6),
        (0, 4): (6, 6, 5, 3),
        (1, 2): (4, 5, 6, 7),
        (1, 3): (6, 7, 5, 6),
        (1, 4): (6, 6, 7, 4),
        (2, 3): (7, 5, 6, 5),
        (2, 4): (6, 6, 6, 6),
        (3, 4): (5, 6, 5, 6),
    },
    6: {
        (0, 0): (3, 5, 9, 5, 3),
        (0, 1): (3, 5, 9, 5, 4),
        (0, 2): (4, 5, 6, 5, 7),
        (0, 3): (7, 5, 9, 10, 7),
        (0, 4): (7, 5, 9, 5, 6),
        (0, 5): (6, 10, 6, 5, 3),
        (1, 2): (4, 5, 8, 7, 6),
        (1, 3): (7, 8, 9, 5, 6),
        (1, 4): (7, 6, 15, 5, 8),
        (1, 5): (6, 10, 6, 8, 4),
        (2, 3): (6, 5, 6, 10, 9),
        (2, 4): (6, 5, 6, 5, 7),
        (2, 5): (8, 10, 13, 6, 7),
        (3, 4): (9, 7, 9, 10, 7),
        (3, 5): (7, 5, 6, 10, 7),
        (4, 5): (7, 10, 8, 5, 6),
    },
}

SWEEP_DEGREES = tuple(sorted(EXPECTED_BETA))


def row_order(n: int) -> list[tuple[int, int]]:
    """(0,0) first, then lexicographic (i, j) pairs."""
    return [(0, 0)] + [(i, j) for i in range(n) for j in range(i + 1, n)]


def perturbation(K: Field, i: int, j: int):
    if (i, j) == (0, 0):
        return zero(K)
    return from_terms(K, [(i, 1), (j, 1)])


def sweep_beta_grid(n: int, include_zero_c: bool = True,
                    threads: int | None = None) -> dict[tuple[int, int], tuple[int, ...]]:
    """beta for every ((i, j), k) cell over GF(2^n), merged in fixed row order."""
    K = Field(2, n)
    if include_zero_c:
        cs = [c for c in K.elements() if c != 1]
    else:
        cs = [c for c in K.elements() if c not in (0, 1)]
    threads = threads if threads is not None else default_thread_count()
    cells = [((i, j), k) for (i, j) in row_order(n) for k in range(1, n)]

    def one(cell):
        (i, j), k = cell
        F = gold_table(K, make_gold_spec(K, k, perturbation(K, i, j), 0))
        return beta_max(K, F, c_values=cs, threads=1)[0]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            betas = list(ex.map(one, cells))
    else:
        betas = [one(cell) for cell in cells]

    grid: dict[tuple[int, int], list[int]] = {ij: [] for ij in row_order(n)}
    for (ij, _k), beta in zip(cells, betas):
        grid[ij].append(beta)
    return {ij: tuple(v) for ij, v in grid.items()}


def compare_grid(n: int, grid) -> list[dict]:
    """Cells where a computed grid deviates from the frozen reference."""
    diffs = []
    for ij, expect in EXPECTED_BETA[n].items():
        got = grid.get(ij)
        for kidx, k in enumerate(range(1, n)):
            g = None if got is None else got[kidx]
            if g != expect[kidx]:
                diffs.append({"n": n, "i": ij[0], "j": ij[1], "k": k,
                              "expected": expect[kidx], "computed": g})
    return diffs


def render_grid_markdown(n: int, grid) -> str:
    ks = list(range(1, n))
    lines = [f"Maximal c-differential uniformity, n = {n}", ""]
    lines.append("| (i,j) | " + " | ".join(f"k={k}" for k in ks) + " |")
    lines.append("|" + "---|" * (len(ks) + 1))
    for ij in row_order(n):
        lines.append(f"| ({ij[0]},{ij[1]}) | " + " | ".join(str(v) for v in grid[ij]) + " |")
    return "\n".join(lines) + "\n"


def render_grid_csv(n: int, grid) -> str:
    ks = list(range(1, n))
    lines = ["n,i,j," + ",".join(f"k{k}" for k in ks)]
    for ij in row_order(n):
        lines.append(f"{n},{ij[0]},{ij[1]}," + ",".join(str(v) for v in grid[ij]))
    return "\n".join(lines) + "\n"
