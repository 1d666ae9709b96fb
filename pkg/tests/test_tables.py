import pytest

from cdu import tables


def test_row_order():
    assert tables.row_order(3) == [(0, 0), (0, 1), (0, 2), (1, 2)]
    assert len(tables.row_order(6)) == 1 + 15


def test_expected_grid_shape():
    # 38 parameter rows across n = 3..6
    assert sum(len(v) for v in tables.EXPECTED_BETA.values()) == 38
    for n, rows in tables.EXPECTED_BETA.items():
        assert set(rows) == set(tables.row_order(n))
        for vals in rows.values():
            assert len(vals) == n - 1


def test_sweep_n3_matches_reference():
    grid = tables.sweep_beta_grid(3)
    assert tables.compare_grid(3, grid) == []
    assert grid[(0, 1)] == (3, 4)
    assert grid[(0, 2)] == (4, 3)


def test_sweep_threaded_deterministic():
    assert tables.sweep_beta_grid(4, threads=4) == tables.sweep_beta_grid(4, threads=1)


def test_sweep_frozen_cells_n4():
    grid = tables.sweep_beta_grid(4)
    assert grid[(0, 3)][0] == 6   # k = 1
    assert grid[(2, 3)][1] == 5   # k = 2
    assert tables.compare_grid(4, grid) == []


def test_compare_grid_flags_mismatch():
    grid = tables.sweep_beta_grid(3)
    bad = dict(grid)
    bad[(0, 1)] = (99, 4)
    diffs = tables.compare_grid(3, bad)
    assert len(diffs) == 1 and diffs[0]["k"] == 1 and diffs[0]["computed"] == 99


def test_renderers():
    grid = tables.sweep_beta_grid(3)
    md = tables.render_grid_markdown(3, grid)
    assert "| (0,0) | 3 | 3 |" in md
    csv = tables.render_grid_csv(3, grid)
    assert csv.splitlines()[0] == "n,i,j,k1,k2"
    assert "3,0,1,3,4" in csv
