"""Regression against the golden distribution tables under version control."""

import pathlib

import numpy as np
import pytest

from kpzsim import limits

GOLDEN = pathlib.Path(__file__).parent / "golden" / "dist_tables.csv"


def load_golden():
    lines = GOLDEN.read_text().strip().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, data


def test_golden_recomputation():
    header, data = load_golden()
    assert header == ["s", "F_TW", "F_BBP_00", "G_1", "G_2", "G_3"]
    for row in data[::4]:  # every fourth s keeps the regression fast
        s = float(row[0])
        assert limits.tracy_widom_cdf(s) == pytest.approx(row[1], abs=1e-9)
        assert limits.bbp_cdf(s, (0.0, 0.0)) == pytest.approx(row[2], abs=1e-9)
        for m, col in ((1, 3), (2, 4), (3, 5)):
            assert limits.gm_density_tensor(s, m) == pytest.approx(row[col], abs=1e-9)


def test_golden_tables_monotone():
    _, data = load_golden()
    for col in range(1, 6):
        assert np.all(np.diff(data[:, col]) >= -1e-12)
        assert np.all((data[:, col] >= 0.0) & (data[:, col] <= 1.0))
