import numpy as np
import pytest

from attrmetric.core import Kind
from attrmetric.interpolate import NoiseSpec, default_grid, gen_noise, trace_curve
from attrmetric.reconstruct import delta_cvx

from conftest import random_pm1


def test_noise_is_deterministic():
    a = gen_noise(NoiseSpec(50, 7, seed=3))
    b = gen_noise(NoiseSpec(50, 7, seed=3))
    assert a == b
    assert a != gen_noise(NoiseSpec(50, 7, seed=4))
    assert set(np.unique(a.values)) <= {-1, 1}


def test_noise_is_fair():
    x = gen_noise(NoiseSpec(10000, 1, seed=11)).values[:, 0]
    frac = np.mean(x == 1)
    # four standard deviations of a fair coin over 10^4 draws
    assert abs(frac - 0.5) < 4 * 0.5 / np.sqrt(10000)


def test_zero_noise_columns():
    assert gen_noise(NoiseSpec(5, 0)).shape == (5, 0)


def test_default_grid():
    assert default_grid(8) == [0, 2, 4, 8, 16, 32, 64, 128]
    assert default_grid(1) == [0, 1, 2, 4, 8, 16]
    assert default_grid(5) == [0, 2, 3, 5, 10, 20, 40, 80]


def test_grid_of_only_zero(rng):
    s1 = random_pm1(rng, 20, 4)
    s2 = random_pm1(rng, 20, 3)
    c = trace_curve(s1, s2, grid=[0], trials=3)
    assert c.mean_distance[0] == pytest.approx(delta_cvx(s1, s2).distance)
    assert c.std_distance[0] == pytest.approx(0, abs=1e-12)


def test_jp_copy_starts_at_zero(rng):
    s = random_pm1(rng, 30, 4)
    c = trace_curve(s, s, grid=[0, 2, 4], trials=5, kind=Kind.JP)
    assert c.mean_distance[0] == 0.0
    assert c.mean_distance[1] > 0


@pytest.mark.parametrize("grid", [[], [1, 2], [0, 3, 3], [0, 4, 2]])
def test_bad_grid(rng, grid):
    s = random_pm1(rng, 10, 3)
    with pytest.raises(ValueError):
        trace_curve(s, s, grid=grid, trials=2)


def test_cvx_curve_rises_towards_noise(rng):
    base = random_pm1(rng, 60, 3)
    s1 = np.column_stack([base, base[:, :2] * base[:, 1:3]])
    s2 = base.copy()
    s2[:5] *= -1
    c = trace_curve(s1, s2, grid=[0, 3, 6, 12, 24, 48], trials=20, seed=2)
    # nondecreasing up to 1% of the covered range
    tol = 0.01 * (c.mean_distance.max() - c.mean_distance.min())
    assert np.all(np.diff(c.mean_distance) >= -tol)


def test_curve_bits_reproducible(rng):
    s1 = random_pm1(rng, 25, 4)
    s2 = random_pm1(rng, 25, 2)
    for kind in Kind:
        a = trace_curve(s1, s2, grid=[0, 1, 2, 4], trials=4, kind=kind, seed=9)
        b = trace_curve(s1, s2, grid=[0, 1, 2, 4], trials=4, kind=kind, seed=9)
        assert a.samples.tobytes() == b.samples.tobytes()


def test_grid_point_independent_of_rest_of_grid(rng):
    s1 = random_pm1(rng, 25, 4)
    s2 = random_pm1(rng, 25, 2)
    full = trace_curve(s1, s2, grid=[0, 1, 2, 4], trials=4, seed=9)
    part = trace_curve(s1, s2, grid=[0, 4], trials=4, seed=9)
    np.testing.assert_array_equal(full.samples[3], part.samples[1])
