"""Skew products: families, cocycle iteration, C1 distance, Holder data."""

import math

import pytest

import skewlab as sl
import skewlab.fiber_maps as fm
from skewlab.errors import ConfigurationError
from skewlab.skew import fiber_c1_distance

from _common import (
    LOG_CAT,
    SHEAR_UP,
    bernoulli2,
    cat_map,
    cat_system,
    holder_system,
    identity_map,
    lc_system,
)


def test_fiber_map_at_depth1():
    a, b = cat_map(), fm.StandardMap(1.0)
    system = lc_system(a, b)
    x = sl.periodic_point(system.space, (1,))
    assert system.fiber_map_at(x) is b
    assert system.fiber_map_at(sl.periodic_point(system.space, (0,))) is a


def test_fiber_map_at_depth2():
    space = sl.ShiftSpace(2)
    maps = {w: fm.StandardMap(0.1 * k) for k, w in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)])}
    system = sl.SkewSystem(space, bernoulli2(), sl.LocallyConstantFamily(2, maps))
    x = sl.periodic_point(space, (0, 1))
    assert system.fiber_map_at(x) is maps[(0, 1)]
    assert system.fiber_map_at(x.shift(1)) is maps[(1, 0)]


def test_holder_family_zero_weight_is_constant():
    system = holder_system(eps=0.0)
    x = sl.sample_sequence(system.space, system.measure, 1, 0)
    y = sl.sample_sequence(system.space, system.measure, 1, 1)
    assert system.family.parameter(x) == system.family.parameter(y) == 0.5


def test_missing_table_entry_errors():
    space = sl.ShiftSpace(2)
    family = sl.LocallyConstantFamily(1, {0: cat_map()})
    system = sl.SkewSystem(space, bernoulli2(), family)
    with pytest.raises(ConfigurationError):
        system.fiber_map_at(sl.periodic_point(space, (1,)))


def test_iterate_cocycle_n_zero():
    system = cat_system()
    x = sl.periodic_point(system.space, (0,))
    res = sl.iterate_cocycle(system, x, (0.3, 0.7), 0)
    assert res.end_point == (0.3, 0.7)
    assert res.log_norm == 0.0


def test_iterate_cocycle_cat_exponent():
    system = cat_system()
    x = sl.periodic_point(system.space, (0,))
    res = sl.iterate_cocycle(system, x, (0.3, 0.7), 100)
    assert abs(res.log_norm / 100 - LOG_CAT) < 1e-3


def test_iterate_cocycle_shear_subexponential():
    shear = fm.ToralAutomorphism(SHEAR_UP)
    system = lc_system(shear, shear)
    x = sl.periodic_point(system.space, (0,))
    n = 10000
    res = sl.iterate_cocycle(system, x, (0.3, 0.7), n)
    assert res.log_norm / n < 2e-3
    # oracle: S^n = [[1, n], [0, 1]] exactly
    assert abs(res.log_norm - math.log(fm.mat_norm((1.0, float(n), 0.0, 1.0)))) < 1e-6


def test_renormalization_bookkeeping_is_exact():
    system = cat_system()
    x = sl.periodic_point(system.space, (0, 1))
    t = (0.21, 0.43)
    n = 500
    ref = sl.iterate_cocycle(system, x, t, n, renorm_every=16)
    # block size is capped so the raw product stays in floating range
    for renorm in (1, 7, 50, 100):
        res = sl.iterate_cocycle(system, x, t, n, renorm_every=renorm)
        assert abs(res.log_norm - ref.log_norm) < 1e-8 * n
        assert fm.torus_distance(res.end_point, ref.end_point) < 1e-12
    with pytest.raises(ConfigurationError):
        sl.iterate_cocycle(system, x, t, n, renorm_every=0)


def test_inverse_duality():
    # det = 1 makes ||P^{-1}|| = ||P||: the inverse cocycle along the
    # forward image must report the same log norm
    system = cat_system()
    x = sl.sample_sequence(system.space, system.measure, 17, 0)
    t = (0.37, 0.58)
    n = 1000
    fwd = sl.iterate_cocycle(system, x, t, n)
    bwd = sl.iterate_cocycle(system, x.shift(n), fwd.end_point, -n)
    assert abs(fwd.log_norm - bwd.log_norm) < 1e-6
    assert fm.torus_distance(bwd.end_point, t) < 1e-8


def test_det_defect_stays_small():
    system = holder_system(metric_base=0.5)
    x = sl.sample_sequence(system.space, system.measure, 23, 0)
    res = sl.iterate_cocycle(system, x, (0.11, 0.79), 2000)
    assert res.det_defect < 1e-8


def test_c1_distance_same_system_is_zero():
    system = cat_system()
    assert sl.c1_distance(system, system) < 1e-12


def test_c1_distance_twist_shrinks_with_angle():
    base = cat_system()
    gaps = []
    for T in (1e-1, 1e-2, 1e-3):
        twist = fm.LocalizedTwist((0.25, 0.25), 0.2, T)
        pert = base.with_generator(1, fm.Composite([cat_map(), twist]))
        gaps.append(sl.c1_distance(base, pert))
    assert gaps[0] > gaps[1] > gaps[2] > 0.0


def test_c1_distance_single_generator_gap():
    a, b, b2 = cat_map(), fm.StandardMap(1.0), fm.StandardMap(1.4)
    sys_f = lc_system(a, b)
    sys_g = lc_system(a, b2)
    assert sl.c1_distance(sys_f, sys_g) == pytest.approx(
        fiber_c1_distance(b, b2, 32, 200, 0)
    )


def test_with_generator():
    system = cat_system()
    pert = system.with_generator(1, identity_map())
    x1 = sl.periodic_point(system.space, (1,))
    assert pert.fiber_map_at(x1).matrix == (1.0, 0.0, 0.0, 1.0)
    assert system.fiber_map_at(x1).matrix == (2.0, 1.0, 1.0, 1.0)
    with pytest.raises(ConfigurationError):
        holder_system().with_generator(0, identity_map())


def test_holder_estimate_constant_family():
    h_hat, alpha = sl.holder_estimate(holder_system(eps=0.0), n_pairs=20)
    assert h_hat == 0.0
    assert alpha == 1.0


def test_holder_estimate_locally_constant():
    a, b = cat_map(), fm.StandardMap(1.0)
    system = lc_system(a, b)
    h_hat, alpha = sl.holder_estimate(system, n_pairs=40)
    gap = fiber_c1_distance(a, b, 16, 100, 0)
    assert alpha == 1.0
    assert 0.0 <= h_hat <= gap + 1e-12


def test_holder_estimate_certificate_holds():
    system = holder_system()
    h_hat, alpha = sl.holder_estimate(system, n_pairs=60)
    assert alpha == 1.0
    assert 0.0 < h_hat <= system.family.holder_constant()
