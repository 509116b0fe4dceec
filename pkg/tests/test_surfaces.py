import math

import numpy as np
import pytest

from axialym import surfaces as sf


def test_unit_square_area():
    assert abs(sf.area(sf.rectangle(1.0, 1.0)) - 1.0) < 1e-9


def test_rectangle_area():
    assert abs(sf.area(sf.rectangle(2.0, 1.5)) - 3.0) < 1e-9


def test_tilted_plane_area():
    for theta in (0.0, math.pi / 6, math.pi / 3):
        assert abs(sf.area(sf.tilted_plane(theta)) - 1.0) < 1e-6


def test_reparametrization_invariance():
    base = sf.rectangle(1.0, 1.0)

    def fn(s, t):
        return base.fn(s ** 2, 0.5 * (1 - np.cos(np.pi * t)))
    warped = sf.SurfaceParam(fn, name="warped square")
    assert abs(sf.area(warped, res=1024) - 1.0) < 1e-6


def test_spherical_cap_area():
    # cap of polar angle a on a radius-r sphere: 2 pi r^2 (1 - cos a)
    r, ang = 1.0, math.pi / 3
    want = 2 * math.pi * r * r * (1 - math.cos(ang))
    assert abs(sf.area(sf.spherical_cap(r, ang), res=256) - want) < 1e-3


def test_eps4():
    assert sf.eps4(0, 1, 2, 3) == 1
    assert sf.eps4(1, 0, 2, 3) == -1
    assert sf.eps4(0, 0, 2, 3) == 0


def test_complement_signs():
    for pair, (comp, sign) in sf.COMPLEMENT.items():
        assert sf.eps4(*pair, *comp) == sign


def test_jacobian_dets_unit_square():
    S = sf.rectangle(1.0, 1.0)
    dets = sf.jacobian_dets(S, np.array(0.5), np.array(0.5))
    k01 = sf.WEDGE_PAIRS.index((0, 1))
    assert abs(dets[k01] - 1.0) < 1e-9
    assert np.max(np.abs(np.delete(dets, k01))) < 1e-9


def test_heat_kernel_area_trend():
    S = sf.rectangle(1.0, 1.0)
    devs = [abs(sf.heat_kernel_area(S, k, res=64) / (2 * math.pi) - 1.0)
            for k in (5.0, 10.0, 20.0)]
    assert devs[0] > devs[1] > devs[2]


def test_local_limit_check():
    S = sf.rectangle(1.0, 1.0)
    got, want = sf.local_limit_check(S, (0, 1), 0.5, 0.5, 40.0, res=256)
    assert abs(got - want) < 0.05 * abs(want)


def test_make_surface():
    S = sf.make_surface({"shape": "rectangle", "R": 2.0, "T": 1.0})
    assert abs(sf.area(S) - 2.0) < 1e-9
    with pytest.raises(ValueError):
        sf.make_surface({"shape": "moebius"})
