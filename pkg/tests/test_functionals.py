import math
from fractions import Fraction

import numpy as np
import pytest

from axialym import bargmann as bg
from axialym import functionals as fl
from axialym import surfaces as sf


def test_psi_weight():
    w = np.zeros(4)
    assert abs(fl.psi_weight(w) - 1.0 / math.sqrt(2 * math.pi)) < 1e-14
    w = np.array([1.0, 1.0, 0.0, 0.0])
    assert abs(fl.psi_weight(w)
               - math.exp(-1.0) / math.sqrt(2 * math.pi)) < 1e-14


def test_zeta_pair_is_weighted_evaluation():
    form = {2: {(1, 0, 0, 0): 2.0}}
    w = np.array([0.3, 0.1, -0.2, 0.5])
    got = fl.zeta_pair(form, w, 2)
    assert abs(got - fl.psi_weight(w) * 2.0 * 0.3) < 1e-14


def test_xi_pair_linearity_and_weighting():
    w = np.array([0.2, -0.4, 0.1, 0.3])
    f = {1: {(0, 2, 0, 0): 1.0}}
    v1 = fl.xi_pair(f, w, 1, 2, kappa=1.0)
    v2 = fl.xi_pair({1: {(0, 2, 0, 0): 2.0}}, w, 1, 2, kappa=1.0)
    assert abs(v2 - 2 * v1) < 1e-14
    v3 = fl.xi_pair(f, w, 1, 2, kappa=3.0)
    assert abs(v3 - 3 * v1) < 1e-14
    unweighted = fl.xi_pair(f, w, 1, 2, kappa=1.0, weighted=False)
    assert abs(v1 - fl.psi_weight(w) * unweighted) < 1e-14


def test_xi_kernel_closed_form():
    w = np.array([0.5, 0.0, 0.0, 0.0])
    v = np.array([0.0, 0.5, 0.0, 0.0])
    want = math.exp(-np.sum((w - v) ** 2) / 2) / (2 * math.pi)
    assert abs(fl.xi_kernel(w, v) - want) < 1e-14


def test_xi_kernel_truncated_basis_oracle():
    # expansion of the exponential kernel over the monomial basis with
    # weights 1/m! reproduces the Gaussian closed form
    monos = bg.all_multi_indices(6)
    rng = np.random.default_rng(1)
    for _ in range(5):
        w = rng.uniform(-1, 1, 4)
        v = rng.uniform(-1, 1, 4)
        w /= max(1.0, np.linalg.norm(w))
        v /= max(1.0, np.linalg.norm(v))
        series = sum(np.prod(w ** np.array(m)) * np.prod(v ** np.array(m))
                     / float(bg.mfact(m)) for m in monos)
        got = fl.psi_weight(w) * fl.psi_weight(v) * series
        assert abs(got - fl.xi_kernel(w, v)) < 1e-3


def test_nu_surface_norm_resolution_stable():
    S = sf.rectangle(1.0, 1.0)
    a = fl.nu_surface(S, 5.0, res=32).norm_sq()
    b = fl.nu_surface(S, 5.0, res=64).norm_sq()
    assert abs(a - b) < 1e-3 * abs(b)


def test_abelian_loop_expectation_limits():
    S = sf.rectangle(1.0, 1.0)
    target = math.exp(-1.0 / 8.0)
    vals = [fl.abelian_loop_expectation(S, k, res=64) for k in (5, 10, 20)]
    devs = [abs(v - target) for v in vals]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.02 * target


def test_duality_angle_planar():
    cos, cross, lk = fl.duality_angle(sf.rectangle(1.0, 1.0), 4.0)
    assert cos == 0.0
    assert cross == 0.0
    assert lk == 0.0


def test_dual_norm_matches():
    S = sf.tilted_plane(math.pi / 6)
    for kappa in (2.0, 8.0):
        F = fl.curvature_functional(S, kappa)
        Fb = fl.dual_functional(S, kappa)
        assert abs(F.norm_sq() - Fb.norm_sq()) < 1e-6 * F.norm_sq()


def test_cross_term_decreases():
    S = sf.polynomial_graph(coeffs2=((1, 1, 0.25),), coeffs3=((2, 0, 0.2),))
    vals = [abs(fl.duality_angle(S, k, res=48)[1]) for k in (5.0, 10.0, 20.0)]
    assert vals[0] > vals[1] > vals[2]
