"""Evaluation functionals on 1-forms and surface functionals.

zeta_a(w) evaluates a component; xi_ab^kappa(w) evaluates the weighted
(a, b) wedge component of kappa * d f at w, with the Gaussian weight
psi(w) = e^{-|w|^2/2} / sqrt(2 pi).  The reproducing-kernel identity
    <xi_ab(w), xi_ab(what)>_{d,kappa} = psi(w) psi(what) e^{w . conj(what)}
(= e^{-|w-what|^2/2} / (2 pi) for real arguments) carries all norm
computations; surface functionals are midpoint-quadrature aggregates of
xi evaluations at the scaled points kappa sigma / 2.
"""

import numpy as np

from . import bargmann as bg
from . import surfaces as sf

WEDGE_PAIRS = sf.WEDGE_PAIRS


def psi_weight(w):
    """psi(w) = e^{-sum |w_i|^2 / 2} / sqrt(2 pi); w shaped (..., 4)."""
    w = np.asarray(w)
    return np.exp(-np.sum(np.abs(w) ** 2, axis=-1) / 2.0) / np.sqrt(2 * np.pi)


def zeta_pair(form, w, a, weighted=True):
    """(f, zeta_a(w)) = psi(w) f_a(w) (or plain f_a(w) if weighted=False)."""
    val = bg.poly_eval(form.get(a, {}), w)
    return val * psi_weight(w) if weighted else val


def xi_pair(form, w, a, b, kappa, weighted=True, spatial_sign=1):
    """(f, xi_ab^kappa(w)): the (a, b) wedge component of kappa d f at w.

    Components follow exterior_d: (0, b) gives kappa d_0 f_b; spatial
    (i, j) gives kappa (-1)^(i j) [d_i f_j - d_j f_i].  weighted=True
    multiplies by psi(w).
    """
    if a == 0:
        poly = bg.dz(form.get(b, {}), 0)
        val = bg.poly_eval(poly, w)
    else:
        p = bg.poly_add(bg.dz(form.get(b, {}), a),
                        bg.dz(form.get(a, {}), b), scale=-1)
        val = bg.poly_eval(p, w) * (spatial_sign * (-1) ** (a * b))
    val = kappa * val
    return val * psi_weight(w) if weighted else val


def xi_kernel(w, what, kappa=None):
    """<xi_ab^kappa(w), xi_ab^kappa(what)>_{d,kappa}; kappa cancels.

    Vectorized over leading axes of w/what (trailing axis length 4).
    Equals e^{-|w - what|^2/2}/(2 pi) for real arguments.
    """
    w = np.asarray(w)
    what = np.asarray(what)
    expo = (-np.sum(np.abs(w) ** 2, axis=-1) / 2.0
            - np.sum(np.abs(what) ** 2, axis=-1) / 2.0
            + np.sum(w * np.conj(what), axis=-1))
    return np.exp(expo) / (2 * np.pi)


class SurfaceFunctional:
    """Quadrature aggregate sum_q sum_pair coef[q, pair] xi_pair(points[q]).

    points are the scaled surface points kappa sigma / 2 at midpoint
    quadrature nodes; coef already includes the quadrature weight.
    """

    def __init__(self, kappa, points, coef, spatial_sign=1):
        self.kappa = kappa
        self.points = np.asarray(points)
        self.coef = np.asarray(coef)
        self.spatial_sign = spatial_sign

    def pair_with(self, form, weighted=True):
        """(f, F) for a MonomialForm f: sum of coef * xi_pair values."""
        total = 0.0
        for k, (a, b) in enumerate(WEDGE_PAIRS):
            col = self.coef[:, k]
            live = np.nonzero(col)[0]
            for q in live:
                total += col[q] * xi_pair(form, self.points[q], a, b,
                                          self.kappa, weighted=weighted,
                                          spatial_sign=self.spatial_sign)
        return total

    def inner(self, other, chunk=2048):
        """<F, G>_{d,kappa} via the xi reproducing kernel (same kappa)."""
        if abs(self.kappa - other.kappa) > 0:
            raise ValueError("functionals built at different kappa")
        total = 0.0
        n = self.points.shape[0]
        for lo in range(0, n, chunk):
            hi = min(lo + chunk, n)
            ker = xi_kernel(self.points[lo:hi, None, :],
                            other.points[None, :, :])
            total += np.einsum("ij,ik,jk->", np.real(ker),
                               self.coef[lo:hi], other.coef)
        return float(total)

    def norm_sq(self):
        return self.inner(self)


def nu_surface(surface, kappa, res=64):
    """nu_S^kappa: weights (kappa^2/4) |J_ab| ds dt at scaled midpoints."""
    s, t = sf._midpoints(res)
    pts = (kappa / 2.0) * surface.point(s, t).reshape(-1, 4)
    absJ = np.abs(sf.jacobian_dets(surface, s, t)).reshape(-1, 6)
    coef = (kappa ** 2 / 4.0) * absJ / res ** 2
    return SurfaceFunctional(kappa, pts, coef)


def curvature_functional(surface, kappa, res=64):
    """F^kappa: like nu but with plain J_ab weights (no kappa^2/4).

    Signed determinants: the vanishing of the leading term of
    <F, F-bar> rests on the Pluecker relation
    J01 J23 - J02 J13 + J03 J12 = 0, which requires orientation signs.
    """
    s, t = sf._midpoints(res)
    pts = (kappa / 2.0) * surface.point(s, t).reshape(-1, 4)
    dets = sf.jacobian_dets(surface, s, t).reshape(-1, 6)
    return SurfaceFunctional(kappa, pts, dets / res ** 2)


def dual_functional(surface, kappa, res=64):
    """F-bar^kappa: the (a,b) slot weighted by eps_{abcd} J_cd (signed)."""
    s, t = sf._midpoints(res)
    pts = (kappa / 2.0) * surface.point(s, t).reshape(-1, 4)
    dets = sf.jacobian_dets(surface, s, t).reshape(-1, 6)
    coef = np.zeros_like(dets)
    for k, pair in enumerate(WEDGE_PAIRS):
        comp, sign = sf.COMPLEMENT[pair]
        kc = WEDGE_PAIRS.index(comp)
        coef[:, k] = sign * dets[:, kc]
    return SurfaceFunctional(kappa, pts, coef / res ** 2)


def abelian_loop_expectation(surface, kappa, res=64):
    """E[exp((1/kappa)(A, nu (x) i))] = exp(-|nu_S^kappa|^2 / (2 kappa^2))."""
    nu = nu_surface(surface, kappa, res=res)
    return float(np.exp(-nu.norm_sq() / (2.0 * kappa ** 2)))


def duality_angle(surface, kappa, res=64):
    """(cos theta, kappa^2 <F, F-bar>, lk estimate (kappa/2)^4 <F,F-bar>/(2pi)^2)."""
    F = curvature_functional(surface, kappa, res=res)
    Fb = dual_functional(surface, kappa, res=res)
    ip = F.inner(Fb)
    n2 = F.norm_sq()
    cos = ip / n2 if n2 > 0 else 0.0
    lk = (kappa / 2.0) ** 4 * ip / (2 * np.pi) ** 2
    return float(cos), float(kappa ** 2 * ip), float(lk)
