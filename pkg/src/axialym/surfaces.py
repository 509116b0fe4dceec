"""Parametrized surfaces in R^4: Jacobians, area densities, heat-kernel area.

A surface is a map sigma: [0,1]^2 -> R^4.  For each coordinate pair
(a, b) the 2x2 Jacobian has rows (ds sigma_a, dt sigma_a) and
(ds sigma_b, dt sigma_b); |J_ab| denotes |det J_ab|.
"""

import numpy as np

WEDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
# complementary pair and the permutation sign eps_{a b c d} for (a,b,c,d)
COMPLEMENT = {(0, 1): ((2, 3), 1.0), (0, 2): ((1, 3), -1.0),
              (0, 3): ((1, 2), 1.0), (1, 2): ((0, 3), 1.0),
              (1, 3): ((0, 2), -1.0), (2, 3): ((0, 1), 1.0)}

_FD_STEP = 1e-6


def eps4(a, b, c, d):
    """Totally antisymmetric symbol on four indices."""
    perm = (a, b, c, d)
    if len(set(perm)) < 4:
        return 0
    sign = 1
    lst = list(perm)
    for i in range(3):
        for j in range(3 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return sign


class SurfaceParam:
    """sigma: [0,1]^2 -> R^4 with optional analytic derivatives.

    fn(s, t) must accept scalar or broadcasting array arguments and return
    an array with a trailing axis of length 4.  If dfn is None derivatives
    use central differences with step 1e-6 (one-sided at the boundary).
    """

    def __init__(self, fn, dfn=None, name="surface"):
        self.fn = fn
        self.dfn = dfn
        self.name = name

    def point(self, s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        return np.asarray(self.fn(s, t), dtype=float)

    def derivs(self, s, t):
        """(d sigma/ds, d sigma/dt), each shaped like point(s, t)."""
        if self.dfn is not None:
            ds, dt = self.dfn(np.asarray(s, float), np.asarray(t, float))
            return np.asarray(ds, float), np.asarray(dt, float)
        h = _FD_STEP
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        sp, sm = np.minimum(s + h, 1.0), np.maximum(s - h, 0.0)
        tp, tm = np.minimum(t + h, 1.0), np.maximum(t - h, 0.0)
        ds = (self.point(sp, t) - self.point(sm, t)) / (sp - sm)[..., None]
        dt = (self.point(s, tp) - self.point(s, tm)) / (tp - tm)[..., None]
        return ds, dt


def rectangle(R=1.0, T=1.0):
    """Flat R x T rectangle in the x0-x1 plane."""
    def fn(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        out = np.zeros(s.shape + (4,))
        out[..., 0] = R * s
        out[..., 1] = T * t
        return out

    def dfn(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        ds = np.zeros(s.shape + (4,))
        dt = np.zeros(s.shape + (4,))
        ds[..., 0] = R
        dt[..., 1] = T
        return ds, dt

    return SurfaceParam(fn, dfn, name=f"rectangle(R={R},T={T})")


def tilted_plane(theta):
    """Unit square tilted by theta out of the x0-x1 plane; area 1."""
    ct, st = np.cos(theta), np.sin(theta)

    def fn(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        out = np.zeros(s.shape + (4,))
        out[..., 0] = s
        out[..., 1] = t * ct
        out[..., 2] = t * st
        return out

    def dfn(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        ds = np.zeros(s.shape + (4,))
        dt = np.zeros(s.shape + (4,))
        ds[..., 0] = 1.0
        dt[..., 1] = ct
        dt[..., 2] = st
        return ds, dt

    return SurfaceParam(fn, dfn, name=f"tilted_plane(theta={theta})")


def spherical_cap(radius=1.0, angle=np.pi / 3):
    """Cap of a 2-sphere in the x0-x1-x2 subspace; area 2 pi r^2 (1-cos a)."""
    def fn(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        phi = angle * t
        lam = 2 * np.pi * s
        out = np.zeros(s.shape + (4,))
        out[..., 0] = radius * np.sin(phi) * np.cos(lam)
        out[..., 1] = radius * np.sin(phi) * np.sin(lam)
        out[..., 2] = radius * np.cos(phi)
        return out

    return SurfaceParam(fn, name=f"spherical_cap(r={radius},a={angle})")


def polynomial_graph(coeffs2=((0, 0, 0.0),), coeffs3=()):
    """Graph surface (s, t, f(s,t), g(s,t)) with polynomial f, g.

    coeffs are iterables of (i, j, c) meaning c * s^i t^j.
    """
    c2 = [tuple(c) for c in coeffs2]
    c3 = [tuple(c) for c in coeffs3]

    def horner(cs, s, t):
        tot = np.zeros(np.broadcast(s, t).shape)
        for i, j, c in cs:
            tot = tot + c * s ** i * t ** j
        return tot

    def fn(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        out = np.zeros(s.shape + (4,))
        out[..., 0] = s
        out[..., 1] = t
        out[..., 2] = horner(c2, s, t)
        out[..., 3] = horner(c3, s, t)
        return out

    def dfn(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        ds = np.zeros(s.shape + (4,))
        dt = np.zeros(s.shape + (4,))
        ds[..., 0] = 1.0
        dt[..., 1] = 1.0
        for comp, cs in ((2, c2), (3, c3)):
            for i, j, c in cs:
                if i:
                    ds[..., comp] += c * i * s ** (i - 1) * t ** j
                if j:
                    dt[..., comp] += c * j * s ** i * t ** (j - 1)
        return ds, dt

    return SurfaceParam(fn, dfn, name="polynomial_graph")


BUILTIN_SURFACES = {
    "rectangle": rectangle,
    "tilted_plane": tilted_plane,
    "spherical_cap": spherical_cap,
    "polynomial_graph": polynomial_graph,
}


def make_surface(spec):
    """Build a surface from a config dict {'shape': name, **params}."""
    spec = dict(spec)
    shape = spec.pop("shape")
    if shape not in BUILTIN_SURFACES:
        raise ValueError(f"unknown surface shape {shape!r}")
    return BUILTIN_SURFACES[shape](**spec)


# ---------------------------------------------------------------------------
# Jacobians and areas

def jacobians(surface, s, t):
    """Stack of six 2x2 Jacobians, shape (..., 6, 2, 2), pair order WEDGE_PAIRS."""
    ds, dt = surface.derivs(s, t)
    out = np.empty(ds.shape[:-1] + (6, 2, 2))
    for k, (a, b) in enumerate(WEDGE_PAIRS):
        out[..., k, 0, 0] = ds[..., a]
        out[..., k, 0, 1] = dt[..., a]
        out[..., k, 1, 0] = ds[..., b]
        out[..., k, 1, 1] = dt[..., b]
    return out


def jacobian_dets(surface, s, t):
    """Signed dets of the six pair Jacobians, shape (..., 6)."""
    J = jacobians(surface, s, t)
    return J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]


def rho_weighted_jacobian(surface, s, t):
    """|J_ab| rho^ab = |J_ab|^2 / sqrt(det[J_ab^T J_ab + J_cd^T J_cd]).

    Inverse-free form of the overlap weight (cd is the complementary
    pair); returns shape (..., 6).  Degenerate pairs give 0.
    """
    J = jacobians(surface, s, t)
    dets = J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]
    JtJ = np.einsum("...kji,...kjl->...kil", J, J)
    out = np.zeros(dets.shape)
    for k, pair in enumerate(WEDGE_PAIRS):
        kc = WEDGE_PAIRS.index(COMPLEMENT[pair][0])
        M = JtJ[..., k, :, :] + JtJ[..., kc, :, :]
        den = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
        num = dets[..., k] ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.where(den > 0, num / np.sqrt(np.maximum(den, 1e-300)), 0.0)
        out[..., k] = val
    return out


def _midpoints(res):
    x = (np.arange(res) + 0.5) / res
    return np.meshgrid(x, x, indexing="ij")


def area(surface, res=64):
    """Overlap-weighted area: sum_{a<b} int |J_ab| rho^ab ds dt (midpoint rule)."""
    s, t = _midpoints(res)
    return float(np.sum(rho_weighted_jacobian(surface, s, t)) / res ** 2)


def heat_kernel_area(surface, kappa, res=64, chunk=2048):
    """sum_{a<b} (kappa^2/4) iint e^{-kappa^2 |sigma - sigma'|^2 / 8} |J||J'|.

    Approaches 2 pi * area(surface) as kappa -> infinity.
    """
    s, t = _midpoints(res)
    pts = surface.point(s, t).reshape(-1, 4)
    absJ = np.abs(jacobian_dets(surface, s, t)).reshape(-1, 6)
    n = pts.shape[0]
    w = 1.0 / res ** 2
    total = 0.0
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        d2 = np.sum((pts[lo:hi, None, :] - pts[None, :, :]) ** 2, axis=-1)
        ker = np.exp(-kappa ** 2 * d2 / 8.0)
        total += np.einsum("ij,ik,jk->", ker, absJ[lo:hi], absJ)
    return float((kappa ** 2 / 4.0) * total * w * w)


def local_limit_check(surface, pair, s0, t0, kappa, res=256):
    """Pointwise heat-kernel limit against 2 pi / sqrt(det[1 + W^T W]).

    Returns (quadrature value, limit value) of
    int (kappa^2/4) e^{-kappa^2 |sigma(s,t) - x|^2 / 8} J_pair(s,t) ds dt
    with x = sigma(s0, t0) and signed det J; the limit uses the
    complementary-pair weight at (s0, t0).
    """
    k = WEDGE_PAIRS.index(tuple(pair))
    s, t = _midpoints(res)
    pts = surface.point(s, t)
    x0 = surface.point(np.array(s0), np.array(t0))
    d2 = np.sum((pts - x0) ** 2, axis=-1)
    dets = jacobian_dets(surface, s, t)[..., k]
    quad = float((kappa ** 2 / 4.0)
                 * np.sum(np.exp(-kappa ** 2 * d2 / 8.0) * dets) / res ** 2)

    J = jacobians(surface, np.array(s0), np.array(t0))
    kc = WEDGE_PAIRS.index(COMPLEMENT[tuple(pair)][0])
    Jab = J[..., k, :, :]
    Jcd = J[..., kc, :, :]
    det_ab = np.linalg.det(Jab)
    M = Jab.T @ Jab + Jcd.T @ Jcd
    limit = 2.0 * np.pi * det_ab / np.sqrt(np.linalg.det(M))
    return quad, float(limit)
