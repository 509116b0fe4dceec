"""Gaussian field sampling, the positive reweighting density, the ordered
Wilson functional, and the ratio Monte Carlo estimator.

Truncated fields A_{a,alpha} (component a in {1,2,3}, Lie index alpha) are
expanded in the first-order-orthonormalized monomial basis with i.i.d.
Gaussian coefficients.  The density

    Y = exp[ -1/2 sum_{gamma,i<j} Int |X_{gamma,ij} + Q_{gamma,ij}|^2
             +1/2 sum_{alpha,i<j} Int |X_{alpha,ij}|^2 ],

with X_{alpha,ij}(w) = kappa psi(w) (wedge ij of dA_alpha)(w) and
Q_{gamma,ij}(w) = psi(w)^2 sum_{alpha<beta} c_gamma^{ab} A_{i,alpha}(w)
A_{j,beta}(w), reweights the Gaussian measure; the w-integral runs over
the standard complex Gaussian on C^4 and is evaluated by scrambled-Sobol
quasi Monte Carlo.  For a commutative algebra all structure constants
vanish and Y == 1 identically.

The Wilson functional is the trace of the ordered product over grid
cells of exp[(kappa/4) ds dt u^{-1}(curvature + quadratic) u], with
curvature pairings evaluated at kappa sigma/2 and frames u transported
along the bottom-right-leftward path.  Cells multiply left to right with
t ascending, then s ascending (the order in which the grid traversal
argument assembles them).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.stats import norm as normal_dist, qmc

from . import bargmann as bg
from .bargmann import AXES, COMPONENTS, SPATIAL_PAIRS
from .functionals import psi_weight
from .lie import LieBasis

VARIANCE_CONVENTIONS = ("unit_complex", "unit_real_parts")
# wedge sign (-1)^(ij) of the spatial exterior-derivative components
SPATIAL_SIGN = {(i, j): float((-1) ** (i * j)) for i, j in SPATIAL_PAIRS}


@dataclass(frozen=True)
class MeasureConfig:
    """Sampling configuration: group, scale kappa, cutoff, conventions.

    variance_convention:
      unit_complex    — real N(0,1) coefficients, E|c|^2 = 1 (default;
                        matches unit complex pairing variance),
      unit_real_parts — c = X + iY with X, Y ~ N(0,1), E|c|^2 = 2.
    """
    kind: str = "SU"
    n: int = 2
    kappa: float = 5.0
    cutoff: int = 4
    variance_convention: str = "unit_complex"
    seed: int = 0
    n_quad: int = 4096

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        if self.variance_convention not in VARIANCE_CONVENTIONS:
            raise ValueError("unknown variance convention %r"
                             % (self.variance_convention,))
        if self.n_quad < 2:
            raise ValueError("n_quad too small")

    def algebra(self):
        return LieBasis(self.kind, self.n)


def basis_for(cfg):
    """Orthonormalizable basis cache matching cfg (full Gram-Schmidt)."""
    return bg.gram_schmidt(cfg.kappa, cfg.cutoff, exact=True, method="full")


@dataclass
class FieldSample:
    """Coefficients (3 components, Lie dim, basis size) in the
    orthonormalized basis; field values A_{a,alpha}(w) follow by
    evaluating the basis polynomials."""
    coef: np.ndarray

    def __post_init__(self):
        self.coef = np.asarray(self.coef, dtype=complex)
        if self.coef.ndim != 3 or self.coef.shape[0] != 3:
            raise ValueError("coef must have shape (3, lie_dim, basis)")


def sample_field(cfg, cache, rng):
    """Draw i.i.d. Gaussian coefficients per the variance convention."""
    return FieldSample(_draw_coefs(cfg, cache, rng, 1)[0])


def _draw_coefs(cfg, cache, rng, batch):
    shape = (batch, 3, cfg.algebra().dim, len(cache.indices))
    c = rng.standard_normal(shape)
    if cfg.variance_convention == "unit_real_parts":
        c = c + 1j * rng.standard_normal(shape)
    return np.asarray(c, dtype=complex)


# ---------------------------------------------------------------------------
# vectorized basis evaluation

class BasisEvaluator:
    """Evaluates the orthonormalized basis (and its first-order images)
    at arrays of points, via monomial value matrices."""

    def __init__(self, cache):
        if cache.method != "full":
            raise ValueError("orthonormal expansions need method='full'")
        self.cache = cache
        self.indices = cache.indices
        idx = {m: k for k, m in enumerate(self.indices)}
        # dz raises degree by one, so images need the larger monomial set
        self.dz_monos = bg.all_multi_indices(cache.r_max + 1)
        didx = {m: k for k, m in enumerate(self.dz_monos)}
        self.exp0 = np.array(self.indices, dtype=np.int64)
        self.exp1 = np.array(self.dz_monos, dtype=np.int64)
        self.coef0 = {}
        self.coef1 = {}
        for a in COMPONENTS:
            c0 = np.zeros((len(self.indices), len(self.indices)),
                          dtype=complex)
            for p, m in enumerate(self.indices):
                nrm = cache.norm(a, m)
                for mono, cc in cache.poly(a, m).items():
                    c0[p, idx[mono]] = complex(cc) / nrm
            self.coef0[a] = c0
            for i in AXES:
                c1 = np.zeros((len(self.indices), len(self.dz_monos)),
                              dtype=complex)
                for p, m in enumerate(self.indices):
                    nrm = cache.norm(a, m)
                    for mono, cc in bg.dz(cache.poly(a, m), i).items():
                        c1[p, didx[mono]] = complex(cc) / nrm
                self.coef1[(i, a)] = c1

    @staticmethod
    def _mono_values(pts, exps):
        pts = np.asarray(pts, dtype=complex).reshape(-1, 4)
        return np.prod(pts[:, None, :] ** exps[None, :, :], axis=-1)

    def values(self, a, pts):
        """(K, P) values of the normalized basis for component a."""
        return self._mono_values(pts, self.exp0) @ self.coef0[a].T

    def dz_values(self, i, a, pts):
        """(K, P) values of the axis-i first-order image of the basis."""
        return self._mono_values(pts, self.exp1) @ self.coef1[(i, a)].T


# ---------------------------------------------------------------------------
# the density Y

class WIntegrator:
    """Quasi-MC nodes for the C^4 Gaussian together with cached basis
    value matrices at those nodes."""

    def __init__(self, cfg, cache, evaluator=None):
        m = max(1, round(math.log2(cfg.n_quad)))
        sob = qmc.Sobol(d=8, scramble=True, seed=cfg.seed)
        u = sob.random_base2(m)
        z = normal_dist.ppf(u) / math.sqrt(2.0)   # Re, Im ~ N(0, 1/2)
        self.w = z[:, :4] + 1j * z[:, 4:]
        self.psi = psi_weight(self.w)
        ev = evaluator or BasisEvaluator(cache)
        self.V = {a: ev.values(a, self.w) for a in COMPONENTS}
        self.D = {}
        for i, j in SPATIAL_PAIRS:
            self.D[(i, j)] = ev.dz_values(i, j, self.w)
            self.D[(j, i)] = ev.dz_values(j, i, self.w)


def _log_density_batch(coef, cfg, integ):
    """log Y for a batch of coefficient arrays (B, 3, N, P)."""
    basis = cfg.algebra()
    sc = basis.structure_constants               # c[gamma, alpha, beta]
    scu = np.triu(sc, k=1)                      # keep alpha < beta only
    psi, psi2 = integ.psi, integ.psi ** 2
    log_y = np.zeros(coef.shape[0])
    for i, j in SPATIAL_PAIRS:
        # X_{alpha,ij}(w) = kappa psi (-1)^(ij) [d_i A_j - d_j A_i](w)
        x = cfg.kappa * SPATIAL_SIGN[(i, j)] * psi * (
            np.einsum("mp,bnp->bnm", integ.D[(i, j)], coef[:, j - 1])
            - np.einsum("mp,bnp->bnm", integ.D[(j, i)], coef[:, i - 1]))
        ai = np.einsum("mp,bnp->bnm", integ.V[i], coef[:, i - 1])
        aj = np.einsum("mp,bnp->bnm", integ.V[j], coef[:, j - 1])
        q = psi2 * np.einsum("gxy,bxm,bym->bgm", scu, ai, aj)
        log_y += 0.5 * np.mean(
            np.sum(np.abs(x) ** 2 - np.abs(x + q) ** 2, axis=1), axis=-1)
    return log_y


def density_Y(A, cfg, cache, integrator=None):
    """Strictly positive reweighting density of a field sample.

    Exactly 1 for commutative algebras (all structure constants vanish,
    so the completed square cancels the subtracted quadratic termwise).
    """
    integ = integrator or WIntegrator(cfg, cache)
    return float(np.exp(_log_density_batch(A.coef[None], cfg, integ)[0]))


def density_upper_bound(A, cfg, cache, integrator=None):
    """Samplewise bound exp[+1/2 Int sum |X_{alpha,ij}|^2] on density_Y."""
    integ = integrator or WIntegrator(cfg, cache)
    coef = A.coef[None]
    total = 0.0
    for i, j in SPATIAL_PAIRS:
        x = cfg.kappa * SPATIAL_SIGN[(i, j)] * integ.psi * (
            np.einsum("mp,bnp->bnm", integ.D[(i, j)], coef[:, j - 1])
            - np.einsum("mp,bnp->bnm", integ.D[(j, i)], coef[:, i - 1]))
        total += 0.5 * float(np.mean(np.sum(np.abs(x) ** 2, axis=1)))
    return math.exp(total)


def density_moment_check(cfg, p, n_samples, cache=None, chunk=256):
    """MC estimate of E[Y^p] against the closed-form bound exp(3pc/4pi),
    c = (1 - 3p/2pi)^(-1); valid for p < 2pi/3."""
    if p >= 2 * math.pi / 3:
        raise ValueError("moment bound needs p < 2 pi / 3")
    if n_samples < 2:
        raise ValueError("n_samples >= 2 required")
    cache = cache or basis_for(cfg)
    integ = WIntegrator(cfg, cache)
    rng = np.random.default_rng(cfg.seed)
    s1 = s2 = 0.0
    done = 0
    while done < n_samples:
        b = min(chunk, n_samples - done)
        yp = np.exp(p * _log_density_batch(
            _draw_coefs(cfg, cache, rng, b), cfg, integ))
        s1 += float(np.sum(yp))
        s2 += float(np.sum(yp ** 2))
        done += b
    mean = s1 / n_samples
    var = max(s2 / n_samples - mean ** 2, 0.0)
    stderr = math.sqrt(var / n_samples)
    c = 1.0 / (1.0 - 3.0 * p / (2 * math.pi))
    bound = math.exp(3.0 * p * c / (4 * math.pi))
    return {"estimate": mean, "stderr": stderr, "bound": bound,
            "within_bound": mean <= bound + 3 * stderr}


# ---------------------------------------------------------------------------
# path transport of samples and the Wilson functional

def _batched_expm(mats):
    """expm of an (..., d, d) stack; closed form for d <= 2."""
    d = mats.shape[-1]
    if d == 1:
        return np.exp(mats)
    if d == 2:
        m = 0.5 * np.trace(mats, axis1=-2, axis2=-1)[..., None, None]
        b = mats - m * np.eye(2)
        # eigenvalues of b are +/- delta
        delta = np.sqrt(-np.linalg.det(b)).astype(complex)[..., None, None]
        small = np.abs(delta) < 1e-8
        ratio = np.where(small, 1.0 + delta ** 2 / 6.0,
                         np.sinh(np.where(small, 1.0, delta))
                         / np.where(small, 1.0, delta))
        return np.exp(m) * (np.cosh(delta) * np.eye(2) + ratio * b)
    out = np.empty_like(mats)
    flat = mats.reshape(-1, d, d)
    res = out.reshape(-1, d, d)
    for k in range(flat.shape[0]):
        res[k] = expm(flat[k])
    return out


def _path_segments(S, s, t):
    """The three-leg path: bottom row, up the right side, left along row t."""
    segs = []
    if s == 0.0 and t == 0.0:
        return segs
    segs.append(((0.0, 0.0), (1.0, 0.0)))
    if t > 0.0:
        segs.append(((1.0, 0.0), (1.0, t)))
    if s < 1.0:
        segs.append(((1.0, t), (s, t)))
    return segs


def _segment_matrices(S, seg, ode_steps, evaluator, gens, coef):
    """RK4 stage matrices M(tau) = sum_a vel_a A_a for one segment.

    Returns (ode_steps, 3, B, d, d): per step the stage matrices at tau,
    tau + h/2, tau + h.
    """
    (s0, t0), (s1, t1) = seg
    h = 1.0 / ode_steps
    taus = np.concatenate([(k * h + np.array([0.0, h / 2, h]))
                           for k in range(ode_steps)])
    ss, tt = s0 + taus * (s1 - s0), t0 + taus * (t1 - t0)
    pts = S.point(ss, tt)
    dss, dtt = S.derivs(ss, tt)
    vel = dss * (s1 - s0) + dtt * (t1 - t0)       # (K, 4)
    vals = np.stack([evaluator.values(a, pts) for a in COMPONENTS])
    # fold velocity components: M_k = sum_a vel[k, a] A_a
    amps = np.einsum("ka,akp,banp->kbn", vel[:, 1:4], vals, coef)
    mats = np.einsum("kbn,nde->kbde", amps, gens)
    return mats.reshape(ode_steps, 3, *mats.shape[1:])


def _rk4_transport(stage_mats, u):
    """Advance batched frames through one segment of RK4 stage matrices."""
    h = 1.0 / stage_mats.shape[0]
    for m0, m1, m2 in stage_mats:
        k1 = m0 @ u
        k2 = m1 @ (u + 0.5 * h * k1)
        k3 = m1 @ (u + 0.5 * h * k2)
        k4 = m2 @ (u + h * k3)
        u = u + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return u


def u_path(A, S, s, t, cfg, ode_steps=32, cache=None, evaluator=None):
    """Transport of the identity along the three-leg path to sigma(s, t)."""
    if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
        raise ValueError("(s, t) must lie in the unit square")
    cache = cache or basis_for(cfg)
    ev = evaluator or BasisEvaluator(cache)
    gens = np.asarray(cfg.algebra().gens)
    u = np.eye(gens.shape[1], dtype=complex)[None]
    for seg in _path_segments(S, s, t):
        u = _rk4_transport(
            _segment_matrices(S, seg, ode_steps, ev, gens, A.coef[None]), u)
    return u[0]


def _wilson_batch(coef, S, cfg, n_grid, ode_steps, evaluator):
    """Wilson traces for a coefficient batch (B, 3, N, P) -> (B,)."""
    basis = cfg.algebra()
    gens, nlie = np.asarray(basis.gens), basis.dim
    d = gens.shape[1]
    scu = np.triu(basis.structure_constants, k=1)
    B = coef.shape[0]
    eps = 1.0 / n_grid
    centers = (np.arange(n_grid) + 0.5) * eps
    kappa = cfg.kappa

    # cell-center geometry and field pairings at w = kappa sigma / 2
    sg, tg = np.meshgrid(centers, centers, indexing="ij")  # [k, l]
    pts = S.point(sg, tg)
    dss, dtt = S.derivs(sg, tg)
    w = (kappa / 2.0) * pts.reshape(-1, 4)
    psi = psi_weight(w)
    vals = {a: evaluator.values(a, w) for a in COMPONENTS}
    dzv = {(i, a): evaluator.dz_values(i, a, w)
           for a in COMPONENTS for i in AXES if i != a}
    av = {a: np.einsum("cp,bnp->bnc", vals[a], coef[:, a - 1])
          for a in COMPONENTS}

    pairing = np.zeros((B, w.shape[0], nlie), dtype=complex)
    for a, b in bg.WEDGE_PAIRS:
        jab = np.abs(dss[..., a] * dtt[..., b]
                     - dss[..., b] * dtt[..., a]).reshape(-1)
        if not np.any(jab):
            continue
        if a == 0:
            x = kappa * psi * np.einsum("cp,bnp->bnc", dzv[(0, b)],
                                        coef[:, b - 1])
        else:
            x = kappa * SPATIAL_SIGN[(a, b)] * psi * (
                np.einsum("cp,bnp->bnc", dzv[(a, b)], coef[:, b - 1])
                - np.einsum("cp,bnp->bnc", dzv[(b, a)], coef[:, a - 1]))
            x = x + psi ** 2 * np.einsum("gxy,bxc,byc->bgc",
                                         scu, av[a], av[b])
        pairing += jab[None, :, None] * np.moveaxis(x, 1, 2)
    cell_mats = (kappa / 4.0) * eps * eps * np.einsum(
        "bcn,nde->cbde", pairing, gens)
    cell_mats = cell_mats.reshape(n_grid, n_grid, B, d, d)  # [k, l]

    # frames at cell centers along the three-leg paths, built incrementally
    eye = np.broadcast_to(np.eye(d, dtype=complex), (B, d, d)).copy()

    def leg(u, p, q):
        return _rk4_transport(_segment_matrices(
            S, (p, q), ode_steps, evaluator, gens, coef), u)

    total = eye
    u_bottom = leg(eye, (0.0, 0.0), (1.0, 0.0))
    v = u_bottom
    t_prev = 0.0
    for l in range(n_grid):
        v = leg(v, (1.0, t_prev), (1.0, centers[l]))
        t_prev = centers[l]
        u = v
        s_prev = 1.0
        row = [None] * n_grid
        for k in range(n_grid - 1, -1, -1):
            u = leg(u, (s_prev, centers[l]), (centers[k], centers[l]))
            s_prev = centers[k]
            row[k] = u
        for k in range(n_grid):                   # s ascending within rows
            conj = np.linalg.solve(row[k], cell_mats[k, l] @ row[k])
            total = total @ _batched_expm(conj)
    return np.trace(total, axis1=-2, axis2=-1)


def wilson_J(A, S, cfg, n_grid=8, ode_steps=4, cache=None, evaluator=None):
    """Trace of the ordered product of cell exponentials for one sample."""
    if n_grid < 2:
        raise ValueError("n_grid >= 2 required")
    cache = cache or basis_for(cfg)
    ev = evaluator or BasisEvaluator(cache)
    return complex(_wilson_batch(A.coef[None], S, cfg, n_grid,
                                 ode_steps, ev)[0])


# ---------------------------------------------------------------------------
# Monte Carlo

@dataclass
class MCEstimate:
    mean: complex
    stderr: float
    n_samples: int
    moments: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.stderr < 0 or self.n_samples < 1:
            raise ValueError("invalid estimate")


def mc_expectation(S, cfg, n_samples, n_grid=8, ode_steps=4,
                   cache=None, chunk=256):
    """Ratio estimator E[J Y] / E[Y] with delta-method standard error.

    Deterministic given cfg.seed (chunking does not change the stream).
    """
    if n_samples < 2:
        raise ValueError("n_samples >= 2 required")
    cache = cache or basis_for(cfg)
    ev = BasisEvaluator(cache)
    integ = WIntegrator(cfg, cache, evaluator=ev)
    rng = np.random.default_rng(cfg.seed)
    abelian = cfg.algebra().dim == 1

    s_y = s_jy = s_j = 0.0 + 0.0j
    s_yy = s_jyjy = s_jyy = 0.0 + 0.0j
    done = 0
    while done < n_samples:
        b = min(chunk, n_samples - done)
        coef = _draw_coefs(cfg, cache, rng, b)
        y = np.ones(b) if abelian else np.exp(
            _log_density_batch(coef, cfg, integ))
        j = _wilson_batch(coef, S, cfg, n_grid, ode_steps, ev)
        jy = j * y
        s_y += np.sum(y)
        s_j += np.sum(j)
        s_jy += np.sum(jy)
        s_yy += np.sum(y * y)
        s_jyjy += np.sum(jy * np.conj(jy))
        s_jyy += np.sum(jy * y)
        done += b

    n = float(n_samples)
    m_y, m_jy = s_y / n, s_jy / n
    var_y = max((s_yy / n - abs(m_y) ** 2).real, 0.0)
    if abs(m_y) <= 3 * math.sqrt(var_y / n):
        raise ZeroDivisionError("denominator estimate consistent with zero")
    ratio = m_jy / m_y
    var_jy = max((s_jyjy / n - abs(m_jy) ** 2).real, 0.0)
    cov = (s_jyy / n - m_jy * np.conj(m_y)).real
    var_ratio = (var_jy - 2 * ratio.real * cov
                 + abs(ratio) ** 2 * var_y) / abs(m_y) ** 2
    stderr = math.sqrt(max(var_ratio, 0.0) / n)
    moments = {"mean_Y": complex(m_y), "mean_J": complex(s_j / n),
               "mean_JY": complex(m_jy), "var_Y": var_y, "var_JY": var_jy}
    return MCEstimate(complex(ratio), stderr, n_samples, moments)


def gaussian_exp_moment_check(diag, n_samples, seed=0):
    """MC check of E[exp<Ax, Ax>] = det(1 - 2 A^T A)^(-1/2) for diagonal A
    acting on a real standard Gaussian vector; needs ||A^T A|| < 1/2."""
    a = np.asarray(diag, dtype=float)
    if np.max(a ** 2) >= 0.5:
        raise ValueError("requires ||A* A|| < 1/2")
    rng = np.random.default_rng(seed)
    total = total2 = 0.0
    done = 0
    while done < n_samples:
        b = min(200_000, n_samples - done)
        x = rng.standard_normal((b, a.size))
        v = np.exp(np.sum((a * x) ** 2, axis=1))
        total += float(np.sum(v))
        total2 += float(np.sum(v * v))
        done += b
    mean = total / n_samples
    var = max(total2 / n_samples - mean ** 2, 0.0)
    exact = float(1.0 / np.sqrt(np.prod(1.0 - 2.0 * a ** 2)))
    return {"estimate": mean, "stderr": math.sqrt(var / n_samples),
            "exact": exact}
