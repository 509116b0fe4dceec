"""Holomorphic polynomial 1-forms on C^4 and the first-order metric.

Polynomials are dicts mapping a 4-tuple multi-index m to a coefficient
(Fraction in exact mode, float/complex otherwise).  A 1-form is a dict
{a: poly} for a in {1, 2, 3}; a 2-form is a dict {(a, b): poly} with a < b.

The annihilation-type operator acts per axis on monomials as
    d_a z_a^n = (n/2) z_a^(n-1) - (1/2) z_a^(n+1)
and the monomial inner product is <z^p, z^q> = delta_pq * p!.
"""

import json
import math
from fractions import Fraction

ZERO4 = (0, 0, 0, 0)
AXES = (0, 1, 2, 3)
COMPONENTS = (1, 2, 3)
SPATIAL_PAIRS = ((1, 2), (1, 3), (2, 3))
WEDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

CACHE_SCHEMA = 1


# ---------------------------------------------------------------------------
# multi-indices

def degree(m):
    return m[0] + m[1] + m[2] + m[3]


def index_key(m):
    """Total order: by degree r, then entrywise m_0..m_3."""
    return (degree(m),) + tuple(m)


def all_multi_indices(r_max):
    """All 4-tuples with total degree <= r_max, in canonical order."""
    out = []
    for m0 in range(r_max + 1):
        for m1 in range(r_max + 1 - m0):
            for m2 in range(r_max + 1 - m0 - m1):
                for m3 in range(r_max + 1 - m0 - m1 - m2):
                    out.append((m0, m1, m2, m3))
    out.sort(key=index_key)
    return out


def predecessors(m):
    """[(axis, m - 2 e_axis)] for axes with entry >= 2 (else dropped)."""
    out = []
    for a in AXES:
        if m[a] >= 2:
            mm = list(m)
            mm[a] -= 2
            out.append((a, tuple(mm)))
    return out


def mfact(m):
    return (math.factorial(m[0]) * math.factorial(m[1])
            * math.factorial(m[2]) * math.factorial(m[3]))


# ---------------------------------------------------------------------------
# polynomial arithmetic

def poly_add(p, q, scale=1):
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, 0) + c * scale
        if out[m] == 0:
            del out[m]
    return out


def poly_scale(p, scale):
    return {m: c * scale for m, c in p.items()}


def dz(poly, axis):
    """Apply d_axis monomial-wise: m_a/2 down-shift minus 1/2 up-shift."""
    out = {}
    for m, c in poly.items():
        up = list(m)
        up[axis] += 1
        up = tuple(up)
        out[up] = out.get(up, 0) - c / 2
        if m[axis] > 0:
            dn = list(m)
            dn[axis] -= 1
            dn = tuple(dn)
            out[dn] = out.get(dn, 0) + c * m[axis] / 2
    return {m: c for m, c in out.items() if c != 0}


def h2_inner(p, q):
    """<p, q> = sum_m p_m conj(q_m) m!  (second argument conjugated)."""
    total = 0
    if len(q) < len(p):
        for m, c in q.items():
            if m in p:
                total += p[m] * c.conjugate() * mfact(m)
    else:
        for m, c in p.items():
            if m in q:
                total += c * q[m].conjugate() * mfact(m)
    return total


def poly_eval(poly, w):
    """Evaluate at a point w (len-4 sequence, real or complex)."""
    total = 0.0
    for m, c in poly.items():
        term = complex(c) if isinstance(c, Fraction) else c
        for a in AXES:
            if m[a]:
                term = term * w[a] ** m[a]
        total += term
    return total


# ---------------------------------------------------------------------------
# exterior d on 1-forms and the first-order inner product

def exterior_d(form, spatial_sign=1):
    """2-form components of d applied to a 1-form {a: poly}.

    (0, a) component: d_0 f_a.  Spatial (i, j), i < j:
    spatial_sign * (-1)^(i*j) * [d_i f_j - d_j f_i].
    spatial_sign=-1 flips the spatial bookkeeping sign; all norms and
    same-convention pairings are invariant under the flip.
    """
    out = {}
    for a in COMPONENTS:
        f = form.get(a)
        if f:
            p = dz(f, 0)
            if p:
                out[(0, a)] = p
    for (i, j) in SPATIAL_PAIRS:
        p = {}
        if form.get(j):
            p = poly_add(p, dz(form[j], i))
        if form.get(i):
            p = poly_add(p, dz(form[i], j), scale=-1)
        if p:
            sign = spatial_sign * (-1) ** (i * j)
            out[(i, j)] = poly_scale(p, sign) if sign != 1 else p
    return out


def fd_inner(f, g, kappa=1, spatial_sign=1):
    """<f, g>_{d,kappa} = kappa^2 <d f, d g> on 1-forms."""
    df = exterior_d(f, spatial_sign)
    dg = exterior_d(g, spatial_sign)
    total = 0
    for comp, p in df.items():
        q = dg.get(comp)
        if q:
            total += h2_inner(p, q)
    return total * kappa * kappa


def fd_inner_axis(p, q, a):
    """<p dx^a, q dx^a>_{d,1} = sum_{i != a} <d_i p, d_i q>.

    Fast same-component path; spatial signs square away.
    """
    total = 0
    for i in AXES:
        if i != a:
            total += h2_inner(dz(p, i), dz(q, i))
    return total


# ---------------------------------------------------------------------------
# Gram recursion / orthogonal basis

class BasisCache:
    """Orthogonalized monomials zhat^p (x) dx^a with first-order norms.

    entries[a][m] = polynomial dict; norms0[a][m] = |zhat^p (x) dx^a|^2 at
    kappa=1 (coefficients are kappa-independent; norms scale by kappa^2).

    method:
      "graded" (default) — z^p minus its projection onto the span of all
        lower-degree monomials; exactly orthogonal to every lower-order
        monomial and reproduces the predecessor-recursion examples, but
        same-degree elements are in general not mutually orthogonal.
      "full" — classical Gram-Schmidt over the canonical ordering; a
        genuinely orthogonal basis (use this wherever orthonormal
        expansions are required).
      "sparse" — literal predecessor-only recursion (projections onto the
        four p - 2 e_alpha only); kept for comparison, not orthogonal.
    """

    def __init__(self, kappa, r_max, exact, entries, norms0, method):
        self.kappa = kappa
        self.r_max = r_max
        self.exact = exact
        self.entries = entries
        self.norms0 = norms0
        self.method = method
        self.indices = all_multi_indices(r_max)
        self.index_of = {m: k for k, m in enumerate(self.indices)}

    def poly(self, a, m):
        return self.entries[a][m]

    def norm_sq(self, a, m):
        return self.kappa ** 2 * self.norms0[a][m]

    def norm(self, a, m):
        return self.kappa * math.sqrt(self.norms0[a][m])

    def with_kappa(self, kappa):
        return BasisCache(kappa, self.r_max, self.exact,
                          self.entries, self.norms0, self.method)

    def max_orthogonality_residual(self):
        """max |<zhat^p, z^q>| / (|zhat^p| |z^q|) over strictly lower-degree q.

        This is the full-Gram validation pass: each orthogonalized element
        is checked against every lower-order raw monomial (s < r), not just
        its predecessors.
        """
        one = Fraction(1) if self.exact else 1.0
        worst = 0.0
        for a in COMPONENTS:
            mono_norm = {}
            for q in self.indices:
                mono_norm[q] = math.sqrt(float(fd_inner_axis({q: one}, {q: one}, a)))
            for p in self.indices:
                zp = self.entries[a][p]
                np_ = math.sqrt(float(self.norms0[a][p]))
                dp = degree(p)
                for q in self.indices:
                    if degree(q) >= dp:
                        continue
                    ip = fd_inner_axis(zp, {q: one}, a)
                    if ip != 0:
                        worst = max(worst, abs(float(ip)) / (np_ * mono_norm[q]))
        return worst

    def max_pairwise_residual(self):
        """max |<zhat^p, zhat^q>| / (|zhat^p| |zhat^q|) over p != q (same a)."""
        worst = 0.0
        for a in COMPONENTS:
            idx = self.indices
            for ki, p in enumerate(idx):
                zp = self.entries[a][p]
                np_ = math.sqrt(float(self.norms0[a][p]))
                for q in idx[:ki]:
                    ip = fd_inner_axis(zp, self.entries[a][q], a)
                    if ip != 0:
                        nq = math.sqrt(float(self.norms0[a][q]))
                        worst = max(worst, abs(float(ip)) / (np_ * nq))
        return worst

    # -- serialization (versioned text format) --

    def save(self, path):
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            if isinstance(x, complex):
                return [x.real, x.imag]
            return x

        doc = {
            "schema": CACHE_SCHEMA,
            "kappa": self.kappa,
            "r_max": self.r_max,
            "exact": self.exact,
            "method": self.method,
            "entries": {
                str(a): [
                    {
                        "p": list(m),
                        "coeffs": [[list(mm), enc(c)] for mm, c in
                                   sorted(self.entries[a][m].items(),
                                          key=lambda kv: index_key(kv[0]))],
                        "norm_sq": enc(self.norms0[a][m]),
                    }
                    for m in self.indices
                ]
                for a in COMPONENTS
            },
        }
        with open(path, "w") as fh:
            json.dump(doc, fh)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            doc = json.load(fh)
        if doc.get("schema") != CACHE_SCHEMA:
            raise ValueError(f"unsupported basis cache schema {doc.get('schema')!r}")

        exact = doc["exact"]

        def dec(x):
            if isinstance(x, str):
                return Fraction(x)
            if isinstance(x, list):
                return complex(x[0], x[1])
            return x

        entries = {}
        norms0 = {}
        for a_str, items in doc["entries"].items():
            a = int(a_str)
            entries[a] = {}
            norms0[a] = {}
            for item in items:
                m = tuple(item["p"])
                entries[a][m] = {tuple(mm): dec(c) for mm, c in item["coeffs"]}
                norms0[a][m] = dec(item["norm_sq"])
        return cls(doc["kappa"], doc["r_max"], exact, entries, norms0,
                   doc.get("method", "sparse"))


def _inner_mono_vs_cached(m, dimg, a):
    """<z^m (x) dx^a, y (x) dx^a>_{d,1} given cached dz-images of y."""
    total = 0
    for i in AXES:
        if i == a:
            continue
        img = dimg[i]
        up = list(m)
        up[i] += 1
        c = img.get(tuple(up))
        if c is not None:
            total += (-c.conjugate() / 2) * mfact(tuple(up))
        if m[i] > 0:
            dn = list(m)
            dn[i] -= 1
            c = img.get(tuple(dn))
            if c is not None:
                total += (c.conjugate() * m[i] / 2) * mfact(tuple(dn))
    return total


def gram_schmidt(kappa, r_max, exact=True, method="graded", validate=True,
                 tol=1e-10):
    """Orthogonalize {z^p (x) dx^a} in the first-order metric.

    See BasisCache for the three methods.  Coefficients do not depend on
    kappa; norms carry the kappa^2 factor.  With validate=True the
    lower-order overlap residual is computed and an error is raised if it
    exceeds tol (this rejects method="sparse", whose residual is O(1e-2)).
    """
    if method not in ("graded", "full", "sparse"):
        raise ValueError(f"unknown method {method!r}")
    one = Fraction(1) if exact else 1.0
    indices = all_multi_indices(r_max)
    entries = {}
    norms0 = {}
    for a in COMPONENTS:
        polys = {}
        norms = {}
        if method == "sparse":
            for m in indices:
                zp = {m: one}
                acc = dict(zp)
                for _, pred in predecessors(m):
                    ip = fd_inner_axis(zp, polys[pred], a)
                    if ip != 0:
                        acc = poly_add(acc, polys[pred], scale=-ip / norms[pred])
                polys[m] = acc
                norms[m] = fd_inner_axis(acc, acc, a)
        else:
            # One pass maintaining a fully orthogonal family y^q; the
            # graded element subtracts only lower-degree projections.
            ortho = {}
            odimg = {}
            onorm = {}
            for m in indices:
                zp_norm = fd_inner_axis({m: one}, {m: one}, a)
                dm = degree(m)
                acc_g = {m: one}
                nrm_g = zp_norm
                acc_f = {m: one}
                nrm_f = zp_norm
                for q in indices:
                    if index_key(q) >= index_key(m):
                        break
                    v = _inner_mono_vs_cached(m, odimg[q], a)
                    if v == 0:
                        continue
                    coeff = v / onorm[q]
                    acc_f = poly_add(acc_f, ortho[q], scale=-coeff)
                    nrm_f = nrm_f - coeff * v.conjugate()
                    if degree(q) < dm:
                        acc_g = poly_add(acc_g, ortho[q], scale=-coeff)
                        nrm_g = nrm_g - coeff * v.conjugate()
                ortho[m] = acc_f
                onorm[m] = nrm_f
                odimg[m] = {i: dz(acc_f, i) for i in AXES if i != a}
                if method == "graded":
                    polys[m] = acc_g
                    norms[m] = nrm_g
                else:
                    polys[m] = acc_f
                    norms[m] = nrm_f
        entries[a] = polys
        norms0[a] = norms
    cache = BasisCache(kappa, r_max, exact, entries, norms0, method)
    if validate:
        resid = cache.max_orthogonality_residual()
        if resid > tol:
            raise ValueError(
                f"Gram residual {resid:.3e} above {tol:.1e} "
                f"(method={method!r}, r_max={r_max})")
    return cache


def norm_bounds_ok(cache):
    """Check (kappa/2) sqrt(p!) <= |zhat^p| and |z^p| <= 3(r+1) kappa sqrt(p!)."""
    k = cache.kappa
    for a in COMPONENTS:
        for m in cache.indices:
            s = math.sqrt(mfact(m))
            r = degree(m)
            lo = (k / 2.0) * s
            hi = 3.0 * (r + 1) * k * s
            nhat = cache.norm(a, m)
            nz = k * math.sqrt(float(fd_inner_axis({m: 1}, {m: 1}, a)))
            if not (lo <= nhat * (1 + 1e-12) and nz <= hi * (1 + 1e-12)):
                return False
            if nhat > nz * (1 + 1e-12):  # orthogonalization shrinks
                return False
    return True


# ---------------------------------------------------------------------------
# measurable norm

def monomial_sup(m):
    """sup of |z^m| over the ball |z| <= 1/2: prod (m_i / 4r)^(m_i/2)."""
    r = degree(m)
    if r == 0:
        return 1.0
    val = 1.0
    for mi in m:
        if mi:
            val *= (mi / (4.0 * r)) ** (mi / 2.0)
    return val


def measurable_norm_bound(form, mode="upper", n_starts=8, seed=0):
    """Measurable-norm bound for a 1-form {a: poly}.

    mode="upper": sum_p |c_p| [sup|z^p| + 6(r+1)^2 sum_alpha sup|z^(p-2e_a)|]
    with per-monomial closed-form sups over the ball B(0, 1/2).
    mode="optimize": multi-start maximization of the same sum at a common
    point of the ball; always <= the upper bound.
    """
    terms = []   # (|c|, m, preds)
    for a in COMPONENTS:
        for m, c in form.get(a, {}).items():
            terms.append((abs(complex(c)), m, [p for _, p in predecessors(m)]))
    if not terms:
        return 0.0
    if mode == "upper":
        total = 0.0
        for ac, m, preds in terms:
            r = degree(m)
            total += ac * (monomial_sup(m)
                           + 6.0 * (r + 1) ** 2 * sum(monomial_sup(p) for p in preds))
        return total
    if mode != "optimize":
        raise ValueError(f"unknown mode {mode!r}")

    import numpy as np
    from scipy import optimize

    def value(t):
        total = 0.0
        for ac, m, preds in terms:
            r = degree(m)
            tm = 1.0
            for i in AXES:
                tm *= t[i] ** m[i]
            s = tm
            for p in preds:
                tp = 1.0
                for i in AXES:
                    tp *= t[i] ** p[i]
                s += 6.0 * (r + 1) ** 2 * tp
            total += ac * s
        return total

    rng = np.random.default_rng(seed)
    best = 0.0
    cons = ({"type": "ineq", "fun": lambda t: 0.25 - np.dot(t, t)},)
    bounds = [(0.0, 0.5)] * 4
    for _ in range(n_starts):
        x0 = rng.random(4)
        x0 = 0.5 * x0 / max(1.0, 2.0 * np.linalg.norm(x0))
        res = optimize.minimize(lambda t: -value(t), x0, bounds=bounds,
                                constraints=cons, method="SLSQP")
        if res.success or res.fun is not None:
            best = max(best, -float(res.fun))
    return best
