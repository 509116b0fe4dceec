"""Directed grids, parallel transport, and surface-ordered holonomy products.

The unit square [0,1]^2 is subdivided into an n x n grid.  A canonical
traversal visits every boundary edge once (counterclockwise) and every
internal edge twice in opposite directions; the ordered product of edge
transports along it therefore collapses algebraically to the boundary
holonomy.  On top of this sit ODE-based parallel transports for smooth
connections and the time-ordered product of plaquette curvature
exponentials that approximates the boundary holonomy as n grows.
"""

import numpy as np
from scipy.linalg import expm

from .bargmann import AXES, poly_add, poly_eval
from .lie import LieBasis

WEDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


# ---------------------------------------------------------------------------
# polynomial helpers (plain partial derivatives, over real 4-space)

def poly_partial(poly, axis):
    """d/dx_axis of a monomial dict {(m0,m1,m2,m3): coeff}."""
    out = {}
    for m, c in poly.items():
        if m[axis] == 0:
            continue
        dn = list(m)
        dn[axis] -= 1
        out[tuple(dn)] = out.get(tuple(dn), 0) + c * m[axis]
    return out


# ---------------------------------------------------------------------------
# connections

class ConnectionField:
    """Matrix-valued 1-form A = sum_{a=1..3} A_a dx^a in axial gauge (A_0 = 0).

    components: {(a, alpha): poly} with a in {1,2,3} and alpha indexing
    basis.gens; each poly maps 4-tuple exponents over (x0..x3) to real
    coefficients.
    """

    def __init__(self, components, basis):
        self.basis = basis
        self.components = {}
        for (a, alpha), poly in components.items():
            if a not in (1, 2, 3):
                raise ValueError("axial gauge: components indexed by a in {1,2,3}")
            if not 0 <= alpha < basis.dim:
                raise ValueError("Lie index out of range")
            self.components[(a, alpha)] = dict(poly)
        self._partials = {
            key: [poly_partial(poly, i) for i in AXES]
            for key, poly in self.components.items()
        }

    @property
    def rep_dim(self):
        return self.basis.gens[0].shape[0]

    def coeff(self, a, alpha, x):
        poly = self.components.get((a, alpha))
        return poly_eval(poly, x) if poly else 0.0

    def matrix(self, a, x):
        """A_a(x) as a matrix; a = 0 gives zero (axial gauge)."""
        d = self.rep_dim
        out = np.zeros((d, d), dtype=complex)
        if a == 0:
            return out
        for (b, alpha), poly in self.components.items():
            if b == a:
                out += complex(poly_eval(poly, x)) * self.basis.gens[alpha]
        return out

    def partial_matrix(self, i, a, x):
        """d/dx_i A_a(x) as a matrix."""
        d = self.rep_dim
        out = np.zeros((d, d), dtype=complex)
        if a == 0:
            return out
        for (b, alpha), partials in self._partials.items():
            if b == a:
                out += complex(poly_eval(partials[i], x)) * self.basis.gens[alpha]
        return out

    def curvature(self, a, b, x):
        """R_ab(x) = d_a A_b - d_b A_a + [A_a, A_b] (A_0 = 0)."""
        out = self.partial_matrix(a, b, x) - self.partial_matrix(b, a, x)
        if a != 0 and b != 0:
            Aa, Ab = self.matrix(a, x), self.matrix(b, x)
            out += Aa @ Ab - Ab @ Aa
        return out

    def is_abelian(self):
        return self.basis.dim == 1 or self.basis.kind == "U1"


def builtin_connection(name, scale=1.0):
    """Fixed low-degree polynomial connections used as test oracles."""
    def e(*m):
        return tuple(m)

    if name == "abelian-x2":
        basis = LieBasis("U1", 1)
        comps = {(1, 0): {e(0, 1, 0, 0): scale},          # x1 dx^1
                 (2, 0): {e(0, 2, 0, 0): scale}}          # x1^2 dx^2
    elif name == "su2-linear":
        # A_1 = (x0 E0 + x1 E1) dx^1 mixes non-commuting generators on
        # surfaces in the x0-x1 plane; A_2 adds off-plane structure.
        basis = LieBasis("SU", 2)
        comps = {(1, 0): {e(1, 0, 0, 0): scale},
                 (1, 1): {e(0, 1, 0, 0): scale},
                 (2, 2): {e(1, 0, 0, 0): 0.5 * scale}}
    elif name == "su2-quadratic":
        basis = LieBasis("SU", 2)
        comps = {(1, 0): {e(2, 0, 0, 0): scale},
                 (1, 1): {e(1, 1, 0, 0): scale},
                 (1, 2): {e(0, 2, 0, 0): 0.5 * scale},
                 (2, 0): {e(0, 1, 0, 0): 0.4 * scale},
                 (3, 1): {e(1, 0, 1, 0): 0.3 * scale}}
    else:
        raise ValueError("unknown builtin connection %r" % name)
    return ConnectionField(comps, basis)


BUILTIN_CONNECTIONS = ("abelian-x2", "su2-linear", "su2-quadratic")


# ---------------------------------------------------------------------------
# the grid and its canonical traversal

class GridZn:
    """n x n grid on [0,1]^2 with the canonical edge traversal.

    edges: directed edges ((i,j),(i2,j2)) in traversal order, vertex
    indices in 0..n.  boundary: the 4n boundary edges, counterclockwise
    from (0,0).
    """

    def __init__(self, n, edges, boundary):
        self.n = n
        self.edges = edges
        self.boundary = boundary

    def validate(self):
        from collections import Counter
        boundary = set()
        for (u, v) in self.boundary:
            boundary.add(frozenset((u, v)))
        seen = Counter(self.edges)
        undirected = Counter(frozenset((u, v)) for (u, v) in self.edges)
        for e, k in seen.items():
            if k != 1:
                raise AssertionError("directed edge repeated: %r" % (e,))
        for e, k in undirected.items():
            expect = 1 if e in boundary else 2
            if k != expect:
                raise AssertionError("edge %r visited %d times" % (e, k))
        if self.edges[0][0] != (0, 0) or self.edges[-1][1] != (0, 0):
            raise AssertionError("traversal must start and end at (0,0)")


def build_grid(n):
    """Canonical traversal: R once, then (R^{n-1} Lambda^{n-1} U) n times,
    then C^{n-1}, then left and down back to (0,0).

    Moves: R/U step right/up; Lambda = up, left, down; C = left, down,
    right.  Every boundary edge appears once (counterclockwise), every
    internal edge twice in opposite directions.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    edges = []
    pos = (0, 0)

    def step(di, dj):
        nonlocal pos
        nxt = (pos[0] + di, pos[1] + dj)
        edges.append((pos, nxt))
        pos = nxt

    step(1, 0)                                     # R
    for _ in range(n):                             # rows, bottom to top
        for _ in range(n - 1):
            step(1, 0)                             # R
        for _ in range(n - 1):                     # Lambda = up, left, down
            step(0, 1)
            step(-1, 0)
            step(0, -1)
        step(0, 1)                                 # U
    for _ in range(n - 1):                         # C = left, down, right
        step(-1, 0)
        step(0, -1)
        step(1, 0)
    step(-1, 0)
    step(0, -1)
    assert pos == (0, 0)

    boundary = []
    for i in range(n):
        boundary.append(((i, 0), (i + 1, 0)))
    for j in range(n):
        boundary.append(((n, j), (n, j + 1)))
    for i in range(n, 0, -1):
        boundary.append(((i, n), (i - 1, n)))
    for j in range(n, 0, -1):
        boundary.append(((0, j), (0, j - 1)))

    grid = GridZn(n, edges, boundary)
    grid.validate()
    return grid


def edge_key(u, v):
    """Canonical undirected key and the sign of the (u, v) orientation."""
    if u <= v:
        return (u, v), +1
    return (v, u), -1


def random_edge_field(grid, rng, kind="SU", n=2):
    """Random invertible matrices on the undirected edges of a grid."""
    field = {}
    for (u, v) in grid.edges:
        key, _ = edge_key(u, v)
        if key in field:
            continue
        if kind == "diagonal":
            phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
            field[key] = np.diag(phases)
        else:
            # random SU(n) via QR of a complex Gaussian, det normalized
            z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            q, r = np.linalg.qr(z)
            q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
            field[key] = q / np.linalg.det(q) ** (1.0 / n)
    return field


def edge_transport(field, u, v):
    key, sign = edge_key(u, v)
    m = field[key]
    if abs(np.linalg.det(m)) < 1e-14:
        raise np.linalg.LinAlgError("singular edge matrix")
    return m if sign > 0 else np.linalg.inv(m)


def grid_identity_check(field, n):
    """Ordered product over the canonical traversal vs the boundary product.

    Returns (traversal product, boundary product, max-norm deviation).
    Internal edges cancel algebraically, so the deviation reflects only
    inversion roundoff.
    """
    grid = build_grid(n)
    dim = next(iter(field.values())).shape[0]
    full = np.eye(dim, dtype=complex)
    for (u, v) in grid.edges:
        full = edge_transport(field, u, v) @ full
    bdry = np.eye(dim, dtype=complex)
    for (u, v) in grid.boundary:
        bdry = edge_transport(field, u, v) @ bdry
    return full, bdry, float(np.max(np.abs(full - bdry)))


# ---------------------------------------------------------------------------
# ODE parallel transport

def transport_edge(conn, S, edge, ode_steps=16):
    """Path-ordered exponential along sigma(straight parameter segment).

    edge = ((s0,t0),(s1,t1)) in [0,1]^2; solves u' = M(tau) u with
    M = sum_a A_a(sigma) dsigma^a/dtau by classical RK4 with fixed steps.
    """
    if ode_steps < 1:
        raise ValueError("ode_steps >= 1 required")
    (s0, t0), (s1, t1) = edge
    ds, dt = s1 - s0, t1 - t0

    def rhs(tau, u):
        s, t = s0 + tau * ds, t0 + tau * dt
        x = S.point(s, t)
        sig_s, sig_t = S.derivs(s, t)
        vel = sig_s * ds + sig_t * dt             # dsigma/dtau in R^4
        m = np.zeros((conn.rep_dim, conn.rep_dim), dtype=complex)
        for a in (1, 2, 3):
            if vel[a] != 0.0:
                m += vel[a] * conn.matrix(a, x)
        return m @ u

    u = np.eye(conn.rep_dim, dtype=complex)
    h = 1.0 / ode_steps
    for k in range(ode_steps):
        tau = k * h
        k1 = rhs(tau, u)
        k2 = rhs(tau + h / 2, u + h / 2 * k1)
        k3 = rhs(tau + h / 2, u + h / 2 * k2)
        k4 = rhs(tau + h, u + h * k3)
        u = u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return u


def boundary_holonomy(conn, S, ode_steps=256):
    """Transport counterclockwise around sigma(boundary of [0,1]^2)."""
    corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]
    u = np.eye(conn.rep_dim, dtype=complex)
    for p, q in zip(corners[:-1], corners[1:]):
        u = transport_edge(conn, S, (p, q), ode_steps) @ u
    return u


def plaquette_product(conn, S, i, j, n, ode_steps=8):
    """Holonomy around the (i,j) grid plaquette, counterclockwise."""
    if not (0 <= i <= n - 1 and 0 <= j <= n - 1):
        raise ValueError("plaquette indices out of range")
    e = 1.0 / n
    c = [(i * e, j * e), ((i + 1) * e, j * e),
         ((i + 1) * e, (j + 1) * e), (i * e, (j + 1) * e), (i * e, j * e)]
    u = np.eye(conn.rep_dim, dtype=complex)
    for p, q in zip(c[:-1], c[1:]):
        u = transport_edge(conn, S, (p, q), ode_steps) @ u
    return u


# ---------------------------------------------------------------------------
# time ordering and the surface-ordered product

def time_order_compare(p1, p2):
    """-1 if p1 precedes p2, +1 if it follows, 0 if equal.

    Points are ordered by t descending, then s ascending.
    """
    s1, t1 = p1
    s2, t2 = p2
    if t1 != t2:
        return -1 if t1 > t2 else +1
    if s1 != s2:
        return -1 if s1 < s2 else +1
    return 0


def curvature_pairing(conn, S, s, t):
    """sum_{a<b} J_ab(s,t) R_ab(sigma(s,t)) with signed 2x2 minors J_ab."""
    x = S.point(s, t)
    sig_s, sig_t = S.derivs(s, t)
    out = np.zeros((conn.rep_dim, conn.rep_dim), dtype=complex)
    for a, b in WEDGE_PAIRS:
        det = sig_s[a] * sig_t[b] - sig_t[a] * sig_s[b]
        if det != 0.0:
            out += det * conn.curvature(a, b, x)
    return out


def surface_ordered_product(conn, S, n, ode_steps=8):
    """Ordered product of plaquette curvature exponentials.

    The boundary holonomy factors exactly (to O(1/n) overall) as

        H = [prod_l exp(eps^2 Ad(hat_u_l^{-1}) F(eps, l eps))]
          * [prod_j prod_k exp(eps^2 Ad(u_k^j^{-1}) F(k eps, j eps))]

    with eps = 1/n and F the signed-minor curvature pairing.  Interior
    frames u_k^j transport along the prefix of the canonical grid
    traversal (bottom edge, then per row: right across, zigzag back, up).
    The first column (s = eps) is covered by the return sweep
    (counterclockwise plaquette loops, same sign as the interior); its
    frames transport up the s = eps column after the first bottom edge.
    Rows multiply left to right with t ascending, k ascending inside a
    row.  Converges to boundary_holonomy(conn, S) at first order in 1/n.
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    e = 1.0 / n
    eye = np.eye(conn.rep_dim, dtype=complex)

    def T(p, q):
        return transport_edge(conn, S, (p, q), ode_steps)

    def omega(frame, s, t, sign):
        return expm(sign * e * e * np.linalg.solve(
            frame, curvature_pairing(conn, S, s, t) @ frame))

    first_bottom = T((0.0, 0.0), (e, 0.0))

    # return-sweep product over the s = eps column (clockwise plaquettes)
    hat = eye
    frame = first_bottom
    for l in range(n):
        if l > 0:
            frame = T((e, (l - 1) * e), (e, l * e)) @ frame
        hat = hat @ omega(frame, e, l * e, +1.0)

    # interior product; u1 is the traversal-prefix frame at (eps, j/n)
    inner = eye
    u1 = first_bottom
    for j in range(n):
        t = j * e
        frame = u1
        row = eye
        for k in range(1, n):                      # frames across row j
            row = row @ omega(frame, k * e, t, +1.0)
            frame = T((k * e, t), ((k + 1) * e, t)) @ frame
        inner = inner @ row
        if j == n - 1:
            break
        # zigzag word back to (eps, j/n), then up to (eps, (j+1)/n)
        zig = frame                                # frame is now at (1, t)
        for k in range(n, 1, -1):
            zig = T((k * e, t), (k * e, t + e)) @ zig
            zig = T((k * e, t + e), ((k - 1) * e, t + e)) @ zig
            zig = T(((k - 1) * e, t + e), ((k - 1) * e, t)) @ zig
        u1 = T((e, t), (e, t + e)) @ zig
    return hat @ inner
