"""Compact-group Lie algebra bases, structure constants and index tensors.

Conventions: generators E^alpha are anti-Hermitian, orthonormal under
<A, B> = -Tr[A B].  Structure constants c[gamma, alpha, beta] =
-Tr[E^gamma [E^alpha, E^beta]] are real and totally antisymmetric.
"""

import numpy as np


class LieBasis:
    """Orthonormal anti-Hermitian basis of u(1), su(n) or so(n)."""

    def __init__(self, kind, n):
        kind = kind.upper()
        if kind == "U1":
            n = 1
        if kind not in ("U1", "SU", "SO"):
            raise ValueError(f"unknown group kind {kind!r}")
        if kind == "SU" and n < 2:
            raise ValueError("SU(n) needs n >= 2")
        if kind == "SO" and n < 2:
            raise ValueError("SO(n) needs n >= 2")
        self.kind = kind
        self.n = n
        self.gens = _generators(kind, n)
        self.dim = len(self.gens)
        self._c = None

    def __repr__(self):
        return f"LieBasis({self.kind}, {self.n})"

    @property
    def structure_constants(self):
        """c[gamma, alpha, beta] = -Tr[E^gamma [E^alpha, E^beta]]."""
        if self._c is None:
            E = self.gens
            d = self.dim
            c = np.zeros((d, d, d))
            for a in range(d):
                for b in range(d):
                    comm = E[a] @ E[b] - E[b] @ E[a]
                    for g in range(d):
                        val = -np.trace(E[g] @ comm)
                        if abs(val.imag) > 1e-12:
                            raise ValueError("non-real structure constant")
                        c[g, a, b] = val.real
            self._c = c
        return self._c

    def check_orthonormal(self):
        """Max deviation of -Tr[E^a E^b] from the identity matrix."""
        d = self.dim
        g = np.array([[-np.trace(self.gens[a] @ self.gens[b])
                       for b in range(d)] for a in range(d)])
        return float(np.max(np.abs(g - np.eye(d))))


def _generators(kind, n):
    if kind == "U1":
        return [np.array([[1j]])]
    gens = []
    if kind == "SU":
        # Generalized Gell-Mann matrices, scaled so -Tr[E E] = 1.
        for j in range(n):
            for k in range(j + 1, n):
                s = np.zeros((n, n), dtype=complex)
                s[j, k] = s[k, j] = 1.0
                gens.append(1j * s / np.sqrt(2.0))
                a = np.zeros((n, n), dtype=complex)
                a[j, k] = -1j
                a[k, j] = 1j
                gens.append(1j * a / np.sqrt(2.0))
        for l in range(1, n):
            d = np.zeros((n, n), dtype=complex)
            d[:l, :l] = np.eye(l)
            d[l, l] = -l
            d *= np.sqrt(2.0 / (l * (l + 1)))
            gens.append(1j * d / np.sqrt(2.0))
        return gens
    # SO(n): real antisymmetric e_jk - e_kj, normalized.
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = -1.0
            gens.append(m / np.sqrt(2.0))
    return gens


def special_tensors(n):
    """Index tensors I, J, K on (C^n)^{x2}; row (a,b), column (c,d).

    I^{ab}_{cd} = delta^a_c delta^b_d, J = delta^a_d delta^b_c,
    K = delta^a_b delta^c_d.
    """
    I = np.eye(n * n)
    J = np.zeros((n, n, n, n))
    K = np.zeros((n, n, n, n))
    for a in range(n):
        for b in range(n):
            J[a, b, b, a] = 1.0
            K[a, a, b, b] = 1.0
    return I, J.reshape(n * n, n * n), K.reshape(n * n, n * n)


def casimir_tensor(basis):
    """sum_alpha E^alpha (x) E^alpha as an n^2 x n^2 matrix."""
    n = basis.n
    out = np.zeros((n * n, n * n), dtype=complex)
    for E in basis.gens:
        out += np.kron(E, E)
    return out


def mu_contract(T, n):
    """Index contraction mu: mu(X (x) Y) = X . Y (matrix product)."""
    T4 = np.asarray(T).reshape(n, n, n, n)
    return np.einsum("abbd->ad", T4)


def casimir_scalar(basis):
    """lambda with mu(casimir) = lambda * Id; raises if not a multiple of Id.

    U(1): -1.  SU(n): 1/n - n.  SO(n): (1 - n)/2.
    """
    n = basis.n
    M = mu_contract(casimir_tensor(basis), n)
    lam = np.trace(M) / n
    if np.max(np.abs(M - lam * np.eye(n))) > 1e-10:
        raise ValueError("mu(casimir) is not a multiple of the identity")
    if abs(lam.imag) > 1e-12:
        raise ValueError("mu(casimir) not real")
    return float(lam.real)
