"""Exact Gram/trace-power machinery for bipartite encodings, plus numeric
singular values for reporting.

The coefficient matrix of a bipartite function f is A with A_{xy} =
omega^{f(x,y)} (x = row).  The column Gram G = A^dagger A has entries
G_{ij} = sum_k omega^{f(k,i) - f(k,j)}, is Hermitian with diagonal d, and its
exact trace powers (tr G^2, ..., tr G^d) determine the reduced-state spectrum
via Newton's identities, so they serve as an exact local-unitary signature.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .cyclo import CyclotomicInt, CyclotomicRat
from .ring import ArityError, FiniteFunction


def _require_bipartite(f):
    if f.n != 2:
        raise ArityError("operation defined for bipartite functions (n=2)")


def gram(f):
    """Exact column Gram matrix of the coefficient matrix, as CyclotomicInt."""
    _require_bipartite(f)
    d = f.d
    vals = f.values
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            counts = [0] * d
            for k in range(d):
                counts[(vals[k * d + i] - vals[k * d + j]) % d] += 1
            row.append(CyclotomicInt.from_exponent_counts(d, counts))
        out.append(row)
    return out


def _mat_mul(a, b, d):
    size = len(a)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = CyclotomicInt.zero(d)
            for k in range(size):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _trace(m, d):
    acc = CyclotomicInt.zero(d)
    for i in range(len(m)):
        acc = acc + m[i][i]
    return acc


def trace_powers(f, k_max=None):
    """Exact (tr G^2, ..., tr G^k_max) of the unnormalized Gram; k_max = d."""
    _require_bipartite(f)
    d = f.d
    if k_max is None:
        k_max = d
    g = gram(f)
    power = g
    out = []
    for k in range(2, k_max + 1):
        power = _mat_mul(power, g, d)
        out.append(_trace(power, d))
    return tuple(out)


def normalized_trace_powers(f, k_max=None):
    """tr(rho^k) = tr(G^k) / d^(2k) as exact CyclotomicRat, k = 2..k_max."""
    d = f.d
    if k_max is None:
        k_max = d
    raw = trace_powers(f, k_max)
    return tuple(
        CyclotomicRat(t, d ** (2 * k)) for k, t in zip(range(2, k_max + 1), raw)
    )


def schmidt_rank(f):
    """Exact rank of the coefficient matrix over Q(omega_d)."""
    _require_bipartite(f)
    d = f.d
    rows = [
        [CyclotomicRat(CyclotomicInt.root_power(d, f.values[x * d + y])) for y in range(d)]
        for x in range(d)
    ]
    rank = 0
    for col in range(d):
        pivot = None
        for r in range(rank, d):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(d):
            if r != rank and not rows[r][col].is_zero():
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def is_butson_hadamard(f):
    """True iff the coefficient matrix is a Butson Hadamard H(d,d)."""
    _require_bipartite(f)
    d = f.d
    g = gram(f)
    for i in range(d):
        for j in range(d):
            want = CyclotomicInt.from_int(d, d if i == j else 0)
            if g[i][j] != want:
                return False
    return True


def _jacobi_eigenvalues(m, eps=1e-12, max_sweeps=100):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(m, dtype=float)
    size = a.shape[0]
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(size - 1):
            for q in range(p + 1, size):
                off = max(off, abs(a[p, q]))
        if off < eps:
            return np.sort(np.diag(a))[::-1]
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                if abs(apq) < eps:
                    continue
                theta = 0.5 * math.atan2(2.0 * apq, a[q, q] - a[p, p])
                c, s = math.cos(theta), math.sin(theta)
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
    raise ArithmeticError("Jacobi iteration failed to converge")


def singular_values(f):
    """Schmidt coefficients (descending) of the normalized state of f.

    Computed as square roots of eigenvalues of rho = G/d^2, via cyclic Jacobi
    on the 2d x 2d real-symmetric embedding of the Hermitian Gram matrix.
    """
    _require_bipartite(f)
    d = f.d
    g = gram(f)
    gc = np.array([[e.to_complex() for e in row] for row in g]) / d**2
    re, im = gc.real, gc.imag
    emb = np.block([[re, -im], [im, re]])
    eig = _jacobi_eigenvalues(emb)
    # each eigenvalue of rho appears twice in the embedding
    vals = eig[::2]
    return [math.sqrt(max(v, 0.0)) for v in vals]


def subspace_maximally_entangled(f, r):
    """True iff the exact spectrum of rho is 1/r with multiplicity r.

    Equivalent to r^(k-1) * tr G^k == d^(2k) for k = 1..d, checked exactly.
    """
    _require_bipartite(f)
    d = f.d
    if not (1 <= r <= d):
        raise ArityError(f"subspace dimension {r} out of range")
    raw = (CyclotomicInt.from_int(d, d * d),) + trace_powers(f, d)
    for k, t in enumerate(raw, start=1):
        if r ** (k - 1) * t != CyclotomicInt.from_int(d, d ** (2 * k)):
            return False
    return True


def char_poly_coeffs(f):
    """Coefficients (c_1, ..., c_d) of det(x I - rho) = x^d + c_1 x^(d-1) + ...

    Derived from exact trace powers via Newton's identities over Q(omega_d);
    c_1 = -tr(rho) = -1 always.
    """
    _require_bipartite(f)
    d = f.d
    raw = (CyclotomicInt.from_int(d, d * d),) + trace_powers(f, d)
    p = [None] + [CyclotomicRat(t, d ** (2 * k)) for k, t in enumerate(raw, start=1)]
    e = [CyclotomicRat.one(d)]
    for k in range(1, d + 1):
        acc = CyclotomicRat.zero(d)
        sign = 1
        for i in range(1, k + 1):
            term = e[k - i] * p[i]
            acc = acc + (term if sign > 0 else -term)
            sign = -sign
        e.append(acc * CyclotomicRat.from_fraction(d, Fraction(1, k)))
    return [(-e[k] if k % 2 == 1 else e[k]) for k in range(1, d + 1)]


def rank2_trace_formula(d, n1, n2):
    """Exact tr(rho^2) for a two-output row function hit n1 and n2 times."""
    if n1 < 1 or n2 < 1 or n1 + n2 != d:
        raise ValueError(f"invalid output counts ({n1}, {n2}) for d={d}")
    # Splitting the off-diagonal double sum by whether the two row values
    # agree: equal pairs contribute d(d-1) each, unequal pairs -d each.
    return (
        Fraction(2 * d - 1, d**2)
        + Fraction(d - 1, d**3) * (n1**2 - n1 + n2**2 - n2)
        - Fraction(2 * n1 * n2, d**3)
    )


def kummer_check(p, m, k):
    """binom(p^(m-1), k) * p^k == 0 mod p^m, via exact big integers."""
    if not (0 < k <= p ** (m - 1)):
        raise ValueError(f"k={k} out of range for p^(m-1)={p**(m-1)}")
    return (math.comb(p ** (m - 1), k) * p**k) % p**m == 0


def _fourier(d):
    omega = np.exp(2j * np.pi / d)
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return omega ** (j * k) / np.sqrt(d)


def state_vector(f):
    """Normalized complex state vector of |f> (for numeric cross-checks)."""
    omega = np.exp(2j * np.pi / f.d)
    vec = omega ** np.array(f.values, dtype=float)
    return vec / np.sqrt(len(vec))


def f_two_by_two():
    """The d=4 state whose coefficient matrix is exactly F_2 tensor F_2:
    phase 2(x_1 y_1 + x_2 y_2) under the big-endian pairing x = 2 x_1 + x_2.
    Its class representative polynomial is x y^2 + x^2 y + 2xy."""
    def phase(x):
        x1, x2 = divmod(x[0], 2)
        y1, y2 = divmod(x[1], 2)
        return 2 * (x1 * y1 + x2 * y2) % 4

    return FiniteFunction.from_callable(4, 2, phase)


def verify_lu_map_f4_f22(tol=1e-9):
    """Check the explicit local unitary mapping the F_2 tensor F_2 state to
    |xy> at d=4: the site-2 operator F_4^T (F_2 tensor F_2)^*, identity on
    site 1, compared up to global phase."""
    f4 = FiniteFunction.from_callable(4, 2, lambda x: (x[0] * x[1]) % 4)
    b = _fourier(4).T @ np.conj(np.kron(_fourier(2), _fourier(2)))
    mapped = np.kron(np.eye(4), b) @ state_vector(f_two_by_two())
    overlap = abs(np.vdot(state_vector(f4), mapped))
    return abs(overlap - 1.0) < tol
