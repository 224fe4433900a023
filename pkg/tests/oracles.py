"""Independent reference implementations used as oracles by the tests.

Nothing in this module imports the package under test. Each function solves
the same mathematical problem as some package routine but by a different
method (closed forms, arbitrary precision, or a collocation discretization
on the real interval instead of a circle basis), so agreement is evidence
rather than tautology.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import numpy as np


# ---------------------------------------------------------------------------
# closed-form Moebius image discs


def moebius_image_disc(a, b, c, e, center, radius):
    """Image of the circle |z - center| = radius under (az+b)/(cz+e).

    Returns (image_center, image_radius). The pole -e/c must lie outside
    the closed disc.
    """
    a, b, c, e, q = complex(a), complex(b), complex(c), complex(e), complex(center)
    R = float(radius)
    if c == 0:
        return (a * q + b) / e, abs(a / e) * R
    # (az+b)/(cz+e) = a/c - det/(c*(cz+e)) with det = ae - bc
    det = a * e - b * c
    p = c * q + e                       # center of the cz+e image circle
    rho = abs(c) * R
    if abs(p) <= rho:
        raise ValueError("pole on or inside the disc")
    denom = abs(p) ** 2 - rho ** 2
    inv_center = p.conjugate() / denom
    inv_radius = rho / denom
    scale = -det / c
    return a / c + scale * inv_center, abs(scale) * inv_radius


# ---------------------------------------------------------------------------
# Chebyshev collocation on [0, 1]


def chebyshev_nodes(K):
    """First-kind Chebyshev points mapped to (0, 1), decreasing order."""
    j = np.arange(K)
    return 0.5 * (1.0 + np.cos((2 * j + 1) * np.pi / (2 * K)))


def _bary_weights(K):
    # standard closed form for first-kind points; constant factors cancel
    j = np.arange(K)
    return ((-1.0) ** j) * np.sin((2 * j + 1) * np.pi / (2 * K))


def lagrange_eval(nodes, weights, pts):
    """Matrix L with L[p, k] = l_k(pts[p]) in barycentric form."""
    pts = np.asarray(pts, dtype=float)
    diff = pts[:, None] - nodes[None, :]
    exact_p, exact_k = np.nonzero(diff == 0.0)
    diff[exact_p, exact_k] = 1.0        # placeholder, rows overwritten below
    terms = weights[None, :] / diff
    L = terms / terms.sum(axis=1, keepdims=True)
    for p, k in zip(exact_p, exact_k):
        L[p, :] = 0.0
        L[p, k] = 1.0
    return L


def lagrange_eval_deriv(nodes, weights, pts):
    """Values and first derivatives of every l_k at points off the grid."""
    pts = np.asarray(pts, dtype=float)
    diff = pts[:, None] - nodes[None, :]
    if np.any(diff == 0.0):
        raise ValueError("derivative evaluation expects off-grid points")
    t = weights[None, :] / diff
    S = t.sum(axis=1, keepdims=True)
    tp = -weights[None, :] / diff ** 2  # d/du of w_k/(u - x_k)
    Sp = tp.sum(axis=1, keepdims=True)
    L = t / S
    Lp = (tp * S - t * Sp) / S ** 2
    return L, Lp


def collocation_eigenvalues_finite(moebius_params, K=32):
    """Eigenvalues of L f(x) = sum_i f(1/(e_i + x)) / (e_i + x)^2 on [0, 1],
    for branches 1/(e_i + z), by Lagrange collocation at K Chebyshev points.

    moebius_params is the list of shifts e_i (e.g. [1, 2, 3, 4]). Returned
    sorted by non-increasing modulus.
    """
    nodes = chebyshev_nodes(K)
    bw = _bary_weights(K)
    A = np.zeros((K, K))
    for e in moebius_params:
        img = 1.0 / (e + nodes)
        w = 1.0 / (e + nodes) ** 2
        A += w[:, None] * lagrange_eval(nodes, bw, img)
    vals = np.linalg.eigvals(A)
    return sorted_by_modulus(vals)


def collocation_eigenvalues_gauss(K=32, i_direct=4000, gl_points=20):
    """Eigenvalues of the full continued-fraction operator
    L f(x) = sum_{i>=1} f(1/(i+x)) / (i+x)^2 by collocation, with the branch
    sum split into a direct part (i <= i_direct) and an Euler-Maclaurin tail.

    The tail integral reduces, via u = 1/(t+x), to an integral of the
    polynomial l_k over [0, 1/(a+x)]; Gauss-Legendre with gl_points nodes is
    exact for degree <= 2*gl_points - 1 >= K - 1.
    """
    nodes = chebyshev_nodes(K)
    bw = _bary_weights(K)
    A = np.zeros((K, K))
    chunk = 512
    for lo in range(1, i_direct + 1, chunk):
        idx = np.arange(lo, min(lo + chunk, i_direct + 1), dtype=float)
        img = 1.0 / (idx[:, None] + nodes[None, :])        # (c, K)
        w = img ** 2
        L = lagrange_eval(nodes, bw, img.ravel()).reshape(img.shape[0], K, K)
        A += np.einsum("cj,cjk->jk", w, L)

    a = float(i_direct + 1)
    ua = 1.0 / (a + nodes)                                  # (K,)
    # integral part: int_0^{ua_j} l_k(u) du by Gauss-Legendre per row
    gx, gw = np.polynomial.legendre.leggauss(gl_points)
    half = 0.5 * ua
    upts = half[:, None] * (gx[None, :] + 1.0)              # (K, gl)
    Lq = lagrange_eval(nodes, bw, upts.ravel()).reshape(K, gl_points, K)
    integral = np.einsum("g,jgk->jk", gw, Lq) * half[:, None]
    # boundary corrections f(a)/2 - f'(a)/12 with f(t) = l_k(u(t)) u(t)^2
    Lv, Lp = lagrange_eval_deriv(nodes, bw, ua)
    f_a = Lv * (ua ** 2)[:, None]
    fp_a = -(Lp * (ua ** 4)[:, None] + 2.0 * Lv * (ua ** 3)[:, None])
    A += integral + 0.5 * f_a - fp_a / 12.0
    vals = np.linalg.eigvals(A)
    return sorted_by_modulus(vals)


def gauss_operator_apply(h, z, i_terms=200_000):
    """Directly sum (L h)(z) = sum_i h(1/(i+z))/(i+z)^2 for the full Gauss
    operator, by brute force over many branches plus a crude remainder check.
    Convergence is ~1/i_terms; callers pick i_terms to suit their tolerance.
    """
    i = np.arange(1, i_terms + 1, dtype=float)
    u = 1.0 / (i + z)
    return np.sum(h(u) * u ** 2)


# ---------------------------------------------------------------------------
# arbitrary-precision shifted power sums


def hzeta_reference(s, a, dps=60, head=64, bern_terms=24):
    """sum_{k>=0} (a+k)^(-s) for integer s >= 2 and complex a, Re a > 0,
    via Euler-Maclaurin in mpmath arithmetic. Scalar, slow, precise.
    """
    with mp.workdps(dps):
        am = mp.mpc(a)
        sm = mp.mpf(s)
        total = mp.mpc(0)
        for k in range(head):
            total += (am + k) ** (-sm)
        b = am + head
        total += b ** (1 - sm) / (sm - 1) + b ** (-sm) / 2
        fac = sm
        bpow = b ** (-sm - 1)
        for v in range(1, bern_terms + 1):
            total += mp.bernoulli(2 * v) / mp.factorial(2 * v) * fac * bpow
            fac *= (sm + 2 * v - 1) * (sm + 2 * v)
            bpow /= b * b
        return complex(total)


# ---------------------------------------------------------------------------
# polynomial helpers


def product_poly_coeffs(lams):
    """Ascending coefficients of prod_k (1 - lam_k z)."""
    coeffs = np.array([1.0 + 0.0j])
    for lam in lams:
        coeffs = np.convolve(coeffs, np.array([1.0, -complex(lam)]))
    return coeffs


def newton_coeffs_exact(trace_fracs):
    """Exact-rational determinant coefficients from rational traces t_1..t_M.

    c_0 = 1, c_m = -(1/m) sum_{k=1}^m t_k c_{m-k}.
    """
    M = len(trace_fracs)
    c = [Fraction(1)]
    for m in range(1, M + 1):
        acc = Fraction(0)
        for k in range(1, m + 1):
            acc += Fraction(trace_fracs[k - 1]) * c[m - k]
        c.append(-acc / m)
    return c


def sorted_by_modulus(vals, tie_rtol=1e-10):
    """Non-increasing modulus; moduli within tie_rtol of a run's leader are
    tied and ordered by increasing principal argument, with arg = -pi
    normalized to +pi. Independent restatement of the documented order.
    """
    def ang(v):
        a = float(np.angle(v))
        return np.pi if a == -np.pi else a

    vals = sorted((complex(v) for v in vals), key=lambda v: (-abs(v), ang(v)))
    out = []
    run = []
    for v in vals:
        if run and abs(v) < abs(run[0]) * (1.0 - tie_rtol):
            out.extend(sorted(run, key=ang))
            run = []
        run.append(v)
    out.extend(sorted(run, key=ang))
    return out
