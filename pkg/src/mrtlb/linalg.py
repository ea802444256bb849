"""Small dense linear algebra.

Hand-written kernels for the q x q matrices used throughout (q <= ~50):
LU with partial pivoting, cyclic Jacobi for symmetric spectra, and
Hessenberg + shifted complex QR for general spectra.  ``eigvals_batched``
is the LAPACK-backed throughput path used by wavevector scans; the
hand-written QR is kept as the reference it is checked against.
"""

import numpy as np

from .errors import NumericalFailure, SingularMatrix

PIVOT_TOL = 1e-13
SYMMETRY_TOL = 1e-10
JACOBI_TOL = 1e-12


def _square(a, dtype=float):
    a = np.array(a, dtype=np.result_type(np.asarray(a).dtype, dtype), copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def lu_factor(a):
    """Return ``(lu, perm)`` with ``a[perm] = L @ U`` (unit lower L packed below the diagonal)."""
    lu = _square(a)
    n = lu.shape[0]
    perm = np.arange(n)
    scale = max(float(np.abs(lu).max(initial=0.0)), 1.0)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= PIVOT_TOL * scale:
            raise SingularMatrix(f"pivot {abs(lu[p, k]):.3e} at column {k} below tolerance")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def lu_solve(lu, perm, b):
    b = np.asarray(b)
    x = np.array(b[perm], dtype=np.result_type(lu.dtype, b.dtype), copy=True)
    n = lu.shape[0]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def lu_invert(a):
    lu, perm = lu_factor(a)
    return lu_solve(lu, perm, np.eye(lu.shape[0], dtype=lu.dtype))


def sym_eigenvalues(a, tol=JACOBI_TOL, max_sweeps=100):
    """Ascending eigenvalues of a (numerically) symmetric matrix by cyclic Jacobi rotations."""
    a = _square(a)
    scale = max(float(np.abs(a).max(initial=0.0)), 1.0)
    if np.abs(a - a.T).max(initial=0.0) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    frob = max(float(np.linalg.norm(a)), 1.0)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < tol * frob:
            return np.sort(np.diag(a).copy())
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if apr == 0.0:
                    continue
                diff = a[r, r] - a[p, p]
                if abs(apr) < 1e-18 * abs(diff):
                    t = apr / diff
                else:
                    theta = diff / (2.0 * apr)
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp, colr = a[:, p].copy(), a[:, r].copy()
                a[:, p] = c * colp - s * colr
                a[:, r] = s * colp + c * colr
                rowp, rowr = a[p, :].copy(), a[r, :].copy()
                a[p, :] = c * rowp - s * rowr
                a[r, :] = s * rowp + c * rowr
                a[p, r] = a[r, p] = 0.0
    raise NumericalFailure("Jacobi iteration did not converge")


def hessenberg(a):
    """Unitary similarity reduction to upper Hessenberg form (Householder)."""
    h = _square(a, complex)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * norm_x
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _wilkinson_shift(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closest to d
    tr = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    l1, l2 = tr + disc, tr - disc
    return l1 if abs(l1 - d) < abs(l2 - d) else l2


def complex_eigenvalues(a, max_iter_per_eig=60):
    """Eigenvalues of a general complex matrix via Hessenberg reduction and shifted QR."""
    h = hessenberg(a)
    n = h.shape[0]
    eps = np.finfo(float).eps
    # floor for the deflation test when neighbouring diagonal entries vanish
    floor = eps * float(np.linalg.norm(h))
    hi = n - 1
    iters = 0
    since_deflation = 0
    while hi > 0:
        # locate the start of the trailing unreduced block
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            if sub <= eps * (abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])) or sub <= floor:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            since_deflation = 0
            continue
        iters += 1
        since_deflation += 1
        if iters > max_iter_per_eig * n:
            raise NumericalFailure("shifted QR did not converge")
        if since_deflation % 11 == 10:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        blk = h[lo:hi + 1, lo:hi + 1]
        m = blk.shape[0]
        blk -= mu * np.eye(m)
        rotations = []
        for j in range(m - 1):
            x, y = blk[j, j], blk[j + 1, j]
            r = np.hypot(abs(x), abs(y))
            if r == 0.0:
                c, s = 1.0 + 0j, 0j
            else:
                c, s = x / r, y / r
            rowj, rowj1 = blk[j, j:].copy(), blk[j + 1, j:].copy()
            blk[j, j:] = np.conj(c) * rowj + np.conj(s) * rowj1
            blk[j + 1, j:] = -s * rowj + c * rowj1
            rotations.append((c, s))
        for j, (c, s) in enumerate(rotations):
            top = min(j + 2, m - 1)
            colj, colj1 = blk[:top + 1, j].copy(), blk[:top + 1, j + 1].copy()
            blk[:top + 1, j] = c * colj + s * colj1
            blk[:top + 1, j + 1] = -np.conj(s) * colj + np.conj(c) * colj1
        blk += mu * np.eye(m)
    return np.diag(h).copy()


def eigvals_batched(stack):
    """Eigenvalues of a stack of square matrices (LAPACK); shape ``(..., n)``."""
    return np.linalg.eigvals(np.asarray(stack))
