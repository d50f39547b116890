"""Hot numeric kernels with a numba path and a pure-numpy path.

Each kernel exists twice: ``_<name>_numba`` (explicit loops, compiled when
numba is present) and ``_<name>_numpy`` (vectorized slices).  The public
wrappers dispatch on :data:`entropic_bell._accel.USE_NUMBA`.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit
from .errors import ConvergenceError

#: Off-diagonal Frobenius norm at which a Jacobi sweep loop stops
#: (scaled by ``max(1, ||A||_F)``).
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
#: Probabilities below this magnitude count as zero in ``-p log p``.
ZERO_CELL = 1e-15


@njit(cache=True, nogil=True)
def _jacobi_eigh_numba(a_in, tol, max_sweeps):
    n = a_in.shape[0]
    a = a_in.copy()
    v = np.eye(n, dtype=np.complex128)
    sweeps = -1
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= tol:
            sweeps = sweep
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag == 0.0:
                    continue
                phase = g / ag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * ag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                r_pp = complex(c, 0.0)
                r_pq = complex(s, 0.0)
                r_qp = -s * phase.conjugate()
                r_qq = c * phase.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * r_pp + akq * r_qp
                    a[k, q] = akp * r_pq + akq * r_qq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = r_pp.conjugate() * apk + r_qp.conjugate() * aqk
                    a[q, k] = r_pq.conjugate() * apk + r_qq.conjugate() * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * r_pp + vkq * r_qp
                    v[k, q] = vkp * r_pq + vkq * r_qq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(-w, kind="mergesort")
    return w[order], v[:, order], sweeps


def _jacobi_eigh_numpy(a_in, tol, max_sweeps):
    a = np.array(a_in, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    off_mask = ~np.eye(n, dtype=bool)
    sweeps = -1
    for sweep in range(max_sweeps + 1):
        if np.linalg.norm(a[off_mask]) <= tol:
            sweeps = sweep
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag == 0.0:
                    continue
                phase_c = (g / ag).conjugate()
                theta = (a[q, q].real - a[p, p].real) / (2.0 * ag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0 / (abs(theta) + math.hypot(theta, 1.0)), theta)
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                r_qp = -s * phase_c
                r_qq = c * phase_c
                for m in (a, v):
                    col_p = m[:, p].copy()
                    col_q = m[:, q]
                    m[:, p] = c * col_p + r_qp * col_q
                    m[:, q] = s * col_p + r_qq * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p + r_qp.conjugate() * row_q
                a[q, :] = s * row_p + r_qq.conjugate() * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    w = np.real(np.diag(a)).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order], sweeps


@njit(cache=True, nogil=True)
def _entropy_bits_numba(p, zero):
    flat = p.ravel()
    h = 0.0
    for i in range(flat.size):
        x = flat[i]
        if x > zero:
            h -= x * math.log2(x)
    return h


def _entropy_bits_numpy(p, zero):
    x = np.asarray(p, dtype=np.float64).ravel()
    x = x[x > zero]
    return float(-np.sum(x * np.log2(x)))


def jacobi_eigh(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS, use_numba=None):
    """Eigen-decompose a complex Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted descending
    and eigenvectors as the matching columns.  Raises
    :class:`~entropic_bell.errors.ConvergenceError` after ``max_sweeps`` sweeps.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scaled_tol = tol * max(1.0, float(np.linalg.norm(a)))
    if use_numba is None:
        use_numba = USE_NUMBA
    kernel = _jacobi_eigh_numba if use_numba else _jacobi_eigh_numpy
    w, v, sweeps = kernel(a, scaled_tol, max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge within {max_sweeps} sweeps"
        )
    return w, v


def entropy_bits(p, zero=ZERO_CELL, use_numba=None):
    """``-sum p log2 p`` over all cells of ``p``, skipping cells ``<= zero``."""
    p = np.ascontiguousarray(p, dtype=np.float64)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        return float(_entropy_bits_numba(p, zero))
    return _entropy_bits_numpy(p, zero)


@njit(cache=True, nogil=True)
def _xlog2x(x, zero):
    return x * math.log2(x) if x > zero else 0.0


@njit(cache=True, nogil=True)
def _joint3_entropies_numba(p, zero):
    nx, ny, nz = p.shape
    px = np.zeros(nx)
    py = np.zeros(ny)
    pz = np.zeros(nz)
    pxy = np.zeros((nx, ny))
    pxz = np.zeros((nx, nz))
    pyz = np.zeros((ny, nz))
    hxyz = 0.0
    for x in range(nx):
        for y in range(ny):
            for z in range(nz):
                v = p[x, y, z]
                px[x] += v
                py[y] += v
                pz[z] += v
                pxy[x, y] += v
                pxz[x, z] += v
                pyz[y, z] += v
                hxyz -= _xlog2x(v, zero)
    out = np.zeros(7)
    for x in range(nx):
        out[0] -= _xlog2x(px[x], zero)
        for y in range(ny):
            out[3] -= _xlog2x(pxy[x, y], zero)
        for z in range(nz):
            out[4] -= _xlog2x(pxz[x, z], zero)
    for y in range(ny):
        out[1] -= _xlog2x(py[y], zero)
        for z in range(nz):
            out[5] -= _xlog2x(pyz[y, z], zero)
    for z in range(nz):
        out[2] -= _xlog2x(pz[z], zero)
    out[6] = hxyz
    return out


def _joint3_entropies_numpy(p, zero):
    parts = (
        p.sum(axis=(1, 2)), p.sum(axis=(0, 2)), p.sum(axis=(0, 1)),
        p.sum(axis=2), p.sum(axis=1), p.sum(axis=0), p,
    )
    return np.array([_entropy_bits_numpy(q, zero) for q in parts])


def joint3_entropies(p, zero=ZERO_CELL, use_numba=None):
    """Entropies of a rank-3 joint and all its marginals, in bits.

    Order: ``H(X), H(Y), H(Z), H(X,Y), H(X,Z), H(Y,Z), H(X,Y,Z)``.
    """
    p = np.ascontiguousarray(p, dtype=np.float64)
    if p.ndim != 3:
        raise ValueError(f"expected a rank-3 array, got shape {p.shape}")
    if use_numba is None:
        use_numba = USE_NUMBA
    kernel = _joint3_entropies_numba if use_numba else _joint3_entropies_numpy
    return kernel(p, zero)
