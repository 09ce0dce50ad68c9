"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

The sweep order is fixed (row-major over the strict upper triangle), so the
output is a deterministic function of the input bits.
"""
import numpy as np
from numba import njit

OFF_TOL = 1e-14
MAX_SWEEPS = 100


@njit(cache=True, nogil=True)
def _jacobi_kernel(a, off_tol, max_sweeps):
    k = a.shape[0]
    v = np.eye(k, dtype=np.complex128)
    fro2 = 0.0
    for i in range(k):
        for j in range(k):
            fro2 += a[i, j].real ** 2 + a[i, j].imag ** 2
    thresh2 = (off_tol ** 2) * fro2
    sweeps = 0
    for sweep in range(max_sweeps + 1):
        off2 = 0.0
        for i in range(k):
            for j in range(k):
                if i != j:
                    off2 += a[i, j].real ** 2 + a[i, j].imag ** 2
        if off2 <= thresh2:
            break
        if sweep == max_sweeps:
            break
        sweeps += 1
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # U = [[c, s*phase], [-s*conj(phase), c]] on (p, q); A <- U* A U
                sp = s * phase
                spc = s * np.conj(phase)
                for r in range(k):
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = c * arp - spc * arq
                    a[r, q] = sp * arp + c * arq
                for r in range(k):
                    apr = a[p, r]
                    aqr = a[q, r]
                    a[p, r] = c * apr - sp * aqr
                    a[q, r] = spc * apr + c * aqr
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for r in range(k):
                    vrp = v[r, p]
                    vrq = v[r, q]
                    v[r, p] = c * vrp - spc * vrq
                    v[r, q] = sp * vrp + c * vrq
    w = np.empty(k)
    for i in range(k):
        w[i] = a[i, i].real
    return w, v, sweeps


def jacobi_eigh(a, off_tol=OFF_TOL, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v, sweeps)`` with ``w`` sorted nondecreasing and the
    columns of ``v`` the matching orthonormal eigenvectors.  The input is
    symmetrized as ``(a + a^*)/2`` before rotating.
    """
    a = np.asarray(a, dtype=np.complex128)
    work = np.ascontiguousarray(0.5 * (a + a.conj().T))
    w, v, sweeps = _jacobi_kernel(work, off_tol, max_sweeps)
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order]), sweeps
