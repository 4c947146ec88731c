# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels; mirrors ``_pykernels`` exactly."""

import numpy as np
from libc.math cimport exp


def reduce_points(z, gen_a, gen_b, long max_iter, double tol):
    cdef double complex[::1] zin = np.ascontiguousarray(np.ravel(z), dtype=np.complex128)
    cdef double complex[::1] ga = np.ascontiguousarray(gen_a, dtype=np.complex128)
    cdef double complex[::1] gb = np.ascontiguousarray(gen_b, dtype=np.complex128)
    cdef Py_ssize_t n = zin.shape[0]
    cdef Py_ssize_t m = ga.shape[0]
    out_w = np.empty(n, dtype=np.complex128)
    out_d = np.empty(n, dtype=np.complex128)
    out_a = np.empty(n, dtype=np.complex128)
    out_b = np.empty(n, dtype=np.complex128)
    out_s = np.zeros(n, dtype=np.int64)
    cdef double complex[::1] w = out_w
    cdef double complex[::1] dv = out_d
    cdef double complex[::1] ra = out_a
    cdef double complex[::1] rb = out_b
    cdef long long[::1] st = out_s
    cdef double threshold = exp(-tol)
    cdef Py_ssize_t i, k, best
    cdef long it
    cdef long n_failed = 0
    cdef double zr, zi, dr, di, mag2, best_mag2, ar, ai, br, bi
    cdef double complex zc, d, sa, sb, cur_d, cur_a, cur_b, old_a
    with nogil:
        for i in range(n):
            zc = zin[i]
            cur_d = 1.0
            cur_a = 1.0
            cur_b = 0.0
            it = 0
            while True:
                zr = zc.real
                zi = zc.imag
                best = -1
                best_mag2 = threshold
                for k in range(m):
                    ar = ga[k].real
                    ai = ga[k].imag
                    br = gb[k].real
                    bi = gb[k].imag
                    # conj(b) z + conj(a)
                    dr = br * zr + bi * zi + ar
                    di = br * zi - bi * zr - ai
                    mag2 = dr * dr + di * di
                    if mag2 < best_mag2:
                        best_mag2 = mag2
                        best = k
                if best < 0:
                    break
                if it >= max_iter:
                    n_failed += 1
                    break
                sa = ga[best]
                sb = gb[best]
                d = sb.conjugate() * zc + sa.conjugate()
                zc = (sa * zc + sb) / d
                cur_d = cur_d / (d * d)
                old_a = cur_a
                cur_a = sa * old_a + sb * cur_b.conjugate()
                cur_b = sa * cur_b + sb * old_a.conjugate()
                it += 1
            w[i] = zc
            dv[i] = cur_d
            ra[i] = cur_a
            rb[i] = cur_b
            st[i] = it
    return out_w, out_d, out_a, out_b, out_s, n_failed
