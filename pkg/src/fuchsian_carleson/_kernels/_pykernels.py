"""Pure numpy implementation of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; selected
automatically when the extension is not built.
"""

import numpy as np


def reduce_points(z, gen_a, gen_b, max_iter, tol):
    """Greedy descent of points towards the Dirichlet domain at 0.

    At each step the letter ``s`` (columns of ``gen_a``/``gen_b``) maximizing
    ``|s'(z)| = 1 / |conj(b) z + conj(a)|^2`` is applied while
    ``log|s'(z)| > tol``.  Ties go to the lowest column.

    Returns ``(w, deriv, ra, rb, steps, n_failed)`` where ``w = g(z)`` for the
    accumulated element ``g = (ra, rb)`` and ``deriv = g'(z)``.
    """
    z = np.array(z, dtype=complex, copy=True).ravel()
    gen_a = np.asarray(gen_a, dtype=complex)
    gen_b = np.asarray(gen_b, dtype=complex)
    ca = np.conj(gen_a)
    cb = np.conj(gen_b)
    n = z.size
    deriv = np.ones(n, dtype=complex)
    ra = np.ones(n, dtype=complex)
    rb = np.zeros(n, dtype=complex)
    steps = np.zeros(n, dtype=np.int64)
    threshold = np.exp(-tol)
    active = np.arange(n)
    it = 0
    while active.size and it < max_iter:
        za = z[active]
        den = cb[None, :] * za[:, None] + ca[None, :]
        mag2 = den.real**2 + den.imag**2
        j = np.argmin(mag2, axis=1)
        rows = np.arange(active.size)
        move = mag2[rows, j] < threshold
        if not move.any():
            break
        active = active[move]
        j = j[move]
        d = den[rows[move], j]
        sa = gen_a[j]
        sb = gen_b[j]
        z[active] = (sa * za[move] + sb) / d
        deriv[active] /= d * d
        old_a = ra[active]
        old_b = rb[active]
        ra[active] = sa * old_a + sb * np.conj(old_b)
        rb[active] = sa * old_b + sb * np.conj(old_a)
        steps[active] += 1
        it += 1
    n_failed = 0
    if active.size and it >= max_iter:
        den = cb[None, :] * z[active][:, None] + ca[None, :]
        n_failed = int(np.count_nonzero((den.real**2 + den.imag**2).min(axis=1) < threshold))
    return z, deriv, ra, rb, steps, n_failed
