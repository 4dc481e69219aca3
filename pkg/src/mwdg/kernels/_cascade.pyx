# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled moment-limiting cascades; drop-in twin of ``_cascade_py``.

Per-row loops with early exit: the numpy fallback pays for full-width vector
temporaries every tier, this version touches each row only until its cascade
stops.  Results are bit-identical (same operation order; minmod is a
selection plus one exact sign flip).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline double _minmod3(double a, double b, double c) noexcept nogil:
    cdef double m
    if a > 0.0 and b > 0.0 and c > 0.0:
        m = a
        if b < m:
            m = b
        if c < m:
            m = c
        return m
    if a < 0.0 and b < 0.0 and c < 0.0:
        m = a
        if b > m:
            m = b
        if c > m:
            m = c
        return m
    return 0.0


cdef inline double _minmod_n(double* args, int n) noexcept nogil:
    cdef double first = args[0]
    cdef double m
    cdef int i
    if first > 0.0:
        m = first
        for i in range(1, n):
            if args[i] <= 0.0:
                return 0.0
            if args[i] < m:
                m = args[i]
        return m
    if first < 0.0:
        m = first
        for i in range(1, n):
            if args[i] >= 0.0:
                return 0.0
            if args[i] > m:
                m = args[i]
        return m
    return 0.0


def cascade_1d(double[:, ::1] u, double[:, ::1] lo, double[:, ::1] hi,
               double[::1] betas):
    """In-place limit of modal rows; returns the changed-row mask."""
    cdef Py_ssize_t n_rows = u.shape[0]
    cdef Py_ssize_t n_modes = u.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] changed = np.zeros(
        n_rows, dtype=np.uint8)
    cdef Py_ssize_t r, ell
    cdef double own, fwd, bwd, lim
    with nogil:
        for r in range(n_rows):
            for ell in range(n_modes - 1, 0, -1):
                own = u[r, ell]
                fwd = betas[ell] * (hi[r, ell - 1] - u[r, ell - 1])
                bwd = betas[ell] * (u[r, ell - 1] - lo[r, ell - 1])
                lim = _minmod3(own, fwd, bwd)
                if lim != own:
                    u[r, ell] = lim
                    changed[r] = 1
                else:
                    break
    return changed.view(np.bool_)


def cascade_2d(double[:, :, ::1] u, double[:, :, ::1] xlo,
               double[:, :, ::1] xhi, double[:, :, ::1] ylo,
               double[:, :, ::1] yhi, double[::1] betas):
    """In-place 2D tensor-mode cascade by descending total degree."""
    cdef Py_ssize_t n_rows = u.shape[0]
    cdef Py_ssize_t n_modes = u.shape[1]
    cdef Py_ssize_t kmax = n_modes - 1
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] changed = np.zeros(
        n_rows, dtype=np.uint8)
    cdef Py_ssize_t r, tier, lx, ly, lx_max, lx_min
    cdef double own, base, lim
    cdef double args[5]
    cdef int n_args
    cdef bint tier_changed, tier_signal
    with nogil:
        for r in range(n_rows):
            for tier in range(2 * kmax, 0, -1):
                tier_changed = 0
                tier_signal = 0
                lx_max = tier if tier < kmax else kmax
                lx_min = tier - kmax if tier > kmax else 0
                for lx in range(lx_max, lx_min - 1, -1):
                    ly = tier - lx
                    own = u[r, lx, ly]
                    if own != 0.0:
                        tier_signal = 1
                    args[0] = own
                    n_args = 1
                    if lx > 0:
                        base = u[r, lx - 1, ly]
                        args[n_args] = betas[lx] * (xhi[r, lx - 1, ly] - base)
                        args[n_args + 1] = betas[lx] * (
                            base - xlo[r, lx - 1, ly])
                        n_args += 2
                    if ly > 0:
                        base = u[r, lx, ly - 1]
                        args[n_args] = betas[ly] * (yhi[r, lx, ly - 1] - base)
                        args[n_args + 1] = betas[ly] * (
                            base - ylo[r, lx, ly - 1])
                        n_args += 2
                    lim = _minmod_n(args, n_args)
                    if lim != own:
                        u[r, lx, ly] = lim
                        tier_changed = 1
                if tier_changed:
                    changed[r] = 1
                # an all-zero tier cannot stop the cascade
                elif tier_signal:
                    break
    return changed.view(np.bool_)
