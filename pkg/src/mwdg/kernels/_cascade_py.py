"""Numpy implementation of the moment-limiting cascades.

Each row of the batch is one independent scalar cascade (one element in one
limiting channel).  Coefficients are limited from the highest mode downward;
a row drops out of the sweep the first time its coefficient survives the
minmod unchanged.  The batch is vectorized with a shrinking active-row index
set, which keeps this fallback usable even for large flagged sets.

The Cython twin (`_cascade.pyx`) must stay drop-in compatible: same
signatures, same in-place semantics, bit-identical output.
"""

import numpy as np


def _minmod_stack(args):
    """Row-wise minmod of a list of equally shaped arrays.

    Returns sign(a1) * min|a_r| where all arguments share a strict sign,
    else 0.  Exactly reproduces a surviving first argument bit-for-bit
    (sign(a) * |a| == a in IEEE arithmetic).
    """
    first = args[0]
    sign = np.sign(first)
    same = sign != 0.0
    mag = np.abs(first)
    for a in args[1:]:
        same &= np.sign(a) == sign
        np.minimum(mag, np.abs(a), out=mag)
    return np.where(same, sign * mag, 0.0)


def cascade_1d(u, lo, hi, betas):
    """Limit modal rows in place.

    Args:
        u: (B, k+1) coefficients of the owned elements, modified in place.
        lo, hi: (B, k+1) pre-limit coefficients of the lower/upper neighbors.
        betas: (k+1,) mode scalings; entry 0 is unused.

    Returns:
        Boolean (B,) mask of rows that changed at all.
    """
    n_rows, n_modes = u.shape
    changed = np.zeros(n_rows, dtype=bool)
    active = np.arange(n_rows)
    for ell in range(n_modes - 1, 0, -1):
        own = u[active, ell]
        fwd = betas[ell] * (hi[active, ell - 1] - u[active, ell - 1])
        bwd = betas[ell] * (u[active, ell - 1] - lo[active, ell - 1])
        limited = _minmod_stack([own, fwd, bwd])
        mod = limited != own
        hit = active[mod]
        u[hit, ell] = limited[mod]
        changed[hit] = True
        active = hit
        if active.size == 0:
            break
    return changed


def cascade_2d(u, xlo, xhi, ylo, yhi, betas):
    """2D tensor-mode cascade, descending by total degree.

    Within a tier every coefficient reads only next-lower-tier values, so the
    in-tier update order is immaterial.  A row leaves the sweep after the
    first tier in which a nonzero coefficient survived unchanged; a tier
    whose coefficients are all exactly zero carries no signal and cannot
    stop the cascade (this is what makes y-constant data reduce to the 1D
    rule row by row).  The (0, 0) mode is never touched.

    Args:
        u: (B, k+1, k+1) coefficients, modified in place.
        xlo, xhi, ylo, yhi: neighbor coefficients in -x, +x, -y, +y.
        betas: (k+1,) mode scalings.

    Returns:
        Boolean (B,) mask of rows that changed at all.
    """
    n_rows, n_modes, _ = u.shape
    kmax = n_modes - 1
    changed = np.zeros(n_rows, dtype=bool)
    active = np.arange(n_rows)
    for tier in range(2 * kmax, 0, -1):
        tier_changed = np.zeros(active.size, dtype=bool)
        tier_signal = np.zeros(active.size, dtype=bool)
        for lx in range(min(tier, kmax), max(0, tier - kmax) - 1, -1):
            ly = tier - lx
            own = u[active, lx, ly]
            tier_signal |= own != 0.0
            args = [own]
            if lx > 0:
                base = u[active, lx - 1, ly]
                args.append(betas[lx] * (xhi[active, lx - 1, ly] - base))
                args.append(betas[lx] * (base - xlo[active, lx - 1, ly]))
            if ly > 0:
                base = u[active, lx, ly - 1]
                args.append(betas[ly] * (yhi[active, lx, ly - 1] - base))
                args.append(betas[ly] * (base - ylo[active, lx, ly - 1]))
            limited = _minmod_stack(args)
            mod = limited != own
            u[active[mod], lx, ly] = limited[mod]
            tier_changed |= mod
        changed[active[tier_changed]] = True
        active = active[tier_changed | ~tier_signal]
        if active.size == 0:
            break
    return changed
