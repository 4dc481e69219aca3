"""Hierarchical moment limiting of modal fields.

The limiter minmods each modal coefficient against scaled differences of the
next-lower coefficient across neighbor elements, starting from the highest
mode and stopping at the first unchanged coefficient; mode 0 (the cell
average) is never altered, so the scheme stays conservative to the bit.

For systems in 1D the cascade runs on characteristic variables (the modal
vectors of the element and its neighbors rotated by the inverse right
eigenvector matrix, evaluated once at the element's average state).  In 2D
the cascade runs component-wise: the single minmod over mixed x/y candidates
has no consistent meaning across two different characteristic bases.

For gas dynamics an admissibility sweep re-checks density/pressure/energy at
the element node set after limiting and progressively drops the element to
lower order (always keeping the average) when a value falls below the
positivity floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import tables
from .boundary import BoundarySet1D, BoundarySet2D
from .errors import InvalidStateError
from .fields import SQRT2, DgField1D, DgField2D
from .kernels import cascade_1d, cascade_2d

_EIGEN_TINY = 1e-12


@dataclass
class LimiterConfig:
    enabled: bool = True
    characteristic: bool = True
    positivity_floor: float = 1e-13  # relative to the element's own scale


def minmod(values) -> float:
    """sign(a1) * min|a_r| when every argument shares a strict sign, else 0."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("minmod of an empty list")
    first = vals[0]
    if first == 0.0:
        return 0.0
    sign = 1.0 if first > 0.0 else -1.0
    mag = abs(first)
    for v in vals[1:]:
        if v * sign <= 0.0:
            return 0.0
        mag = min(mag, abs(v))
    return sign * mag


def mode_scalings(k: int) -> np.ndarray:
    """Cascade scalings sqrt(l - 1/2) / sqrt(l + 1/2) for l = 0..k (entry 0
    is a placeholder; mode 0 is never limited)."""
    ell = np.arange(k + 1, dtype=float)
    out = np.zeros(k + 1)
    out[1:] = np.sqrt(ell[1:] - 0.5) / np.sqrt(ell[1:] + 0.5)
    return out


def moment_limit_element_1d(u, lo, hi) -> np.ndarray:
    """Scalar cascade on a single element; arrays are (k+1,) mode vectors of
    the element and its pre-limit neighbors.  Returns the limited copy."""
    rows = np.array(u, dtype=float)[None, :].copy()
    cascade_1d(rows, np.asarray(lo, float)[None, :],
               np.asarray(hi, float)[None, :], mode_scalings(rows.shape[1] - 1))
    return rows[0]


def moment_limit_element_2d(u, xlo, xhi, ylo, yhi) -> np.ndarray:
    rows = np.array(u, dtype=float)[None].copy()
    cascade_2d(rows, np.asarray(xlo, float)[None], np.asarray(xhi, float)[None],
               np.asarray(ylo, float)[None], np.asarray(yhi, float)[None],
               mode_scalings(rows.shape[1] - 1))
    return rows[0]


def characteristic_moment_limit(field: DgField1D, element: int, law,
                                bcs: BoundarySet1D, t: float = 0.0,
                                config: LimiterConfig | None = None) -> None:
    """Limit one element of a system field on characteristic variables
    (the element's and its neighbors' mode vectors rotated by the inverse
    right-eigenvector matrix at the element's average state), in place."""
    flags = np.zeros(field.mesh.n_elements, dtype=bool)
    flags[element] = True
    limit_field_1d(field, flags, law, bcs, t,
                   config or LimiterConfig(characteristic=True))


def _gather_neighbors_1d(field: DgField1D, idx, bcs: BoundarySet1D, t: float):
    """Pre-limit neighbor coefficients for the selected elements, with ghost
    elements materialized at the domain ends."""
    coeffs = field.coeffs
    n = field.mesh.n_elements
    lo = coeffs[:, np.maximum(idx - 1, 0), :].copy()
    hi = coeffs[:, np.minimum(idx + 1, n - 1), :].copy()
    if idx.size and idx[0] == 0:
        lo[:, 0, :] = bcs.ghost(field, "left", t)
    if idx.size and idx[-1] == n - 1:
        hi[:, -1, :] = bcs.ghost(field, "right", t)
    return lo, hi


def limit_field_1d(field: DgField1D, flags, law, bcs: BoundarySet1D,
                   t: float, config: LimiterConfig) -> None:
    """Apply the cascade to the flagged elements of a 1D field, in place."""
    if field.k == 0 or not config.enabled:
        return
    idx = np.flatnonzero(flags)
    if idx.size == 0:
        return
    betas = mode_scalings(field.k)
    own = field.coeffs[:, idx, :].copy()       # (c, f, k+1)
    lo, hi = _gather_neighbors_1d(field, idx, bcs, t)
    averages = own[:, :, 0] / SQRT2

    use_char = (config.characteristic and getattr(law, "has_eigen", False))
    if use_char:
        adm = law.is_admissible(averages)
        if not np.all(adm):
            bad = int(idx[np.flatnonzero(~adm)[0]])
            raise InvalidStateError(
                f"non-admissible cell average in element {bad}")
        _, right, left = law.eigen(averages)
        right = np.ascontiguousarray(right)
        left = np.ascontiguousarray(left)
        # guard: a (numerically) defective rotation falls back to components
        sane = np.isfinite(right).all(axis=(-2, -1))
        sane &= np.abs(np.linalg.det(right)) > _EIGEN_TINY
        w = np.einsum("fab,bfk->afk", left, own)
        wlo = np.einsum("fab,bfk->afk", left, lo)
        whi = np.einsum("fab,bfk->afk", left, hi)
        if not sane.all():
            keep = ~sane
            w[:, keep] = own[:, keep]
            wlo[:, keep] = lo[:, keep]
            whi[:, keep] = hi[:, keep]
        w = np.ascontiguousarray(w)
        cascade_1d(w.reshape(-1, field.k + 1),
                   np.ascontiguousarray(wlo).reshape(-1, field.k + 1),
                   np.ascontiguousarray(whi).reshape(-1, field.k + 1), betas)
        new = np.einsum("fab,bfk->afk", right, w)
        if not sane.all():
            new[:, ~sane] = w[:, ~sane]
        new[:, :, 0] = own[:, :, 0]  # averages preserved exactly
    else:
        new = own
        cascade_1d(new.reshape(-1, field.k + 1), lo.reshape(-1, field.k + 1),
                   hi.reshape(-1, field.k + 1), betas)
    field.coeffs[:, idx, :] = new


def enforce_admissibility_1d(field: DgField1D, law, bcs, t,
                             config: LimiterConfig) -> None:
    """Positivity fallback sweep over the whole field.

    Elements whose density/pressure/energy dip below the (relative) floor at
    any check node lose their modes >= 2, get the linear term re-limited
    against neighbor averages, and as a last resort drop to the average.  A
    non-admissible average itself is unrecoverable and raises.
    """
    tab = tables(field.k)
    coeffs = field.coeffs
    avg = field.cell_averages()
    adm = law.is_admissible(avg)
    if not np.all(adm):
        raise InvalidStateError(
            f"non-admissible cell average in element "
            f"{int(np.flatnonzero(~adm)[0])}")

    def failing(subset=None):
        c = coeffs if subset is None else coeffs[:, subset, :]
        nodes = np.einsum("cjl,ln->cjn", c, tab.phi_check)
        rho = nodes[0]
        p = law.pressure(nodes, check=False)
        en = nodes[-1]
        a = avg if subset is None else avg[:, subset]
        floor_r = config.positivity_floor * np.abs(a[0])[:, None]
        floor_p = config.positivity_floor * np.abs(
            law.pressure(a, check=False))[:, None]
        ok = (rho > floor_r) & (p > floor_p) & (en > 0.0)
        return ~ok.all(axis=-1)

    scan = np.arange(field.mesh.n_elements)
    bad = scan[failing()]
    if bad.size == 0:
        return
    if field.k >= 2:
        coeffs[:, bad, 2:] = 0.0
    # re-limit the linear term against neighbor averages
    if field.k >= 1:
        betas = mode_scalings(field.k)
        lo, hi = _gather_neighbors_1d(field, bad, bcs, t)
        own = coeffs[:, bad, 1]
        fwd = betas[1] * (hi[:, :, 0] - coeffs[:, bad, 0])
        bwd = betas[1] * (coeffs[:, bad, 0] - lo[:, :, 0])
        sign = np.sign(own)
        same = (sign != 0) & (np.sign(fwd) == sign) & (np.sign(bwd) == sign)
        lim = np.where(same, sign * np.minimum(np.abs(own), np.minimum(
            np.abs(fwd), np.abs(bwd))), 0.0)
        coeffs[:, bad, 1] = lim
        still = bad[failing(bad)]
        if still.size:
            coeffs[:, still, 1:] = 0.0


# -- 2D ----------------------------------------------------------------------

def _gather_neighbors_2d(field: DgField2D, ii, jj, bcs: BoundarySet2D,
                         t: float):
    coeffs = field.coeffs
    nx, ny = field.mesh.nx, field.mesh.ny
    xlo = coeffs[:, np.maximum(ii - 1, 0), jj].copy()
    xhi = coeffs[:, np.minimum(ii + 1, nx - 1), jj].copy()
    ylo = coeffs[:, ii, np.maximum(jj - 1, 0)].copy()
    yhi = coeffs[:, ii, np.minimum(jj + 1, ny - 1)].copy()
    if np.any(ii == 0):
        ghost = bcs.ghost(field, "xlo", t)
        sel = ii == 0
        xlo[:, sel] = ghost[:, jj[sel]]
    if np.any(ii == nx - 1):
        ghost = bcs.ghost(field, "xhi", t)
        sel = ii == nx - 1
        xhi[:, sel] = ghost[:, jj[sel]]
    if np.any(jj == 0):
        ghost = bcs.ghost(field, "ylo", t)
        sel = jj == 0
        ylo[:, sel] = ghost[:, ii[sel]]
    if np.any(jj == ny - 1):
        ghost = bcs.ghost(field, "yhi", t)
        sel = jj == ny - 1
        yhi[:, sel] = ghost[:, ii[sel]]
    return xlo, xhi, ylo, yhi


def limit_field_2d(field: DgField2D, mask, law, bcs: BoundarySet2D,
                   t: float, config: LimiterConfig) -> None:
    """Apply the tensor cascade to the masked elements, in place."""
    if field.k == 0 or not config.enabled:
        return
    ii, jj = np.nonzero(mask)
    if ii.size == 0:
        return
    betas = mode_scalings(field.k)
    own = field.coeffs[:, ii, jj].copy()       # (c, f, k+1, k+1)
    xlo, xhi, ylo, yhi = _gather_neighbors_2d(field, ii, jj, bcs, t)
    k1 = field.k + 1
    cascade_2d(own.reshape(-1, k1, k1), xlo.reshape(-1, k1, k1),
               xhi.reshape(-1, k1, k1), ylo.reshape(-1, k1, k1),
               yhi.reshape(-1, k1, k1), betas)
    field.coeffs[:, ii, jj] = own


def _failing_cells_2d(coeffs_sub, avg_sub, law, tab, floor):
    """Indices (into the batch axis) of cells violating positivity at the
    2D check-point list.  ``coeffs_sub``: (c, b, k+1, k+1)."""
    c, b, k1, _ = coeffs_sub.shape
    phi2 = tab.phi_check_2d.reshape(k1 * k1, -1)
    nodes = coeffs_sub.reshape(c, b, k1 * k1) @ phi2     # (c, b, npts)
    rho = nodes[0]
    p = law.pressure(nodes, check=False)
    en = nodes[-1]
    floor_r = floor * np.abs(avg_sub[0])[:, None]
    floor_p = floor * np.abs(law.pressure(avg_sub, check=False))[:, None]
    ok = (rho > floor_r) & (p > floor_p) & (en > 0.0)
    return np.flatnonzero(~ok.all(axis=-1))


def enforce_admissibility_2d(field: DgField2D, law, bcs, t,
                             config: LimiterConfig, mask=None) -> None:
    """Positivity fallback sweep; ``mask`` restricts it to a cell subset
    (e.g. the cells a limiter pass just touched)."""
    tab = tables(field.k)
    coeffs = field.coeffs
    k1 = field.k + 1
    if mask is None:
        ii, jj = np.divmod(np.arange(field.mesh.nx * field.mesh.ny),
                           field.mesh.ny)
        sub = coeffs.reshape(field.ncomp, -1, k1, k1)
    else:
        ii, jj = np.nonzero(mask)
        if ii.size == 0:
            return
        sub = coeffs[:, ii, jj]
    avg = sub[:, :, 0, 0] / 2.0
    adm = law.is_admissible(avg)
    if not np.all(adm):
        pos = int(np.flatnonzero(~adm)[0])
        raise InvalidStateError(
            f"non-admissible cell average in element "
            f"({ii[pos]}, {jj[pos]})")

    floor = config.positivity_floor
    bad = _failing_cells_2d(sub, avg, law, tab, floor)
    if bad.size == 0:
        return
    bi, bj = ii[bad], jj[bad]
    lx, ly = np.meshgrid(np.arange(k1), np.arange(k1), indexing="ij")
    high = (lx + ly) >= 2
    patch = coeffs[:, bi, bj]
    patch[:, :, high] = 0.0
    # re-limit the two linear modes against neighbor averages
    if field.k >= 1:
        betas = mode_scalings(field.k)
        xlo, xhi, ylo, yhi = _gather_neighbors_2d(field, bi, bj, bcs, t)

        def relimit(own, fwd, bwd):
            sign = np.sign(own)
            same = (sign != 0) & (np.sign(fwd) == sign) & (np.sign(bwd) == sign)
            return np.where(same, sign * np.minimum(
                np.abs(own), np.minimum(np.abs(fwd), np.abs(bwd))), 0.0)

        base = patch[:, :, 0, 0]
        patch[:, :, 1, 0] = relimit(
            patch[:, :, 1, 0], betas[1] * (xhi[:, :, 0, 0] - base),
            betas[1] * (base - xlo[:, :, 0, 0]))
        patch[:, :, 0, 1] = relimit(
            patch[:, :, 0, 1], betas[1] * (yhi[:, :, 0, 0] - base),
            betas[1] * (base - ylo[:, :, 0, 0]))
    coeffs[:, bi, bj] = patch
    still = _failing_cells_2d(coeffs[:, bi, bj], avg[:, bad], law, tab, floor)
    if still.size:
        si, sj = bi[still], bj[still]
        rest = coeffs[:, si, sj]
        keep = rest[:, :, 0, 0].copy()
        rest[:] = 0.0
        rest[:, :, 0, 0] = keep
        coeffs[:, si, sj] = rest
