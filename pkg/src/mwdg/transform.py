"""Multiwavelet analysis of modal fields: the coefficient identification
between local modal coefficients and global scaling coefficients, the
one-step two-scale transform in 1D and 2D, its inverse, the full recursion
down to a single coarse cell, and pointwise evaluation of the finest-level
detail contribution.

Only the one-step transform sits on the solver's hot path; the recursion is
for diagnostics.

Index conventions: element axes precede mode axes, and in 2D the x-direction
filter index leads everywhere (the detail blocks are x-filter/y-filter pairs
scaling*wavelet = "alpha", wavelet*scaling = "beta", wavelet*wavelet =
"gamma"; see the dump format in the CLI for the on-disk spelling).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import MultiwaveletBasis, QmfFilters
from .errors import CannotDecomposeError
from .fields import DgField1D, DgField2D

__all__ = [
    "DetailField1D", "DetailField2D",
    "dg_to_scaling_1d", "scaling_to_dg_1d",
    "decompose_one_level_1d", "reconstruct_one_level_1d",
    "dg_detail_1d", "detail_eval_1d", "decompose_full_1d",
    "dg_to_scaling_2d", "decompose_one_level_2d", "reconstruct_one_level_2d",
]


@dataclass
class DetailField1D:
    """One-step detail coefficients of a 1D modal field.

    ``dcoeffs[c, j, l]`` lives on the coarse cell j (two fine cells 2j, 2j+1);
    ``level`` is the coarse dyadic level (fine level minus one).
    """

    level: int
    k: int
    a: float
    b: float
    dcoeffs: np.ndarray


@dataclass
class DetailField2D:
    """One-step 2D decomposition: coarse scaling block plus the three detail
    blocks, all indexed by coarse (i, j) cells.
    """

    level_x: int
    level_y: int
    k: int
    scaling: np.ndarray  # (ncomp, nx/2, ny/2, k+1, k+1)
    alpha: np.ndarray    # scaling in x, wavelet in y
    beta: np.ndarray     # wavelet in x, scaling in y
    gamma: np.ndarray    # wavelet in both


def dg_to_scaling_1d(field: DgField1D) -> np.ndarray:
    """Global scaling coefficients: s = 2^(-n/2) * modal coefficients."""
    return field.coeffs * 2.0 ** (-field.mesh.level / 2.0)


def scaling_to_dg_1d(s: np.ndarray, level: int) -> np.ndarray:
    return s * 2.0 ** (level / 2.0)


def decompose_one_level_1d(s: np.ndarray, filters: QmfFilters):
    """One filter application: fine scaling -> (coarse scaling, detail).

    ``s`` has element axis -2 and mode axis -1 with an even element count.
    """
    n_elem = s.shape[-2]
    if n_elem < 2:
        raise CannotDecomposeError("level-0 input cannot be decomposed")
    if n_elem % 2:
        raise ValueError(f"odd element count {n_elem}")
    even = s[..., 0::2, :]
    odd = s[..., 1::2, :]
    coarse = even @ filters.H0.T + odd @ filters.H1.T
    detail = even @ filters.G0.T + odd @ filters.G1.T
    return coarse, detail


def reconstruct_one_level_1d(coarse: np.ndarray, detail: np.ndarray,
                             filters: QmfFilters) -> np.ndarray:
    """Inverse of :func:`decompose_one_level_1d` (exact; orthogonal bank)."""
    shape = list(coarse.shape)
    shape[-2] *= 2
    out = np.empty(shape)
    out[..., 0::2, :] = coarse @ filters.H0 + detail @ filters.G0
    out[..., 1::2, :] = coarse @ filters.H1 + detail @ filters.G1
    return out


def decompose_full_1d(s: np.ndarray, filters: QmfFilters):
    """Full recursion to a single cell: returns (s0, [d0, d1, ..., d_{n-1}]),
    details ordered coarse to fine (level m holds 2^m cells of k+1 modes).
    """
    details = []
    cur = s
    while cur.shape[-2] > 1:
        cur, d = decompose_one_level_1d(cur, filters)
        details.append(d)
    return cur, list(reversed(details))


def dg_detail_1d(field: DgField1D, filters: QmfFilters) -> DetailField1D:
    """One-step detail of a modal field (what the indicator consumes)."""
    if field.mesh.level < 1:
        raise CannotDecomposeError("field has a single element")
    s = dg_to_scaling_1d(field)
    _, d = decompose_one_level_1d(s, filters)
    return DetailField1D(level=field.mesh.level - 1, k=field.k,
                         a=field.mesh.a, b=field.mesh.b, dcoeffs=d)


def detail_eval_1d(detail: DetailField1D, mw: MultiwaveletBasis,
                   x) -> np.ndarray:
    """Evaluate the detail contribution at physical points.

    Piecewise polynomial, continuous inside each fine cell; a point exactly
    on a cell edge evaluates on one fixed (deterministic) side.  Shape
    ``(ncomp,) + x.shape``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < detail.a) or np.any(x > detail.b):
        raise ValueError("evaluation point outside the domain")
    m = detail.level
    n_coarse = 1 << m
    # global reference coordinate, then coarse cell + local coordinate
    y = -1.0 + 2.0 * (x - detail.a) / (detail.b - detail.a)
    cell = np.clip(((y + 1.0) * 0.5 * n_coarse).astype(int), 0, n_coarse - 1)
    z = (y + 1.0) * n_coarse - 2.0 * cell - 1.0
    psi = mw.eval_half("L", np.where(z > 0.0, 2.0 * z - 1.0, 2.0 * z + 1.0))
    psi_r = mw.eval_half("R", np.where(z > 0.0, 2.0 * z - 1.0, 2.0 * z + 1.0))
    psi = np.where(z > 0.0, psi_r, psi)          # (k+1,) + x.shape
    coeffs = detail.dcoeffs[:, cell, :]          # (ncomp,) + x.shape + (k+1,)
    vals = np.einsum("c...l,l...->c...", coeffs, psi)
    return vals * 2.0 ** (m / 2.0)


# -- 2D ----------------------------------------------------------------------

def dg_to_scaling_2d(field: DgField2D) -> np.ndarray:
    scale = 2.0 ** (-(field.mesh.level_x + field.mesh.level_y) / 2.0)
    return field.coeffs * scale


def _apply_pair(s, lo, hi, axis):
    """Filter one direction: pairs of cells along ``axis`` -> parent modes.

    The mode axis matching ``axis`` is assumed to sit at ``axis + 2`` (element
    axes (i, j) come before mode axes (lx, ly) and ncomp leads).
    """
    sl_even = [slice(None)] * s.ndim
    sl_odd = [slice(None)] * s.ndim
    sl_even[axis] = slice(0, None, 2)
    sl_odd[axis] = slice(1, None, 2)
    even = s[tuple(sl_even)]
    odd = s[tuple(sl_odd)]
    mode_axis = axis + 2
    out = (np.tensordot(even, lo.T, axes=(mode_axis, 0))
           + np.tensordot(odd, hi.T, axes=(mode_axis, 0)))
    # tensordot moved the contracted axis to the end; restore layout
    return np.moveaxis(out, -1, mode_axis)


def decompose_one_level_2d(field: DgField2D,
                           filters: QmfFilters) -> DetailField2D:
    """Tensor one-step transform of a 2D modal field.

    x-filter applied on the i axis first, then y on j: scaling*scaling gives
    the coarse block, scaling*wavelet the "alpha" details (sensitive to
    y-oriented jumps), wavelet*scaling "beta" (x-oriented), wavelet*wavelet
    "gamma" (diagonal).
    """
    mesh = field.mesh
    if mesh.level_x < 1 or mesh.level_y < 1:
        raise CannotDecomposeError("both directions need at least 2 cells")
    s = dg_to_scaling_2d(field)
    sx = _apply_pair(s, filters.H0, filters.H1, axis=1)   # H in x
    dx_ = _apply_pair(s, filters.G0, filters.G1, axis=1)  # G in x
    scaling = _apply_pair(sx, filters.H0, filters.H1, axis=2)
    alpha = _apply_pair(sx, filters.G0, filters.G1, axis=2)
    beta = _apply_pair(dx_, filters.H0, filters.H1, axis=2)
    gamma = _apply_pair(dx_, filters.G0, filters.G1, axis=2)
    return DetailField2D(level_x=mesh.level_x - 1, level_y=mesh.level_y - 1,
                         k=field.k, scaling=scaling, alpha=alpha, beta=beta,
                         gamma=gamma)


def _undo_pair(lo_block, hi_block, filters, axis):
    """Inverse of :func:`_apply_pair` along one direction."""
    mode_axis = axis + 2
    shape = list(lo_block.shape)
    shape[axis] *= 2
    out = np.empty(shape)
    sl = [slice(None)] * lo_block.ndim
    for parity, (h, g) in enumerate([(filters.H0, filters.G0),
                                     (filters.H1, filters.G1)]):
        sl[axis] = slice(parity, None, 2)
        child = (np.tensordot(lo_block, h, axes=(mode_axis, 0))
                 + np.tensordot(hi_block, g, axes=(mode_axis, 0)))
        out[tuple(sl)] = np.moveaxis(child, -1, mode_axis)
    return out


def reconstruct_one_level_2d(det: DetailField2D,
                             filters: QmfFilters) -> np.ndarray:
    """Inverse 2D transform; returns the fine-level scaling tensor."""
    sx = _undo_pair(det.scaling, det.alpha, filters, axis=2)
    dx_ = _undo_pair(det.beta, det.gamma, filters, axis=2)
    return _undo_pair(sx, dx_, filters, axis=1)
