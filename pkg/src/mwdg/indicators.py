"""Troubled-cell detection.

Three detectors over a common result type:

* ``mw_indicate_*`` — the global multiwavelet detector: one two-scale
  transform of the field, then per-fine-cell weighted L1 averages of the
  finest detail contribution (three-point trapezoid per cell: endpoints
  weighted 1/4 from inside, midpoint 1/2) thresholded against the global
  maximum.  In 2D the three detail blocks are averaged on their natural
  regions (the support on which each block is a single polynomial) and
  thresholded independently; block flags map onto the fine cells they cover.
* ``kxrcf_indicate_*`` — inflow-boundary jump ratios with the
  superconvergence normalization h^((k+1)/2).
* ``harten_indicate_1d`` — subcell-resolution style: neighbor polynomial
  extensions must bracket a sign change of the reconstruction defect and the
  element's top mode must dominate both neighbors'.

The multiwavelet detector needs no boundary data; the other two read ghost
elements from the active boundary conditions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import tables
from .boundary import BoundarySet1D, BoundarySet2D
from .errors import CannotIndicateError
from .fields import SQRT2, DgField1D, DgField2D
from .transform import (decompose_one_level_1d, decompose_one_level_2d,
                        dg_to_scaling_2d)

_ABS_GUARD = 1e-12  # absolute floor against 0/0 ratios in constant regions


@dataclass
class IndicatorConfig:
    kind: str = "multiwavelet"            # multiwavelet | kxrcf | harten
    threshold: float = 0.1                # 1D relative threshold
    threshold_alpha: float = 0.1
    threshold_beta: float = 0.1
    threshold_gamma: float = 0.1
    harten_alpha: float = 1.5
    variables: tuple = ("density",)

    def __post_init__(self):
        for c in (self.threshold, self.threshold_alpha, self.threshold_beta,
                  self.threshold_gamma):
            if not 0.0 <= c <= 1.0:
                raise ValueError(f"threshold {c} outside [0, 1]")
        if self.harten_alpha <= 0.0:
            raise ValueError("harten_alpha must be positive")


@dataclass
class TroubledSet1D:
    flags: np.ndarray          # bool per element
    dbar: np.ndarray           # detection quantity per element (diagnostic)
    threshold: float | None
    kind: str

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.flags))


@dataclass
class TroubledSet2D:
    alpha_flags: np.ndarray    # (nx/2, ny): x-coarse regions
    beta_flags: np.ndarray     # (nx, ny/2)
    gamma_flags: np.ndarray    # (nx, ny)
    combined: np.ndarray       # (nx, ny) union mapped to fine cells
    dbar_alpha: np.ndarray
    dbar_beta: np.ndarray
    dbar_gamma: np.ndarray
    thresholds: tuple
    kind: str

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.combined))


def _variable_coeffs_1d(field: DgField1D, law, name: str) -> np.ndarray:
    """Modal coefficients (1, n, k+1) of one indicator variable."""
    if name in ("density", "u"):
        return field.coeffs[:1]
    if law is None:
        raise ValueError(f"law required for indicator variable {name!r}")
    tab = tables(field.k)
    nodes = np.einsum("cjl,lq->cjq", field.coeffs, tab.phi_proj)
    vals = law.indicator_variable(name, nodes)
    return np.einsum("jq,lq,q->jl", vals, tab.phi_proj,
                     tab.proj_weights)[None]


def _variable_coeffs_2d(field: DgField2D, law, name: str) -> np.ndarray:
    if name in ("density", "u"):
        return field.coeffs[:1]
    tab = tables(field.k)
    nodes = np.einsum("cijlm,lp,mq->cijpq", field.coeffs, tab.phi_proj,
                      tab.phi_proj, optimize=True)
    vals = law.indicator_variable(name, nodes)
    return np.einsum("ijpq,lp,mq,p,q->ijlm", vals, tab.phi_proj,
                     tab.phi_proj, tab.proj_weights, tab.proj_weights,
                     optimize=True)[None]


_DEAD_FLOOR = 1e-12  # detail peaks below this fraction of the field scale
                     # are transform roundoff, not signal


def _threshold(dbar: np.ndarray, c: float, ref_scale: float) -> np.ndarray:
    peak = dbar.max(initial=0.0)
    if peak <= _DEAD_FLOOR * ref_scale:
        return np.zeros(dbar.shape, dtype=bool)
    return dbar > c * peak


def detail_averages_1d(field: DgField1D, variable_coeffs: np.ndarray,
                       tab):
    """Per-fine-cell trapezoid average of |finest detail contribution|,
    plus the field's detail-comparable magnitude scale."""
    n = field.mesh.level
    s = variable_coeffs * 2.0 ** (-n / 2.0)
    _, d = decompose_one_level_1d(s, tab.filters)
    # values on each half-cell at its three nodes: (coarse j, half, node)
    vals = np.einsum("jl,hlb->jhb", d[0], tab.psi_trap)
    vals *= 2.0 ** ((n - 1) / 2.0)
    avg = np.einsum("jhb,b->jh", np.abs(vals), tab.trap_weights)
    scale = float(np.abs(s).max(initial=0.0)) * 2.0 ** ((n - 1) / 2.0)
    return avg.reshape(-1), scale


def mw_indicate_1d(field: DgField1D, c: float, variables=("density",),
                   law=None) -> TroubledSet1D:
    """Global multiwavelet detector on a 1D field."""
    if field.mesh.level < 1:
        raise CannotIndicateError("need at least two elements")
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"threshold {c} outside [0, 1]")
    tab = tables(field.k)
    flags = None
    first_dbar = None
    for name in variables:
        dbar, scale = detail_averages_1d(
            field, _variable_coeffs_1d(field, law, name), tab)
        f = _threshold(dbar, c, scale)
        flags = f if flags is None else (flags | f)
        if first_dbar is None:
            first_dbar = dbar
    return TroubledSet1D(flags=flags, dbar=first_dbar, threshold=c,
                         kind="multiwavelet")


def detail_averages_2d(field: DgField2D, variable_coeffs: np.ndarray, tab):
    """Region averages of the three detail blocks.

    alpha lives on x-coarse regions (single polynomial there: scaling in x,
    one wavelet half in y), beta on y-coarse regions, gamma on fine cells;
    tensor 3x3 trapezoid on each region.
    """
    mesh = field.mesh
    shadow = DgField2D(mesh, field.k, 1, variable_coeffs)
    det = decompose_one_level_2d(shadow, tab.filters)
    scale = 2.0 ** ((mesh.level_x - 1) / 2.0) * 2.0 ** ((mesh.level_y - 1) / 2.0)
    w = tab.trap_weights
    phi3 = tab.phi_trap
    psi3 = tab.psi_trap

    va = np.abs(np.einsum("ijlm,la,hmb->ijahb", det.alpha[0], phi3, psi3,
                          optimize=True))
    da = np.einsum("ijahb,a,b->ijh", va, w, w) * scale
    dbar_a = da.reshape(da.shape[0], -1)   # fine-y index = 2j + h

    vb = np.abs(np.einsum("ijlm,gla,mb->ijgab", det.beta[0], psi3, phi3,
                          optimize=True))
    db = np.einsum("ijgab,a,b->ijg", vb, w, w) * scale
    dbar_b = db.transpose(0, 2, 1).reshape(-1, db.shape[1])

    vg = np.abs(np.einsum("ijlm,gla,hmb->ijgahb", det.gamma[0], psi3,
                          psi3, optimize=True))
    dg = np.einsum("ijgahb,a,b->ijgh", vg, w, w) * scale
    dbar_g = dg.transpose(0, 2, 1, 3).reshape(dg.shape[0] * 2, -1)
    s = dg_to_scaling_2d(shadow)
    ref = float(np.abs(s).max(initial=0.0)) * scale
    return dbar_a, dbar_b, dbar_g, ref


def mw_indicate_2d(field: DgField2D, c_alpha: float, c_beta: float,
                   c_gamma: float, variables=("density",),
                   law=None) -> TroubledSet2D:
    mesh = field.mesh
    if mesh.level_x < 1 or mesh.level_y < 1:
        raise CannotIndicateError("need at least two elements per direction")
    tab = tables(field.k)
    fa = fb = fg = None
    da0 = db0 = dg0 = None
    for name in variables:
        coeffs = _variable_coeffs_2d(field, law, name)
        da, db, dg, ref = detail_averages_2d(field, coeffs, tab)
        xa = _threshold(da, c_alpha, ref)
        xb = _threshold(db, c_beta, ref)
        xg = _threshold(dg, c_gamma, ref)
        fa = xa if fa is None else fa | xa
        fb = xb if fb is None else fb | xb
        fg = xg if fg is None else fg | xg
        if da0 is None:
            da0, db0, dg0 = da, db, dg
    combined = np.repeat(fa, 2, axis=0) | np.repeat(fb, 2, axis=1) | fg
    return TroubledSet2D(alpha_flags=fa, beta_flags=fb, gamma_flags=fg,
                         combined=combined, dbar_alpha=da0, dbar_beta=db0,
                         dbar_gamma=dg0,
                         thresholds=(c_alpha, c_beta, c_gamma),
                         kind="multiwavelet")


# -- inflow-boundary jump detector --------------------------------------------

def _mean_velocity_1d(field: DgField1D, law):
    avg = field.cell_averages()
    if getattr(law, "has_eigen", False):
        return avg[1] / avg[0]
    if hasattr(law, "speed"):
        return np.full(avg.shape[-1], float(law.speed))
    return avg[0]  # convex scalar flux: f'(u) = u


def kxrcf_indicate_1d(field: DgField1D, law, bcs: BoundarySet1D, t: float,
                      variables=("density", "entropy")) -> TroubledSet1D:
    tab = tables(field.k)
    mesh = field.mesh
    n = mesh.n_elements
    vbar = _mean_velocity_1d(field, law)
    inflow_left = vbar > 0.0    # outward normal -1: entering flow
    inflow_right = vbar < 0.0
    h_pow = (0.5 * mesh.dx) ** (0.5 * (field.k + 1))

    flags = np.zeros(n, dtype=bool)
    first_ratio = None
    for name in variables:
        vc = _variable_coeffs_1d(field, law, name)[0]
        own_left = vc @ tab.phi_left
        own_right = vc @ tab.phi_right
        ghost_l = _variable_ghost_1d(field, law, bcs, "left", t, name)
        ghost_r = _variable_ghost_1d(field, law, bcs, "right", t, name)
        nbr_right = np.concatenate([[ghost_l @ tab.phi_right], own_right[:-1]])
        nbr_left = np.concatenate([own_left[1:], [ghost_r @ tab.phi_left]])
        jump = np.where(inflow_left, own_left - nbr_right, 0.0)
        jump += np.where(inflow_right, own_right - nbr_left, 0.0)
        count = inflow_left.astype(int) + inflow_right.astype(int)
        norm = np.abs(vc[:, 0] / SQRT2)
        denom = h_pow * count * norm
        trigger = np.abs(jump) > denom + _ABS_GUARD * (1.0 + norm)
        trigger &= count > 0
        flags |= trigger
        if first_ratio is None:
            with np.errstate(divide="ignore", invalid="ignore"):
                first_ratio = np.where(denom > 0.0, np.abs(jump) / denom, 0.0)
    return TroubledSet1D(flags=flags, dbar=first_ratio, threshold=None,
                         kind="kxrcf")


def _variable_ghost_1d(field, law, bcs, side, t, name):
    """Indicator-variable modal coefficients of a ghost element, projected
    the same way as interior cells."""
    ghost = bcs.ghost(field, side, t)
    tab = tables(field.k)
    if name in ("density", "u"):
        return ghost[0]
    nodes = np.einsum("cl,lq->cq", ghost, tab.phi_proj)
    vals = law.indicator_variable(name, nodes)
    return np.einsum("q,lq,q->l", vals, tab.phi_proj, tab.proj_weights)


def kxrcf_indicate_2d(field: DgField2D, law, bcs: BoundarySet2D, t: float,
                      variables=("density", "entropy")) -> TroubledSet2D:
    tab = tables(field.k)
    mesh = field.mesh
    avg = field.cell_averages()
    vx = avg[1] / avg[0]
    vy = avg[2] / avg[0]
    in_xlo = vx > 0.0
    in_xhi = vx < 0.0
    in_ylo = vy > 0.0
    in_yhi = vy < 0.0
    h = 0.5 * np.hypot(mesh.dx, mesh.dy)
    h_pow = h ** (0.5 * (field.k + 1))
    phi_e, w_e = tab.phi_edge, tab.edge_weights

    flags = np.zeros((mesh.nx, mesh.ny), dtype=bool)
    ratio0 = None
    for name in variables:
        vc = _variable_coeffs_2d(field, law, name)[0]
        xlo_tr = np.einsum("ijlm,l,me->ije", vc, tab.phi_left, phi_e,
                           optimize=True)
        xhi_tr = np.einsum("ijlm,l,me->ije", vc, tab.phi_right, phi_e,
                           optimize=True)
        ylo_tr = np.einsum("ijlm,m,le->ije", vc, tab.phi_left, phi_e,
                           optimize=True)
        yhi_tr = np.einsum("ijlm,m,le->ije", vc, tab.phi_right, phi_e,
                           optimize=True)

        def ghost_var(side):
            g = bcs.ghost(field, side, t)
            if name in ("density", "u"):
                return g[0]
            nodes = np.einsum("calm,lp,mq->capq", g, tab.phi_proj,
                              tab.phi_proj)
            vals = law.indicator_variable(name, nodes)
            return np.einsum("apq,lp,mq,p,q->alm", vals, tab.phi_proj,
                             tab.phi_proj, tab.proj_weights,
                             tab.proj_weights, optimize=True)

        gxlo = np.einsum("jlm,l,me->je", ghost_var("xlo"), tab.phi_right,
                         phi_e)
        gxhi = np.einsum("jlm,l,me->je", ghost_var("xhi"), tab.phi_left,
                         phi_e)
        gylo = np.einsum("ilm,m,le->ie", ghost_var("ylo"), tab.phi_right,
                         phi_e)
        gyhi = np.einsum("ilm,m,le->ie", ghost_var("yhi"), tab.phi_left,
                         phi_e)
        nbr_xlo = np.concatenate([gxlo[None], xhi_tr[:-1]], axis=0)
        nbr_xhi = np.concatenate([xlo_tr[1:], gxhi[None]], axis=0)
        nbr_ylo = np.concatenate([gylo[:, None], yhi_tr[:, :-1]], axis=1)
        nbr_yhi = np.concatenate([ylo_tr[:, 1:], gyhi[:, None]], axis=1)

        def face_integral(own, nbr):
            return np.einsum("ije,e->ij", own - nbr, w_e)

        jump = np.where(in_xlo, 0.5 * mesh.dy * face_integral(xlo_tr, nbr_xlo),
                        0.0)
        jump += np.where(in_xhi, 0.5 * mesh.dy * face_integral(xhi_tr, nbr_xhi),
                         0.0)
        jump += np.where(in_ylo, 0.5 * mesh.dx * face_integral(ylo_tr, nbr_ylo),
                         0.0)
        jump += np.where(in_yhi, 0.5 * mesh.dx * face_integral(yhi_tr, nbr_yhi),
                         0.0)
        boundary_len = (mesh.dy * (in_xlo.astype(float) + in_xhi)
                        + mesh.dx * (in_ylo.astype(float) + in_yhi))
        nodes = np.einsum("ijlm,lp,mq->ijpq", vc, tab.phi_vol,
                          tab.phi_vol, optimize=True)
        norm = np.abs(nodes).max(axis=(-2, -1))
        denom = h_pow * boundary_len * norm
        trigger = np.abs(jump) > denom + _ABS_GUARD * (1.0 + norm)
        trigger &= boundary_len > 0.0
        flags |= trigger
        if ratio0 is None:
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio0 = np.where(denom > 0.0, np.abs(jump) / denom, 0.0)
    empty_a = np.zeros((mesh.nx // 2, mesh.ny), dtype=bool)
    empty_b = np.zeros((mesh.nx, mesh.ny // 2), dtype=bool)
    return TroubledSet2D(alpha_flags=empty_a, beta_flags=empty_b,
                         gamma_flags=flags, combined=flags,
                         dbar_alpha=np.zeros(empty_a.shape),
                         dbar_beta=np.zeros(empty_b.shape), dbar_gamma=ratio0,
                         thresholds=(), kind="kxrcf")


# -- subcell-resolution detector ----------------------------------------------

def harten_indicate_1d(field: DgField1D, law, bcs: BoundarySet1D, t: float,
                       alpha: float = 1.5,
                       variables=("density", "entropy")) -> TroubledSet1D:
    if field.k < 1:
        raise CannotIndicateError("needs degree k >= 1")
    tab = tables(field.k)
    n = field.mesh.n_elements
    flags = np.zeros(n, dtype=bool)
    fprod0 = None
    for name in variables:
        vc = _variable_coeffs_1d(field, law, name)[0]     # (n, k+1)
        ghost_l = _variable_ghost_1d(field, law, bcs, "left", t, name)
        ghost_r = _variable_ghost_1d(field, law, bcs, "right", t, name)
        ext = np.vstack([ghost_l[None], vc, ghost_r[None]])  # padded
        avg = vc[:, 0] / SQRT2
        # defect at the element edges: neighbor extensions averaged over the
        # element minus the element's own average
        f_left = ext[2:] @ tab.ext_from_right - avg    # right nbr extension
        f_right = ext[:-2] @ tab.ext_from_left - avg   # left nbr extension
        top = np.abs(vc[:, -1])
        top_l = np.abs(ext[:-2, -1])
        top_r = np.abs(ext[2:, -1])
        cond = (f_left * f_right <= 0.0) & (top > alpha * top_l) \
            & (top > alpha * top_r)
        flags |= cond
        if fprod0 is None:
            fprod0 = f_left * f_right
    return TroubledSet1D(flags=flags, dbar=fprod0, threshold=None,
                         kind="harten")
