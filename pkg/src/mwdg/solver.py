"""Modal DG spatial discretization and SSP-RK3 time stepping.

The semi-discrete form on each element couples a volume flux integral
(Gauss-Legendre, k+1 nodes per direction) with interface fluxes from the
local Lax-Friedrichs formula; the orthonormal basis makes the mass matrix
diagonal, so the update is explicit.  Boundary data enters exclusively
through ghost elements (see ``boundary``).

The Runge-Kutta driver exposes a per-stage hook; detection and limiting run
inside it so no stage state ever enters the next residual evaluation
unlimited.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import gauss_legendre, scaling_eval_all, tables
from .boundary import BoundarySet1D, BoundarySet2D
from .errors import SolverError
from .fields import DgField1D, DgField2D, Mesh1D, Mesh2D

# the classic RKDG bound 1/(2k+1); k=0 kept below the formal limit
DEFAULT_CFL = {0: 0.5, 1: 1.0 / 3.0, 2: 0.2}


def default_cfl(k: int) -> float:
    return DEFAULT_CFL.get(k, 1.0 / (2 * k + 1))


@dataclass
class TimeStepperConfig:
    cfl: float
    t_final: float
    stage_policy: str = "stage"   # "stage": hook every stage; "step": last only
    max_dt: float = 1.0


# -- projection ---------------------------------------------------------------

def project_initial_1d(fn, mesh: Mesh1D, k: int, ncomp: int,
                       jumps=()) -> DgField1D:
    """L2-project ``fn(x) -> (ncomp, ...)`` onto the modal basis.

    Declared jump abscissas split the quadrature of any element they fall
    inside, so discontinuous data projects exactly even off the grid.
    """
    xq, wq = gauss_legendre(k + 3)
    phi = scaling_eval_all(k, xq)
    edges = mesh.edges()
    field = DgField1D.zeros(mesh, k, ncomp)
    interior = sorted(x for x in jumps if mesh.a < x < mesh.b)

    cut_elements = {}
    for x in interior:
        j = int(mesh.element_of(x))
        if edges[j] < x < edges[j + 1]:
            cut_elements.setdefault(j, []).append(x)

    smooth = np.setdiff1d(np.arange(mesh.n_elements),
                          np.array(sorted(cut_elements), dtype=int))
    centers = mesh.centers()
    pts = centers[smooth, None] + 0.5 * mesh.dx * xq[None, :]
    vals = np.asarray(fn(pts.ravel())).reshape(ncomp, smooth.size, xq.size)
    field.coeffs[:, smooth, :] = np.einsum("cjq,lq,q->cjl", vals, phi, wq)

    for j, xs in cut_elements.items():
        bounds = [edges[j], *sorted(xs), edges[j + 1]]
        acc = np.zeros((ncomp, k + 1))
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            x_phys = mid + half * xq
            xi = (x_phys - centers[j]) / (0.5 * mesh.dx)
            v = np.asarray(fn(x_phys)).reshape(ncomp, xq.size)
            acc += np.einsum("cq,lq,q->cl", v, scaling_eval_all(k, xi),
                             wq) * (half / (0.5 * mesh.dx))
        field.coeffs[:, j, :] = acc
    return field


def project_initial_2d(fn, mesh: Mesh2D, k: int, ncomp: int,
                       quad_pts: int | None = None) -> DgField2D:
    """Tensor Gauss projection of ``fn(x, y) -> (ncomp, ...)``.

    ``quad_pts`` defaults to k+6 per direction: generous enough that data cut
    by a non-grid-aligned front aliases mildly instead of badly (the exact
    split of an oblique line on tensor elements is not attempted).
    """
    npts = quad_pts or (k + 6)
    xq, wq = gauss_legendre(npts)
    phi = scaling_eval_all(k, xq)
    xs = mesh.xcenters()[:, None] + 0.5 * mesh.dx * xq[None, :]
    ys = mesh.ycenters()[:, None] + 0.5 * mesh.dy * xq[None, :]
    xx = xs[:, None, :, None]
    yy = ys[None, :, None, :]
    vals = np.asarray(fn(np.broadcast_to(xx, (mesh.nx, mesh.ny, npts, npts)),
                         np.broadcast_to(yy, (mesh.nx, mesh.ny, npts, npts))))
    vals = vals.reshape(ncomp, mesh.nx, mesh.ny, npts, npts)
    coeffs = np.einsum("cijpq,lp,mq,p,q->cijlm", vals, phi, phi, wq, wq,
                       optimize=True)
    return DgField2D(mesh, k, ncomp, coeffs)


# -- residual evaluation ------------------------------------------------------

def _locate_bad_state(mask, time):
    flat = np.flatnonzero(~np.asarray(mask).ravel())
    where = int(flat[0]) if flat.size else None
    return SolverError("non-physical state during residual evaluation",
                       element=where, time=time)


def compute_rhs_1d(field: DgField1D, law, bcs: BoundarySet1D,
                   t: float) -> np.ndarray:
    """Time derivative of the modal coefficients."""
    tab = tables(field.k)
    mesh = field.mesh
    coeffs = field.coeffs

    uq = np.einsum("cjl,lq->cjq", coeffs, tab.phi_vol)
    if getattr(law, "is_admissible", None) is not None:
        ok = law.is_admissible(uq)
        if not np.all(ok):
            raise _locate_bad_state(ok.all(axis=-1), t)
    fq = law.flux(uq)
    vol = np.einsum("cjq,lq,q->cjl", fq, tab.dphi_vol, tab.vol_weights)

    ghost_l = bcs.ghost(field, "left", t)
    ghost_r = bcs.ghost(field, "right", t)
    trace_r = np.concatenate(
        [(ghost_l @ tab.phi_right)[:, None], coeffs @ tab.phi_right], axis=1)
    trace_l = np.concatenate(
        [coeffs @ tab.phi_left, (ghost_r @ tab.phi_left)[:, None]], axis=1)
    # interface i: state approaching from the left / from the right
    ul = trace_r
    ur = trace_l
    if getattr(law, "is_admissible", None) is not None:
        ok = law.is_admissible(ul) & law.is_admissible(ur)
        if not np.all(ok):
            raise _locate_bad_state(ok, t)
    lam = law.max_wave_speed(ul, ur)
    fhat = 0.5 * (law.flux(ul) + law.flux(ur)) - 0.5 * lam * (ur - ul)

    du = vol - (fhat[:, 1:, None] * tab.phi_right
                - fhat[:, :-1, None] * tab.phi_left)
    return du * (2.0 / mesh.dx)


def compute_rhs_2d(field: DgField2D, law, bcs: BoundarySet2D,
                   t: float) -> np.ndarray:
    tab = tables(field.k)
    mesh = field.mesh
    coeffs = field.coeffs
    phi, dphi, w = tab.phi_vol, tab.dphi_vol, tab.vol_weights
    phi_e, w_e = tab.phi_edge, tab.edge_weights

    uq = np.einsum("cijlm,lp,mq->cijpq", coeffs, phi, phi,
                   optimize=True)
    if getattr(law, "is_admissible", None) is not None:
        ok = law.is_admissible(uq).reshape(mesh.nx * mesh.ny, -1).all(axis=-1)
        if not np.all(ok):
            raise _locate_bad_state(ok, t)
    fx = law.flux(uq, 0)
    fy = law.flux(uq, 1)
    du = (2.0 / mesh.dx) * np.einsum("cijpq,lp,mq,p,q->cijlm",
                                     fx, dphi, phi, w, w, optimize=True)
    du += (2.0 / mesh.dy) * np.einsum("cijpq,lp,mq,p,q->cijlm",
                                      fy, phi, dphi, w, w, optimize=True)

    # x-direction faces -------------------------------------------------
    ghost = bcs.ghost(field, "xlo", t)
    right_of = np.einsum("cijlm,l,me->cije", coeffs, tab.phi_right,
                         phi_e, optimize=True)
    left_of = np.einsum("cijlm,l,me->cije", coeffs, tab.phi_left,
                        phi_e, optimize=True)
    gl = np.einsum("cjlm,l,me->cje", ghost, tab.phi_right, phi_e,
                   optimize=True)
    ghost = bcs.ghost(field, "xhi", t)
    gr = np.einsum("cjlm,l,me->cje", ghost, tab.phi_left, phi_e,
                   optimize=True)
    ul = np.concatenate([gl[:, None], right_of], axis=1)
    ur = np.concatenate([left_of, gr[:, None]], axis=1)
    if getattr(law, "is_admissible", None) is not None:
        ok = law.is_admissible(ul) & law.is_admissible(ur)
        if not np.all(ok):
            raise _locate_bad_state(ok.all(axis=-1), t)
    lam = law.max_wave_speed(ul, ur, 0)
    fhat = 0.5 * (law.flux(ul, 0) + law.flux(ur, 0)) - 0.5 * lam * (ur - ul)
    flux_hi = np.einsum("cije,me,e->cijm", fhat[:, 1:], phi_e, w_e,
                        optimize=True)
    flux_lo = np.einsum("cije,me,e->cijm", fhat[:, :-1], phi_e, w_e,
                        optimize=True)
    du -= (2.0 / mesh.dx) * (flux_hi[..., None, :] * tab.phi_right[:, None]
                             - flux_lo[..., None, :] * tab.phi_left[:, None])

    # y-direction faces -------------------------------------------------
    ghost = bcs.ghost(field, "ylo", t)
    top_of = np.einsum("cijlm,m,le->cije", coeffs, tab.phi_right,
                       phi_e, optimize=True)
    bottom_of = np.einsum("cijlm,m,le->cije", coeffs, tab.phi_left,
                          phi_e, optimize=True)
    gb = np.einsum("cilm,m,le->cie", ghost, tab.phi_right, phi_e,
                   optimize=True)
    ghost = bcs.ghost(field, "yhi", t)
    gt = np.einsum("cilm,m,le->cie", ghost, tab.phi_left, phi_e,
                   optimize=True)
    ul = np.concatenate([gb[:, :, None], top_of], axis=2)
    ur = np.concatenate([bottom_of, gt[:, :, None]], axis=2)
    if getattr(law, "is_admissible", None) is not None:
        ok = law.is_admissible(ul) & law.is_admissible(ur)
        if not np.all(ok):
            raise _locate_bad_state(ok.all(axis=-1), t)
    lam = law.max_wave_speed(ul, ur, 1)
    ghat = 0.5 * (law.flux(ul, 1) + law.flux(ur, 1)) - 0.5 * lam * (ur - ul)
    flux_hi = np.einsum("cije,le,e->cijl", ghat[:, :, 1:], phi_e, w_e,
                        optimize=True)
    flux_lo = np.einsum("cije,le,e->cijl", ghat[:, :, :-1], phi_e, w_e,
                        optimize=True)
    du -= (2.0 / mesh.dy) * (flux_hi[..., None] * tab.phi_right[None, None]
                             - flux_lo[..., None] * tab.phi_left[None, None])
    return du


# -- time stepping ------------------------------------------------------------

def compute_dt(field, law, cfl: float, max_dt: float = 1.0) -> float:
    """CFL time step from the wave speeds at the cell averages."""
    avg = field.cell_averages()
    if isinstance(field, DgField1D):
        speed = float(np.max(law.wave_speed_at(avg)))
        h = field.mesh.dx
    else:
        # directional sum: the standard tensor-mesh CFL bound
        speed = float(np.max(law.wave_speed_at(avg, 0)
                             + law.wave_speed_at(avg, 1)))
        h = min(field.mesh.dx, field.mesh.dy)
    if speed <= 0.0 or not np.isfinite(speed):
        return max_dt
    return min(cfl * h / speed, max_dt)


def ssp_rk3_step(field, t: float, dt: float, rhs, stage_hook=None):
    """Advance one step with the three-stage strong-stability scheme
    (convex combinations of forward-Euler substeps).

    ``stage_hook(field, time, final)`` runs after every stage update; its
    return value from the final stage is passed through (the recorded
    troubled set).
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    u0 = field.coeffs.copy()
    result = None

    field.coeffs = u0 + dt * rhs(field, t)
    if stage_hook is not None:
        stage_hook(field, t + dt, False)

    field.coeffs = 0.75 * u0 + 0.25 * (field.coeffs + dt * rhs(field, t + dt))
    if stage_hook is not None:
        stage_hook(field, t + 0.5 * dt, False)

    field.coeffs = (u0 + 2.0 * (field.coeffs
                                + dt * rhs(field, t + 0.5 * dt))) / 3.0
    if stage_hook is not None:
        result = stage_hook(field, t + dt, True)
    return result
