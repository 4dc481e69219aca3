"""Orthonormal element bases: scaled Legendre scaling functions, the matching
piecewise-polynomial multiwavelets, and the two-scale (quadrature mirror)
filter matrices.

Conventions used throughout the package:

* The reference element is ``[-1, 1]``.  The scaling functions are
  ``phi_l(x) = sqrt(l + 1/2) * P_l(x)`` with ``P_l`` the Legendre polynomial,
  so ``<phi_l, phi_m> = delta_lm`` under the plain L2 inner product.
* A multiwavelet ``psi_l`` is stored as two coefficient rows of length
  ``k + 1``: its expansion in the scaling basis on the left half
  (``t = 2x + 1``) and on the right half (``t = 2x - 1``).  With that
  representation ``<f, g> = (fL . gL + fR . gR) / 2``.
* Sign convention: ``psi_l(1^-) > 0``.  Any orthonormal basis of the detail
  space spans the same projector, so downstream detail magnitudes do not
  depend on this choice; fixing it keeps outputs deterministic.

Degrees 0..9 are supported; the Gram-Schmidt construction loses too much
orthogonality beyond that and is rejected rather than silently degraded.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnsupportedDegreeError

MAX_DEGREE = 9

_TRAPEZOID_NODES = np.array([-1.0, 0.0, 1.0])
_TRAPEZOID_WEIGHTS = np.array([0.25, 0.5, 0.25])


@lru_cache(maxsize=64)
def gauss_legendre(npts: int):
    """Gauss-Legendre nodes and weights on [-1, 1] (cached, read-only)."""
    x, w = np.polynomial.legendre.leggauss(npts)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def legendre_all(k: int, x):
    """Values of P_0..P_k at ``x``; shape ``(k + 1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((k + 1,) + x.shape)
    out[0] = 1.0
    if k >= 1:
        out[1] = x
    for n in range(1, k):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


def legendre_all_deriv(k: int, x):
    """Values of P'_0..P'_k at ``x`` via P'_{n+1} = (n+1) P_n + x P'_n."""
    x = np.asarray(x, dtype=float)
    p = legendre_all(k, x)
    out = np.zeros_like(p)
    for n in range(k):
        out[n + 1] = (n + 1) * p[n] + x * out[n]
    return out


def scaling_eval_all(k: int, x):
    """phi_0..phi_k at ``x``; shape ``(k + 1,) + x.shape``."""
    norms = np.sqrt(np.arange(k + 1) + 0.5)
    return legendre_all(k, x) * norms.reshape((-1,) + (1,) * np.ndim(x))


def scaling_deriv_all(k: int, x):
    norms = np.sqrt(np.arange(k + 1) + 0.5)
    return legendre_all_deriv(k, x) * norms.reshape((-1,) + (1,) * np.ndim(x))


def legendre_scaling_eval(ell: int, x):
    """Evaluate the orthonormal scaling function phi_ell at ``x`` in [-1, 1]."""
    if ell < 0:
        raise ValueError(f"mode index must be >= 0, got {ell}")
    x = np.asarray(x, dtype=float)
    if np.any(x < -1.0) or np.any(x > 1.0):
        raise ValueError("evaluation point outside [-1, 1]")
    val = scaling_eval_all(ell, x)[ell]
    return float(val) if np.ndim(x) == 0 else val


@dataclass(frozen=True)
class ScalingBasis:
    """Orthonormal scaled Legendre basis of degree <= k on [-1, 1]."""

    k: int

    def eval(self, ell: int, x):
        if not 0 <= ell <= self.k:
            raise ValueError(f"mode index {ell} out of range 0..{self.k}")
        return legendre_scaling_eval(ell, x)

    def eval_all(self, x):
        return scaling_eval_all(self.k, x)


@dataclass(frozen=True)
class MultiwaveletBasis:
    """Orthonormal basis of the detail space for degree k.

    ``left[l]`` / ``right[l]`` hold psi_l expanded in the scaling basis of the
    corresponding half-interval (see module docstring).
    """

    k: int
    left: np.ndarray
    right: np.ndarray

    def eval(self, ell: int, x):
        """psi_ell at ``x`` in [-1, 1] (the half containing x decides the rep;
        x = 0 belongs to the left half, matching left-open/right-closed cells).
        """
        if not 0 <= ell <= self.k:
            raise ValueError(f"mode index {ell} out of range 0..{self.k}")
        x = np.asarray(x, dtype=float)
        on_right = x > 0.0
        t = np.where(on_right, 2.0 * x - 1.0, 2.0 * x + 1.0)
        phis = scaling_eval_all(self.k, t)
        vals = np.where(
            on_right,
            np.tensordot(self.right[ell], phis, axes=(0, 0)),
            np.tensordot(self.left[ell], phis, axes=(0, 0)),
        )
        return float(vals) if np.ndim(x) == 0 else vals

    def eval_half(self, side: str, t):
        """All psi_l at half-local coordinates ``t`` in [-1, 1]; (k+1, ...)."""
        coeffs = self.left if side == "L" else self.right
        return np.tensordot(coeffs, scaling_eval_all(self.k, t), axes=(1, 0))


@dataclass(frozen=True)
class QmfFilters:
    """Two-scale filter matrices: one application maps fine scaling
    coefficients on a two-child pair to coarse scaling (H) and detail (G)
    coefficients; the stacked block matrix [[H0, H1], [G0, G1]] is orthogonal.
    """

    k: int
    H0: np.ndarray
    H1: np.ndarray
    G0: np.ndarray
    G1: np.ndarray

    def block_matrix(self):
        top = np.hstack([self.H0, self.H1])
        bottom = np.hstack([self.G0, self.G1])
        return np.vstack([top, bottom])


def _check_degree(k: int):
    if k < 0 or k > MAX_DEGREE:
        raise UnsupportedDegreeError(
            f"degree {k} outside supported range 0..{MAX_DEGREE}")


def _half_expansion_matrices(k: int):
    """A0[m, r] = int phi_m((t-1)/2) phi_r(t) dt and the right-half twin.

    These expand the parent-interval scaling functions in the half-interval
    basis; integrands are degree <= 2k so k+3 Gauss nodes are exact.
    """
    x, w = gauss_legendre(k + 3)
    phi_t = scaling_eval_all(k, x)                   # (k+1, q)
    phi_left = scaling_eval_all(k, (x - 1.0) / 2.0)  # parent arg on left half
    phi_right = scaling_eval_all(k, (x + 1.0) / 2.0)
    a0 = np.einsum("mq,rq,q->mr", phi_left, phi_t, w)
    a1 = np.einsum("mq,rq,q->mr", phi_right, phi_t, w)
    return a0, a1


def build_multiwavelets(k: int) -> MultiwaveletBasis:
    """Construct the degree-k multiwavelets by Gram-Schmidt.

    Seeds are x^l * sign(x); they span a complement of the polynomials inside
    the half-refined space.  Each seed is orthogonalized against the
    polynomial basis (that step enforces the k+1 vanishing moments), then
    against the previously built wavelets (modified Gram-Schmidt with one
    re-orthogonalization pass), normalized, and sign-fixed to psi_l(1^-) > 0.
    """
    _check_degree(k)
    dim = k + 1
    x, w = gauss_legendre(k + 3)

    phi_t = scaling_eval_all(k, x)

    def half_coeffs(f):
        # expansion of f in the half-interval scaling bases: (left, right)
        fl = f((x - 1.0) / 2.0)
        fr = f((x + 1.0) / 2.0)
        return np.einsum("q,rq,q->r", fl, phi_t, w), np.einsum(
            "q,rq,q->r", fr, phi_t, w)

    def inner(u, v):
        return 0.5 * (u[0] @ v[0] + u[1] @ v[1])

    # parent scaling functions expressed in the same split representation
    a0, a1 = _half_expansion_matrices(k)
    poly = [(a0[m], a1[m]) for m in range(dim)]

    # x^l * sign(x): equals -x^l on the left half and +x^l on the right
    seeds = []
    for ell in range(dim):
        left, right = half_coeffs(lambda t, e=ell: np.power(t, e))
        seeds.append((-left, right))

    wavelets = []
    for ell in range(dim):
        u = [seeds[ell][0].copy(), seeds[ell][1].copy()]
        for _ in range(2):  # re-orthogonalize once: Gram-Schmidt drift guard
            for p in poly:
                c = inner(u, p)
                u[0] -= c * p[0]
                u[1] -= c * p[1]
            for v in wavelets:
                c = inner(u, v)
                u[0] -= c * v[0]
                u[1] -= c * v[1]
        norm = np.sqrt(inner(u, u))
        if norm < 1e-10:
            raise UnsupportedDegreeError(
                f"Gram-Schmidt breakdown at degree {k}, mode {ell}")
        u[0] /= norm
        u[1] /= norm
        # value at 1^- is the right-half expansion evaluated at t = 1
        edge = u[1] @ scaling_eval_all(k, 1.0)
        if edge < 0:
            u[0] *= -1.0
            u[1] *= -1.0
        wavelets.append((u[0], u[1]))

    left = np.array([wl for wl, _ in wavelets])
    right = np.array([wr for _, wr in wavelets])
    left.setflags(write=False)
    right.setflags(write=False)
    return MultiwaveletBasis(k=k, left=left, right=right)


def build_qmf_filters(k: int, mw: MultiwaveletBasis | None = None) -> QmfFilters:
    """Filter matrices from the basis inner products.

    H maps a child's scaling coefficients into the parent scaling modes,
    G into the parent detail modes; rows are parent modes, columns child
    modes, one matrix per child.
    """
    _check_degree(k)
    if mw is None:
        mw = build_multiwavelets(k)
    if mw.k != k:
        raise ValueError(f"multiwavelet basis degree {mw.k} != {k}")
    a0, a1 = _half_expansion_matrices(k)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    h0 = a0 * inv_sqrt2
    h1 = a1 * inv_sqrt2
    g0 = mw.left * inv_sqrt2
    g1 = mw.right * inv_sqrt2
    for m in (h0, h1, g0, g1):
        m.setflags(write=False)
    return QmfFilters(k=k, H0=h0, H1=h1, G0=np.asarray(g0), G1=np.asarray(g1))


@dataclass(frozen=True)
class BasisTables:
    """Precomputed node evaluations shared by the solver, indicators and
    limiter.  Immutable; safe to share across threads.
    """

    k: int
    mw: MultiwaveletBasis
    filters: QmfFilters
    # volume quadrature (k+1 nodes) for flux integrals
    vol_nodes: np.ndarray
    vol_weights: np.ndarray
    phi_vol: np.ndarray       # (k+1, k+1) modes x nodes
    dphi_vol: np.ndarray
    # edge quadrature (k+2 nodes) for 2D face integrals
    edge_nodes: np.ndarray
    edge_weights: np.ndarray
    phi_edge: np.ndarray
    # projection quadrature (k+3 nodes)
    proj_nodes: np.ndarray
    proj_weights: np.ndarray
    phi_proj: np.ndarray
    # endpoint traces
    phi_left: np.ndarray      # phi_l(-1)
    phi_right: np.ndarray     # phi_l(+1)
    # three-point trapezoid tables: values at {-1, 0, 1}
    phi_trap: np.ndarray      # (k+1, 3)
    psi_trap: np.ndarray      # (2, k+1, 3): psi on left/right half at its nodes
    trap_weights: np.ndarray  # (3,) = (1/4, 1/2, 1/4)
    # neighbor-extension averages for subcell-resolution indication
    ext_from_left: np.ndarray   # (1/2) int_1^3 phi_l  (left neighbor into cell)
    ext_from_right: np.ndarray  # (1/2) int_{-3}^{-1} phi_l
    # admissibility check nodes: volume nodes plus both endpoints
    check_nodes: np.ndarray
    phi_check: np.ndarray
    # 2D admissibility: explicit (xi, eta) point list covering every node
    # the residual/indicator paths evaluate, as one (k+1)^2 x P matrix
    check_points_2d: np.ndarray
    phi_check_2d: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.k + 1


@lru_cache(maxsize=16)
def tables(k: int) -> BasisTables:
    """Build (and cache) all degree-k tables."""
    _check_degree(k)
    mw = build_multiwavelets(k)
    filters = build_qmf_filters(k, mw)

    vx, vw = gauss_legendre(k + 1)
    ex, ew = gauss_legendre(k + 2)
    px, pw = gauss_legendre(k + 3)

    phi_trap = scaling_eval_all(k, _TRAPEZOID_NODES)
    psi_trap = np.stack([
        np.tensordot(mw.left, phi_trap, axes=(1, 0)),
        np.tensordot(mw.right, phi_trap, axes=(1, 0)),
    ])

    # averages over one cell of the neighbors' polynomial extensions,
    # exact Gauss integrals of phi_l over [1, 3] and [-3, -1]
    gx, gw = gauss_legendre(k + 2)
    ext_from_left = 0.5 * np.einsum(
        "lq,q->l", scaling_eval_all(k, 2.0 + gx), gw)
    ext_from_right = 0.5 * np.einsum(
        "lq,q->l", scaling_eval_all(k, -2.0 + gx), gw)

    # admissibility checks must cover every node at which states are ever
    # evaluated: volume rule, edge rule (2D faces), projection rule
    # (derived-quantity fields), and the endpoint traces
    check = np.unique(np.concatenate([[-1.0, 1.0], vx, ex, px]))

    # 2D: the same coverage as an explicit point list (tensor products of
    # the *rules*, not of the union set, which would cube the cost)
    pts = [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
    pts += [(a, b) for a in vx for b in vx]
    pts += [(s, e) for s in (-1.0, 1.0) for e in ex]
    pts += [(e, s) for s in (-1.0, 1.0) for e in ex]
    pts += [(a, b) for a in px for b in px]
    check_pts = np.array(sorted(set(pts)))
    phi2 = np.einsum("lp,mp->lmp", scaling_eval_all(k, check_pts[:, 0]),
                     scaling_eval_all(k, check_pts[:, 1]))

    arrays = dict(
        vol_nodes=vx, vol_weights=vw,
        phi_vol=scaling_eval_all(k, vx), dphi_vol=scaling_deriv_all(k, vx),
        edge_nodes=ex, edge_weights=ew, phi_edge=scaling_eval_all(k, ex),
        proj_nodes=px, proj_weights=pw, phi_proj=scaling_eval_all(k, px),
        phi_left=scaling_eval_all(k, -1.0), phi_right=scaling_eval_all(k, 1.0),
        phi_trap=phi_trap, psi_trap=psi_trap,
        trap_weights=_TRAPEZOID_WEIGHTS.copy(),
        ext_from_left=ext_from_left, ext_from_right=ext_from_right,
        check_nodes=check, phi_check=scaling_eval_all(k, check),
        check_points_2d=check_pts, phi_check_2d=phi2,
    )
    for a in arrays.values():
        a.setflags(write=False)
    return BasisTables(k=k, mw=mw, filters=filters, **arrays)
