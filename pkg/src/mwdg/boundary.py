"""Boundary conditions expressed as ghost-element modal coefficients.

Every condition can materialize one ghost element (1D) or a full ghost
row/column (2D) adjacent to a domain side; the solver derives ghost traces
from these, and the limiter and local indicators read them as neighbor
coefficients, so all stencils see one consistent exterior state.
"""

from __future__ import annotations

import numpy as np

from .fields import SQRT2, DgField1D, DgField2D


def constant_coeffs(state, k):
    """Modal coefficients of a constant state on one element: mode 0 carries
    sqrt(2) * value (1D normalization), higher modes vanish."""
    out = np.zeros((len(state), k + 1))
    out[:, 0] = np.asarray(state, dtype=float) * SQRT2
    return out


def constant_coeffs_2d(state, k):
    out = np.zeros((len(state), k + 1, k + 1))
    out[:, 0, 0] = np.asarray(state, dtype=float) * 2.0
    return out


class ConstantBC1D:
    kind = "constant-state"

    def __init__(self, state):
        self.state = np.asarray(state, dtype=float)

    def ghost(self, field: DgField1D, side: str, t: float) -> np.ndarray:
        return constant_coeffs(self.state, field.k)


class PeriodicBC1D:
    kind = "periodic"

    def ghost(self, field: DgField1D, side: str, t: float) -> np.ndarray:
        j = -1 if side == "left" else 0
        return field.coeffs[:, j, :].copy()


class ReflectiveBC1D:
    """Mirror wall: even reflection of all components except the normal
    momentum, which flips sign.  Mirroring negates odd reference modes.
    """

    kind = "reflective-wall"

    def __init__(self, momentum_component: int = 1):
        self.momentum_component = momentum_component

    def ghost(self, field: DgField1D, side: str, t: float) -> np.ndarray:
        j = 0 if side == "left" else -1
        inner = field.coeffs[:, j, :]
        parity = (-1.0) ** np.arange(field.k + 1)
        out = inner * parity
        out[self.momentum_component] *= -1.0
        return out


class FunctionBC1D:
    """Time-dependent Dirichlet data sampled at the ghost-cell center."""

    kind = "time-dependent-dirichlet"

    def __init__(self, fn):
        self.fn = fn

    def ghost(self, field: DgField1D, side: str, t: float) -> np.ndarray:
        mesh = field.mesh
        x = mesh.a - 0.5 * mesh.dx if side == "left" else mesh.b + 0.5 * mesh.dx
        return constant_coeffs(self.fn(x, t), field.k)


class BoundarySet1D:
    def __init__(self, left, right):
        self.left = left
        self.right = right

    def ghost(self, field: DgField1D, side: str, t: float) -> np.ndarray:
        if side == "left":
            return self.left.ghost(field, side, t)
        if side == "right":
            return self.right.ghost(field, side, t)
        raise ValueError(f"unknown side {side!r}")

    @classmethod
    def constant(cls, left_state, right_state):
        return cls(ConstantBC1D(left_state), ConstantBC1D(right_state))

    @classmethod
    def periodic(cls):
        return cls(PeriodicBC1D(), PeriodicBC1D())

    @classmethod
    def reflective(cls, momentum_component: int = 1):
        return cls(ReflectiveBC1D(momentum_component),
                   ReflectiveBC1D(momentum_component))


# -- 2D ----------------------------------------------------------------------

def _side_geometry(field: DgField2D, side: str):
    """(along-axis positions, ghost-line transverse coordinate)."""
    mesh = field.mesh
    if side in ("xlo", "xhi"):
        along = mesh.ycenters()
        ghost = mesh.ax - 0.5 * mesh.dx if side == "xlo" else mesh.bx + 0.5 * mesh.dx
    else:
        along = mesh.xcenters()
        ghost = mesh.ay - 0.5 * mesh.dy if side == "ylo" else mesh.by + 0.5 * mesh.dy
    return along, ghost


class ConstantBC2D:
    kind = "constant-state"

    def __init__(self, state):
        self.state = np.asarray(state, dtype=float)

    def ghost(self, field: DgField2D, side: str, t: float) -> np.ndarray:
        along, _ = _side_geometry(field, side)
        cell = constant_coeffs_2d(self.state, field.k)
        return np.repeat(cell[:, None], along.size, axis=1)


class PeriodicBC2D:
    kind = "periodic"

    def ghost(self, field: DgField2D, side: str, t: float) -> np.ndarray:
        if side == "xlo":
            return field.coeffs[:, -1].copy()
        if side == "xhi":
            return field.coeffs[:, 0].copy()
        if side == "ylo":
            return field.coeffs[:, :, -1].copy()
        return field.coeffs[:, :, 0].copy()


class ReflectiveBC2D:
    kind = "reflective-wall"

    def __init__(self, normal_momentum_component: int):
        self.normal_momentum_component = normal_momentum_component

    def ghost(self, field: DgField2D, side: str, t: float) -> np.ndarray:
        k1 = field.k + 1
        parity = (-1.0) ** np.arange(k1)
        if side in ("xlo", "xhi"):
            i = 0 if side == "xlo" else -1
            inner = field.coeffs[:, i]                    # (c, ny, k1, k1)
            out = inner * parity[:, None]                 # flip x-modes
        else:
            j = 0 if side == "ylo" else -1
            inner = field.coeffs[:, :, j]
            out = inner * parity[None, :]                 # flip y-modes
        out = np.ascontiguousarray(out)
        out[self.normal_momentum_component] *= -1.0
        return out


class FunctionBC2D:
    """Dirichlet data from a state function, sampled at ghost-cell centers
    (one constant state per ghost cell)."""

    kind = "time-dependent-dirichlet"

    def __init__(self, fn):
        self.fn = fn

    def ghost(self, field: DgField2D, side: str, t: float) -> np.ndarray:
        along, ghost_coord = _side_geometry(field, side)
        k1 = field.k + 1
        out = np.zeros((field.ncomp, along.size, k1, k1))
        for idx, s in enumerate(along):
            if side in ("xlo", "xhi"):
                state = self.fn(ghost_coord, s, t)
            else:
                state = self.fn(s, ghost_coord, t)
            out[:, idx, 0, 0] = np.asarray(state) * 2.0
        return out


class SplitXBC2D:
    """Composite condition for a y-side: cells left of a (possibly moving)
    split abscissa use one condition, the rest another."""

    kind = "split-x"

    def __init__(self, split_of_t, left_bc, right_bc):
        self.split_of_t = split_of_t
        self.left_bc = left_bc
        self.right_bc = right_bc

    def ghost(self, field: DgField2D, side: str, t: float) -> np.ndarray:
        xs = field.mesh.xcenters()
        split = self.split_of_t(t)
        left = self.left_bc.ghost(field, side, t)
        right = self.right_bc.ghost(field, side, t)
        mask = xs < split
        return np.where(mask[None, :, None, None], left, right)


class BoundarySet2D:
    def __init__(self, xlo, xhi, ylo, yhi):
        self.conditions = {"xlo": xlo, "xhi": xhi, "ylo": ylo, "yhi": yhi}

    def ghost(self, field: DgField2D, side: str, t: float) -> np.ndarray:
        return self.conditions[side].ghost(field, side, t)
