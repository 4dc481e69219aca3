"""Conservation laws: scalar advection and Burgers (verification problems)
and the compressible Euler equations in 1D/2D with an ideal-gas EOS.

All operations are vectorized over trailing point axes with the component
axis leading, and are pure (no internal state).
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidStateError


class Advection:
    """u_t + (a u)_x = 0."""

    ncomp = 1
    name = "advection"
    has_eigen = False

    def __init__(self, speed: float = 1.0):
        self.speed = speed

    def flux(self, u):
        return self.speed * u

    def jacobian(self, u):
        return np.broadcast_to(self.speed, np.shape(u)[1:] + (1, 1))

    def max_wave_speed(self, ul, ur):
        return np.broadcast_to(abs(self.speed), np.shape(ul)[1:]).copy()

    def wave_speed_at(self, u):
        return np.broadcast_to(abs(self.speed), np.shape(u)[1:]).copy()

    def indicator_variable(self, name, u):
        if name not in ("u", "density"):
            raise ValueError(f"unknown indicator variable {name!r}")
        return u[0]


class Burgers:
    """u_t + (u^2/2)_x = 0 (convex flux)."""

    ncomp = 1
    name = "burgers"
    has_eigen = False

    def flux(self, u):
        return 0.5 * u * u

    def jacobian(self, u):
        return u[0][..., None, None].copy()

    def max_wave_speed(self, ul, ur):
        # convex flux: the maximum of |f'| over intermediate states is
        # attained at one of the traces
        return np.maximum(np.abs(ul[0]), np.abs(ur[0]))

    def wave_speed_at(self, u):
        return np.abs(u[0])

    def indicator_variable(self, name, u):
        if name not in ("u", "density"):
            raise ValueError(f"unknown indicator variable {name!r}")
        return u[0]


class Euler1D:
    """1D compressible Euler equations for (rho, rho*u, E)."""

    ncomp = 3
    name = "euler1d"
    has_eigen = True

    def __init__(self, gamma: float = 1.4):
        self.gamma = gamma

    # -- thermodynamics -----------------------------------------------------

    def pressure(self, u, check: bool = True):
        rho, mom, en = u[0], u[1], u[2]
        p = (self.gamma - 1.0) * (en - 0.5 * mom * mom / rho)
        if check and (np.any(rho <= 0.0) or np.any(p <= 0.0)):
            raise InvalidStateError("non-positive density or pressure")
        return p

    def sound_speed(self, u):
        return np.sqrt(self.gamma * self.pressure(u) / u[0])

    def entropy(self, u):
        """log(p / rho^gamma); constant across isentropic regions, jumps at
        shocks and contacts."""
        p = self.pressure(u)
        return np.log(p) - self.gamma * np.log(u[0])

    def energy_from_primitive(self, rho, vel, p):
        return p / (self.gamma - 1.0) + 0.5 * rho * vel * vel

    # -- flux and characteristic structure ----------------------------------

    def flux(self, u):
        rho, mom, en = u[0], u[1], u[2]
        p = self.pressure(u)
        v = mom / rho
        return np.stack([mom, mom * v + p, v * (en + p)])

    def jacobian(self, u):
        """d(flux)/d(state); shape ``points + (3, 3)``."""
        rho, mom, en = u[0], u[1], u[2]
        g = self.gamma
        v = mom / rho
        h = (en + self.pressure(u)) / rho
        z = np.zeros_like(v)
        one = np.ones_like(v)
        rows = [
            [z, one, z],
            [0.5 * (g - 3.0) * v * v, (3.0 - g) * v, (g - 1.0) * one],
            [(0.5 * (g - 1.0) * v * v - h) * v, h - (g - 1.0) * v * v, g * v],
        ]
        return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)

    def eigen(self, u):
        """Eigenvalues and right/left eigenvector matrices of the flux
        Jacobian; shapes ``points + (3,)`` and ``points + (3, 3)``.
        """
        rho, mom, en = u[0], u[1], u[2]
        p = self.pressure(u)
        v = mom / rho
        c = np.sqrt(self.gamma * p / rho)
        h = (en + p) / rho
        lam = np.stack([v - c, v, v + c], axis=-1)
        one = np.ones_like(v)
        right = np.stack([
            np.stack([one, one, one], axis=-1),
            np.stack([v - c, v, v + c], axis=-1),
            np.stack([h - v * c, 0.5 * v * v, h + v * c], axis=-1),
        ], axis=-2)
        b1 = (self.gamma - 1.0) / (c * c)
        b2 = 0.5 * b1 * v * v
        left = np.stack([
            np.stack([0.5 * (b2 + v / c), -0.5 * (b1 * v + 1.0 / c),
                      0.5 * b1], axis=-1),
            np.stack([1.0 - b2, b1 * v, -b1], axis=-1),
            np.stack([0.5 * (b2 - v / c), -0.5 * (b1 * v - 1.0 / c),
                      0.5 * b1], axis=-1),
        ], axis=-2)
        return lam, right, left

    def max_wave_speed(self, ul, ur):
        sl = np.abs(ul[1] / ul[0]) + self.sound_speed(ul)
        sr = np.abs(ur[1] / ur[0]) + self.sound_speed(ur)
        return np.maximum(sl, sr)

    def wave_speed_at(self, u):
        return np.abs(u[1] / u[0]) + self.sound_speed(u)

    def is_admissible(self, u):
        rho, mom, en = u[0], u[1], u[2]
        p = (self.gamma - 1.0) * (en - 0.5 * mom * mom / rho)
        return (rho > 0.0) & (p > 0.0) & (en > 0.0)

    def indicator_variable(self, name, u):
        """Detection quantity by name.

        "entropy" maps to the positive surrogate p / rho^gamma rather than
        its logarithm: ratio-normalized detectors divide by the variable's
        cell norm, and the log form is identically zero on whole states
        (unit-entropy gas), which turns those ratios into 0/0 noise.
        """
        if name == "density":
            return u[0]
        if name == "entropy":
            return self.pressure(u) / u[0] ** self.gamma
        raise ValueError(f"unknown indicator variable {name!r}")


class Euler2D:
    """2D compressible Euler equations for (rho, rho*u, rho*v, E)."""

    ncomp = 4
    name = "euler2d"
    has_eigen = True

    def __init__(self, gamma: float = 1.4):
        self.gamma = gamma

    def pressure(self, u, check: bool = True):
        rho, mx, my, en = u[0], u[1], u[2], u[3]
        p = (self.gamma - 1.0) * (en - 0.5 * (mx * mx + my * my) / rho)
        if check and (np.any(rho <= 0.0) or np.any(p <= 0.0)):
            raise InvalidStateError("non-positive density or pressure")
        return p

    def sound_speed(self, u):
        return np.sqrt(self.gamma * self.pressure(u) / u[0])

    def entropy(self, u):
        p = self.pressure(u)
        return np.log(p) - self.gamma * np.log(u[0])

    def energy_from_primitive(self, rho, vx, vy, p):
        return p / (self.gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy)

    def flux(self, u, direction: int):
        """Directional flux; ``direction`` 0 for x, 1 for y."""
        rho, mx, my, en = u[0], u[1], u[2], u[3]
        p = self.pressure(u)
        if direction == 0:
            v = mx / rho
            return np.stack([mx, mx * v + p, my * v, (en + p) * v])
        v = my / rho
        return np.stack([my, mx * v, my * v + p, (en + p) * v])

    def jacobian(self, u, direction: int):
        """Finite-difference-checkable analytic Jacobian of the directional
        flux; built by the swap symmetry from the x form."""
        if direction == 1:
            swapped = u[[0, 2, 1, 3]]
            jac = self.jacobian(swapped, 0)
            perm = [0, 2, 1, 3]
            return jac[..., perm, :][..., :, perm]
        rho, mx, my, en = u[0], u[1], u[2], u[3]
        g = self.gamma
        vx = mx / rho
        vy = my / rho
        q2 = vx * vx + vy * vy
        h = (en + self.pressure(u)) / rho
        z = np.zeros_like(vx)
        one = np.ones_like(vx)
        rows = [
            [z, one, z, z],
            [0.5 * (g - 1.0) * q2 - vx * vx, (3.0 - g) * vx,
             -(g - 1.0) * vy, (g - 1.0) * one],
            [-vx * vy, vy, vx, z],
            [(0.5 * (g - 1.0) * q2 - h) * vx, h - (g - 1.0) * vx * vx,
             -(g - 1.0) * vx * vy, g * vx],
        ]
        return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)

    def eigen(self, u, direction: int):
        """Right/left eigenvector matrices of the directional Jacobian."""
        rho, mx, my, en = u[0], u[1], u[2], u[3]
        p = self.pressure(u)
        c = np.sqrt(self.gamma * p / rho)
        vx = mx / rho
        vy = my / rho
        h = (en + p) / rho
        if direction == 0:
            vn, vt = vx, vy
        else:
            vn, vt = vy, vx
        one = np.ones_like(vn)
        z = np.zeros_like(vn)
        q2h = 0.5 * (vx * vx + vy * vy)
        # rows in (rho, normal momentum, tangential momentum, E) ordering
        right = np.stack([
            np.stack([one, one, z, one], axis=-1),
            np.stack([vn - c, vn, z, vn + c], axis=-1),
            np.stack([vt, vt, one, vt], axis=-1),
            np.stack([h - vn * c, q2h, vt, h + vn * c], axis=-1),
        ], axis=-2)
        b1 = (self.gamma - 1.0) / (c * c)
        b2 = b1 * q2h
        left = np.stack([
            np.stack([0.5 * (b2 + vn / c), -0.5 * (b1 * vn + 1.0 / c),
                      -0.5 * b1 * vt, 0.5 * b1], axis=-1),
            np.stack([1.0 - b2, b1 * vn, b1 * vt, -b1], axis=-1),
            np.stack([-vt, z, one, z], axis=-1),
            np.stack([0.5 * (b2 - vn / c), -0.5 * (b1 * vn - 1.0 / c),
                      -0.5 * b1 * vt, 0.5 * b1], axis=-1),
        ], axis=-2)
        lam = np.stack([vn - c, vn, vn, vn + c], axis=-1)
        if direction == 1:
            # permute rows back to (rho, mx, my, E) component ordering
            perm = [0, 2, 1, 3]
            right = right[..., perm, :]
            left = left[..., :, perm]
        return lam, right, left

    def max_wave_speed(self, ul, ur, direction: int):
        def speed(u):
            return np.abs(u[1 + direction] / u[0]) + self.sound_speed(u)
        return np.maximum(speed(ul), speed(ur))

    def wave_speed_at(self, u, direction: int):
        return np.abs(u[1 + direction] / u[0]) + self.sound_speed(u)

    def is_admissible(self, u):
        rho, mx, my, en = u[0], u[1], u[2], u[3]
        p = (self.gamma - 1.0) * (en - 0.5 * (mx * mx + my * my) / rho)
        return (rho > 0.0) & (p > 0.0) & (en > 0.0)

    def indicator_variable(self, name, u):
        # positive entropy surrogate; see the 1D twin for the rationale
        if name == "density":
            return u[0]
        if name == "entropy":
            return self.pressure(u) / u[0] ** self.gamma
        raise ValueError(f"unknown indicator variable {name!r}")
