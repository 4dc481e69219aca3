"""Dyadic meshes and modal coefficient fields.

Element counts are powers of two per direction so that the two-child wavelet
hierarchy applies.  Cells are left-open/right-closed; a jump placed exactly on
an edge therefore belongs to the cell on its left.

Coefficient layout:

* 1D: ``coeffs[c, j, l]`` — component c, element j, mode l.
* 2D: ``coeffs[c, i, j, lx, ly]`` with i the x-element index.

The mode-0 coefficient relates to the cell average by ``avg = u0 / sqrt(2)``
in 1D and ``avg = u00 / 2`` in 2D (orthonormal reference basis).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class Mesh1D:
    level: int
    a: float
    b: float

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("mesh level must be >= 0")
        if not self.b > self.a:
            raise ValueError("empty domain")

    @property
    def n_elements(self) -> int:
        return 1 << self.level

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n_elements

    def centers(self) -> np.ndarray:
        return self.a + (np.arange(self.n_elements) + 0.5) * self.dx

    def edges(self) -> np.ndarray:
        return self.a + np.arange(self.n_elements + 1) * self.dx

    def element_of(self, x) -> np.ndarray:
        """Element index containing x (edge points resolve rightward except b)."""
        idx = np.floor((np.asarray(x) - self.a) / self.dx).astype(int)
        return np.clip(idx, 0, self.n_elements - 1)


@dataclass(frozen=True)
class Mesh2D:
    level_x: int
    level_y: int
    ax: float
    bx: float
    ay: float
    by: float

    @property
    def nx(self) -> int:
        return 1 << self.level_x

    @property
    def ny(self) -> int:
        return 1 << self.level_y

    @property
    def dx(self) -> float:
        return (self.bx - self.ax) / self.nx

    @property
    def dy(self) -> float:
        return (self.by - self.ay) / self.ny

    def xcenters(self) -> np.ndarray:
        return self.ax + (np.arange(self.nx) + 0.5) * self.dx

    def ycenters(self) -> np.ndarray:
        return self.ay + (np.arange(self.ny) + 0.5) * self.dy


@dataclass
class DgField1D:
    mesh: Mesh1D
    k: int
    ncomp: int
    coeffs: np.ndarray  # (ncomp, n_elements, k+1)

    @classmethod
    def zeros(cls, mesh: Mesh1D, k: int, ncomp: int) -> "DgField1D":
        return cls(mesh, k, ncomp,
                   np.zeros((ncomp, mesh.n_elements, k + 1)))

    def copy(self) -> "DgField1D":
        return DgField1D(self.mesh, self.k, self.ncomp, self.coeffs.copy())

    def cell_averages(self) -> np.ndarray:
        return self.coeffs[..., 0] / SQRT2

    def validate(self):
        expect = (self.ncomp, self.mesh.n_elements, self.k + 1)
        if self.coeffs.shape != expect:
            raise ValueError(
                f"coefficient tensor shape {self.coeffs.shape} != {expect}")


@dataclass
class DgField2D:
    mesh: Mesh2D
    k: int
    ncomp: int
    coeffs: np.ndarray  # (ncomp, nx, ny, k+1, k+1)

    @classmethod
    def zeros(cls, mesh: Mesh2D, k: int, ncomp: int) -> "DgField2D":
        return cls(mesh, k, ncomp,
                   np.zeros((ncomp, mesh.nx, mesh.ny, k + 1, k + 1)))

    def copy(self) -> "DgField2D":
        return DgField2D(self.mesh, self.k, self.ncomp, self.coeffs.copy())

    def cell_averages(self) -> np.ndarray:
        return self.coeffs[..., 0, 0] / 2.0
