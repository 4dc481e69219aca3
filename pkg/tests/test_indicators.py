import numpy as np
import pytest

from mwdg.boundary import BoundarySet1D
from mwdg.errors import CannotIndicateError
from mwdg.fields import SQRT2, DgField1D, Mesh1D, Mesh2D
from mwdg.indicators import (IndicatorConfig, harten_indicate_1d,
                             kxrcf_indicate_1d, mw_indicate_1d,
                             mw_indicate_2d)
from mwdg.physics import Advection, Burgers, Euler1D
from mwdg.solver import project_initial_1d, project_initial_2d

from oracles import brute_force_flags


def step_field(level=6, k=1, split=None, domain=(-1.0, 1.0), lo=0.0, hi=1.0):
    """Projected step with the jump interior to a coarse pair by default."""
    mesh = Mesh1D(level, *domain)
    if split is None:
        # odd fine edge: inside a coarse cell, so one-step detail sees it
        split = mesh.a + 3 * mesh.dx
    f = project_initial_1d(
        lambda x: np.stack([np.where(np.asarray(x) >= split, hi, lo)]),
        mesh, k, 1, jumps=(split,))
    return f, split


class TestConfig:
    def test_threshold_range(self):
        with pytest.raises(ValueError):
            IndicatorConfig(threshold=1.5)
        with pytest.raises(ValueError):
            IndicatorConfig(harten_alpha=0.0)


class TestMwIndicator1D:
    def test_needs_two_elements(self):
        f = DgField1D.zeros(Mesh1D(0, 0.0, 1.0), 1, 1)
        with pytest.raises(CannotIndicateError):
            mw_indicate_1d(f, 0.1)

    def test_step_flags_adjacent_pair(self):
        f, split = step_field(level=6, k=1)
        ts = mw_indicate_1d(f, 0.1)
        j = int(f.mesh.element_of(split - 1e-12))
        assert set(np.flatnonzero(ts.flags)) == {j, j + 1}

    def test_constant_field_empty(self):
        mesh = Mesh1D(5, 0.0, 1.0)
        f = project_initial_1d(
            lambda x: np.full((1,) + np.shape(x), 4.2), mesh, 1, 1)
        assert mw_indicate_1d(f, 0.3).count == 0

    def test_threshold_one_empty(self):
        f, _ = step_field()
        assert mw_indicate_1d(f, 1.0).count == 0

    def test_scale_invariance(self, rng):
        f, _ = step_field(level=5, k=2)
        f.coeffs[0, :, :] += 0.05 * rng.normal(size=f.coeffs.shape[1:])
        base = mw_indicate_1d(f, 0.2).flags
        for factor in (17.0, -0.003, -1.0):
            g = f.copy()
            g.coeffs *= factor
            assert np.array_equal(mw_indicate_1d(g, 0.2).flags, base)

    def test_monotone_in_threshold(self, rng):
        f, _ = step_field(level=5, k=1)
        f.coeffs[0, :, :] += 0.02 * rng.normal(size=f.coeffs.shape[1:])
        prev = None
        for c in (0.05, 0.2, 0.5, 0.9):
            flags = mw_indicate_1d(f, c).flags
            if prev is not None:
                assert np.all(flags <= prev)   # subset as c grows
            prev = flags

    def test_translation_equivariance(self):
        # shifting the jump by one coarse pair shifts the flags by two cells
        f1, _ = step_field(level=5, split=None)
        mesh = f1.mesh
        split2 = mesh.a + 5 * mesh.dx
        f2, _ = step_field(level=5, split=split2)
        fl1 = np.flatnonzero(mw_indicate_1d(f1, 0.1).flags)
        fl2 = np.flatnonzero(mw_indicate_1d(f2, 0.1).flags)
        assert np.array_equal(fl1 + 2, fl2)

    def test_percentage_quantized(self, rng):
        f, _ = step_field(level=4, k=1)
        f.coeffs[0, :, :] += 0.05 * rng.normal(size=f.coeffs.shape[1:])
        ts = mw_indicate_1d(f, 0.3)
        pct = 100.0 * ts.count / f.mesh.n_elements
        assert pct == pytest.approx(round(pct / (100 / 16)) * (100 / 16))

    @pytest.mark.parametrize("k", (1, 2))
    @pytest.mark.parametrize("level", (4, 5))
    def test_matches_brute_force_oracle(self, rng, k, level):
        # random piecewise-polynomial fields; flags must agree exactly
        for trial in range(6):
            mesh = Mesh1D(level, -2.0, 2.0)
            f = DgField1D.zeros(mesh, k, 1)
            f.coeffs[0] = rng.normal(size=(mesh.n_elements, k + 1))
            for c in (0.1, 0.4):
                ts = mw_indicate_1d(f, c)
                oracle_flags, oracle_dbar, oracle_d = brute_force_flags(f, c)
                assert np.array_equal(ts.flags, oracle_flags)
                assert np.abs(ts.dbar - oracle_dbar).max() < 1e-10


class TestMwIndicator2D:
    def setup_mesh(self):
        return Mesh2D(4, 4, 0.0, 1.0, 0.0, 1.0)

    def test_orientation(self):
        mesh = self.setup_mesh()
        split = 7.0 / 16.0
        fx = project_initial_2d(
            lambda x, y: np.stack([np.where(x > split, 2.0, 1.0) + 0 * y]),
            mesh, 1, 1)
        ts = mw_indicate_2d(fx, 0.1, 0.1, 0.1)
        assert ts.beta_flags.sum() > 0
        assert ts.alpha_flags.sum() == 0 and ts.gamma_flags.sum() == 0

        fy = project_initial_2d(
            lambda x, y: np.stack([np.where(y > split, 2.0, 1.0) + 0 * x]),
            mesh, 1, 1)
        ts = mw_indicate_2d(fy, 0.1, 0.1, 0.1)
        assert ts.alpha_flags.sum() > 0
        assert ts.beta_flags.sum() == 0 and ts.gamma_flags.sum() == 0

        fd = project_initial_2d(
            lambda x, y: np.stack([np.where(x + y > 2 * split, 2.0, 1.0)]),
            mesh, 1, 1)
        ts = mw_indicate_2d(fd, 0.1, 0.1, 0.1)
        assert ts.gamma_flags.sum() > 0

    def test_constant_empty(self):
        mesh = self.setup_mesh()
        f = project_initial_2d(
            lambda x, y: np.stack([np.full(np.shape(x), 2.0)]), mesh, 1, 1)
        ts = mw_indicate_2d(f, 0.1, 0.1, 0.1)
        assert ts.count == 0

    def test_combined_mask_union(self):
        mesh = self.setup_mesh()
        split = 7.0 / 16.0
        f = project_initial_2d(
            lambda x, y: np.stack([np.where(x > split, 2.0, 1.0) + 0 * y]),
            mesh, 1, 1)
        ts = mw_indicate_2d(f, 0.1, 0.1, 0.1)
        rebuilt = (np.repeat(ts.alpha_flags, 2, axis=0)
                   | np.repeat(ts.beta_flags, 2, axis=1) | ts.gamma_flags)
        assert np.array_equal(ts.combined, rebuilt)

    def test_y_constant_matches_1d_via_beta(self, rng):
        mesh2 = Mesh2D(5, 3, -1.0, 1.0, 0.0, 1.0)
        mesh1 = Mesh1D(5, -1.0, 1.0)
        split = mesh1.a + 5 * mesh1.dx

        def profile(x):
            return np.sin(2.0 * x) + np.where(x >= split, 1.0, 0.0)

        f1 = project_initial_1d(lambda x: np.stack([profile(x)]), mesh1, 1, 1,
                                jumps=(split,))
        f2 = project_initial_2d(lambda x, y: np.stack([profile(x) + 0 * y]),
                                mesh2, 1, 1)
        flags1 = mw_indicate_1d(f1, 0.1).flags
        ts2 = mw_indicate_2d(f2, 0.1, 0.1, 0.1)
        for j in range(ts2.beta_flags.shape[1]):
            assert np.array_equal(ts2.beta_flags[:, j], flags1)


class TestKxrcf:
    def test_constant_empty(self):
        mesh = Mesh1D(5, -1.0, 1.0)
        law = Euler1D(1.4)
        f = DgField1D.zeros(mesh, 1, 3)
        f.coeffs[0, :, 0] = SQRT2
        f.coeffs[1, :, 0] = 0.5 * SQRT2
        f.coeffs[2, :, 0] = 2.5 * SQRT2
        bcs = BoundarySet1D.constant([1.0, 0.5, 2.5], [1.0, 0.5, 2.5])
        ts = kxrcf_indicate_1d(f, law, bcs, 0.0)
        assert ts.count == 0

    def test_zero_velocity_not_flagged(self):
        # genuine jump but no inflow anywhere: all cell velocities zero
        mesh = Mesh1D(5, -1.0, 1.0)
        law = Euler1D(1.4)
        split = mesh.a + 7 * mesh.dx
        f = project_initial_1d(
            lambda x: np.stack([np.where(x < split, 1.0, 0.125),
                                np.zeros(np.shape(x)),
                                np.where(x < split, 2.5, 0.25)]),
            mesh, 1, 3, jumps=(split,))
        bcs = BoundarySet1D.constant([1.0, 0.0, 2.5], [0.125, 0.0, 0.25])
        ts = kxrcf_indicate_1d(f, law, bcs, 0.0)
        assert ts.count == 0

    def test_moving_shock_flagged(self):
        # sharp jump with uniform rightward flow: upwind cell sees it
        mesh = Mesh1D(5, -1.0, 1.0)
        law = Euler1D(1.4)
        split = mesh.a + 7 * mesh.dx
        vel = 1.0

        def ic(x):
            rho = np.where(x < split, 1.0, 0.125)
            p = np.where(x < split, 1.0, 0.1)
            return np.stack([rho, rho * vel,
                             law.energy_from_primitive(rho, vel, p)])
        f = project_initial_1d(ic, mesh, 1, 3, jumps=(split,))
        bcs = BoundarySet1D.constant(ic(np.array([-1.0]))[:, 0],
                                     ic(np.array([1.0]))[:, 0])
        ts = kxrcf_indicate_1d(f, law, bcs, 0.0)
        j = int(mesh.element_of(split + 1e-12))
        assert ts.flags[j]

    def test_scalar_laws_supported(self):
        mesh = Mesh1D(5, 0.0, 2.0 * np.pi)
        f = project_initial_1d(lambda x: np.stack([np.sin(x)]), mesh, 1, 1)
        ts = kxrcf_indicate_1d(f, Advection(1.0), BoundarySet1D.periodic(),
                               0.0, variables=("u",))
        assert ts.flags.shape == (mesh.n_elements,)


class TestHarten:
    def test_needs_k1(self):
        f = DgField1D.zeros(Mesh1D(3, 0.0, 1.0), 0, 1)
        with pytest.raises(CannotIndicateError):
            harten_indicate_1d(f, Burgers(), BoundarySet1D.periodic(), 0.0,
                               variables=("u",))

    def test_globally_linear_unflagged(self):
        mesh = Mesh1D(4, 0.0, 1.0)
        f = project_initial_1d(lambda x: np.stack([2.0 * x + 1.0]), mesh, 1, 1)
        # ghost extension via constant ends would break linearity; test the
        # interior by periodic wrap of a linear-in-cell sawtooth instead
        bcs = BoundarySet1D.constant(
            np.array([1.0 - mesh.dx]), np.array([3.0 + mesh.dx]))

        class FakeBC:
            def ghost(self, field, side, t):
                j = 0 if side == "left" else -1
                g = field.coeffs[:, j, :].copy()
                g[:, 0] += (-1 if side == "left" else 1) * \
                    2.0 * mesh.dx * SQRT2
                return g
        ts = harten_indicate_1d(f, Burgers(), FakeBC(), 0.0, variables=("u",))
        assert ts.count == 0

    def test_constant_unflagged(self):
        mesh = Mesh1D(4, 0.0, 1.0)
        f = project_initial_1d(
            lambda x: np.full((1,) + np.shape(x), 3.3), mesh, 1, 1)
        ts = harten_indicate_1d(f, Burgers(), BoundarySet1D.periodic(), 0.0,
                                variables=("u",))
        assert ts.count == 0

    def test_projected_step_flagged(self):
        # jump strictly inside an element: that cell projects with a strong
        # slope while its neighbors stay flat, which is the detector's
        # trigger pattern (an edge-aligned step has zero top modes
        # everywhere and is correctly invisible to it)
        mesh = Mesh1D(5, -1.0, 1.0)
        split = mesh.a + 15.4 * mesh.dx
        f = project_initial_1d(
            lambda x: np.stack([np.where(x >= split, 2.0, 0.5)]), mesh, 1, 1,
            jumps=(split,))
        ts = harten_indicate_1d(f, Burgers(), BoundarySet1D.periodic(), 0.0,
                                variables=("u",))
        j = int(mesh.element_of(split))
        flagged = set(np.flatnonzero(ts.flags))
        assert j in flagged
        assert flagged <= {j - 1, j, j + 1}
