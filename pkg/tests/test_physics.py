import numpy as np
import pytest

from mwdg.errors import InvalidStateError
from mwdg.physics import Advection, Burgers, Euler1D, Euler2D


def random_euler_states_1d(rng, count=100, gamma=1.4):
    law = Euler1D(gamma)
    rho = rng.uniform(0.1, 3.0, count)
    vel = rng.uniform(-2.0, 2.0, count)
    p = rng.uniform(0.1, 5.0, count)
    return law, np.stack([rho, rho * vel,
                          law.energy_from_primitive(rho, vel, p)])


def fd_jacobian(flux, state, eps=1e-7):
    n = state.size
    out = np.zeros((n, n))
    for j in range(n):
        d = np.zeros(n)
        d[j] = eps * max(1.0, abs(state[j]))
        fp = flux((state + d)[:, None])[:, 0]
        fm = flux((state - d)[:, None])[:, 0]
        out[:, j] = (fp - fm) / (2.0 * d[j])
    return out


class TestEuler1D:
    def test_flux_rest_state(self):
        law = Euler1D(1.4)
        f = law.flux(np.array([[1.0], [0.0], [2.5]]))
        assert np.allclose(f[:, 0], [0.0, 1.0, 0.0], atol=1e-15)

    def test_sod_left_energy(self):
        law = Euler1D(1.4)
        assert law.energy_from_primitive(1.0, 0.0, 1.0) == pytest.approx(2.5)

    def test_zero_velocity_zero_mass_flux(self):
        law = Euler1D(1.4)
        f = law.flux(np.array([[2.0], [0.0], [7.0]]))
        assert f[0, 0] == 0.0

    def test_invalid_state_raises(self):
        law = Euler1D(1.4)
        with pytest.raises(InvalidStateError):
            law.flux(np.array([[1.0], [0.0], [-1.0]]))
        with pytest.raises(InvalidStateError):
            law.flux(np.array([[-1.0], [0.0], [2.5]]))

    def test_eigenvalues_rest_state(self):
        law = Euler1D(1.4)
        lam, _, _ = law.eigen(np.array([[1.0], [0.0], [2.5]]))
        assert np.allclose(lam[0], [-np.sqrt(1.4), 0.0, np.sqrt(1.4)])

    def test_eigen_inverse_identity(self, rng):
        law, states = random_euler_states_1d(rng)
        _, right, left = law.eigen(states)
        prod = np.einsum("qab,qbc->qac", right, left)
        assert np.abs(prod - np.eye(3)).max() < 1e-12

    def test_jacobian_matches_fd(self, rng):
        law, states = random_euler_states_1d(rng)
        worst = 0.0
        for q in range(states.shape[1]):
            st = states[:, q]
            analytic = law.jacobian(st[:, None])[0]
            fd = fd_jacobian(law.flux, st)
            scale = max(1.0, np.abs(analytic).max())
            worst = max(worst, np.abs(analytic - fd).max() / scale)
        assert worst < 1e-6

    def test_jacobian_diagonalized(self, rng):
        law, states = random_euler_states_1d(rng, count=20)
        lam, right, _ = law.eigen(states)
        jac = law.jacobian(states)
        lhs = np.einsum("qab,qbc->qac", jac, right)
        rhs = right * lam[:, None, :]
        assert np.abs(lhs - rhs).max() < 1e-10

    def test_eigenvalue_mirror_symmetry(self):
        law = Euler1D(1.4)
        st = np.array([1.3, 0.8, 3.1])
        mirrored = st * np.array([1.0, -1.0, 1.0])
        lam1 = law.eigen(st[:, None])[0][0]
        lam2 = law.eigen(mirrored[:, None])[0][0]
        assert np.allclose(np.sort(lam1), np.sort(-lam2))

    def test_wave_speed_pair(self):
        law = Euler1D(1.4)
        st = np.array([[1.0], [0.0], [2.5]])
        assert law.max_wave_speed(st, st)[0] == pytest.approx(np.sqrt(1.4))

    def test_entropy_values(self):
        law = Euler1D(1.4)
        assert law.entropy(np.array([1.0, 0.0, 2.5])) == pytest.approx(0.0)
        st = np.array([1.0, 0.0, np.e / 0.4])
        assert law.entropy(st) == pytest.approx(1.0)

    def test_eos_roundtrip(self, rng):
        law = Euler1D(1.4)
        p = rng.uniform(0.1, 10.0, 50)
        rho = rng.uniform(0.1, 3.0, 50)
        vel = rng.uniform(-2.0, 2.0, 50)
        en = law.energy_from_primitive(rho, vel, p)
        back = law.pressure(np.stack([rho, rho * vel, en]))
        assert np.allclose(back, p, rtol=0, atol=1e-13)


class TestEuler2D:
    def test_rotational_consistency(self, rng):
        law = Euler2D(1.4)
        rho = rng.uniform(0.1, 3.0, 30)
        vx = rng.uniform(-2.0, 2.0, 30)
        vy = rng.uniform(-2.0, 2.0, 30)
        p = rng.uniform(0.1, 5.0, 30)
        u = np.stack([rho, rho * vx, rho * vy,
                      law.energy_from_primitive(rho, vx, vy, p)])
        g = law.flux(u, 1)
        swapped = u[[0, 2, 1, 3]]
        f_sw = law.flux(swapped, 0)[[0, 2, 1, 3]]
        assert np.abs(g - f_sw).max() < 1e-13

    @pytest.mark.parametrize("direction", (0, 1))
    def test_jacobian_and_eigen(self, rng, direction):
        law = Euler2D(1.4)
        worst = 0.0
        for _ in range(40):
            rho = rng.uniform(0.1, 3.0)
            vx, vy = rng.uniform(-2.0, 2.0, 2)
            p = rng.uniform(0.1, 5.0)
            st = np.array([rho, rho * vx, rho * vy,
                           law.energy_from_primitive(rho, vx, vy, p)])
            analytic = law.jacobian(st[:, None], direction)[0]
            fd = fd_jacobian(lambda u: law.flux(u, direction), st)
            worst = max(worst, np.abs(analytic - fd).max())
            lam, right, left = law.eigen(st[:, None], direction)
            assert np.abs(right[0] @ left[0] - np.eye(4)).max() < 1e-11
            diag = np.abs(analytic @ right[0] - right[0] * lam[0]).max()
            assert diag < 1e-9
        assert worst < 1e-5

    def test_double_mach_left_state_consistency(self):
        # E = p/(gamma-1) + rho |v|^2 / 2 with |v| = 8.25 must give 563.5
        law = Euler2D(1.4)
        rho, speed, p = 8.0, 8.25, 116.5
        vx = speed * np.cos(np.pi / 6.0)
        vy = -speed * np.sin(np.pi / 6.0)
        en = law.energy_from_primitive(rho, vx, vy, p)
        assert en == pytest.approx(563.5, abs=1e-12)


class TestScalarLaws:
    def test_advection_speed(self):
        law = Advection(2.5)
        u = np.array([[1.0, -3.0]])
        assert np.all(law.max_wave_speed(u, u) == 2.5)
        assert np.allclose(law.flux(u), 2.5 * u)

    def test_burgers_traces(self):
        law = Burgers()
        ul = np.array([[1.0]])
        ur = np.array([[-2.0]])
        assert law.max_wave_speed(ul, ur)[0] == 2.0
        assert law.flux(ul)[0, 0] == 0.5
