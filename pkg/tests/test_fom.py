"""Unit tests for the full-order solvers."""

import numpy as np
import pytest

from ldmd.fom import (AllenCahnProblem, BurgersProblem, FomProblem,
                      IntegrationFailure, MaxwellTmProblem, NlseProblem,
                      integrate, make_problem, position_density)

RNG = np.random.default_rng(20240819)


class TestFactory:
    def test_known_equations(self):
        for name, cls in (("burgers", BurgersProblem),
                          ("allen_cahn", AllenCahnProblem),
                          ("nlse", NlseProblem),
                          ("maxwell_tm", MaxwellTmProblem)):
            assert isinstance(make_problem(name), cls)

    def test_unknown_equation(self):
        with pytest.raises(ValueError, match="unknown equation"):
            make_problem("poisson")

    def test_grid_overrides(self):
        prob = make_problem("burgers", n_intervals=50, n_steps=100)
        assert prob.state_dim == 51
        assert prob.n_steps == 100


class TestIntegrate:
    def test_forward_euler_identity(self):
        prob = make_problem("burgers", n_intervals=50, n_steps=100)
        u0 = prob.initial_condition()
        states = integrate(prob, u0, 0.0, 3)
        assert len(states) == 4
        for k in range(3):
            expected = states[k] + prob.dt * prob.rhs(states[k], k * prob.dt)
            assert np.allclose(states[k + 1], expected, atol=0, rtol=0)

    def test_requires_at_least_one_step(self):
        prob = make_problem("burgers", n_intervals=50, n_steps=100)
        with pytest.raises(ValueError):
            integrate(prob, prob.initial_condition(), 0.0, 0)

    def test_failure_reports_last_good_index(self):
        class Exploding(FomProblem):
            def rhs(self, u, t=0.0):
                return u * 1e200

            def initial_condition(self):
                return np.ones(self.state_dim, dtype=complex)

        prob = Exploding(equation="exploding", dt=1.0, n_steps=5, state_dim=2)
        with pytest.raises(IntegrationFailure) as info:
            integrate(prob, prob.initial_condition(), 0.0, 5)
        assert info.value.last_good_index is not None


class TestBurgers:
    def test_initial_condition(self):
        prob = make_problem("burgers")
        u0 = prob.initial_condition()
        assert np.allclose(u0, -np.sin(np.pi * prob.x))
        assert abs(u0[0]) <= 1e-15 and abs(u0[-1]) <= 1e-15

    def test_dirichlet_rows_pinned(self):
        # Boundary rows of the rhs are zero, so the end values never move.
        prob = make_problem("burgers", n_intervals=50, n_steps=100)
        states = integrate(prob, prob.initial_condition(), 0.0, 10)
        for u in states:
            assert u[0] == states[0][0] and u[-1] == states[0][-1]

    def test_rhs_matches_conservative_form(self):
        # Oracle: f(u) = -1/2 A1 (u*u) + mu A2 u with dense central
        # difference matrices (boundary rows zero).
        prob = make_problem("burgers", n_intervals=40, n_steps=100)
        n = prob.state_dim
        A1 = prob.first_difference_matrix
        A2 = np.zeros((n, n))
        idx = np.arange(1, n - 1)
        A2[idx, idx - 1] = A2[idx, idx + 1] = 1.0 / prob.dx**2
        A2[idx, idx] = -2.0 / prob.dx**2
        u = RNG.standard_normal(n).astype(complex)
        expected = -0.5 * (A1 @ (u * u)) + prob.mu * (A2 @ u)
        assert np.allclose(prob.rhs(u), expected, atol=1e-12)

    def test_diffusion_number_stable(self):
        assert make_problem("burgers").diffusion_number <= 0.5

    def test_first_difference_matrix_boundary_rows_zero(self):
        A1 = make_problem("burgers", n_intervals=10).first_difference_matrix
        assert np.all(A1[0] == 0) and np.all(A1[-1] == 0)


class TestAllenCahn:
    def test_constant_state_pure_reaction(self):
        # With mirrored ghosts the Laplacian of a constant vanishes, so
        # the rhs is exactly the reaction term 5(c - c^3).
        prob = make_problem("allen_cahn", n_intervals=30, n_steps=100)
        for c in (0.2, -0.7):
            u = np.full(prob.state_dim, c, dtype=complex)
            assert np.allclose(prob.rhs(u), 5.0 * (c - c**3), atol=1e-13)

    def test_initial_condition(self):
        prob = make_problem("allen_cahn")
        expected = 0.53 * prob.x + 0.47 * np.sin(-1.5 * np.pi * prob.x)
        assert np.allclose(prob.initial_condition(), expected)

    def test_zero_flux_preserved_for_symmetric_data(self):
        # Even initial data on a symmetric grid stays even under the
        # mirrored-ghost Neumann discretization.
        prob = make_problem("allen_cahn", n_intervals=20, n_steps=100)
        u = np.cos(np.pi * prob.x).astype(complex)
        du = prob.rhs(u)
        assert np.allclose(du, du[::-1], atol=1e-12)


class TestNlse:
    def test_initial_condition(self):
        prob = make_problem("nlse")
        assert np.allclose(prob.initial_condition(), 2.0 / np.cosh(prob.x))

    def test_rhs_interior_oracle(self):
        prob = make_problem("nlse", n_intervals=20, n_steps=100)
        psi = (RNG.standard_normal(prob.state_dim)
               + 1j * RNG.standard_normal(prob.state_dim))
        d = prob.rhs(psi)
        lap = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / prob.dx**2
        expected = 1j * prob.theta * (lap + np.abs(psi[1:-1])**2 * psi[1:-1])
        assert np.allclose(d[1:-1], expected, atol=1e-12)
        assert d[0] == 0 and d[-1] == 0

    def test_position_density(self):
        psi = np.array([1.0 + 1.0j, 2.0, -3.0j])
        assert np.allclose(position_density(psi), [2.0, 4.0, 9.0])


class TestMaxwell:
    def test_layout_covers_state(self):
        prob = make_problem("maxwell_tm")
        assert prob.state_dim == 6 * 400
        slices = [prob.layout[n] for n in ("Hx", "Hy", "Ez", "Jz", "Kx", "Ky")]
        covered = sum(s.stop - s.start for s in slices)
        assert covered == prob.state_dim

    def test_zero_state_rhs_is_pure_source(self):
        # Linearity in the state: at u = 0 the rhs is exactly the
        # manufactured sources (g^s into H, f^s into Ez interior, zeros
        # into J and K).
        prob = make_problem("maxwell_tm")
        t = 0.37
        du = prob.rhs(np.zeros(prob.state_dim, dtype=complex), t)
        fs, gsx, gsy = prob.sources(t)
        fs = fs.copy()
        fs[prob._boundary] = 0.0
        assert np.allclose(du[prob.layout["Hx"]], gsx.ravel(), atol=1e-13)
        assert np.allclose(du[prob.layout["Hy"]], gsy.ravel(), atol=1e-13)
        assert np.allclose(du[prob.layout["Ez"]], fs.ravel(), atol=1e-13)
        for name in ("Jz", "Kx", "Ky"):
            assert np.allclose(du[prob.layout[name]], 0.0, atol=0)

    def test_initial_condition_currents_zero(self):
        prob = make_problem("maxwell_tm")
        u0 = prob.initial_condition()
        for name in ("Jz", "Kx", "Ky"):
            assert np.all(u0[prob.layout[name]] == 0)

    def test_ez_boundary_trace_frozen(self):
        prob = make_problem("maxwell_tm", n_steps=100)
        states = integrate(prob, prob.initial_condition(), 0.0, 5)
        b = prob._boundary.ravel()
        first = states[0][prob.layout["Ez"]][b]
        for u in states[1:]:
            assert np.array_equal(u[prob.layout["Ez"]][b], first)
