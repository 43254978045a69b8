"""Semi-discrete full-order models for the four benchmark PDEs.

Each problem exposes the right-hand side f(u) of the semi-discrete
system du/dt = f(u, t) on its grid, the sampled initial condition, and
grid/time metadata. Time integration is explicit forward Euler
everywhere, which is exactly the discretization assumed by the
residual estimator, so the estimator vanishes on FOM-produced pairs.

States are stored as flat complex vectors even for real-valued
equations so the FOM-to-DMD boundary is uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class IntegrationFailure(RuntimeError):
    """Raised when time stepping produces non-finite values."""

    def __init__(self, message, last_good_index=None):
        super().__init__(message)
        self.last_good_index = last_good_index


@dataclass
class FomProblem:
    """Base class: grid/time metadata plus the semi-discrete operators."""

    equation: str
    dt: float
    n_steps: int
    state_dim: int
    layout: dict = field(default_factory=dict)  # component name -> slice

    def rhs(self, u: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def initial_condition(self) -> np.ndarray:
        raise NotImplementedError

    def component(self, u: np.ndarray, name: str) -> np.ndarray:
        return u[self.layout[name]]


def integrate(problem: FomProblem, u0: np.ndarray, t0: float, steps: int):
    """Forward-Euler trajectory: returns steps+1 states including u0."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    u = np.asarray(u0, dtype=complex).copy()
    out = [u.copy()]
    t = t0
    for k in range(steps):
        u = u + problem.dt * problem.rhs(u, t)
        if not np.all(np.isfinite(u.view(float))):
            raise IntegrationFailure(
                f"{problem.equation}: non-finite state at step {k + 1}",
                last_good_index=k)
        out.append(u.copy())
        t += problem.dt
    return out


class BurgersProblem(FomProblem):
    """Viscous Burgers' equation on [-L, L] with zero Dirichlet ends.

    Conservative form f(u) = -1/2 A1 (u*u) + mu A2 u with central
    first and second difference matrices A1, A2; boundary rows are zero
    so the Dirichlet values stay pinned.
    """

    def __init__(self, n_intervals=500, n_steps=2000, length=1.0, t_final=1.0,
                 mu=0.01):
        n_nodes = n_intervals + 1
        super().__init__(equation="burgers", dt=t_final / n_steps,
                         n_steps=n_steps, state_dim=n_nodes,
                         layout={"u": slice(0, n_nodes)})
        self.mu = mu
        self.x = np.linspace(-length, length, n_nodes)
        self.dx = 2 * length / n_intervals
        # stability certificate for the diffusive part
        self.diffusion_number = mu * self.dt / self.dx**2
        assert self.diffusion_number <= 0.5

    @property
    def first_difference_matrix(self) -> np.ndarray:
        """Central first-difference matrix with zeroed boundary rows."""
        n = self.state_dim
        A1 = np.zeros((n, n))
        idx = np.arange(1, n - 1)
        A1[idx, idx - 1] = -1.0 / (2 * self.dx)
        A1[idx, idx + 1] = 1.0 / (2 * self.dx)
        return A1

    def rhs(self, u, t=0.0):
        du = np.zeros_like(u)
        interior = slice(1, -1)
        sq = u * u
        adv = -(sq[2:] - sq[:-2]) / (4 * self.dx)
        diff = self.mu * (u[2:] - 2 * u[1:-1] + u[:-2]) / self.dx**2
        du[interior] = adv + diff
        return du

    def initial_condition(self):
        return (-np.sin(np.pi * self.x)).astype(complex)


class AllenCahnProblem(FomProblem):
    """Allen-Cahn reaction-diffusion on [-L, L] with zero-flux ends.

    Neumann boundaries are realized with mirrored ghost nodes.
    """

    def __init__(self, n_intervals=200, n_steps=2000, length=1.0, t_final=2.0,
                 alpha=1e-4):
        n_nodes = n_intervals + 1
        super().__init__(equation="allen_cahn", dt=t_final / n_steps,
                         n_steps=n_steps, state_dim=n_nodes,
                         layout={"u": slice(0, n_nodes)})
        self.alpha = alpha
        self.x = np.linspace(-length, length, n_nodes)
        self.dx = 2 * length / n_intervals
        self.diffusion_number = alpha * self.dt / self.dx**2
        assert self.diffusion_number <= 0.5

    def rhs(self, u, t=0.0):
        ghosted = np.concatenate([u[1:2], u, u[-2:-1]])
        lap = (ghosted[2:] - 2 * u + ghosted[:-2]) / self.dx**2
        return self.alpha * lap + 5.0 * (u - u**3)

    def initial_condition(self):
        u0 = 0.53 * self.x + 0.47 * np.sin(-1.5 * np.pi * self.x)
        return u0.astype(complex)


class NlseProblem(FomProblem):
    """Focusing nonlinear Schroedinger equation on [-L, L], Dirichlet ends.

    psi_t = i theta psi_xx + i theta |psi|^2 psi. The state is the
    complex wavefunction; errors are reported on the position density.
    """

    def __init__(self, n_intervals=100, n_steps=2000, length=15.0,
                 t_final=np.pi, theta=0.5):
        n_nodes = n_intervals + 1
        super().__init__(equation="nlse", dt=t_final / n_steps,
                         n_steps=n_steps, state_dim=n_nodes,
                         layout={"psi": slice(0, n_nodes)})
        self.theta = theta
        self.x = np.linspace(-length, length, n_nodes)
        self.dx = 2 * length / n_intervals

    def rhs(self, psi, t=0.0):
        dpsi = np.zeros_like(psi)
        lap = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / self.dx**2
        dpsi[1:-1] = 1j * self.theta * (lap + np.abs(psi[1:-1])**2 * psi[1:-1])
        return dpsi

    def initial_condition(self):
        return (2.0 / np.cosh(self.x)).astype(complex)


def position_density(psi: np.ndarray) -> np.ndarray:
    """Squared modulus |psi|^2 of an NLSE state."""
    return np.abs(np.asarray(psi))**2


class MaxwellTmProblem(FomProblem):
    """2-D transverse-magnetic Maxwell system with polarization and
    magnetization currents and manufactured sources on [0, 1]^2.

    Six scalar fields (Hx, Hy, Ez, Jz, Kx, Ky) are collocated on a
    uniform nodes_per_dim^2 grid. Spatial derivatives are second-order
    central differences (one-sided at edges). The tangential-E boundary
    rows of Ez have zero rhs, pinning the boundary trace of Ez at its
    initial data.
    """

    def __init__(self, nodes_per_dim=20, n_steps=2000, t_final=2.0,
                 omega=4 * np.pi):
        n = nodes_per_dim
        npts = n * n
        names = ["Hx", "Hy", "Ez", "Jz", "Kx", "Ky"]
        layout = {nm: slice(i * npts, (i + 1) * npts) for i, nm in enumerate(names)}
        super().__init__(equation="maxwell_tm", dt=t_final / n_steps,
                         n_steps=n_steps, state_dim=6 * npts, layout=layout)
        self.n = n
        self.omega = omega
        coords = np.linspace(0.0, 1.0, n)
        self.dx = coords[1] - coords[0]
        self.X, self.Y = np.meshgrid(coords, coords, indexing="ij")
        self._boundary = np.zeros((n, n), dtype=bool)
        self._boundary[0, :] = self._boundary[-1, :] = True
        self._boundary[:, 0] = self._boundary[:, -1] = True

    def _grid(self, u, name):
        return u[self.layout[name]].reshape(self.n, self.n)

    def _dx(self, F):
        return np.gradient(F, self.dx, axis=0)

    def _dy(self, F):
        return np.gradient(F, self.dx, axis=1)

    def sources(self, t: float):
        """Manufactured source terms (f^s into Ez, g^s into H) at time t."""
        w, X, Y = self.omega, self.X, self.Y
        decay = np.exp(-t)
        fs = (t - 1 - 2 * w) * np.sin(w * X) * np.sin(w * Y) * decay
        gsx = (w - 1 + t) * np.sin(w * X) * np.cos(w * Y) * decay
        gsy = (1 - w - t) * np.cos(w * X) * np.sin(w * Y) * decay
        return fs, gsx, gsy

    def rhs(self, u, t=0.0):
        Hx, Hy = self._grid(u, "Hx"), self._grid(u, "Hy")
        Ez, Jz = self._grid(u, "Ez"), self._grid(u, "Jz")
        Kx, Ky = self._grid(u, "Kx"), self._grid(u, "Ky")
        fs, gsx, gsy = self.sources(t)

        dHx = -self._dy(Ez) - Kx + gsx
        dHy = self._dx(Ez) - Ky + gsy
        dEz = self._dx(Hy) - self._dy(Hx) - Jz + fs
        dEz[self._boundary] = 0.0
        dJz = Ez - Jz
        dKx = Hx - Kx
        dKy = Hy - Ky
        return np.concatenate([f.ravel() for f in (dHx, dHy, dEz, dJz, dKx, dKy)])

    def initial_condition(self):
        w, X, Y = self.omega, self.X, self.Y
        Hx = np.sin(w * X) * np.cos(w * Y)
        Hy = -np.cos(w * X) * np.sin(w * Y)
        Ez = np.sin(w * X) * np.cos(w * Y)
        zero = np.zeros_like(Hx)
        u0 = np.concatenate([f.ravel() for f in (Hx, Hy, Ez, zero, zero, zero)])
        return u0.astype(complex)


_EQUATIONS = {
    "burgers": BurgersProblem,
    "allen_cahn": AllenCahnProblem,
    "nlse": NlseProblem,
    "maxwell_tm": MaxwellTmProblem,
}


def make_problem(equation: str, **kwargs) -> FomProblem:
    """Construct a benchmark problem by name with optional overrides."""
    try:
        cls = _EQUATIONS[equation]
    except KeyError:
        raise ValueError(f"unknown equation: {equation}") from None
    return cls(**kwargs)
