"""Direct solution of the full nonlinear steady-state creep problem over the
equilibrated basis, by minimizing the complementary energy

    Pi(c) = int W*(sigma0 + sum_i c_i sigma_i; A(z), n) dOmega,
    W*(sigma) = (2 A / 3) svm**(n+1) / (n+1),

whose stationarity restates the weak compatibility statement on the
subspace.  Used to measure the error of the first-order expansion in the
material-contrast parameter s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np
import scipy.linalg

from .core import (
    PipeConfig,
    normalize_layup,
    norton_strain_rate,
    norton_tangent,
    von_mises,
)
from .baseline import baseline_stress
from .ritz import FieldSolution, first_order_field
from .stressfn import (
    BasisField,
    QuadratureGrid,
    assemble_bilinear,
    assemble_linear,
    evaluate_fields,
)

__all__ = [
    "NonlinearProblem",
    "ErrorReport",
    "complementary_potential",
    "prefactor_profile",
    "solve_nonlinear",
    "assemble_hessian",
    "perturbation_error",
]


def complementary_potential(sigma, A, n):
    """Scalar potential whose stress gradient is the creep strain rate."""
    svm = von_mises(sigma)
    return 2.0 * np.asarray(A, dtype=float) / 3.0 * svm ** (n + 1.0) / (n + 1.0)


def prefactor_profile(config: PipeConfig, s: float):
    """A(z) of the one-parameter family built on the config's step pattern:
    A(z; s) = 1 - s * sum_j alpha_j step(z_{j+1} - z).  For the homogeneous
    layup the profile is identically one."""
    norm = normalize_layup(config.layup)

    def profile(z):
        z = np.asarray(z, dtype=float)
        out = np.ones_like(z)
        for alpha, zj in zip(norm.alphas, norm.interfaces):
            out = out - s * alpha * (z < zj)
        return out

    return profile


@dataclass(frozen=True)
class NonlinearProblem:
    """Nonlinear solve definition: basis and grid (shared with the linear
    correction for a common subspace), contrast parameter s, tolerances."""

    config: PipeConfig
    basis: tuple[BasisField, ...]
    grid: QuadratureGrid
    s: float
    gradient_tol: float = 1e-10
    max_iterations: int = 40

    def __post_init__(self):
        a_min = prefactor_profile(self.config, self.s)(
            np.asarray(self.grid.z_nodes)
        ).min()
        if a_min <= 0.0:
            raise ValueError(f"A(z) must stay positive; minimum {a_min}")


def _total_stress(problem: NonlinearProblem, coeff: np.ndarray,
                  r: np.ndarray, z: np.ndarray) -> np.ndarray:
    base = baseline_stress(problem.config, r)[:, None, :]
    fields = evaluate_fields(problem.basis, r, z)
    return base + np.einsum("n,nrzc->rzc", coeff, fields)


def _energy(problem: NonlinearProblem, coeff: np.ndarray) -> float:
    grid = problem.grid
    aprof = prefactor_profile(problem.config, problem.s)
    total = 0.0
    for sl in grid.z_blocks():
        z = grid.z_nodes[sl]
        sig = _total_stress(problem, coeff, grid.r_nodes, z)
        wstar = complementary_potential(sig, aprof(z)[None, :], problem.config.n)
        total += float(np.sum(grid.weights2d[:, sl] * wstar))
    return total


def _gradient(problem: NonlinearProblem, coeff: np.ndarray) -> np.ndarray:
    aprof = prefactor_profile(problem.config, problem.s)

    def wfield(r, z):
        sig = _total_stress(problem, coeff, r, z)
        return norton_strain_rate(sig, aprof(z)[None, :], problem.config.n)

    return assemble_linear(problem.basis, problem.grid, wfield)


def assemble_hessian(problem: NonlinearProblem, coeff: np.ndarray) -> np.ndarray:
    """Exact Hessian int sigma_i^T [d eps-dot/d sigma](sigma(c)) sigma_j dOmega.

    At c = 0 with homogeneous prefactor this is, entry for entry, the Gram
    matrix of the linear correction problem (same quadrature, same kernel
    code path)."""
    aprof = prefactor_profile(problem.config, problem.s)

    def kernel(r, z):
        sig = _total_stress(problem, coeff, r, z)
        return norton_tangent(sig, aprof(z)[None, :], problem.config.n)

    return assemble_bilinear(problem.basis, problem.grid, kernel)


def solve_nonlinear(problem: NonlinearProblem,
                    initial: np.ndarray | None = None) -> FieldSolution:
    """Newton minimization of the complementary energy with backtracking.

    Warm starts (e.g. s times the linear-correction coefficients) keep the
    iteration in the quadratic-convergence regime; for n = 1 the energy is
    quadratic and a single step converges.  Raises on non-convergence with
    the last residual in the message.
    """
    n_dof = len(problem.basis)
    coeff = np.zeros(n_dof) if initial is None else np.array(initial, dtype=float)
    energies: list[float] = []
    grad_norms: list[float] = []
    fallback_steps = 0

    energy = _energy(problem, coeff)
    for iteration in range(problem.max_iterations):
        grad = _gradient(problem, coeff)
        gnorm = float(np.abs(grad).max())
        energies.append(energy)
        grad_norms.append(gnorm)
        if gnorm < problem.gradient_tol * (1.0 + abs(energy)):
            return FieldSolution(
                basis=problem.basis, coefficients=coeff, tag="nonlinear",
                diagnostics={
                    "iterations": iteration,
                    "energies": energies,
                    "gradient_norms": grad_norms,
                    "fallback_steps": fallback_steps,
                    "s": problem.s,
                },
            )
        hess = assemble_hessian(problem, coeff)
        try:
            cho = scipy.linalg.cho_factor(hess)
            step = scipy.linalg.cho_solve(cho, -grad)
        except scipy.linalg.LinAlgError:
            # indefinite Hessian: gradient-related fallback, reported
            fallback_steps += 1
            step = -grad / max(np.abs(grad).max(), 1e-300)
        # backtracking line search on the energy
        slope = float(grad @ step)
        t = 1.0
        for _ in range(50):
            trial = _energy(problem, coeff + t * step)
            if trial <= energy + 1e-4 * t * slope:
                break
            t *= 0.5
        coeff = coeff + t * step
        energy = trial
    raise RuntimeError(
        f"Newton did not converge in {problem.max_iterations} iterations; "
        f"last gradient max-norm {grad_norms[-1]:.3e}"
    )


@dataclass(frozen=True)
class ErrorReport:
    """Sampled difference between the nonlinear field and the first-order
    expansion along a fixed-radius line."""

    s: float
    r_line: float
    z: np.ndarray
    nonlinear: np.ndarray    # (nz, 4)
    first_order: np.ndarray  # (nz, 4)
    diagnostics: dict = field(default_factory=dict)

    @property
    def difference(self) -> np.ndarray:
        return self.nonlinear - self.first_order

    @property
    def max_abs(self) -> np.ndarray:
        """Componentwise max-norm of the expansion error, shape (4,)."""
        return np.abs(self.difference).max(axis=0)


def perturbation_error(config: PipeConfig, s: float, correction: FieldSolution,
                       nonlinear_solution: FieldSolution, r_line: float,
                       z_grid=None) -> ErrorReport:
    """Sample nonlinear and first-order fields on one z grid and difference
    them componentwise."""
    if z_grid is None:
        z_grid = np.linspace(0.0, config.H, 401)
    z_grid = np.asarray(z_grid, dtype=float)
    first = first_order_field(config, correction, s, np.array([r_line]), z_grid)[0]
    base = baseline_stress(config, np.array([r_line]))[:, None, :]
    nonl = (base + nonlinear_solution.evaluate(np.array([r_line]), z_grid))[0]
    return ErrorReport(
        s=s, r_line=r_line, z=z_grid, nonlinear=nonl, first_order=first,
        diagnostics=dict(nonlinear_solution.diagnostics),
    )
