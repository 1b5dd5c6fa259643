"""Assembly and solution of the linear auxiliary problem for the
first-order correction field, including multi-material superposition.

The correction solves K c = f with

    K_ij = int sigma_i^T C(r) sigma_j dOmega          (C: linearized compliance)
    f_i  = -c * int sigma_rz,i(r, z*) dr              (per interface, weighted)

over the equilibrated basis; c is the interface constant of the baseline
field.  The same f is reachable as an area integral of the baseline strain
rate over the region below the interface, which the tests exercise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .core import PipeConfig, gauss_legendre_rule, norton_tangent, normalize_layup
from .baseline import baseline_stress, interface_constant
from .stressfn import (
    BasisField,
    QuadratureGrid,
    assemble_bilinear,
    assemble_linear,
    evaluate_fields,
)

__all__ = [
    "LinearCorrectionProblem",
    "FieldSolution",
    "assemble_gram",
    "assemble_rhs",
    "assemble_rhs_area",
    "solve_correction",
    "combine_interfaces",
    "first_order_field",
    "solve_linear_correction",
]

_CONDITION_LIMIT = 1e12
_SPECTRAL_CUTOFF = 1e-12


def compliance_kernel(config: PipeConfig):
    """Pointwise kernel (nr, nz, 4, 4): the creep tangent at the baseline
    stress, constant in z.  Shared verbatim with the nonlinear Hessian via
    assemble_bilinear."""

    def kernel(r, z):
        sig0 = baseline_stress(config, r)  # (nr, 4)
        D = norton_tangent(sig0, 1.0, config.n)  # (nr, 4, 4)
        return np.broadcast_to(D[:, None, :, :], (len(r), len(z), 4, 4))

    return kernel


def assemble_gram(basis: Sequence[BasisField], config: PipeConfig,
                  grid: QuadratureGrid) -> np.ndarray:
    """Gram matrix of the basis under the linearized-compliance pairing."""
    return assemble_bilinear(basis, grid, compliance_kernel(config))


def assemble_rhs(basis: Sequence[BasisField], config: PipeConfig,
                 interface: float, weight: float = 1.0,
                 order: int = 12, cells: int = 32) -> np.ndarray:
    """Interface-integral load: f_i = -weight * c * int sigma_rz,i(r, z*) dr.

    The r of dOmega cancels the 1/r of the shear component, leaving a plain
    dr integral of the shear profile along the interface.
    """
    ifaces = config.layup.interfaces
    if not any(np.isclose(interface, z) for z in ifaces):
        raise ValueError(f"z = {interface} is not a material interface of the layup")
    c = interface_constant(config)
    edges = np.linspace(config.r_i, config.r_o, cells + 1)
    nodes = []
    wts = []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre_rule(order, (a, b))
        nodes.append(x)
        wts.append(w)
    rr = np.concatenate(nodes)
    ww = np.concatenate(wts)
    vals = evaluate_fields(basis, rr, np.array([interface]))[:, :, 0, 3]  # (N, nr)
    return -weight * c * vals @ ww


def assemble_rhs_area(basis: Sequence[BasisField], config: PipeConfig,
                      interface: float, grid: QuadratureGrid,
                      weight: float = 1.0) -> np.ndarray:
    """Area-integral form of the same load: the baseline strain rate paired
    with each member over the region below the interface.  Equal to
    assemble_rhs by the divergence theorem; kept as an independent route."""
    from .core import norton_strain_rate

    def wfield(r, z):
        e0 = norton_strain_rate(baseline_stress(config, r), 1.0, config.n)
        mask = (z < interface).astype(float)
        return e0[:, None, :] * mask[None, :, None]

    return weight * assemble_linear(basis, grid, wfield)


@dataclass(frozen=True)
class LinearCorrectionProblem:
    """Assembled correction problem: one Gram matrix, one load per
    interface (already weighted by its step amplitude)."""

    config: PipeConfig
    basis: tuple[BasisField, ...]
    gram: np.ndarray
    loads: tuple[np.ndarray, ...]
    interfaces: tuple[float, ...]
    alphas: tuple[float, ...]


def build_problem(config: PipeConfig, basis: Sequence[BasisField],
                  grid: QuadratureGrid) -> LinearCorrectionProblem:
    """Assemble Gram and per-interface unit loads for the config's layup."""
    norm = normalize_layup(config.layup)
    K = assemble_gram(basis, config, grid)
    loads = tuple(
        assemble_rhs(basis, config, z, weight=1.0) for z in norm.interfaces
    )
    return LinearCorrectionProblem(
        config=config, basis=tuple(basis), gram=K, loads=loads,
        interfaces=norm.interfaces, alphas=norm.alphas,
    )


@dataclass(frozen=True)
class FieldSolution:
    """Coefficients over a basis plus evaluation helpers.

    tag is one of 'correction' (per-interface or combined first-order
    field), or 'nonlinear' (direct solve); diagnostics carries solver
    metadata.
    """

    basis: tuple[BasisField, ...]
    coefficients: np.ndarray
    tag: str
    diagnostics: dict = field(default_factory=dict)

    def evaluate(self, r, z, side: str = "plus") -> np.ndarray:
        """Stress components (nr, nz, 4) on the tensor product of nodes;
        singleton axes are kept for scalar inputs."""
        vals = evaluate_fields(self.basis, r, z, side)
        return np.einsum("n,nrzc->rzc", self.coefficients, vals)

    def profile(self, r: float, z) -> np.ndarray:
        """Components along a z line at fixed radius: (nz, 4)."""
        return self.evaluate(np.array([r]), z)[0]

    def jump(self, r, interface: float) -> np.ndarray:
        """Distributional jump (plus minus minus side) of the components
        across a z interface: (..., 4) for the given radii."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        za = np.array([interface])
        hi = self.evaluate(r, za, side="plus")[:, 0, :]
        lo = self.evaluate(r, za, side="minus")[:, 0, :]
        return hi - lo


def _solve_spd_multi(K: np.ndarray, F: np.ndarray):
    """Pivoted symmetric solve of K X = F (columns of F are the loads) with
    a spectral-cutoff fallback for ill-conditioned Gram matrices.  One
    factorization serves all right-hand sides."""
    n = K.shape[0]
    lam_min = scipy.linalg.eigvalsh(K, subset_by_index=[0, 0])[0]
    lam_max = scipy.linalg.eigvalsh(K, subset_by_index=[n - 1, n - 1])[0]
    cond = lam_max / lam_min if lam_min > 0.0 else np.inf
    if cond <= _CONDITION_LIMIT:
        X = scipy.linalg.solve(K, F, assume_a="sym")
        return X, {"method": "sym_factorization", "condition": float(cond),
                   "dropped": 0}
    lam, Q = scipy.linalg.eigh(K)
    keep = lam > _SPECTRAL_CUTOFF * lam[-1]
    inv = np.where(keep, 1.0 / np.where(keep, lam, 1.0), 0.0)
    X = Q @ (inv[:, None] * (Q.T @ F))
    return X, {"method": "spectral_cutoff", "condition": float(cond),
               "dropped": int(np.sum(~keep))}


def solve_correction(problem: LinearCorrectionProblem,
                     residual_tol: float = 1e-8) -> tuple[FieldSolution, ...]:
    """Solve K c = f for every interface load through one factorization;
    raises if any residual exceeds residual_tol relative to its load."""
    F = np.stack(problem.loads, axis=1)
    X, diag = _solve_spd_multi(problem.gram, F)
    solutions = []
    for k, ziface in enumerate(problem.interfaces):
        fvec = F[:, k]
        c = X[:, k]
        res = np.linalg.norm(problem.gram @ c - fvec)
        scale = np.linalg.norm(fvec)
        rel = res / scale if scale > 0.0 else res
        if scale > 0.0 and rel > residual_tol:
            raise RuntimeError(
                f"correction solve at interface {ziface} left relative "
                f"residual {rel:.3e} (condition {diag['condition']:.3e})"
            )
        solutions.append(FieldSolution(
            basis=problem.basis, coefficients=c, tag="correction",
            diagnostics=dict(diag, residual=float(rel), interface=float(ziface)),
        ))
    return tuple(solutions)


def combine_interfaces(solutions: Sequence[FieldSolution],
                       alphas: Sequence[float]) -> FieldSolution:
    """Weighted superposition of per-interface corrections sharing a basis."""
    if len(solutions) != len(alphas):
        raise ValueError("need one weight per solution")
    if not solutions:
        raise ValueError("need at least one solution")
    base = solutions[0].basis
    for s in solutions[1:]:
        if s.basis != base:
            raise ValueError("solutions do not share a basis")
    coeff = np.zeros_like(solutions[0].coefficients)
    for s, alpha in zip(solutions, alphas):
        coeff = coeff + alpha * s.coefficients
    return FieldSolution(basis=base, coefficients=coeff, tag="correction",
                         diagnostics={"combined_from": len(solutions)})


def solve_linear_correction(config: PipeConfig, basis: Sequence[BasisField],
                            grid: QuadratureGrid) -> FieldSolution:
    """Assemble, solve per interface, and combine with the layup weights."""
    problem = build_problem(config, basis, grid)
    if not problem.interfaces:  # homogeneous pipe: the correction vanishes
        return FieldSolution(basis=tuple(basis), coefficients=np.zeros(len(basis)),
                             tag="correction", diagnostics={"combined_from": 0})
    parts = solve_correction(problem)
    combined = combine_interfaces(parts, problem.alphas)
    diag = dict(combined.diagnostics)
    if parts:
        diag["method"] = parts[0].diagnostics["method"]
        diag["condition"] = max(p.diagnostics["condition"] for p in parts)
        diag["residual"] = max(p.diagnostics["residual"] for p in parts)
        diag["dropped"] = max(p.diagnostics["dropped"] for p in parts)
    return FieldSolution(basis=combined.basis, coefficients=combined.coefficients,
                         tag=combined.tag, diagnostics=diag)


def first_order_field(config: PipeConfig, correction: FieldSolution,
                      s: float, r, z) -> np.ndarray:
    """First-order total field: baseline plus s times the correction,
    shape (nr, nz, 4)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    base = baseline_stress(config, r)[:, None, :]
    return base + s * correction.evaluate(r, z)
