"""Closed-form solution for the homogeneous pressurized pipe in steady
creep, the creep compliance linearized about it, and the exact interface
jump formulas of the first-order correction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PipeConfig, StressState, norton_tangent

__all__ = [
    "BaselineCoefficients",
    "ComplianceMatrix",
    "baseline_coefficients",
    "baseline_stress",
    "compliance_at",
    "interface_constant",
    "displacement_jump",
    "stress_jump",
    "stress_jump_from_compliance",
]


@dataclass(frozen=True)
class BaselineCoefficients:
    """Coefficients of the homogeneous-pipe field
    sigma_x = a + a_x * r**(-2/n) for x in (r, theta, z)."""

    a: float
    a_r: float
    a_theta: float
    a_z: float


def baseline_coefficients(config: PipeConfig) -> BaselineCoefficients:
    """Coefficients fixed by sigma_r(r_i) = -p and sigma_r(r_o) = 0."""
    n = config.n
    ti = config.r_i ** (2.0 / n)
    to = config.r_o ** (2.0 / n)
    a = config.p * ti / (to - ti)
    a_r = -config.p * ti * to / (to - ti)
    return BaselineCoefficients(
        a=a, a_r=a_r, a_theta=(n - 2.0) / n * a_r, a_z=(n - 1.0) / n * a_r
    )


def baseline_stress(config: PipeConfig, r):
    """Unperturbed stress at radius r; shear-free and z-independent.

    Scalar r yields a StressState, array input an (..., 4) array.
    """
    scalar = np.isscalar(r) or np.ndim(r) == 0
    rr = np.asarray(r, dtype=float)
    if np.any(~config.contains_radius(rr)):
        raise ValueError("radius outside the pipe wall")
    coef = baseline_coefficients(config)
    rp = rr ** (-2.0 / config.n)
    out = np.stack(
        [
            coef.a + coef.a_r * rp,
            coef.a + coef.a_theta * rp,
            coef.a + coef.a_z * rp,
            np.zeros_like(rp),
        ],
        axis=-1,
    )
    return StressState.from_array(out) if scalar else out


@dataclass(frozen=True)
class ComplianceMatrix:
    """Linearized creep compliance at a point of the unperturbed field.

    ``matrix`` is the full 4x4 derivative of the strain rate with respect to
    the stress vector; ``prefactor`` is its scalar scale

        (sqrt(3) * |a_r| / n * r**(-2/n)) ** (n - 1),

    the (n-1)-th power of the local equivalent stress, so that
    matrix / prefactor is a dimensionless matrix with eigenvalues
    {0, 1, 2, n}.
    """

    matrix: np.ndarray
    prefactor: float
    r: float


def compliance_at(config: PipeConfig, r: float) -> ComplianceMatrix:
    """Compliance d(eps-dot)/d(sigma) at the unperturbed stress, unit
    prefactor.  Obtained by differentiating the creep law, which is the
    defining property; all consumers (assembly, jump formulas) use this
    same derivative."""
    r = float(r)
    if not bool(config.contains_radius(r)):
        raise ValueError("radius outside the pipe wall")
    sig0 = baseline_stress(config, r).as_array()
    mat = norton_tangent(sig0, 1.0, config.n)
    coef = baseline_coefficients(config)
    svm0 = np.sqrt(3.0) * abs(coef.a_r) / config.n * r ** (-2.0 / config.n)
    return ComplianceMatrix(matrix=mat, prefactor=svm0 ** (config.n - 1.0), r=r)


def interface_constant(config: PipeConfig) -> float:
    """Constant c = 3**((n-1)/2) * a_r * |a_r|**(n-1) / n**n entering the
    jump formulas; the unperturbed radial velocity is -c/r."""
    n = config.n
    a_r = baseline_coefficients(config).a_r
    return 3.0 ** ((n - 1.0) / 2.0) * a_r * abs(a_r) ** (n - 1.0) / n ** n


def displacement_jump(config: PipeConfig, r):
    """Radial-displacement jump [u_r] = c/r carried by the first-order
    correction across a unit prefactor step; the axial jump is zero."""
    rr = np.asarray(r, dtype=float)
    if np.any(~config.contains_radius(rr)):
        raise ValueError("radius outside the pipe wall")
    out = interface_constant(config) / rr
    return float(out) if np.ndim(r) == 0 else out


def stress_jump(config: PipeConfig, r):
    """Closed-form jumps ([sigma1_r], [sigma1_theta]) of the correction
    field across a material interface.

    Traction continuity ([sigma_z] = [sigma_rz] = 0) and the strain jumps
    [eps_r] = -c/r**2, [eps_theta] = c/r**2 implied by [u_r] = c/r, pushed
    through the linearized compliance, give

        [sigma1_r] = -a_r / n**2 * r**(-2/n),    [sigma1_theta] = -[sigma1_r].

    Note: the same elimination performed with the compliance prefactor
    lowered by one power of the local equivalent stress yields the
    dimensionally inconsistent variant -sqrt(3) a_r |a_r| n**-3 r**(-4/n);
    the form implemented here is the one consistent with compliance_at and
    with the direct nonlinear interface conditions.
    """
    rr = np.asarray(r, dtype=float)
    if np.any(~config.contains_radius(rr)):
        raise ValueError("radius outside the pipe wall")
    coef = baseline_coefficients(config)
    jump_r = -coef.a_r / config.n ** 2 * rr ** (-2.0 / config.n)
    if np.ndim(r) == 0:
        return float(jump_r), float(-jump_r)
    return jump_r, -jump_r


def stress_jump_from_compliance(config: PipeConfig, r: float):
    """Same jumps computed numerically: solve the 2x2 system relating the
    (r, theta) stress jumps to the prescribed strain jumps through the
    compliance, with zero axial/shear stress jumps.  Independent route used
    to guard the closed form against sign errors."""
    C = compliance_at(config, r).matrix
    c = interface_constant(config)
    eps_jump = np.array([-c / r**2, c / r**2])
    sol = np.linalg.solve(C[:2, :2], eps_jump)
    return float(sol[0]), float(sol[1])
