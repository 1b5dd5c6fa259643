"""Semi-analytical solution of the correction problem by separation of the
potentials: phi = phi1(r) phi2(z), psi = psi1(r) psi2(z) with fixed radial
trial functions.

Weighted radial integration of the compatibility equations reduces the
problem to a fourth-order constant-coefficient ODE for psi2 on each side of
the interface,

    k1 psi2 + k2 psi2'' + k3 psi2'''' = 0,

with phi2 recovered from a1 phi2 + a2 psi2 + a3 psi2'' = 0.  Eight boundary
and interface conditions close the problem; the interface carries a jump in
the hoop-type functional g1 psi2 + g2 psi2'' equal to the weighted radial
displacement jump of the correction field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import PipeConfig, composite_gauss_rule
from .baseline import baseline_coefficients, interface_constant

__all__ = [
    "TrialFunction",
    "sine_trial",
    "KantorovichConstants",
    "compute_constants",
    "characteristic_roots",
    "OdePiecewiseSolution",
    "solve_bvp",
    "reconstruct_stress",
]


@dataclass(frozen=True)
class TrialFunction:
    """Radial trial function with its derivative; must vanish at both walls."""

    value: Callable
    derivative: Callable


def sine_trial(config: PipeConfig) -> TrialFunction:
    """One half-wave of sine across the wall, the standard choice."""
    length = config.r_o - config.r_i
    r_i = config.r_i
    return TrialFunction(
        value=lambda r: np.sin(np.pi * (np.asarray(r) - r_i) / length),
        derivative=lambda r: (np.pi / length)
        * np.cos(np.pi * (np.asarray(r) - r_i) / length),
    )


@dataclass(frozen=True)
class KantorovichConstants:
    """Integral constants of the reduced one-dimensional problem.

    a1..a3 : first compatibility equation (phi2 elimination)
    b1..b5 : second compatibility equation
    k1..k3 : reduced fourth-order ODE after eliminating phi2
    e1..e3 : shear-type boundary functional e1 psi2' + e2 psi2'' + e3 psi2'''
    g1, g2 : hoop-type interface functional g1 psi2 + g2 psi2''
    By structure b1 = a2, b2 = a3, e2 = 0, e3 = -k3, g2 = k3.
    """

    a1: float
    a2: float
    a3: float
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    k1: float
    k2: float
    k3: float
    e1: float
    e2: float
    e3: float
    g1: float
    g2: float


def _end_check(f: TrialFunction, config: PipeConfig, name: str):
    scale = max(np.max(np.abs(f.value(np.linspace(config.r_i, config.r_o, 41)))), 1e-300)
    for r_end in (config.r_i, config.r_o):
        if abs(float(f.value(r_end))) > 1e-9 * scale:
            raise ValueError(f"trial function {name} must vanish at r = {r_end}")


def compute_constants(config: PipeConfig,
                      phi1: TrialFunction | None = None,
                      psi1: TrialFunction | None = None,
                      cells: int = 64, order: int = 12) -> KantorovichConstants:
    """Evaluate the reduction constants by composite Gauss quadrature of the
    weighted compatibility and boundary integrals."""
    if phi1 is None:
        phi1 = sine_trial(config)
    if psi1 is None:
        psi1 = sine_trial(config)
    _end_check(phi1, config, "phi1")
    _end_check(psi1, config, "psi1")

    n = config.n
    coef = baseline_coefficients(config)
    if coef.a_r == 0.0:
        # unloaded pipe: the linearization point is stress-free and every
        # weighted integral vanishes
        return KantorovichConstants(*([0.0] * 16))
    r, w = composite_gauss_rule(np.linspace(config.r_i, config.r_o, cells + 1), order)

    kap = (np.sqrt(3.0) * abs(coef.a_r) / n * r ** (-2.0 / n)) ** (n - 1.0)
    m11 = 2.0 / 3.0 + (n - 1.0) / 2.0
    m12 = -1.0 / 3.0 - (n - 1.0) / 2.0

    f = phi1.value(r)
    df = phi1.derivative(r)
    T = f + r * df  # d(r phi1)/dr
    g = psi1.value(r)
    dg = psi1.derivative(r)

    a1 = np.sum(w * kap * r * (m11 * (f**2 + T**2) + 2.0 * m12 * f * T))
    a2 = np.sum(w * kap * dg * (f + T)) / 3.0
    a3 = np.sum(w * kap * r * g * (m12 * f + m11 * T))
    b1 = a2
    b2 = a3
    b3 = 2.0 / 3.0 * np.sum(w * kap * dg**2 / r)
    int_gdg = np.sum(w * kap * g * dg)
    int_g2r = np.sum(w * kap * g**2 / r)
    b4 = 2.0 / 3.0 * int_gdg - 2.0 * int_g2r
    b5 = m11 * np.sum(w * kap * g**2 * r)
    k1 = b3 - b1 * a2 / a1
    k2 = b4 - (b1 * a3 + b2 * a2) / a1
    k3 = b5 - b2 * a3 / a1
    e1 = 2.0 * int_g2r - int_gdg / 3.0 + a2 * a3 / a1
    e3 = -b5 + a3 * a3 / a1
    g1 = int_gdg / 3.0 - a2 * a3 / a1
    g2 = b5 - a3 * a3 / a1
    return KantorovichConstants(
        a1=a1, a2=a2, a3=a3, b1=b1, b2=b2, b3=b3, b4=b4, b5=b5,
        k1=k1, k2=k2, k3=k3, e1=e1, e2=0.0, e3=e3, g1=g1, g2=g2,
    )


def characteristic_roots(k1: float, k2: float, k3: float):
    """Roots of k3 L^4 + k2 L^2 + k1 = 0.

    Returns (roots, canonical) with roots the sign/conjugation-closed
    quadruple and canonical the member with positive real and imaginary
    parts (purely real or imaginary quadruples pick the nonnegative
    representative).
    """
    if k3 == 0.0:
        raise ValueError("k3 = 0: the reduced equation is not fourth order")
    mu = np.roots([k3, 0.0, k2, 0.0, k1]).astype(complex)
    canonical = None
    for lam in mu:
        if lam.real > 1e-14 and lam.imag > 1e-14:
            canonical = lam
    if canonical is None:
        # degenerate (real or imaginary) quadruple; take the largest-real root
        canonical = max(mu, key=lambda v: (v.real, v.imag))
    return mu, canonical


def _fundamental_values(lam: complex, interval: tuple[float, float], z,
                        deriv: int) -> np.ndarray:
    """Values (..., 4) of the scaled fundamental system
    exp(+-Re(L)(z - anchor)) * (sin|cos)(Im(L) z) and its z-derivatives:
    the growing pair is anchored at the right end of the interval, the
    decaying pair at the left end, which keeps the interface system well
    conditioned for long pipes."""
    zL, zR = interval
    al, be = lam.real, lam.imag
    z = np.asarray(z, dtype=float)
    out = np.empty(z.shape + (4,))
    for k, (anchor, mu) in enumerate(
        [(zR, al + 1j * be), (zR, al + 1j * be),
         (zL, -al + 1j * be), (zL, -al + 1j * be)]
    ):
        val = (mu ** deriv) * np.exp(mu * (z - anchor)) * np.exp(1j * be * anchor)
        out[..., k] = val.imag if k % 2 == 0 else val.real
    return out


@dataclass(frozen=True)
class OdePiecewiseSolution:
    """psi2 on (0, h) and (h, H) as coefficient 4-vectors over the scaled
    fundamental system of the reduced fourth-order equation."""

    constants: KantorovichConstants
    lam: complex
    interface: float
    height: float
    coeff_lower: np.ndarray
    coeff_upper: np.ndarray
    phi1: TrialFunction
    psi1: TrialFunction
    a_ratio_2: float  # a2/a1
    a_ratio_3: float  # a3/a1
    diagnostics: dict

    def _interval(self, lower: bool):
        return (0.0, self.interface) if lower else (self.interface, self.height)

    def _basis_value(self, z, deriv: int, lower: bool) -> np.ndarray:
        return _fundamental_values(self.lam, self._interval(lower), z, deriv)

    def psi2(self, z, deriv: int = 0, side: str = "plus") -> np.ndarray:
        """d^deriv psi2/dz^deriv, one-sided at the interface per ``side``."""
        z = np.asarray(z, dtype=float)
        upper = (z >= self.interface) if side == "plus" else (z > self.interface)
        lo = self._basis_value(z, deriv, lower=True) @ self.coeff_lower
        hi = self._basis_value(z, deriv, lower=False) @ self.coeff_upper
        return np.where(upper, hi, lo)

    def phi2(self, z, side: str = "plus") -> np.ndarray:
        """phi2 recovered from the first compatibility equation."""
        return -(self.a_ratio_2 * self.psi2(z, 0, side)
                 + self.a_ratio_3 * self.psi2(z, 2, side))

    def ode_residual(self, z, side: str = "plus") -> np.ndarray:
        k = self.constants
        return (k.k1 * self.psi2(z, 0, side) + k.k2 * self.psi2(z, 2, side)
                + k.k3 * self.psi2(z, 4, side))


def solve_bvp(constants: KantorovichConstants, config: PipeConfig,
              phi1: TrialFunction | None = None,
              psi1: TrialFunction | None = None,
              cells: int = 64, order: int = 12) -> OdePiecewiseSolution:
    """Solve the eight-condition piecewise boundary-value problem.

    Conditions: psi2' = 0 at both ends; psi2 and psi2' continuous at the
    interface; the shear functional e1 psi2' + e2 psi2'' + e3 psi2''' zero at
    both ends and continuous across the interface; and the jump of the hoop
    functional g1 psi2 + g2 psi2'' equal to the psi1/r-weighted radial
    displacement jump.  A homogeneous load (zero pressure) returns the zero
    solution.
    """
    if phi1 is None:
        phi1 = sine_trial(config)
    if psi1 is None:
        psi1 = sine_trial(config)
    if len(config.layup.interfaces) != 1:
        raise ValueError("the separated solution is built per interface; "
                         "pass a two-material config")
    h = config.layup.interfaces[0]

    if interface_constant(config) == 0.0:
        # homogeneous load: the boundary-value problem is homogeneous and
        # the solution identically zero
        return OdePiecewiseSolution(
            constants=constants, lam=1.0 + 1.0j, interface=h, height=config.H,
            coeff_lower=np.zeros(4), coeff_upper=np.zeros(4),
            phi1=phi1, psi1=psi1, a_ratio_2=0.0, a_ratio_3=0.0,
            diagnostics={"condition": 0.0, "bc_residual": 0.0, "rank": 8},
        )

    roots, lam = characteristic_roots(constants.k1, constants.k2, constants.k3)
    if lam.real <= 1e-14 or lam.imag <= 1e-14:
        raise ValueError(
            "characteristic roots do not form a complex quadruple; the "
            "scaled exponential-trigonometric fundamental system does not "
            f"apply (roots {roots})"
        )

    lower_iv = (0.0, h)
    upper_iv = (h, config.H)

    def brow(z, deriv, lower):
        interval = lower_iv if lower else upper_iv
        return _fundamental_values(lam, interval, np.asarray(float(z)), deriv)

    def functional_row(z, lower, weights):
        return sum(wgt * brow(z, d, lower) for d, wgt in weights)

    e_w = [(1, constants.e1), (2, constants.e2), (3, constants.e3)]
    g_w = [(0, constants.g1), (2, constants.g2)]

    A = np.zeros((8, 8))
    rhs = np.zeros(8)
    A[0, 0:4] = brow(0.0, 1, True)
    A[1, 4:8] = brow(config.H, 1, False)
    A[2, 0:4] = brow(h, 0, True); A[2, 4:8] = -brow(h, 0, False)
    A[3, 0:4] = brow(h, 1, True); A[3, 4:8] = -brow(h, 1, False)
    A[4, 0:4] = functional_row(0.0, True, e_w)
    A[5, 4:8] = functional_row(config.H, False, e_w)
    A[6, 4:8] = functional_row(h, False, e_w)
    A[6, 0:4] = -functional_row(h, True, e_w)
    A[7, 4:8] = functional_row(h, False, g_w)
    A[7, 0:4] = -functional_row(h, True, g_w)

    # jump of the hoop functional: displacement jump c/r weighted by psi1
    r, w = composite_gauss_rule(
        np.linspace(config.r_i, config.r_o, cells + 1), order
    )
    c = interface_constant(config)
    rhs[7] = c * np.sum(w * psi1.value(r) / r)

    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e12:
        raise RuntimeError(
            f"singular interface system (condition {cond:.3e}); "
            "resonant geometry, no regularization applied"
        )
    q = np.linalg.solve(A, rhs)
    residual = np.linalg.norm(A @ q - rhs)
    scale = max(np.linalg.norm(rhs), 1e-300)

    return OdePiecewiseSolution(
        constants=constants, lam=lam, interface=h, height=config.H,
        coeff_lower=q[0:4], coeff_upper=q[4:8],
        phi1=phi1, psi1=psi1,
        a_ratio_2=constants.a2 / constants.a1,
        a_ratio_3=constants.a3 / constants.a1,
        diagnostics={
            "condition": float(cond),
            "bc_residual": float(residual / scale),
            "rank": int(np.linalg.matrix_rank(A)),
        },
    )


def reconstruct_stress(solution: OdePiecewiseSolution, r, z,
                       side: str = "plus") -> np.ndarray:
    """Stress of the separated correction field on the tensor product of the
    given nodes, shape (nr, nz, 4)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    f = solution.phi1.value(r)
    df = solution.phi1.derivative(r)
    g = solution.psi1.value(r)
    dg = solution.psi1.derivative(r)
    p2 = solution.phi2(z, side)
    s2 = solution.psi2(z, 0, side)
    d1 = solution.psi2(z, 1, side)
    d2 = solution.psi2(z, 2, side)
    out = np.empty((len(r), len(z), 4))
    out[..., 0] = np.outer(f, p2)
    out[..., 1] = np.outer(f + r * df, p2) + np.outer(g, d2)
    out[..., 2] = -np.outer(dg / r, s2)
    out[..., 3] = np.outer(g / r, d1)
    return out
