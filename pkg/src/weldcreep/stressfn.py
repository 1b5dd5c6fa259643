"""Equilibrated stress fields from potential pairs, the trigonometric Ritz
basis with its discontinuous enrichments, and interface-aware tensor-product
quadrature.

A potential pair (phi, psi) generates

    sigma_r  = phi
    sigma_th = d(r phi)/dr + d2 psi/dz2
    sigma_z  = -(1/r) d psi/dr
    sigma_rz =  (1/r) d psi/dz

which satisfies both axisymmetric equilibrium equations identically and, for
the families below, the homogeneous traction conditions sigma_r = sigma_rz = 0
on the walls and sigma_rz = 0 on the end planes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import PipeConfig, StressState, composite_gauss_rule

__all__ = [
    "PotentialPair",
    "stress_from_potentials",
    "BasisField",
    "enumerate_basis",
    "QuadratureGrid",
    "tensor_grid",
    "grid_for_basis",
    "integrate_scalar",
    "integrate_bilinear",
    "assemble_bilinear",
    "assemble_linear",
    "evaluate_fields",
]


@dataclass(frozen=True)
class PotentialPair:
    """Closed-form potential pair with the partial derivatives the stress
    map and the equilibrium residuals need.  All callables take (r, z) and
    broadcast."""

    phi: Callable
    phi_r: Callable
    psi: Callable
    psi_r: Callable
    psi_z: Callable
    psi_zz: Callable
    psi_rz: Callable
    discontinuous_at: float | None = None


ZERO_PAIR = PotentialPair(
    phi=lambda r, z: np.zeros(np.broadcast(r, z).shape),
    phi_r=lambda r, z: np.zeros(np.broadcast(r, z).shape),
    psi=lambda r, z: np.zeros(np.broadcast(r, z).shape),
    psi_r=lambda r, z: np.zeros(np.broadcast(r, z).shape),
    psi_z=lambda r, z: np.zeros(np.broadcast(r, z).shape),
    psi_zz=lambda r, z: np.zeros(np.broadcast(r, z).shape),
    psi_rz=lambda r, z: np.zeros(np.broadcast(r, z).shape),
)


def stress_from_potentials(pair: PotentialPair, r, z):
    """Stress vector generated by a potential pair at (r, z).

    Scalar inputs yield a StressState, arrays an (..., 4) array.
    """
    scalar = np.ndim(r) == 0 and np.ndim(z) == 0
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("potential-generated stresses need r > 0")
    phi = pair.phi(r, z)
    out = np.stack(
        [
            phi,
            phi + r * pair.phi_r(r, z) + pair.psi_zz(r, z),
            -pair.psi_r(r, z) / r,
            pair.psi_z(r, z) / r,
        ],
        axis=-1,
    )
    return StressState.from_array(out) if scalar else out


def equilibrium_residuals(pair: PotentialPair, r, z):
    """The two axisymmetric equilibrium residuals evaluated from the
    analytic partials; identically zero for exact pairs, so this measures
    floating-point cancellation."""
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=float)
    phi = pair.phi(r, z)
    phi_r = pair.phi_r(r, z)
    sig_t = phi + r * phi_r + pair.psi_zz(r, z)
    res1 = phi_r + (phi - sig_t) / r + pair.psi_zz(r, z) / r
    res2 = (pair.psi_rz(r, z) / r - pair.psi_z(r, z) / r**2) \
        + pair.psi_z(r, z) / r**2 - pair.psi_rz(r, z) / r
    return res1, res2


# ---------------------------------------------------------------------------
# Basis families
# ---------------------------------------------------------------------------

_PHI_FAMILIES = ("phi_cos", "phi_half_cos", "phi_half_sin", "phi_step")
_PSI_FAMILIES = ("psi_cos", "psi_wedge")


@dataclass(frozen=True)
class BasisField:
    """One member of the equilibrated series basis.

    family : one of phi_cos, phi_half_cos, phi_half_sin, phi_step,
             psi_cos, psi_wedge
    i      : radial half-wave count of sin(i pi (r - r_i)/(r_o - r_i))
    j      : axial cosine index (cos families only, 0 allowed)
    h      : interface position (step/wedge families only)
    """

    family: str
    i: int
    j: int
    r_i: float
    r_o: float
    H: float
    h: float | None = None

    @property
    def kind(self) -> str:
        return "phi" if self.family in _PHI_FAMILIES else "psi"

    # radial factors
    def radial(self, r, deriv: int = 0) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        length = self.r_o - self.r_i
        arg = self.i * np.pi * (r - self.r_i) / length
        if deriv == 0:
            return np.sin(arg)
        if deriv == 1:
            return (self.i * np.pi / length) * np.cos(arg)
        raise ValueError("radial derivatives beyond first are not needed")

    # axial factors with one-sided values at the interface
    def axial(self, z, deriv: int = 0, side: str = "plus") -> np.ndarray:
        z = np.asarray(z, dtype=float)
        fam = self.family
        if fam in ("phi_cos", "psi_cos"):
            w = self.j * np.pi / self.H
            return _trig(np.cos, w, z, deriv)
        if fam == "phi_half_cos":
            return _trig(np.cos, np.pi / (2.0 * self.H), z, deriv)
        if fam == "phi_half_sin":
            return _trig(np.sin, np.pi / (2.0 * self.H), z, deriv)
        if fam == "phi_step":
            if deriv > 0:
                return np.zeros_like(z)
            above = _above(z, self.h, side)
            return above.astype(float)
        # psi_wedge: C1 piecewise quadratic, slope 1 at the interface,
        # slope 0 at both ends, curvature jump at the interface
        above = _above(z, self.h, side)
        h, H = self.h, self.H
        if deriv == 0:
            lo = z**2 / (2.0 * h)
            hi = -(z**2) / (2.0 * (H - h)) + z * H / (H - h) - h * H / (2.0 * (H - h))
        elif deriv == 1:
            lo = z / h
            hi = (H - z) / (H - h)
        elif deriv == 2:
            lo = np.full_like(z, 1.0 / h)
            hi = np.full_like(z, -1.0 / (H - h))
        else:
            raise ValueError("axial derivatives beyond second are not needed")
        return np.where(above, hi, lo)

    def evaluate(self, r, z, side: str = "plus"):
        """Stress components (..., 4) at broadcast (r, z)."""
        r = np.asarray(r, dtype=float)
        z = np.asarray(z, dtype=float)
        shape = np.broadcast(r, z).shape
        out = np.zeros(shape + (4,))
        if self.kind == "phi":
            R = self.radial(r)
            T = R + r * self.radial(r, 1)
            U = self.axial(z, 0, side)
            out[..., 0] = R * U
            out[..., 1] = T * U
        else:
            R = self.radial(r)
            dR = self.radial(r, 1)
            out[..., 1] = R * self.axial(z, 2, side)
            out[..., 2] = -dR / r * self.axial(z, 0, side)
            out[..., 3] = R / r * self.axial(z, 1, side)
        return out

    def potential_pair(self) -> PotentialPair:
        """The member as a generic potential pair (for cross-checks against
        the direct component formulas)."""
        zero = lambda r, z: np.zeros(np.broadcast(r, z).shape)
        if self.kind == "phi":
            return PotentialPair(
                phi=lambda r, z: self.radial(r) * self.axial(z),
                phi_r=lambda r, z: self.radial(r, 1) * self.axial(z),
                psi=zero, psi_r=zero, psi_z=zero, psi_zz=zero, psi_rz=zero,
                discontinuous_at=self.h if self.family == "phi_step" else None,
            )
        return PotentialPair(
            phi=zero, phi_r=zero,
            psi=lambda r, z: self.radial(r) * self.axial(z),
            psi_r=lambda r, z: self.radial(r, 1) * self.axial(z),
            psi_z=lambda r, z: self.radial(r) * self.axial(z, 1),
            psi_zz=lambda r, z: self.radial(r) * self.axial(z, 2),
            psi_rz=lambda r, z: self.radial(r, 1) * self.axial(z, 1),
            discontinuous_at=self.h if self.family == "psi_wedge" else None,
        )


def _trig(fn, w, z, deriv):
    if fn is np.cos:
        seq = (np.cos(w * z), -np.sin(w * z), -np.cos(w * z))
    else:
        seq = (np.sin(w * z), np.cos(w * z), -np.sin(w * z))
    return w**deriv * seq[deriv]


def _above(z, h, side):
    if side == "plus":
        return z >= h
    if side == "minus":
        return z > h
    raise ValueError("side must be 'plus' or 'minus'")


def enumerate_basis(config: PipeConfig, n_r: int, n_z: int,
                    include_discontinuous: bool = True,
                    interfaces: Sequence[float] | None = None) -> list[BasisField]:
    """The four continuous trigonometric families plus, when requested, the
    step and wedge enrichments at every material interface.

    Counts: 2*n_r*(n_z+1) continuous cosine members, 2*n_r half-period
    members, and 2*n_r discontinuous members per interface.
    """
    if n_r < 1 or n_z < 0:
        raise ValueError("need n_r >= 1 and n_z >= 0")
    if interfaces is None:
        interfaces = config.layup.interfaces
    for h in interfaces:
        if not 0.0 < h < config.H:
            raise ValueError(f"interface {h} outside (0, {config.H})")
    geo = dict(r_i=config.r_i, r_o=config.r_o, H=config.H)
    basis: list[BasisField] = []
    for i in range(1, n_r + 1):
        for j in range(0, n_z + 1):
            basis.append(BasisField("phi_cos", i, j, **geo))
    for i in range(1, n_r + 1):
        basis.append(BasisField("phi_half_cos", i, 0, **geo))
    for i in range(1, n_r + 1):
        basis.append(BasisField("phi_half_sin", i, 0, **geo))
    for i in range(1, n_r + 1):
        for j in range(0, n_z + 1):
            basis.append(BasisField("psi_cos", i, j, **geo))
    if include_discontinuous:
        for h in interfaces:
            for i in range(1, n_r + 1):
                basis.append(BasisField("phi_step", i, 0, h=h, **geo))
            for i in range(1, n_r + 1):
                basis.append(BasisField("psi_wedge", i, 0, h=h, **geo))
    return basis


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor-product composite Gauss rule over the wall cross-section.

    The z partition has a cell edge at every material interface, so no cell
    straddles a discontinuity; weights2d carries the r factor of
    dOmega = r dr dz.
    """

    r_nodes: np.ndarray
    r_weights: np.ndarray
    z_nodes: np.ndarray
    z_weights: np.ndarray
    r_edges: np.ndarray
    z_edges: np.ndarray
    order: int

    @property
    def weights2d(self) -> np.ndarray:
        return np.outer(self.r_weights * self.r_nodes, self.z_weights)

    def z_blocks(self, block_cells: int = 1):
        """Yield z-node slices cell by cell (assembly works block-wise to
        bound memory)."""
        step = self.order * block_cells
        for start in range(0, len(self.z_nodes), step):
            yield slice(start, min(start + step, len(self.z_nodes)))


def grid_for_basis(config: PipeConfig, n_r: int, order: int = 12) -> QuadratureGrid:
    """Grid sized to the radial mode count: products of the highest sine
    modes see about two oscillation periods per radial cell, which the
    default 12-point rule resolves to well below 1e-9 relative."""
    return tensor_grid(config, order=order, r_cells=max(2, int(np.ceil(n_r / 2))))


def tensor_grid(config: PipeConfig, order: int = 12, r_cells: int = 12,
                z_cell_max: float | None = None) -> QuadratureGrid:
    """Build the default interface-split grid.

    r_cells uniform radial cells resolve products of the radial sine modes
    (about three half-wave pairs per cell at the default sizes); the z
    direction is split at every interface and into segments no longer than
    z_cell_max (default: half the wall thickness).
    """
    if z_cell_max is None:
        z_cell_max = 0.5 * (config.r_o - config.r_i)
    r_edges = np.linspace(config.r_i, config.r_o, r_cells + 1)
    marks = np.unique(np.concatenate([[0.0], config.layup.interfaces, [config.H]]))
    z_edges = [np.array([0.0])]
    for a, b in zip(marks[:-1], marks[1:]):
        ncell = max(1, int(np.ceil((b - a) / z_cell_max)))
        z_edges.append(np.linspace(a, b, ncell + 1)[1:])
    z_edges = np.concatenate(z_edges)
    rn, rw = composite_gauss_rule(r_edges, order)
    zn, zw = composite_gauss_rule(z_edges, order)
    return QuadratureGrid(rn, rw, zn, zw, r_edges, z_edges, order)


def integrate_scalar(grid: QuadratureGrid, fn) -> float:
    """Integral of a scalar field fn(r, z) over the cross-section with the
    dOmega = r dr dz measure."""
    vals = fn(grid.r_nodes[:, None], grid.z_nodes[None, :])
    vals = np.broadcast_to(vals, (len(grid.r_nodes), len(grid.z_nodes)))
    return float(np.sum(grid.weights2d * vals))


def integrate_bilinear(grid: QuadratureGrid, pairing) -> float:
    """Integral of a pointwise pairing (r, z) -> scalar built from two
    stress fields (or any scalar integrand); alias of integrate_scalar kept
    for symmetry with the assembly routines."""
    return integrate_scalar(grid, pairing)


# ---------------------------------------------------------------------------
# Vectorized evaluation tables and assembly
# ---------------------------------------------------------------------------


def _radial_tables(basis: Sequence[BasisField], r: np.ndarray):
    """Per-field radial factors: for phi fields (R, T); for psi fields
    (R, dR/r-scaled pieces).  Returns four (N, nr) tables aligned with the
    component map."""
    N = len(basis)
    R = np.empty((N, len(r)))
    aux = np.empty((N, len(r)))  # T for phi fields, dR for psi fields
    for k, b in enumerate(basis):
        R[k] = b.radial(r)
        aux[k] = (R[k] + r * b.radial(r, 1)) if b.kind == "phi" else b.radial(r, 1)
    return R, aux


def _axial_tables(basis: Sequence[BasisField], z: np.ndarray, side: str = "plus"):
    """Per-field axial value/first/second derivative tables (N, nz)."""
    N = len(basis)
    V = np.empty((N, len(z)))
    D1 = np.empty((N, len(z)))
    D2 = np.empty((N, len(z)))
    for k, b in enumerate(basis):
        V[k] = b.axial(z, 0, side)
        if b.kind == "psi":
            D1[k] = b.axial(z, 1, side)
            D2[k] = b.axial(z, 2, side)
        else:
            D1[k] = 0.0
            D2[k] = 0.0
    return V, D1, D2


def _component_block(basis, R, aux, V, D1, D2, r, is_phi):
    """Component arrays (4, N, nr, nzb) for one z block."""
    N, nr, nzb = R.shape[0], R.shape[1], V.shape[1]
    out = np.zeros((4, N, nr, nzb))
    phi_mask = is_phi
    # sigma_r and sigma_theta for phi fields
    out[0, phi_mask] = R[phi_mask, :, None] * V[phi_mask, None, :]
    out[1, phi_mask] = aux[phi_mask, :, None] * V[phi_mask, None, :]
    # psi fields
    psi_mask = ~phi_mask
    out[1, psi_mask] = R[psi_mask, :, None] * D2[psi_mask, None, :]
    out[2, psi_mask] = -(aux[psi_mask, :, None] / r[None, :, None]) * V[psi_mask, None, :]
    out[3, psi_mask] = (R[psi_mask, :, None] / r[None, :, None]) * D1[psi_mask, None, :]
    return out


def assemble_bilinear(basis: Sequence[BasisField], grid: QuadratureGrid,
                      tangent_at, symmetrize: bool = True) -> np.ndarray:
    """Symmetric matrix K_ij = int sigma_i^T D sigma_j dOmega.

    ``tangent_at(r, z)`` returns the pointwise 4x4 kernel with shape
    (nr, nz, 4, 4) for node arrays r (nr,) and z (nz,).  Assembly runs
    block-wise over z cells; the same routine produces the linear-problem
    Gram matrix (kernel = compliance at the unperturbed stress) and the
    nonlinear Hessian (kernel = creep tangent at the current stress), which
    makes the two agree exactly at the linearization point.
    """
    N = len(basis)
    is_phi = np.array([b.kind == "phi" for b in basis])
    R, aux = _radial_tables(basis, grid.r_nodes)
    K = np.zeros((N, N))
    W = grid.weights2d
    nr = len(grid.r_nodes)
    for sl in grid.z_blocks():
        z = grid.z_nodes[sl]
        V, D1, D2 = _axial_tables(basis, z)
        B = _component_block(basis, R, aux, V, D1, D2, grid.r_nodes, is_phi)
        D = tangent_at(grid.r_nodes, z)  # (nr, nzb, 4, 4)
        q = nr * len(z)
        Bf = B.reshape(4, N, q)
        DWq = (D * W[:, sl][..., None, None]).reshape(q, 4, 4)
        # explicit accumulation keeps the (N, q) factors C-contiguous for
        # BLAS and skips identically-zero kernel couplings
        for a in range(4):
            Ga = None
            for b in range(4):
                wq = DWq[:, a, b]
                if not np.any(wq):
                    continue
                term = Bf[b] * wq
                Ga = term if Ga is None else Ga + term
            if Ga is not None:
                K += Bf[a] @ Ga.T
    return 0.5 * (K + K.T) if symmetrize else K


def assemble_linear(basis: Sequence[BasisField], grid: QuadratureGrid,
                    weight_field) -> np.ndarray:
    """Vector g_i = int sigma_i . w dOmega for a pointwise 4-vector field
    ``weight_field(r, z) -> (nr, nz, 4)`` (the strain-rate pairing of the
    virtual-work statements)."""
    N = len(basis)
    is_phi = np.array([b.kind == "phi" for b in basis])
    R, aux = _radial_tables(basis, grid.r_nodes)
    g = np.zeros(N)
    W = grid.weights2d
    for sl in grid.z_blocks():
        z = grid.z_nodes[sl]
        V, D1, D2 = _axial_tables(basis, z)
        B = _component_block(basis, R, aux, V, D1, D2, grid.r_nodes, is_phi)
        wf = weight_field(grid.r_nodes, z) * W[:, sl][..., None]
        g += np.einsum("cnrz,rzc->n", B, wf, optimize=True)
    return g


def evaluate_fields(basis: Sequence[BasisField], r, z, side: str = "plus") -> np.ndarray:
    """Stress components of every basis member on the tensor product of the
    given nodes: shape (N, nr, nz, 4).  Scalar r or z are treated as
    singleton axes."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    is_phi = np.array([b.kind == "phi" for b in basis])
    R, aux = _radial_tables(basis, r)
    V, D1, D2 = _axial_tables(basis, z, side)
    B = _component_block(basis, R, aux, V, D1, D2, r, is_phi)
    return np.moveaxis(B, 0, -1)
