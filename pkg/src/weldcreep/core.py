"""Problem definition types, the power-law creep constitutive model, and
shared numeric utilities.

Stress and strain-rate vectors follow the axisymmetric 4-component layout

    sigma = (sigma_r, sigma_theta, sigma_z, sigma_rz)
    eps   = (eps_r, eps_theta, eps_z, 2*eps_rz)

i.e. the strain-rate vector carries the engineering (doubled) shear so that
``eps @ sigma`` equals the tensor contraction.  Array-valued functions accept
any leading batch shape with the component axis last.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MaterialLayup",
    "NormalizedLayup",
    "PipeConfig",
    "StressState",
    "StrainRateState",
    "two_material_config",
    "normalize_layup",
    "deviator",
    "von_mises",
    "norton_strain_rate",
    "norton_tangent",
    "gauss_legendre_rule",
    "composite_gauss_rule",
]


@dataclass(frozen=True)
class MaterialLayup:
    """Piecewise-constant creep prefactor along the axis.

    ``coefficients[j]`` is the prefactor of layer j (bottom to top) and
    ``interfaces[j]`` the axial position where layer j ends; there is one
    interface fewer than there are layers.
    """

    coefficients: tuple[float, ...]
    interfaces: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        ifaces = tuple(float(z) for z in self.interfaces)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "interfaces", ifaces)
        if len(coeffs) < 1:
            raise ValueError("layup needs at least one layer")
        if len(ifaces) != len(coeffs) - 1:
            raise ValueError(
                f"{len(coeffs)} layers require {len(coeffs) - 1} interfaces, "
                f"got {len(ifaces)}"
            )
        if any(a <= 0.0 for a in coeffs):
            raise ValueError("all layer coefficients must be positive")
        if any(b <= a for a, b in zip(ifaces, ifaces[1:])):
            raise ValueError("interfaces must be strictly increasing")

    @property
    def n_layers(self) -> int:
        return len(self.coefficients)

    def coefficient_at(self, z) -> np.ndarray:
        """Prefactor A(z), evaluated with layer j active on [z_j, z_{j+1})."""
        z = np.asarray(z, dtype=float)
        idx = np.searchsorted(np.asarray(self.interfaces), z, side="right")
        return np.asarray(self.coefficients, dtype=float)[idx]


HOMOGENEOUS = MaterialLayup(coefficients=(1.0,), interfaces=())


@dataclass(frozen=True)
class NormalizedLayup:
    """Step-sum representation of a layup, unique up to global scaling.

    After dividing by the top-layer coefficient, the profile is written as

        A(z) = 1 - s * sum_j alpha_j * step(z_{j+1} - z),   alpha_{m-1} = 1,

    where ``step`` is the unit step and z_2..z_m are the interface positions.
    ``s = 0`` marks a homogeneous pipe; the alphas are then empty/meaningless.
    """

    s: float
    alphas: tuple[float, ...]
    interfaces: tuple[float, ...]

    @property
    def s_is_large(self) -> bool:
        """True when |s| exceeds 0.5, the regime where a first-order
        expansion in s degrades noticeably."""
        return abs(self.s) > 0.5

    def coefficient_at(self, z, s: float | None = None) -> np.ndarray:
        """A(z) rebuilt from the step sum, optionally at a different s."""
        sval = self.s if s is None else float(s)
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.ones_like(z)
        for alpha, zj in zip(self.alphas, self.interfaces):
            out -= sval * alpha * (z < zj)
        return out


def normalize_layup(layup: MaterialLayup) -> NormalizedLayup:
    """Reduce a layup to its (s, alpha) step-sum form.

    Scales so the top layer has unit prefactor, then s = 1 - A_{m-1} and
    alpha_j = (A_{j+1} - A_j) / s.  For two materials this is
    s = 1 - A^-/A^+ with alpha = (1,).  A homogeneous profile returns s = 0
    with empty alphas.
    """
    a = np.asarray(layup.coefficients, dtype=float) / layup.coefficients[-1]
    if layup.n_layers == 1 or np.allclose(a, 1.0, rtol=0.0, atol=1e-15):
        return NormalizedLayup(s=0.0, alphas=(), interfaces=())
    s = 1.0 - a[-2]
    if s == 0.0:
        raise ValueError(
            "the two topmost layers have equal coefficients; the step-sum "
            "normalization requires A_{m-1} != A_m"
        )
    alphas = tuple((a[j + 1] - a[j]) / s for j in range(layup.n_layers - 1))
    return NormalizedLayup(s=s, alphas=alphas, interfaces=layup.interfaces)


@dataclass(frozen=True)
class PipeConfig:
    """Geometry, load, and material definition of the welded-pipe problem.

    r_i, r_o : inner/outer wall radius
    H        : axial half-model length
    p        : internal pressure
    n        : creep exponent of the power law
    layup    : axial distribution of the creep prefactor
    """

    r_i: float
    r_o: float
    H: float
    p: float
    n: float
    layup: MaterialLayup = field(default=HOMOGENEOUS)

    def __post_init__(self):
        if not 0.0 < self.r_i < self.r_o:
            raise ValueError("need 0 < r_i < r_o")
        if self.H <= 0.0:
            raise ValueError("need H > 0")
        if self.p < 0.0:
            raise ValueError("need p >= 0")
        if self.n < 1.0:
            raise ValueError("need n >= 1")
        for z in self.layup.interfaces:
            if not 0.0 < z < self.H:
                raise ValueError(f"interface z={z} not strictly inside (0, {self.H})")

    @property
    def wall(self) -> tuple[float, float]:
        return (self.r_i, self.r_o)

    def contains_radius(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return (r >= self.r_i) & (r <= self.r_o)


def two_material_config(r_i: float, r_o: float, H: float, h: float,
                        p: float, n: float, s: float = 0.0) -> PipeConfig:
    """Weld layer on [0, h) with prefactor 1 - s, parent material above."""
    layup = MaterialLayup(coefficients=(1.0 - s, 1.0), interfaces=(h,))
    return PipeConfig(r_i=r_i, r_o=r_o, H=H, p=p, n=n, layup=layup)


@dataclass(frozen=True)
class StressState:
    """Axisymmetric stress at a point."""

    sigma_r: float
    sigma_theta: float
    sigma_z: float
    sigma_rz: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.sigma_r, self.sigma_theta, self.sigma_z, self.sigma_rz]
        )

    @classmethod
    def from_array(cls, v) -> "StressState":
        v = np.asarray(v, dtype=float)
        return cls(*(float(x) for x in v))


@dataclass(frozen=True)
class StrainRateState:
    """Axisymmetric strain rate at a point; the shear entry is engineering
    shear 2*eps_rz."""

    eps_r: float
    eps_theta: float
    eps_z: float
    eps_rz_engineering: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.eps_r, self.eps_theta, self.eps_z, self.eps_rz_engineering]
        )

    @property
    def trace(self) -> float:
        return self.eps_r + self.eps_theta + self.eps_z


def _as_components(sigma) -> tuple[np.ndarray, bool]:
    if isinstance(sigma, StressState):
        return sigma.as_array(), True
    return np.asarray(sigma, dtype=float), False


def deviator(sigma) -> np.ndarray:
    """Stress deviator in vector form (..., 4); the shear entry stays sigma_rz."""
    sig, _ = _as_components(sigma)
    mean = (sig[..., 0] + sig[..., 1] + sig[..., 2]) / 3.0
    dev = sig.copy()
    dev[..., 0] -= mean
    dev[..., 1] -= mean
    dev[..., 2] -= mean
    return dev


def von_mises(sigma):
    """Equivalent stress sqrt(3/2 s:s) of a (..., 4) stress vector."""
    sig, scalar = _as_components(sigma)
    dev = deviator(sig)
    ss = dev[..., 0] ** 2 + dev[..., 1] ** 2 + dev[..., 2] ** 2 + 2.0 * dev[..., 3] ** 2
    out = np.sqrt(1.5 * ss)
    return float(out) if scalar else out


def norton_strain_rate(sigma, A, n):
    """Steady creep strain rate A * s * svm**(n-1) of the power law.

    Returns the 4-vector with engineering shear in the last slot.  A may be
    scalar or broadcastable against the batch shape of sigma.  At zero
    equivalent stress the rate is zero for every n >= 1.
    """
    sig, scalar = _as_components(sigma)
    dev = deviator(sig)
    svm = von_mises(sig)
    fac = np.asarray(A, dtype=float) * _stable_pow(svm, n - 1.0)
    out = dev * np.asarray(fac)[..., None]
    out[..., 3] *= 2.0
    return StrainRateState(*(float(x) for x in out)) if scalar else out


# The 4x4 projector d(dev)/d(sigma) in vector form; the shear row carries the
# factor 2 of the engineering-shear output slot.
_DEV_PROJECTOR = np.array(
    [
        [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 0.0],
        [-1.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0, 0.0],
        [-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0, 0.0],
        [0.0, 0.0, 0.0, 2.0],
    ]
)


def norton_tangent(sigma, A, n) -> np.ndarray:
    """Derivative of :func:`norton_strain_rate` with respect to the stress
    vector, shape (..., 4, 4); symmetric.

    D = A * svm**(n-1) * [P + 3(n-1)/(2 svm^2) * shat shate^T]

    with P the deviatoric projector above and shat the deviator vector with
    doubled shear.  The rank-one part is dropped at svm = 0.
    """
    sig, _ = _as_components(sigma)
    dev = deviator(sig)
    shat = dev.copy()
    shat[..., 3] *= 2.0
    svm = von_mises(sig)
    A = np.broadcast_to(np.asarray(A, dtype=float), np.shape(svm))

    lead = A * _stable_pow(svm, n - 1.0)
    out = lead[..., None, None] * _DEV_PROJECTOR

    coef = np.where(svm > 0.0, A * 1.5 * (n - 1.0) * _stable_pow(svm, n - 3.0), 0.0)
    return out + coef[..., None, None] * shat[..., :, None] * shat[..., None, :]


def _stable_pow(base, expo):
    """base**expo with 0**0 = 1 and 0**negative = 0 (used only at svm = 0
    where the accompanying deviator factor vanishes as well)."""
    base = np.asarray(base, dtype=float)
    if expo == 0.0:
        return np.ones_like(base)
    with np.errstate(divide="ignore"):
        out = np.where(base > 0.0, base, 1.0) ** expo
    return np.where(base > 0.0, out, 0.0)


def gauss_legendre_rule(order: int, interval=(-1.0, 1.0)):
    """Gauss-Legendre nodes and weights on an interval; exact through
    polynomial degree 2*order - 1."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    a, b = float(interval[0]), float(interval[1])
    x, w = np.polynomial.legendre.leggauss(int(order))
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def composite_gauss_rule(edges, order: int):
    """Tensor-free composite rule: Gauss-Legendre of the given order on each
    cell of the partition described by ``edges`` (ascending)."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2:
        raise ValueError("need at least one cell")
    if np.any(np.diff(edges) <= 0.0):
        raise ValueError("edges must be strictly increasing")
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre_rule(order, (a, b))
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)
