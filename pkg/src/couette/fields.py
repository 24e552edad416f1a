"""
Three-component perturbation velocity fields and spectral calculus on them.

Fields live on a Grid as arrays of shape (3, n1, n3, n2): Fourier
coefficients over the horizontal mode slots and Gauss-Lobatto point values
in the wall-normal direction. Physical samples are obtained by inverse FFT.
All functions are pure; fields are immutable by convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, conjugate_partner_indices, dealias_mask

SPECTRAL = "spectral"
PHYSICAL = "physical"


@dataclass(frozen=True)
class VelocityField:
    """Perturbation velocity (u1, u2, u3) on a grid.

    data has shape (3, n1, n3, n2); complex Fourier coefficients when
    representation == "spectral", real point samples when "physical".
    Real-valued fields satisfy Hermitian symmetry over the mode slots.
    """

    data: np.ndarray
    grid: Grid
    representation: str = SPECTRAL

    def __post_init__(self):
        expected = (3,) + self.grid.shape
        if self.data.shape != expected:
            raise ValueError(f"field shape {self.data.shape} != {expected}")
        if self.representation not in (SPECTRAL, PHYSICAL):
            raise ValueError(f"unknown representation {self.representation!r}")

    def to_physical(self) -> "VelocityField":
        if self.representation == PHYSICAL:
            return self
        phys = np.fft.ifft2(self.data * (self.grid.n1 * self.grid.n3), axes=(-3, -2))
        return VelocityField(phys.real.copy(), self.grid, PHYSICAL)

    def to_spectral(self) -> "VelocityField":
        if self.representation == SPECTRAL:
            return self
        spec = np.fft.fft2(self.data, axes=(-3, -2)) / (self.grid.n1 * self.grid.n3)
        return VelocityField(spec, self.grid, SPECTRAL)

    def component(self, k: int) -> np.ndarray:
        return self.data[k]

    def __add__(self, other: "VelocityField") -> "VelocityField":
        _check_compatible(self, other)
        return VelocityField(self.data + other.data, self.grid, self.representation)

    def __sub__(self, other: "VelocityField") -> "VelocityField":
        _check_compatible(self, other)
        return VelocityField(self.data - other.data, self.grid, self.representation)

    def __mul__(self, c) -> "VelocityField":
        return VelocityField(self.data * c, self.grid, self.representation)

    __rmul__ = __mul__


def _check_compatible(a: VelocityField, b: VelocityField):
    if a.grid is not b.grid and a.grid != b.grid:
        raise ValueError("fields live on different grids")
    if a.representation != b.representation:
        raise ValueError("fields have different representations")


def zero_field(grid: Grid) -> VelocityField:
    return VelocityField(np.zeros((3,) + grid.shape, complex), grid, SPECTRAL)


def _require_spectral(f: VelocityField) -> VelocityField:
    return f if f.representation == SPECTRAL else f.to_spectral()


def dx1(f: VelocityField) -> VelocityField:
    f = _require_spectral(f)
    return VelocityField(1j * f.grid.K1 * f.data, f.grid, SPECTRAL)


def dx3(f: VelocityField) -> VelocityField:
    f = _require_spectral(f)
    return VelocityField(1j * f.grid.K3 * f.data, f.grid, SPECTRAL)


def dx2(f: VelocityField) -> VelocityField:
    f = _require_spectral(f)
    return VelocityField(f.data @ f.grid.D1.T, f.grid, SPECTRAL)


def laplacian(f: VelocityField) -> VelocityField:
    f = _require_spectral(f)
    return VelocityField(f.data @ f.grid.D2.T - f.grid.Ksq * f.data, f.grid, SPECTRAL)


def divergence(f: VelocityField) -> np.ndarray:
    """Scalar divergence coefficients i*k1*u1 + D u2 + i*k3*u3, shape (n1,n3,n2)."""
    f = _require_spectral(f)
    g = f.grid
    return 1j * g.K1 * f.data[0] + f.data[1] @ g.D1.T + 1j * g.K3 * f.data[2]


def divergence_residual(f: VelocityField) -> float:
    """max |div| normalized by the largest first-derivative magnitude."""
    div = np.abs(divergence(f)).max()
    g = _require_spectral(f).grid
    scale = max(np.abs(dx1(f).data).max(), np.abs(dx2(f).data).max(),
                np.abs(dx3(f).data).max(), 1e-300)
    return float(div / scale)


def wall_residual(f: VelocityField) -> float:
    """max wall value normalized by the field's largest coefficient."""
    f = _require_spectral(f)
    walls = max(np.abs(f.data[:, :, :, 0]).max(), np.abs(f.data[:, :, :, -1]).max())
    return float(walls / max(np.abs(f.data).max(), 1e-300))


def hermitian_symmetrize(arr: np.ndarray, grid: Grid) -> np.ndarray:
    """Project horizontal-mode coefficients onto the real-field subspace."""
    I, J = conjugate_partner_indices(grid)
    mirrored = np.conj(arr[..., I, J, :])
    return 0.5 * (arr + mirrored)


def is_real_field(f: VelocityField, tol: float = 1e-12) -> bool:
    f = _require_spectral(f)
    sym = hermitian_symmetrize(f.data, f.grid)
    scale = max(np.abs(f.data).max(), 1e-300)
    return bool(np.abs(f.data - sym).max() / scale < tol)


# ---------------------------------------------------------------------------
# divergence-free construction from wall-normal velocity / vorticity data
# ---------------------------------------------------------------------------

def solenoidal_from_normal_form(v2: np.ndarray, eta: np.ndarray, grid: Grid,
                                mean_u1: np.ndarray | None = None,
                                mean_u3: np.ndarray | None = None) -> VelocityField:
    """Build a divergence-free no-slip field from v2 (wall-normal velocity)
    and eta (wall-normal vorticity) coefficient arrays of shape (n1, n3, n2).

    v2 must vanish at the walls together with its interpolant derivative
    (clamped); eta must vanish at the walls. The horizontal mean enters via
    the optional mean profiles (mean v2 is identically zero for solenoidal
    fields). Off-mean components:

        u1 = (i k1 D v2 - i k3 eta) / k^2,   u3 = (i k3 D v2 + i k1 eta) / k^2
    """
    g = grid
    ksq = g.Ksq.copy()
    mean_slot = ksq == 0.0
    ksq[mean_slot] = 1.0
    dv2 = v2 @ g.D1.T
    u1 = (1j * g.K1 * dv2 - 1j * g.K3 * eta) / ksq
    u3 = (1j * g.K3 * dv2 + 1j * g.K1 * eta) / ksq
    u2 = v2.copy()
    sel = np.broadcast_to(mean_slot, u1.shape)
    u1[sel] = 0.0
    u3[sel] = 0.0
    u2[sel] = 0.0
    if mean_u1 is not None:
        u1[0, 0, :] = mean_u1
    if mean_u3 is not None:
        u3[0, 0, :] = mean_u3
    data = np.stack([u1, u2, u3])
    data[:, :, :, 0] = 0.0
    data[:, :, :, -1] = 0.0
    return VelocityField(data, grid, SPECTRAL)


def normal_form_from_field(f: VelocityField) -> tuple:
    """Extract (v2, eta, mean_u1, mean_u3) coefficient arrays from a field."""
    f = _require_spectral(f)
    g = f.grid
    v2 = f.data[1].copy()
    eta = 1j * g.K3 * f.data[0] - 1j * g.K1 * f.data[2]
    mean_u1 = f.data[0][0, 0, :].copy()
    mean_u3 = f.data[2][0, 0, :].copy()
    v2[0, 0, :] = 0.0
    eta[0, 0, :] = 0.0
    return v2, eta, mean_u1, mean_u3


def _chebyshev_polys(y: np.ndarray, jmax: int) -> np.ndarray:
    theta = np.arccos(np.clip(y, -1.0, 1.0))
    return np.cos(np.arange(jmax)[:, None] * theta[None, :])


def clamped_profiles(grid: Grid, jmax: int) -> np.ndarray:
    """(jmax, n2) basis (1-y^2)^2 T_j(y): zero value and slope at both walls."""
    y = grid.y
    return (1.0 - y * y) ** 2 * _chebyshev_polys(y, jmax)


def dirichlet_profiles(grid: Grid, jmax: int) -> np.ndarray:
    """(jmax, n2) basis (1-y^2) T_j(y): zero value at both walls."""
    y = grid.y
    return (1.0 - y * y) * _chebyshev_polys(y, jmax)


def random_solenoidal_field(grid: Grid, rng: np.random.Generator,
                            decay: float = 0.5, jmax: int | None = None) -> VelocityField:
    """Random smooth divergence-free no-slip field with spectrally decaying
    coefficients (rate `decay` per mode index), band-limited to the 2/3 shell.

    The field is real in physical space. Used by the verification batteries;
    deterministic given the generator state.
    """
    g = grid
    if jmax is None:
        jmax = max(4, g.n2 - 8)
    env_j = np.exp(-decay * np.arange(jmax))
    env_h = np.exp(-decay * (np.abs(g.m1)[:, None] + np.abs(g.m3)[None, :]))[:, :, None]
    mask = dealias_mask(g)

    def coeffs():
        c = rng.standard_normal((g.n1, g.n3, jmax)) + 1j * rng.standard_normal((g.n1, g.n3, jmax))
        c *= env_h * env_j[None, None, :]
        return np.where(mask, c, 0.0)

    v2 = np.einsum("mnj,jy->mny", coeffs(), clamped_profiles(g, jmax))
    eta = np.einsum("mnj,jy->mny", coeffs(), dirichlet_profiles(g, jmax))
    v2 = hermitian_symmetrize(v2, g)
    eta = hermitian_symmetrize(eta, g)
    # horizontal-mean profiles are real for a real field; mean v2 vanishes
    mean_basis = dirichlet_profiles(g, jmax)
    mean_u1 = (rng.standard_normal(jmax) * env_j) @ mean_basis
    mean_u3 = (rng.standard_normal(jmax) * env_j) @ mean_basis
    return solenoidal_from_normal_form(v2, eta, g, mean_u1, mean_u3)


# ---------------------------------------------------------------------------
# integrals (horizontal by Parseval, vertical by Clenshaw-Curtis)
# ---------------------------------------------------------------------------

def scalar_inner(a: np.ndarray, b: np.ndarray, grid: Grid) -> complex:
    """Volume inner product (a, b) = int a * conj(b) of two coefficient arrays."""
    prod = (a * np.conj(b)) @ grid.w
    return complex(grid.L1 * grid.L3 * prod.sum())


def scalar_sq_norm(a: np.ndarray, grid: Grid) -> float:
    prod = (a.real ** 2 + a.imag ** 2) @ grid.w
    return float(grid.L1 * grid.L3 * prod.sum())


def field_inner(f: VelocityField, h: VelocityField) -> complex:
    f = _require_spectral(f)
    h = _require_spectral(h)
    return sum(scalar_inner(f.data[k], h.data[k], f.grid) for k in range(3))


def field_sq_norm(f: VelocityField) -> float:
    f = _require_spectral(f)
    return sum(scalar_sq_norm(f.data[k], f.grid) for k in range(3))
