"""
Per-wavenumber blocks of the linearized Couette operator.

The operator L = (1/R) Lap - x2 d/dx1 - shear acts on divergence-free
no-slip fields. For each horizontal wavenumber pair it reduces to a block in
wall-normal velocity / wall-normal vorticity variables (pressure eliminated
structurally); the mean pair (0, 0) reduces to Dirichlet heat operators with
the shear coupling u1 <- -u2.

Sign conventions, with E = k^2 - D^2 acting on interior nodes:

    E dv/dt   = [-i k1 y E - (1/R)(D^2 - k^2)^2_clamped] v
    deta/dt   = [-i k1 y + (1/R)(D^2 - k^2)] eta - i k3 v

The fourth-order term carries clamped (no-slip + no-penetration-slope)
boundary conditions, built on interior nodes via the (1 - y^2)-scaled
representation, so the mass matrix is nonsingular and the block has no
boundary-row artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .fields import VelocityField, _require_spectral
from .grid import Grid, chebyshev_nodes, _cheb_d1

# generalized eigenvalues above this magnitude are treated as discretization
# artifacts and dropped from reported spectra
EIG_MAGNITUDE_CUTOFF = 1e8


def clamped_biharmonic(n2: int) -> np.ndarray:
    """(n2-2)x(n2-2) fourth derivative with clamped conditions at both walls."""
    x = chebyshev_nodes(n2)
    D = _cheb_d1(n2)
    D2 = D @ D
    D3 = D2 @ D
    D4 = D2 @ D2
    s = np.zeros(n2)
    s[1:-1] = 1.0 / (1.0 - x[1:-1] ** 2)
    full = (np.diag(1.0 - x * x) @ D4 - 8.0 * np.diag(x) @ D3 - 12.0 * D2) * s[None, :]
    return full[1:-1, 1:-1]


@dataclass(frozen=True)
class WavenumberOperator:
    """One (k1, k3, R) block: generalized pencil (A, E) on interior amplitudes
    plus the lift back to stacked full-node velocity components.

    State layout: (v interior, eta interior) for k^2 > 0, or the three
    interior velocity profiles for the mean pair. `lift` maps state ->
    (u1, u2, u3) on all n2 nodes (walls exactly zero); `proj` maps a stacked
    full-node velocity forcing to the state-space right-hand side and
    annihilates gradients. For divergence-free forcing, proj @ lift == E.
    """

    k1: float
    k3: float
    reynolds: float
    n2: int
    A: np.ndarray
    E: np.ndarray
    lift: np.ndarray
    proj: np.ndarray
    mean_mode: bool

    @property
    def state_size(self) -> int:
        return self.A.shape[0]


def build_operator(k1: float, k3: float, reynolds: float, n2: int) -> WavenumberOperator:
    """Assemble the block for one wavenumber pair."""
    if reynolds < 1.0:
        raise ValueError(f"reynolds must be >= 1, got {reynolds}")
    if n2 < 16:
        raise ValueError(f"n2 must be >= 16 to resolve the fourth-order block, got {n2}")
    y = chebyshev_nodes(n2)
    D = _cheb_d1(n2)
    D2 = D @ D
    ni = n2 - 2
    D2t = D2[1:-1, 1:-1]
    yi = y[1:-1]
    sel = np.zeros((ni, n2))
    sel[:, 1:-1] = np.eye(ni)

    ksq = k1 * k1 + k3 * k3
    if ksq == 0.0:
        heat = D2t / reynolds
        A = np.zeros((3 * ni, 3 * ni), complex)
        for b in range(3):
            A[b * ni:(b + 1) * ni, b * ni:(b + 1) * ni] = heat
        A[0:ni, ni:2 * ni] -= np.eye(ni)
        E = np.eye(3 * ni, dtype=complex)
        lift = np.zeros((3 * n2, 3 * ni), complex)
        for b in range(3):
            lift[b * n2:(b + 1) * n2, b * ni:(b + 1) * ni] = sel.T
        proj = np.zeros((3 * ni, 3 * n2), complex)
        for b in range(3):
            proj[b * ni:(b + 1) * ni, b * n2:(b + 1) * n2] = sel
        return WavenumberOperator(k1, k3, reynolds, n2, A, E, lift, proj, True)

    E_os = ksq * np.eye(ni) - D2t
    D4c = clamped_biharmonic(n2)
    bih = D4c - 2.0 * ksq * D2t + ksq ** 2 * np.eye(ni)
    A_os = -1j * k1 * (yi[:, None] * E_os) - bih / reynolds
    A_sq = -1j * k1 * np.diag(yi) + (D2t - ksq * np.eye(ni)) / reynolds

    A = np.zeros((2 * ni, 2 * ni), complex)
    A[:ni, :ni] = A_os
    A[ni:, ni:] = A_sq
    A[ni:, :ni] = -1j * k3 * np.eye(ni)
    E = np.zeros((2 * ni, 2 * ni), complex)
    E[:ni, :ni] = E_os
    E[ni:, ni:] = np.eye(ni)

    # lift: u1 = (i k1 Dv - i k3 eta)/k^2, u2 = v, u3 = (i k3 Dv + i k1 eta)/k^2
    # (the derivative block keeps its wall rows so that proj @ lift == E holds
    # exactly; wall values of reconstructed modes are interpolant-tail sized)
    Dfull = D[:, 1:-1]
    lift = np.zeros((3 * n2, 2 * ni), complex)
    lift[0:n2, :ni] = 1j * k1 * Dfull / ksq
    lift[0:n2, ni:] = -1j * k3 * sel.T / ksq
    lift[n2:2 * n2, :ni] = sel.T
    lift[2 * n2:, :ni] = 1j * k3 * Dfull / ksq
    lift[2 * n2:, ni:] = 1j * k1 * sel.T / ksq

    # proj rows: v-equation gets i k1 D g1 + k^2 g2 + i k3 D g3,
    # eta-equation gets i k3 g1 - i k1 g3; gradients map to zero
    Dint = D[1:-1, :]
    proj = np.zeros((2 * ni, 3 * n2), complex)
    proj[:ni, 0:n2] = 1j * k1 * Dint
    proj[:ni, n2:2 * n2] = ksq * sel
    proj[:ni, 2 * n2:] = 1j * k3 * Dint
    proj[ni:, 0:n2] = 1j * k3 * sel
    proj[ni:, 2 * n2:] = -1j * k1 * sel
    return WavenumberOperator(k1, k3, reynolds, n2, A, E, lift, proj, False)


def reconstruct_velocity(op: WavenumberOperator, state: np.ndarray) -> np.ndarray:
    """Velocity triple (3, n2) for one mode; divergence-free by construction."""
    if state.shape != (op.state_size,):
        raise ValueError(f"state must have shape ({op.state_size},)")
    return (op.lift @ state).reshape(3, op.n2)


def extract_state(op: WavenumberOperator, u: np.ndarray) -> np.ndarray:
    """Inverse of reconstruct_velocity on divergence-free no-slip triples."""
    if u.shape != (3, op.n2):
        raise ValueError(f"velocity triple must have shape (3, {op.n2})")
    if op.mean_mode:
        return np.concatenate([u[0, 1:-1], u[1, 1:-1], u[2, 1:-1]]).astype(complex)
    v = u[1, 1:-1]
    eta = (1j * op.k3 * u[0] - 1j * op.k1 * u[2])[1:-1]
    return np.concatenate([v, eta])


def project_forcing(op: WavenumberOperator, g: np.ndarray) -> np.ndarray:
    """State-space right-hand side produced by a velocity forcing triple."""
    if g.shape != (3, op.n2):
        raise ValueError(f"forcing triple must have shape (3, {op.n2})")
    return op.proj @ g.reshape(-1)


def apply_L(f: VelocityField, reynolds: float) -> VelocityField:
    """Primitive-variable action (1/R) Lap f - x2 df/dx1 - (f2, 0, 0).

    No pressure projection; serves as the independent oracle for the block
    operators on solenoidal inputs (the block right-hand sides annihilate
    gradient fields, so proj(apply_L(f)) == A @ state(f))."""
    f = _require_spectral(f)
    g = f.grid
    lap = f.data @ g.D2.T - g.Ksq * f.data
    out = lap / reynolds - 1j * g.K1 * (f.data * g.y)
    out[0] -= f.data[1]
    return VelocityField(out, g, "spectral")


@dataclass(frozen=True)
class Spectrum:
    """Finite generalized eigenvalues of one block, sorted by real part."""

    eigenvalues: np.ndarray
    k1: float
    k3: float
    reynolds: float
    n2: int

    @property
    def rightmost(self) -> complex:
        return complex(self.eigenvalues[0])


def eigenvalues(op: WavenumberOperator,
                magnitude_cutoff: float = EIG_MAGNITUDE_CUTOFF) -> Spectrum:
    """Generalized eigenvalues of (A, E); non-finite values and values above
    the magnitude cutoff (discretization artifacts) are dropped."""
    try:
        vals = scipy.linalg.eigvals(op.A, op.E)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise RuntimeError(
            f"eigen-solve failed for block k1={op.k1}, k3={op.k3}, "
            f"R={op.reynolds}, n2={op.n2}") from exc
    vals = vals[np.isfinite(vals)]
    vals = vals[np.abs(vals) <= magnitude_cutoff]
    order = np.argsort(-vals.real)
    return Spectrum(vals[order], op.k1, op.k3, op.reynolds, op.n2)
