"""
Fourier x Chebyshev discretization of the channel [0,L1) x [-1,1] x [0,L3).

Streamwise (x1) and spanwise (x3) directions are periodic with Fourier
collocation; the wall-normal direction (x2) uses Chebyshev-Gauss-Lobatto
points ordered descending from +1 (row 0 = top wall).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def chebyshev_nodes(n2: int) -> np.ndarray:
    """Gauss-Lobatto nodes cos(j*pi/(n2-1)), j=0..n2-1, descending from 1 to -1."""
    if n2 < 2:
        raise ValueError(f"need at least 2 Chebyshev nodes, got {n2}")
    return np.cos(np.pi * np.arange(n2) / (n2 - 1))


def diff_matrix(n2: int, order: int = 1) -> "DiffMatrix":
    """Spectral collocation differentiation matrix on the Gauss-Lobatto nodes.

    Exact (to roundoff) for polynomials of degree < n2. The order-2 matrix is
    the square of the order-1 matrix.
    """
    if order not in (1, 2):
        raise ValueError(f"unsupported derivative order {order}")
    d1 = _cheb_d1(n2)
    entries = d1 if order == 1 else d1 @ d1
    return DiffMatrix(order=order, entries=entries, nodes=chebyshev_nodes(n2))


def _cheb_d1(n2: int) -> np.ndarray:
    if n2 < 2:
        raise ValueError(f"need at least 2 Chebyshev nodes, got {n2}")
    n = n2 - 1
    x = chebyshev_nodes(n2)
    c = np.hstack([2.0, np.ones(n - 1), 2.0]) * (-1.0) ** np.arange(n2)
    X = np.tile(x, (n2, 1)).T
    dX = X - X.T
    D = np.outer(c, 1.0 / c) / (dX + np.eye(n2))
    # negative-sum trick keeps the diagonal consistent with exact
    # differentiation of constants
    D -= np.diag(D.sum(axis=1))
    return D


@dataclass(frozen=True)
class DiffMatrix:
    """Dense collocation derivative of a given order on Gauss-Lobatto nodes."""

    order: int
    entries: np.ndarray
    nodes: np.ndarray

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Differentiate samples along the last axis."""
        return values @ self.entries.T


def quadrature_weights(n2: int) -> np.ndarray:
    """Clenshaw-Curtis weights on the Gauss-Lobatto nodes (sum = 2).

    Exact for polynomials of degree <= n2-1; all weights positive.
    """
    if n2 < 2:
        raise ValueError(f"need at least 2 Chebyshev nodes, got {n2}")
    n = n2 - 1
    theta = np.pi * np.arange(1, n) / n
    w = np.zeros(n2)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[-1] = 1.0 / (n * n - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2.0 * k * theta) / (4.0 * k * k - 1)
        v -= np.cos(n * theta) / (n * n - 1)
    else:
        w[0] = w[-1] = 1.0 / (n * n)
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta) / (4.0 * k * k - 1)
    w[1:-1] = 2.0 * v / n
    return w


def resample_matrix(n_from: int, n_to: int) -> np.ndarray:
    """Barycentric interpolation matrix between Gauss-Lobatto grids.

    Maps samples on n_from nodes to samples on n_to nodes; used for the
    oversampled sup-norm evaluation.
    """
    x = chebyshev_nodes(n_from)
    xi = chebyshev_nodes(n_to)
    wbar = np.ones(n_from) * (-1.0) ** np.arange(n_from)
    wbar[0] *= 0.5
    wbar[-1] *= 0.5
    diff = xi[:, None] - x[None, :]
    exact_row, exact_col = np.nonzero(np.abs(diff) < 1e-14)
    diff[exact_row, exact_col] = 1.0
    num = wbar[None, :] / diff
    mat = num / num.sum(axis=1, keepdims=True)
    mat[exact_row, :] = 0.0
    mat[exact_row, exact_col] = 1.0
    return mat


@dataclass(frozen=True)
class Grid:
    """Discretization descriptor: mode counts, box periods, derived operators.

    Parameters
    ----------
    n1, n3 : int
        Streamwise / spanwise Fourier mode counts (even when > 1).
    n2 : int
        Wall-normal Gauss-Lobatto point count (>= 8).
    L1, L3 : float
        Streamwise / spanwise periods.

    All derived arrays are computed once and never mutated; instances are
    safe to share across parallel workers.
    """

    n1: int
    n3: int
    n2: int
    L1: float = 4.0 * np.pi
    L3: float = 2.0 * np.pi

    def __post_init__(self):
        if self.n2 < 8:
            raise ValueError(f"n2 must be >= 8, got {self.n2}")
        for name, n in (("n1", self.n1), ("n3", self.n3)):
            if n < 1 or (n > 1 and n % 2 != 0):
                raise ValueError(f"{name} must be 1 or an even count, got {n}")
        if self.L1 <= 0 or self.L3 <= 0:
            raise ValueError("box periods must be positive")

        y = chebyshev_nodes(self.n2)
        D1 = _cheb_d1(self.n2)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "D1", D1)
        object.__setattr__(self, "D2", D1 @ D1)
        object.__setattr__(self, "w", quadrature_weights(self.n2))

        m1 = np.fft.fftfreq(self.n1, 1.0 / self.n1).astype(int)
        m3 = np.fft.fftfreq(self.n3, 1.0 / self.n3).astype(int)
        k1 = 2.0 * np.pi * m1 / self.L1
        k3 = 2.0 * np.pi * m3 / self.L3
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m3", m3)
        object.__setattr__(self, "k1", k1)
        object.__setattr__(self, "k3", k3)
        # broadcastable (n1, n3, 1) views used all over the package
        K1 = k1[:, None, None] + 0.0 * k3[None, :, None]
        K3 = 0.0 * k1[:, None, None] + k3[None, :, None]
        object.__setattr__(self, "K1", K1)
        object.__setattr__(self, "K3", K3)
        object.__setattr__(self, "Ksq", K1 * K1 + K3 * K3)

    @property
    def shape(self) -> tuple:
        return (self.n1, self.n3, self.n2)

    @property
    def interior(self) -> slice:
        return slice(1, self.n2 - 1)

    def x1(self) -> np.ndarray:
        return np.arange(self.n1) * self.L1 / self.n1

    def x3(self) -> np.ndarray:
        return np.arange(self.n3) * self.L3 / self.n3


def wavenumbers(grid: Grid) -> list:
    """(k1, k3) pairs in FFT ordering, row-major over the (n1, n3) mode slots."""
    return [(grid.k1[i], grid.k3[j]) for i in range(grid.n1) for j in range(grid.n3)]


def conjugate_partner_indices(grid: Grid) -> tuple:
    """Index arrays (I, J) such that slot (i, j) pairs with slot (I[i,j], J[i,j]).

    A real physical field has coefficient(partner) = conj(coefficient(slot)).
    """
    i = np.arange(grid.n1)
    j = np.arange(grid.n3)
    I = ((-i) % grid.n1)[:, None] + 0 * j[None, :]
    J = 0 * i[:, None] + ((-j) % grid.n3)[None, :]
    return I, J


def dealias_mask(grid: Grid) -> np.ndarray:
    """2/3-rule boolean mask over horizontal mode slots, shape (n1, n3, 1).

    True for |m| < n1/3 and |n| < n3/3 (everything kept on single-mode axes).
    """
    keep1 = np.abs(grid.m1) < grid.n1 / 3.0 if grid.n1 > 1 else np.ones(1, bool)
    keep3 = np.abs(grid.m3) < grid.n3 / 3.0 if grid.n3 > 1 else np.ones(1, bool)
    return (keep1[:, None] & keep3[None, :])[:, :, None]
