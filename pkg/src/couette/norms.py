"""
Discrete norms on velocity fields: L2, R-weighted (m-) variants, Sobolev H^k,
the selected-second-derivative seminorm, the two augmented norms built from
it, and the sup norm on an oversampled physical grid.

Horizontal integrals use Parseval on the Fourier coefficients (exact for the
represented modes); wall-normal integrals use Clenshaw-Curtis quadrature.
Derivatives are evaluated spectrally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import VelocityField, _require_spectral, scalar_sq_norm
from .grid import resample_matrix

L2 = "L2"
M = "M"
HK = "Hk"
HKM = "HkM"
J2 = "J2"
HTILDE1 = "Htilde1"
HTILDE2 = "Htilde2"
SUP = "Sup"

_M_WEIGHTED = {M, HKM, HTILDE1}


@dataclass(frozen=True)
class NormKind:
    """A norm selection: tag, Reynolds number for weighted variants, and the
    Sobolev order for H^k variants."""

    tag: str
    reynolds: float = 1.0
    order: int = 0

    def __post_init__(self):
        if self.tag in _M_WEIGHTED and self.reynolds < 1.0:
            raise ValueError(f"{self.tag} norm requires reynolds >= 1")

    @classmethod
    def l2(cls):
        return cls(L2)

    @classmethod
    def m(cls, reynolds):
        return cls(M, reynolds=reynolds)

    @classmethod
    def hk(cls, order):
        return cls(HK, order=order)

    @classmethod
    def hk_m(cls, order, reynolds):
        return cls(HKM, reynolds=reynolds, order=order)

    @classmethod
    def j2(cls):
        return cls(J2)

    @classmethod
    def htilde1(cls, reynolds):
        return cls(HTILDE1, reynolds=reynolds)

    @classmethod
    def htilde2(cls):
        return cls(HTILDE2)

    @classmethod
    def sup(cls):
        return cls(SUP)


def _component_sq(f: VelocityField) -> np.ndarray:
    f = _require_spectral(f)
    return np.array([scalar_sq_norm(f.data[k], f.grid) for k in range(3)])


def l2_norm(f: VelocityField) -> float:
    return float(np.sqrt(_component_sq(f).sum()))


def m_norm(f: VelocityField, reynolds: float) -> float:
    """sqrt(||f1||^2 + R^2 ||f2||^2 + ||f3||^2)."""
    if reynolds < 1.0:
        raise ValueError(f"m-norm requires reynolds >= 1, got {reynolds}")
    c = _component_sq(f)
    return float(np.sqrt(c[0] + reynolds ** 2 * c[1] + c[2]))


def _second_derivative_terms(f: VelocityField) -> list:
    """The four selected second derivatives as coefficient arrays (3,n1,n3,n2)."""
    f = _require_spectral(f)
    g = f.grid
    dy = f.data @ g.D1.T
    return [
        -(g.K1 ** 2) * f.data,      # d^2/dx1^2
        1j * g.K1 * dy,             # d^2/dx1 dx2
        1j * g.K3 * dy,             # d^2/dx2 dx3
        -(g.K3 ** 2) * f.data,      # d^2/dx3^2
    ]


def j2_seminorm(f: VelocityField) -> float:
    """Second-derivative seminorm omitting the pure wall-normal term.

    Exactly four contributions: x1x1, x1x2, x2x3, x3x3.
    """
    f = _require_spectral(f)
    g = f.grid
    total = 0.0
    for term in _second_derivative_terms(f):
        total += sum(scalar_sq_norm(term[k], g) for k in range(3))
    return float(np.sqrt(total))


def first_derivatives_sq(f: VelocityField, weighted: bool = False,
                         reynolds: float = 1.0) -> float:
    """sum_k ||df/dx_k||^2 (optionally with (1, R^2, 1) component weights)."""
    f = _require_spectral(f)
    g = f.grid
    cw = np.array([1.0, reynolds ** 2, 1.0]) if weighted else np.ones(3)
    total = 0.0
    for term in (1j * g.K1 * f.data, f.data @ g.D1.T, 1j * g.K3 * f.data):
        total += sum(cw[k] * scalar_sq_norm(term[k], g) for k in range(3))
    return float(total)


def h_tilde_norms(f: VelocityField, reynolds: float) -> tuple:
    """The pair (weighted, unweighted) augmented norms.

    Both share sum_k ||df/dx_k||^2 plus the selected-second-derivative
    seminorm; the first adds the m-norm square, the second the L2 square.
    Coincide at R = 1; the weighted one dominates for R > 1.
    """
    if reynolds < 1.0:
        raise ValueError(f"weighted norm requires reynolds >= 1, got {reynolds}")
    common = first_derivatives_sq(f) + j2_seminorm(f) ** 2
    h1 = np.sqrt(m_norm(f, reynolds) ** 2 + common)
    h2 = np.sqrt(l2_norm(f) ** 2 + common)
    return float(h1), float(h2)


def hk_norm(f: VelocityField, order: int, weighted: bool = False,
            reynolds: float = 1.0) -> float:
    """Sobolev norm: sum over all multi-indices |alpha| <= order of squared
    derivative norms; the weighted variant applies (1, R^2, 1) component
    weights to every term."""
    f = _require_spectral(f)
    g = f.grid
    if order < 0:
        raise ValueError("order must be >= 0")
    if g.n2 < order + 4:
        raise ValueError(f"grid under-resolved for order {order}: need n2 >= {order + 4}")
    if weighted and reynolds < 1.0:
        raise ValueError("weighted Sobolev norm requires reynolds >= 1")
    dpow = [np.eye(g.n2)]
    for _ in range(order):
        dpow.append(g.D1 @ dpow[-1])
    cw = np.array([1.0, reynolds ** 2, 1.0]) if weighted else np.ones(3)
    total = 0.0
    for a1 in range(order + 1):
        for a2 in range(order + 1 - a1):
            for a3 in range(order + 1 - a1 - a2):
                term = (1j * g.K1) ** a1 * (1j * g.K3) ** a3 * (f.data @ dpow[a2].T)
                total += sum(cw[k] * scalar_sq_norm(term[k], g) for k in range(3))
    return float(np.sqrt(total))


def _oversampled_physical(f: VelocityField, factor: int = 2) -> np.ndarray:
    f = _require_spectral(f)
    g = f.grid
    data = f.data
    n1p = g.n1 * factor if g.n1 > 1 else 1
    n3p = g.n3 * factor if g.n3 > 1 else 1
    padded = np.zeros((3, n1p, n3p, g.n2), complex)
    lo1, hi1 = (g.n1 + 1) // 2, g.n1 // 2
    lo3, hi3 = (g.n3 + 1) // 2, g.n3 // 2
    padded[:, :lo1, :lo3, :] = data[:, :lo1, :lo3, :]
    if hi1:
        padded[:, -hi1:, :lo3, :] = data[:, -hi1:, :lo3, :]
    if hi3:
        padded[:, :lo1, -hi3:, :] = data[:, :lo1, -hi3:, :]
    if hi1 and hi3:
        padded[:, -hi1:, -hi3:, :] = data[:, -hi1:, -hi3:, :]
    # odd target count puts a node on the midplane, where smooth no-slip
    # profiles typically peak
    padded = padded @ resample_matrix(g.n2, factor * g.n2 + 1).T
    phys = np.fft.ifft2(padded * (n1p * n3p), axes=(-3, -2))
    return phys.real


def sup_norm(f: VelocityField) -> float:
    """max over components of the largest |sample| on a 2x oversampled
    physical grid (discrete stand-in for the essential supremum)."""
    return float(np.abs(_oversampled_physical(f)).max())


def field_norm(f: VelocityField, kind: NormKind) -> float:
    """Dispatch a NormKind selection to the matching norm."""
    if kind.tag == L2:
        return l2_norm(f)
    if kind.tag == M:
        return m_norm(f, kind.reynolds)
    if kind.tag == J2:
        return j2_seminorm(f)
    if kind.tag == HTILDE1:
        return h_tilde_norms(f, kind.reynolds)[0]
    if kind.tag == HTILDE2:
        return h_tilde_norms(f, max(kind.reynolds, 1.0))[1]
    if kind.tag == HK:
        return hk_norm(f, kind.order)
    if kind.tag == HKM:
        return hk_norm(f, kind.order, weighted=True, reynolds=kind.reynolds)
    if kind.tag == SUP:
        return sup_norm(f)
    raise ValueError(f"unknown norm kind {kind.tag!r}")
