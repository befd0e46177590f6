"""Numerical substrate: quadrature rules, special functions, Nystrom grids.

Everything here is deliberately boring. The statistical modules lean on
these helpers for integrals over the unit interval and for discretising
integral kernels, so the accuracy targets are tighter than any single
caller strictly needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special


@dataclass(frozen=True)
class QuadratureRule:
    """A fixed quadrature rule on the open unit interval.

    Attributes
    ----------
    nodes : np.ndarray
        Strictly increasing abscissae in (0, 1).
    weights : np.ndarray
        Positive weights summing to one.
    order : int
        Number of nodes.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self) -> None:
        if self.nodes.shape != (self.order,) or self.weights.shape != (self.order,):
            raise ValueError("nodes/weights must both have length `order`")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if abs(float(self.weights.sum()) - 1.0) > 1e-12:
            raise ValueError("weights must sum to one on (0, 1)")

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        """Integrate a vectorised function over (0, 1)."""
        return float(np.sum(self.weights * f(self.nodes)))


@dataclass(frozen=True)
class KernelGrid:
    """A kernel evaluated on a quadrature grid.

    When ``weighted`` is true the entries are ``sqrt(w_i w_j) K(x_i, x_j)``,
    the symmetric discretisation whose matrix powers approximate iterated
    kernel traces.
    """

    grid: np.ndarray
    K: np.ndarray
    weighted: bool


def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule mapped from (-1, 1) to (0, 1).

    Exact for polynomials of degree up to ``2 * order - 1``.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    x, w = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(nodes=0.5 * (x + 1.0), weights=0.5 * w, order=order)


def normal_cdf(x):
    """Standard normal distribution function, accurate to ~1e-16."""
    return special.ndtr(x)


def normal_quantile(p):
    """Inverse of :func:`normal_cdf` on (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ValueError("normal_quantile requires p strictly inside (0, 1)")
    out = special.ndtri(p)
    return float(out) if out.ndim == 0 else out


def log_gamma(x):
    """Natural log of the gamma function for positive arguments."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("log_gamma requires positive arguments")
    out = special.gammaln(x)
    return float(out) if out.ndim == 0 else out


def beta_fn(a: float, b: float) -> float:
    """Beta function B(a, b) for positive a, b via the log-gamma identity."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("beta_fn requires positive arguments")
    return float(np.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b)))


def nystrom_discretize(
    kernel: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rule: QuadratureRule,
) -> KernelGrid:
    """Discretise an integral kernel on a quadrature grid.

    Returns the symmetrically weighted matrix ``A_ij = sqrt(w_i w_j)
    K(x_i, x_j)``. For a symmetric kernel, ``trace(A^k)`` approximates the
    diagonal integral of the k-fold iterated kernel, and the eigenvalues of
    ``A`` approximate those of the kernel's integral operator.

    The ``kernel`` callable must accept broadcast arrays.
    """
    x = rule.nodes
    sw = np.sqrt(rule.weights)
    K = kernel(x[:, None], x[None, :])
    return KernelGrid(grid=x, K=sw[:, None] * K * sw[None, :], weighted=True)
