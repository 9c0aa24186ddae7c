"""Orthonormal Legendre mode functions on a finite cell.

The longitudinal profile of the collective spin is expanded over rescaled
Legendre polynomials

    theta_n(z) = sqrt((2n+1)/L) * P_n(2z/L),    z in [-L/2, L/2],

which form an orthonormal set on the cell.  Adjacent orders couple through
the tridiagonal matrix Q built from the Legendre integral recurrence; that
matrix carries the spin-to-spin transfer coefficients of the light pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

# Slack for floating point z-grids whose endpoints land a few ulp outside
# the cell.
_EDGE_TOL = 1e-12


def legendre_poly(n: int, u):
    """P_n(u) by the stable three-term recurrence.

    Args:
        n: polynomial order, n >= 0.
        u: scalar or array of evaluation points (orthogonality interval [-1, 1]).

    Returns:
        P_n evaluated at u, same shape as u.
    """
    if n < 0:
        raise ValueError(f"Legendre order must be nonnegative, got {n}")
    u = np.asarray(u, dtype=float)
    p_prev = np.ones_like(u)
    if n == 0:
        return p_prev
    p_cur = u.copy()
    for k in range(1, n):
        p_prev, p_cur = p_cur, ((2 * k + 1) * u * p_cur - k * p_prev) / (k + 1)
    return p_cur


def theta(n: int, z, length: float = 1.0):
    """Orthonormal longitudinal mode function theta_n(z) on [-L/2, L/2].

    theta_n(z) = N_n * sqrt(2/L) * P_n(2z/L) with N_n = sqrt((2n+1)/2), so
    that integral theta_n theta_m dz = delta_nm.

    Raises:
        ValueError: for negative order or z outside the cell.
    """
    if n < 0:
        raise ValueError(f"mode order must be nonnegative, got {n}")
    if length <= 0:
        raise ValueError(f"cell length must be positive, got {length}")
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > length / 2 * (1 + _EDGE_TOL)):
        raise ValueError("z outside the cell [-L/2, L/2]")
    return np.sqrt((2 * n + 1) / length) * legendre_poly(n, 2 * z / length)


def q_matrix(order_max: int) -> np.ndarray:
    """Tridiagonal mode-coupling matrix over orders 0..order_max.

    Nonzero entries sit on the first off-diagonals only:

        Q[n, n-1] = 1/sqrt((2n-1)(2n+1))
        Q[n, n+1] = -1/sqrt((2n+1)(2n+3))

    so Q[n, n+1] = -Q[n+1, n].
    """
    if order_max < 1:
        raise ValueError(f"order_max must be >= 1, got {order_max}")
    q = np.zeros((order_max + 1, order_max + 1))
    for n in range(order_max + 1):
        if n >= 1:
            q[n, n - 1] = 1.0 / np.sqrt((2 * n - 1) * (2 * n + 1))
        if n < order_max:
            q[n, n + 1] = -1.0 / np.sqrt((2 * n + 1) * (2 * n + 3))
    return q


@dataclass(frozen=True)
class LegendreBasis:
    """Longitudinal mode basis {theta_0 .. theta_order_max} on a cell of length L."""

    length: float = 1.0
    order_max: int = 4

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"cell length must be positive, got {self.length}")
        if self.order_max < 0:
            raise ValueError(f"order_max must be nonnegative, got {self.order_max}")

    def theta(self, n: int, z):
        if n > self.order_max:
            raise ValueError(f"order {n} exceeds order_max {self.order_max}")
        return theta(n, z, self.length)

    def grid(self, n_points: int) -> np.ndarray:
        """Uniform z grid covering the cell, endpoints included."""
        return np.linspace(-self.length / 2, self.length / 2, n_points)

    def q_matrix(self) -> np.ndarray:
        return q_matrix(max(self.order_max, 1))


def project_onto_basis(samples, basis: LegendreBasis) -> np.ndarray:
    """Mode amplitudes integral theta_n(z) f(z) dz of a sampled profile.

    The samples must live on a uniform grid covering [-L/2, L/2] endpoints
    included; the integrals are evaluated by composite Simpson quadrature.
    Complex samples are projected componentwise, so the result is complex
    whenever the input is.

    Raises:
        ValueError: if the grid is too coarse to resolve theta_order_max
            (fewer than 4 points per polynomial oscillation).
    """
    samples = np.asarray(samples)
    if samples.ndim != 1:
        raise ValueError("samples must be a 1-D array over the z grid")
    # P_n has ~n/2 oscillations across the cell; demand 4 points for each.
    min_points = 4 * max(1, basis.order_max)
    if samples.size < min_points:
        raise ValueError(
            f"z grid too coarse: {samples.size} points, need >= {min_points} "
            f"to resolve theta_{basis.order_max}"
        )
    z = basis.grid(samples.size)
    amplitudes = np.empty(basis.order_max + 1, dtype=samples.dtype if np.iscomplexobj(samples) else float)
    for n in range(basis.order_max + 1):
        amplitudes[n] = simpson(basis.theta(n, z) * samples, x=z)
    return amplitudes
