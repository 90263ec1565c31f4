"""Cauchy quadrature on polydiscs: evaluation, derivatives, Taylor tables,
the Schwarz-lemma inequality, and Taylor-majorant order bounds.

A "slice" is any callable accepting a complex array whose last axis indexes
the d variables and returning values with the leading (batch) shape; it must
be analytic on the closed integration polydisc.  All rules discretize the
iterated contour integrals by the tensor-product trapezoid rule on the
distinguished boundary, which converges geometrically for analytic slices.

Everything here is pure and deterministic; node sums are single numpy
reductions, so results are reproducible bit-for-bit for a fixed input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .domain import Polydisc, as_multi_index, multi_factorial, torus_nodes
from .family import HoloFamily
from .measure import FiniteMeasureSpace

__all__ = [
    "cauchy_eval",
    "derivative_rule",
    "cauchy_derivative",
    "TaylorTable",
    "taylor_coefficients",
    "schwarz_violation",
    "OrderBound",
    "order_bound",
    "TailEstimateError",
]

MAX_TAYLOR_DEGREE = 128


def cauchy_eval(f, disc: Polydisc, z, n: int = 64) -> complex:
    """Evaluate f at z inside ``disc`` from distinguished-boundary samples.

    Discretizes the d-fold Cauchy integral with n nodes per variable:
    ``(1/n^d) * sum_k f(w_k) * prod_j (w_{j,k} - a_j) / (w_{j,k} - z_j)``.
    The error is O(rho^n) with rho = max_j |z_j - a_j| / r_j < 1.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if not disc.contains(z, 1.0):
        raise ValueError("evaluation point must lie strictly inside the integration polydisc")
    quad = torus_nodes(disc, n)
    pts = quad.grid()
    kernel = np.prod((pts - disc.center) / (pts - z), axis=-1)
    vals = np.asarray(f(pts), dtype=complex)
    return complex(np.sum(vals * kernel) / quad.n ** disc.d)


def derivative_rule(center, alpha, radii, n: int = 64):
    """Quadrature nodes and weights realizing g -> D^alpha g(center).

    Returns ``(points, weights)`` with points of shape (n^d, d) on the
    distinguished boundary of the polydisc (center, radii) and weights
    ``alpha! * (1/n^d) * prod_j (w_j - a_j)^(-alpha_j)``, so that
    ``sum_k weights_k g(points_k)`` is the trapezoidal discretization of the
    Cauchy integral for the derivative.
    """
    center = np.atleast_1d(np.asarray(center, dtype=complex))
    alpha = as_multi_index(alpha, center.shape[0])
    disc = Polydisc(center, radii)
    if n <= max(alpha) + 1:
        raise ValueError(
            f"node count {n} is too small for derivative order {max(alpha)}"
        )
    quad = torus_nodes(disc, n)
    pts = quad.grid()
    weights = np.prod((pts - center) ** (-np.asarray(alpha)), axis=-1)
    weights = weights * (multi_factorial(alpha) / quad.n ** disc.d)
    return pts, weights


def cauchy_derivative(f, center, alpha, radii, n: int = 64) -> complex:
    """D^alpha f(center) by boundary quadrature.

    Exact (to rounding) for polynomial slices of per-variable degree below
    ``n - max(alpha)``; the alpha! factor multiplies after quadrature so the
    exactness class of the trapezoid rule is preserved.
    """
    pts, weights = derivative_rule(center, alpha, radii, n)
    vals = np.asarray(f(pts), dtype=complex)
    return complex(np.sum(weights * vals))


@dataclass(frozen=True, eq=False)
class TaylorTable:
    """Tensor of expansion coefficients c_m, 0 <= m_j <= degree, about ``center``."""

    coeffs: np.ndarray   # shape (degree+1,)*d
    center: np.ndarray   # shape (d,)
    radii: np.ndarray    # contour radii used, shape (d,)

    @property
    def d(self) -> int:
        return self.center.shape[0]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def coeff(self, m) -> complex:
        return complex(self.coeffs[as_multi_index(m, self.d)])


def _fft_coefficients(samples: np.ndarray, d: int, n: int, radii, degree: int) -> np.ndarray:
    # samples has shape (n,)*d + batch; returns (degree+1,)*d + batch
    hat = np.fft.fftn(samples, axes=tuple(range(d))) / n ** d
    sel = hat[(slice(0, degree + 1),) * d]
    scale = reduce(np.multiply.outer, [np.asarray(r) ** np.arange(degree + 1) for r in radii])
    return sel / scale.reshape(scale.shape + (1,) * (samples.ndim - d))


def taylor_coefficients(f, center, radii, degree: int, n: int | None = None) -> TaylorTable:
    """Coefficients c_m = D^m f(center) / m! via an FFT of boundary samples.

    Requires n > 2 * degree to keep aliasing out of the returned table; the
    default is the smallest admissible even count.  Exact for polynomial
    slices of per-variable degree <= degree.
    """
    center = np.atleast_1d(np.asarray(center, dtype=complex))
    degree = int(degree)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree > MAX_TAYLOR_DEGREE:
        raise ValueError(f"coefficient extraction is limited to degree {MAX_TAYLOR_DEGREE}")
    if n is None:
        n = max(2 * degree + 2, 4)
    if n <= 2 * degree:
        raise ValueError(f"node count {n} risks aliasing: need n > {2 * degree}")
    disc = Polydisc(center, radii)
    quad = torus_nodes(disc, n)
    mesh = np.meshgrid(*quad.nodes, indexing="ij")
    pts = np.stack(mesh, axis=-1)
    samples = np.asarray(f(pts), dtype=complex)
    coeffs = _fft_coefficients(samples, disc.d, quad.n, disc.radius, degree)
    return TaylorTable(coeffs=coeffs, center=center, radii=np.asarray(disc.radius))


def schwarz_violation(f, center, radius: float, samples: int = 1000, seed: int = 0,
                      sup_density: int = 2048) -> float:
    """Max over sampled z of |f(z)-f(a)| - (2/r) ||f||_inf |z-a| on Ball(a; r).

    A univariate (d = 1) check; the sup norm is estimated on a dense
    boundary grid (sufficient by the maximum principle) together with the
    sample values themselves.  Nonpositive return values certify the bound.
    """
    center = complex(center)
    radius = float(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    rng = np.random.default_rng(seed)
    u = rng.random(samples)
    theta = rng.random(samples) * 2.0 * np.pi
    z = center + radius * np.sqrt(u) * np.exp(1j * theta)

    fa = complex(np.ravel(f(np.array([[center]])))[0])
    fz = np.ravel(f(z[:, None]))
    ring = center + radius * np.exp(2j * np.pi * np.arange(sup_density) / sup_density)
    sup = max(float(np.max(np.abs(f(ring[:, None])))), float(np.max(np.abs(fz))), abs(fa))
    bound = (2.0 / radius) * sup * np.abs(z - center)
    return float(np.max(np.abs(fz - fa) - bound))


class TailEstimateError(ArithmeticError):
    """Raised when coefficient decay inside the table is not geometric."""


@dataclass(frozen=True, eq=False)
class OrderBound:
    """Componentwise majorant: |f(z, t_i)| <= u_i + tail on the rho-polydisc.

    ``tail`` comes from a geometric fit |c_m| <= C q^|m| on the last third of
    the computed coefficient degrees; it is an implementation choice, not a
    rigorous remainder, and is flagged as such wherever reported.
    """

    u: np.ndarray
    tail: float
    fit_rate: float
    fit_scale: float
    degree: int
    shrink: float

    tail_method = "geometric-fit"


def _tail_from_degrees(shell: np.ndarray, degree: int, shrink: float, d: int) -> tuple[float, float, float]:
    # shell[s] = sum of radius-scaled coefficient magnitudes of total degree s <= degree
    window = np.arange(int(math.ceil(2 * (degree + 1) / 3)), degree + 1)
    if window.size == 0:
        return 0.0, 0.0, 0.0
    values = shell[window]
    floor = max(1e-14 * float(shell.max(initial=0.0)), 1e-250)
    keep = values > floor
    if not keep.any():
        return 0.0, 0.0, 0.0
    s = window[keep].astype(float)
    logs = np.log(values[keep])
    if s.size == 1:
        raise TailEstimateError(
            "cannot certify geometric coefficient decay from a single nonzero degree"
        )
    slope, intercept = np.polyfit(s, logs, 1)
    q = float(np.exp(slope))
    scale = float(np.exp(intercept))
    if q >= 1.0 or q * shrink >= 1.0:
        raise TailEstimateError(
            f"coefficient decay slower than geometric within the table (fit rate {q:.6g})"
        )
    tail = scale * (q * shrink) ** (degree + 1) / (1.0 - q * shrink) ** d
    return tail, q, scale


def order_bound(fam: HoloFamily, space: FiniteMeasureSpace, center=None, radii=None,
                degree: int = 40, shrink: float = 0.5, n: int | None = None) -> OrderBound:
    """Per-atom Taylor majorant u_i = sum_{m} |c_m(t_i)| (shrink * r)^m plus a tail.

    ``center``/``radii`` default to the family domain center with radii
    scaled to keep the extraction contour strictly inside the domain.  The
    tail is the maximum over atoms of the per-atom geometric-fit estimate;
    it raises :class:`TailEstimateError` instead of guessing when the
    computed coefficients do not decay geometrically.
    """
    if not 0.0 < shrink <= 1.0:
        raise ValueError(f"shrink must lie in (0, 1], got {shrink}")
    if center is None:
        center = fam.domain.center
    center = np.atleast_1d(np.asarray(center, dtype=complex))
    if radii is None:
        radii = fam.domain.radius * 0.95
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    degree = int(degree)
    if degree > MAX_TAYLOR_DEGREE:
        raise ValueError(f"coefficient computation is limited to degree {MAX_TAYLOR_DEGREE}")
    if n is None:
        n = max(2 * degree + 2, 4)
    if n <= 2 * degree:
        raise ValueError(f"node count {n} risks aliasing: need n > {2 * degree}")

    d = center.shape[0]
    quad = torus_nodes(Polydisc(center, radii), n)
    mesh = np.meshgrid(*quad.nodes, indexing="ij")
    pts = np.stack(mesh, axis=-1)
    samples = np.asarray(fam.eval(pts[..., None, :], space.params), dtype=complex)
    coeffs = _fft_coefficients(samples, d, quad.n, radii, degree)

    # radius-scaled magnitudes: gamma_m = |c_m| * prod_j r_j^{m_j}
    rad_scale = reduce(np.multiply.outer, [radii[j] ** np.arange(degree + 1) for j in range(d)])
    gamma = np.abs(coeffs) * rad_scale[..., None]
    rho_scale = reduce(np.multiply.outer,
                       [shrink ** np.arange(degree + 1) for _ in range(d)])
    u = np.sum(gamma * rho_scale[..., None], axis=tuple(range(d)))

    total_degree = sum(np.meshgrid(*[np.arange(degree + 1)] * d, indexing="ij"))
    tail = 0.0
    rate = 0.0
    scale = 0.0
    for i in range(space.natoms):
        shell = np.zeros(degree + 1)
        g = gamma[..., i]
        for s in range(degree + 1):
            shell[s] = float(g[total_degree == s].sum())
        t_i, q_i, c_i = _tail_from_degrees(shell, degree, shrink, d)
        if t_i > tail:
            tail, rate, scale = t_i, q_i, c_i
    return OrderBound(u=u, tail=tail, fit_rate=rate, fit_scale=scale,
                      degree=degree, shrink=shrink)
