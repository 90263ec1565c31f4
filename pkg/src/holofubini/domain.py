"""Polydisc geometry and distinguished-boundary (torus) quadrature rules.

All values are immutable after construction and every operation is pure,
so shared instances are safe under unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Polydisc",
    "TorusQuadrature",
    "torus_nodes",
    "as_multi_index",
    "multi_factorial",
]


def _as_complex_vector(z, d: int | None = None) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.ndim != 1:
        raise ValueError(f"expected a complex vector, got shape {arr.shape}")
    if d is not None and arr.shape[0] != d:
        raise ValueError(f"dimension mismatch: expected length {d}, got {arr.shape[0]}")
    return arr


def as_multi_index(alpha, d: int | None = None) -> tuple[int, ...]:
    """Coerce ``alpha`` to a tuple of nonnegative ints, optionally of length d."""
    if np.isscalar(alpha):
        alpha = (alpha,)
    out = tuple(int(a) for a in alpha)
    if any(a < 0 for a in out) or any(a != b for a, b in zip(out, alpha)):
        raise ValueError(f"multi-index entries must be nonnegative integers, got {alpha}")
    if d is not None and len(out) != d:
        raise ValueError(f"multi-index length {len(out)} does not match dimension {d}")
    return out


def multi_factorial(alpha) -> float:
    """alpha! = prod_j alpha_j! for a multi-index."""
    return float(math.prod(math.factorial(a) for a in as_multi_index(alpha)))


@dataclass(frozen=True, eq=False)
class Polydisc:
    """Open product of discs { z : |z_j - center_j| < radius_j for all j }.

    Parameters
    ----------
    center : complex vector of length d
    radius : positive real vector of length d
    """

    center: np.ndarray
    radius: np.ndarray

    def __init__(self, center, radius):
        center = _as_complex_vector(center).copy()
        radius = np.atleast_1d(np.asarray(radius, dtype=float)).copy()
        if radius.shape != center.shape:
            raise ValueError("center and radius must have the same length")
        if center.shape[0] < 1:
            raise ValueError("polydisc dimension must be at least 1")
        if not np.all(radius > 0):
            raise ValueError("all radii must be positive")
        center.setflags(write=False)
        radius.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", radius)

    @property
    def d(self) -> int:
        return self.center.shape[0]

    def contains(self, z, shrink: float = 1.0) -> bool:
        """True iff |z_j - center_j| < shrink * radius_j for all j (open set)."""
        shrink = float(shrink)
        if not 0.0 < shrink <= 1.0:
            raise ValueError(f"shrink must lie in (0, 1], got {shrink}")
        z = _as_complex_vector(z, self.d)
        return bool(np.all(np.abs(z - self.center) < shrink * self.radius))

    def contains_all(self, points, shrink: float = 1.0) -> bool:
        """Vectorized membership test for an array of points with last axis d."""
        shrink = float(shrink)
        if not 0.0 < shrink <= 1.0:
            raise ValueError(f"shrink must lie in (0, 1], got {shrink}")
        pts = np.asarray(points, dtype=complex)
        if pts.shape[-1] != self.d:
            raise ValueError(f"dimension mismatch: expected last axis {self.d}")
        return bool(np.all(np.abs(pts - self.center) < shrink * self.radius))

    def shrunk(self, factor: float) -> "Polydisc":
        """The concentric polydisc with radii scaled by ``factor``."""
        if not 0.0 < factor <= 1.0:
            raise ValueError(f"shrink factor must lie in (0, 1], got {factor}")
        return Polydisc(self.center, self.radius * factor)


@dataclass(frozen=True, eq=False)
class TorusQuadrature:
    """Tensor-product trapezoid rule on the distinguished boundary of a polydisc.

    ``nodes[j, k] = center_j + radius_j * exp(2 pi i k / n)`` and
    ``dw[j, k] = (2 pi i / n) * (nodes[j, k] - center_j)`` is the discretized
    complex line element, so that ``(2 pi i)^{-d} * sum f(w) * prod_j dw_j``
    reproduces the trapezoidal discretization of the iterated contour
    integral.  The induced Cauchy-normalized rule (the plain node mean in
    each variable) annihilates ``(w_j - center_j)^m`` exactly for 0 < |m| < n.
    """

    disc: Polydisc
    n: int
    nodes: np.ndarray  # shape (d, n)
    dw: np.ndarray     # shape (d, n)

    def __init__(self, disc: Polydisc, n: int):
        n = int(n)
        if n < 4:
            raise ValueError(f"node count per variable must be at least 4, got {n}")
        theta = 2.0 * np.pi * np.arange(n) / n
        ring = np.exp(1j * theta)
        nodes = disc.center[:, None] + disc.radius[:, None] * ring[None, :]
        dw = (2j * np.pi / n) * (nodes - disc.center[:, None])
        nodes.setflags(write=False)
        dw.setflags(write=False)
        object.__setattr__(self, "disc", disc)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "dw", dw)

    @property
    def d(self) -> int:
        return self.disc.d

    def grid(self) -> np.ndarray:
        """All n^d tensor-product boundary points, flattened to shape (n^d, d)."""
        mesh = np.meshgrid(*self.nodes, indexing="ij")
        return np.stack(mesh, axis=-1).reshape(-1, self.d)


def torus_nodes(disc: Polydisc, n: int) -> TorusQuadrature:
    """Build the n-per-variable distinguished-boundary rule for ``disc``."""
    return TorusQuadrature(disc, n)
