"""Checkers for the interchange, bound, and membership assertions.

Each checker evaluates both sides of one identity or inequality through two
genuinely distinct numerical routes and reports the residual in a
:class:`CheckReport`.  Identities whose two routes are algebraically the
same finite sum (Dirac and generic-measure functionals, the vector/scalar
derivative consistency) carry a tight tolerance of 1e-12; identities where
one side is a quadrature approximation of an exact action (derivative
functionals) default to 1e-9 at 64 nodes and shrink <= 0.5, and their
residuals decay geometrically in the node count.

Sup norms over the domain are approximated from below on deterministic
boundary grids; for inequality right-hand sides the grid is augmented with
the functional's own nodes so the triangle-inequality bound cannot fail
through grid placement alone.  Checks are independent pure computations and
may run concurrently; reports are merged by canonical ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cauchy import cauchy_derivative, derivative_rule, order_bound, schwarz_violation
from .domain import Polydisc, as_multi_index, torus_nodes
from .family import HoloFamily
from .functional import MeasureFunctional
from .measure import FiniteMeasureSpace

__all__ = [
    "CheckReport",
    "linearize",
    "linearization_residual",
    "fubini_residual",
    "derivative_consistency",
    "diff_under_integral",
    "norm_bound_check",
    "span_residual",
    "span_monotonicity",
    "sup_grid",
    "OrderProfile",
    "derivative_profile",
    "telescoping_residual",
    "order_bound_check",
    "schwarz_check",
    "TOL_EXACT",
    "TOL_QUADRATURE",
    "CONTOUR_SHRINK",
]

#: identities whose two sides are the same finite sum up to reassociation
TOL_EXACT = 1e-12
#: identities with a quadrature side, at 64 nodes and sampling shrink <= 0.5
TOL_QUADRATURE = 1e-9
#: contour placement inside a family domain, keeping strict analyticity margin
CONTOUR_SHRINK = 0.95


@dataclass
class CheckReport:
    """Outcome of a single check; ``passed`` holds iff residual <= tol."""

    name: str
    family: str
    functional: str
    params: dict = field(default_factory=dict)
    lhs: complex | float = 0.0
    rhs: complex | float = 0.0
    residual: float = 0.0
    tol: float = 0.0
    passed: bool = True

    @classmethod
    def build(cls, name, family, functional, lhs, rhs, residual, tol, **params):
        residual = float(residual)
        tol = float(tol)
        return cls(name=name, family=family, functional=functional, params=params,
                   lhs=lhs, rhs=rhs, residual=residual, tol=tol,
                   passed=bool(residual <= tol))

    def describe(self) -> str:
        state = "pass" if self.passed else "FAIL"
        return (f"{state} {self.name} family={self.family} functional={self.functional} "
                f"residual={self.residual:.3e} tol={self.tol:.1e}")


def linearize(phi: MeasureFunctional, fam: HoloFamily, space: FiniteMeasureSpace) -> np.ndarray:
    """The representing vector (phi(f(., t_i)))_i of the slicewise action.

    Equals the quadrature realization of the vector-valued integral
    sum_k w_k F(z_k); both groupings of the double sum are the same
    computation here.
    """
    return phi.apply_slices(fam, space)


def linearization_residual(phi, fam, space, duals, p: float = 2.0,
                           tol: float = TOL_EXACT) -> CheckReport:
    """|<linearize(phi), h> - phi(z -> <F(z), h>)| maximized over dual vectors.

    Verifies the defining identity of the representing vector; both sides
    rearrange the same finite sum, so residuals are pure roundoff.
    """
    vec = linearize(phi, fam, space)
    residual = 0.0
    lhs = rhs = 0.0 + 0.0j
    for h in duals:
        left = space.pairing(vec, h)
        right = phi.apply_dual(fam, h, space)
        if abs(left - right) >= residual:
            residual = abs(left - right)
            lhs, rhs = left, right
    return CheckReport.build(
        "linearization", fam.label, phi.label, lhs, rhs, residual, tol,
        p=p, duals=len(list(duals)),
    )


def fubini_residual(phi, fam, h, space, p: float, tol: float | None = None) -> CheckReport:
    """Interchange check: integrate-then-apply versus apply-then-integrate.

    The left side pairs the ideal slicewise action of the functional
    (closed forms for Dirac and derivative semantics) with the dual vector
    h; the right side applies the functional's quadrature measure to
    z -> <F(z), h>.  For derivative functionals the residual is the
    quadrature error of the measure realization and decays geometrically in
    its node count; for Dirac and generic measures the two sides coincide
    up to reassociation.
    """
    if tol is None:
        tol = TOL_QUADRATURE if phi.meaning == "derivative" else TOL_EXACT
    h = np.asarray(h, dtype=complex)
    lhs = space.pairing(phi.ideal_slices(fam, space), h)
    rhs = phi.apply_dual(fam, h, space)
    return CheckReport.build(
        "fubini", fam.label, phi.label, lhs, rhs, abs(lhs - rhs), tol,
        p=p, alpha=list(phi.alpha) if phi.alpha else None,
    )


def derivative_consistency(fam, space, center, alpha, radii, n: int = 64,
                           p: float = 2.0, tol: float = 1e-10) -> CheckReport:
    """Vector-level Cauchy derivative of F versus the per-atom scalar route.

    lhs applies the derivative rule to the vectors F(w_k) in one batched
    product; rhs runs the same rule per atom slice.  Agreement in the
    weighted p-norm certifies that differentiating the vector function and
    differentiating each slice commute.
    """
    alpha = as_multi_index(alpha, fam.d)
    pts, weights = derivative_rule(center, alpha, radii, n)
    values = fam.eval(pts[:, None, :], space.params)
    vector_route = weights @ values
    scalar_route = np.array(
        [cauchy_derivative(fam.slice(t), center, alpha, radii, n) for t in space.params]
    )
    residual = space.lp_norm(vector_route - scalar_route, p)
    return CheckReport.build(
        "derivative_consistency", fam.label, "", space.lp_norm(vector_route, p),
        space.lp_norm(scalar_route, p), residual, tol, p=p, alpha=list(alpha), n=n,
    )


def diff_under_integral(fam, h, space, center, alpha, radii, n: int = 64,
                        tol: float = 1e-10) -> CheckReport:
    """D^alpha of z -> <F(z), h> at ``center`` versus pairing the slice derivatives.

    The left side differentiates the composed scalar map by boundary
    quadrature; the right side pairs the closed-form per-atom derivatives
    with h.  The residual is the quadrature error and decays geometrically
    in n.
    """
    alpha = as_multi_index(alpha, fam.d)
    h = np.asarray(h, dtype=complex)
    hw = h * space.weights

    def composed(z):
        vals = fam.eval(z[..., None, :], space.params)
        return vals @ hw

    lhs = cauchy_derivative(composed, center, alpha, radii, n)
    rhs = complex(fam.deriv_vector(center, space, alpha) @ hw)
    return CheckReport.build(
        "diff_under_integral", fam.label, "", lhs, rhs, abs(lhs - rhs), tol,
        alpha=list(alpha), n=n,
    )


def sup_grid(domain: Polydisc, density: int, shrink: float) -> np.ndarray:
    """Deterministic boundary grid used for sup estimates over the domain."""
    return torus_nodes(domain.shrunk(shrink), max(int(density), 4)).grid()


def norm_bound_check(phi, fam, space, p: float, grid_density: int = 32,
                     grid_shrink: float = 0.9, slack: float = 1e-9) -> CheckReport:
    """||linearize(phi)||_p <= total_variation(phi) * sup_z ||F(z)||_p.

    The sup is taken over a deterministic boundary grid augmented with the
    functional's own nodes; with the nodes included the bound is a finite
    triangle inequality, while the grid part only raises the right side
    toward the true sup.  Passing means lhs <= rhs * (1 + slack).
    """
    vec = linearize(phi, fam, space)
    lhs = space.lp_norm(vec, p)
    candidates = np.concatenate([sup_grid(fam.domain, grid_density, grid_shrink),
                                 phi.nodes])
    values = fam.eval(candidates[:, None, :], space.params)
    if math.isinf(p):
        support = space.weights > 0
        norms = np.max(np.abs(values[:, support]), axis=1) if support.any() \
            else np.zeros(values.shape[0])
    else:
        norms = np.sum(np.abs(values) ** p * space.weights, axis=1) ** (1.0 / p)
    rhs = phi.total_variation * float(np.max(norms))
    residual = max(0.0, lhs - rhs)
    return CheckReport.build(
        "norm_bound", fam.label, phi.label, lhs, rhs, residual, slack * rhs,
        p=p, grid=grid_density,
    )


def span_residual(phi, fam, space, sample_points, tol: float = 1e-8) -> CheckReport:
    """Weighted-L2 distance of linearize(phi) from span{F(z_k)} by least squares.

    Atom weights define the inner product for every p; rank-deficient
    sample sets fall back to the minimum-norm solution.  The distance is
    nonincreasing under enlarging a nested sample set.
    """
    sample_points = [np.atleast_1d(np.asarray(z, dtype=complex)) for z in sample_points]
    if not sample_points:
        raise ValueError("need at least one sample point")
    vec = linearize(phi, fam, space)
    sqrt_w = np.sqrt(space.weights)
    columns = np.stack([fam.vector(z, space) for z in sample_points], axis=1)
    a = columns * sqrt_w[:, None]
    b = vec * sqrt_w
    coeff, *_ = np.linalg.lstsq(a, b, rcond=None)
    distance = float(np.linalg.norm(a @ coeff - b))
    return CheckReport.build(
        "span", fam.label, phi.label, distance, 0.0, distance, tol,
        samples=len(sample_points),
    )


def span_monotonicity(phi, fam, space, sample_points, more_points,
                      tol: float = 1e-12) -> CheckReport:
    """Distance with the enlarged nested sample set never exceeds the original."""
    base = span_residual(phi, fam, space, sample_points, tol=np.inf)
    grown = span_residual(phi, fam, space, list(sample_points) + list(more_points),
                          tol=np.inf)
    excess = max(0.0, grown.residual - base.residual)
    return CheckReport.build(
        "span_monotone", fam.label, phi.label, base.residual, grown.residual,
        excess, tol * (1.0 + base.residual), samples=len(list(sample_points)),
    )


@dataclass
class OrderProfile:
    """Finiteness profile of one derivative order over a region grid.

    ``profile[i]`` is the per-atom sup over the grid of |D^n f(z, t_i)|;
    ``sup_integral`` is the sup over the grid of the mu-weighted absolute
    integral of the derivative slice.
    """

    order: int
    profile: np.ndarray
    sup_integral: float

    @property
    def finite(self) -> bool:
        return bool(np.all(np.isfinite(self.profile)) and math.isfinite(self.sup_integral))


def derivative_profile(fam, space, max_order: int, region_grid, contour_radii,
                       n: int = 64) -> list[OrderProfile]:
    """Per-order sup profiles of |D^n_z f| over a grid, for univariate domains.

    For each order up to ``max_order`` the derivative is computed by
    boundary quadrature on a contour of ``contour_radii`` about each grid
    point, so every contour must stay inside the family domain.
    """
    if fam.d != 1:
        raise ValueError("derivative profiles are defined for univariate domains only")
    grid = [np.atleast_1d(np.asarray(z, dtype=complex)) for z in region_grid]
    if not grid:
        raise ValueError("region grid must be nonempty")
    out = []
    for order in range(max_order + 1):
        mags = np.empty((len(grid), space.natoms))
        for gi, a in enumerate(grid):
            pts, weights = derivative_rule(a, (order,), contour_radii, n)
            values = fam.eval(pts[:, None, :], space.params)
            mags[gi] = np.abs(weights @ values)
        out.append(OrderProfile(
            order=order,
            profile=mags.max(axis=0),
            sup_integral=float(np.max(mags @ space.weights)),
        ))
    return out


def telescoping_residual(fam, space, n_pairs: int = 200, sample_shrink: float = 0.5,
                         outer_shrink: float = CONTOUR_SHRINK, seed: int = 0,
                         sup_density: int = 64, tol_scale: float = 1e-12) -> CheckReport:
    """Multivariate increment bound via one Schwarz step per variable.

    For sampled pairs z, a in the sample_shrink polydisc, checks
    ``max_i |f(z, t_i) - f(a, t_i)| <= 2 B sum_j |z_j - a_j| / r_j`` where B
    is the largest slice sup over the outer_shrink domain and r_j is the
    per-variable margin (outer_shrink - sample_shrink) * radius_j.
    """
    if not sample_shrink < outer_shrink:
        raise ValueError("sampling region must sit strictly inside the sup region")
    rng = np.random.default_rng(seed)
    margin = (outer_shrink - sample_shrink) * fam.domain.radius
    bound = max(fam.slice_supnorm(t, sup_density, outer_shrink) for t in space.params)

    def sample(count):
        radial = np.sqrt(rng.random((count, fam.d)))
        angle = rng.random((count, fam.d)) * 2.0 * np.pi
        return fam.domain.center + sample_shrink * fam.domain.radius * radial * np.exp(1j * angle)

    z = sample(n_pairs)
    a = sample(n_pairs)
    fz = fam.eval(z[:, None, :], space.params)
    fa = fam.eval(a[:, None, :], space.params)
    lhs = np.max(np.abs(fz - fa), axis=1)
    rhs = 2.0 * bound * np.sum(np.abs(z - a) / margin, axis=1)
    worst = float(np.max(lhs - rhs))
    return CheckReport.build(
        "telescoping", fam.label, "", worst, 0.0, max(0.0, worst),
        tol_scale * (1.0 + bound), pairs=n_pairs,
    )


def order_bound_check(fam, space, degree: int = 40, shrink: float = 0.5,
                      n_samples: int = 200, seed: int = 0,
                      tol_scale: float = 1e-12) -> CheckReport:
    """Taylor-majorant domination: |f(z, t_i)| <= u_i + tail on sampled z.

    The center and contour follow :func:`holofubini.cauchy.order_bound`
    defaults; sample points fill the closed shrink-polydisc.  The reported
    tail always comes from the geometric coefficient fit.
    """
    ob = order_bound(fam, space, degree=degree, shrink=shrink)
    contour = fam.domain.radius * CONTOUR_SHRINK
    rng = np.random.default_rng(seed)
    radial = np.sqrt(rng.random((n_samples, fam.d)))
    angle = rng.random((n_samples, fam.d)) * 2.0 * np.pi
    z = fam.domain.center + shrink * contour * radial * np.exp(1j * angle)
    values = np.abs(fam.eval(z[:, None, :], space.params))
    excess = float(np.max(values - ob.u[None, :]))
    tol = tol_scale * (1.0 + float(np.max(ob.u)))
    return CheckReport.build(
        "order_bound", fam.label, "", excess, ob.tail, max(0.0, excess - ob.tail),
        tol, degree=degree, shrink=shrink, tail_method=ob.tail_method,
    )


def schwarz_check(fam, space, samples: int = 1000, seed: int = 0,
                  shrink: float = CONTOUR_SHRINK, tol: float = 1e-12) -> CheckReport:
    """Schwarz increment bound on every atom slice of a univariate family."""
    if fam.d != 1:
        raise ValueError("the Schwarz check applies to univariate domains only")
    center = complex(fam.domain.center[0])
    radius = float(fam.domain.radius[0]) * shrink
    worst = max(
        schwarz_violation(fam.slice(t), center, radius, samples=samples, seed=seed)
        for t in space.params
    )
    return CheckReport.build(
        "schwarz", fam.label, "", worst, 0.0, max(0.0, worst), tol,
        samples=samples, slices=space.natoms,
    )
