"""Functionals on bounded holomorphic functions, realized as finite measures.

Every bounded-pointwise-continuous functional used here is represented by a
finite complex quadrature measure on the domain: a list of nodes z_k and
weights w_k with application phi(g) = sum_k w_k g(z_k).  The total variation
sum |w_k| is a computable upper bound for the functional norm on the space
of bounded holomorphic functions, and every inequality checked downstream
uses it in that role.

Point evaluations (Dirac measures) and Cauchy-derivative functionals are
built-in constructors; the derivative constructor shares its quadrature rule
with :func:`holofubini.cauchy.cauchy_derivative`, so applying the functional
to a slice reproduces that value up to summation order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .cauchy import derivative_rule
from .domain import as_multi_index
from .family import HoloFamily, _param
from .measure import FiniteMeasureSpace

__all__ = [
    "MeasureFunctional",
    "dirac",
    "derivative_functional",
    "random_measure",
    "functional_from_json",
]


@dataclass(frozen=True, eq=False)
class MeasureFunctional:
    """A finite complex measure sum_k w_k delta_{z_k} acting on slices.

    ``meaning`` records what the measure discretizes: "dirac" and
    "derivative" carry exact semantics (point evaluation, D^alpha at a
    center), "measure" is a generic finite measure whose own finite sum is
    its meaning.  Checkers use this to evaluate the ideal action through
    closed forms where one exists.
    """

    nodes: np.ndarray    # shape (k, d)
    weights: np.ndarray  # shape (k,)
    label: str
    meaning: str = "measure"
    center: np.ndarray | None = None
    alpha: tuple[int, ...] | None = None
    radii: np.ndarray | None = None

    def __post_init__(self):
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=complex)).copy()
        weights = np.atleast_1d(np.asarray(self.weights, dtype=complex)).copy()
        if nodes.shape[0] != weights.shape[0]:
            raise ValueError("need one weight per node")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def d(self) -> int:
        return self.nodes.shape[1]

    @property
    def total_variation(self) -> float:
        """sum_k |w_k|: an upper bound for the functional norm."""
        return float(np.sum(np.abs(self.weights)))

    def apply(self, g) -> complex:
        """phi(g) = sum_k w_k g(z_k) for a batched callable g."""
        vals = np.asarray(g(self.nodes), dtype=complex)
        return complex(np.sum(self.weights * vals))

    def _check_domain(self, fam: HoloFamily) -> None:
        if self.d != fam.d:
            raise ValueError("functional and family dimensions differ")
        if not fam.domain.contains_all(self.nodes, 1.0):
            raise ValueError(
                f"a node of {self.label!r} lies outside the domain of {fam.label!r}"
            )

    def apply_slice(self, fam: HoloFamily, t) -> complex:
        """phi(f(., t)) for one atom parameter."""
        self._check_domain(fam)
        vals = fam.eval(self.nodes, complex(_param(t)))
        return complex(np.sum(self.weights * vals))

    def apply_slices(self, fam: HoloFamily, space: FiniteMeasureSpace) -> np.ndarray:
        """The vector (phi(f(., t_i)))_i over all atoms, in one batched pass."""
        self._check_domain(fam)
        vals = fam.eval(self.nodes[:, None, :], space.params)
        return self.weights @ vals

    def apply_dual(self, fam: HoloFamily, h, space: FiniteMeasureSpace) -> complex:
        """phi(z -> <F(z), h>): weight each node's pairing with the dual vector."""
        self._check_domain(fam)
        h = np.asarray(h, dtype=complex)
        vals = fam.eval(self.nodes[:, None, :], space.params)
        pairings = vals @ (h * space.weights)
        return complex(np.sum(self.weights * pairings))

    def ideal_slices(self, fam: HoloFamily, space: FiniteMeasureSpace) -> np.ndarray:
        """The exact action per atom, through closed forms where semantics exist.

        Dirac measures evaluate f(z0, t_i) directly, derivative measures use
        the family's closed-form D^alpha; generic measures fall back to the
        finite sum, which is already their exact meaning.
        """
        self._check_domain(fam)
        if self.meaning == "dirac":
            return fam.vector(self.nodes[0], space)
        if self.meaning == "derivative":
            return fam.deriv_vector(self.center, space, self.alpha)
        return self.apply_slices(fam, space)

    def scaled(self, factor) -> "MeasureFunctional":
        return MeasureFunctional(
            nodes=self.nodes, weights=self.weights * factor,
            label=f"{self.label}*{factor}", meaning="measure",
        )

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "nodes": [[[c.real, c.imag] for c in node] for node in self.nodes],
            "weights": [[w.real, w.imag] for w in self.weights],
        }

    def __repr__(self):
        return f"<MeasureFunctional {self.label!r} nodes={self.nodes.shape[0]} d={self.d}>"


def dirac(z0, label: str | None = None) -> MeasureFunctional:
    """Point evaluation delta_{z0}: one node, weight 1."""
    z0 = np.atleast_1d(np.asarray(z0, dtype=complex))
    if label is None:
        label = f"dirac:{_format_point(z0)}"
    return MeasureFunctional(nodes=z0[None, :], weights=np.ones(1), label=label,
                             meaning="dirac")


def derivative_functional(center, alpha, radii, n: int = 64,
                          label: str | None = None) -> MeasureFunctional:
    """The functional g -> D^alpha g(center), as its boundary quadrature measure.

    Shares node placement and weights with :func:`cauchy_derivative`;
    requires n > 2 max(alpha) + 2 so the discretization resolves the
    requested order with margin.
    """
    center = np.atleast_1d(np.asarray(center, dtype=complex))
    alpha = as_multi_index(alpha, center.shape[0])
    if n <= 2 * max(alpha) + 2:
        raise ValueError(
            f"node count {n} is too small for derivative order {max(alpha)}: "
            f"need n > {2 * max(alpha) + 2}"
        )
    pts, weights = derivative_rule(center, alpha, radii, n)
    if label is None:
        label = f"derivative:a={_format_point(center)},alpha={list(alpha)}"
    return MeasureFunctional(
        nodes=pts, weights=weights, label=label, meaning="derivative",
        center=center, alpha=alpha, radii=np.atleast_1d(np.asarray(radii, dtype=float)),
    )


def random_measure(disc, k: int = 8, shrink: float = 0.5, seed: int = 0,
                   label: str | None = None) -> MeasureFunctional:
    """A seeded k-node complex measure supported in the shrink-scaled polydisc."""
    rng = np.random.default_rng(seed)
    radial = np.sqrt(rng.random((k, disc.d)))
    angle = rng.random((k, disc.d)) * 2.0 * np.pi
    nodes = disc.center + shrink * disc.radius * radial * np.exp(1j * angle)
    weights = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    if label is None:
        label = f"random:{k}@seed{seed}"
    return MeasureFunctional(nodes=nodes, weights=weights, label=label)


def functional_from_json(doc) -> MeasureFunctional:
    """Load from {"label", "nodes", "weights"} or a named constructor document.

    Named constructors: {"dirac": {"z0": ...}} and
    {"derivative": {"center": ..., "alpha": [...], "radii": [...], "n": int}}.
    Node entries are [re, im] pairs (d = 1) or lists of pairs (d > 1).
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if "dirac" in doc:
        return dirac(_parse_node(doc["dirac"]["z0"]), label=doc.get("label"))
    if "derivative" in doc:
        params = doc["derivative"]
        return derivative_functional(
            _parse_node(params["center"]), params["alpha"], params["radii"],
            n=int(params.get("n", 64)), label=doc.get("label"),
        )
    nodes = np.array([_parse_node(nd) for nd in doc["nodes"]], dtype=complex)
    weights = np.array([_parse_scalar(w) for w in doc["weights"]], dtype=complex)
    return MeasureFunctional(nodes=nodes, weights=weights,
                             label=doc.get("label", "measure"))


def _parse_scalar(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def _parse_node(value) -> np.ndarray:
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], (list, tuple)):
        return np.array([_parse_scalar(v) for v in value], dtype=complex)
    return np.atleast_1d(np.asarray(_parse_scalar(value), dtype=complex))


def _format_point(z: np.ndarray) -> str:
    return ",".join(f"{c.real:g}{c.imag:+g}j" for c in z)
