"""Finite atomic measure spaces and the discretized Lp machinery.

The measure space is a finite list of weighted atoms, each carrying one
complex parameter t.  Sigma is the power set, so measurability is vacuous,
and the space is automatically semi-finite (every atom has finite weight).
Vectors in the discretized Lp space are plain complex numpy arrays with one
entry per atom; ``lp_norm`` and ``pairing`` validate lengths on use.

The pairing is bilinear (no conjugation): it discretizes the integral
``sum_i g_i h_i mu_i`` of the canonical duality between Lp and Lq.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Atom",
    "FiniteMeasureSpace",
    "LpVector",
    "dual_exponent",
    "space_from_json",
    "space_preset",
]

#: A vector of the discretized Lp space: complex ndarray, one entry per atom.
LpVector = np.ndarray


@dataclass(frozen=True)
class Atom:
    param: complex
    weight: float


def dual_exponent(p: float) -> float:
    """q with 1/p + 1/q = 1; maps 1 <-> inf and fixes 2."""
    p = float(p)
    if p < 1.0:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True, eq=False)
class FiniteMeasureSpace:
    """Weighted atoms (t_i, mu_i) hosting the discretized Lp norms and pairing."""

    params: np.ndarray   # complex, shape (k,)
    weights: np.ndarray  # nonnegative float, shape (k,)

    def __init__(self, params, weights):
        params = np.atleast_1d(np.asarray(params, dtype=complex)).copy()
        weights = np.atleast_1d(np.asarray(weights, dtype=float)).copy()
        if params.ndim != 1 or weights.shape != params.shape:
            raise ValueError("params and weights must be 1-d arrays of equal length")
        if params.shape[0] < 1:
            raise ValueError("a measure space needs at least one atom")
        if not np.all(weights >= 0):
            raise ValueError("atom weights must be nonnegative")
        params.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "weights", weights)

    @property
    def natoms(self) -> int:
        return self.params.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return tuple(Atom(complex(t), float(w)) for t, w in zip(self.params, self.weights))

    def _check_vector(self, g) -> np.ndarray:
        g = np.asarray(g, dtype=complex)
        if g.shape != (self.natoms,):
            raise ValueError(f"vector length {g.shape} does not match {self.natoms} atoms")
        return g

    def lp_norm(self, g, p: float) -> float:
        """Weighted p-norm; p = inf is the essential sup (zero-weight atoms ignored)."""
        g = self._check_vector(g)
        p = float(p)
        if p < 1.0:
            raise ValueError(f"exponent must satisfy p >= 1, got {p}")
        if math.isinf(p):
            support = self.weights > 0
            if not support.any():
                return 0.0
            return float(np.max(np.abs(g[support])))
        return float(np.sum(np.abs(g) ** p * self.weights) ** (1.0 / p))

    def pairing(self, g, h) -> complex:
        """Bilinear duality sum_i g_i h_i mu_i (no complex conjugation)."""
        g = self._check_vector(g)
        h = self._check_vector(h)
        return complex(np.sum(g * h * self.weights))

    def dual_witness(self, g, p: float) -> np.ndarray:
        """An h with ||h||_q <= 1 and pairing(g, h) = ||g||_p (norming witness)."""
        g = self._check_vector(g)
        p = float(p)
        norm = self.lp_norm(g, p)
        h = np.zeros_like(g)
        if norm == 0.0:
            return h
        support = self.weights > 0
        if math.isinf(p):
            idx = int(np.argmax(np.where(support, np.abs(g), -1.0)))
            h[idx] = np.conj(g[idx]) / (np.abs(g[idx]) * self.weights[idx])
            return h
        nz = support & (g != 0)
        h[nz] = np.abs(g[nz]) ** (p - 2.0) * np.conj(g[nz]) / norm ** (p - 1.0)
        return h


def space_from_json(doc) -> FiniteMeasureSpace:
    """Load a space from {"atoms": [{"param": [re, im], "weight": w}, ...]}."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    atoms = doc["atoms"]
    params = [_parse_complex(a["param"]) for a in atoms]
    weights = [float(a["weight"]) for a in atoms]
    return FiniteMeasureSpace(params, weights)


def _parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex entries must be [re, im], got {value}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def space_preset(name: str) -> FiniteMeasureSpace:
    """Named presets: "uniform-k" (weights 1/k) and "geometric-k" (weights 2^-i).

    Both place the k atom parameters equally spaced in [-1, 1].
    """
    try:
        kind, count = name.rsplit("-", 1)
        k = int(count)
    except ValueError:
        raise ValueError(f"unknown space preset {name!r}") from None
    if k < 1:
        raise ValueError(f"preset atom count must be positive, got {k}")
    params = np.linspace(-1.0, 1.0, k) if k > 1 else np.array([0.0])
    if kind == "uniform":
        weights = np.full(k, 1.0 / k)
    elif kind == "geometric":
        weights = 0.5 ** np.arange(1, k + 1)
    else:
        raise ValueError(f"unknown space preset {name!r}")
    return FiniteMeasureSpace(params, weights)
