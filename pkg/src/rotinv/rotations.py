"""Infinitesimal generators of the metric-preserving rotation group.

For a diagonal metric ``G`` the Lie algebra is spanned by one generator per
index pair ``a < b``, with matrix ``M[i, j] = delta(i,a) G[b,j] - delta(i,b)
G[a,j]``.  Each generator acts on a vector as ``u -> M u`` and on a rank-2
tensor as ``t -> M t + t M^T``; both actions preserve the symmetry tag.

Stacking the flattened action of every generator at a point gives the
determining matrix of the invariant problem; its rank at a generic point is
the orbit dimension, and the number of functionally independent invariants is
the number of coordinates minus that rank.  That difference is the counting
oracle everything else in this package is checked against.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .systems import (
    MetricSignature,
    SystemSpec,
    TensorSymmetry,
    TensorSystem,
    _triangle_indices,
    random_system,
)

#: Relative singular-value cutoff for numerical rank decisions.
DEFAULT_RANK_TOL = 1e-10

#: Tolerance on |R^T G R - G| for accepting a finite group element.
FORM_PRESERVATION_TOL = 1e-12


@dataclass(frozen=True)
class Generator:
    """Basis element of the rotation algebra for one index pair ``a < b``."""

    a: int
    b: int
    matrix: np.ndarray

    def __repr__(self):
        return f"Generator(a={self.a}, b={self.b})"


def generators(n: int, metric: MetricSignature) -> list[Generator]:
    """All ``n(n-1)/2`` algebra generators, ordered by index pair."""
    if metric.n != n:
        raise ValueError(f"metric length {metric.n} does not match dimension {n}")
    g = metric.array
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n))
            m[a, b] = g[b]
            m[b, a] = -g[a]
            m.setflags(write=False)
            out.append(Generator(a, b, m))
    return out


@dataclass(frozen=True)
class GroupElement:
    """Finite transformation preserving the quadratic form of the metric."""

    matrix: np.ndarray
    metric: MetricSignature

    def __post_init__(self):
        R = np.asarray(self.matrix, dtype=float)
        G = self.metric.matrix
        defect = np.max(np.abs(R.T @ G @ R - G))
        scale = max(1.0, float(np.max(np.abs(R))) ** 2)
        if defect > FORM_PRESERVATION_TOL * scale:
            raise ValueError(f"matrix does not preserve the metric form (defect {defect:.3e})")
        frozen = R.copy()
        frozen.setflags(write=False)
        object.__setattr__(self, "matrix", frozen)

    def apply(self, system: TensorSystem) -> TensorSystem:
        if system.metric != self.metric:
            raise ValueError("group element and system metrics differ")
        return system.transform(self.matrix)


def exponentiate(
    combination: Sequence[tuple[Generator, float]],
    t: float,
    metric: MetricSignature,
) -> GroupElement:
    """Finite group element ``exp(t * sum(c_i M_i))``.

    Uses the scaling-and-squaring matrix exponential; the result preserves
    the quadratic form by construction because every generator ``M``
    satisfies ``M^T G + G M = 0``.
    """
    A = np.zeros((metric.n, metric.n))
    for gen, coeff in combination:
        A = A + float(coeff) * gen.matrix
    return GroupElement(scipy.linalg.expm(t * A), metric)


def random_group_element(
    n: int,
    metric: MetricSignature,
    rng: np.random.Generator,
    t_range: tuple[float, float] = (0.0, 2.0),
) -> GroupElement:
    """Exponential of a random unit-norm combination of generators.

    Unit-norm coefficients keep boost rapidities moderate in indefinite
    metrics, so form preservation holds to ``1e-12`` in double precision.
    """
    gens = generators(n, metric)
    coeffs = rng.normal(size=len(gens))
    norm = np.linalg.norm(coeffs)
    if norm > 0:
        coeffs = coeffs / norm
    t = rng.uniform(*t_range)
    return exponentiate(list(zip(gens, coeffs)), t, metric=metric)


def generator_action(gen: Generator, system: TensorSystem) -> np.ndarray:
    """Flattened infinitesimal change of a system under one generator."""
    n = system.n
    if gen.matrix.shape != (n, n):
        raise ValueError("generator and system dimensions differ")
    m = gen.matrix
    parts = [m @ v for v in system.vectors.values()]
    for symmetry, mat in system.tensors.values():
        tangent = m @ mat + mat @ m.T
        if symmetry is TensorSymmetry.GENERAL:
            parts.append(tangent.ravel())
        else:
            rows, cols = _triangle_indices(
                n, strict=symmetry is TensorSymmetry.ANTISYMMETRIC
            )
            parts.append(tangent[rows, cols])
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def determining_matrix(system: TensorSystem) -> np.ndarray:
    """One row per generator: the flattened action at this point.

    Shape ``(n(n-1)/2, variable_count)``; its numerical rank at a generic
    point is the orbit dimension.
    """
    n = system.n
    gens = generators(n, system.metric)
    stack = np.stack([g.matrix for g in gens])  # (G, n, n)
    blocks = []
    for v in system.vectors.values():
        blocks.append(stack @ v)  # (G, n)
    for symmetry, mat in system.tensors.values():
        tangents = stack @ mat + mat @ stack.transpose(0, 2, 1)  # (G, n, n)
        if symmetry is TensorSymmetry.GENERAL:
            blocks.append(tangents.reshape(len(gens), -1))
        else:
            rows, cols = _triangle_indices(
                n, strict=symmetry is TensorSymmetry.ANTISYMMETRIC
            )
            blocks.append(tangents[:, rows, cols])
    if not blocks:
        return np.zeros((len(gens), 0))
    return np.concatenate(blocks, axis=1)


def numerical_rank(matrix: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    """Singular values above ``tol * s_max * max(shape)`` count toward rank."""
    arr = np.asarray(matrix, dtype=float)
    if arr.size == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0] * max(arr.shape)))


def generic_rank(
    spec: SystemSpec,
    trials: int = 20,
    seed: int = 0,
    tol: float = DEFAULT_RANK_TOL,
) -> int:
    """Max determining-matrix rank over random sample points.

    Taking the maximum guards against accidentally non-generic samples; with
    coordinates uniform on ``[-1, 1]`` the generic stratum has full measure.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        system = random_system(spec, rng)
        best = max(best, numerical_rank(determining_matrix(system), tol))
    return best


def count_invariants(
    spec: SystemSpec,
    trials: int = 20,
    seed: int = 0,
    tol: float = DEFAULT_RANK_TOL,
) -> int:
    """Functionally independent invariants: variables minus generic rank."""
    return spec.variable_count() - generic_rank(spec, trials=trials, seed=seed, tol=tol)
