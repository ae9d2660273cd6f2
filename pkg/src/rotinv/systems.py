"""Vectors, rank-2 tensors, metrics, and their flat coordinate representation.

A :class:`TensorSystem` is a concrete point: named vectors and named rank-2
tensors with numeric components, living in an ``n``-dimensional space equipped
with a diagonal ``+1/-1`` metric.  A :class:`SystemSpec` is the abstract shape
of such a point (dimension, metric, and how many objects of each symmetry
type), which is all that invariant counting needs.

Flattening maps a system bijectively onto a coordinate vector: vectors first,
then tensors, each in insertion order; a symmetric tensor contributes its
upper triangle including the diagonal (``n(n+1)/2`` coordinates), an
antisymmetric tensor its strict upper triangle (``n(n-1)/2``), and a general
tensor all ``n**2`` entries row-major.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np


class TensorSymmetry(Enum):
    """Symmetry tag of a rank-2 tensor."""

    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"
    GENERAL = "general"

    def component_count(self, n: int) -> int:
        if self is TensorSymmetry.SYMMETRIC:
            return n * (n + 1) // 2
        if self is TensorSymmetry.ANTISYMMETRIC:
            return n * (n - 1) // 2
        return n * n


@dataclass(frozen=True)
class MetricSignature:
    """Diagonal bilinear form with entries ``+1`` or ``-1``.

    ``euclidean(n)`` gives the all-plus form preserved by ordinary rotations;
    ``minkowski(n)`` gives ``(+1, -1, ..., -1)``, preserved by the Lorentz
    group.
    """

    diag: tuple[int, ...]

    def __post_init__(self):
        if len(self.diag) == 0:
            raise ValueError("metric signature must not be empty")
        if any(entry not in (1, -1) for entry in self.diag):
            raise ValueError(f"metric entries must be +1 or -1, got {self.diag}")
        object.__setattr__(self, "diag", tuple(int(e) for e in self.diag))

    @classmethod
    def euclidean(cls, n: int) -> "MetricSignature":
        return cls((1,) * n)

    @classmethod
    def minkowski(cls, n: int) -> "MetricSignature":
        return cls((1,) + (-1,) * (n - 1))

    @classmethod
    def from_string(cls, signs: str) -> "MetricSignature":
        """Parse a sign string such as ``"++++"`` or ``"+---"``."""
        table = {"+": 1, "-": -1}
        try:
            return cls(tuple(table[c] for c in signs))
        except KeyError:
            raise ValueError(f"metric string may only contain '+'/'-', got {signs!r}")

    def to_string(self) -> str:
        return "".join("+" if e == 1 else "-" for e in self.diag)

    @property
    def n(self) -> int:
        return len(self.diag)

    @property
    def array(self) -> np.ndarray:
        """The diagonal as a read-only float vector."""
        return _metric_array(self.diag)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.array)


@lru_cache(maxsize=None)
def _metric_array(diag: tuple[int, ...]) -> np.ndarray:
    arr = np.array(diag, dtype=float)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _triangle_indices(n: int, strict: bool):
    rows, cols = np.triu_indices(n, k=1 if strict else 0)
    return rows, cols


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=float)
    if out is arr:
        out = out.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SystemSpec:
    """Shape of a tensor system: dimension, metric, and object counts."""

    n: int
    metric: MetricSignature
    n_vectors: int = 0
    n_symmetric: int = 0
    n_antisymmetric: int = 0
    n_general: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")
        if self.metric.n != self.n:
            raise ValueError(
                f"metric length {self.metric.n} does not match dimension {self.n}"
            )
        for name in ("n_vectors", "n_symmetric", "n_antisymmetric", "n_general"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.n_vectors, self.n_symmetric, self.n_antisymmetric, self.n_general)

    def variable_count(self) -> int:
        n = self.n
        return (
            self.n_vectors * n
            + self.n_symmetric * n * (n + 1) // 2
            + self.n_antisymmetric * n * (n - 1) // 2
            + self.n_general * n * n
        )

    def default_names(self) -> tuple[tuple[str, ...], tuple[tuple[str, TensorSymmetry], ...]]:
        """Canonical object names: vectors ``u1..``, then tensors ``s1..``,
        ``a1..``, ``t1..`` in flatten order."""
        vectors = tuple(f"u{i + 1}" for i in range(self.n_vectors))
        tensors = (
            tuple((f"s{i + 1}", TensorSymmetry.SYMMETRIC) for i in range(self.n_symmetric))
            + tuple((f"a{i + 1}", TensorSymmetry.ANTISYMMETRIC) for i in range(self.n_antisymmetric))
            + tuple((f"t{i + 1}", TensorSymmetry.GENERAL) for i in range(self.n_general))
        )
        return vectors, tensors

    def to_dict(self) -> dict:
        return {
            "dimension": self.n,
            "metric": list(self.metric.diag),
            "vectors": self.n_vectors,
            "symmetric": self.n_symmetric,
            "antisymmetric": self.n_antisymmetric,
            "general": self.n_general,
        }


class TensorSystem:
    """A named collection of vectors and rank-2 tensors at a point.

    Components are validated on construction: a tensor tagged symmetric must
    equal its transpose exactly, an antisymmetric one must equal minus its
    transpose with a zero diagonal.  Repairs are never applied silently.
    All arrays are stored read-only; instances are safe to share.
    """

    def __init__(
        self,
        n: int,
        metric: MetricSignature,
        vectors: Mapping[str, np.ndarray] | None = None,
        tensors: Mapping[str, tuple[TensorSymmetry, np.ndarray]] | None = None,
    ):
        if n < 2:
            raise ValueError(f"dimension must be >= 2, got {n}")
        if metric.n != n:
            raise ValueError(f"metric length {metric.n} does not match dimension {n}")
        self.n = n
        self.metric = metric
        self.vectors: dict[str, np.ndarray] = {}
        self.tensors: dict[str, tuple[TensorSymmetry, np.ndarray]] = {}
        for name, vec in (vectors or {}).items():
            arr = _freeze(np.asarray(vec))
            if arr.shape != (n,):
                raise ValueError(f"vector {name!r} has shape {arr.shape}, expected ({n},)")
            self._check_name(name)
            self.vectors[name] = arr
        for name, (symmetry, mat) in (tensors or {}).items():
            arr = _freeze(np.asarray(mat))
            if arr.shape != (n, n):
                raise ValueError(f"tensor {name!r} has shape {arr.shape}, expected ({n}, {n})")
            self._check_name(name)
            if symmetry is TensorSymmetry.SYMMETRIC and not np.array_equal(arr, arr.T):
                raise ValueError(f"tensor {name!r} is tagged symmetric but is not")
            if symmetry is TensorSymmetry.ANTISYMMETRIC and not (
                np.array_equal(arr, -arr.T) and not np.any(np.diagonal(arr))
            ):
                raise ValueError(f"tensor {name!r} is tagged antisymmetric but is not")
            self.tensors[name] = (symmetry, arr)

    def _check_name(self, name: str):
        if name in self.vectors or name in self.tensors:
            raise ValueError(f"duplicate object name {name!r}")

    @property
    def spec(self) -> SystemSpec:
        counts = {sym: 0 for sym in TensorSymmetry}
        for symmetry, _ in self.tensors.values():
            counts[symmetry] += 1
        return SystemSpec(
            self.n,
            self.metric,
            n_vectors=len(self.vectors),
            n_symmetric=counts[TensorSymmetry.SYMMETRIC],
            n_antisymmetric=counts[TensorSymmetry.ANTISYMMETRIC],
            n_general=counts[TensorSymmetry.GENERAL],
        )

    def variable_count(self) -> int:
        return self.spec.variable_count()

    def flatten(self) -> np.ndarray:
        """Coordinate vector of the system; inverse of :func:`unflatten`."""
        parts = list(self.vectors.values())
        for symmetry, mat in self.tensors.values():
            if symmetry is TensorSymmetry.GENERAL:
                parts.append(mat.ravel())
            else:
                rows, cols = _triangle_indices(
                    self.n, strict=symmetry is TensorSymmetry.ANTISYMMETRIC
                )
                parts.append(mat[rows, cols])
        if not parts:
            return np.zeros(0)
        return np.concatenate(parts)

    def transform(self, rotation: np.ndarray) -> "TensorSystem":
        """Apply a group element: ``u -> R u`` and ``t -> R t R^T``."""
        R = np.asarray(rotation, dtype=float)
        vectors = {name: R @ v for name, v in self.vectors.items()}
        tensors = {}
        for name, (symmetry, mat) in self.tensors.items():
            out = R @ mat @ R.T
            # exact-symmetry construction checks would trip on rounding noise
            if symmetry is TensorSymmetry.SYMMETRIC:
                out = (out + out.T) / 2.0
            elif symmetry is TensorSymmetry.ANTISYMMETRIC:
                out = (out - out.T) / 2.0
            tensors[name] = (symmetry, out)
        return TensorSystem(self.n, self.metric, vectors, tensors)

    def to_dict(self) -> dict:
        return {
            "dimension": self.n,
            "metric": list(self.metric.diag),
            "vectors": {name: v.tolist() for name, v in self.vectors.items()},
            "tensors": {
                name: {"symmetry": sym.value, "components": mat.tolist()}
                for name, (sym, mat) in self.tensors.items()
            },
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "TensorSystem":
        try:
            n = int(doc["dimension"])
            metric = MetricSignature(tuple(doc.get("metric", [1] * n)))
            vectors = {str(k): np.asarray(v, dtype=float) for k, v in doc.get("vectors", {}).items()}
            tensors = {}
            for name, entry in doc.get("tensors", {}).items():
                symmetry = TensorSymmetry(entry["symmetry"])
                tensors[str(name)] = (symmetry, np.asarray(entry["components"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed tensor system document: {exc}") from exc
        return cls(n, metric, vectors, tensors)

    @classmethod
    def from_json(cls, text: str) -> "TensorSystem":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ValueError("tensor system document must be a JSON object")
        return cls.from_dict(doc)

    def __repr__(self):
        return (
            f"TensorSystem(n={self.n}, metric={self.metric.to_string()!r}, "
            f"vectors={list(self.vectors)}, tensors={list(self.tensors)})"
        )


def decompose(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a square matrix into ``w = v + v^T`` and ``y = v - v^T``.

    The factor-2 convention is deliberate: the original components are
    recovered as ``v = (w + y) / 2``.
    """
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"decompose needs a square matrix, got shape {arr.shape}")
    return arr + arr.T, arr - arr.T


def unflatten(
    shape: SystemSpec | TensorSystem,
    coordinates: np.ndarray,
    names: Sequence[str] | None = None,
) -> TensorSystem:
    """Rebuild a system from flat coordinates.

    ``shape`` may be a :class:`SystemSpec` (objects get canonical names unless
    ``names`` lists one per object, in flatten order) or an existing
    :class:`TensorSystem` whose names and symmetry tags are reused.
    """
    coords = np.asarray(coordinates, dtype=float).ravel()
    if isinstance(shape, TensorSystem):
        vec_names: Iterable[str] = shape.vectors.keys()
        tensor_slots = [(name, sym) for name, (sym, _) in shape.tensors.items()]
        n, metric = shape.n, shape.metric
        expected = shape.variable_count()
    else:
        default_vecs, default_tensors = shape.default_names()
        vec_names = default_vecs
        tensor_slots = list(default_tensors)
        n, metric = shape.n, shape.metric
        expected = shape.variable_count()
        if names is not None:
            total = len(default_vecs) + len(tensor_slots)
            if len(names) != total:
                raise ValueError(f"expected {total} names, got {len(names)}")
            vec_names = names[: len(default_vecs)]
            tensor_slots = [
                (names[len(default_vecs) + i], sym) for i, (_, sym) in enumerate(tensor_slots)
            ]
    if coords.size != expected:
        raise ValueError(f"expected {expected} coordinates, got {coords.size}")

    pos = 0
    vectors = {}
    for name in vec_names:
        vectors[name] = coords[pos : pos + n]
        pos += n
    tensors = {}
    for name, symmetry in tensor_slots:
        count = symmetry.component_count(n)
        block = coords[pos : pos + count]
        pos += count
        mat = np.zeros((n, n))
        if symmetry is TensorSymmetry.GENERAL:
            mat = block.reshape(n, n)
        elif symmetry is TensorSymmetry.SYMMETRIC:
            rows, cols = _triangle_indices(n, strict=False)
            mat[rows, cols] = block
            mat[cols, rows] = block
        else:
            rows, cols = _triangle_indices(n, strict=True)
            mat[rows, cols] = block
            mat[cols, rows] = -block
        tensors[name] = (symmetry, mat)
    return TensorSystem(n, metric, vectors, tensors)


def random_system(
    spec: SystemSpec,
    seed: int | np.random.Generator = 0,
    names: Sequence[str] | None = None,
) -> TensorSystem:
    """Draw a system with flat coordinates i.i.d. uniform on ``[-1, 1]``.

    Deterministic for a fixed integer seed; pass a ``numpy.random.Generator``
    to draw several systems from one stream.
    """
    rng = np.random.default_rng(seed)
    coords = rng.uniform(-1.0, 1.0, size=spec.variable_count())
    return unflatten(spec, coords, names=names)
