"""Invariant expressions: trace words and vector sandwiches.

An expression is a contraction word over named slots of a
:class:`~rotinv.systems.TensorSystem`:

* ``TraceWord(t_1, ..., t_k)`` evaluates to ``trace(G t_1 G t_2 ... G t_k)``,
* ``Sandwich(u, (t_1, ..., t_k), v)`` evaluates to ``u^T G t_1 G ... t_k G v``
  (``u^T G v`` when the word is empty),

where ``G`` is the diagonal metric, inserted between every contracted index
pair.  A tensor slot may carry the ``squared`` modifier, in which case the
slot stands for ``t G t``; for an antisymmetric tensor this square is
symmetric, which is what lets antisymmetric problems reuse the symmetric
machinery.

Every expression built this way satisfies the determining equations: under
``u -> M u``, ``t -> M t + t M^T`` with ``M^T G + G M = 0``, each metric-scaled
factor ``G t`` changes by a commutator, so traces and sandwiches are unchanged.

Gradients are analytic, taken with respect to the flattened coordinates of
the system (a stored symmetric coordinate feeds two matrix entries, so it
receives both sensitivities; antisymmetric coordinates receive the signed
difference).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product
import re

import numpy as np

from . import kernels
from .systems import TensorSymmetry, TensorSystem, _triangle_indices


class SlotKind(Enum):
    VECTOR = "vector"
    TENSOR = "tensor"


@dataclass(frozen=True)
class SlotRef:
    """Reference to a named object of a system.

    ``squared`` is only meaningful for tensor slots and substitutes the
    metric square ``t G t`` for the tensor itself.
    """

    name: str
    kind: SlotKind
    squared: bool = False

    def __post_init__(self):
        if self.squared and self.kind is not SlotKind.TENSOR:
            raise ValueError("squared modifier applies only to tensor slots")

    @classmethod
    def vector(cls, name: str) -> "SlotRef":
        return cls(name, SlotKind.VECTOR)

    @classmethod
    def tensor(cls, name: str, squared: bool = False) -> "SlotRef":
        return cls(name, SlotKind.TENSOR, squared)


@dataclass(frozen=True)
class TraceWord:
    """Cyclic contraction of a nonempty word of tensor slots."""

    factors: tuple[SlotRef, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a trace word needs at least one factor")
        if any(f.kind is not SlotKind.TENSOR for f in factors):
            raise ValueError("trace word factors must be tensor slots")
        object.__setattr__(self, "factors", factors)

    def render(self) -> str:
        return f"tr({_render_word(self.factors)})"


@dataclass(frozen=True)
class Sandwich:
    """A (possibly empty) tensor word contracted between two vectors."""

    left: SlotRef
    factors: tuple[SlotRef, ...]
    right: SlotRef

    def __post_init__(self):
        if self.left.kind is not SlotKind.VECTOR or self.right.kind is not SlotKind.VECTOR:
            raise ValueError("sandwich endpoints must be vector slots")
        factors = tuple(self.factors)
        if any(f.kind is not SlotKind.TENSOR for f in factors):
            raise ValueError("sandwich factors must be tensor slots")
        object.__setattr__(self, "factors", factors)

    def render(self) -> str:
        if not self.factors:
            return f"{self.left.name} . {self.right.name}"
        return f"{self.left.name} . {_render_word(self.factors)} . {self.right.name}"


InvariantExpr = TraceWord | Sandwich


def _render_word(factors) -> str:
    chunks = []
    i = 0
    while i < len(factors):
        j = i
        while j < len(factors) and factors[j] == factors[i]:
            j += 1
        atom = f"sq({factors[i].name})" if factors[i].squared else factors[i].name
        chunks.append(atom if j - i == 1 else f"{atom}^{j - i}")
        i = j
    return " ".join(chunks)


_FACTOR_RE = re.compile(r"(?:sq\((?P<sq>[A-Za-z_]\w*)\)|(?P<name>[A-Za-z_]\w*))(?:\^(?P<pow>\d+))?$")


def _parse_word(text: str) -> tuple[SlotRef, ...]:
    factors: list[SlotRef] = []
    for token in text.split():
        m = _FACTOR_RE.match(token)
        if not m:
            raise ValueError(f"cannot parse factor {token!r}")
        name = m.group("sq") or m.group("name")
        power = int(m.group("pow") or 1)
        if power < 1:
            raise ValueError(f"factor power must be >= 1 in {token!r}")
        factors.extend([SlotRef.tensor(name, squared=bool(m.group("sq")))] * power)
    return tuple(factors)


def parse_expression(text: str) -> InvariantExpr:
    """Inverse of ``render``: accepts ``tr(...)`` words and ``u . ... . v``."""
    s = text.strip()
    if s.startswith("tr(") and s.endswith(")"):
        factors = _parse_word(s[3:-1])
        if not factors:
            raise ValueError(f"empty trace word in {text!r}")
        return TraceWord(factors)
    parts = s.split(" . ")
    if len(parts) == 2:
        left, right = (p.strip() for p in parts)
        return Sandwich(SlotRef.vector(left), (), SlotRef.vector(right))
    if len(parts) == 3:
        left, word, right = (p.strip() for p in parts)
        return Sandwich(SlotRef.vector(left), _parse_word(word), SlotRef.vector(right))
    raise ValueError(f"cannot parse expression {text!r}")


def render(expr: InvariantExpr) -> str:
    return expr.render()


class SystemTable:
    """Per-point evaluation context shared by a batch of expressions.

    Stores the metric-scaled tensor stack, vector views, flat offsets, and the
    index arrays that fold a full matrix gradient onto stored coordinates.
    """

    def __init__(self, system: TensorSystem):
        self.system = system
        self.n = system.n
        self.g = np.ascontiguousarray(system.metric.array)
        self.n_variables = system.variable_count()
        self.vector_index: dict[str, int] = {}
        self.vector_offset: list[int] = []
        self.vectors: list[np.ndarray] = []
        offset = 0
        for name, vec in system.vectors.items():
            self.vector_index[name] = len(self.vectors)
            self.vectors.append(np.ascontiguousarray(vec))
            self.vector_offset.append(offset)
            offset += self.n
        self.tensor_index: dict[str, int] = {}
        self.tensor_offset: list[int] = []
        self.tensor_symmetry: list[TensorSymmetry] = []
        hmats = []
        for name, (symmetry, mat) in system.tensors.items():
            self.tensor_index[name] = len(hmats)
            hmats.append(self.g[:, None] * mat)
            self.tensor_offset.append(offset)
            self.tensor_symmetry.append(symmetry)
            offset += symmetry.component_count(self.n)
        self.hmats = (
            np.ascontiguousarray(np.stack(hmats))
            if hmats
            else np.zeros((0, self.n, self.n))
        )

    def _compile(self, expr: InvariantExpr):
        try:
            if isinstance(expr, TraceWord):
                head = tail = -1
                factors = expr.factors
            elif isinstance(expr, Sandwich):
                head = self.vector_index[expr.left.name]
                tail = self.vector_index[expr.right.name]
                factors = expr.factors
            else:
                raise TypeError(f"not an invariant expression: {expr!r}")
            idx: list[int] = []
            for f in factors:
                ti = self.tensor_index[f.name]
                idx.extend((ti, ti) if f.squared else (ti,))
        except KeyError as exc:
            raise KeyError(f"expression slot {exc.args[0]!r} not found in system") from exc
        return head, tail, np.asarray(idx, dtype=np.intp)

    def value(self, expr: InvariantExpr) -> float:
        head, tail, idx = self._compile(expr)
        h = self.hmats[idx]
        if head < 0:
            return kernels.word_value(h)
        return kernels.sandwich_value(self.vectors[head], h, self.g, self.vectors[tail])

    def gradient(self, expr: InvariantExpr) -> np.ndarray:
        out = np.zeros(self.n_variables)
        head, tail, idx = self._compile(expr)
        h = self.hmats[idx]
        if head < 0:
            dt = kernels.word_grads(h, self.g)
        else:
            du, dv, dt = kernels.sandwich_grads(
                self.vectors[head], h, self.g, self.vectors[tail]
            )
            o = self.vector_offset[head]
            out[o : o + self.n] += du
            o = self.vector_offset[tail]
            out[o : o + self.n] += dv
        for ti in np.unique(idx):
            full = dt[idx == ti].sum(axis=0)
            folded = _fold(full, self.tensor_symmetry[ti], self.n)
            o = self.tensor_offset[ti]
            out[o : o + folded.size] += folded
        return out


def _fold(full: np.ndarray, symmetry: TensorSymmetry, n: int) -> np.ndarray:
    if symmetry is TensorSymmetry.GENERAL:
        return full.ravel()
    if symmetry is TensorSymmetry.SYMMETRIC:
        rows, cols = _triangle_indices(n, strict=False)
        folded = full[rows, cols].copy()
        off = rows != cols
        folded[off] += full[cols[off], rows[off]]
        return folded
    rows, cols = _triangle_indices(n, strict=True)
    return full[rows, cols] - full[cols, rows]


def evaluate(expr: InvariantExpr, system: TensorSystem) -> float:
    """Scalar value of the contraction word at a point."""
    return SystemTable(system).value(expr)


def gradient(expr: InvariantExpr, system: TensorSystem) -> np.ndarray:
    """Analytic gradient with respect to the flattened coordinates."""
    return SystemTable(system).gradient(expr)


def evaluate_many(exprs, system: TensorSystem) -> np.ndarray:
    table = SystemTable(system)
    return np.array([table.value(e) for e in exprs])


def gradient_matrix(exprs, system: TensorSystem) -> np.ndarray:
    """Rows are the gradients of each expression at the point."""
    table = SystemTable(system)
    if not exprs:
        return np.zeros((0, table.n_variables))
    return np.stack([table.gradient(e) for e in exprs])


# ---------------------------------------------------------------------------
# basis constructors


def _power_traces(tensor: SlotRef, n: int) -> list[TraceWord]:
    return [TraceWord((tensor,) * a) for a in range(1, n + 1)]


def _pair_traces(first: SlotRef, second: SlotRef, n: int) -> list[TraceWord]:
    # two-block words first^b second^(a-b), total length a = 2..n, b = 1..a-1
    out = []
    for a in range(2, n + 1):
        for b in range(1, a):
            out.append(TraceWord((first,) * b + (second,) * (a - b)))
    return out


def _vector_products(vectors: tuple[str, ...]) -> list[Sandwich]:
    out = []
    for i in range(len(vectors)):
        for j in range(i, len(vectors)):
            out.append(Sandwich(SlotRef.vector(vectors[i]), (), SlotRef.vector(vectors[j])))
    return out


def theorem1_basis(
    n: int,
    vectors: tuple[str, str] = ("u1", "u2"),
    tensors: tuple[str, str] = ("s1", "s2"),
) -> list[InvariantExpr]:
    """Generators for two vectors and two symmetric tensors.

    Emits, in order: power traces of each tensor up to length ``n``, two-block
    pair traces, sandwiches of each vector around powers of the first tensor
    (lengths 0..n-1), and all vector inner products.  The cross inner product
    ``u1 . u2`` is included; without it the set cannot reach the full
    invariant count.  Sandwiches around the second tensor turn out not to be
    needed here (the pruning oracle confirms the set spans without them).
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    w1, w2 = (SlotRef.tensor(t) for t in tensors)
    exprs: list[InvariantExpr] = []
    exprs += _power_traces(w1, n)
    exprs += _power_traces(w2, n)
    exprs += _pair_traces(w1, w2, n)
    for u in vectors:
        uref = SlotRef.vector(u)
        exprs += [Sandwich(uref, (w1,) * (a - 1), uref) for a in range(1, n + 1)]
    exprs += _vector_products(vectors)
    return exprs


def theorem2_basis(
    n: int,
    vectors: tuple[str, str] = ("u1", "u2"),
    tensors: tuple[str, str] = ("a1", "a2"),
) -> list[InvariantExpr]:
    """Generators for two vectors and two antisymmetric tensors.

    Same scheme as :func:`theorem1_basis` with each tensor slot replaced by
    its metric square, plus two additions the rank oracle shows are needed to
    span: sandwiches around the *second* squared tensor, and the cross
    sandwiches ``u1 . t . u2`` with the raw antisymmetric tensors (these carry
    the invariants odd in the tensors; they vanish between equal vectors).
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    y1, y2 = (SlotRef.tensor(t, squared=True) for t in tensors)
    exprs: list[InvariantExpr] = []
    exprs += _power_traces(y1, n)
    exprs += _power_traces(y2, n)
    exprs += _pair_traces(y1, y2, n)
    for u in vectors:
        uref = SlotRef.vector(u)
        exprs += [Sandwich(uref, (y1,) * (a - 1), uref) for a in range(1, n + 1)]
    for u in vectors:
        uref = SlotRef.vector(u)
        exprs += [Sandwich(uref, (y2,) * (a - 1), uref) for a in range(2, n + 1)]
    exprs += _vector_products(vectors)
    left, right = (SlotRef.vector(v) for v in vectors)
    exprs += [Sandwich(left, (SlotRef.tensor(t),), right) for t in tensors]
    return exprs


@lru_cache(maxsize=None)
def _necklaces(n_letters: int, max_length: int) -> tuple[tuple[int, ...], ...]:
    """Words over ``range(n_letters)`` up to cyclic rotation, shortest first."""
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    for length in range(1, max_length + 1):
        for word in product(range(n_letters), repeat=length):
            canonical = min(word[i:] + word[:i] for i in range(length))
            if canonical not in seen:
                seen.add(canonical)
                out.append(canonical)
    return tuple(out)


@lru_cache(maxsize=None)
def _linear_words(n_letters: int, max_length: int, dedup_reversal: bool) -> tuple[tuple[int, ...], ...]:
    """Words up to ``max_length`` (including the empty word), optionally up to
    reversal; reversal-duplicates are redundant between equal endpoints because
    every alphabet member is symmetric."""
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    for length in range(0, max_length + 1):
        for word in product(range(n_letters), repeat=length):
            key = min(word, word[::-1]) if dedup_reversal else word
            if key not in seen:
                seen.add(key)
                out.append(word)
    return tuple(out)


def theorem3_basis(
    n: int,
    vectors: tuple[str, str] = ("u1", "u2"),
    symmetric: tuple[str, str] = ("s1", "s2"),
    antisymmetric: tuple[str, str] = ("a1", "a2"),
) -> list[InvariantExpr]:
    """Generators for two vectors, two symmetric and two antisymmetric tensors.

    Built by reducing the antisymmetric tensors to their (symmetric) metric
    squares and running the symmetric machinery over the extended family
    ``(s1, s2, sq(a1), sq(a2))``: every cyclically distinct trace word of
    length up to ``n`` over the family, then every vector sandwich around a
    family word of length up to ``n - 1`` (words that are reverses of each
    other coincide between equal endpoints and are emitted once).  The result
    is intentionally overcomplete; greedy pruning against the rank oracle
    extracts a functional basis.
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    family = (
        SlotRef.tensor(symmetric[0]),
        SlotRef.tensor(symmetric[1]),
        SlotRef.tensor(antisymmetric[0], squared=True),
        SlotRef.tensor(antisymmetric[1], squared=True),
    )
    exprs: list[InvariantExpr] = []
    for word in _necklaces(len(family), n):
        exprs.append(TraceWord(tuple(family[i] for i in word)))
    for i in range(len(vectors)):
        for j in range(i, len(vectors)):
            left, right = SlotRef.vector(vectors[i]), SlotRef.vector(vectors[j])
            for word in _linear_words(len(family), n - 1, dedup_reversal=(i == j)):
                exprs.append(Sandwich(left, tuple(family[k] for k in word), right))
    return exprs


def poincare_vector_potential_basis() -> list[InvariantExpr]:
    """The 14 first-order invariants of a Minkowski vector-potential system.

    Fixed shape: dimension 4, metric ``+---``, a vector ``A``, a symmetric
    tensor ``B`` and an antisymmetric tensor ``L`` (the symmetrized and
    antisymmetrized gradients of the potential).  Listed in canonical order;
    the set is functionally independent at generic points.
    """
    A = SlotRef.vector("A")
    B = SlotRef.tensor("B")
    L = SlotRef.tensor("L")
    sandwich = lambda *facs: Sandwich(A, tuple(facs), A)
    word = lambda *facs: TraceWord(tuple(facs))
    return [
        sandwich(),
        sandwich(B),
        sandwich(B, B),
        sandwich(B, L),
        sandwich(L, L),
        word(B),
        word(B, B),
        word(B, B, B),
        word(B, B, B, B),
        word(L, L),
        word(L, L, L, L),
        word(L, L, B),
        word(L, B, B, L),
        word(L, B, L, B),
    ]
