"""Functional independence by Jacobian rank, pruning, and basis verdicts.

A candidate set of invariants is functionally independent at a point exactly
when the matrix of their coordinate gradients has full row rank there.  The
rank is evaluated at several random points and aggregated by max, because
rank can only drop on special strata.  A greedy sweep in emission order
extracts a subset whose gradients attain the full candidate rank, preferring
low-degree expressions.

Counts claimed in the literature for specific configurations are carried as
annotations and compared against the rank oracle; disagreement is reported,
never asserted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

from ._version import __version__
from .expressions import InvariantExpr, gradient_matrix, render
from .rotations import (
    DEFAULT_RANK_TOL,
    determining_matrix,
    numerical_rank,
    random_group_element,
)
from .systems import SystemSpec, TensorSystem, random_system

#: Scaled threshold above which an expression is reported as non-invariant.
INVARIANCE_TOL = 1e-9


@dataclass(frozen=True)
class Claim:
    """An invariant count asserted in the literature for a configuration."""

    value: int
    source: str


def claimed_count(spec: SystemSpec) -> Claim | None:
    """Literature claim for this configuration, or ``None`` if none is on record."""
    n = spec.n
    claims = {
        (2, 2, 0, 0): (n * (n + 7) // 2, "two vectors and two symmetric tensors: (7n+n^2)/2"),
        (0, 0, 1, 0): (n, "one antisymmetric tensor: n"),
        (2, 0, 2, 0): (n * (n + 3) // 2, "two vectors and two antisymmetric tensors: (3n+n^2)/2"),
        (2, 2, 2, 0): (
            3 * n * (n + 3) // 2,
            "two vectors, two symmetric and two antisymmetric tensors: (9n+3n^2)/2",
        ),
    }
    if spec.counts == (1, 1, 1, 0) and n == 4:
        return Claim(14, "vector potential in dimension 4: 14")
    entry = claims.get(spec.counts)
    if entry is None:
        return None
    return Claim(entry[0], entry[1])


def jacobian_rank(
    exprs: list[InvariantExpr],
    systems: list[TensorSystem],
    tol: float = DEFAULT_RANK_TOL,
) -> int:
    """Max over sample points of the rank of the stacked gradient matrix."""
    if not systems:
        raise ValueError("at least one sample system is required")
    if not exprs:
        return 0
    return max(numerical_rank(gradient_matrix(exprs, s), tol) for s in systems)


def _greedy_indices(rows: np.ndarray, tol: float) -> list[int]:
    kept: list[int] = []
    rank = 0
    for i in range(rows.shape[0]):
        candidate = numerical_rank(rows[kept + [i]], tol)
        if candidate > rank:
            kept.append(i)
            rank = candidate
    return kept


def greedy_prune(
    exprs: list[InvariantExpr],
    systems: list[TensorSystem],
    tol: float = DEFAULT_RANK_TOL,
) -> list[InvariantExpr]:
    """Sublist that attains the full Jacobian rank, scanning in emission order.

    Pruning happens at the sample point realizing the max rank (first on
    ties), so the output size always equals ``jacobian_rank(exprs, systems)``.
    Deterministic for fixed inputs, and idempotent.
    """
    if not systems:
        raise ValueError("at least one sample system is required")
    if not exprs:
        return []
    mats = [gradient_matrix(exprs, s) for s in systems]
    ranks = [numerical_rank(m, tol) for m in mats]
    best = int(np.argmax(ranks))
    return [exprs[i] for i in _greedy_indices(mats[best], tol)]


def determining_defect(
    exprs: list[InvariantExpr],
    system: TensorSystem,
    grads: np.ndarray | None = None,
) -> float:
    """Worst scaled violation of the determining equations.

    For every expression gradient ``dF`` and generator action row ``a``,
    returns the max of ``|dF . a| / (|dF| |a|)``; exact invariants give zero
    up to rounding.
    """
    if grads is None:
        grads = gradient_matrix(exprs, system)
    actions = determining_matrix(system)
    if grads.size == 0 or actions.size == 0:
        return 0.0
    dots = np.abs(grads @ actions.T)
    scale = np.outer(np.linalg.norm(grads, axis=1), np.linalg.norm(actions, axis=1))
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(scale > 0, dots / scale, 0.0)
    return float(np.max(ratio)) if ratio.size else 0.0


def finite_defect(
    exprs: list[InvariantExpr],
    system: TensorSystem,
    rng: np.random.Generator,
    n_elements: int = 5,
) -> float:
    """Worst relative change of the expressions under random group elements."""
    from .expressions import evaluate_many

    base = evaluate_many(exprs, system)
    worst = 0.0
    for _ in range(n_elements):
        element = random_group_element(system.n, system.metric, rng)
        moved = evaluate_many(exprs, element.apply(system))
        rel = np.abs(moved - base) / np.maximum(1.0, np.abs(base))
        worst = max(worst, float(np.max(rel))) if rel.size else worst
    return worst


VERDICT_COMPLETE = "Complete"
VERDICT_INCOMPLETE = "Incomplete"
VERDICT_OVERCOMPLETE = "Overcomplete-but-spanning"


def _verdict(rank: int, expected: int, pruned_size: int) -> str:
    if rank == expected and pruned_size == expected:
        return VERDICT_COMPLETE
    if rank < expected:
        return VERDICT_INCOMPLETE
    # more independent directions than the orbit codimension allows: the
    # candidates cannot all be invariants (or the rank estimate is off)
    return VERDICT_OVERCOMPLETE


def discrepancy_note(claim: Claim, oracle_count: int) -> str:
    """The stable wording used whenever a literature claim misses the oracle."""
    return (
        f"claimed count {claim.value} ({claim.source}) "
        f"disagrees with rank-oracle count {oracle_count}"
    )


@dataclass
class BasisReport:
    """Verdict of a basis-verification run.

    ``expected_count`` comes from the rank oracle (variables minus generic
    action rank); ``paper_claimed_count`` is the count claimed in the
    literature when one is on record, kept strictly as an annotation.
    """

    spec: SystemSpec
    n_variables: int
    action_rank: int
    expected_count: int
    paper_claimed_count: Claim | None
    candidate_size: int
    jacobian_rank: int
    pruned_basis: list[str]
    verdict: str
    discrepancy_notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        claim = None
        if self.paper_claimed_count is not None:
            claim = {
                "value": self.paper_claimed_count.value,
                "source": self.paper_claimed_count.source,
            }
        return {
            "spec": self.spec.to_dict(),
            "n_variables": self.n_variables,
            "action_rank": self.action_rank,
            "expected_count": self.expected_count,
            "paper_claimed_count": claim,
            "candidate_size": self.candidate_size,
            "jacobian_rank": self.jacobian_rank,
            "pruned_basis": list(self.pruned_basis),
            "verdict": self.verdict,
            "discrepancy_notes": list(self.discrepancy_notes),
            "tool_version": __version__,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)


def verify_basis(
    spec: SystemSpec,
    exprs: list[InvariantExpr],
    trials: int = 20,
    seed: int = 0,
    tol: float = DEFAULT_RANK_TOL,
    names=None,
    check_invariance: bool = True,
) -> BasisReport:
    """Full verdict: oracle count, candidate Jacobian rank, pruned basis.

    ``names`` optionally renames the sampled systems' objects (flatten order)
    so they match the slot names used by ``exprs``.  Invariance spot checks
    add a note per offending expression; notes never affect the exit status
    of callers, discrepancies are findings rather than errors.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n_variables = spec.variable_count()

    rank_systems = [random_system(spec, rng) for _ in range(trials)]
    action_rank = max(
        numerical_rank(determining_matrix(s), tol) for s in rank_systems
    )
    expected = n_variables - action_rank

    jac_systems = [random_system(spec, rng, names=names) for _ in range(trials)]
    mats = [gradient_matrix(exprs, s) for s in jac_systems]
    ranks = [numerical_rank(m, tol) for m in mats] if exprs else [0]
    rank = max(ranks)
    best = int(np.argmax(ranks))
    pruned = (
        [exprs[i] for i in _greedy_indices(mats[best], tol)] if exprs else []
    )

    notes: list[str] = []
    claim = claimed_count(spec)
    if claim is not None and claim.value != expected:
        notes.append(discrepancy_note(claim, expected))
    if rank < expected:
        notes.append(
            f"candidate set spans {rank} of {expected} independent invariants"
        )
    elif rank > expected:
        notes.append(
            f"candidate Jacobian rank {rank} exceeds the invariant count {expected}; "
            "not every candidate is an invariant at this tolerance"
        )
    if check_invariance and exprs:
        defect = max(
            determining_defect(exprs, s, grads=m)
            for s, m in zip(jac_systems[:3], mats[:3])
        )
        if defect > INVARIANCE_TOL:
            notes.append(
                f"worst determining-equation defect {defect:.3e} exceeds {INVARIANCE_TOL:.0e}"
            )
        fdefect = finite_defect(exprs, jac_systems[0], rng)
        if fdefect > INVARIANCE_TOL:
            notes.append(
                f"worst finite-invariance defect {fdefect:.3e} exceeds {INVARIANCE_TOL:.0e}"
            )

    return BasisReport(
        spec=spec,
        n_variables=n_variables,
        action_rank=action_rank,
        expected_count=expected,
        paper_claimed_count=claim,
        candidate_size=len(exprs),
        jacobian_rank=rank,
        pruned_basis=[render(e) for e in pruned],
        verdict=_verdict(rank, expected, len(pruned)),
        discrepancy_notes=notes,
    )
