"""Complementarity decisions between elementary properties.

Two elementary properties are complementary when some verifier state of one
fails to verify the other. For projective instruments this reduces to
comparing the projector supports: the properties are non-complementary iff
the support families match under a bijection of outcomes. Degrees (strong,
mild, weak) are classified per verifier state from the outcome distribution
it induces on the other property.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations
from math import prod

import numpy as np

from .errors import StructureError
from .instruments import ElementaryProperty
from .linalg import DEFAULT_TOL, Subspace, SubspaceRelation, Tolerances, range_subspace, subspace_relation
from .operations import DensityState, pure_state


class DegreeKind(enum.Enum):
    NOT_COMPLEMENTARY_HERE = "not-complementary-here"
    WEAK = "weak"
    MILD = "mild"
    STRONG = "strong"


@dataclass(frozen=True)
class DegreeVerdict:
    """Outcome distribution of one property on a verifier of the other,
    classified into a complementarity degree."""

    kind: DegreeKind
    probabilities: dict[str, float]
    entropy_bits: float


@dataclass(frozen=True)
class ComplementarityReport:
    complementary: bool
    matched_bijection: dict[str, str] | None
    witness: DensityState | None = None
    degree_table: dict[str, DegreeVerdict] = field(default_factory=dict)
    reverse_degree_table: dict[str, DegreeVerdict] = field(default_factory=dict)


def outcome_entropy(probabilities, base2: bool = True) -> float:
    """Shannon entropy of an outcome distribution, in bits by default.

    Entries must be nonnegative and sum to one within ``prob_eq``; the
    convention 0 log 0 = 0 applies.
    """
    probs = [float(p) for p in probabilities]
    if any(p < -DEFAULT_TOL.prob_eq for p in probs):
        raise StructureError("probabilities must be nonnegative")
    if abs(sum(probs) - 1.0) > DEFAULT_TOL.prob_eq:
        raise StructureError(f"probabilities sum to {sum(probs)!r}, expected 1")
    total = 0.0
    for p in probs:
        p = max(p, 0.0)
        if p > 0.0:
            total -= p * math.log2(p)
    return total if base2 else total * math.log(2.0)


def _outcome_probabilities(
    verifier: DensityState, q: ElementaryProperty, tol: Tolerances
) -> dict[str, float]:
    if verifier.dims[0] != q.dim:
        raise StructureError(
            f"state's first factor has dimension {verifier.dims[0]}, property "
            f"lives on dimension {q.dim}"
        )
    rest = prod(verifier.dims[1:]) if len(verifier.dims) > 1 else 1
    probs: dict[str, float] = {}
    for label, proj in q.projectors.items():
        full = proj if rest == 1 else np.kron(proj, np.eye(rest))
        probs[label] = float(np.real(np.trace(full @ verifier.matrix)))
    return probs


def degree_for_verifier(
    verifier: DensityState, q: ElementaryProperty, tol: Tolerances = DEFAULT_TOL
) -> DegreeVerdict:
    """Classify how undetermined property ``q`` is on a given verifier state.

    Boundary handling: a probability within ``prob_eq`` of 1 counts as
    certain (not complementary on this state), within ``prob_eq`` of 0 as
    vanishing. Strong means all outcomes uniform at 1/|Y|; mild means all
    outcomes strictly inside (0, 1); weak allows vanishing outcomes as long
    as none is certain.
    """
    probs = _outcome_probabilities(verifier, q, tol)
    values = list(probs.values())
    n = len(values)
    eps = tol.prob_eq
    if any(p >= 1.0 - eps for p in values):
        kind = DegreeKind.NOT_COMPLEMENTARY_HERE
    elif all(abs(p - 1.0 / n) <= eps for p in values):
        kind = DegreeKind.STRONG
    elif all(eps <= p <= 1.0 - eps for p in values):
        kind = DegreeKind.MILD
    else:
        kind = DegreeKind.WEAK
    clamped = [min(1.0, max(0.0, p)) for p in values]
    return DegreeVerdict(kind=kind, probabilities=probs, entropy_bits=outcome_entropy(clamped))


def _support_map(p: ElementaryProperty, tol: Tolerances) -> dict[str, Subspace]:
    return {label: range_subspace(proj, tol) for label, proj in p.projectors.items()}


def _match_supports(
    p_supports: dict[str, Subspace], q_supports: dict[str, Subspace], tol: Tolerances
) -> dict[str, str] | None:
    """Bijection matching equal supports, or None when the multisets differ.

    Supports within one property are pairwise orthogonal and nonzero, so a
    greedy scan is exact: no two outcomes of the same property can share a
    support.
    """
    if len(p_supports) != len(q_supports):
        return None
    unmatched = list(q_supports)
    mapping: dict[str, str] = {}
    for x, sub_x in p_supports.items():
        for y in unmatched:
            if subspace_relation(sub_x, q_supports[y], tol) is SubspaceRelation.EQUAL:
                mapping[x] = y
                unmatched.remove(y)
                break
        else:
            return None
    return mapping


def _verified_outcome(vector: np.ndarray, prop: ElementaryProperty, tol: Tolerances) -> str | None:
    for label, proj in prop.projectors.items():
        if float(np.real(vector.conj() @ (proj @ vector))) >= 1.0 - tol.prob_eq:
            return label
    return None


def _search_witness(
    p: ElementaryProperty, q: ElementaryProperty, tol: Tolerances
) -> DensityState | None:
    """Deterministic pure verifier of one property failing the other.

    Within a projector's range, the states that still verify the other
    property fall into pairwise-orthogonal intersection subspaces. Hence
    either some range basis vector already fails, or two basis vectors verify
    distinct opposite outcomes and their uniform superposition fails.
    """
    for first, second in ((p, q), (q, p)):
        for proj in first.projectors.values():
            basis = range_subspace(proj, tol).basis
            verified = []
            failed = None
            for i in range(basis.shape[1]):
                outcome = _verified_outcome(basis[:, i], second, tol)
                if outcome is None:
                    failed = basis[:, i]
                    break
                verified.append(outcome)
            if failed is not None:
                return pure_state(failed)
            for i, j in combinations(range(len(verified)), 2):
                if verified[i] != verified[j]:
                    candidate = (basis[:, i] + basis[:, j]) / np.sqrt(2.0)
                    if _verified_outcome(candidate, second, tol) is None:
                        return pure_state(candidate)
    return None


def are_complementary(
    p: ElementaryProperty, q: ElementaryProperty, tol: Tolerances = DEFAULT_TOL
) -> ComplementarityReport:
    """Decide complementarity of two elementary properties.

    Non-complementary iff the projector supports match under some bijection
    of outcomes (the bijection is returned). When complementary, the report
    carries a pure verifier state of one property that fails the other at the
    ``prob_eq`` resolution. The two thresholds are incommensurate: supports
    misaligned by an angle between roughly sqrt(2 mat_eq) and sqrt(prob_eq)
    are already distinguishable as subspaces while no state fails
    verification measurably, and the witness is then None.
    """
    if p.dim != q.dim:
        raise StructureError(f"properties live on different dimensions: {p.dim} vs {q.dim}")
    mapping = _match_supports(_support_map(p, tol), _support_map(q, tol), tol)
    if mapping is not None:
        return ComplementarityReport(complementary=False, matched_bijection=mapping)
    return ComplementarityReport(
        complementary=True,
        matched_bijection=None,
        witness=_search_witness(p, q, tol),
    )


def _range_mixed_state(projector: np.ndarray) -> DensityState:
    trace = float(np.real(np.trace(projector)))
    return DensityState((projector.shape[0],), projector / trace)


def classify_relation(
    p: ElementaryProperty, q: ElementaryProperty, tol: Tolerances = DEFAULT_TOL
) -> ComplementarityReport:
    """Full pairwise report: complementarity verdict plus degree tables.

    The canonical verifier family is the maximally mixed state on each
    projector's range, a deterministic and basis-independent choice; degrees
    for any other verifier remain available through ``degree_for_verifier``.
    The table is reported per outcome, both directions, without collapsing to
    a single pairwise label.
    """
    report = are_complementary(p, q, tol)
    degree_table = {
        x: degree_for_verifier(_range_mixed_state(proj), q, tol)
        for x, proj in p.projectors.items()
    }
    reverse = {
        y: degree_for_verifier(_range_mixed_state(proj), p, tol)
        for y, proj in q.projectors.items()
    }
    return ComplementarityReport(
        complementary=report.complementary,
        matched_bijection=report.matched_bijection,
        witness=report.witness,
        degree_table=degree_table,
        reverse_degree_table=reverse,
    )
