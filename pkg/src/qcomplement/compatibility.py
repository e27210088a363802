"""Exclusion-witness verification and compatibility decisions.

Deciding exclusion between arbitrary instruments is a bilinear feasibility
problem with no known general procedure, so this module verifies supplied
witnesses (the realisation instrument, its outcome partition, and the
post-processing family) and decides the elementary case through the
support-matching theorem: elementary properties are weakly compatible exactly
when they are non-complementary. A seeded harness exercises the
verifier-inclusion theorem on randomly generated post-processings.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .complementarity import are_complementary
from .errors import StructureError
from .instruments import ElementaryProperty, Instrument
from .linalg import DEFAULT_TOL, Tolerances, subspace_contained
from .operations import (
    QuantumOperation,
    choi,
    choi_distance,
    coarse_grain_ops,
    compose_seq,
    identity_operation,
    is_atomic,
    zero_operation,
)
from .sampling import SeededGenerator, random_instrument, random_pvm, random_rank_profile
from .verifiers import verifier_support


@dataclass(frozen=True)
class ExclusionWitness:
    """A realisation of one instrument that post-processes into another.

    ``c`` maps the common input system into the declared product of the first
    instrument's output (dimension ``dims_out[0]``) and an ancilla
    (``dims_out[1]``). ``partition`` groups c's outcomes by the first
    instrument's outcomes; ``post`` holds one post-processing instrument per
    c outcome, each with the second instrument's outcome set.
    """

    c: Instrument
    dims_out: tuple[int, int]
    partition: dict[str, tuple[str, ...]]
    post: dict[str, Instrument]

    def __post_init__(self):
        d_b, d_e = (int(x) for x in self.dims_out)
        if d_b < 1 or d_e < 1:
            raise StructureError("declared output factors must be positive")
        if d_b * d_e != self.c.dim_out:
            raise StructureError(
                f"declared factors {d_b}x{d_e} do not multiply to the realisation "
                f"output dimension {self.c.dim_out}"
            )
        partition = {x: tuple(zs) for x, zs in self.partition.items()}
        seen: set[str] = set()
        for x, zs in partition.items():
            if not zs:
                raise StructureError(f"partition block {x!r} is empty")
            for z in zs:
                if z not in self.c.outcomes:
                    raise StructureError(f"partition block {x!r} names unknown outcome {z!r}")
                if z in seen:
                    raise StructureError(f"outcome {z!r} appears in more than one block")
                seen.add(z)
        if seen != set(self.c.labels):
            raise StructureError("partition blocks do not cover the realisation outcomes")
        if set(self.post) != set(self.c.labels):
            raise StructureError("post-processing keys do not match realisation outcomes")
        for z, ins in self.post.items():
            if ins.dim_in != self.c.dim_out:
                raise StructureError(
                    f"post-processing {z!r} expects input {ins.dim_in}, realisation "
                    f"outputs {self.c.dim_out}"
                )
        object.__setattr__(self, "dims_out", (d_b, d_e))
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "post", dict(self.post))


def trace_out_ancilla(d_keep: int, d_drop: int) -> QuantumOperation:
    """The channel B(x)E -> B discarding the trailing ancilla factor."""
    mats = []
    for e in range(d_drop):
        bra = np.zeros((1, d_drop))
        bra[0, e] = 1.0
        mats.append(np.kron(np.eye(d_keep), bra))
    return QuantumOperation(d_keep * d_drop, d_keep, tuple(mats))


@dataclass(frozen=True)
class WitnessReport:
    realisation_residuals: dict[str, float]
    simulation_residuals: dict[str, float]
    valid: bool
    threshold: float

    @property
    def max_residual(self) -> float:
        return max(
            list(self.realisation_residuals.values()) + list(self.simulation_residuals.values()),
            default=0.0,
        )


def verify_witness(
    t: Instrument, g: Instrument, w: ExclusionWitness, tol: Tolerances = DEFAULT_TOL
) -> WitnessReport:
    """Check that the witness realises ``t`` and post-processes into ``g``.

    The first family of residuals compares each t outcome against the
    ancilla-discarded block sum of the realisation; the second compares each
    g outcome against the fully post-processed realisation. Residuals are
    Choi Frobenius distances and are always reported; validity is the binary
    verdict at ``mat_eq``, so callers can apply stricter thresholds.
    """
    d_b, d_e = w.dims_out
    if t.dim_in != w.c.dim_in or g.dim_in != w.c.dim_in:
        raise StructureError("instruments and witness disagree on the input system")
    if t.dim_out != d_b:
        raise StructureError(
            f"first instrument outputs dimension {t.dim_out}, witness declares {d_b}"
        )
    if set(w.partition) != set(t.labels):
        raise StructureError("partition blocks do not match the first instrument's outcomes")
    for z, ins in w.post.items():
        if ins.dim_out != g.dim_out:
            raise StructureError(
                f"post-processing {z!r} outputs dimension {ins.dim_out}, expected {g.dim_out}"
            )
        if set(ins.labels) != set(g.labels):
            raise StructureError(
                f"post-processing {z!r} has outcomes {sorted(ins.labels)}, expected "
                f"{sorted(g.labels)}"
            )

    discard = trace_out_ancilla(d_b, d_e)
    realisation: dict[str, float] = {}
    for x in t.labels:
        realised = coarse_grain_ops(
            [compose_seq(discard, w.c[z]) for z in w.partition[x]]
        )
        realisation[x] = choi_distance(t[x], realised)
    simulation: dict[str, float] = {}
    for y in g.labels:
        processed = coarse_grain_ops(
            [compose_seq(w.post[z][y], w.c[z]) for z in w.c.labels]
        )
        simulation[y] = choi_distance(g[y], processed)
    valid = all(r <= tol.mat_eq for r in realisation.values()) and all(
        r <= tol.mat_eq for r in simulation.values()
    )
    return WitnessReport(
        realisation_residuals=realisation,
        simulation_residuals=simulation,
        valid=valid,
        threshold=tol.mat_eq,
    )


def self_witness(t: Instrument) -> ExclusionWitness:
    """Witness that any instrument fails to exclude itself.

    Trivial ancilla, realisation equal to the instrument, and post-processing
    that copies the heralded outcome through an identity channel.
    """
    ident = identity_operation(t.dim_out)
    zero = zero_operation(t.dim_out, t.dim_out)
    post = {
        z: Instrument(
            t.dim_out,
            t.dim_out,
            {y: ident if y == z else zero for y in t.labels},
        )
        for z in t.labels
    }
    return ExclusionWitness(
        c=t,
        dims_out=(t.dim_out, 1),
        partition={x: (x,) for x in t.labels},
        post=post,
    )


def postprocessing_witness(
    t: Instrument, cond: dict[str, Instrument]
) -> tuple[Instrument, ExclusionWitness]:
    """Build the instrument obtained by classical feedback after ``t``.

    ``cond`` supplies one conditional instrument per t outcome, all sharing
    an outcome set and output system. Returns the composite instrument
    together with a witness that is valid by construction.
    """
    if set(cond) != set(t.labels):
        raise StructureError("conditional family must name exactly the instrument outcomes")
    items = [cond[x] for x in t.labels]
    y_labels = items[0].labels
    d_out = items[0].dim_out
    for x, ins in zip(t.labels, items):
        if ins.dim_in != t.dim_out:
            raise StructureError(
                f"conditional for outcome {x!r} expects input {ins.dim_in}, "
                f"instrument outputs {t.dim_out}"
            )
        if ins.dim_out != d_out or set(ins.labels) != set(y_labels):
            raise StructureError("conditional instruments must share outcomes and output system")
    composite = {
        y: coarse_grain_ops([compose_seq(cond[x][y], t[x]) for x in t.labels])
        for y in y_labels
    }
    g = Instrument(t.dim_in, d_out, composite)
    w = ExclusionWitness(
        c=t,
        dims_out=(t.dim_out, 1),
        partition={x: (x,) for x in t.labels},
        post=dict(cond),
    )
    return g, w


def are_compatible_elementary(
    p: ElementaryProperty, q: ElementaryProperty, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Weak compatibility of elementary properties.

    Non-complementary elementary properties coincide up to outcome relabelling
    and are therefore compatible; complementary ones are strongly
    incompatible. That equivalence makes the support comparison the decision
    procedure.
    """
    return not are_complementary(p, q, tol).complementary


def pvm_commute(
    p: ElementaryProperty, q: ElementaryProperty, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Textbook observable compatibility: all projector pairs commute."""
    if p.dim != q.dim:
        raise StructureError(f"properties live on different dimensions: {p.dim} vs {q.dim}")
    for a in p.projectors.values():
        for b in q.projectors.values():
            if float(np.linalg.norm(a @ b - b @ a)) > tol.mat_eq:
                return False
    return True


@dataclass(frozen=True)
class HarnessReport:
    theory: str
    seed: int
    algorithm: str
    dim: int
    trials: int
    filtered_trials: int
    checked_cases: int
    violations: int
    cases: tuple = ()


def _choi_norm(op: QuantumOperation) -> float:
    return float(np.linalg.norm(choi(op).matrix))


def _conditional_family(
    t: Instrument, gen: SeededGenerator, rng: np.random.Generator
) -> dict[str, Instrument]:
    """Random conditional family biased so post-processed outcomes are atomic.

    Each composite outcome receives its contribution from exactly one branch
    (single-Kraus conditional operations, zero elsewhere); unbiased draws are
    almost never atomic and would starve the harness filter.
    """
    x_labels = list(t.labels)
    n = len(x_labels)
    d = t.dim_out
    extra = int(rng.integers(0, 3))
    y_labels = [f"y{i}" for i in range(n + extra)]
    order = rng.permutation(n)
    assignment = {}
    for i, y in enumerate(y_labels):
        assignment[y] = x_labels[order[i]] if i < n else x_labels[int(rng.integers(0, n))]
    zero = zero_operation(d, d)
    cond: dict[str, Instrument] = {}
    for idx, x in enumerate(x_labels):
        branch_ys = [y for y in y_labels if assignment[y] == x]
        branch = random_instrument(d, d, branch_ys, gen.child(idx + 1))
        cond[x] = Instrument(
            d, d, {y: branch[y] if y in branch_ys else zero for y in y_labels}
        )
    return cond


def _quantum_trial(gen: SeededGenerator, dim: int, tol: Tolerances):
    rng = gen.rng
    n_out = int(rng.integers(2, dim + 1))
    prop = random_pvm(dim, random_rank_profile(dim, n_out, rng), gen.child(0))
    t = prop.base
    cond = _conditional_family(t, gen, rng)
    g, _ = postprocessing_witness(t, cond)

    checked = 0
    violations = []
    for y in g.labels:
        g_y = g[y]
        if _choi_norm(g_y) <= tol.mat_eq:
            continue
        if not is_atomic(g_y, tol):
            continue
        checked += 1
        matched = max(
            t.labels, key=lambda x: _choi_norm(compose_seq(cond[x][y], t[x]))
        )
        support_g = verifier_support(g_y, tol)
        support_t = verifier_support(t[matched], tol)
        if support_g.dim and not subspace_contained(support_g, support_t, tol):
            violations.append((y, matched, support_g.dim, support_t.dim))
    return checked, violations


def verifier_inclusion_harness(
    seed: int,
    dim: int,
    trials: int,
    tol: Tolerances = DEFAULT_TOL,
    jobs: int = 1,
) -> HarnessReport:
    """Random check of the verifier-inclusion theorem in quantum theory.

    Each trial draws a random projective elementary instrument and a random
    post-processing, then asserts that every atomic nonzero composite outcome
    has its verifier support inside the matched original outcome's support.
    Zero violations are expected; aggregation is order-independent.
    """
    if dim < 2:
        raise StructureError("harness needs dimension at least 2")
    if trials < 0:
        raise StructureError("trials must be nonnegative")
    root = SeededGenerator(seed)

    def run(index: int):
        return _quantum_trial(root.child(index), dim, tol)

    if jobs > 1 and trials:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(i) for i in range(trials)]

    cases = []
    checked_cases = 0
    filtered = 0
    for index, (checked, violations) in enumerate(results):
        checked_cases += checked
        if checked:
            filtered += 1
        for item in violations:
            cases.append((index,) + item)
    return HarnessReport(
        theory="quantum",
        seed=seed,
        algorithm=root.algorithm,
        dim=dim,
        trials=trials,
        filtered_trials=filtered,
        checked_cases=checked_cases,
        violations=len(cases),
        cases=tuple(cases),
    )
