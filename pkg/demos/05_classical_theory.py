"""The classical backend: one elementary property and no complementarity.

Finite classical theory runs on probability vectors and substochastic
matrices. Up to relabelling there is exactly one elementary property, the
readout of the phase-space point, whose verifiers are the point masses. The
verifier/strong-verifier split still exists classically, and the
verifier-inclusion theorem holds here too.
"""

import numpy as np

import qcomplement as qc

# ---------------------------------------------------------------------------
# The fine-grained readout on three points, in a scrambled labelling.
readout = qc.fine_grained_instrument(3, permutation=[2, 0, 1])
print("valid:", qc.validate_classical(readout).is_valid)
ok, canonical = qc.classical_is_elementary(readout)
print("elementary:", ok, "canonical outcome order:", canonical.labels)

# Anything else fails the decision: merged outcomes are not atomic and
# off-diagonal entries are not repeatable.
merged = qc.ClassicalInstrument(3, 3, {
    "ab": qc.ClassicalOperation(3, 3, np.diag([1.0, 1.0, 0.0])),
    "c": qc.ClassicalOperation(3, 3, np.diag([0.0, 0.0, 1.0])),
})
print("merged readout elementary:", qc.classical_is_elementary(merged)[0])

shift = qc.ClassicalInstrument(2, 2, {
    "move": qc.ClassicalOperation(2, 2, np.array([[0.0, 1.0], [0.0, 0.0]])),
    "stay": qc.ClassicalOperation(2, 2, np.array([[1.0, 0.0], [0.0, 0.0]])),
})
print("shifting readout elementary:", qc.classical_is_elementary(shift)[0])

# ---------------------------------------------------------------------------
# Verifiers of the readout are exactly the point masses.
for label in canonical.labels:
    points = qc.verifier_points(readout[label])
    print(f"outcome {label!r} verifier points: {sorted(points)}")

# ---------------------------------------------------------------------------
# Verifier vs strong verifier on a bit: the map that reads the bit and then
# prepares 0 succeeds on everything, but only the point mass at 0 is left
# invariant.
prepare_zero = qc.ClassicalOperation(2, 2, np.array([[1.0, 1.0], [0.0, 0.0]]))
for name, state in (("(1,0)", qc.point_mass(2, 0)), ("(1/2,1/2)", qc.ClassicalState(2, [0.5, 0.5]))):
    checks = qc.classical_verifier_checks(prepare_zero, state)
    print(f"{name}: verifier={checks.is_verifier}, strong={checks.is_strong}")

# ---------------------------------------------------------------------------
# The classical instance of the verifier-inclusion theorem.
harness = qc.classical_theorem_harness(seed=7, size=4, trials=200)
print(
    f"classical harness: {harness.checked_cases} checked cases over "
    f"{harness.filtered_trials} trials, {harness.violations} violations "
    f"(seed {harness.seed}, {harness.algorithm})"
)
