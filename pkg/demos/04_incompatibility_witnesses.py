"""Exclusion witnesses and the complementarity-incompatibility equivalence.

One instrument fails to exclude another when some realisation of the first
can be post-processed into the second. Witnesses of that relation are
verified numerically against both defining equations. For elementary
properties no search is needed: weak compatibility holds exactly when the
properties are non-complementary, and that is strictly stronger than the
textbook commutation test.
"""

import numpy as np

import qcomplement as qc

e = np.eye(3)
z_qubit = qc.from_pvm({"z0": np.diag([1.0, 0.0]), "z1": np.diag([0.0, 1.0])}).base

# ---------------------------------------------------------------------------
# Every instrument fails to exclude itself; the constructor gives the witness
# and the verifier checks both equations with residuals.
witness = qc.self_witness(z_qubit)
report = qc.verify_witness(z_qubit, z_qubit, witness)
print("self witness valid:", report.valid)
print("  residuals:", {**report.realisation_residuals, **report.simulation_residuals})

# Damage one Kraus entry and the residual reports the damage linearly.
for eps in (1e-4, 1e-3, 1e-2):
    bad_c = dict(witness.c.outcomes)
    kraus = [k.copy() for k in bad_c["z0"].kraus]
    kraus[0][0, 0] += eps
    bad_c["z0"] = qc.QuantumOperation(2, 2, tuple(kraus))
    bad = qc.ExclusionWitness(
        c=qc.Instrument(2, 2, bad_c),
        dims_out=witness.dims_out,
        partition=witness.partition,
        post=witness.post,
    )
    bad_report = qc.verify_witness(z_qubit, z_qubit, bad)
    print(f"  eps={eps:g}: valid={bad_report.valid}, max residual={bad_report.max_residual:.3e}")

# ---------------------------------------------------------------------------
# Classical feedback: measure in Z, then relabel the heralded outcome. The
# constructor returns both the composite instrument and a witness that is
# valid by construction.
ident, zero = qc.identity_operation(2), qc.zero_operation(2, 2)
swap = {
    "z0": qc.Instrument(2, 2, {"one": ident, "zero": zero}),
    "z1": qc.Instrument(2, 2, {"one": zero, "zero": ident}),
}
g, w = qc.postprocessing_witness(z_qubit, swap)
print("post-processed relabelling valid:", qc.verify_witness(z_qubit, g, w).valid)

# ---------------------------------------------------------------------------
# The theorem at work: for elementary properties, compatibility is decided by
# support matching, and commutation of the projectors is a strictly weaker
# test. The qutrit readout and its partial coarse-graining commute but are
# NOT weakly compatible.
fine = qc.from_pvm({f"f{i}": np.outer(e[i], e[i]) for i in range(3)})
coarse = qc.from_pvm({"low": np.outer(e[0], e[0]), "high": np.outer(e[1], e[1]) + np.outer(e[2], e[2])})
print("commute:", qc.pvm_commute(fine, coarse))
print("weakly compatible:", qc.are_compatible_elementary(fine, coarse))
print("complementary:", qc.are_complementary(fine, coarse).complementary)

# ---------------------------------------------------------------------------
# The verifier-inclusion theorem, checked on random post-processings: every
# atomic nonzero composite outcome keeps its verifiers inside the matched
# original outcome's verifier set.
harness = qc.verifier_inclusion_harness(seed=42, dim=3, trials=200)
print(
    f"quantum harness: {harness.checked_cases} checked cases over "
    f"{harness.filtered_trials} trials, {harness.violations} violations "
    f"(seed {harness.seed}, {harness.algorithm})"
)
