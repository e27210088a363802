import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qcomplement as qc
from qcomplement.errors import StructureError
from helpers import E0, E1, proj, qubit_x, qubit_z, qutrit_basis_proj, qutrit_fine, z_instrument


def random_pvm_pair(seed: int, d: int):
    gen = qc.SeededGenerator(seed)
    rng = gen.rng
    p = qc.random_pvm(d, qc.random_rank_profile(d, int(rng.integers(1, d + 1)), rng), gen.child(0))
    q = qc.random_pvm(d, qc.random_rank_profile(d, int(rng.integers(1, d + 1)), rng), gen.child(1))
    return p, q


def perturbed_witness(w: qc.ExclusionWitness, epsilon: float) -> qc.ExclusionWitness:
    """Copy the witness with one Kraus entry of the realisation shifted."""
    label = w.c.labels[0]
    op = w.c[label]
    kraus = [k.copy() for k in op.kraus]
    kraus[0][0, 0] += epsilon
    bumped = qc.QuantumOperation(op.dim_in, op.dim_out, tuple(kraus))
    outcomes = dict(w.c.outcomes)
    outcomes[label] = bumped
    return qc.ExclusionWitness(
        c=qc.Instrument(w.c.dim_in, w.c.dim_out, outcomes),
        dims_out=w.dims_out,
        partition=w.partition,
        post=w.post,
    )


class TestSelfWitness:
    def test_z_instrument(self):
        ins = z_instrument()
        report = qc.verify_witness(ins, ins, qc.self_witness(ins))
        assert report.valid
        assert report.max_residual <= 1e-10

    def test_random_three_outcome(self):
        ins = qc.random_instrument(3, 3, ["a", "b", "c"], qc.SeededGenerator(5))
        report = qc.verify_witness(ins, ins, qc.self_witness(ins))
        assert report.valid and report.max_residual <= 1e-10

    def test_single_outcome_channel(self):
        ins = qc.instrument_from_operations([("only", qc.identity_operation(2))])
        report = qc.verify_witness(ins, ins, qc.self_witness(ins))
        assert report.valid

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_valid_for_random_instruments(self, seed):
        gen = qc.SeededGenerator(seed)
        rng = gen.rng
        d = int(rng.integers(2, 5))
        n = int(rng.integers(1, 4))
        ins = qc.random_instrument(d, d, [f"o{i}" for i in range(n)], gen.child(0))
        report = qc.verify_witness(ins, ins, qc.self_witness(ins))
        assert report.valid and report.max_residual <= 1e-10


class TestVerifyWitness:
    def test_swapped_post_blocks_invalid(self):
        ins = z_instrument()
        w = qc.self_witness(ins)
        swapped = qc.ExclusionWitness(
            c=w.c,
            dims_out=w.dims_out,
            partition=w.partition,
            post={"z0": w.post["z1"], "z1": w.post["z0"]},
        )
        report = qc.verify_witness(ins, ins, swapped)
        assert not report.valid
        assert report.max_residual >= 0.5

    def test_perturbed_entry_invalid(self):
        ins = z_instrument()
        report = qc.verify_witness(ins, ins, perturbed_witness(qc.self_witness(ins), 1e-3))
        assert not report.valid
        assert report.max_residual > 1e-4

    def test_residual_scales_linearly(self):
        ins = z_instrument()
        w = qc.self_witness(ins)
        ratios = []
        for exponent in np.linspace(-4, -2, 7):
            eps = 10.0 ** exponent
            report = qc.verify_witness(ins, ins, perturbed_witness(w, eps))
            ratios.append(report.max_residual / eps)
        assert max(ratios) / min(ratios) <= 3.0

    def test_structural_mismatch_raises(self):
        ins = z_instrument()
        other = qc.instrument_from_operations([("only", qc.identity_operation(3))])
        with pytest.raises(StructureError):
            qc.verify_witness(other, ins, qc.self_witness(ins))

    def test_wrong_post_outcomes_raise(self):
        ins = z_instrument()
        w = qc.self_witness(ins)
        g = qc.instrument_from_operations([("only", qc.identity_operation(2))])
        with pytest.raises(StructureError):
            qc.verify_witness(ins, g, w)


class TestMultiBlockPartitionWitness:
    def test_finer_realisation_with_merged_blocks(self):
        # The realisation resolves three outcomes; the witnessed instrument
        # only two. Partition blocks of size two realise the coarse outcome.
        fine = qutrit_fine().base
        coarse = qc.coarse_grain(fine, qc.OutcomePartition({"low": ("f0", "f1"), "two": ("f2",)}))
        ident = qc.identity_operation(3)
        zero = qc.zero_operation(3, 3)
        route = {"f0": "low", "f1": "low", "f2": "two"}
        post = {
            z: qc.Instrument(3, 3, {y: ident if route[z] == y else zero for y in coarse.labels})
            for z in fine.labels
        }
        witness = qc.ExclusionWitness(
            c=fine,
            dims_out=(3, 1),
            partition={"low": ("f0", "f1"), "two": ("f2",)},
            post=post,
        )
        report = qc.verify_witness(coarse, coarse, witness)
        assert report.valid and report.max_residual <= 1e-10

    def test_wrong_block_assignment_detected(self):
        fine = qutrit_fine().base
        coarse = qc.coarse_grain(fine, qc.OutcomePartition({"low": ("f0", "f1"), "two": ("f2",)}))
        ident = qc.identity_operation(3)
        zero = qc.zero_operation(3, 3)
        route = {"f0": "low", "f1": "low", "f2": "two"}
        post = {
            z: qc.Instrument(3, 3, {y: ident if route[z] == y else zero for y in coarse.labels})
            for z in fine.labels
        }
        witness = qc.ExclusionWitness(
            c=fine,
            dims_out=(3, 1),
            partition={"low": ("f0", "f2"), "two": ("f1",)},
            post=post,
        )
        report = qc.verify_witness(coarse, coarse, witness)
        assert not report.valid
        assert report.realisation_residuals["low"] > 0.5


class TestNontrivialAncillaWitness:
    @staticmethod
    def _build():
        # Realisation that writes the heralded outcome into a 2-level ancilla
        # before it is discarded: C_z = (Pi_z . Pi_z) tensor |psi_z><psi_z|.
        ins = z_instrument()
        ancilla = {"z0": np.array([1.0, 0.0]), "z1": np.array([1.0, 1.0]) / np.sqrt(2.0)}
        c_ops = {
            z: qc.QuantumOperation(2, 4, (np.kron(op.kraus[0], ancilla[z].reshape(2, 1)),))
            for z, op in ins.outcomes.items()
        }
        discard = qc.trace_out_ancilla(2, 2)
        zero = qc.zero_operation(4, 2)
        post = {
            z: qc.Instrument(4, 2, {y: discard if y == z else zero for y in ins.labels})
            for z in ins.labels
        }
        witness = qc.ExclusionWitness(
            c=qc.Instrument(2, 4, c_ops),
            dims_out=(2, 2),
            partition={x: (x,) for x in ins.labels},
            post=post,
        )
        return ins, witness

    def test_valid_with_two_level_ancilla(self):
        ins, witness = self._build()
        report = qc.verify_witness(ins, ins, witness)
        assert report.valid and report.max_residual <= 1e-10

    def test_detects_wrong_ancilla_routing(self):
        ins, witness = self._build()
        swapped = qc.ExclusionWitness(
            c=witness.c,
            dims_out=witness.dims_out,
            partition=witness.partition,
            post={"z0": witness.post["z1"], "z1": witness.post["z0"]},
        )
        report = qc.verify_witness(ins, ins, swapped)
        assert not report.valid and report.max_residual >= 0.5

    def test_json_round_trip(self):
        import json

        from qcomplement.serialize import model_from_text, model_to_dict

        ins, witness = self._build()
        back = model_from_text(json.dumps(model_to_dict(witness))).value
        assert back.dims_out == (2, 2)
        assert qc.verify_witness(ins, ins, back).valid


class TestPostprocessingWitness:
    def test_relabelling_conditionals(self):
        ins = z_instrument()
        ident = qc.identity_operation(2)
        zero = qc.zero_operation(2, 2)
        cond = {
            "z0": qc.Instrument(2, 2, {"swapped1": ident, "swapped0": zero}),
            "z1": qc.Instrument(2, 2, {"swapped1": zero, "swapped0": ident}),
        }
        g, w = qc.postprocessing_witness(ins, cond)
        assert qc.verify_witness(ins, g, w).valid
        assert qc.choi_distance(g["swapped1"], ins["z0"]) <= 1e-12
        assert qc.choi_distance(g["swapped0"], ins["z1"]) <= 1e-12

    def test_prepare_fixed_state_conditionals(self):
        ins = z_instrument()
        prep0 = qc.QuantumOperation(2, 2, (np.array([[1, 0], [0, 0]], dtype=complex),
                                           np.array([[0, 1], [0, 0]], dtype=complex)))
        prep1 = qc.QuantumOperation(2, 2, (np.array([[0, 0], [1, 0]], dtype=complex),
                                           np.array([[0, 0], [0, 1]], dtype=complex)))
        cond = {
            "z0": qc.Instrument(2, 2, {"y": prep0}),
            "z1": qc.Instrument(2, 2, {"y": prep1}),
        }
        g, w = qc.postprocessing_witness(ins, cond)
        assert qc.verify_witness(ins, g, w).valid
        expected = qc.coarse_grain_ops(
            [qc.compose_seq(prep0, ins["z0"]), qc.compose_seq(prep1, ins["z1"])]
        )
        assert qc.choi_distance(g["y"], expected) <= 1e-12

    def test_atomic_outputs_obey_support_inclusion(self):
        gen = qc.SeededGenerator(11)
        prop = qc.random_pvm(3, [2, 1], gen.child(0))
        t = prop.base
        ident = qc.identity_operation(3)
        zero = qc.zero_operation(3, 3)
        cond = {
            "x0": qc.Instrument(3, 3, {"y0": ident, "y1": zero}),
            "x1": qc.Instrument(3, 3, {"y0": zero, "y1": ident}),
        }
        g, w = qc.postprocessing_witness(t, cond)
        assert qc.verify_witness(t, g, w).valid
        for y, x in (("y0", "x0"), ("y1", "x1")):
            assert qc.subspace_contained(
                qc.verifier_support(g[y]), qc.verifier_support(t[x])
            )

    def test_mismatched_outcome_sets_raise(self):
        ins = z_instrument()
        cond = {
            "z0": qc.Instrument(2, 2, {"a": qc.identity_operation(2)}),
            "z1": qc.Instrument(2, 2, {"b": qc.identity_operation(2)}),
        }
        with pytest.raises(StructureError):
            qc.postprocessing_witness(ins, cond)


class TestCompatibleElementary:
    def test_relabelled_z(self):
        permuted = qc.from_pvm({"one": proj(E1), "zero": proj(E0)})
        assert qc.are_compatible_elementary(qubit_z(), permuted)

    def test_z_vs_x(self):
        assert not qc.are_compatible_elementary(qubit_z(), qubit_x())

    def test_qutrit_fine_vs_coarse(self):
        coarse = qc.from_pvm({"low": qutrit_basis_proj(0),
                              "high": qutrit_basis_proj(1) + qutrit_basis_proj(2)})
        assert not qc.are_compatible_elementary(qutrit_fine(), coarse)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), d=st.integers(2, 4))
    def test_matches_complementarity_negation(self, seed, d):
        p, q = random_pvm_pair(seed, d)
        assert qc.are_compatible_elementary(p, q) == (not qc.are_complementary(p, q).complementary)


class TestPvmCommute:
    def test_z_with_itself(self):
        assert qc.pvm_commute(qubit_z(), qubit_z())

    def test_z_vs_x(self):
        assert not qc.pvm_commute(qubit_z(), qubit_x())

    def test_commuting_but_incompatible(self):
        coarse = qc.from_pvm({"low": qutrit_basis_proj(0),
                              "high": qutrit_basis_proj(1) + qutrit_basis_proj(2)})
        fine = qutrit_fine()
        assert qc.pvm_commute(fine, coarse)
        assert not qc.are_compatible_elementary(fine, coarse)
        assert qc.are_complementary(fine, coarse).complementary

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6), d=st.integers(2, 4))
    def test_compatible_implies_commuting(self, seed, d):
        p, q = random_pvm_pair(seed, d)
        if qc.are_compatible_elementary(p, q):
            assert qc.pvm_commute(p, q)


class TestInclusionHarness:
    def test_small_run_has_no_violations(self):
        report = qc.verifier_inclusion_harness(seed=42, dim=3, trials=60)
        assert report.violations == 0
        assert report.filtered_trials >= 50
        assert report.checked_cases >= report.filtered_trials
        assert report.theory == "quantum" and report.algorithm == "pcg64"

    def test_zero_trials(self):
        report = qc.verifier_inclusion_harness(seed=1, dim=2, trials=0)
        assert report.trials == 0 and report.checked_cases == 0 and report.violations == 0

    def test_dim_two_seed_matrix(self):
        for seed in (0, 1, 2, 3):
            assert qc.verifier_inclusion_harness(seed=seed, dim=2, trials=25).violations == 0

    def test_jobs_parallel_agrees(self):
        serial = qc.verifier_inclusion_harness(seed=9, dim=2, trials=20, jobs=1)
        parallel = qc.verifier_inclusion_harness(seed=9, dim=2, trials=20, jobs=4)
        assert serial.checked_cases == parallel.checked_cases
        assert serial.violations == parallel.violations == 0
