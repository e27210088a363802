import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qcomplement as qc
from qcomplement.errors import StructureError
from qcomplement.linalg import Subspace, SubspaceRelation


def random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a + a.conj().T


def random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


class TestHermitianEig:
    def test_identity(self):
        w, _ = qc.hermitian_eig(np.eye(2))
        assert np.allclose(w, [1.0, 1.0])

    def test_diagonal_descending(self):
        w, _ = qc.hermitian_eig(np.diag([1.0, -1.0]))
        assert np.allclose(w, [1.0, -1.0])

    def test_reconstruction(self):
        rng = np.random.default_rng(11)
        m = random_hermitian(rng, 4)
        w, v = qc.hermitian_eig(m)
        residual = np.linalg.norm(v @ np.diag(w) @ v.conj().T - m)
        assert residual <= 1e-10 * max(1.0, np.max(np.abs(w)))

    def test_rejects_non_square(self):
        with pytest.raises(StructureError):
            qc.hermitian_eig(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(StructureError):
            qc.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**6), d=st.integers(1, 8))
    def test_eigenvectors_orthonormal(self, seed, d):
        m = random_hermitian(np.random.default_rng(seed), d)
        _, v = qc.hermitian_eig(m)
        assert np.linalg.norm(v.conj().T @ v - np.eye(d)) <= 1e-10


class TestPseudoinverse:
    def test_diagonal_rank_deficient(self):
        assert np.allclose(qc.pseudoinverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))

    def test_unitary(self):
        u = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
        assert np.allclose(qc.pseudoinverse(u), u.conj().T, atol=1e-12)

    def test_rectangular_penrose(self):
        m = random_complex(np.random.default_rng(5), 3, 5)
        p = qc.pseudoinverse(m)
        assert np.linalg.norm(m @ p @ m - m) <= 1e-9

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**6), rows=st.integers(1, 6), cols=st.integers(1, 6),
           rank_drop=st.integers(0, 2))
    def test_penrose_identities(self, seed, rows, cols, rank_drop):
        rng = np.random.default_rng(seed)
        rank = max(1, min(rows, cols) - rank_drop)
        m = random_complex(rng, rows, rank) @ random_complex(rng, rank, cols)
        p = qc.pseudoinverse(m)
        scale = max(1.0, np.linalg.norm(m))
        assert np.linalg.norm(m @ p @ m - m) <= 1e-9 * scale
        assert np.linalg.norm(p @ m @ p - p) <= 1e-9 * max(1.0, np.linalg.norm(p))
        assert np.linalg.norm((m @ p).conj().T - m @ p) <= 1e-9 * scale
        assert np.linalg.norm((p @ m).conj().T - p @ m) <= 1e-9 * scale


class TestIsPsd:
    def test_identity(self):
        assert qc.is_psd(np.eye(3))

    def test_pauli_x(self):
        assert not qc.is_psd(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_half_identity(self):
        assert qc.is_psd(0.5 * np.eye(2))

    def test_rejects_non_hermitian(self):
        with pytest.raises(StructureError):
            qc.is_psd(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestRangeSubspace:
    def test_diag(self):
        sub = qc.range_subspace(np.diag([1.0, 0.0]))
        assert sub.dim == 1
        assert sub.contains_vector([1.0, 0.0])
        assert not sub.contains_vector([0.0, 1.0])

    def test_zero_matrix(self):
        assert qc.range_subspace(np.zeros((3, 3))).dim == 0

    def test_rank_one_projector(self):
        sub = qc.range_subspace(0.5 * np.ones((2, 2)))
        assert sub.dim == 1
        assert sub.contains_vector([1.0, 1.0])

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6), d=st.integers(2, 6))
    def test_projector_dimension_matches_trace(self, seed, d):
        rng = np.random.default_rng(seed)
        rank = int(rng.integers(1, d + 1))
        gen = qc.SeededGenerator(seed)
        u = qc.haar_unitary(d, gen)
        p = u[:, :rank] @ u[:, :rank].conj().T
        sub = qc.range_subspace(p)
        assert sub.dim == round(float(np.real(np.trace(p))))


class TestSubspaceRelation:
    def test_reordered_basis_equal(self):
        a = Subspace(3, np.eye(3)[:, [0, 1]].astype(complex))
        b = Subspace(3, np.eye(3)[:, [1, 0]].astype(complex))
        assert qc.subspace_relation(a, b) is SubspaceRelation.EQUAL

    def test_containment(self):
        a = Subspace(2, np.eye(2)[:, [0]].astype(complex))
        b = Subspace(2, np.eye(2).astype(complex))
        assert qc.subspace_relation(a, b) is SubspaceRelation.A_INSIDE_B
        assert qc.subspace_relation(b, a) is SubspaceRelation.B_INSIDE_A

    def test_orthogonal(self):
        a = Subspace(2, np.eye(2)[:, [0]].astype(complex))
        b = Subspace(2, np.eye(2)[:, [1]].astype(complex))
        assert qc.subspace_relation(a, b) is SubspaceRelation.ORTHOGONAL

    def test_overlapping(self):
        a = Subspace(2, np.eye(2)[:, [0]].astype(complex))
        b = Subspace(2, np.array([[1.0], [1.0]], dtype=complex) / np.sqrt(2.0))
        assert qc.subspace_relation(a, b) is SubspaceRelation.OVERLAPPING

    def test_empty_subspaces(self):
        empty = Subspace(2, np.zeros((2, 0), dtype=complex))
        line = Subspace(2, np.eye(2)[:, [0]].astype(complex))
        assert qc.subspace_relation(empty, empty) is SubspaceRelation.EQUAL
        assert qc.subspace_relation(empty, line) is SubspaceRelation.A_INSIDE_B

    def test_ambient_mismatch(self):
        a = Subspace(2, np.eye(2).astype(complex))
        b = Subspace(3, np.eye(3).astype(complex))
        with pytest.raises(StructureError):
            qc.subspace_relation(a, b)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_swap_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(2, 6))
        u = qc.haar_unitary(d, qc.SeededGenerator(seed))
        v = qc.haar_unitary(d, qc.SeededGenerator(seed + 1))
        ka = int(rng.integers(1, d + 1))
        kb = int(rng.integers(1, d + 1))
        a = Subspace(d, u[:, :ka])
        b = Subspace(d, v[:, :kb])
        swapped = {
            SubspaceRelation.EQUAL: SubspaceRelation.EQUAL,
            SubspaceRelation.A_INSIDE_B: SubspaceRelation.B_INSIDE_A,
            SubspaceRelation.B_INSIDE_A: SubspaceRelation.A_INSIDE_B,
            SubspaceRelation.OVERLAPPING: SubspaceRelation.OVERLAPPING,
            SubspaceRelation.ORTHOGONAL: SubspaceRelation.ORTHOGONAL,
        }
        assert qc.subspace_relation(b, a) is swapped[qc.subspace_relation(a, b)]


class TestTolerances:
    def test_defaults(self):
        tol = qc.Tolerances()
        assert tol.eig_cut == 1e-9 and tol.mat_eq == 1e-8 and tol.prob_eq == 1e-7

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            qc.Tolerances(eig_cut=0.0)

    def test_rejects_large_prob_eq(self):
        with pytest.raises(ValueError):
            qc.Tolerances(prob_eq=0.5)

    def test_scaled(self):
        tol = qc.Tolerances().scaled(10.0)
        assert tol.mat_eq == 1e-7 and tol.prob_eq == 1e-6 and tol.eig_cut == 1e-9

    def test_subspace_rejects_skewed_basis(self):
        with pytest.raises(StructureError):
            Subspace(2, np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex))
