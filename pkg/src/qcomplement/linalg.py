"""Dense complex-matrix kernel: eigendecomposition, pseudoinverse, PSD tests,
and subspace (range) comparison.

Every decision procedure in the package reduces to the primitives here, so the
tolerance semantics are fixed in one place:

* rank decisions use a relative cut ``eig_cut * sigma_max`` (scale invariant),
* PSD tests tolerate eigenvalues down to ``-eig_cut * max(1, spectral norm)``,
* subspace comparison uses principal angles rather than projector differences,
  which is stabler for near-degenerate bases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by every decision procedure.

    ``eig_cut`` cuts eigenvalue/singular-value spectra (rank, PSD slack),
    ``mat_eq`` bounds Frobenius distances treated as equality of matrices or
    maps, and ``prob_eq`` bounds probability comparisons.
    """

    eig_cut: float = 1e-9
    mat_eq: float = 1e-8
    prob_eq: float = 1e-7

    def __post_init__(self):
        for name in ("eig_cut", "mat_eq", "prob_eq"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.prob_eq < 0.5:
            raise ValueError("prob_eq must be below 0.5")

    def scaled(self, factor: float) -> "Tolerances":
        """Scale mat_eq and prob_eq together by one factor (eig_cut fixed)."""
        return Tolerances(self.eig_cut, self.mat_eq * factor, self.prob_eq * factor)


DEFAULT_TOL = Tolerances()


class SubspaceRelation(enum.Enum):
    EQUAL = "equal"
    A_INSIDE_B = "a-inside-b"
    B_INSIDE_A = "b-inside-a"
    OVERLAPPING = "overlapping"
    ORTHOGONAL = "orthogonal"


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d complex array or raise ``StructureError``."""
    from .errors import StructureError

    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise StructureError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.size and not np.all(np.isfinite(arr.view(float))):
        raise StructureError(f"{name} contains non-finite entries")
    return arr


def is_hermitian(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(arr)))
    return float(np.linalg.norm(arr - arr.conj().T)) <= tol.mat_eq * scale


def _require_hermitian(m, tol: Tolerances, name: str) -> np.ndarray:
    from .errors import StructureError

    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise StructureError(f"{name} must be square, got shape {arr.shape}")
    if not is_hermitian(arr, tol):
        raise StructureError(f"{name} is not Hermitian within tolerance")
    return arr


def hermitian_eig(m, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecompose a Hermitian matrix.

    Returns ``(w, V)`` with real eigenvalues ``w`` sorted descending and
    orthonormal eigenvector columns ``V`` in matching order, so that
    ``V @ diag(w) @ V.conj().T`` reconstructs the input.
    """
    arr = _require_hermitian(m, tol, "matrix")
    w, v = np.linalg.eigh(arr)
    # eigh returns ascending order; reversing keeps ties deterministic.
    return w[::-1], v[:, ::-1]


def pseudoinverse(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse with singular values below
    ``eig_cut * sigma_max`` treated as zero."""
    arr = as_matrix(m)
    return np.linalg.pinv(arr, rcond=tol.eig_cut)


def is_psd(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the minimum eigenvalue is at least
    ``-eig_cut * max(1, spectral norm)``. Input must be Hermitian."""
    arr = _require_hermitian(m, tol, "matrix")
    if arr.shape[0] == 0:
        return True
    w = np.linalg.eigvalsh(arr)
    scale = max(1.0, float(np.max(np.abs(w))))
    return float(w[0]) >= -tol.eig_cut * scale


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^ambient_dim given by an orthonormal basis.

    ``basis`` has shape ``(ambient_dim, dim)``; a zero-column basis denotes
    the trivial subspace.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        from .errors import StructureError

        basis = np.asarray(self.basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise StructureError(
                f"basis must have shape ({self.ambient_dim}, k), got {basis.shape}"
            )
        if basis.shape[1] > self.ambient_dim:
            raise StructureError("basis has more columns than the ambient dimension")
        gram = basis.conj().T @ basis
        if basis.shape[1] and np.max(np.abs(gram - np.eye(basis.shape[1]))) > 1e-10:
            raise StructureError("basis columns are not orthonormal within 1e-10")
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace."""
        return self.basis @ self.basis.conj().T

    def contains_vector(self, v, tol: Tolerances = DEFAULT_TOL) -> bool:
        vec = np.asarray(v, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            return True
        if self.dim == 0:
            return False
        return float(np.linalg.norm(self.basis.conj().T @ vec)) >= (1.0 - tol.mat_eq) * norm


def range_subspace(m, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the column space at numerical rank threshold
    ``eig_cut * sigma_max``."""
    arr = as_matrix(m)
    if arr.size == 0:
        return Subspace(arr.shape[0], np.zeros((arr.shape[0], 0), dtype=complex))
    u, s, _ = np.linalg.svd(arr, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol.eig_cut * s[0]))
    return Subspace(arr.shape[0], u[:, :rank])


def subspace_relation(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT_TOL) -> SubspaceRelation:
    """Classify how two subspaces of the same ambient space relate.

    Containment is decided by principal angles: a subspace lies inside the
    other when projecting each of its basis vectors onto the other preserves
    norm within ``mat_eq``. ``ORTHOGONAL`` requires all cross inner products
    at most ``mat_eq``.
    """
    from .errors import StructureError

    if a.ambient_dim != b.ambient_dim:
        raise StructureError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )
    if a.dim == 0 and b.dim == 0:
        return SubspaceRelation.EQUAL
    if a.dim == 0:
        return SubspaceRelation.A_INSIDE_B
    if b.dim == 0:
        return SubspaceRelation.B_INSIDE_A
    cross = a.basis.conj().T @ b.basis
    a_in_b = bool(np.all(np.linalg.norm(cross, axis=1) >= 1.0 - tol.mat_eq))
    b_in_a = bool(np.all(np.linalg.norm(cross, axis=0) >= 1.0 - tol.mat_eq))
    if a_in_b and b_in_a:
        return SubspaceRelation.EQUAL
    if a_in_b:
        return SubspaceRelation.A_INSIDE_B
    if b_in_a:
        return SubspaceRelation.B_INSIDE_A
    if float(np.max(np.abs(cross))) <= tol.mat_eq:
        return SubspaceRelation.ORTHOGONAL
    return SubspaceRelation.OVERLAPPING


def subspace_contained(inner: Subspace, outer: Subspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``inner`` is contained in ``outer`` (equality included)."""
    rel = subspace_relation(inner, outer, tol)
    return rel in (SubspaceRelation.EQUAL, SubspaceRelation.A_INSIDE_B)
