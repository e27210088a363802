"""Quantum operations as Kraus families.

An operation is a completely positive trace-non-increasing map given by a
nonempty list of Kraus matrices. Equality of maps is always decided on the
Choi matrix (Frobenius distance), since Kraus lists are not unique. The Choi
convention is row-major vectorisation of each Kraus operator, i.e. the Choi
matrix lives on output x input and the Choi of the identity channel is the
unnormalised maximally entangled projector.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import StructureError
from .linalg import DEFAULT_TOL, Tolerances, as_matrix, is_hermitian, is_psd


@dataclass(frozen=True)
class QuantumOperation:
    """A CP trace-non-increasing map held as Kraus matrices.

    Each Kraus matrix has shape ``(dim_out, dim_in)``. The zero map is
    representable as a list containing one zero matrix. Trace-non-increase
    is not enforced at construction; ``validate_operation`` reports it.
    """

    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise StructureError("operation dimensions must be positive")
        mats = tuple(as_matrix(k, "kraus matrix") for k in self.kraus)
        if not mats:
            raise StructureError("operation needs at least one Kraus matrix")
        for k in mats:
            if k.shape != (self.dim_out, self.dim_in):
                raise StructureError(
                    f"kraus matrix has shape {k.shape}, expected "
                    f"({self.dim_out}, {self.dim_in})"
                )
        object.__setattr__(self, "kraus", mats)

    def effect(self) -> np.ndarray:
        """The effect E = sum of K^dag K; Tr[E rho] is the outcome probability."""
        out = np.zeros((self.dim_in, self.dim_in), dtype=complex)
        for k in self.kraus:
            out += k.conj().T @ k
        return out


@dataclass(frozen=True)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = as_matrix(self.matrix, "choi matrix")
        d = self.dim_in * self.dim_out
        if mat.shape != (d, d):
            raise StructureError(f"choi matrix has shape {mat.shape}, expected ({d}, {d})")
        object.__setattr__(self, "matrix", mat)

    def output_trace(self) -> np.ndarray:
        """Partial trace over the output factor (transpose of the effect)."""
        t = self.matrix.reshape(self.dim_out, self.dim_in, self.dim_out, self.dim_in)
        return np.einsum("ijik->jk", t)


def choi(op: QuantumOperation) -> ChoiMatrix:
    """Choi matrix sum_k vec(K_k) vec(K_k)^dag with row-major vec."""
    vecs = np.stack([k.reshape(-1) for k in op.kraus])
    return ChoiMatrix(op.dim_in, op.dim_out, np.einsum("ki,kj->ij", vecs, vecs.conj()))


def choi_distance(a: QuantumOperation, b: QuantumOperation) -> float:
    """Frobenius distance between the Choi matrices of two maps."""
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise StructureError("operations act between different spaces")
    return float(np.linalg.norm(choi(a).matrix - choi(b).matrix))


def ops_equal(a: QuantumOperation, b: QuantumOperation, tol: Tolerances = DEFAULT_TOL) -> bool:
    return choi_distance(a, b) <= tol.mat_eq


@dataclass(frozen=True)
class OperationReport:
    is_cp: bool
    is_tni: bool
    is_tp: bool

    @property
    def is_valid(self) -> bool:
        return self.is_cp and self.is_tni


def validate_operation(op: QuantumOperation, tol: Tolerances = DEFAULT_TOL) -> OperationReport:
    """Check complete positivity (Choi PSD, a numerical cross-check for Kraus
    form), trace-non-increase (I - E PSD) and trace preservation (E = I)."""
    c = choi(op).matrix
    cp = is_psd(c, tol) if is_hermitian(c, tol) else False
    effect = op.effect()
    tni = is_psd(np.eye(op.dim_in) - effect, tol)
    tp = float(np.linalg.norm(effect - np.eye(op.dim_in))) <= tol.mat_eq
    return OperationReport(is_cp=cp, is_tni=tni, is_tp=tp)


def is_atomic(op: QuantumOperation, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the Choi matrix has numerical rank at most one.

    Atomic operations sit on extremal rays of the CP cone; a Kraus list
    of mutually proportional matrices still counts as atomic.
    """
    w = np.linalg.eigvalsh(_hermitized(choi(op).matrix))
    top = float(w[-1])
    if top <= 0.0:
        return True
    return int(np.count_nonzero(w > tol.eig_cut * top)) <= 1


def _hermitized(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class DensityState:
    """A density operator, possibly on a composite system.

    ``dims`` lists the tensor factors in kron order; ``matrix`` acts on the
    full product space. Validated at construction: Hermitian, PSD within
    ``eig_cut`` and unit trace within ``prob_eq`` (package defaults).
    """

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise StructureError("state dims must be positive")
        mat = as_matrix(self.matrix, "state matrix")
        d = prod(dims)
        if mat.shape != (d, d):
            raise StructureError(f"state matrix has shape {mat.shape}, expected ({d}, {d})")
        if not is_hermitian(mat):
            raise StructureError("state matrix is not Hermitian within tolerance")
        if not is_psd(mat):
            raise StructureError("state matrix is not positive semidefinite")
        if abs(float(np.real(np.trace(mat))) - 1.0) > DEFAULT_TOL.prob_eq:
            raise StructureError("state matrix does not have unit trace")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def reduce(self, keep: int) -> "DensityState":
        """Partial trace keeping only the tensor factor at index ``keep``."""
        if not 0 <= keep < len(self.dims):
            raise StructureError(f"factor index {keep} out of range")
        n = len(self.dims)
        shaped = self.matrix.reshape(self.dims + self.dims)
        # Row axis i and column axis n+i share an index (trace) except `keep`.
        row_idx = list(range(n))
        col_idx = list(range(n))
        col_idx[keep] = n
        reduced = np.einsum(shaped, row_idx + col_idx, [keep, n])
        return DensityState((self.dims[keep],), reduced)


def pure_state(vector, dims=None) -> DensityState:
    """Density state |v><v| from a (normalised or unnormalised) state vector."""
    vec = np.asarray(vector, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise StructureError("cannot build a state from the zero vector")
    vec = vec / norm
    if dims is None:
        dims = (vec.size,)
    return DensityState(tuple(dims), np.outer(vec, vec.conj()))


def basis_state(d: int, index: int, dims=None) -> DensityState:
    if not 0 <= index < d:
        raise StructureError(f"basis index {index} out of range for dimension {d}")
    vec = np.zeros(d)
    vec[index] = 1.0
    return pure_state(vec, dims)


def maximally_mixed(d: int, dims=None) -> DensityState:
    return DensityState(tuple(dims) if dims is not None else (d,), np.eye(d) / d)


def identity_operation(d: int) -> QuantumOperation:
    return QuantumOperation(d, d, (np.eye(d, dtype=complex),))


def zero_operation(dim_in: int, dim_out: int) -> QuantumOperation:
    return QuantumOperation(dim_in, dim_out, (np.zeros((dim_out, dim_in), dtype=complex),))


def projector_operation(projector) -> QuantumOperation:
    """The single-Kraus map rho -> P rho P for a projector (or any matrix) P."""
    mat = as_matrix(projector, "projector")
    if mat.shape[0] != mat.shape[1]:
        raise StructureError("projector must be square")
    return QuantumOperation(mat.shape[0], mat.shape[0], (mat,))


def _extended_kraus(op: QuantumOperation, state: DensityState) -> tuple[list[np.ndarray], tuple[int, ...]]:
    """Kraus matrices acting as op (tensor) identity on the trailing factors."""
    if state.dims[0] != op.dim_in:
        raise StructureError(
            f"state's first factor has dimension {state.dims[0]}, operation "
            f"expects {op.dim_in}"
        )
    rest = prod(state.dims[1:]) if len(state.dims) > 1 else 1
    if rest == 1:
        mats = list(op.kraus)
    else:
        eye = np.eye(rest)
        mats = [np.kron(k, eye) for k in op.kraus]
    out_dims = (op.dim_out,) + state.dims[1:]
    return mats, out_dims


def apply(op: QuantumOperation, state: DensityState, tol: Tolerances = DEFAULT_TOL):
    """Apply an operation to a state, acting on the first tensor factor.

    Returns ``(probability, conditional_state_or_None)``. The probability is
    clamped to [0, 1]; the conditional state is the renormalised output when
    the probability exceeds ``prob_eq``, otherwise ``None``.
    """
    mats, out_dims = _extended_kraus(op, state)
    out = np.zeros((prod(out_dims), prod(out_dims)), dtype=complex)
    for k in mats:
        out += k @ state.matrix @ k.conj().T
    raw = float(np.real(np.trace(out)))
    probability = min(1.0, max(0.0, raw))
    if probability <= tol.prob_eq:
        return probability, None
    return probability, DensityState(out_dims, _hermitized(out) / raw)


def apply_unnormalized(op: QuantumOperation, state: DensityState) -> np.ndarray:
    """The raw output sum_k K rho K^dag without renormalisation."""
    mats, out_dims = _extended_kraus(op, state)
    out = np.zeros((prod(out_dims), prod(out_dims)), dtype=complex)
    for k in mats:
        out += k @ state.matrix @ k.conj().T
    return out


def compose_seq(second: QuantumOperation, first: QuantumOperation) -> QuantumOperation:
    """Sequential composition second after first; Kraus list of all products."""
    if first.dim_out != second.dim_in:
        raise StructureError(
            f"cannot compose: first outputs dimension {first.dim_out}, "
            f"second expects {second.dim_in}"
        )
    mats = tuple(k2 @ k1 for k2 in second.kraus for k1 in first.kraus)
    return QuantumOperation(first.dim_in, second.dim_out, mats)


def compose_par(a: QuantumOperation, b: QuantumOperation) -> QuantumOperation:
    """Parallel composition a (tensor) b; dimensions multiply."""
    mats = tuple(np.kron(ka, kb) for ka in a.kraus for kb in b.kraus)
    return QuantumOperation(a.dim_in * b.dim_in, a.dim_out * b.dim_out, mats)


def coarse_grain_ops(parts) -> QuantumOperation:
    """Sum of operations, realised by concatenating Kraus lists."""
    parts = list(parts)
    if not parts:
        raise StructureError("cannot coarse-grain an empty list of operations")
    dims = {(p.dim_in, p.dim_out) for p in parts}
    if len(dims) != 1:
        raise StructureError(f"operations act between different spaces: {sorted(dims)}")
    mats = tuple(k for p in parts for k in p.kraus)
    return QuantumOperation(parts[0].dim_in, parts[0].dim_out, mats)
