"""Seeded random generators for property suites and harnesses.

Streams are numpy PCG64 generators keyed by ``SeedSequence(seed, spawn_key)``,
so the same seed and parameters reproduce bit-identical draws, and per-trial
children are statistically independent. The stream algorithm identifier is
echoed into harness reports for reproducibility across releases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .instruments import ElementaryProperty, Instrument, from_pvm
from .operations import DensityState, QuantumOperation

STREAM_ALGORITHM = "pcg64"


@dataclass(frozen=True)
class SeededGenerator:
    """A reproducible random stream with deterministic child derivation."""

    seed: int
    path: tuple[int, ...] = ()
    algorithm: str = STREAM_ALGORITHM

    @property
    def rng(self) -> np.random.Generator:
        return np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.path))
        )

    def child(self, index: int) -> "SeededGenerator":
        """Independent stream for one trial; safe to use concurrently."""
        return SeededGenerator(self.seed, self.path + (int(index),), self.algorithm)


def _ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def haar_unitary(d: int, gen: SeededGenerator) -> np.ndarray:
    """Haar-distributed unitary via phase-corrected QR of a Ginibre matrix."""
    if d < 1:
        raise StructureError("dimension must be at least 1")
    q, r = np.linalg.qr(_ginibre(d, d, gen.rng))
    phases = np.diagonal(r).copy()
    phases = phases / np.abs(phases)
    return q * phases


def random_pvm(d: int, ranks, gen: SeededGenerator) -> ElementaryProperty:
    """Haar-rotated coordinate-block PVM with the requested rank profile."""
    ranks = [int(r) for r in ranks]
    if any(r < 1 for r in ranks) or sum(ranks) != d:
        raise StructureError(f"ranks must be positive and sum to {d}, got {ranks}")
    u = haar_unitary(d, gen)
    projectors = {}
    start = 0
    for i, rank in enumerate(ranks):
        block = u[:, start : start + rank]
        projectors[f"x{i}"] = block @ block.conj().T
        start += rank
    return from_pvm(projectors)


def random_density(d: int, rank: int, gen: SeededGenerator) -> DensityState:
    """Random mixed state of the given rank (normalised Wishart factor)."""
    if not 1 <= rank <= d:
        raise StructureError(f"rank must be in [1, {d}], got {rank}")
    g = _ginibre(d, rank, gen.rng)
    m = g @ g.conj().T
    return DensityState((d,), m / float(np.real(np.trace(m))))


def random_rank_profile(d: int, parts: int, rng: np.random.Generator) -> list[int]:
    """Random composition of d into the given number of positive parts."""
    if not 1 <= parts <= d:
        raise StructureError(f"parts must be in [1, {d}], got {parts}")
    cuts = np.sort(rng.choice(np.arange(1, d), size=parts - 1, replace=False))
    edges = np.concatenate(([0], cuts, [d]))
    return list(np.diff(edges).astype(int))


def random_instrument(
    d_in: int, d_out: int, labels, gen: SeededGenerator, kraus_per_outcome: int = 1
) -> Instrument:
    """Random instrument: jointly normalised Gaussian Kraus families.

    With one Kraus matrix per outcome, every outcome is atomic.
    """
    labels = list(labels)
    if not labels:
        raise StructureError("instrument needs at least one outcome")
    rng = gen.rng
    raw = {
        label: [_ginibre(d_out, d_in, rng) for _ in range(kraus_per_outcome)]
        for label in labels
    }
    total = np.zeros((d_in, d_in), dtype=complex)
    for mats in raw.values():
        for k in mats:
            total += k.conj().T @ k
    w, v = np.linalg.eigh(total)
    inv_sqrt = v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T
    outcomes = {
        label: QuantumOperation(d_in, d_out, tuple(k @ inv_sqrt for k in mats))
        for label, mats in raw.items()
    }
    return Instrument(d_in, d_out, outcomes)
