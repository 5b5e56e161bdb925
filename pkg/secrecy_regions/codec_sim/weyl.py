"""
Heisenberg-Weyl operators and the keyed unitaries U(γ) = ⊕_t (−1)^{c_t} Σ_X^{a_t} Σ_Z^{b_t}.

Σ_X|j⟩ = |j−1 mod d⟩ and Σ_Z|j⟩ = ωʲ|j⟩ with ω = e^{2πi/d}, so that
Σ_XΣ_Z = ω Σ_ZΣ_X.
"""

from collections.abc import Iterator
from dataclasses import dataclass
from math import prod

import numpy as np
from scipy.linalg import block_diag

from ..errors import EnsembleError, KeyRangeError
from ..linalg_core import ComplexMatrix
from .type_classes import TypeDecomposition


def heisenberg_weyl(d: int, a: int, b: int) -> ComplexMatrix:
    if d < 1:
        raise KeyRangeError(f"dimension must be positive, got {d}")
    if not (0 <= a < d and 0 <= b < d):
        raise KeyRangeError(f"exponents ({a}, {b}) out of range for dimension {d}")
    shift = np.roll(np.eye(d, dtype=np.complex128), -1, axis=0)
    phase = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(phase, b)


@dataclass(frozen=True)
class GammaKey:
    """One (a_t, b_t, c_t) triple per type class, in class order."""

    triples: tuple[tuple[int, int, int], ...]

    def validate(self, decomp: TypeDecomposition) -> None:
        if len(self.triples) != len(decomp.classes):
            raise KeyRangeError(f"key has {len(self.triples)} triples, decomposition has {len(decomp.classes)} classes")
        for (a, b, c), size in zip(self.triples, decomp.sizes, strict=True):
            if not (0 <= a < size and 0 <= b < size and c in (0, 1)):
                raise KeyRangeError(f"triple {(a, b, c)} out of range for a class of size {size}")

    @classmethod
    def identity(cls, decomp: TypeDecomposition) -> "GammaKey":
        return cls(tuple((0, 0, 0) for _ in decomp.classes))


def key_space_size(decomp: TypeDecomposition) -> int:
    """|Γ_{xⁿ}| counting every in-range triple of every class once."""
    return prod(2 * size * size for size in decomp.sizes)


def key_from_index(decomp: TypeDecomposition, index: int) -> GammaKey:
    """Mixed-radix decoding with radix 2·|𝒯_t|² per class, first class most significant."""
    if not 0 <= index < key_space_size(decomp):
        raise KeyRangeError(f"key index {index} out of range")
    triples = []
    for size in reversed(decomp.sizes):
        index, digit = divmod(index, 2 * size * size)
        rest, c = divmod(digit, 2)
        a, b = divmod(rest, size)
        triples.append((a, b, c))
    return GammaKey(tuple(reversed(triples)))


def enumerate_keys(decomp: TypeDecomposition) -> Iterator[GammaKey]:
    for index in range(key_space_size(decomp)):
        yield key_from_index(decomp, index)


def random_key(decomp: TypeDecomposition, rng: np.random.Generator) -> GammaKey:
    return GammaKey(
        tuple(
            (int(rng.integers(size)), int(rng.integers(size)), int(rng.integers(2)))
            for size in decomp.sizes
        )
    )


def keyed_unitary(decomp: TypeDecomposition, key: GammaKey) -> ComplexMatrix:
    """U(γ) in the type-ordered basis: block diagonal, one Heisenberg-Weyl block per class."""
    key.validate(decomp)
    return block_diag(
        *(
            (-1) ** c * heisenberg_weyl(size, a, b)
            for (a, b, c), size in zip(key.triples, decomp.sizes, strict=True)
        )
    ).astype(np.complex128)


def input_unitary(decomp: TypeDecomposition, key: GammaKey) -> ComplexMatrix:
    """U(γ) on Aⁿ in the computational basis, Ξ·U(γ)·Ξ†."""
    if decomp.basis is None:
        raise EnsembleError("type decomposition was built without Schmidt data")
    return decomp.basis @ keyed_unitary(decomp, key) @ decomp.basis.conj().T
