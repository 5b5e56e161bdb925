"""Per-letter Schmidt data and conditional type classes 𝒯_n(t|xⁿ)."""

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce

import numpy as np
import numpy.typing as npt

from ..errors import EnsembleError, GuardError
from ..linalg_core import ComplexMatrix

RECONSTRUCTION_TOL: float = 1e-10
MAX_SEQUENCES: int = 2**8


@dataclass(kw_only=True, frozen=True, eq=False)
class SchmidtData:
    """
    |ψ⟩ = Σ_y √p(y)|ξ_y⟩⊗|ξ′_y⟩. `weights` is padded with zeros to d_A so that
    the columns of `a_basis` form a complete basis of A.
    """

    weights: npt.NDArray[np.float64]
    a_basis: ComplexMatrix
    g2_basis: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        r = self.g2_basis.shape[1]
        return (self.a_basis[:, :r] * np.sqrt(self.weights[:r])) @ self.g2_basis.T


def schmidt_decompose(psi: npt.ArrayLike, dims: tuple[int, int] | None = None) -> SchmidtData:
    """Schmidt decomposition of a pure state on A⊗G₂, given as a coefficient matrix or a vector."""
    c = np.asarray(psi, dtype=np.complex128)
    if c.ndim == 1:
        if dims is None:
            raise EnsembleError("a state vector needs its (d_A, d_G2) dimensions")
        c = c.reshape(dims)
    norm = float(np.linalg.norm(c))
    if abs(norm - 1.0) > RECONSTRUCTION_TOL:
        raise EnsembleError(f"state is not normalized: norm {norm:.15f}")
    u, s, vh = np.linalg.svd(c, full_matrices=True)
    weights = np.zeros(c.shape[0])
    weights[: s.size] = s**2
    data = SchmidtData(weights=weights, a_basis=u, g2_basis=vh[: s.size].T)
    error = float(np.max(np.abs(data.reconstruct() - c)))
    if error > RECONSTRUCTION_TOL:
        raise EnsembleError(f"Schmidt reconstruction error {error:.3e}")
    return data


@dataclass(kw_only=True, frozen=True)
class TypeClass:
    type_vector: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(kw_only=True, frozen=True, eq=False)
class TypeDecomposition:
    """
    Partition of 𝒴ⁿ by joint type with xⁿ. `basis` holds the product Schmidt
    vectors |ξ_{yⁿ|xⁿ}⟩ as columns, ordered class by class and lexicographically
    within a class.
    """

    x_n: tuple[int, ...]
    y_alphabet_size: int
    classes: tuple[TypeClass, ...]
    basis: ComplexMatrix | None = None

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.classes)

    def class_projectors(self) -> list[ComplexMatrix]:
        if self.basis is None:
            raise EnsembleError("type decomposition was built without Schmidt data")
        projectors, start = [], 0
        for size in self.sizes:
            cols = self.basis[:, start : start + size]
            projectors.append(cols @ cols.conj().T)
            start += size
        return projectors


def conditional_types(
    x_n: Sequence[int],
    y_alphabet_size: int,
    schmidt: Sequence[SchmidtData] | None = None,
    max_sequences: int = MAX_SEQUENCES,
) -> TypeDecomposition:
    x_n = tuple(int(x) for x in x_n)
    n = len(x_n)
    if n < 1:
        raise GuardError("conditioning sequence must be nonempty")
    if y_alphabet_size**n > max_sequences:
        raise GuardError(f"{y_alphabet_size}^{n} sequences exceed the guard of {max_sequences}")
    x_alphabet = max(x_n) + 1

    grouped: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for y_n in itertools.product(range(y_alphabet_size), repeat=n):
        counts = np.zeros((x_alphabet, y_alphabet_size), dtype=int)
        for x, y in zip(x_n, y_n, strict=True):
            counts[x, y] += 1
        grouped.setdefault(tuple(counts.reshape(-1).tolist()), []).append(y_n)
    classes = tuple(
        TypeClass(type_vector=t, members=tuple(grouped[t])) for t in sorted(grouped)
    )

    basis = None
    if schmidt is not None:
        if any(schmidt[x].a_basis.shape[0] != y_alphabet_size for x in set(x_n)):
            raise EnsembleError("Schmidt bases must span the whole input space")
        columns = [
            reduce(np.kron, (schmidt[x].a_basis[:, y] for x, y in zip(x_n, y_n, strict=True)))
            for c in classes
            for y_n in c.members
        ]
        basis = np.stack(columns, axis=1)
    return TypeDecomposition(x_n=x_n, y_alphabet_size=y_alphabet_size, classes=classes, basis=basis)
