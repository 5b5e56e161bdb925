"""
Dense complex-matrix primitives for states of up to a few thousand dimensions.

Subsystems are ordered left to right in every Kronecker product; a
`DimensionList` names the dimension of each factor in that order.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import reduce
from math import prod

import numpy as np
import numpy.typing as npt
from scipy.special import entr
from scipy.stats import unitary_group

from .errors import DensityValidationError, DimensionError

ComplexMatrix = npt.NDArray[np.complex128]
DimensionList = tuple[int, ...]

HERMITIAN_TOL: float = 1e-10
EIGENVALUE_CLIP: float = 1e-12
NEGATIVE_EIGENVALUE_TOL: float = 1e-8


def as_matrix(a: npt.ArrayLike) -> ComplexMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got an array with {m.ndim} axes")
    return m


def ket(index: int, dim: int) -> npt.NDArray[np.complex128]:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def projector(vector: npt.ArrayLike) -> ComplexMatrix:
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return a.conj().T


def tensor_product(a: npt.ArrayLike, b: npt.ArrayLike, *more: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product, (A⊗B)[i·rB+k, j·cB+l] = A[i,j]·B[k,l]."""
    return reduce(np.kron, (as_matrix(m) for m in (b, *more)), as_matrix(a))


def _check_dims(rho: ComplexMatrix, dims: Sequence[int]) -> DimensionList:
    dims = tuple(int(d) for d in dims)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"operator is not square: shape {rho.shape}")
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid dimension list {dims}")
    if prod(dims) != rho.shape[0]:
        raise DimensionError(
            f"dimension list {dims} multiplies to {prod(dims)}, operator has dimension {rho.shape[0]}"
        )
    return dims


def partial_trace(
    rho: npt.ArrayLike, dims: Sequence[int], keep: Iterable[int]
) -> ComplexMatrix:
    """Marginal on the kept subsystems, in their original relative order."""
    rho = as_matrix(rho)
    dims = _check_dims(rho, dims)
    kept = sorted(set(keep))
    if not kept:
        raise DimensionError("keep must name at least one subsystem")
    if kept[0] < 0 or kept[-1] >= len(dims):
        raise DimensionError(f"subsystem indices {kept} out of range for {len(dims)} subsystems")
    traced = [i for i in range(len(dims)) if i not in kept]
    n = len(dims)
    d_keep = prod(dims[i] for i in kept)
    d_trace = prod(dims[i] for i in traced)

    order = kept + traced
    tensor = rho.reshape(dims + dims).transpose(order + [n + i for i in order])
    tensor = tensor.reshape(d_keep, d_trace, d_keep, d_trace)
    return np.trace(tensor, axis1=1, axis2=3)


def permute_subsystems(rho: npt.ArrayLike, dims: Sequence[int], order: Sequence[int]) -> ComplexMatrix:
    """Reorder tensor factors so that new factor i is old factor order[i]."""
    rho = as_matrix(rho)
    dims = _check_dims(rho, dims)
    order = list(order)
    if sorted(order) != list(range(len(dims))):
        raise DimensionError(f"{order} is not a permutation of {len(dims)} subsystems")
    n = len(dims)
    tensor = rho.reshape(dims + dims).transpose(order + [n + i for i in order])
    return tensor.reshape(rho.shape)


def hermitian_eigenvalues(h: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> npt.NDArray[np.float64]:
    """Real eigenvalues of a Hermitian matrix, in descending order."""
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"operator is not square: shape {h.shape}")
    deviation = float(np.max(np.abs(h - dagger(h)))) if h.size else 0.0
    if deviation > tol:
        raise DensityValidationError(
            f"matrix is not Hermitian: max |H - H†| = {deviation:.3e} exceeds {tol:.1e}"
        )
    return np.linalg.eigvalsh(0.5 * (h + dagger(h)))[::-1]


def von_neumann_entropy(rho: npt.ArrayLike) -> float:
    """S(ρ) in bits, with eigenvalues below 1e-12 treated as zero."""
    rho = as_matrix(rho)
    eigenvalues = hermitian_eigenvalues(rho)
    if eigenvalues[-1] < -NEGATIVE_EIGENVALUE_TOL:
        raise DensityValidationError(
            f"not a state: eigenvalue {eigenvalues[-1]:.3e} below -{NEGATIVE_EIGENVALUE_TOL:.0e}"
        )
    eigenvalues = np.where(eigenvalues < EIGENVALUE_CLIP, 0.0, eigenvalues)
    entropy = float(np.sum(entr(eigenvalues)) / np.log(2))
    return min(max(entropy, 0.0), float(np.log2(rho.shape[0])))


def trace_distance(rho: npt.ArrayLike, sigma: npt.ArrayLike) -> float:
    """½‖ρ − σ‖₁."""
    rho, sigma = as_matrix(rho), as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"cannot compare operators of shapes {rho.shape} and {sigma.shape}")
    return 0.5 * float(np.sum(np.abs(hermitian_eigenvalues(rho - sigma))))


@dataclass(kw_only=True, frozen=True)
class DensityReport:
    """Outcome of a density-operator check; truthy when the matrix is a state."""

    hermitian_error: float
    trace_error: float
    min_eigenvalue: float
    failures: tuple[str, ...] = ()

    def __bool__(self):
        return not self.failures


def validate_density(rho: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> DensityReport:
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"operator is not square: shape {rho.shape}")
    failures = []
    hermitian_error = float(np.max(np.abs(rho - dagger(rho))))
    if hermitian_error > tol:
        failures.append(f"hermiticity: max |ρ - ρ†| = {hermitian_error:.3e}")
    trace_error = abs(complex(np.trace(rho)) - 1.0)
    if trace_error > tol:
        failures.append(f"trace: |tr ρ - 1| = {trace_error:.3e}")
    min_eigenvalue = float(np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))[0])
    if min_eigenvalue < -tol:
        failures.append(f"positivity: minimum eigenvalue {min_eigenvalue:.3e}")
    return DensityReport(
        hermitian_error=hermitian_error,
        trace_error=trace_error,
        min_eigenvalue=min_eigenvalue,
        failures=tuple(failures),
    )


def require_density(rho: npt.ArrayLike, what: str = "state", tol: float = HERMITIAN_TOL) -> None:
    report = validate_density(rho, tol)
    if not report:
        raise DensityValidationError(f"{what} is not a density operator: {'; '.join(report.failures)}")


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)


def random_density_matrix(
    dim: int, rng: np.random.Generator, rank: int | None = None
) -> ComplexMatrix:
    """Random state from a Ginibre matrix of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho)
