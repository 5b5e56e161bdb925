"""
Input ensembles (p_X, φ_{G₁G₂}, F^(x)) and the classical-quantum state ω_{XG₂BE}.

The classical register X is never materialized: a `CqState` keeps one block
ρˣ per letter on G₂⊗B⊗E, in that subsystem order.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy.linalg import block_diag

from .channels import WiretapChannel, apply_to_subsystem
from .errors import EnsembleError, SubsystemError
from .linalg_core import (
    ComplexMatrix,
    DimensionList,
    as_matrix,
    dagger,
    partial_trace,
    projector,
    require_density,
)

PROBABILITY_TOL: float = 1e-12
NORM_TOL: float = 1e-12
ISOMETRY_TOL: float = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
MAXIMALLY_ENTANGLED = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


class Subsystem(StrEnum):
    G2 = "G2"
    B = "B"
    E = "E"


@dataclass(kw_only=True, frozen=True, eq=False)
class Ensemble:
    """
    p_x over a finite alphabet, a pure state φ on G₁⊗G₂ (G₁ first) and one
    isometric encoder F^(x): G₁ → A per letter.
    """

    p_x: npt.NDArray[np.float64]
    phi: npt.NDArray[np.complex128]
    d_g1: int
    d_g2: int
    encoders: tuple[ComplexMatrix, ...]
    label: str = "custom"
    parameters: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        p_x = np.asarray(self.p_x, dtype=np.float64)
        if p_x.ndim != 1 or p_x.size == 0:
            raise EnsembleError("p_x must be a nonempty probability vector")
        if np.any(p_x < 0) or abs(p_x.sum() - 1.0) > PROBABILITY_TOL:
            raise EnsembleError(f"p_x is not a probability vector: {p_x.tolist()}")
        object.__setattr__(self, "p_x", p_x)
        object.__setattr__(self, "phi", np.asarray(self.phi, dtype=np.complex128))
        if self.phi.shape != (self.d_g1 * self.d_g2,):
            raise EnsembleError(f"phi has shape {self.phi.shape}, expected ({self.d_g1 * self.d_g2},)")
        if abs(np.linalg.norm(self.phi) - 1.0) > NORM_TOL:
            raise EnsembleError(f"phi is not normalized: norm {np.linalg.norm(self.phi):.15f}")
        if len(self.encoders) != p_x.size:
            raise EnsembleError(f"{p_x.size} letters but {len(self.encoders)} encoders")
        object.__setattr__(self, "encoders", tuple(as_matrix(f) for f in self.encoders))
        d_a = self.encoders[0].shape[0]
        for x, f in enumerate(self.encoders):
            if f.shape != (d_a, self.d_g1):
                raise EnsembleError(f"encoder {x} has shape {f.shape}, expected {(d_a, self.d_g1)}")
            deviation = float(np.max(np.abs(dagger(f) @ f - np.eye(self.d_g1))))
            if deviation > ISOMETRY_TOL:
                raise EnsembleError(f"encoder {x} is not an isometry: deviation {deviation:.3e}")

    @property
    def d_a(self) -> int:
        return self.encoders[0].shape[0]

    @property
    def alphabet_size(self) -> int:
        return len(self.encoders)

    def psi(self, x: int) -> ComplexMatrix:
        """Coefficient matrix of ψˣ_{AG₂} = (F^(x)⊗1)φ, rows on A and columns on G₂."""
        return self.encoders[x] @ self.phi.reshape(self.d_g1, self.d_g2)

    def relabeled(self, order: Sequence[int]) -> "Ensemble":
        """The same ensemble with letters permuted: new letter i is old letter order[i]."""
        return Ensemble(
            p_x=np.asarray(self.p_x)[list(order)],
            phi=self.phi,
            d_g1=self.d_g1,
            d_g2=self.d_g2,
            encoders=tuple(self.encoders[i] for i in order),
            label=self.label,
            parameters=dict(self.parameters),
        )


def u_beta_norm_squared(beta: float) -> float:
    return 1.0 + float(np.sqrt(2.0 * beta * (1.0 - beta)))


def build_phi(beta: float) -> npt.NDArray[np.complex128]:
    """Normalized √(1−β)|00⟩ + √β|Φ⟩ with |Φ⟩ = (|00⟩+|11⟩)/√2."""
    if not 0.0 <= beta <= 1.0:
        raise EnsembleError(f"beta must lie in [0, 1], got {beta}")
    u = np.sqrt(1.0 - beta) * np.array([1, 0, 0, 0], dtype=np.complex128)
    u = u + np.sqrt(beta) * MAXIMALLY_ENTANGLED
    return u / np.linalg.norm(u)


def bitflip_encoders() -> tuple[ComplexMatrix, ComplexMatrix]:
    return np.eye(2, dtype=np.complex128), PAULI_X.copy()


def beta_ensemble(beta: float) -> Ensemble:
    """Uniform p_X, φ(β) and the bit-flip encoders F^(x) = Σ_X^x."""
    return Ensemble(
        p_x=np.array([0.5, 0.5]),
        phi=build_phi(beta),
        d_g1=2,
        d_g2=2,
        encoders=bitflip_encoders(),
        label="beta_family",
        parameters={"beta": float(beta)},
    )


def custom_ensemble(
    p_x: Sequence[float],
    phi: Sequence[complex],
    encoders: Sequence[npt.ArrayLike],
    phi_dims: tuple[int, int] | None = None,
) -> Ensemble:
    phi = np.asarray(phi, dtype=np.complex128).reshape(-1)
    if phi_dims is None:
        side = int(round(np.sqrt(phi.size)))
        phi_dims = (side, side)
    return Ensemble(
        p_x=np.asarray(p_x, dtype=np.float64),
        phi=phi,
        d_g1=phi_dims[0],
        d_g2=phi_dims[1],
        encoders=tuple(as_matrix(f) for f in encoders),
    )


@dataclass(kw_only=True, frozen=True, eq=False)
class CqState:
    """Σ_x p_x |x⟩⟨x| ⊗ ρˣ stored as blocks; `labels` name the subsystems of one block."""

    weights: npt.NDArray[np.float64]
    blocks: tuple[ComplexMatrix, ...]
    dims: DimensionList
    labels: tuple[Subsystem, ...]
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.weights) != len(self.blocks):
            raise EnsembleError(f"{len(self.weights)} weights but {len(self.blocks)} blocks")
        if len(self.dims) != len(self.labels):
            raise SubsystemError(f"{len(self.dims)} dimensions but {len(self.labels)} labels")

    def average_state(self) -> ComplexMatrix:
        return sum(p * rho for p, rho in zip(self.weights, self.blocks, strict=True))

    def index_of(self, subsystem: Subsystem | str | int) -> int:
        if isinstance(subsystem, int):
            if not 0 <= subsystem < len(self.labels):
                raise SubsystemError(f"subsystem index {subsystem} out of range")
            return subsystem
        try:
            return self.labels.index(Subsystem(subsystem))
        except ValueError:
            raise SubsystemError(f"subsystem {subsystem!r} not present in {list(self.labels)}") from None


def _resolve(cq: CqState, keep: Iterable[Subsystem | str | int]) -> list[int]:
    return sorted({cq.index_of(s) for s in keep})


def build_omega(chan: WiretapChannel, ens: Ensemble) -> CqState:
    """One block ρˣ_{G₂BE} = (id_{G₂}⊗N)((id⊗F^(x)) φ (id⊗F^(x))†) per letter."""
    if ens.d_a != chan.d_a:
        raise EnsembleError(f"encoders output dimension {ens.d_a}, channel input is {chan.d_a}")
    blocks = []
    for x in range(ens.alphabet_size):
        # G₂ first, then A
        psi = ens.psi(x).T.reshape(-1)
        rho, dims = apply_to_subsystem(chan, projector(psi), (ens.d_g2, ens.d_a), target=1)
        require_density(rho, f"block x={x}")
        blocks.append(rho)
    return CqState(
        weights=np.asarray(ens.p_x, dtype=np.float64),
        blocks=tuple(blocks),
        dims=dims,
        labels=(Subsystem.G2, Subsystem.B, Subsystem.E),
        provenance={"channel": chan.label, "ensemble": ens.label, **chan.parameters, **ens.parameters},
    )


def marginal(cq: CqState, keep: Iterable[Subsystem | str | int]) -> CqState:
    """Per-block partial trace; the weights are unchanged."""
    kept = _resolve(cq, keep)
    if not kept:
        raise SubsystemError("marginal needs a nonempty set of subsystems")
    if len(kept) == len(cq.dims):
        return cq
    return CqState(
        weights=cq.weights,
        blocks=tuple(partial_trace(rho, cq.dims, kept) for rho in cq.blocks),
        dims=tuple(cq.dims[i] for i in kept),
        labels=tuple(cq.labels[i] for i in kept),
        provenance=cq.provenance,
    )


def to_block_diagonal(cq: CqState) -> ComplexMatrix:
    """The explicit matrix on X⊗(block subsystems), X first."""
    return block_diag(*(p * rho for p, rho in zip(cq.weights, cq.blocks, strict=True)))
