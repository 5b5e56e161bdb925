"""
Channel models as Kraus sets and their isometric extensions V: A → B⊗E.

The environment basis follows the Kraus-operator index order, V = Σᵢ Kᵢ ⊗ |i⟩_E.
Every entropic quantity downstream is invariant under the remaining isometry
freedom, so only convention-independent quantities are asserted in tests.
"""

import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .errors import ChannelError, DimensionError
from .linalg_core import (
    ComplexMatrix,
    DimensionList,
    as_matrix,
    dagger,
    ket,
    partial_trace,
    tensor_product,
    trace_distance,
)

logger = logging.getLogger(__name__)

COMPLETENESS_TOL: float = 1e-10


@dataclass(kw_only=True, frozen=True, eq=False)
class KrausSet:
    """A CPTP map given by Kraus operators, each d_out × d_in."""

    operators: tuple[ComplexMatrix, ...]
    d_in: int
    d_out: int
    label: str = ""
    family: str = "custom"
    parameters: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.operators:
            raise ChannelError("a Kraus set needs at least one operator")
        for i, k in enumerate(self.operators):
            if k.shape != (self.d_out, self.d_in):
                raise ChannelError(
                    f"Kraus operator {i} has shape {k.shape}, expected {(self.d_out, self.d_in)}"
                )
        deviation = float(np.max(np.abs(self.completeness() - np.eye(self.d_in))))
        if deviation > COMPLETENESS_TOL:
            raise ChannelError(f"Kraus set {self.label!r} is not trace preserving: deviation {deviation:.3e}")

    def completeness(self) -> ComplexMatrix:
        return sum(dagger(k) @ k for k in self.operators)

    def __call__(self, rho: npt.ArrayLike) -> ComplexMatrix:
        rho = as_matrix(rho)
        return sum(k @ rho @ dagger(k) for k in self.operators)


@dataclass(kw_only=True, frozen=True, eq=False)
class WiretapChannel:
    """Isometry V of shape (d_B·d_E) × d_A realizing N_{A→BE}."""

    isometry: ComplexMatrix
    d_a: int
    d_b: int
    d_e: int
    label: str = ""
    family: str = "custom"
    parameters: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.isometry.shape != (self.d_b * self.d_e, self.d_a):
            raise ChannelError(
                f"isometry has shape {self.isometry.shape}, expected {(self.d_b * self.d_e, self.d_a)}"
            )
        deviation = float(np.max(np.abs(dagger(self.isometry) @ self.isometry - np.eye(self.d_a))))
        if deviation > COMPLETENESS_TOL:
            raise ChannelError(f"V†V deviates from the identity by {deviation:.3e}")

    def apply(self, rho: npt.ArrayLike) -> ComplexMatrix:
        """Joint output VρV† on B⊗E."""
        rho = as_matrix(rho)
        return self.isometry @ rho @ dagger(self.isometry)

    def to_bob(self, rho: npt.ArrayLike) -> ComplexMatrix:
        return partial_trace(self.apply(rho), (self.d_b, self.d_e), keep=[0])

    def to_eve(self, rho: npt.ArrayLike) -> ComplexMatrix:
        return partial_trace(self.apply(rho), (self.d_b, self.d_e), keep=[1])


def amplitude_damping(gamma: float) -> KrausSet:
    """K₀ = |0⟩⟨0| + √(1−γ)|1⟩⟨1|, K₁ = √γ|0⟩⟨1|."""
    if not 0.0 <= gamma <= 1.0:
        raise ChannelError(f"gamma must lie in [0, 1], got {gamma}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return KrausSet(
        operators=(k0, k1),
        d_in=2,
        d_out=2,
        label=f"amplitude_damping(gamma={gamma!r})",
        family="amplitude_damping",
        parameters={"gamma": float(gamma)},
    )


def kraus_set(operators: Sequence[npt.ArrayLike], label: str = "custom") -> KrausSet:
    ops = tuple(as_matrix(k) for k in operators)
    if not ops:
        raise ChannelError("a Kraus set needs at least one operator")
    d_out, d_in = ops[0].shape
    return KrausSet(operators=ops, d_in=d_in, d_out=d_out, label=label)


def isometric_extension(kraus: KrausSet) -> WiretapChannel:
    """Stinespring isometry V = Σᵢ Kᵢ ⊗ |i⟩_E with d_E the number of Kraus operators."""
    d_e = len(kraus.operators)
    isometry = sum(
        tensor_product(k, ket(i, d_e).reshape(d_e, 1)) for i, k in enumerate(kraus.operators)
    )
    return WiretapChannel(
        isometry=isometry,
        d_a=kraus.d_in,
        d_b=kraus.d_out,
        d_e=d_e,
        label=kraus.label,
        family=kraus.family,
        parameters=dict(kraus.parameters),
    )


def apply_to_subsystem(
    chan: WiretapChannel, rho: npt.ArrayLike, dims: Sequence[int], target: int
) -> tuple[ComplexMatrix, DimensionList]:
    """
    Apply V to subsystem `target`, which is replaced by the pair (B, E).
    Spectators keep their positions.
    """
    rho = as_matrix(rho)
    dims = tuple(int(d) for d in dims)
    if not 0 <= target < len(dims):
        raise DimensionError(f"target subsystem {target} out of range for {len(dims)} subsystems")
    if dims[target] != chan.d_a:
        raise DimensionError(f"subsystem {target} has dimension {dims[target]}, channel expects {chan.d_a}")
    if rho.shape != (int(np.prod(dims)),) * 2:
        raise DimensionError(f"operator of shape {rho.shape} does not match dimensions {dims}")
    before = int(np.prod(dims[:target]))
    after = int(np.prod(dims[target + 1 :]))
    w = tensor_product(np.eye(before), chan.isometry, np.eye(after))
    out_dims = dims[:target] + (chan.d_b, chan.d_e) + dims[target + 1 :]
    return w @ rho @ dagger(w), out_dims


def complementary_marginal_check(chan: WiretapChannel, rho: npt.ArrayLike) -> float:
    """
    Trace distance between Eve's marginal of the amplitude-damping extension and
    the amplitude-damping channel with parameter 1−γ applied to ρ.
    """
    if chan.family != "amplitude_damping":
        raise ChannelError(f"complementary check needs an amplitude damping channel, got {chan.label!r}")
    gamma = chan.parameters["gamma"]
    return trace_distance(chan.to_eve(rho), amplitude_damping(1.0 - gamma)(rho))


CHANNEL_REGISTRY: dict[str, Callable[..., KrausSet]] = {
    "amplitude_damping": amplitude_damping,
}


def make_channel(name: str, **parameters: float) -> WiretapChannel:
    """Build a wiretap channel from its registry name and parameters."""
    factory = CHANNEL_REGISTRY.get(name)
    if factory is None:
        raise ChannelError(f"unknown channel {name!r}; known: {', '.join(sorted(CHANNEL_REGISTRY))}")
    try:
        kraus = factory(**parameters)
    except TypeError as e:
        raise ChannelError(f"bad parameters for channel {name!r}: {e}") from None
    logger.debug("built channel %s", kraus.label)
    return isometric_extension(kraus)
