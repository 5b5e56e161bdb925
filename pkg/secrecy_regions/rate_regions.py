"""
Entropic quantities of the interception and passive-eavesdropper regions,
their corner points, β sweeps, Pareto frontiers, disconnection reports and
time-division baselines.
"""

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
from scipy.stats import entropy as shannon_entropy

from .channels import WiretapChannel
from .ensembles import CqState, Ensemble, Subsystem, beta_ensemble, build_omega, marginal
from .errors import NumericalValidationError, SubsystemError
from .linalg_core import von_neumann_entropy

logger = logging.getLogger(__name__)

INFORMATION_TOL: float = 1e-9
DEFAULT_BETA_POINTS: int = 1001
DEFAULT_R_FLOOR: float = 0.01


class Model(StrEnum):
    INTERCEPTION = "interception"
    PASSIVE = "passive"


def _clip(value: float, what: str) -> float:
    if value < -INFORMATION_TOL:
        raise NumericalValidationError(f"{what} = {value:.3e} is negative beyond tolerance")
    return max(value, 0.0)


def holevo_information(cq: CqState, s: Iterable[Subsystem | str | int]) -> float:
    """I(X;S) = S(Σ_x p_x ρˣ_S) − Σ_x p_x S(ρˣ_S)."""
    s = list(s)
    if not s:
        raise SubsystemError("holevo_information needs a nonempty subsystem set")
    sub = marginal(cq, s)
    conditional = sum(p * von_neumann_entropy(rho) for p, rho in zip(sub.weights, sub.blocks, strict=True))
    return _clip(von_neumann_entropy(sub.average_state()) - conditional, f"I(X;{s})")


def conditional_mutual_information(
    cq: CqState, s: Iterable[Subsystem | str | int], t: Iterable[Subsystem | str | int]
) -> float:
    """I(S;T|X) = Σ_x p_x [S(ρˣ_S) + S(ρˣ_T) − S(ρˣ_ST)], without assuming pure blocks."""
    s_idx = {cq.index_of(i) for i in s}
    t_idx = {cq.index_of(i) for i in t}
    if not s_idx or not t_idx:
        raise SubsystemError("conditional mutual information needs two nonempty subsystem sets")
    if s_idx & t_idx:
        raise SubsystemError(f"subsystem sets overlap: {sorted(s_idx & t_idx)}")
    ms, mt, mst = marginal(cq, s_idx), marginal(cq, t_idx), marginal(cq, s_idx | t_idx)
    value = 0.0
    for p, a, b, ab in zip(cq.weights, ms.blocks, mt.blocks, mst.blocks, strict=True):
        value += p * (von_neumann_entropy(a) + von_neumann_entropy(b) - von_neumann_entropy(ab))
    return _clip(value, "conditional mutual information")


@dataclass(kw_only=True, frozen=True)
class EntropicQuantities:
    """The five informations (bits) entering both regions."""

    i_xb: float
    i_xe: float
    i_xeg2: float
    i_g2b_x: float
    i_g2e_x: float
    provenance: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def guaranteed_si_signed(self) -> float:
        return self.i_xb - self.i_xeg2

    @property
    def excess_si_signed(self) -> float:
        return self.i_g2b_x - self.i_g2e_x

    @property
    def guaranteed_pe_signed(self) -> float:
        return self.i_xb - self.i_xe


def entropic_quantities(cq: CqState, provenance: dict[str, Any] | None = None) -> EntropicQuantities:
    eq = EntropicQuantities(
        i_xb=holevo_information(cq, [Subsystem.B]),
        i_xe=holevo_information(cq, [Subsystem.E]),
        i_xeg2=holevo_information(cq, [Subsystem.G2, Subsystem.E]),
        i_g2b_x=conditional_mutual_information(cq, [Subsystem.G2], [Subsystem.B]),
        i_g2e_x=conditional_mutual_information(cq, [Subsystem.G2], [Subsystem.E]),
        provenance=dict(cq.provenance if provenance is None else provenance),
    )
    if eq.i_xe > eq.i_xeg2 + INFORMATION_TOL:
        raise NumericalValidationError(
            f"data processing violated: I(X;E)={eq.i_xe:.12f} > I(X;EG2)={eq.i_xeg2:.12f}"
        )
    h_x = float(shannon_entropy(cq.weights, base=2))
    if eq.i_xb > h_x + INFORMATION_TOL:
        raise NumericalValidationError(f"I(X;B)={eq.i_xb:.12f} exceeds H(X)={h_x:.12f}")
    return eq


@dataclass(kw_only=True, frozen=True)
class RatePair:
    """Corner (R, R′) of an achievable rectangle, in bits per channel use."""

    r: float
    r_prime: float
    model: Model

    def __post_init__(self):
        if self.r < 0 or self.r_prime < 0:
            raise NumericalValidationError(f"rates must be nonnegative, got ({self.r}, {self.r_prime})")

    def dominates(self, other: "RatePair", tol: float = 0.0) -> bool:
        return self.r >= other.r - tol and self.r_prime >= other.r_prime - tol


def rsi_rates(eq: EntropicQuantities) -> RatePair:
    return RatePair(
        r=max(0.0, eq.guaranteed_si_signed),
        r_prime=max(0.0, eq.excess_si_signed),
        model=Model.INTERCEPTION,
    )


def rpe_rates(eq: EntropicQuantities) -> RatePair:
    return RatePair(r=max(0.0, eq.guaranteed_pe_signed), r_prime=max(0.0, eq.i_g2b_x), model=Model.PASSIVE)


MODEL_RATES: dict[Model, Callable[[EntropicQuantities], RatePair]] = {
    Model.INTERCEPTION: rsi_rates,
    Model.PASSIVE: rpe_rates,
}


@dataclass(kw_only=True, frozen=True)
class Evaluation:
    """Everything computed for one ensemble of a sweep."""

    parameter: float
    quantities: EntropicQuantities

    def rates(self, model: Model) -> RatePair:
        return MODEL_RATES[model](self.quantities)


def evaluate_ensemble(chan: WiretapChannel, ens: Ensemble, parameter: float = 0.0) -> Evaluation:
    cq = build_omega(chan, ens)
    return Evaluation(parameter=parameter, quantities=entropic_quantities(cq))


def evaluate_beta(
    chan: WiretapChannel, beta: float, ensemble_factory: Callable[[float], Ensemble] = beta_ensemble
) -> Evaluation:
    return evaluate_ensemble(chan, ensemble_factory(beta), parameter=beta)


def default_beta_grid(points: int = DEFAULT_BETA_POINTS) -> list[float]:
    return [float(b) for b in np.linspace(0.0, 1.0, points)]


@dataclass(kw_only=True, frozen=True)
class GapReport:
    """B⁰ = max R′ overall, B⁺ = max R′ over samples with R ≥ r_floor, gap = B⁰ − B⁺."""

    b_zero: float
    b_plus: float
    gap: float
    r_floor: float
    floor_met: bool
    argmax_parameter: float


@dataclass(kw_only=True, frozen=True)
class RegionBoundary:
    model: Model
    samples: tuple[tuple[float, RatePair], ...]
    frontier: tuple[RatePair, ...]
    gap_report: GapReport | None = None


def pareto_frontier(pairs: Iterable[RatePair]) -> tuple[RatePair, ...]:
    """Mutually non-dominated corners of the union of rectangles, sorted by R ascending."""
    ordered = sorted(pairs, key=lambda p: (-p.r, -p.r_prime))
    frontier: list[RatePair] = []
    best_r_prime = -1.0
    for pair in ordered:
        if pair.r_prime > best_r_prime:
            frontier.append(pair)
            best_r_prime = pair.r_prime
    return tuple(reversed(frontier))


def boundary_from_evaluations(evaluations: Sequence[Evaluation], model: Model) -> RegionBoundary:
    samples = tuple((e.parameter, e.rates(model)) for e in evaluations)
    return RegionBoundary(model=model, samples=samples, frontier=pareto_frontier(p for _, p in samples))


def sweep_region(
    chan: WiretapChannel,
    model: Model,
    beta_grid: Sequence[float],
    ensemble_factory: Callable[[float], Ensemble] = beta_ensemble,
) -> RegionBoundary:
    """One rate pair per β; the region is the union of rectangles, never convexified."""
    if not beta_grid:
        raise NumericalValidationError("beta grid is empty")
    logger.info("sweeping %d ensembles for %s (%s)", len(beta_grid), chan.label, model)
    evaluations = [evaluate_beta(chan, beta, ensemble_factory) for beta in beta_grid]
    return boundary_from_evaluations(evaluations, model)


def detect_disconnection(boundary: RegionBoundary, r_floor: float = DEFAULT_R_FLOOR) -> GapReport:
    """
    Compare the best excess rate overall with the best excess rate among
    samples whose guaranteed rate clears r_floor. A single sample cannot be
    disconnected from itself and reports gap 0.
    """
    params = [p for p, _ in boundary.samples]
    pairs = [pair for _, pair in boundary.samples]
    best = int(np.argmax([p.r_prime for p in pairs]))
    b_zero = pairs[best].r_prime
    above = [p.r_prime for p in pairs if p.r >= r_floor]
    floor_met = bool(above)
    b_plus = max(above) if floor_met else 0.0
    gap = 0.0 if len(pairs) < 2 else b_zero - b_plus
    return GapReport(
        b_zero=b_zero,
        b_plus=b_plus,
        gap=gap,
        r_floor=r_floor,
        floor_met=floor_met,
        argmax_parameter=params[best],
    )


def time_division_baseline(
    r_star: float, rp_star: float, t_grid: Iterable[float], model: Model = Model.PASSIVE
) -> list[RatePair]:
    """The segment {(t·r*, (1−t)·r′*)} between the two extreme strategies."""
    if r_star < 0 or rp_star < 0:
        raise NumericalValidationError("time-division endpoints must be nonnegative")
    return [RatePair(r=t * r_star, r_prime=(1.0 - t) * rp_star, model=model) for t in t_grid]


def baseline_endpoints(boundary: RegionBoundary) -> tuple[float, float]:
    """(r*, r′*): the largest guaranteed and the largest excess bound over the sweep."""
    return (
        max(pair.r for _, pair in boundary.samples),
        max(pair.r_prime for _, pair in boundary.samples),
    )


@dataclass(kw_only=True, frozen=True)
class TimeDivisionWitness:
    parameter: float
    pair: RatePair
    t: float


def outperforms_time_division(
    boundary: RegionBoundary, r_star: float, rp_star: float
) -> list[TimeDivisionWitness]:
    """
    Samples whose rectangle strictly dominates an interior point of the
    time-division segment, each with the midpoint t of its dominated range.
    """
    if r_star <= 0 or rp_star <= 0:
        return []
    witnesses = []
    for parameter, pair in boundary.samples:
        if pair.r <= 0 or pair.r_prime <= 0:
            continue
        lo = max(0.0, 1.0 - pair.r_prime / rp_star)
        hi = min(1.0, pair.r / r_star)
        if lo < hi:
            witnesses.append(TimeDivisionWitness(parameter=parameter, pair=pair, t=0.5 * (lo + hi)))
    return witnesses


def cross_model_violations(
    evaluations: Iterable[Evaluation], tol: float = INFORMATION_TOL
) -> list[Evaluation]:
    """Evaluations where an interception bound exceeds the matching passive bound."""
    violations = []
    for e in evaluations:
        si, pe = rsi_rates(e.quantities), rpe_rates(e.quantities)
        if si.r > pe.r + tol or si.r_prime > pe.r_prime + tol:
            violations.append(e)
    return violations
