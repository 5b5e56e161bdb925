"""
Eve's states under the keyed encoder and the covering diagnostics Δ*_m and
Δ_{m′|m,k}, plus the semantic-security level of a complete small code.

Eve's register for n letters is ordered letter by letter, (G₂₁,E₁,G₂₂,E₂,…),
matching the (G₂,E) order of a single block of ω.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from ..channels import WiretapChannel
from ..ensembles import Ensemble, Subsystem, build_omega, marginal
from ..errors import GuardError
from ..linalg_core import ComplexMatrix, dagger, partial_trace, permute_subsystems, trace_distance
from ..rate_regions import Model
from .codebook import MAX_CODEWORDS, Codebook, codebook_size, generate_codebook
from .type_classes import SchmidtData, TypeDecomposition, conditional_types, schmidt_decompose
from .weyl import GammaKey, enumerate_keys, input_unitary, key_space_size, random_key

logger = logging.getLogger(__name__)

MAX_BLOCKLENGTH: int = 6
MAX_EXHAUSTIVE_KEYS: int = 2**14
ZETA_SAMPLES: int = 4096


def _kron_all(matrices: Sequence[ComplexMatrix]) -> ComplexMatrix:
    return reduce(np.kron, matrices)


@dataclass(kw_only=True, frozen=True, eq=False)
class ZetaReference:
    """ζ^{xⁿ}, the key-averaged Eve state, and how it was obtained."""

    state: ComplexMatrix
    exhaustive: bool
    key_space_size: int
    sample_size: int
    seed: int | None


class CodingContext:
    """Per-letter data of one (channel, ensemble) pair, shared by all n-letter computations."""

    def __init__(
        self,
        chan: WiretapChannel,
        ens: Ensemble,
        *,
        max_n: int = MAX_BLOCKLENGTH,
        max_exhaustive_keys: int = MAX_EXHAUSTIVE_KEYS,
        zeta_samples: int = ZETA_SAMPLES,
        zeta_seed: int = 0,
    ):
        self.chan = chan
        self.ens = ens
        self.max_n = max_n
        self.max_exhaustive_keys = max_exhaustive_keys
        self.zeta_samples = zeta_samples
        self.zeta_seed = zeta_seed

        self.omega = build_omega(chan, ens)
        eve = marginal(self.omega, [Subsystem.G2, Subsystem.E])
        env = marginal(self.omega, [Subsystem.E])
        self.letter_states: tuple[ComplexMatrix, ...] = eve.blocks
        self.letter_env_states: tuple[ComplexMatrix, ...] = env.blocks
        self.reference_letter = eve.average_state()
        self.reference_env_letter = env.average_state()
        self.schmidt: tuple[SchmidtData, ...] = tuple(
            schmidt_decompose(ens.psi(x)) for x in range(ens.alphabet_size)
        )
        self._decompositions: dict[tuple[int, ...], TypeDecomposition] = {}
        self._zetas: dict[tuple[int, ...], ZetaReference] = {}

    def _guard(self, n: int) -> None:
        if n > self.max_n:
            raise GuardError(f"blocklength {n} exceeds the guard of {self.max_n}")

    def decomposition(self, x_n: Sequence[int]) -> TypeDecomposition:
        x_n = tuple(int(x) for x in x_n)
        if x_n not in self._decompositions:
            self._guard(len(x_n))
            self._decompositions[x_n] = conditional_types(
                x_n, self.ens.d_a, self.schmidt, max_sequences=self.ens.d_a**self.max_n
            )
        return self._decompositions[x_n]

    def product_state(self, x_n: Sequence[int], keep_g2: bool = True) -> ComplexMatrix:
        """⊗ᵢ ω^{xᵢ}, Eve's state when no key is applied."""
        self._guard(len(x_n))
        letters = self.letter_states if keep_g2 else self.letter_env_states
        return _kron_all([letters[x] for x in x_n])

    def reference(self, n: int, keep_g2: bool = True) -> ComplexMatrix:
        """ω_{EG₂}^{⊗n} (or ω_E^{⊗n})."""
        self._guard(n)
        letter = self.reference_letter if keep_g2 else self.reference_env_letter
        return _kron_all([letter] * n)

    def eve_state(
        self, x_n: Sequence[int], key: GammaKey | None = None, keep_g2: bool = True
    ) -> ComplexMatrix:
        """Eve's marginal of (V^{⊗n}U(γ)⊗1)(⊗ᵢψ^{xᵢ}); G₂ⁿ is traced out when keep_g2 is False."""
        x_n = tuple(int(x) for x in x_n)
        n = len(x_n)
        self._guard(n)
        d_b, d_e, d_g = self.chan.d_b, self.chan.d_e, self.ens.d_g2

        amplitudes = _kron_all([self.ens.psi(x) for x in x_n])
        if key is not None:
            amplitudes = input_unitary(self.decomposition(x_n), key) @ amplitudes
        out = _kron_all([self.chan.isometry] * n) @ amplitudes

        tensor = out.reshape([d_b, d_e] * n + [d_g] * n)
        bob = [2 * i for i in range(n)]
        if keep_g2:
            eve = [axis for i in range(n) for axis in (2 * n + i, 2 * i + 1)]
            d_eve = (d_g * d_e) ** n
        else:
            eve = [2 * i + 1 for i in range(n)]
            bob += [2 * n + i for i in range(n)]
            d_eve = d_e**n
        w = tensor.transpose(bob + eve).reshape(-1, d_eve)
        return w.T @ w.conj()

    def zeta(self, x_n: Sequence[int]) -> ZetaReference:
        """Exhaustive key average when |Γ_{xⁿ}| fits the guard, else a seeded sample."""
        x_n = tuple(int(x) for x in x_n)
        if x_n in self._zetas:
            return self._zetas[x_n]
        decomp = self.decomposition(x_n)
        size = key_space_size(decomp)
        if size <= self.max_exhaustive_keys:
            keys = list(enumerate_keys(decomp))
            reference = ZetaReference(
                state=self.mean_eve_state(x_n, keys),
                exhaustive=True,
                key_space_size=size,
                sample_size=size,
                seed=None,
            )
        else:
            logger.info(
                "key space of %d for %s exceeds %d; sampling %d keys with seed %d",
                size, x_n, self.max_exhaustive_keys, self.zeta_samples, self.zeta_seed,
            )
            rng = np.random.default_rng(self.zeta_seed)
            keys = [random_key(decomp, rng) for _ in range(self.zeta_samples)]
            reference = ZetaReference(
                state=self.mean_eve_state(x_n, keys),
                exhaustive=False,
                key_space_size=size,
                sample_size=self.zeta_samples,
                seed=self.zeta_seed,
            )
        self._zetas[x_n] = reference
        return reference

    def mean_eve_state(
        self, x_n: Sequence[int], keys: Sequence[GammaKey], keep_g2: bool = True
    ) -> ComplexMatrix:
        return sum(self.eve_state(x_n, key, keep_g2) for key in keys) / len(keys)

    def depolarized_reference(self, x_n: Sequence[int]) -> ComplexMatrix:
        """
        ζ^{xⁿ} in closed form: the key average twirls each class subspace,
        Σ_t P_t/|𝒯_t| ⊗ tr_A[(P_t⊗1)ψψ†], before the channel acts.
        """
        x_n = tuple(int(x) for x in x_n)
        n = len(x_n)
        decomp = self.decomposition(x_n)
        amplitudes = _kron_all([self.ens.psi(x) for x in x_n])
        twirled = sum(
            np.kron(p / size, (dagger(amplitudes) @ p @ amplitudes).T)
            for p, size in zip(decomp.class_projectors(), decomp.sizes, strict=True)
        )
        d_b, d_e, d_g = self.chan.d_b, self.chan.d_e, self.ens.d_g2
        v = np.kron(_kron_all([self.chan.isometry] * n), np.eye(d_g**n))
        joint = v @ twirled @ dagger(v)
        dims = [d_b, d_e] * n + [d_g] * n
        kept = [2 * i + 1 for i in range(n)] + [2 * n + i for i in range(n)]
        eve = partial_trace(joint, dims, kept)
        # kept order is (E₁..Eₙ, G₂₁..G₂ₙ); interleave as (G₂₁,E₁,…)
        order = [axis for i in range(n) for axis in (n + i, i)]
        return permute_subsystems(eve, [d_e] * n + [d_g] * n, order)

    def delta_star(self, codebook: Codebook, m: int) -> float:
        """½‖2^{−nR₀} Σ_k ω^{xⁿ(m,k)} − ω^{⊗n}‖₁."""
        average = sum(
            self.product_state(codebook.codeword(m, k)) for k in range(codebook.keys_per_message)
        ) / codebook.keys_per_message
        return trace_distance(average, self.reference(codebook.n))

    def delta_excess(self, x_n: Sequence[int], keys: Sequence[GammaKey]) -> float:
        """½‖mean over the given keys of ρ^{γ,xⁿ} − ζ^{xⁿ}‖₁."""
        return trace_distance(self.mean_eve_state(x_n, keys), self.zeta(x_n).state)

    def draw_keys(self, x_n: Sequence[int], key_count: int, rng: np.random.Generator) -> list[GammaKey]:
        """key_count i.i.d. uniform keys, or the whole key space when key_count covers it."""
        decomp = self.decomposition(x_n)
        size = key_space_size(decomp)
        if key_count >= size:
            if size > self.max_exhaustive_keys:
                raise GuardError(f"cannot enumerate a key space of {size} (guard {self.max_exhaustive_keys})")
            return list(enumerate_keys(decomp))
        return [random_key(decomp, rng) for _ in range(key_count)]


def eve_state(
    chan: WiretapChannel, ensemble: Ensemble, x_n: Sequence[int], key: GammaKey | None = None
) -> ComplexMatrix:
    return CodingContext(chan, ensemble).eve_state(x_n, key)


def delta_star(chan: WiretapChannel, ensemble: Ensemble, codebook: Codebook, m: int) -> float:
    return CodingContext(chan, ensemble).delta_star(codebook, m)


def delta_excess(
    chan: WiretapChannel, ensemble: Ensemble, x_n: Sequence[int], key_count: int, seed: int
) -> float:
    return excess_trial(CodingContext(chan, ensemble), x_n, key_count, seed)


@dataclass(kw_only=True, frozen=True, eq=False)
class KeyCodebook:
    """γ(m′,k′|xⁿ(m,k)) for every (m,k); keys[(m, k)][m′][k′]."""

    rate_r_prime: float
    rate_r0_prime: float
    keys: dict[tuple[int, int], tuple[tuple[GammaKey, ...], ...]]
    seed: int

    @property
    def excess_messages(self) -> int:
        return len(next(iter(self.keys.values())))

    @property
    def keys_per_excess_message(self) -> int:
        return len(next(iter(self.keys.values()))[0])


def generate_key_codebook(
    context: CodingContext,
    codebook: Codebook,
    rate_r_prime: float,
    rate_r0_prime: float,
    seed: int,
    max_codewords: int = MAX_CODEWORDS,
) -> KeyCodebook:
    """For every (m,k), 2^{n(R′+R′₀)} keys drawn uniformly from Γ_{xⁿ(m,k)}."""
    n = codebook.n
    excess = codebook_size(n, rate_r_prime, max_codewords)
    key_rate = codebook_size(n, rate_r0_prime, max_codewords)
    total = codebook.messages * codebook.keys_per_message * excess * key_rate
    if total > max_codewords:
        raise GuardError(f"key codebook of {total} keys exceeds the guard of {max_codewords}")
    rng = np.random.default_rng(seed)
    keys = {}
    for m in range(codebook.messages):
        for k in range(codebook.keys_per_message):
            decomp = context.decomposition(codebook.codeword(m, k))
            keys[(m, k)] = tuple(
                tuple(random_key(decomp, rng) for _ in range(key_rate)) for _ in range(excess)
            )
    return KeyCodebook(rate_r_prime=rate_r_prime, rate_r0_prime=rate_r0_prime, keys=keys, seed=seed)


@dataclass(kw_only=True, frozen=True)
class SecrecyDiagnostics:
    """Δ*_m per m and Δ_{m′|m,k} per (m,k,m′), with the thresholds and seeds used."""

    delta_star: dict[int, float]
    delta_excess: dict[tuple[int, int, int], float]
    rate_r0: float
    rate_r0_prime: float
    seeds: tuple[int, ...]
    repetitions: int
    zeta_exhaustive: bool
    zeta_sample_size: int


def secrecy_diagnostics(
    context: CodingContext, codebook: Codebook, key_codebook: KeyCodebook
) -> SecrecyDiagnostics:
    stars = {m: context.delta_star(codebook, m) for m in range(codebook.messages)}
    excess = {}
    zetas = []
    for (m, k), per_message in key_codebook.keys.items():
        x_n = codebook.codeword(m, k)
        zetas.append(context.zeta(x_n))
        for m_prime, keys in enumerate(per_message):
            excess[(m, k, m_prime)] = context.delta_excess(x_n, keys)
    return SecrecyDiagnostics(
        delta_star=stars,
        delta_excess=excess,
        rate_r0=codebook.rate_r0,
        rate_r0_prime=key_codebook.rate_r0_prime,
        seeds=(codebook.seed, key_codebook.seed),
        repetitions=1,
        zeta_exhaustive=all(z.exhaustive for z in zetas),
        zeta_sample_size=max(z.sample_size for z in zetas),
    )


@dataclass(kw_only=True, frozen=True)
class SecurityReport:
    """
    level = max over (m,m′) of ½‖ρ^{m,m′} − ω^{⊗n}‖₁ on Eve's register.
    For interception, `bounds` holds mean_k Δ_{m′|m,k} + ½‖mean_k ζ^{xⁿ(m,k)} − ω^{⊗n}‖₁.
    """

    model: Model
    level: float
    distances: dict[tuple[int, int], float]
    bounds: dict[tuple[int, int], float] = field(default_factory=dict)


def security_level(
    context: CodingContext, codebook: Codebook, key_codebook: KeyCodebook, model: Model
) -> SecurityReport:
    keep_g2 = model == Model.INTERCEPTION
    reference = context.reference(codebook.n, keep_g2)
    distances, bounds = {}, {}
    for m in range(codebook.messages):
        codewords = [codebook.codeword(m, k) for k in range(codebook.keys_per_message)]
        for m_prime in range(key_codebook.excess_messages):
            per_k = [key_codebook.keys[(m, k)][m_prime] for k in range(len(codewords))]
            state = sum(
                context.mean_eve_state(x_n, keys, keep_g2) for x_n, keys in zip(codewords, per_k, strict=True)
            ) / len(codewords)
            distances[(m, m_prime)] = trace_distance(state, reference)
            if keep_g2:
                excess = np.mean([context.delta_excess(x_n, keys) for x_n, keys in zip(codewords, per_k, strict=True)])
                zeta_mean = sum(context.zeta(x_n).state for x_n in codewords) / len(codewords)
                bounds[(m, m_prime)] = float(excess) + trace_distance(zeta_mean, reference)
    return SecurityReport(model=model, level=max(distances.values()), distances=distances, bounds=bounds)


def covering_trial(
    context: CodingContext,
    n: int,
    rate_r: float,
    rate_r0: float,
    seed: int,
    max_codewords: int = MAX_CODEWORDS,
) -> tuple[float, float]:
    """Mean and max over messages of Δ*_m for one random codebook."""
    codebook = generate_codebook(n, rate_r, rate_r0, context.ens.p_x, seed, max_codewords)
    values = [context.delta_star(codebook, m) for m in range(codebook.messages)]
    return float(np.mean(values)), float(np.max(values))


def excess_trial(context: CodingContext, x_n: Sequence[int], key_count: int, seed: int) -> float:
    keys = context.draw_keys(x_n, key_count, np.random.default_rng(seed))
    return context.delta_excess(x_n, keys)
