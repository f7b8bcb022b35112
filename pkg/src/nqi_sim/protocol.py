"""Probe presets, end-to-end runs, repeated rounds and Monte Carlo sampling."""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .atom import AtomSuperposition, apply_optics, interact_atom, tensor
from .fock import ATOL, Direction, Path, PhotonState, from_creations, mode
from .measurement import (
    CIRCULAR,
    LINEAR,
    Category,
    DetectorConfig,
    OutcomeRecord,
    category_probabilities,
    classify_records,
    enumerate_outcomes,
)
from .optics import beam_splitter

R, L = Direction.RIGHT, Direction.LEFT
LO = Path.LOWER
SQRT_HALF = 1 / math.sqrt(2)


class Scheme(enum.Enum):
    INDEPENDENT_CIRCULAR = "independent-circular"
    EPR_CIRCULAR = "epr-circular"
    EPR_LINEAR = "epr-linear"
    SINGLE_PHOTON_LINEAR = "single-photon-linear"

    @property
    def detectors(self) -> DetectorConfig:
        if self in (Scheme.EPR_LINEAR, Scheme.SINGLE_PHOTON_LINEAR):
            return LINEAR
        return CIRCULAR

    @property
    def photon_count(self) -> int:
        return 1 if self is Scheme.SINGLE_PHOTON_LINEAR else 2


SCHEME_CATALOG = {
    Scheme.INDEPENDENT_CIRCULAR: ("a+(R,l) a-(L,l)|0>", "independent photon pair, circular (+/-) detectors"),
    Scheme.EPR_CIRCULAR: ("(a+(R,l) a-(L,l) + a-(R,l) a+(L,l))|0>/sqrt2", "EPR pair, circular (+/-) detectors"),
    Scheme.EPR_LINEAR: ("(a+(R,l) a-(L,l) + a-(R,l) a+(L,l))|0>/sqrt2", "EPR pair, linear (x/y) detectors"),
    Scheme.SINGLE_PHOTON_LINEAR: ("ax(R,l)|0> = (a-(R,l) - a+(R,l))|0>/sqrt2", "single right-going x photon, linear (x/y) detectors"),
}


def build_probe(scheme: Scheme) -> PhotonState:
    """Normalized probe state (circular registry) entering the lower ports."""
    if scheme is Scheme.INDEPENDENT_CIRCULAR:
        return from_creations([(1.0, [mode(R, LO, "+"), mode(L, LO, "-")])])
    if scheme in (Scheme.EPR_CIRCULAR, Scheme.EPR_LINEAR):
        return from_creations(
            [
                (SQRT_HALF, [mode(R, LO, "+"), mode(L, LO, "-")]),
                (SQRT_HALF, [mode(R, LO, "-"), mode(L, LO, "+")]),
            ]
        )
    if scheme is Scheme.SINGLE_PHOTON_LINEAR:
        # x = (a_- - a_+)/sqrt2
        return from_creations([(SQRT_HALF, [mode(R, LO, "-")]), (-SQRT_HALF, [mode(R, LO, "+")])])
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: Scheme = Scheme.EPR_LINEAR
    alpha: complex = SQRT_HALF
    beta: complex = SQRT_HALF
    atom_present: bool = True
    atom_arm: Path = Path.LOWER
    max_rounds: int = 1
    mc_trials: int = 0
    rng_seed: int = 42

    def __post_init__(self):
        self.atom  # validates normalization
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.mc_trials < 0:
            raise ValueError("mc_trials must be >= 0")

    @property
    def atom(self) -> AtomSuperposition:
        return AtomSuperposition(self.alpha, self.beta)


def final_state(config: ExperimentConfig):
    """Joint state just before detection (circular registry)."""
    state = tensor(build_probe(config.scheme), config.atom)
    state = apply_optics(state, beam_splitter)
    state = interact_atom(state, config.atom_present, config.atom_arm)
    return apply_optics(state, beam_splitter)


def run_single_shot(config: ExperimentConfig) -> list[OutcomeRecord]:
    records = enumerate_outcomes(final_state(config), config.scheme.detectors)
    return classify_records(records, config.atom)


@dataclass
class RoundReport:
    """Exact statistics of repeating the experiment until something other than a repeat happens.

    ``cumulative[k]`` holds the category masses after ``k + 1`` rounds; its
    NotDetectedRepeatable entry is the mass still waiting for another round.
    """

    rounds: list[list[OutcomeRecord]] = field(default_factory=list)
    continuation: list[float] = field(default_factory=list)  # mass entering each round
    cumulative: list[dict[Category, float]] = field(default_factory=list)

    def final(self) -> dict[Category, float]:
        return self.cumulative[-1]


class RepeatabilityError(RuntimeError):
    """A repeatable outcome disturbed the atom, so rounds cannot be chained."""


def run_repeated(config: ExperimentConfig) -> RoundReport:
    report = RoundReport()
    records = run_single_shot(config)
    for r in records:
        if r.category is Category.NOT_DETECTED_REPEATABLE and r.fidelity is not None and r.fidelity < 1 - ATOL:
            raise RepeatabilityError(f"repeat outcome {r.pattern} changes the atom (fidelity {r.fidelity})")
    per_round = category_probabilities(records)
    repeat = per_round[Category.NOT_DETECTED_REPEATABLE]
    settled = {c: 0.0 for c in Category if c is not Category.NOT_DETECTED_REPEATABLE}
    remaining = 1.0
    for _ in range(config.max_rounds):
        # the atom is unchanged on the repeat branch, so every round sees the same single-shot statistics
        report.rounds.append(records)
        report.continuation.append(remaining)
        for c in settled:
            settled[c] += remaining * per_round[c]
        remaining *= repeat
        snapshot = dict(settled)
        snapshot[Category.NOT_DETECTED_REPEATABLE] = remaining
        report.cumulative.append({c: snapshot[c] for c in Category})
    return report


def asymptotic_categories(config: ExperimentConfig) -> dict[Category, float]:
    """Closed-form limit of ``run_repeated`` as the number of rounds grows without bound."""
    per_round = category_probabilities(run_single_shot(config))
    repeat = per_round[Category.NOT_DETECTED_REPEATABLE]
    if repeat > 1 - ATOL:
        return {c: float(c is Category.NOT_DETECTED_REPEATABLE) for c in Category}
    out = {c: p / (1 - repeat) for c, p in per_round.items()}
    out[Category.NOT_DETECTED_REPEATABLE] = 0.0
    return out


def nqi_comparison(alpha: complex = SQRT_HALF, beta: complex = SQRT_HALF) -> dict[str, float]:
    """Single-shot NQI success of the EPR/linear scheme against the single-photon scheme."""
    two = category_probabilities(run_single_shot(ExperimentConfig(Scheme.EPR_LINEAR, alpha, beta)))
    one = category_probabilities(run_single_shot(ExperimentConfig(Scheme.SINGLE_PHOTON_LINEAR, alpha, beta)))
    a, b = two[Category.NQI_SUCCESS], one[Category.NQI_SUCCESS]
    return {"two_photon": a, "single_photon": b, "ratio": a / b}


MC_BLOCK = 10_000


@dataclass
class MonteCarloResult:
    trials: int
    seed: int
    pattern_counts: dict[str, int]
    category_counts: dict[Category, int]

    def frequencies(self) -> dict[Category, float]:
        return {c: n / self.trials for c, n in self.category_counts.items()}


def _worker_count() -> int:
    env = os.environ.get("NQI_SIM_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def monte_carlo(config: ExperimentConfig, workers: int | None = None) -> MonteCarloResult:
    """Sample the exact single-shot outcome distribution ``config.mc_trials`` times.

    Trials are cut into fixed blocks, each drawing from its own child of
    ``SeedSequence(rng_seed)``, so the counts do not depend on ``workers``.
    """
    if config.mc_trials < 1:
        raise ValueError("mc_trials must be >= 1 for a Monte Carlo run")
    records = run_single_shot(config)
    probs = np.array([r.probability for r in records])
    probs = probs / probs.sum()
    n_blocks = -(-config.mc_trials // MC_BLOCK)
    sizes = [MC_BLOCK] * (n_blocks - 1) + [config.mc_trials - MC_BLOCK * (n_blocks - 1)]
    seeds = np.random.SeedSequence(config.rng_seed).spawn(n_blocks)

    def draw(i: int) -> np.ndarray:
        return np.random.default_rng(seeds[i]).multinomial(sizes[i], probs)

    workers = workers or _worker_count()
    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(draw, range(n_blocks)))
    else:
        blocks = [draw(i) for i in range(n_blocks)]
    counts = np.sum(blocks, axis=0)
    pattern_counts = {str(r.pattern): int(n) for r, n in zip(records, counts)}
    category_counts = {c: 0 for c in Category}
    for r, n in zip(records, counts):
        category_counts[r.category] += int(n)
    return MonteCarloResult(config.mc_trials, config.rng_seed, pattern_counts, category_counts)
