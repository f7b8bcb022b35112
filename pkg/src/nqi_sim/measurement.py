"""Polarization-resolving detection at the four output ports."""

from __future__ import annotations

import cmath
import enum
import math
from collections.abc import Mapping
from dataclasses import dataclass, field

from .atom import AtomLevel, AtomSuperposition, JointState, apply_optics
from .fock import ATOL, PORTS, Basis, Direction, ModeId, Path
from .optics import rotate


class Category(enum.Enum):
    NOT_DETECTED_REPEATABLE = "NotDetectedRepeatable"
    NQI_SUCCESS = "NQISuccess"
    PHASE_FLIP_DETECTION = "PhaseFlipDetection"
    COLLAPSE_DETECTION = "CollapseDetection"
    ABSORBED = "Absorbed"


class ClassificationError(RuntimeError):
    """An outcome matched none of the known categories."""


@dataclass(frozen=True)
class DetectorConfig:
    """Polarization basis of each detector.

    The four detectors normally share one basis; a per-port mapping is
    accepted for mixed set-ups.
    """

    bases: Mapping[tuple[Direction, Path], Basis] = field(
        default_factory=lambda: {port: Basis.CIRCULAR for port in PORTS}
    )

    def __post_init__(self):
        bases = dict(self.bases)
        missing = set(PORTS) - set(bases)
        if missing:
            raise ValueError(f"no basis given for ports {sorted(missing)}")
        object.__setattr__(self, "bases", bases)

    @classmethod
    def uniform(cls, basis: Basis) -> DetectorConfig:
        return cls({port: basis for port in PORTS})

    @property
    def is_uniform(self) -> bool:
        return len(set(self.bases.values())) == 1


CIRCULAR = DetectorConfig.uniform(Basis.CIRCULAR)
LINEAR = DetectorConfig.uniform(Basis.LINEAR)


@dataclass(frozen=True, order=True)
class DetectionPattern:
    """Clicks (one entry per detected photon, canonically sorted), or the absorbed outcome."""

    clicks: tuple[ModeId, ...] = ()
    absorbed: bool = False

    @property
    def all_upper(self) -> bool:
        return not self.absorbed and all(c.path is Path.UPPER for c in self.clicks)

    @property
    def lower_clicks(self) -> int:
        return sum(c.path is Path.LOWER for c in self.clicks)

    def __str__(self) -> str:
        if self.absorbed:
            return "absorbed"
        return " ".join(str(c) for c in self.clicks) or "none"


ABSORBED = DetectionPattern(absorbed=True)


@dataclass(frozen=True)
class OutcomeRecord:
    pattern: DetectionPattern
    probability: float
    post_atom: AtomSuperposition | None  # None: atom in the ground level
    category: Category | None = None
    fidelity: float | None = None  # overlap of post_atom with the initial atom

    def with_category(self, category: Category, fid: float | None) -> OutcomeRecord:
        return OutcomeRecord(self.pattern, self.probability, self.post_atom, category, fid)


def fidelity(a: AtomSuperposition, b: AtomSuperposition) -> float:
    """Squared overlap ``|<a|b>|^2``."""
    overlap = a.alpha.conjugate() * b.alpha + a.beta.conjugate() * b.beta
    return min(1.0, abs(overlap) ** 2)


def _pattern_for(occ, modes) -> DetectionPattern:
    clicks = []
    for i, n in enumerate(occ):
        clicks.extend([modes[i]] * n)
    return DetectionPattern(tuple(clicks))


def enumerate_outcomes(state: JointState, config: DetectorConfig = CIRCULAR) -> list[OutcomeRecord]:
    """Every detection pattern with non-zero probability and the atom it leaves behind.

    Patterns are listed in canonical click order; the lumped absorbed outcome,
    if any, comes last.
    """
    total = state.total_probability()
    if abs(total - 1) > ATOL:
        raise ValueError(f"joint state is not normalized (total probability {total!r})")
    measured = apply_optics(state, lambda s: rotate(s, config.bases))
    modes = measured.modes
    by_occ: dict[tuple[int, ...], dict[AtomLevel, complex]] = {}
    for (occ, level), amp in measured.coherent.items():
        by_occ.setdefault(occ, {})[level] = amp
    patterns = {occ: _pattern_for(occ, modes) for occ in by_occ}
    records = []
    for occ in sorted(by_occ, key=lambda o: [c.sort_key() for c in patterns[o].clicks]):
        amps = by_occ[occ]
        a = amps.get(AtomLevel.M_PLUS, 0j)
        b = amps.get(AtomLevel.M_MINUS, 0j)
        p = abs(a) ** 2 + abs(b) ** 2
        if p < ATOL**2:
            continue
        norm = math.sqrt(p)
        post = AtomSuperposition(a / norm, b / norm)
        records.append(OutcomeRecord(patterns[occ], p, post))
    absorbed = state.scattered_probability()
    if absorbed >= ATOL**2:
        records.append(OutcomeRecord(ABSORBED, absorbed, None))
    return records


def _is_basis_state(atom: AtomSuperposition) -> bool:
    return abs(abs(atom.alpha) - 1) < ATOL or abs(abs(atom.beta) - 1) < ATOL


def classify(
    pattern: DetectionPattern,
    post_atom: AtomSuperposition | None,
    initial_atom: AtomSuperposition,
) -> Category:
    """Sort one outcome into the interrogation categories.

    Upper-port-only outcomes that leave the atom untouched reveal nothing and
    can be repeated.  Any other outcome reveals the atom; it is an NQI success
    when the atom is left in its initial state (up to global phase), a phase
    flip when it is left in ``alpha|m+> - beta|m->``, and a collapse when it
    ends in a single metastable level.
    """
    if pattern.absorbed:
        return Category.ABSORBED
    if post_atom is None:
        raise ClassificationError(f"pattern {pattern} has no post-measurement atom")
    preserved = fidelity(initial_atom, post_atom) > 1 - ATOL
    if pattern.all_upper and preserved:
        return Category.NOT_DETECTED_REPEATABLE
    if preserved:
        return Category.NQI_SUCCESS
    if fidelity(initial_atom.phase_flipped(), post_atom) > 1 - ATOL:
        return Category.PHASE_FLIP_DETECTION
    if _is_basis_state(post_atom):
        return Category.COLLAPSE_DETECTION
    raise ClassificationError(
        f"pattern {pattern} leaves the atom in ({post_atom.alpha:.6g}, {post_atom.beta:.6g}), "
        f"which matches no category for initial ({initial_atom.alpha:.6g}, {initial_atom.beta:.6g})"
    )


def align_phase(atom: AtomSuperposition, reference: AtomSuperposition | None = None) -> AtomSuperposition:
    """Fix the global phase of ``atom``: overlap with ``reference`` made real positive,
    or, with no usable reference, its largest component made real positive."""
    if reference is not None:
        overlap = reference.alpha.conjugate() * atom.alpha + reference.beta.conjugate() * atom.beta
        if abs(overlap) > ATOL:
            return atom.with_global_phase(-cmath.phase(overlap))
    lead = atom.alpha if abs(atom.alpha) >= abs(atom.beta) else atom.beta
    return atom.with_global_phase(-cmath.phase(lead))


def classify_records(records: list[OutcomeRecord], initial_atom: AtomSuperposition) -> list[OutcomeRecord]:
    """Classify every record and phase-align its post-measurement atom for display."""
    references = {
        Category.NOT_DETECTED_REPEATABLE: initial_atom,
        Category.NQI_SUCCESS: initial_atom,
        Category.PHASE_FLIP_DETECTION: initial_atom.phase_flipped(),
    }
    out = []
    for r in records:
        cat = classify(r.pattern, r.post_atom, initial_atom)
        if r.post_atom is None:
            out.append(r.with_category(cat, None))
            continue
        post = align_phase(r.post_atom, references.get(cat))
        out.append(OutcomeRecord(r.pattern, r.probability, post, cat, fidelity(initial_atom, post)))
    return out


def category_probabilities(records: list[OutcomeRecord]) -> dict[Category, float]:
    totals = {c: 0.0 for c in Category}
    for r in records:
        if r.category is None:
            raise ValueError("records must be classified first")
        totals[r.category] += r.probability
    return totals


def port_probabilities(records: list[OutcomeRecord]) -> dict[tuple[Direction, Path], float]:
    """Marginal click probability per port, polarization summed out (photon-weighted)."""
    out = {port: 0.0 for port in PORTS}
    for r in records:
        for c in r.pattern.clicks:
            out[c.port] += r.probability
    return out
