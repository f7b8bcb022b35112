"""Joint photon/atom states and the polarization-selective absorber.

The atom sits in one arm of the interferometer.  A photon in that arm whose
circular polarization matches the atom's metastable level (+ for m+, - for
m-) is absorbed with unit efficiency; the atom decays at once to the ground
level and the branch leaves the coherent evolution for good.
"""

from __future__ import annotations

import cmath
import enum
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

from .fock import (
    ATOL,
    Basis,
    Direction,
    ModeId,
    Occupation,
    Path,
    PhotonState,
    Polarization,
    squared_norm,
)


class AtomLevel(enum.Enum):
    M_PLUS = "m+"
    M_MINUS = "m-"
    GROUND = "g"


COUPLED_POLARIZATION = {AtomLevel.M_PLUS: Polarization.PLUS, AtomLevel.M_MINUS: Polarization.MINUS}
METASTABLE = (AtomLevel.M_PLUS, AtomLevel.M_MINUS)


@dataclass(frozen=True)
class AtomSuperposition:
    """``alpha|m+> + beta|m->``; normalization is checked on construction."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > ATOL:
            raise ValueError(f"atom amplitudes not normalized: |alpha|^2+|beta|^2 = {abs(a) ** 2 + abs(b) ** 2!r}")

    @classmethod
    def from_bloch(cls, theta: float, phi: float) -> AtomSuperposition:
        return cls(math.cos(theta / 2), cmath.exp(1j * phi) * math.sin(theta / 2))

    @classmethod
    def normalized(cls, alpha: complex, beta: complex) -> AtomSuperposition:
        n = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if n == 0:
            raise ValueError("zero atomic vector")
        return cls(alpha / n, beta / n)

    def phase_flipped(self) -> AtomSuperposition:
        return AtomSuperposition(self.alpha, -self.beta)

    def with_global_phase(self, phase: float) -> AtomSuperposition:
        f = cmath.exp(1j * phase)
        return AtomSuperposition(f * self.alpha, f * self.beta)

    def amplitude(self, level: AtomLevel) -> complex:
        if level is AtomLevel.M_PLUS:
            return self.alpha
        if level is AtomLevel.M_MINUS:
            return self.beta
        return 0j


@dataclass(frozen=True)
class ScatteredBranch:
    """A terminal branch: one photon absorbed, atom left in the ground level."""

    surviving_photons: Occupation
    amplitude: complex
    absorbed_polarization: Polarization
    absorbed_direction: Direction

    @property
    def probability(self) -> float:
        return abs(self.amplitude) ** 2


@dataclass(frozen=True)
class JointState:
    """Coherent photon state per metastable level, plus the scattered sector."""

    components: Mapping[AtomLevel, PhotonState]
    scattered: tuple[ScatteredBranch, ...] = field(default=())

    def __post_init__(self):
        comps = dict(self.components)
        if AtomLevel.GROUND in comps:
            raise ValueError("the ground level only appears inside scattered branches")
        registries = {s.modes for s in comps.values()}
        if len(registries) > 1:
            raise ValueError("coherent components must share one mode registry")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "scattered", tuple(self.scattered))

    @property
    def coherent(self) -> dict[tuple[Occupation, AtomLevel], complex]:
        return {(occ, level): amp for level, s in self.components.items() for occ, amp in s.terms.items()}

    @property
    def modes(self) -> tuple[ModeId, ...]:
        return next(iter(self.components.values())).modes

    def coherent_probability(self) -> float:
        return math.fsum(squared_norm(s) for s in self.components.values())

    def scattered_probability(self) -> float:
        return math.fsum(b.probability for b in self.scattered)

    def total_probability(self) -> float:
        return self.coherent_probability() + self.scattered_probability()

    def __add__(self, other: JointState) -> JointState:
        comps = dict(self.components)
        for level, s in other.components.items():
            comps[level] = comps[level] + s if level in comps else s
        return JointState(comps, self.scattered + other.scattered)

    def scaled(self, factor: complex) -> JointState:
        return JointState(
            {lv: s.scaled(factor) for lv, s in self.components.items()},
            tuple(ScatteredBranch(b.surviving_photons, factor * b.amplitude, b.absorbed_polarization, b.absorbed_direction) for b in self.scattered),
        )


def tensor(probe: PhotonState, atom: AtomSuperposition) -> JointState:
    if abs(squared_norm(probe) - 1) > ATOL:
        raise ValueError("probe state is not normalized")
    if not isinstance(atom, AtomSuperposition):
        atom = AtomSuperposition(*atom)
    comps = {level: probe.scaled(atom.amplitude(level)) for level in METASTABLE}
    return JointState(comps)


def apply_optics(state: JointState, op: Callable[[PhotonState], PhotonState]) -> JointState:
    """Lift a photonic map onto the coherent sector; scattered branches are carried as-is."""
    return JointState({lv: op(s) for lv, s in state.components.items()}, state.scattered)


def interact_atom(state: JointState, atom_present: bool = True, atom_arm: Path = Path.LOWER) -> JointState:
    """One pass of every photon through the atom's arm.

    A coherent term holding k >= 1 matching photon modes feeds k scattered
    branches of amplitude ``amp / sqrt(k)`` each, one per matching mode.
    """
    if not atom_present:
        return state
    modes = state.modes
    if any(modes[i].polarization.basis is not Basis.CIRCULAR for i in _arm_indices(modes, atom_arm)):
        raise ValueError("the atom couples in the circular basis; rotate the arm modes back first")
    new_components: dict[AtomLevel, PhotonState] = {}
    branches = list(state.scattered)
    for level, photons in state.components.items():
        pol = COUPLED_POLARIZATION[level]
        targets = [i for i, m in enumerate(modes) if m.path is atom_arm and m.polarization is pol]
        kept: dict[Occupation, complex] = {}
        for occ, amp in photons.terms.items():
            hits = [i for i in targets if occ[i] > 0]
            if not hits:
                kept[occ] = amp
                continue
            share = amp / math.sqrt(len(hits))
            for i in hits:
                survivors = occ[:i] + (occ[i] - 1,) + occ[i + 1:]
                branches.append(ScatteredBranch(survivors, share, pol, modes[i].direction))
        new_components[level] = photons.with_terms(kept)
    return JointState(new_components, tuple(branches))


def _arm_indices(modes: tuple[ModeId, ...], arm: Path) -> list[int]:
    return [i for i, m in enumerate(modes) if m.path is arm]
