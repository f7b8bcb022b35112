"""Sparse few-photon Fock states over the eight interferometer modes.

A state is stored as a map from occupation tuples (photon count per mode) to
complex amplitudes, always in the *normalized* Fock basis, so the squared
norm is just the sum of ``|amp|**2``.  Every state carries the registry of
eight modes its occupation tuples index into; the default registry uses the
circular polarizations, and the linear registry is reached by rotation
(see :mod:`nqi_sim.optics`).
"""

from __future__ import annotations

import enum
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

import numpy as np

ATOL = 1e-10
PURGE_THRESHOLD = 1e-14
DEFAULT_MAX_OCCUPANCY = 4


class CapacityError(ValueError):
    """A mode occupation exceeded the configured cap."""


class Direction(enum.IntEnum):
    RIGHT = 0
    LEFT = 1

    @property
    def arrow(self) -> str:
        return "R" if self is Direction.RIGHT else "L"


class Path(enum.IntEnum):
    UPPER = 0
    LOWER = 1

    @property
    def letter(self) -> str:
        return "u" if self is Path.UPPER else "l"


class Polarization(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    X = "x"
    Y = "y"

    @property
    def basis(self) -> Basis:
        return Basis.CIRCULAR if self in (Polarization.PLUS, Polarization.MINUS) else Basis.LINEAR

    @property
    def slot(self) -> int:
        """Position of this label within its basis (0 or 1)."""
        return 0 if self in (Polarization.PLUS, Polarization.X) else 1


class Basis(enum.Enum):
    CIRCULAR = "circular"
    LINEAR = "linear"

    @property
    def labels(self) -> tuple[Polarization, Polarization]:
        if self is Basis.CIRCULAR:
            return (Polarization.PLUS, Polarization.MINUS)
        return (Polarization.X, Polarization.Y)


class ModeId(NamedTuple):
    direction: Direction
    path: Path
    polarization: Polarization

    @property
    def port(self) -> tuple[Direction, Path]:
        return (self.direction, self.path)

    def sort_key(self) -> tuple[int, int, int]:
        return (int(self.direction), int(self.path), self.polarization.slot)

    def __str__(self) -> str:
        return f"{self.direction.arrow}{self.path.letter}{self.polarization.value}"


PORTS: tuple[tuple[Direction, Path], ...] = tuple(product(Direction, Path))


def mode_registry(bases: Basis | Mapping[tuple[Direction, Path], Basis] = Basis.CIRCULAR) -> tuple[ModeId, ...]:
    """The eight modes in canonical order (direction, then path, then polarization slot).

    ``bases`` is either one basis for every port or a per-port mapping.
    """
    if isinstance(bases, Basis):
        bases = {port: bases for port in PORTS}
    modes = []
    for d, p in PORTS:
        for pol in bases[(d, p)].labels:
            modes.append(ModeId(d, p, pol))
    return tuple(modes)


CIRCULAR_MODES = mode_registry(Basis.CIRCULAR)
LINEAR_MODES = mode_registry(Basis.LINEAR)
NUM_MODES = len(CIRCULAR_MODES)

Occupation = tuple[int, ...]


def mode(direction: Direction, path: Path, polarization: Polarization | str) -> ModeId:
    return ModeId(direction, path, Polarization(polarization))


@dataclass(frozen=True)
class PhotonState:
    """Immutable sparse superposition of normalized occupation states."""

    terms: Mapping[Occupation, complex] = field(default_factory=dict)
    modes: tuple[ModeId, ...] = CIRCULAR_MODES
    max_occupancy: int = DEFAULT_MAX_OCCUPANCY

    def __post_init__(self):
        if len(self.modes) != NUM_MODES or len(set(self.modes)) != NUM_MODES:
            raise ValueError("a mode registry must hold exactly 8 distinct modes")
        clean: dict[Occupation, complex] = {}
        for occ, amp in self.terms.items():
            occ = tuple(int(n) for n in occ)
            if len(occ) != NUM_MODES or min(occ) < 0:
                raise ValueError(f"bad occupation {occ}")
            if max(occ) > self.max_occupancy:
                raise CapacityError(f"occupation {occ} exceeds max_occupancy={self.max_occupancy}")
            amp = complex(amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ValueError(f"non-finite amplitude {amp!r}")
            if abs(amp) >= PURGE_THRESHOLD:
                clean[occ] = amp
        object.__setattr__(self, "terms", clean)

    @classmethod
    def vacuum(cls, modes: tuple[ModeId, ...] = CIRCULAR_MODES, max_occupancy: int = DEFAULT_MAX_OCCUPANCY) -> PhotonState:
        return cls({(0,) * NUM_MODES: 1.0}, modes, max_occupancy)

    @classmethod
    def basis_state(cls, counts: Mapping[ModeId, int], modes: tuple[ModeId, ...] = CIRCULAR_MODES) -> PhotonState:
        occ = [0] * NUM_MODES
        for m, n in counts.items():
            occ[modes.index(m)] += n
        return cls({tuple(occ): 1.0}, modes)

    def index(self, m: ModeId) -> int:
        try:
            return self.modes.index(m)
        except ValueError:
            raise ValueError(f"mode {m} is not in this state's registry") from None

    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self.terms}

    def with_terms(self, terms: Mapping[Occupation, complex], modes: tuple[ModeId, ...] | None = None) -> PhotonState:
        return PhotonState(terms, self.modes if modes is None else modes, self.max_occupancy)

    def scaled(self, factor: complex) -> PhotonState:
        return self.with_terms({occ: factor * amp for occ, amp in self.terms.items()})

    def __add__(self, other: PhotonState) -> PhotonState:
        _check_same_registry(self, other)
        out = dict(self.terms)
        for occ, amp in other.terms.items():
            out[occ] = out.get(occ, 0.0) + amp
        return self.with_terms(out)

    def __mul__(self, factor: complex) -> PhotonState:
        return self.scaled(factor)

    __rmul__ = __mul__

    def amplitude(self, counts: Mapping[ModeId, int] | Occupation) -> complex:
        if isinstance(counts, Mapping):
            occ = [0] * NUM_MODES
            for m, n in counts.items():
                occ[self.index(m)] += n
            counts = tuple(occ)
        return self.terms.get(tuple(counts), 0j)

    def describe(self) -> str:
        parts = []
        for occ, amp in sorted(self.terms.items()):
            label = " ".join(f"{self.modes[i]}" + (f"^{n}" if n > 1 else "") for i, n in enumerate(occ) if n) or "vac"
            parts.append(f"({amp.real:+.6g}{amp.imag:+.6g}j)|{label}>")
        return " ".join(parts) or "0"


def _check_same_registry(a: PhotonState, b: PhotonState) -> None:
    if a.modes != b.modes:
        raise ValueError("states live on different mode registries")


def create_photon(state: PhotonState, m: ModeId) -> PhotonState:
    """Apply the creation operator of mode ``m`` (carries the sqrt(n+1) factor)."""
    i = state.index(m)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.terms.items():
        n = occ[i]
        if n + 1 > state.max_occupancy:
            raise CapacityError(f"mode {m} would hold {n + 1} photons (max {state.max_occupancy})")
        new = occ[:i] + (n + 1,) + occ[i + 1:]
        out[new] = amp * math.sqrt(n + 1)
    return state.with_terms(out)


def inner_product(a: PhotonState, b: PhotonState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_same_registry(a, b)
    small, large = (a.terms, b.terms) if len(a.terms) <= len(b.terms) else (b.terms, a.terms)
    total = 0j
    for occ in small:
        if occ in large:
            total += a.terms[occ].conjugate() * b.terms[occ]
    return total


def squared_norm(state: PhotonState) -> float:
    return math.fsum(abs(amp) ** 2 for amp in state.terms.values())


def is_unitary(u: np.ndarray, atol: float = ATOL) -> bool:
    u = np.asarray(u, dtype=complex)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=atol)


def transform_modes(state: PhotonState, matrix: np.ndarray, modes: tuple[ModeId, ...] | None = None) -> PhotonState:
    """Apply a passive linear map given by its single-photon matrix.

    Column ``i`` of ``matrix`` is the image of the creation operator of
    mode ``i``: ``a_i^dag -> sum_j matrix[j, i] a_j^dag``.  The output is
    expressed over ``modes`` (the input registry by default); this is how a
    change of polarization basis relabels the registry.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (NUM_MODES, NUM_MODES):
        raise ValueError(f"expected an {NUM_MODES}x{NUM_MODES} single-photon matrix")
    images = [
        [(j, complex(matrix[j, i])) for j in range(NUM_MODES) if abs(matrix[j, i]) > 0]
        for i in range(NUM_MODES)
    ]
    out: dict[Occupation, complex] = {}
    for occ, amp in state.terms.items():
        # normalized |n> = prod (a_i^dag)^{n_i} / sqrt(n_i!) |0>
        factors = [images[i] for i, n in enumerate(occ) for _ in range(n)]
        norm = amp / math.sqrt(math.prod(math.factorial(n) for n in occ))
        for choice in product(*factors):
            coef = norm
            new = [0] * NUM_MODES
            for j, c in choice:
                coef *= c
                new[j] += 1
            # monomial prod (a_j^dag)^{m_j} |0> = sqrt(prod m_j!) |m>
            coef *= math.sqrt(math.prod(math.factorial(m) for m in new))
            key = tuple(new)
            out[key] = out.get(key, 0j) + coef
    return state.with_terms(out, modes)


def apply_mode_pair_unitary(state: PhotonState, mode_a: ModeId, mode_b: ModeId, u: np.ndarray) -> PhotonState:
    """Mix two modes: ``a_A -> u00 a_A + u10 a_B``, ``a_B -> u01 a_A + u11 a_B``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("mode-pair unitary must be 2x2")
    if not is_unitary(u):
        raise ValueError("matrix is not unitary")
    ia, ib = state.index(mode_a), state.index(mode_b)
    if ia == ib:
        raise ValueError("mode_a and mode_b must differ")
    matrix = embed_pair(u, ia, ib)
    return transform_modes(state, matrix)


def embed_pair(u: np.ndarray, ia: int, ib: int) -> np.ndarray:
    matrix = np.eye(NUM_MODES, dtype=complex)
    matrix[np.ix_([ia, ib], [ia, ib])] = u
    return matrix


def superpose(pieces: Iterable[tuple[complex, PhotonState]]) -> PhotonState:
    pieces = list(pieces)
    if not pieces:
        raise ValueError("nothing to superpose")
    total = pieces[0][1].scaled(pieces[0][0])
    for c, s in pieces[1:]:
        total = total + s.scaled(c)
    return total


def from_creations(monomials: Sequence[tuple[complex, Sequence[ModeId]]], modes: tuple[ModeId, ...] = CIRCULAR_MODES) -> PhotonState:
    """Build ``sum_k c_k prod a^dag |0>`` from a list of (coefficient, modes) monomials."""
    total = PhotonState({}, modes)
    for coef, creations in monomials:
        s = PhotonState.vacuum(modes)
        for m in creations:
            s = create_photon(s, m)
        total = total + s.scaled(coef)
    return total
