"""Beam splitters and polarization-basis rotation for the interferometer."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .fock import (
    NUM_MODES,
    PORTS,
    Basis,
    Direction,
    Path,
    PhotonState,
    mode_registry,
    transform_modes,
)

SQRT_HALF = 1 / np.sqrt(2)


@dataclass(frozen=True)
class BeamSplitterConvention:
    """Sign of the i reflection phase per propagation direction.

    Right-movers pick up +i on reflection, left-movers -i.  With this choice
    the two-photon product probe comes out of the full interferometer with
    amplitudes +1/2, -i alpha/2, +i beta/2 and no extra global phase.
    """

    reflection_phase_sign_right: int = +1
    reflection_phase_sign_left: int = -1

    def sign(self, direction: Direction) -> int:
        return self.reflection_phase_sign_right if direction is Direction.RIGHT else self.reflection_phase_sign_left

    def pair_matrix(self, direction: Direction) -> np.ndarray:
        """2x2 matrix on (lower, upper) for one direction; columns are the images."""
        r = 1j * self.sign(direction)
        return np.array([[r, 1], [1, r]], dtype=complex) * SQRT_HALF


DEFAULT_CONVENTION = BeamSplitterConvention()

# single-photon maps between the two polarization slots of one port
CIRCULAR_TO_LINEAR = np.array([[-1, 1], [-1j, -1j]], dtype=complex) * SQRT_HALF
LINEAR_TO_CIRCULAR = np.array([[-1, 1j], [1, 1j]], dtype=complex) * SQRT_HALF


def port_bases(state: PhotonState) -> dict[tuple[Direction, Path], Basis]:
    return {(m.direction, m.path): m.polarization.basis for m in state.modes}


def beam_splitter_matrix(state: PhotonState, convention: BeamSplitterConvention = DEFAULT_CONVENTION) -> np.ndarray:
    bases = port_bases(state)
    matrix = np.zeros((NUM_MODES, NUM_MODES), dtype=complex)
    for d in Direction:
        if bases[(d, Path.LOWER)] is not bases[(d, Path.UPPER)]:
            raise ValueError(f"beam splitter needs matching polarization bases on both {d.name} ports")
        u = convention.pair_matrix(d)
        for slot in range(2):
            lower = _slot_index(state, d, Path.LOWER, slot)
            upper = _slot_index(state, d, Path.UPPER, slot)
            idx = [lower, upper]
            matrix[np.ix_(idx, idx)] = u
    return matrix


def _slot_index(state: PhotonState, d: Direction, p: Path, slot: int) -> int:
    for i, m in enumerate(state.modes):
        if m.direction is d and m.path is p and m.polarization.slot == slot:
            return i
    raise AssertionError("registry is missing a mode")


def beam_splitter(state: PhotonState, convention: BeamSplitterConvention = DEFAULT_CONVENTION) -> PhotonState:
    """One 50-50 non-polarizing beam splitter acting on both directions and both polarizations."""
    return transform_modes(state, beam_splitter_matrix(state, convention))


def rotation_matrix(
    state: PhotonState, target: Basis | Mapping[tuple[Direction, Path], Basis]
) -> tuple[np.ndarray, tuple]:
    """Single-photon matrix taking ``state``'s registry to the ``target`` bases, plus the new registry."""
    if isinstance(target, Basis):
        target = {port: target for port in PORTS}
    current = port_bases(state)
    wanted = {port: target.get(port, current[port]) for port in PORTS}
    new_modes = mode_registry(wanted)
    matrix = np.zeros((NUM_MODES, NUM_MODES), dtype=complex)
    for d, p in PORTS:
        src = [_slot_index(state, d, p, s) for s in range(2)]
        dst = [new_modes.index(m) for m in new_modes if m.port == (d, p)]
        if current[(d, p)] is wanted[(d, p)]:
            block = np.eye(2)
        elif wanted[(d, p)] is Basis.LINEAR:
            block = CIRCULAR_TO_LINEAR
        else:
            block = LINEAR_TO_CIRCULAR
        matrix[np.ix_(dst, src)] = block
    return matrix, new_modes


def rotate(state: PhotonState, target: Basis | Mapping[tuple[Direction, Path], Basis]) -> PhotonState:
    matrix, new_modes = rotation_matrix(state, target)
    return transform_modes(state, matrix, new_modes)


def rotate_to_linear(state: PhotonState, ports=None) -> PhotonState:
    """Re-express ``state`` with x/y labels on ``ports`` (all four by default)."""
    ports = PORTS if ports is None else ports
    return rotate(state, {port: Basis.LINEAR for port in ports})


def rotate_to_circular(state: PhotonState, ports=None) -> PhotonState:
    ports = PORTS if ports is None else ports
    return rotate(state, {port: Basis.CIRCULAR for port in ports})
