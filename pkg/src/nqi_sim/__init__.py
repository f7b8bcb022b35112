"""Exact simulator of nondistortion quantum interrogation with one or two probe photons."""

from .atom import AtomLevel, AtomSuperposition, JointState, ScatteredBranch, apply_optics, interact_atom, tensor
from .fock import (
    Basis,
    CapacityError,
    Direction,
    ModeId,
    Path,
    PhotonState,
    Polarization,
    apply_mode_pair_unitary,
    create_photon,
    inner_product,
    mode,
    squared_norm,
)
from .measurement import (
    Category,
    DetectionPattern,
    DetectorConfig,
    OutcomeRecord,
    classify,
    enumerate_outcomes,
    fidelity,
)
from .optics import BeamSplitterConvention, beam_splitter, rotate_to_circular, rotate_to_linear
from .protocol import (
    ExperimentConfig,
    RoundReport,
    Scheme,
    build_probe,
    monte_carlo,
    run_repeated,
    run_single_shot,
)

__all__ = [
    "AtomLevel",
    "AtomSuperposition",
    "JointState",
    "ScatteredBranch",
    "apply_optics",
    "interact_atom",
    "tensor",
    "Basis",
    "CapacityError",
    "Direction",
    "ModeId",
    "Path",
    "PhotonState",
    "Polarization",
    "apply_mode_pair_unitary",
    "create_photon",
    "inner_product",
    "mode",
    "squared_norm",
    "Category",
    "DetectionPattern",
    "DetectorConfig",
    "OutcomeRecord",
    "classify",
    "enumerate_outcomes",
    "fidelity",
    "BeamSplitterConvention",
    "beam_splitter",
    "rotate_to_circular",
    "rotate_to_linear",
    "ExperimentConfig",
    "RoundReport",
    "Scheme",
    "build_probe",
    "monte_carlo",
    "run_repeated",
    "run_single_shot",
]

__version__ = "0.1.0"
