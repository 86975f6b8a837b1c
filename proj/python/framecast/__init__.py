"""Certified local-to-global frame bounds on finite truncations."""

from ._core import (
    BandedCommutingVerdict,
    DSReport,
    DSSystemSpec,
    EnvelopeSequence,
    FrameBounds,
    FramecastError,
    GammaVariant,
    GlueVerdict,
    HypothesisCheck,
    L1Certificate,
    LocalSystem,
    OperatorFamily,
    PairViolation,
    PartitionProjectors,
    Projector,
    ProjectorFamily,
    PropOfCertificate,
    Provenance,
    SupportedVector,
    VectorSystem,
    WindowConvention,
    analysis_matrix,
    assemble_global,
    canonical_dual,
    check_banded_commuting,
    conv_power,
    convolve,
    deduce_fusion_bounds,
    diag_ds_system,
    disjointify,
    ds_check,
    ds_global_system,
    ds_local_system,
    envelope,
    frame_bounds,
    frame_operator,
    fusion_bounds,
    gamma,
    is_complete,
    is_frame,
    reconstruct,
    shifted_assembly,
    theorem_l1_check,
    verify_prop_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
