"""Extrapolation of non-Markovian dynamical maps with transfer tensors and time-local maps."""

from ._core import (
    ConfigError,
    DynmapError,
    NumericalError,
    canonical_decompose,
    commutator_superop,
    compare_config,
    compare_preset,
    decompose,
    devectorize,
    dissipator_superop,
    eta_coefficients,
    expm,
    extrapolate_tl,
    extrapolate_ttm,
    local_maps,
    logm,
    read_dmap,
    resum,
    singular_values,
    vectorize,
    write_dmap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
