#pragma once

namespace dynmap {

/// Every numerical tolerance used across the library, with its default.
struct NumericsSettings {
    /// from_trajectories: largest accepted condition number of the basis Gram matrix.
    double max_basis_gram_condition = 1e12;
    /// invert / local_maps: smallest accepted sigma_min / sigma_max.
    double singular_ratio_threshold = 1e-8;
    /// logm: eigenvalues with |arg| > pi - branch_tolerance are rejected.
    double branch_tolerance = 1e-6;
    /// logm: eigenvector condition number above which the eigen route is abandoned.
    double max_eigenvector_condition = 1e12;
    /// logm: fall back to a Schur-based logarithm when eigenvectors are ill conditioned.
    bool logm_schur_fallback = true;
    /// logm: round-trip tolerance (relative Frobenius) the fallback must satisfy.
    double logm_roundtrip_tolerance = 1e-8;
    /// canonical_decompose: vec(I)^dagger G must vanish to this (relative) level.
    double trace_preservation_tolerance = 1e-8;
    /// canonical_decompose: rates closer than this are reported as degenerate.
    double degenerate_rate_tolerance = 1e-10;
    /// spectral_stability: eigenvalue modulus above 1 + this is unstable.
    double spectral_stability_tolerance = 1e-9;
    /// Frobenius difference of successive local maps regarded as stationary.
    double stationarity_tolerance = 1e-6;
};

}  // namespace dynmap
