#pragma once

#include <stdexcept>
#include <string>

namespace dynmap {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: malformed config files, unknown model names, missing keys.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical precondition failed (singular data, branch cuts, quadrature).
class NumericalError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularBasis : public NumericalError {
public:
    SingularBasis(double condition)
        : NumericalError("tomography basis is singular (Gram condition number " +
                         std::to_string(condition) + ")"),
          condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class NearSingularMap : public NumericalError {
public:
    NearSingularMap(double ratio)
        : NumericalError("dynamical map is near singular (sigma_min/sigma_max = " +
                         std::to_string(ratio) + ")"),
          ratio_(ratio) {}
    /// sigma_min / sigma_max of the offending map.
    double ratio() const noexcept { return ratio_; }

private:
    double ratio_;
};

class BranchAmbiguity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonDiagonalizable : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CutoffExceedsData : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StationaryMapFlagged : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotTracePreserving : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NegativeFrequency : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
public:
    QuadratureFailure(const std::string& what, double achieved)
        : NumericalError(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}
    double achieved_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

class TruncationGuard : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class MemoryBudgetExceeded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonDiagonalizableCoupling : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UnknownModel : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace dynmap
