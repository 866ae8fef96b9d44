#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "dynmap/errors.hpp"

namespace dynmap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Hilbert-space dimension D for a Liouville-space size D^2; throws if not a square.
Index system_dim_from_liouville(Index liouville_size);

/// Square matrix acting on column-stacked vectorized D x D operators.
///
/// The tag distinguishes propagators (dimensionless) from generators (inverse
/// time) so that the two cannot be mixed up by accident.
template <class Tag>
class BasicSuperoperator {
public:
    BasicSuperoperator() = default;

    explicit BasicSuperoperator(Matrix m) : mat_(std::move(m)) {
        if (mat_.rows() != mat_.cols()) {
            throw DimensionMismatch("superoperator matrix must be square");
        }
        dim_ = system_dim_from_liouville(mat_.rows());
    }

    static BasicSuperoperator identity(Index dim) {
        return BasicSuperoperator(Matrix::Identity(dim * dim, dim * dim));
    }
    static BasicSuperoperator zero(Index dim) {
        return BasicSuperoperator(Matrix::Zero(dim * dim, dim * dim));
    }

    /// Hilbert-space dimension D.
    Index dim() const noexcept { return dim_; }
    Index liouville_dim() const noexcept { return mat_.rows(); }
    const Matrix& matrix() const noexcept { return mat_; }

    BasicSuperoperator operator*(const BasicSuperoperator& rhs) const {
        check_same(rhs);
        return BasicSuperoperator(mat_ * rhs.mat_);
    }
    BasicSuperoperator operator+(const BasicSuperoperator& rhs) const {
        check_same(rhs);
        return BasicSuperoperator(mat_ + rhs.mat_);
    }
    BasicSuperoperator operator-(const BasicSuperoperator& rhs) const {
        check_same(rhs);
        return BasicSuperoperator(mat_ - rhs.mat_);
    }
    BasicSuperoperator scaled(Complex s) const { return BasicSuperoperator(mat_ * s); }

    Vector apply(const Vector& v) const {
        if (v.size() != mat_.cols()) {
            throw DimensionMismatch("vector length does not match superoperator");
        }
        return mat_ * v;
    }

private:
    void check_same(const BasicSuperoperator& rhs) const {
        if (rhs.dim_ != dim_) {
            throw DimensionMismatch("superoperator dimensions differ");
        }
    }

    Matrix mat_;
    Index dim_ = 0;
};

struct MapTag {};
struct GeneratorTag {};

using Superoperator = BasicSuperoperator<MapTag>;
using Generator = BasicSuperoperator<GeneratorTag>;

/// vec(A rho B) = (B^T kron A) vec(rho) under column stacking.
Matrix sandwich_superop(const Matrix& left, const Matrix& right);

/// -i[H, .]
Matrix commutator_superop(const Matrix& hamiltonian);

/// L . L^dagger - 1/2 {L^dagger L, .}
Matrix dissipator_superop(const Matrix& op);

Matrix kron(const Matrix& a, const Matrix& b);

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

/// Largest singular value.
double spectral_norm(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol);

}  // namespace dynmap
