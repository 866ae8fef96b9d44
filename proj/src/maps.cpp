#include "dynmap/maps.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace dynmap {

Vector vectorize(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix devectorize(const Vector& v) {
    const Index d = system_dim_from_liouville(v.size());
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

DynamicalMapSeries::DynamicalMapSeries(double dt, double t0, std::vector<Superoperator> maps)
    : dt_(dt), t0_(t0), maps_(std::move(maps)) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("time step must be positive");
    }
    if (!maps_.empty()) {
        dim_ = maps_.front().dim();
        for (const auto& m : maps_) {
            if (m.dim() != dim_) {
                throw DimensionMismatch("dynamical maps in a series must share their dimension");
            }
        }
    }
}

Superoperator DynamicalMapSeries::at(std::size_t n) const {
    if (n == 0) return Superoperator::identity(dim_);
    if (n > maps_.size()) {
        throw std::out_of_range("map index " + std::to_string(n) + " beyond series length " +
                                std::to_string(maps_.size()));
    }
    return maps_[n - 1];
}

DynamicalMapSeries DynamicalMapSeries::prefix(std::size_t n) const {
    if (n > maps_.size()) throw std::out_of_range("prefix longer than series");
    return DynamicalMapSeries(dt_, t0_, {maps_.begin(), maps_.begin() + static_cast<long>(n)});
}

std::vector<Matrix> matrix_unit_basis(Index dim) {
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(dim * dim));
    for (Index j = 0; j < dim; ++j) {
        for (Index i = 0; i < dim; ++i) {
            Matrix e = Matrix::Zero(dim, dim);
            e(i, j) = 1.0;
            basis.push_back(std::move(e));
        }
    }
    return basis;
}

std::vector<Matrix> pauli_state_basis() {
    const Matrix id = pauli::identity();
    return {0.5 * (id + pauli::z()), 0.5 * (id - pauli::z()), 0.5 * (id + pauli::x()),
            0.5 * (id + pauli::y())};
}

DynamicalMapSeries from_trajectories(std::span<const Matrix> basis_states,
                                     std::span<const std::vector<Matrix>> trajectories,
                                     double dt, double t0, const NumericsSettings& settings) {
    if (basis_states.empty()) throw DimensionMismatch("empty tomography basis");
    const Index d = basis_states.front().rows();
    const Index d2 = d * d;
    if (static_cast<Index>(basis_states.size()) != d2) {
        throw DimensionMismatch("tomography needs exactly D^2 basis states");
    }
    if (trajectories.size() != basis_states.size()) {
        throw DimensionMismatch("one trajectory per basis state is required");
    }
    const std::size_t steps = trajectories.front().size();
    for (const auto& tr : trajectories) {
        if (tr.size() != steps) throw DimensionMismatch("trajectories differ in length");
    }

    Matrix basis(d2, d2);
    for (Index b = 0; b < d2; ++b) {
        const auto& s = basis_states[static_cast<std::size_t>(b)];
        if (s.rows() != d || s.cols() != d) throw DimensionMismatch("basis state has wrong shape");
        basis.col(b) = vectorize(s);
    }
    const Matrix gram = basis.adjoint() * basis;
    const RealVector sv = Eigen::JacobiSVD<Matrix>(gram).singularValues();
    const double cond = sv(d2 - 1) > 0.0 ? sv(0) / sv(d2 - 1) : INFINITY;
    if (!(cond <= settings.max_basis_gram_condition)) throw SingularBasis(cond);

    // E B = Y  <=>  B^T E^T = Y^T
    const Eigen::FullPivLU<Matrix> lu(basis.transpose());
    std::vector<Superoperator> maps;
    maps.reserve(steps);
    Matrix outputs(d2, d2);
    for (std::size_t n = 0; n < steps; ++n) {
        for (Index b = 0; b < d2; ++b) {
            const auto& rho = trajectories[static_cast<std::size_t>(b)][n];
            if (rho.rows() != d || rho.cols() != d) {
                throw DimensionMismatch("trajectory state has wrong shape");
            }
            outputs.col(b) = vectorize(rho);
        }
        maps.emplace_back(lu.solve(outputs.transpose()).transpose());
    }
    return DynamicalMapSeries(dt, t0, std::move(maps));
}

RealVector singular_values(const Superoperator& map) {
    return Eigen::JacobiSVD<Matrix>(map.matrix()).singularValues();
}

double singular_ratio(const Superoperator& map) {
    const RealVector sv = singular_values(map);
    if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
    return sv(sv.size() - 1) / sv(0);
}

Superoperator invert(const Superoperator& map, double ratio_threshold) {
    if (!(ratio_threshold > 0.0)) throw std::invalid_argument("ratio threshold must be positive");
    const double ratio = singular_ratio(map);
    if (ratio < ratio_threshold) throw NearSingularMap(ratio);
    return Superoperator(map.matrix().partialPivLu().inverse());
}

namespace {

double relative_frobenius(const Matrix& a, const Matrix& b) {
    const double scale = b.norm();
    return scale > 0.0 ? (a - b).norm() / scale : (a - b).norm();
}

}  // namespace

Generator logm(const Superoperator& map, double dt, const NumericsSettings& settings) {
    if (!(dt > 0.0)) throw std::invalid_argument("logm requires dt > 0");
    const Matrix& e = map.matrix();
    const Eigen::ComplexEigenSolver<Matrix> es(e);
    if (es.info() != Eigen::Success) throw NonDiagonalizable("eigen-decomposition did not converge");

    const Vector& lambda = es.eigenvalues();
    for (Index i = 0; i < lambda.size(); ++i) {
        if (std::abs(lambda(i)) == 0.0 ||
            std::abs(std::arg(lambda(i))) > std::numbers::pi - settings.branch_tolerance) {
            throw BranchAmbiguity("map eigenvalue " + std::to_string(lambda(i).real()) + "+" +
                                  std::to_string(lambda(i).imag()) +
                                  "i lies on the branch cut of the logarithm");
        }
    }

    const Matrix& v = es.eigenvectors();
    const RealVector vsv = Eigen::JacobiSVD<Matrix>(v).singularValues();
    const double vcond = vsv(vsv.size() - 1) > 0.0 ? vsv(0) / vsv(vsv.size() - 1) : INFINITY;
    if (vcond <= settings.max_eigenvector_condition) {
        const Vector log_lambda = lambda.array().log();
        const Matrix g = v * log_lambda.asDiagonal() * v.partialPivLu().inverse();
        return Generator(g / dt);
    }

    if (settings.logm_schur_fallback) {
        const Matrix g = e.log();
        if (g.allFinite() && relative_frobenius(g.exp(), e) <= settings.logm_roundtrip_tolerance) {
            return Generator(g / dt);
        }
    }
    throw NonDiagonalizable("eigenvector condition number " + std::to_string(vcond) +
                            " exceeds limit");
}

Superoperator expm(const Generator& gen, double dt) {
    if (dt < 0.0) throw std::invalid_argument("expm requires dt >= 0");
    if (dt == 0.0) return Superoperator::identity(gen.dim());
    const Matrix scaled = gen.matrix() * dt;
    return Superoperator(scaled.exp());
}

double frobenius_diff(const Superoperator& a, const Superoperator& b) {
    if (a.liouville_dim() != b.liouville_dim()) {
        throw DimensionMismatch("frobenius_diff on maps of different dimension");
    }
    return (a.matrix() - b.matrix()).norm();
}

double trace_preservation_defect(const Superoperator& map) {
    const Vector id = vectorize(Matrix::Identity(map.dim(), map.dim()));
    const Eigen::RowVectorXcd row = id.adjoint() * map.matrix();
    return (row - id.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace dynmap
