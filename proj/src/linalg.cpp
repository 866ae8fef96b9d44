#include "dynmap/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace dynmap {

Index system_dim_from_liouville(Index liouville_size) {
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(liouville_size))));
    if (d * d != liouville_size || d == 0) {
        throw DimensionMismatch("Liouville dimension " + std::to_string(liouville_size) +
                                " is not a nonzero perfect square");
    }
    return d;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Matrix sandwich_superop(const Matrix& left, const Matrix& right) {
    return kron(right.transpose(), left);
}

Matrix commutator_superop(const Matrix& hamiltonian) {
    const Matrix id = Matrix::Identity(hamiltonian.rows(), hamiltonian.cols());
    const Complex mi(0.0, -1.0);
    return mi * (sandwich_superop(hamiltonian, id) - sandwich_superop(id, hamiltonian));
}

Matrix dissipator_superop(const Matrix& op) {
    const Matrix id = Matrix::Identity(op.rows(), op.cols());
    const Matrix ldl = op.adjoint() * op;
    return sandwich_superop(op, op.adjoint()) - 0.5 * sandwich_superop(ldl, id) -
           0.5 * sandwich_superop(id, ldl);
}

namespace pauli {
Matrix identity() { return Matrix::Identity(2, 2); }
Matrix x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Matrix y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
Matrix z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace dynmap
