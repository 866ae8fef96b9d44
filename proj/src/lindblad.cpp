#include "dynmap/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dynmap {

std::vector<Matrix> gell_mann_basis(Index dim) {
    std::vector<Matrix> basis;
    const double r2 = std::sqrt(0.5);
    for (Index j = 0; j < dim; ++j) {
        for (Index k = j + 1; k < dim; ++k) {
            Matrix s = Matrix::Zero(dim, dim);
            s(j, k) = r2;
            s(k, j) = r2;
            basis.push_back(s);
            Matrix a = Matrix::Zero(dim, dim);
            a(j, k) = Complex(0.0, -r2);
            a(k, j) = Complex(0.0, r2);
            basis.push_back(a);
        }
    }
    for (Index l = 1; l < dim; ++l) {
        Matrix d = Matrix::Zero(dim, dim);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
        for (Index j = 0; j < l; ++j) d(j, j) = norm;
        d(l, l) = -static_cast<double>(l) * norm;
        basis.push_back(d);
    }
    return basis;
}

namespace {

Matrix cross_dissipator(const Matrix& a, const Matrix& b) {
    // a . b^dag - 1/2 {b^dag a, .}
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    const Matrix bda = b.adjoint() * a;
    return sandwich_superop(a, b.adjoint()) - 0.5 * sandwich_superop(bda, id) -
           0.5 * sandwich_superop(id, bda);
}

}  // namespace

CanonicalForm canonical_decompose(const Generator& gen, const NumericsSettings& settings) {
    const Index d = gen.dim();
    const Index d2 = d * d;
    const Matrix& g = gen.matrix();

    const Vector vid = vectorize(Matrix::Identity(d, d));
    const double tp_defect = (vid.adjoint() * g).norm();
    if (tp_defect > settings.trace_preservation_tolerance * std::max(1.0, g.norm())) {
        throw NotTracePreserving("generator violates trace preservation by " +
                                 std::to_string(tp_defect));
    }

    const std::vector<Matrix> f = gell_mann_basis(d);
    const Index m = d2 - 1;
    const Index params = m + m * m;

    // Real design matrix: stacked (Re, Im) of vec(superoperator) per real parameter.
    Eigen::MatrixXd design(2 * d2 * d2, params);
    auto put = [&](Index col, const Matrix& s) {
        const Eigen::Map<const Vector> v(s.data(), s.size());
        design.col(col).head(d2 * d2) = v.real();
        design.col(col).tail(d2 * d2) = v.imag();
    };
    Index col = 0;
    for (Index k = 0; k < m; ++k) put(col++, commutator_superop(f[static_cast<std::size_t>(k)]));
    for (Index i = 0; i < m; ++i) {
        const auto& fi = f[static_cast<std::size_t>(i)];
        put(col++, cross_dissipator(fi, fi));
        for (Index j = i + 1; j < m; ++j) {
            const auto& fj = f[static_cast<std::size_t>(j)];
            // c_ij = x + i y, c_ji = x - i y
            const Matrix dij = cross_dissipator(fi, fj);
            const Matrix dji = cross_dissipator(fj, fi);
            put(col++, dij + dji);
            put(col++, Complex(0.0, 1.0) * (dij - dji));
        }
    }

    Eigen::VectorXd rhs(2 * d2 * d2);
    const Eigen::Map<const Vector> gv(g.data(), g.size());
    rhs.head(d2 * d2) = gv.real();
    rhs.tail(d2 * d2) = gv.imag();
    const Eigen::VectorXd x = design.colPivHouseholderQr().solve(rhs);

    CanonicalForm form;
    form.residual = (design * x - rhs).norm() / std::max(rhs.norm(), std::numeric_limits<double>::min());

    form.hamiltonian = Matrix::Zero(d, d);
    for (Index k = 0; k < m; ++k) form.hamiltonian += x(k) * f[static_cast<std::size_t>(k)];
    form.hamiltonian = 0.5 * (form.hamiltonian + form.hamiltonian.adjoint()).eval();

    Matrix kossakowski(m, m);
    Index p = m;
    for (Index i = 0; i < m; ++i) {
        kossakowski(i, i) = x(p++);
        for (Index j = i + 1; j < m; ++j) {
            const Complex c(x(p), x(p + 1));
            p += 2;
            kossakowski(i, j) = c;
            kossakowski(j, i) = std::conj(c);
        }
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(kossakowski);
    const RealVector& raw = es.eigenvalues();
    const Matrix& u = es.eigenvectors();

    for (Index a = 0; a < m; ++a) {
        for (Index b = a + 1; b < m; ++b) {
            if (std::abs(raw(a) - raw(b)) < settings.degenerate_rate_tolerance) form.degenerate_rates = true;
        }
    }

    std::vector<double> rates(static_cast<std::size_t>(m));
    std::vector<Matrix> ops(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) {
        Matrix op = Matrix::Zero(d, d);
        for (Index i = 0; i < m; ++i) op += u(i, j) * f[static_cast<std::size_t>(i)];
        const double s = spectral_norm(op);
        ops[static_cast<std::size_t>(j)] = op / s;
        rates[static_cast<std::size_t>(j)] = raw(j) * s * s;
    }
    std::vector<std::size_t> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(rates[a]) > std::abs(rates[b]); });
    for (auto i : order) {
        form.rates.push_back(rates[i]);
        form.operators.push_back(ops[i]);
    }
    return form;
}

Generator reassemble(const CanonicalForm& form) {
    const Index d = form.hamiltonian.rows();
    Matrix g = commutator_superop(form.hamiltonian);
    if (g.size() == 0) g = Matrix::Zero(d * d, d * d);
    for (std::size_t j = 0; j < form.rates.size(); ++j) {
        g += form.rates[j] * dissipator_superop(form.operators[j]);
    }
    return Generator(std::move(g));
}

std::vector<RateRow> rate_series(const LocalMapSeries& local, const NumericsSettings& settings) {
    std::vector<RateRow> rows;
    rows.reserve(local.size());
    for (std::size_t n = 0; n < local.size(); ++n) {
        RateRow row;
        row.t = local.time(n);
        if (local.flags[n].flagged) {
            row.flagged = true;
            row.min_rate = std::numeric_limits<double>::quiet_NaN();
            row.note = "near-singular inversion";
            rows.push_back(std::move(row));
            continue;
        }
        try {
            const CanonicalForm form = canonical_decompose(logm(local.maps[n], local.dt, settings), settings);
            row.rates = form.rates;
            row.min_rate = *std::min_element(form.rates.begin(), form.rates.end());
        } catch (const NumericalError& e) {
            row.flagged = true;
            row.min_rate = std::numeric_limits<double>::quiet_NaN();
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dynmap
