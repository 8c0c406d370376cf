#pragma once

// Dense kernels over ComplexMatrix. The decompositions are delegated to
// Eigen; the conventions (ordering, phases, clamping) are fixed here.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "matrix.hpp"
#include "tolerances.hpp"

namespace qswarm {

namespace detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix &m) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd &m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace detail

struct HermitianEigen {
    std::vector<double> values;  ///< ascending
    ComplexMatrix vectors;       ///< columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix. Only the lower triangle of the
/// Hermitian part is used, so tiny asymmetries are averaged away.
inline HermitianEigen eigh(const ComplexMatrix &m) {
    detail::require_dims(m.is_square(), "eigh requires a square matrix, got " + m.shape());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(hermitian_part(m)));
    if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
    HermitianEigen out;
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    out.vectors = detail::from_eigen(solver.eigenvectors());
    return out;
}

inline std::vector<double> eigvalsh(const ComplexMatrix &m) { return eigh(m).values; }

/// Rebuilds V diag(f(lambda)) V^dagger.
template <class F>
ComplexMatrix hermitian_function(const HermitianEigen &e, F &&f) {
    const std::size_t n = e.values.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx fk = f(e.values[k]);
        if (fk == cplx{}) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = e.vectors(i, k) * fk;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(e.vectors(j, k));
        }
    }
    return out;
}

struct SvdResult {
    ComplexMatrix u;
    std::vector<double> s;  ///< descending, length min(rows, cols)
    ComplexMatrix v;        ///< m = u * diag(s) * v^dagger
};

/// Full SVD. Phase convention: the largest-magnitude entry of every column
/// of U is real and positive (first such entry on ties); the matching
/// column of V receives the same phase so the product is unchanged.
inline SvdResult svd(const ComplexMatrix &m) {
    const Eigen::MatrixXcd em = detail::to_eigen(m);
    Eigen::JacobiSVD<Eigen::MatrixXcd> solver(em, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (solver.info() != Eigen::Success) throw NumericError("SVD did not converge");

    Eigen::MatrixXcd u = solver.matrixU();
    Eigen::MatrixXcd v = solver.matrixV();
    const auto &sv = solver.singularValues();

    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        double best = -1.0;
        Eigen::Index arg = 0;
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            const double mag = std::abs(u(r, c));
            if (mag > best * (1.0 + 1e-12) + 1e-14) {
                best = mag;
                arg = r;
            }
        }
        if (best <= 0.0) continue;
        const cplx phase = std::conj(u(arg, c)) / best;
        u.col(c) *= phase;
        u(arg, c) = best;
        if (c < v.cols()) v.col(c) *= phase;
    }

    SvdResult out{detail::from_eigen(u), {}, detail::from_eigen(v)};
    out.s.assign(sv.data(), sv.data() + sv.size());
    return out;
}

/// U diag(s) V^dagger, padding s with zeros to the rectangular shape.
inline ComplexMatrix svd_reconstruct(const SvdResult &r) {
    ComplexMatrix sigma(r.u.cols(), r.v.cols());
    for (std::size_t k = 0; k < r.s.size(); ++k) sigma(k, k) = r.s[k];
    return r.u * sigma * r.v.adjoint();
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// (-tol.psd, 0) are clamped to zero; anything more negative is rejected.
/// Eigenvalues at round-off level are zeroed too, since their square roots
/// would otherwise show up at ~1e-8.
inline ComplexMatrix psd_sqrt(const ComplexMatrix &m, const Tolerances &tol = {}) {
    detail::require_dims(m.is_square(), "psd_sqrt requires a square matrix");
    detail::require(hermiticity_defect(m) <= tol.herm, "psd_sqrt input is not Hermitian");
    const auto e = eigh(m);
    if (!e.values.empty() && e.values.front() < -tol.psd)
        throw ValidationError("psd_sqrt input has eigenvalue " + std::to_string(e.values.front()) +
                              " below -PSD_TOL");
    const double floor = 1e-14 * std::max(1.0, std::abs(e.values.back())) * static_cast<double>(m.rows());
    return hermitian_function(e, [floor](double x) { return cplx(x <= floor ? 0.0 : std::sqrt(x)); });
}

namespace detail {

inline double norm_1(const ComplexMatrix &m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace detail

/// exp(m) by scaling and squaring with a diagonal [6/6] Pade approximant.
/// The scaled matrix has 1-norm <= 0.5, where the approximant error is far
/// below double precision.
inline ComplexMatrix matrix_exp(const ComplexMatrix &m) {
    detail::require_dims(m.is_square(), "matrix_exp requires a square matrix, got " + m.shape());
    const std::size_t n = m.rows();
    const double nrm = detail::norm_1(m);
    int squarings = 0;
    if (nrm > 0.5) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / 0.5))));
    const ComplexMatrix a = m * cplx(std::ldexp(1.0, -squarings));

    // Pade [6/6] coefficients c_k = (12-k)! 6! / (12! k! (6-k)!)
    constexpr int q = 6;
    double c = 1.0;
    ComplexMatrix num = ComplexMatrix::identity(n);
    ComplexMatrix den = ComplexMatrix::identity(n);
    ComplexMatrix power = ComplexMatrix::identity(n);
    for (int k = 1; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        power = power * a;
        num += power * cplx(c);
        den += power * cplx((k % 2 == 0) ? c : -c);
    }

    const Eigen::MatrixXcd sol = detail::to_eigen(den).partialPivLu().solve(detail::to_eigen(num));
    ComplexMatrix out = detail::from_eigen(sol);
    for (int s = 0; s < squarings; ++s) out = out * out;
    return out;
}

}  // namespace qswarm
