#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace qswarm {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Dense complex matrix, row-major. Always at least 1x1 with finite entries.
class ComplexMatrix {
  public:
    ComplexMatrix() : ComplexMatrix(1, 1) {}

    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
        detail::require_dims(rows >= 1 && cols >= 1, "matrix must be at least 1x1");
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        detail::require_dims(rows >= 1 && cols >= 1, "matrix must be at least 1x1");
        detail::require_dims(data_.size() == rows * cols, "matrix data size does not match shape");
        detail::require(all_finite(), "matrix entries must be finite");
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        detail::require_dims(rows_ >= 1 && cols_ >= 1, "matrix must be at least 1x1");
        data_.reserve(rows_ * cols_);
        for (const auto &r : rows) {
            detail::require_dims(r.size() == cols_, "ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
        detail::require(all_finite(), "matrix entries must be finite");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

    static ComplexMatrix diagonal(std::span<const cplx> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static ComplexMatrix diagonal(std::initializer_list<cplx> d) {
        return diagonal(std::span<const cplx>(d.begin(), d.size()));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const cplx> data() const { return data_; }
    std::span<cplx> data() { return data_; }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(),
                           [](const cplx &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix out = *this;
        for (auto &z : out.data_) z = std::conj(z);
        return out;
    }

    cplx trace() const {
        detail::require_dims(is_square(), "trace of non-square matrix");
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto &z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto &z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    ComplexMatrix &operator+=(const ComplexMatrix &o) {
        check_same_shape(o, "+");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &o) {
        check_same_shape(o, "-");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ComplexMatrix &operator*=(cplx s) {
        for (auto &z : data_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        detail::require_dims(a.cols_ == b.rows_, "matrix product shape mismatch: " + a.shape() + " * " + b.shape());
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend CVector operator*(const ComplexMatrix &a, std::span<const cplx> v) {
        detail::require_dims(a.cols_ == v.size(), "matrix-vector shape mismatch");
        CVector out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
        return out;
    }

    bool operator==(const ComplexMatrix &) const = default;

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  private:
    void check_same_shape(const ComplexMatrix &o, const char *op) const {
        detail::require_dims(rows_ == o.rows_ && cols_ == o.cols_,
                             std::string("shape mismatch in '") + op + "': " + shape() + " vs " + o.shape());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) { return (a - b).max_abs(); }

/// max |M - M^dagger| entrywise.
inline double hermiticity_defect(const ComplexMatrix &m) {
    detail::require_dims(m.is_square(), "hermiticity of non-square matrix");
    double d = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix &m) { return 0.5 * (m + m.adjoint()); }

/// Kronecker product: out[(i*b.rows+k), (j*b.cols+l)] = a[i][j] * b[k][l].
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

/// ||O^dagger O - I||_F
inline double unitarity_defect(const ComplexMatrix &o) {
    detail::require_dims(o.is_square(), "unitarity of non-square matrix");
    return (o.adjoint() * o - ComplexMatrix::identity(o.rows())).frobenius_norm();
}

inline double vector_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto &z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace qswarm
