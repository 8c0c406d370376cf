#pragma once

// Quantum-information primitives: normalized kets, validated density
// matrices, tensor products, partial traces and state distances.
//
// Basis convention: the index of |q_0 q_1 ... q_{n-1}> is the binary number
// with q_0 as the most significant bit, so for two qubits
// 0 = |00>, 1 = |01>, 2 = |10>, 3 = |11>.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "matrix.hpp"
#include "tolerances.hpp"

namespace qswarm {

inline bool is_power_of_two(std::size_t n) { return n >= 1 && std::has_single_bit(n); }

inline std::size_t qubit_count(std::size_t dim) {
    detail::require_dims(is_power_of_two(dim), "dimension " + std::to_string(dim) + " is not a power of 2");
    return static_cast<std::size_t>(std::countr_zero(dim));
}

/// n qubits in the canonical most-significant-first ordering.
class QubitRegister {
  public:
    explicit QubitRegister(std::size_t n_qubits) : n_(n_qubits) {
        detail::require(n_qubits >= 1 && n_qubits <= 30, "qubit register size out of range");
    }

    static QubitRegister for_dim(std::size_t dim) { return QubitRegister(qubit_count(dim)); }

    std::size_t n_qubits() const { return n_; }
    std::size_t dim() const { return std::size_t{1} << n_; }

    /// Value (0/1) of qubit q within basis index idx.
    std::size_t bit(std::size_t idx, std::size_t q) const { return (idx >> (n_ - 1 - q)) & 1u; }

    std::size_t index_of(std::span<const int> bits) const {
        detail::require_dims(bits.size() == n_, "bit string length does not match register");
        std::size_t idx = 0;
        for (int b : bits) {
            detail::require(b == 0 || b == 1, "basis bits must be 0 or 1");
            idx = (idx << 1) | static_cast<std::size_t>(b);
        }
        return idx;
    }

  private:
    std::size_t n_;
};

/// Normalized amplitude vector over 2^n basis states.
class Ket {
  public:
    explicit Ket(CVector amplitudes, const Tolerances &tol = {}) : amps_(std::move(amplitudes)) {
        detail::require_dims(is_power_of_two(amps_.size()),
                             "ket dimension " + std::to_string(amps_.size()) + " is not a power of 2");
        for (const auto &z : amps_)
            detail::require(std::isfinite(z.real()) && std::isfinite(z.imag()), "ket amplitudes must be finite");
        const double n = vector_norm(amps_);
        detail::require(n > 0.0, "ket is the zero vector");
        detail::require(std::abs(n * n - 1.0) <= tol.norm,
                        "ket is not normalized: sum |a|^2 = " + std::to_string(n * n));
    }

    /// Rescales to unit norm. Still rejects the zero vector.
    static Ket normalized(CVector amplitudes) {
        const double n = vector_norm(amplitudes);
        detail::require(n > 0.0 && std::isfinite(n), "cannot normalize the zero vector");
        for (auto &z : amplitudes) z /= n;
        return Ket(std::move(amplitudes));
    }

    static Ket basis(std::size_t dim, std::size_t index) {
        detail::require(index < dim, "basis index out of range");
        CVector v(dim);
        v[index] = 1.0;
        return Ket(std::move(v));
    }

    std::size_t dim() const { return amps_.size(); }
    std::size_t n_qubits() const { return qubit_count(amps_.size()); }
    std::span<const cplx> amplitudes() const { return amps_; }
    const cplx &operator[](std::size_t i) const { return amps_[i]; }

    bool operator==(const Ket &) const = default;

  private:
    CVector amps_;
};

/// Hermitian, positive semidefinite, unit-trace matrix of power-of-2 size.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m, const Tolerances &tol = {}) : m_(std::move(m)) {
        detail::require_dims(m_.is_square(), "density matrix must be square, got " + m_.shape());
        detail::require_dims(is_power_of_two(m_.rows()), "density matrix dimension is not a power of 2");
        const double herm = hermiticity_defect(m_);
        detail::require(herm <= tol.herm, "density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
        const cplx tr = m_.trace();
        detail::require(std::abs(tr - 1.0) <= tol.trace,
                        "density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
        const double lo = eigvalsh(m_).front();
        detail::require(lo >= -tol.psd, "density matrix has negative eigenvalue " + std::to_string(lo));
    }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        return DensityMatrix(ComplexMatrix::identity(dim) * cplx(1.0 / static_cast<double>(dim)));
    }

    std::size_t dim() const { return m_.rows(); }
    std::size_t n_qubits() const { return qubit_count(m_.rows()); }
    const ComplexMatrix &matrix() const { return m_; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    bool operator==(const DensityMatrix &) const = default;

  private:
    ComplexMatrix m_;
};

/// result[i][j] = a_i * conj(b_j)
inline ComplexMatrix outer(const Ket &a, const Ket &b) {
    detail::require_dims(a.dim() == b.dim(), "outer product of kets with different dimensions");
    ComplexMatrix out(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

inline DensityMatrix projector(const Ket &k) { return DensityMatrix(outer(k, k)); }

inline DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()));
}

inline DensityMatrix tensor(std::span<const DensityMatrix> factors) {
    detail::require(!factors.empty(), "tensor product of an empty list");
    ComplexMatrix acc = factors.front().matrix();
    for (std::size_t k = 1; k < factors.size(); ++k) acc = kron(acc, factors[k].matrix());
    return DensityMatrix(std::move(acc));
}

/// Partial trace of an arbitrary square operator over the given qubits.
/// Does not require the input to be a density matrix.
inline ComplexMatrix partial_trace(const ComplexMatrix &m, const QubitRegister &reg,
                                   const std::set<std::size_t> &traced) {
    detail::require_dims(m.is_square() && m.rows() == reg.dim(), "operator does not match qubit register");
    detail::require(!traced.empty(), "partial trace over an empty qubit set");
    detail::require(traced.size() < reg.n_qubits(), "partial trace over every qubit");
    for (auto q : traced) detail::require(q < reg.n_qubits(), "traced qubit index " + std::to_string(q) + " out of range");

    std::vector<std::size_t> kept;
    for (std::size_t q = 0; q < reg.n_qubits(); ++q)
        if (!traced.contains(q)) kept.push_back(q);
    const std::vector<std::size_t> gone(traced.begin(), traced.end());
    const std::size_t n = reg.n_qubits();

    // Scatter the bits of a subsystem index into full-register positions.
    auto scatter = [n](std::size_t sub, const std::vector<std::size_t> &qubits) {
        std::size_t full = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            const std::size_t b = (sub >> (qubits.size() - 1 - k)) & 1u;
            full |= b << (n - 1 - qubits[k]);
        }
        return full;
    };

    const std::size_t dk = std::size_t{1} << kept.size();
    const std::size_t dt = std::size_t{1} << gone.size();
    std::vector<std::size_t> kept_idx(dk), gone_idx(dt);
    for (std::size_t a = 0; a < dk; ++a) kept_idx[a] = scatter(a, kept);
    for (std::size_t t = 0; t < dt; ++t) gone_idx[t] = scatter(t, gone);

    ComplexMatrix out(dk, dk);
    for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t c = 0; c < dk; ++c) {
            cplx s = 0.0;
            for (std::size_t t = 0; t < dt; ++t) s += m(kept_idx[r] | gone_idx[t], kept_idx[c] | gone_idx[t]);
            out(r, c) = s;
        }
    return out;
}

inline DensityMatrix partial_trace(const DensityMatrix &m, const QubitRegister &reg,
                                   const std::set<std::size_t> &traced, const Tolerances &tol = {}) {
    return DensityMatrix(partial_trace(m.matrix(), reg, traced), tol);
}

inline DensityMatrix partial_trace(const DensityMatrix &m, const std::set<std::size_t> &traced,
                                   const Tolerances &tol = {}) {
    return partial_trace(m, QubitRegister::for_dim(m.dim()), traced, tol);
}

/// D = 1/2 sum |eigenvalues(a - b)|, in [0, 1].
inline double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    detail::require_dims(a.dim() == b.dim(), "trace distance between states of different dimension");
    double s = 0.0;
    for (double ev : eigvalsh(a.matrix() - b.matrix())) s += std::abs(ev);
    return std::clamp(0.5 * s, 0.0, 1.0);
}

/// 1/2 Tr[(a-b)^dagger (a-b)] -- the trace-distance formula with the matrix
/// square root left out. Diagnostic only; it is not a metric.
inline double frobenius_half_sq(const DensityMatrix &a, const DensityMatrix &b) {
    detail::require_dims(a.dim() == b.dim(), "dimension mismatch");
    const double f = (a.matrix() - b.matrix()).frobenius_norm();
    return 0.5 * f * f;
}

/// Tr(rho^2)
inline double purity(const DensityMatrix &m) {
    // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
    const double f = m.matrix().frobenius_norm();
    return f * f;
}

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
inline double fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    detail::require_dims(a.dim() == b.dim(), "fidelity between states of different dimension");
    // Tr sqrt(sa b sa) is the nuclear norm of sa sb.
    double tr = 0.0;
    for (double s : svd(psd_sqrt(a.matrix()) * psd_sqrt(b.matrix())).s) tr += s;
    return std::clamp(tr * tr, 0.0, 1.0);
}

/// Nearest density matrix in Frobenius norm to the Hermitian part of m:
/// eigenvalues are projected onto the probability simplex.
inline DensityMatrix nearest_density(const ComplexMatrix &m) {
    const auto e = eigh(hermitian_part(m));
    std::vector<double> sorted(e.values.rbegin(), e.values.rend());
    double cum = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cum += sorted[k];
        const double t = (cum - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - t > 0.0) theta = t;
    }
    ComplexMatrix out = hermitian_function(e, [theta](double x) { return cplx(std::max(x - theta, 0.0)); });
    out = hermitian_part(out);
    out *= cplx(1.0 / out.trace().real());
    return DensityMatrix(std::move(out));
}

}  // namespace qswarm
