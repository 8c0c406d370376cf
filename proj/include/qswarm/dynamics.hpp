#pragma once

// Time evolution of swarm density matrices: Hamiltonians, the Lindblad
// generator, the stability indicator, unitary evolution, and recovery of an
// evolution operator from two snapshots.

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcore.hpp"

namespace qswarm {

struct Hamiltonian {
    ComplexMatrix matrix;
    double delta_e = 0.0;  ///< energy scale, hbar = 1

    Hamiltonian(ComplexMatrix m, double energy_scale, const Tolerances &tol = {})
        : matrix(std::move(m)), delta_e(energy_scale) {
        detail::require_dims(matrix.is_square(), "Hamiltonian must be square");
        detail::require(hermiticity_defect(matrix) <= tol.herm, "Hamiltonian must be Hermitian");
    }
};

/// (delta_e / 2) sigma_z acting on `qubit` of an n-qubit register, identity
/// elsewhere. sigma_z = |0><0| - |1><1|.
inline Hamiltonian hamiltonian_sigma_z(double delta_e, std::size_t n_qubits = 1, std::size_t qubit = 0) {
    detail::require(std::isfinite(delta_e), "delta_e must be finite");
    detail::require(qubit < n_qubits, "sigma_z qubit out of range");
    const QubitRegister reg(n_qubits);
    ComplexMatrix h(reg.dim(), reg.dim());
    for (std::size_t i = 0; i < reg.dim(); ++i) h(i, i) = reg.bit(i, qubit) == 0 ? 0.5 * delta_e : -0.5 * delta_e;
    return Hamiltonian(std::move(h), delta_e);
}

struct Dissipator {
    ComplexMatrix op;
    double rate = 1.0;

    Dissipator(ComplexMatrix l, double gamma) : op(std::move(l)), rate(gamma) {
        detail::require_dims(op.is_square(), "jump operator must be square");
        detail::require(std::isfinite(rate) && rate >= 0.0, "dissipation rate must be >= 0");
    }

    bool operator==(const Dissipator &) const = default;
};

/// Individual pieces of the generator, kept apart so each can be checked.
struct LindbladTerms {
    ComplexMatrix hamiltonian;  ///< -i[H, rho]
    ComplexMatrix jump;         ///< sum gamma L^T rho L^*
    ComplexMatrix left;         ///< sum -gamma/2 L^dagger L rho
    ComplexMatrix right;        ///< sum -gamma/2 rho L^dagger L

    ComplexMatrix total() const { return hamiltonian + jump + left + right; }
};

/// Jump term written as L^T rho L^*; identical to L rho L^dagger for real L.
/// Accepts any square operator as rho so non-physical inputs can be probed.
inline LindbladTerms lindblad_terms(const ComplexMatrix &rho, const Hamiltonian &h,
                                    std::span<const Dissipator> dissipators) {
    const std::size_t d = rho.rows();
    detail::require_dims(rho.is_square(), "rho must be square");
    detail::require_dims(h.matrix.rows() == d, "Hamiltonian dimension does not match rho");
    LindbladTerms t{(h.matrix * rho - rho * h.matrix) * cplx(0.0, -1.0), ComplexMatrix(d, d), ComplexMatrix(d, d),
                    ComplexMatrix(d, d)};
    for (const auto &diss : dissipators) {
        detail::require_dims(diss.op.rows() == d, "jump operator dimension does not match rho");
        detail::require(diss.rate >= 0.0, "dissipation rate must be >= 0");
        const ComplexMatrix &l = diss.op;
        const ComplexMatrix ldl = l.adjoint() * l;
        t.jump += l.transpose() * rho * l.conjugate() * cplx(diss.rate);
        t.left += ldl * rho * cplx(-0.5 * diss.rate);
        t.right += rho * ldl * cplx(-0.5 * diss.rate);
    }
    return t;
}

inline ComplexMatrix lindblad_generator(const ComplexMatrix &rho, const Hamiltonian &h,
                                        std::span<const Dissipator> dissipators) {
    return lindblad_terms(rho, h, dissipators).total();
}

inline ComplexMatrix lindblad_generator(const DensityMatrix &rho, const Hamiltonian &h,
                                        std::span<const Dissipator> dissipators) {
    return lindblad_generator(rho.matrix(), h, dissipators);
}

enum class StabilityVerdict { Stable, Marginal, Unstable };

inline std::string_view to_string(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::Stable: return "stable";
        case StabilityVerdict::Marginal: return "marginal";
        case StabilityVerdict::Unstable: return "unstable";
    }
    return "?";
}

struct StabilityReport {
    cplx value;  ///< Tr[L(rho1) (rho1 - rho0)]
    /// Sign of Im(value) / delta_e: negative reads as stable.
    StabilityVerdict verdict;
};

inline StabilityReport stability_indicator(const DensityMatrix &rho0, const DensityMatrix &rho1, const Hamiltonian &h,
                                           std::span<const Dissipator> dissipators, double zero_tol = 1e-12) {
    detail::require_dims(rho0.dim() == rho1.dim(), "stability indicator needs equal dimensions");
    const ComplexMatrix gen = lindblad_generator(rho1, h, dissipators);
    const cplx value = (gen * (rho1.matrix() - rho0.matrix())).trace();
    double scaled = value.imag();
    if (h.delta_e != 0.0) scaled /= h.delta_e;
    StabilityVerdict v = StabilityVerdict::Marginal;
    if (scaled < -zero_tol) v = StabilityVerdict::Stable;
    if (scaled > zero_tol) v = StabilityVerdict::Unstable;
    return {value, v};
}

struct EvolutionOperator {
    ComplexMatrix matrix;
    double unitarity_defect = 0.0;  ///< ||O^dagger O - I||_F
    bool non_unitary = false;       ///< defect above 1e-8

    explicit EvolutionOperator(ComplexMatrix m) : matrix(std::move(m)) {
        unitarity_defect = qswarm::unitarity_defect(matrix);
        non_unitary = unitarity_defect > 1e-8;
    }
};

enum class ApplicationMode { Conjugate, Left };

inline std::string_view to_string(ApplicationMode m) { return m == ApplicationMode::Conjugate ? "conjugate" : "left"; }

struct EvolvedState {
    ComplexMatrix matrix;
    double hermiticity_defect = 0.0;
    cplx trace;
    double min_eigenvalue = 0.0;  ///< of the Hermitian part
    bool is_density = false;      ///< passes every density-matrix check
};

/// conjugate: O rho O^dagger. left: O rho, validated and reported.
inline EvolvedState evolve_unitary(const DensityMatrix &rho, const EvolutionOperator &o,
                                   ApplicationMode mode = ApplicationMode::Conjugate, const Tolerances &tol = {}) {
    detail::require_dims(o.matrix.rows() == rho.dim() && o.matrix.is_square(),
                         "evolution operator does not match the state dimension");
    EvolvedState out;
    out.matrix = mode == ApplicationMode::Conjugate ? o.matrix * rho.matrix() * o.matrix.adjoint()
                                                    : o.matrix * rho.matrix();
    out.hermiticity_defect = hermiticity_defect(out.matrix);
    out.trace = out.matrix.trace();
    out.min_eigenvalue = eigvalsh(out.matrix).front();
    out.is_density = out.hermiticity_defect <= tol.herm && std::abs(out.trace - 1.0) <= tol.trace &&
                     out.min_eigenvalue >= -tol.psd;
    return out;
}

inline DensityMatrix conjugate_by(const DensityMatrix &rho, const ComplexMatrix &o) {
    return DensityMatrix(hermitian_part(o * rho.matrix() * o.adjoint()));
}

/// exp(-i H t)
inline EvolutionOperator unitary_from_hamiltonian(const Hamiltonian &h, double t) {
    detail::require(std::isfinite(t), "time must be finite");
    return EvolutionOperator(matrix_exp(h.matrix * cplx(0.0, -t)));
}

struct RecoveredEvolution {
    EvolutionOperator op;
    double residual_left = 0.0;       ///< ||O rho0 - rho1||_F
    double residual_conjugate = 0.0;  ///< ||O rho0 O^dagger - rho1||_F
};

namespace detail {

inline RecoveredEvolution with_residuals(ComplexMatrix o, const DensityMatrix &rho0, const DensityMatrix &rho1) {
    RecoveredEvolution r{EvolutionOperator(std::move(o))};
    const ComplexMatrix &m = r.op.matrix;
    r.residual_left = (m * rho0.matrix() - rho1.matrix()).frobenius_norm();
    r.residual_conjugate = (m * rho0.matrix() * m.adjoint() - rho1.matrix()).frobenius_norm();
    return r;
}

}  // namespace detail

/// O = U' (V'^dagger)^{-1} V U^dagger from rho0 = U S V^dagger and
/// rho1 = U' S' V'^dagger. The inverse of V'^dagger is taken as V'.
inline RecoveredEvolution recover_evolution_paper(const DensityMatrix &rho0, const DensityMatrix &rho1) {
    detail::require_dims(rho0.dim() == rho1.dim(), "snapshots must share one dimension");
    const SvdResult a = svd(rho0.matrix());
    const SvdResult b = svd(rho1.matrix());
    return detail::with_residuals(b.u * b.v * a.v * a.u.adjoint(), rho0, rho1);
}

/// Best unitary for the one-sided fit: argmin ||O rho0 - rho1||_F. With
/// rho1 rho0^dagger = W S X^dagger the minimizer is O = W X^dagger.
inline RecoveredEvolution recover_evolution_procrustes(const DensityMatrix &rho0, const DensityMatrix &rho1) {
    detail::require_dims(rho0.dim() == rho1.dim(), "snapshots must share one dimension");
    const SvdResult f = svd(rho1.matrix() * rho0.matrix().adjoint());
    return detail::with_residuals(f.u * f.v.adjoint(), rho0, rho1);
}

enum class RecoveryMethod { Paper, Procrustes };

inline std::string_view to_string(RecoveryMethod m) { return m == RecoveryMethod::Paper ? "paper" : "procrustes"; }

inline RecoveredEvolution recover_evolution(RecoveryMethod method, const DensityMatrix &rho0, const DensityMatrix &rho1) {
    return method == RecoveryMethod::Paper ? recover_evolution_paper(rho0, rho1)
                                           : recover_evolution_procrustes(rho0, rho1);
}

/// Explicit Euler on d(rho)/dt = L(rho) with Hermitian symmetrization and
/// trace renormalization after every step. The final partial step is
/// shortened so exactly `duration` is covered.
inline DensityMatrix integrate_lindblad(const DensityMatrix &rho, const Hamiltonian &h,
                                        std::span<const Dissipator> dissipators, double duration, double dt = 1e-3) {
    detail::require(std::isfinite(duration) && duration >= 0.0, "duration must be >= 0");
    detail::require(std::isfinite(dt) && dt > 0.0, "time step must be > 0");
    ComplexMatrix cur = rho.matrix();
    double t = 0.0;
    while (t < duration) {
        const double step = std::min(dt, duration - t);
        cur += lindblad_generator(cur, h, dissipators) * cplx(step);
        cur = hermitian_part(cur);
        cur *= cplx(1.0 / cur.trace().real());
        t += step;
        if (duration - t < 1e-15) break;
    }
    // Euler steps can leave eigenvalues a hair below zero.
    return DensityMatrix(std::move(cur), Tolerances{NORM_TOL, HERM_TOL, TRACE_TOL, 1e-6});
}

}  // namespace qswarm
