#pragma once

// Closed global-to-local target-reaching loop:
//   local kets -> swarm density -> evolution toward the target estimate ->
//   minimal-displacement reassignment of the kets -> proximity sensing ->
//   target estimate refinement -> repeat until the swarm is within delta of
//   the true target.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "swarm.hpp"

namespace qswarm {

inline constexpr double REASSIGN_TOL = 1e-6;

struct SensorModel {
    std::vector<int> true_target;  ///< one bit per position qubit
    double noise_std = 0.0;
    std::uint64_t rng_seed = 0;
};

/// Probability that the robot's position bits equal the true target bits.
inline double exact_proximity(const SensorModel &model, const RobotState &r) {
    return target_probability(r, model.true_target);
}

/// Seeded proximity sensor: clamp(exact + N(0, noise_std), 0, 1).
class ProximitySensor {
  public:
    explicit ProximitySensor(SensorModel model) : model_(std::move(model)), rng_(model_.rng_seed) {
        detail::require(std::isfinite(model_.noise_std) && model_.noise_std >= 0.0, "noise_std must be >= 0");
    }

    const SensorModel &model() const { return model_; }

    double read(const RobotState &r) {
        double p = exact_proximity(model_, r);
        if (model_.noise_std > 0.0) p += model_.noise_std * normal_(rng_);
        return std::clamp(p, 0.0, 1.0);
    }

  private:
    SensorModel model_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double sense_proximity(ProximitySensor &sensor, const RobotState &r) { return sensor.read(r); }

struct TargetEstimate {
    DensityMatrix rho;
    /// (d * purity - 1) / (d - 1): 0 for the maximally mixed estimate, 1 for a projector.
    double confidence = 0.0;

    explicit TargetEstimate(DensityMatrix m) : rho(std::move(m)) {
        const double d = static_cast<double>(rho.dim());
        confidence = d > 1.0 ? std::clamp((d * purity(rho) - 1.0) / (d - 1.0), 0.0, 1.0) : 1.0;
    }
};

struct ProximityReading {
    std::size_t robot = 0;
    double proximity = 0.0;
};

/// Width of the consistency kernel used to match a reading against each
/// candidate target position.
inline double reading_kernel_width(double noise_std) { return std::max(noise_std, 1e-3); }

/// Proximity-weighted mixture of candidate target projectors. Candidate x
/// (a position bit pattern, success qubits set) collects weight
/// p_i * exp(-(q_i(x) - p_i)^2 / 2 w^2) from each robot i, where q_i(x) is
/// the robot's probability of sitting at x and p_i its reading. Returns
/// nullopt when no candidate receives weight.
inline std::optional<DensityMatrix> readings_density(const SwarmState &s, std::span<const ProximityReading> readings,
                                                     double kernel_width) {
    detail::require(!readings.empty(), "target update needs at least one reading");
    detail::require(kernel_width > 0.0, "kernel width must be > 0");
    const RoleList &roles = s.roles();
    const std::size_t npos = position_qubits(roles).size();
    detail::require(npos >= 1, "target update needs position qubits");
    const std::size_t ncand = std::size_t{1} << npos;

    auto bits_of = [npos](std::size_t x) {
        std::vector<int> b(npos);
        for (std::size_t k = 0; k < npos; ++k) b[k] = static_cast<int>((x >> (npos - 1 - k)) & 1u);
        return b;
    };

    std::vector<double> weighted(ncand, 0.0), plain(ncand, 0.0);
    for (const auto &rd : readings) {
        detail::require(rd.robot < s.size(), "reading refers to an unknown robot");
        detail::require(rd.proximity >= 0.0 && rd.proximity <= 1.0, "proximity must lie in [0, 1]");
        const RobotState &r = s.robots()[rd.robot];
        for (std::size_t x = 0; x < ncand; ++x) {
            const double q = target_probability(r, bits_of(x));
            const double z = (q - rd.proximity) / kernel_width;
            const double k = std::exp(-0.5 * z * z);
            weighted[x] += rd.proximity * k;
            plain[x] += k;
        }
    }
    double total = 0.0;
    for (double v : weighted) total += v;
    std::vector<double> &use = total > 0.0 ? weighted : plain;
    if (total <= 0.0)
        for (double v : plain) total += v;
    if (!(total > 0.0)) return std::nullopt;

    const std::size_t dim = std::size_t{1} << roles.size();
    ComplexMatrix m(dim, dim);
    for (std::size_t x = 0; x < ncand; ++x) {
        const std::size_t idx = target_basis_index(roles, bits_of(x));
        m(idx, idx) += use[x] / total;
    }
    return DensityMatrix(std::move(m));
}

/// rho' = (1 - eta) rho + eta * readings_density. A convex combination, so
/// the result is always a density matrix.
inline TargetEstimate update_target_estimate(const TargetEstimate &est, const SwarmState &s,
                                             std::span<const ProximityReading> readings, double eta,
                                             double kernel_width = reading_kernel_width(0.0)) {
    detail::require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
    const auto innov = readings_density(s, readings, kernel_width);
    detail::require_dims(est.rho.dim() == s.robot_dim(), "estimate does not match robot dimension");
    if (!innov || eta == 0.0) return est;
    ComplexMatrix m = est.rho.matrix() * cplx(1.0 - eta) + innov->matrix() * cplx(eta);
    return TargetEstimate(DensityMatrix(std::move(m)));
}

struct TargetCheck {
    double distance = 0.0;
    bool reached = false;
};

inline TargetCheck check_target_reached(const DensityMatrix &swarm, const DensityMatrix &target, double delta) {
    detail::require(delta > 0.0, "delta must be > 0");
    const double d = trace_distance(swarm, target);
    return {d, d < delta};
}

struct ReassignResult {
    SwarmState swarm;
    double residual = 0.0;  ///< ||swarm_density(swarm) - rho_new||_F
    bool feasible = false;  ///< residual <= REASSIGN_TOL
    std::vector<double> displacements = {};  ///< ||psi_i' - psi_i|| per robot
    std::size_t steps = 0;
};

namespace detail {

// Kets of robots with positive weight, scaled by sqrt(w_i) and split into
// real coordinates: phi_i = sqrt(w_i) psi_i, so sum_i phi_i phi_i^dagger is
// the swarm density and ||y - y0||^2 = sum_i w_i ||psi_i - psi0_i||^2.
class ReassignProblem {
  public:
    ReassignProblem(const ComplexMatrix &target, std::vector<double> weights)
        : target_(target), w_(std::move(weights)), d_(target.rows()) {}

    std::size_t n() const { return w_.size(); }

    Eigen::VectorXd pack(const std::vector<CVector> &kets) const {
        Eigen::VectorXd y(2 * d_ * n());
        for (std::size_t i = 0; i < n(); ++i) {
            const double s = std::sqrt(w_[i]);
            for (std::size_t j = 0; j < d_; ++j) {
                y(off(i, j)) = s * kets[i][j].real();
                y(off(i, j) + 1) = s * kets[i][j].imag();
            }
        }
        return y;
    }

    std::vector<CVector> unpack(const Eigen::VectorXd &y) const {
        std::vector<CVector> kets(n(), CVector(d_));
        for (std::size_t i = 0; i < n(); ++i) {
            CVector &k = kets[i];
            for (std::size_t j = 0; j < d_; ++j) k[j] = cplx(y(off(i, j)), y(off(i, j) + 1));
            const double nrm = vector_norm(k);
            if (nrm > 0.0)
                for (auto &z : k) z /= nrm;
        }
        return kets;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd &y) const {
        const ComplexMatrix c = density_gap(y);
        Eigen::VectorXd r(d_ * d_ + n());
        std::size_t row = 0;
        for (std::size_t j = 0; j < d_; ++j) {
            r(row++) = c(j, j).real();
            for (std::size_t k = j + 1; k < d_; ++k) {
                r(row++) = c(j, k).real();
                r(row++) = c(j, k).imag();
            }
        }
        for (std::size_t i = 0; i < n(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d_; ++j) s += y(off(i, j)) * y(off(i, j)) + y(off(i, j) + 1) * y(off(i, j) + 1);
            r(row++) = s - w_[i];
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd &y) const {
        Eigen::MatrixXd jac(d_ * d_ + n(), y.size());
        for (std::size_t i = 0; i < n(); ++i)
            for (std::size_t j = 0; j < d_; ++j)
                for (int part = 0; part < 2; ++part) {
                    const cplx dir = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
                    // d(phi phi^dagger) along phi_j += dir: dir e_j phi^dagger + phi (dir e_j)^dagger
                    ComplexMatrix dc(d_, d_);
                    for (std::size_t k = 0; k < d_; ++k) {
                        const cplx phik(y(off(i, k)), y(off(i, k) + 1));
                        dc(j, k) += dir * std::conj(phik);
                        dc(k, j) += phik * std::conj(dir);
                    }
                    const Eigen::Index col = static_cast<Eigen::Index>(off(i, j) + part);
                    std::size_t row = 0;
                    for (std::size_t a = 0; a < d_; ++a) {
                        jac(row++, col) = dc(a, a).real();
                        for (std::size_t b = a + 1; b < d_; ++b) {
                            jac(row++, col) = dc(a, b).real();
                            jac(row++, col) = dc(a, b).imag();
                        }
                    }
                    for (std::size_t m = 0; m < n(); ++m) jac(row++, col) = m == i ? 2.0 * y(col) : 0.0;
                }
        return jac;
    }

    /// Min-norm Gauss-Newton back onto the constraint set.
    Eigen::VectorXd restore(Eigen::VectorXd y, int max_iter = 60) const {
        double prev = residual(y).norm();
        for (int it = 0; it < max_iter && prev > 1e-14; ++it) {
            const Eigen::MatrixXd jac = jacobian(y);
            const Eigen::VectorXd r = residual(y);
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
            cod.setThreshold(1e-12);
            const Eigen::VectorXd step = cod.solve(r);
            Eigen::VectorXd trial = y - step;
            double now = residual(trial).norm();
            double t = 1.0;
            while (now > prev && t > 1e-4) {
                t *= 0.5;
                trial = y - t * step;
                now = residual(trial).norm();
            }
            if (now >= prev) break;
            y = std::move(trial);
            prev = now;
        }
        return y;
    }

    /// Projector onto the null space of the constraint Jacobian at y.
    Eigen::VectorXd tangent(const Eigen::VectorXd &y, const Eigen::VectorXd &dir) const {
        const Eigen::MatrixXd jac = jacobian(y);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
        cod.setThreshold(1e-10);
        return dir - cod.solve(jac * dir);
    }

    double gap(const Eigen::VectorXd &y) const { return residual(y).norm(); }

  private:
    std::size_t off(std::size_t i, std::size_t j) const { return 2 * (i * d_ + j); }

    ComplexMatrix density_gap(const Eigen::VectorXd &y) const {
        ComplexMatrix c = target_ * cplx(-1.0);
        for (std::size_t i = 0; i < n(); ++i)
            for (std::size_t a = 0; a < d_; ++a) {
                const cplx pa(y(off(i, a)), y(off(i, a) + 1));
                for (std::size_t b = 0; b < d_; ++b) c(a, b) += pa * std::conj(cplx(y(off(i, b)), y(off(i, b) + 1)));
            }
        return c;
    }

    ComplexMatrix target_;
    std::vector<double> w_;
    std::size_t d_;
};

struct ReassignRun {
    std::vector<CVector> kets;
    double gap = 0.0;
    double cost = 0.0;
    std::size_t steps = 0;
};

// Feasibility restoration followed by projected descent on the displacement.
inline ReassignRun reassign_from(const ReassignProblem &prob, const Eigen::VectorXd &y0, Eigen::VectorXd y,
                                 std::size_t max_steps) {
    y = prob.restore(std::move(y));
    std::size_t steps = 0;
    auto cost = [&](const Eigen::VectorXd &v) { return (v - y0).squaredNorm(); };
    for (; steps < max_steps; ++steps) {
        if (prob.gap(y) > REASSIGN_TOL * 1e-2) break;
        const Eigen::VectorXd dir = prob.tangent(y, y0 - y);
        if (dir.norm() < 1e-12) break;
        const double c0 = cost(y);
        bool moved = false;
        for (double t = 1.0; t > 1e-6; t *= 0.5) {
            Eigen::VectorXd trial = prob.restore(y + t * dir);
            if (prob.gap(trial) <= REASSIGN_TOL * 1e-2 && cost(trial) < c0 - 1e-15) {
                y = std::move(trial);
                moved = true;
                break;
            }
        }
        if (!moved || c0 - cost(y) < 1e-14) break;
    }
    return {prob.unpack(y), prob.gap(y), cost(y), steps};
}

}  // namespace detail

/// Moves each robot's ket as little as possible (weighted squared distance)
/// so that the swarm density matches rho_new. Starts from the current kets;
/// if that run ends infeasible and `guess` is given, a second run starts
/// from the guessed kets and the better outcome is kept. Weights and roles
/// are never changed. Infeasibility is reported, not thrown.
inline ReassignResult reassign_local_states(const DensityMatrix &rho_new, const SwarmState &s,
                                            const std::vector<CVector> *guess = nullptr,
                                            std::size_t max_steps = 500) {
    detail::require(s.mode() == SwarmMode::Mixed, "reassignment is defined for mixed-mode swarms");
    detail::require_dims(rho_new.dim() == s.robot_dim(), "target density does not match robot dimension");
    if (guess) detail::require_dims(guess->size() == s.size(), "guess must hold one ket per robot");

    std::vector<std::size_t> active;
    std::vector<double> w;
    std::vector<CVector> start, alt;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.weights()[i] <= 0.0) continue;
        active.push_back(i);
        w.push_back(s.weights()[i]);
        const auto a = s.robots()[i].ket.amplitudes();
        start.emplace_back(a.begin(), a.end());
        if (guess) alt.push_back((*guess)[i]);
    }

    const detail::ReassignProblem prob(rho_new.matrix(), w);
    const Eigen::VectorXd y0 = prob.pack(start);
    detail::ReassignRun best = detail::reassign_from(prob, y0, y0, max_steps);
    if (best.gap > REASSIGN_TOL && guess) {
        detail::ReassignRun other = detail::reassign_from(prob, y0, prob.pack(alt), max_steps);
        if (other.gap < best.gap) best = std::move(other);
    }

    std::vector<RobotState> robots = s.robots();
    std::vector<double> disp(s.size(), 0.0);
    for (std::size_t k = 0; k < active.size(); ++k) {
        const std::size_t i = active[k];
        const auto old = s.robots()[i].ket.amplitudes();
        double d2 = 0.0;
        for (std::size_t j = 0; j < old.size(); ++j) d2 += std::norm(best.kets[k][j] - old[j]);
        disp[i] = std::sqrt(d2);
        robots[i].ket = Ket::normalized(best.kets[k]);
    }
    SwarmState next = s.with_robots(std::move(robots));
    const double residual = (swarm_density(next).matrix() - rho_new.matrix()).frobenius_norm();
    return ReassignResult{std::move(next), residual, residual <= REASSIGN_TOL, std::move(disp), best.steps};
}

struct MissionConfig {
    SwarmState swarm;
    SensorModel sensor;
    double delta = 0.05;
    std::size_t max_iterations = 100;
    double eta = 0.5;
    RecoveryMethod recovery = RecoveryMethod::Procrustes;
    ApplicationMode application = ApplicationMode::Conjugate;
};

struct IterationRecord {
    std::size_t iteration = 0;
    DensityMatrix swarm_density;
    DensityMatrix target_estimate;
    ComplexMatrix evolution;
    double unitarity_defect = 0.0;
    double distance_to_estimate = 0.0;
    double distance_to_target = 0.0;
    std::vector<double> displacements = {};
    double reassign_residual = 0.0;
    bool reassign_feasible = true;
    bool converged = false;
};

struct MissionTrace {
    std::vector<IterationRecord> records;
    bool converged = false;

    std::size_t iterations() const { return records.size(); }
    double final_distance() const { return records.empty() ? 1.0 : records.back().distance_to_target; }
};

inline MissionTrace run_mission(const MissionConfig &cfg) {
    detail::require(cfg.delta > 0.0, "delta must be > 0");
    detail::require(cfg.max_iterations >= 1, "max_iterations must be >= 1");
    detail::require(cfg.eta > 0.0 && cfg.eta <= 1.0, "eta must lie in (0, 1]");
    detail::require(cfg.swarm.mode() == SwarmMode::Mixed, "missions run on mixed-mode swarms");

    const RoleList &roles = cfg.swarm.roles();
    const DensityMatrix target = ideal_target_swarm(roles, cfg.sensor.true_target);
    const double width = reading_kernel_width(cfg.sensor.noise_std);
    ProximitySensor sensor(cfg.sensor);

    auto read_all = [&sensor](const SwarmState &s) {
        std::vector<ProximityReading> out;
        for (std::size_t i = 0; i < s.size(); ++i) out.push_back({i, sensor.read(s.robots()[i])});
        return out;
    };

    SwarmState swarm = cfg.swarm;
    TargetEstimate est(DensityMatrix::maximally_mixed(swarm.robot_dim()));
    est = update_target_estimate(est, swarm, read_all(swarm), cfg.eta, width);

    MissionTrace trace;
    for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
        const DensityMatrix rho = swarm_density(swarm);
        const TargetCheck before = check_target_reached(rho, target, cfg.delta);
        if (before.reached) {
            IterationRecord rec{.iteration = k, .swarm_density = rho, .target_estimate = est.rho,
                                .evolution = ComplexMatrix::identity(rho.dim())};
            rec.distance_to_estimate = trace_distance(rho, est.rho);
            rec.distance_to_target = before.distance;
            rec.displacements.assign(swarm.size(), 0.0);
            rec.converged = true;
            trace.records.push_back(std::move(rec));
            trace.converged = true;
            break;
        }

        const RecoveredEvolution rec_op = recover_evolution(cfg.recovery, rho, est.rho);
        const EvolvedState evolved = evolve_unitary(rho, rec_op.op, cfg.application);
        const DensityMatrix rho_new =
            evolved.is_density ? DensityMatrix(hermitian_part(evolved.matrix)) : nearest_density(evolved.matrix);

        std::vector<CVector> guess;
        for (const auto &r : swarm.robots()) guess.push_back(rec_op.op.matrix * r.ket.amplitudes());
        ReassignResult moved = reassign_local_states(rho_new, swarm, &guess);
        swarm = std::move(moved.swarm);

        est = update_target_estimate(est, swarm, read_all(swarm), cfg.eta, width);

        const DensityMatrix after = swarm_density(swarm);
        const TargetCheck check = check_target_reached(after, target, cfg.delta);
        IterationRecord rec{.iteration = k, .swarm_density = after, .target_estimate = est.rho,
                            .evolution = rec_op.op.matrix};
        rec.unitarity_defect = rec_op.op.unitarity_defect;
        rec.distance_to_estimate = trace_distance(after, est.rho);
        rec.distance_to_target = check.distance;
        rec.displacements = std::move(moved.displacements);
        rec.reassign_residual = moved.residual;
        rec.reassign_feasible = moved.feasible;
        rec.converged = check.reached;
        trace.records.push_back(std::move(rec));
        if (check.reached) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

}  // namespace qswarm
