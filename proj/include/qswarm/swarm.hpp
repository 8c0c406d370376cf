#pragma once

// Robot and swarm state model. A robot is a pure multi-qubit state whose
// qubits carry roles (x position, y position, success). A swarm combines
// robots either as a weighted mixture, whose dimension equals a single
// robot's, or as a tensor product.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcore.hpp"

namespace qswarm {

enum class QubitRole { PositionX, PositionY, Success };

inline std::string_view to_string(QubitRole r) {
    switch (r) {
        case QubitRole::PositionX: return "position_x";
        case QubitRole::PositionY: return "position_y";
        case QubitRole::Success: return "success";
    }
    return "?";
}

inline std::optional<QubitRole> parse_role(std::string_view s) {
    if (s == "position_x" || s == "x") return QubitRole::PositionX;
    if (s == "position_y" || s == "y") return QubitRole::PositionY;
    if (s == "success" || s == "s") return QubitRole::Success;
    return std::nullopt;
}

using RoleList = std::vector<QubitRole>;

inline bool is_position(QubitRole r) { return r != QubitRole::Success; }

inline void validate_roles(const RoleList &roles) {
    detail::require(!roles.empty(), "a robot needs at least one qubit role");
    std::set<QubitRole> seen(roles.begin(), roles.end());
    detail::require(seen.size() == roles.size(), "qubit roles within a robot must be unique");
}

/// Qubit indices holding position roles, in register order.
inline std::vector<std::size_t> position_qubits(const RoleList &roles) {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < roles.size(); ++q)
        if (is_position(roles[q])) out.push_back(q);
    return out;
}

inline std::optional<std::size_t> qubit_with_role(const RoleList &roles, QubitRole role) {
    auto it = std::find(roles.begin(), roles.end(), role);
    if (it == roles.end()) return std::nullopt;
    return static_cast<std::size_t>(it - roles.begin());
}

struct RobotState {
    std::string id;
    Ket ket;
    RoleList roles;

    std::size_t dim() const { return ket.dim(); }

    bool operator==(const RobotState &) const = default;
};

inline RobotState robot_from_amplitudes(std::string id, RoleList roles, CVector amplitudes, bool renormalize = false,
                                        const Tolerances &tol = {}) {
    validate_roles(roles);
    detail::require(roles.size() <= 20, "too many qubits for one robot");
    const std::size_t expected = std::size_t{1} << roles.size();
    detail::require_dims(amplitudes.size() == expected, "robot '" + id + "' expects " + std::to_string(expected) +
                                                            " amplitudes, got " + std::to_string(amplitudes.size()));
    Ket k = renormalize ? Ket::normalized(std::move(amplitudes)) : Ket(std::move(amplitudes), tol);
    return RobotState{std::move(id), std::move(k), std::move(roles)};
}

inline DensityMatrix robot_density(const RobotState &r) { return projector(r.ket); }

enum class SwarmMode { Mixed, Tensor };

inline std::string_view to_string(SwarmMode m) { return m == SwarmMode::Mixed ? "mixed" : "tensor"; }

class SwarmState {
  public:
    /// Empty weights mean equal weights 1/N.
    SwarmState(std::vector<RobotState> robots, std::vector<double> weights, SwarmMode mode)
        : robots_(std::move(robots)), weights_(std::move(weights)), mode_(mode) {
        detail::require(!robots_.empty(), "a swarm needs at least one robot");
        if (weights_.empty()) weights_.assign(robots_.size(), 1.0 / static_cast<double>(robots_.size()));
        detail::require(weights_.size() == robots_.size(), "one weight per robot is required");
        double sum = 0.0;
        for (double w : weights_) {
            detail::require(std::isfinite(w) && w >= 0.0, "swarm weights must be non-negative");
            sum += w;
        }
        detail::require(std::abs(sum - 1.0) <= 1e-9, "swarm weights sum to " + std::to_string(sum) + ", expected 1");
        if (mode_ == SwarmMode::Mixed) {
            for (const auto &r : robots_)
                detail::require(r.roles == robots_.front().roles,
                                "mixed-mode swarm requires identical role signatures (robot '" + r.id + "')");
        }
    }

    SwarmState(std::vector<RobotState> robots, SwarmMode mode) : SwarmState(std::move(robots), {}, mode) {}

    const std::vector<RobotState> &robots() const { return robots_; }
    const std::vector<double> &weights() const { return weights_; }
    SwarmMode mode() const { return mode_; }
    std::size_t size() const { return robots_.size(); }

    /// Robot-level dimension (mixed mode: the swarm density dimension).
    std::size_t robot_dim() const { return robots_.front().dim(); }
    const RoleList &roles() const { return robots_.front().roles; }

    SwarmState with_robots(std::vector<RobotState> robots) const { return SwarmState(std::move(robots), weights_, mode_); }

  private:
    std::vector<RobotState> robots_;
    std::vector<double> weights_;
    SwarmMode mode_;
};

/// sum_i w_i rho_i over already-formed (possibly mixed) robot states.
inline DensityMatrix mixed_density(std::span<const DensityMatrix> states, std::span<const double> weights) {
    detail::require(!states.empty(), "mixture of no states");
    detail::require_dims(states.size() == weights.size(), "one weight per state is required");
    ComplexMatrix acc(states.front().dim(), states.front().dim());
    for (std::size_t i = 0; i < states.size(); ++i) {
        detail::require_dims(states[i].dim() == states.front().dim(), "mixed-mode states must share one dimension");
        acc += states[i].matrix() * cplx(weights[i]);
    }
    return DensityMatrix(std::move(acc));
}

inline DensityMatrix swarm_density(const SwarmState &s) {
    if (s.mode() == SwarmMode::Mixed) {
        const std::size_t d = s.robot_dim();
        ComplexMatrix acc(d, d);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto &k = s.robots()[i].ket;
            detail::require_dims(k.dim() == d, "mixed-mode robots must share one dimension");
            const double w = s.weights()[i];
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c) acc(r, c) += w * k[r] * std::conj(k[c]);
        }
        return DensityMatrix(std::move(acc));
    }
    std::vector<DensityMatrix> factors;
    factors.reserve(s.size());
    for (const auto &r : s.robots()) factors.push_back(robot_density(r));
    return tensor(factors);
}

/// Recovers robot i from a tensor-mode swarm density by tracing out every
/// other robot's qubits.
inline DensityMatrix robot_from_tensor_swarm(const DensityMatrix &rho, const SwarmState &s, std::size_t i) {
    detail::require(s.mode() == SwarmMode::Tensor,
                    "individual robots cannot be recovered from a mixed-mode swarm density");
    detail::require(i < s.size(), "robot index out of range");
    std::size_t total = 0, offset = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k == i) offset = total;
        total += s.robots()[k].roles.size();
    }
    detail::require_dims(rho.dim() == (std::size_t{1} << total), "swarm density does not match the swarm's qubits");
    if (s.size() == 1) return rho;
    std::set<std::size_t> traced;
    const std::size_t n_i = s.robots()[i].roles.size();
    for (std::size_t q = 0; q < total; ++q)
        if (q < offset || q >= offset + n_i) traced.insert(q);
    return partial_trace(rho, QubitRegister(total), traced);
}

/// Traces out the success qubits, leaving the position subsystem.
inline DensityMatrix reduced_position(const DensityMatrix &rho, const RoleList &roles) {
    validate_roles(roles);
    detail::require_dims(rho.dim() == (std::size_t{1} << roles.size()), "density matrix does not match roles");
    std::set<std::size_t> traced;
    for (std::size_t q = 0; q < roles.size(); ++q)
        if (roles[q] == QubitRole::Success) traced.insert(q);
    detail::require(!traced.empty(), "no success qubit to trace out");
    detail::require(traced.size() < roles.size(), "no position qubit to keep");
    return partial_trace(rho, QubitRegister(roles.size()), traced);
}

/// Probability that the qubit holding `role` reads `outcome`.
inline double position_probability(const RobotState &r, int outcome, QubitRole role = QubitRole::PositionX) {
    detail::require(outcome == 0 || outcome == 1, "basis outcome must be 0 or 1");
    const auto q = qubit_with_role(r.roles, role);
    detail::require(q.has_value(), "robot '" + r.id + "' has no " + std::string(to_string(role)) + " qubit");
    const QubitRegister reg(r.roles.size());
    double p = 0.0;
    for (std::size_t idx = 0; idx < r.dim(); ++idx)
        if (reg.bit(idx, *q) == static_cast<std::size_t>(outcome)) p += std::norm(r.ket[idx]);
    return std::clamp(p, 0.0, 1.0);
}

/// Probability that every position qubit matches `target_bits` (one bit per
/// position qubit, in register order).
inline double target_probability(const RobotState &r, std::span<const int> target_bits) {
    const auto pos = position_qubits(r.roles);
    detail::require(!pos.empty(), "robot '" + r.id + "' has no position qubit");
    detail::require_dims(target_bits.size() == pos.size(), "one target bit per position qubit is required");
    const QubitRegister reg(r.roles.size());
    double p = 0.0;
    for (std::size_t idx = 0; idx < r.dim(); ++idx) {
        bool match = true;
        for (std::size_t k = 0; k < pos.size() && match; ++k)
            match = reg.bit(idx, pos[k]) == static_cast<std::size_t>(target_bits[k]);
        if (match) p += std::norm(r.ket[idx]);
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Weighted mean of per-robot position probabilities.
inline double barycenter_probability(const SwarmState &s, int outcome, QubitRole role = QubitRole::PositionX) {
    double p = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) p += s.weights()[i] * position_probability(s.robots()[i], outcome, role);
    return p;
}

/// Basis index whose position qubits carry `target_bits` and whose success
/// qubits are 1.
inline std::size_t target_basis_index(const RoleList &roles, std::span<const int> target_bits) {
    validate_roles(roles);
    const auto pos = position_qubits(roles);
    detail::require(!pos.empty(), "target requires at least one position qubit");
    detail::require_dims(target_bits.size() == pos.size(), "one target bit per position qubit is required");
    std::vector<int> bits(roles.size(), 1);
    for (std::size_t k = 0; k < pos.size(); ++k) bits[pos[k]] = target_bits[k];
    return QubitRegister(roles.size()).index_of(bits);
}

/// Projector onto the ideal target: position bits at the target, success 1.
inline DensityMatrix ideal_target_swarm(const RoleList &roles, std::span<const int> target_bits) {
    const std::size_t dim = std::size_t{1} << roles.size();
    return projector(Ket::basis(dim, target_basis_index(roles, target_bits)));
}

}  // namespace qswarm
