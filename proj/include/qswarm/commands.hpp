#pragma once

// Command bodies behind the qswarm CLI. Each command writes its primary output
// to `out` (or to files under --out) and returns an exit code; exceptions are
// mapped to exit codes by run_guarded.

#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "io.hpp"
#include "mission.hpp"
#include "paper_check.hpp"

namespace qswarm {

enum ExitCode : int { Ok = 0, Validation = 1, Io = 2, LedgerMismatch = 3 };

struct CommandOptions {
    std::optional<std::string> out;
    std::string format = "json";
    std::size_t resolution = 50;
    bool summary = false;
    bool strict_paper = false;
    bool json = false;
    std::optional<std::uint64_t> seed;
    Tolerances tol;
};

inline int run_guarded(const std::function<int()> &body, std::ostream &err) {
    try {
        return body();
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::Validation;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::Io;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::Validation;
    }
}

namespace detail {

inline void emit(const CommandOptions &opts, const std::string &text, std::ostream &out) {
    if (opts.out) write_text_file(*opts.out, text);
    else out << text;
}

inline std::string sibling_path(const std::string &base, const std::string &suffix) {
    std::filesystem::path p(base);
    const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
    p.replace_extension();
    return p.string() + "_" + suffix + ext;
}

inline std::string g17(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline bool all_have_role(const SwarmState &s, QubitRole role) {
    for (const auto &r : s.robots())
        if (!qubit_with_role(r.roles, role)) return false;
    return true;
}

inline bool reducible(const RoleList &roles) {
    return qubit_with_role(roles, QubitRole::Success) && !position_qubits(roles).empty();
}

}  // namespace detail

inline json density_report(const ScenarioFile &sc) {
    const SwarmState s = sc.swarm();
    const DensityMatrix rho = swarm_density(s);
    json j;
    j["mode"] = s.mode() == SwarmMode::Mixed ? "mixed" : "tensor";
    j["robots"] = s.size();
    j["density"] = matrix_to_json(rho.matrix());
    j["trace"] = rho.matrix().trace().real();
    j["purity"] = purity(rho);

    json bary = json::object();
    for (QubitRole role : {QubitRole::PositionX, QubitRole::PositionY}) {
        if (!detail::all_have_role(s, role)) continue;
        bary[std::string(to_string(role))] = {{"0", barycenter_probability(s, 0, role)},
                                              {"1", barycenter_probability(s, 1, role)}};
    }
    j["barycenter"] = bary;

    json reduced = json::object();
    if (s.mode() == SwarmMode::Mixed && detail::reducible(s.roles()))
        reduced["swarm"] = matrix_to_json(reduced_position(rho, s.roles()).matrix());
    json per_robot = json::array();
    for (const auto &r : s.robots())
        if (detail::reducible(r.roles))
            per_robot.push_back({{"id", r.id}, {"matrix", matrix_to_json(reduced_position(robot_density(r), r.roles).matrix())}});
    reduced["robots"] = per_robot;
    j["reduced_position"] = reduced;

    if (sc.dynamics && s.mode() == SwarmMode::Mixed)
        j["lindblad"] = matrix_to_json(lindblad_generator(rho, sc.hamiltonian(), sc.dynamics->dissipators));
    return j;
}

inline int cmd_density(const ScenarioFile &sc, const CommandOptions &opts, std::ostream &out) {
    detail::require(opts.format == "json" || opts.format == "csv", "--format must be json or csv");
    if (opts.format == "json") {
        detail::emit(opts, density_report(sc).dump(2) + "\n", out);
        return ExitCode::Ok;
    }
    const SwarmState s = sc.swarm();
    const DensityMatrix rho = swarm_density(s);
    if (!opts.out) {
        out << matrix_to_csv(rho.matrix());
        return ExitCode::Ok;
    }
    write_text_file(*opts.out, matrix_to_csv(rho.matrix()));
    if (s.mode() == SwarmMode::Mixed && detail::reducible(s.roles()))
        write_text_file(detail::sibling_path(*opts.out, "reduced_swarm"),
                        matrix_to_csv(reduced_position(rho, s.roles()).matrix()));
    for (const auto &r : s.robots())
        if (detail::reducible(r.roles))
            write_text_file(detail::sibling_path(*opts.out, "reduced_" + r.id),
                            matrix_to_csv(reduced_position(robot_density(r), r.roles).matrix()));
    return ExitCode::Ok;
}

inline json recovery_json(const RecoveredEvolution &r) {
    return {{"operator", matrix_to_json(r.op.matrix)},
            {"unitarity_defect", r.op.unitarity_defect},
            {"unitary", !r.op.non_unitary},
            {"residual_left", r.residual_left},
            {"residual_conjugate", r.residual_conjugate}};
}

inline json evolve_report(const ScenarioFile &a, const ScenarioFile &b) {
    const DensityMatrix rho0 = swarm_density(a.swarm()), rho1 = swarm_density(b.swarm());
    detail::require_dims(rho0.dim() == rho1.dim(), "swarm dimensions differ: " + std::to_string(rho0.dim()) + " vs " +
                                                       std::to_string(rho1.dim()));
    json j;
    j["dim"] = rho0.dim();
    j["paper"] = recovery_json(recover_evolution_paper(rho0, rho1));
    j["procrustes"] = recovery_json(recover_evolution_procrustes(rho0, rho1));
    if (a.dynamics) {
        const Hamiltonian h = a.hamiltonian();
        if (h.matrix.rows() == rho0.dim()) {
            const auto st = stability_indicator(rho0, rho1, h, a.dynamics->dissipators);
            j["stability"] = {{"value", complex_to_json(st.value)}, {"verdict", std::string(to_string(st.verdict))}};
        }
    }
    return j;
}

inline int cmd_evolve(const ScenarioFile &a, const ScenarioFile &b, const CommandOptions &opts, std::ostream &out) {
    detail::emit(opts, evolve_report(a, b).dump(2) + "\n", out);
    return ExitCode::Ok;
}

inline json record_json(const IterationRecord &r) {
    return {{"iteration", r.iteration},
            {"converged", r.converged},
            {"distance_to_target", r.distance_to_target},
            {"distance_to_estimate", r.distance_to_estimate},
            {"unitarity_defect", r.unitarity_defect},
            {"displacements", r.displacements},
            {"reassign_residual", r.reassign_residual},
            {"reassign_feasible", r.reassign_feasible},
            {"swarm_density", matrix_to_json(r.swarm_density.matrix())},
            {"target_estimate", matrix_to_json(r.target_estimate.matrix())},
            {"evolution", matrix_to_json(r.evolution)}};
}

inline std::string trace_jsonl(const MissionTrace &t) {
    std::string s;
    for (const auto &r : t.records) s += record_json(r).dump() + "\n";
    return s;
}

inline std::string trace_summary(const MissionTrace &t) {
    return "iterations=" + std::to_string(t.iterations()) + " converged=" + (t.converged ? "true" : "false") +
           " final_distance=" + detail::g17(t.final_distance()) + "\n";
}

inline int cmd_mission(const ScenarioFile &sc, const CommandOptions &opts, std::ostream &out) {
    MissionConfig cfg = sc.mission_config();
    if (opts.seed) cfg.sensor.rng_seed = *opts.seed;
    const MissionTrace t = run_mission(cfg);
    if (opts.out) write_text_file(*opts.out, trace_jsonl(t));
    else if (!opts.summary) out << trace_jsonl(t);
    if (opts.summary) out << trace_summary(t);
    return ExitCode::Ok;
}

/// Probability of each (x[, y]) corner for one robot, other qubits marginalized.
inline std::vector<double> corner_probabilities(const RobotState &r, bool with_y) {
    const auto qx = qubit_with_role(r.roles, QubitRole::PositionX);
    const auto qy = qubit_with_role(r.roles, QubitRole::PositionY);
    const QubitRegister reg(r.roles.size());
    std::vector<double> p(with_y ? 4 : 2, 0.0);
    for (std::size_t idx = 0; idx < r.ket.dim(); ++idx) {
        std::size_t k = reg.bit(idx, *qx);
        if (with_y) k = 2 * k + reg.bit(idx, *qy);
        p[k] += std::norm(r.ket[idx]);
    }
    return p;
}

inline std::string surface_csv(const SwarmState &s, std::size_t resolution) {
    detail::require(resolution >= 2, "--resolution must be >= 2");
    detail::require(detail::all_have_role(s, QubitRole::PositionX), "every robot needs a position_x qubit");
    const bool with_y = detail::all_have_role(s, QubitRole::PositionY);
    std::string csv;
    csv += "# linear interpolation between basis-endpoint probabilities (presentation only)\n";
    csv += "# per robot the corner values are the endpoint probabilities and sum to 1\n";
    csv += with_y ? "x,y,robot_id,amplitude\n" : "x,robot_id,amplitude\n";
    const auto axis = [&](std::size_t k) { return static_cast<double>(k) / static_cast<double>(resolution - 1); };
    for (const auto &r : s.robots()) {
        const auto p = corner_probabilities(r, with_y);
        for (std::size_t a = 0; a < resolution; ++a) {
            const double x = axis(a);
            if (!with_y) {
                csv += detail::g17(x) + "," + r.id + "," + detail::g17((1 - x) * p[0] + x * p[1]) + "\n";
                continue;
            }
            for (std::size_t b = 0; b < resolution; ++b) {
                const double y = axis(b);
                const double v = (1 - x) * (1 - y) * p[0] + (1 - x) * y * p[1] + x * (1 - y) * p[2] + x * y * p[3];
                csv += detail::g17(x) + "," + detail::g17(y) + "," + r.id + "," + detail::g17(v) + "\n";
            }
        }
    }
    return csv;
}

inline int cmd_surface(const ScenarioFile &sc, const CommandOptions &opts, std::ostream &out) {
    detail::emit(opts, surface_csv(sc.swarm(), opts.resolution), out);
    return ExitCode::Ok;
}

inline json ledger_json(const std::vector<LedgerEntry> &entries) {
    json arr = json::array();
    for (const auto &e : entries)
        arr.push_back({{"name", e.name},
                       {"description", e.description},
                       {"status", std::string(to_string(e.status))},
                       {"expected", std::string(to_string(e.expected))},
                       {"reference", e.reference},
                       {"computed", e.computed},
                       {"note", e.note}});
    return arr;
}

inline std::string ledger_text(const std::vector<LedgerEntry> &entries) {
    std::ostringstream os;
    for (const auto &e : entries) {
        os << std::left << std::setw(9) << to_string(e.status) << e.name << ": " << e.description << "\n";
        if (e.status == CheckStatus::Diverges || !e.as_expected())
            os << "         reference " << e.reference << "\n         computed  " << e.computed << "\n";
        if (!e.note.empty() && e.status == CheckStatus::Diverges) os << "         note      " << e.note << "\n";
        if (!e.as_expected()) os << "         UNEXPECTED (ledger says " << to_string(e.expected) << ")\n";
    }
    return os.str();
}

inline int cmd_paper_check(const CommandOptions &opts, std::ostream &out) {
    const auto entries = run_ledger();
    std::size_t pass = 0, diverges = 0, unexpected = 0;
    for (const auto &e : entries) {
        (e.status == CheckStatus::Pass ? pass : diverges)++;
        if (!e.as_expected()) ++unexpected;
    }
    if (opts.json) {
        json j;
        j["checks"] = ledger_json(entries);
        j["summary"] = {{"total", entries.size()}, {"pass", pass}, {"diverges", diverges}, {"unexpected", unexpected}};
        detail::emit(opts, j.dump(2) + "\n", out);
    } else {
        std::string text = ledger_text(entries);
        text += std::to_string(entries.size()) + " checks: " + std::to_string(pass) + " PASS, " +
                std::to_string(diverges) + " DIVERGES, " + std::to_string(unexpected) + " unexpected\n";
        detail::emit(opts, text, out);
    }
    if (unexpected > 0) return ExitCode::LedgerMismatch;
    if (opts.strict_paper && diverges > 0) return ExitCode::LedgerMismatch;
    return ExitCode::Ok;
}

}  // namespace qswarm
