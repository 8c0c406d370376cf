#pragma once

// JSON encodings: matrices as {"dim", "entries": [[[re, im], ...], ...]} and
// scenario files (schema version 1).

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynamics.hpp"
#include "mission.hpp"
#include "swarm.hpp"

namespace qswarm {

using json = nlohmann::json;

/// Scenario content error; the message starts with the offending field path.
class ScenarioError : public ValidationError {
  public:
    ScenarioError(const std::string &path, const std::string &msg)
        : ValidationError(path.empty() ? msg : path + ": " + msg), path_(path) {}
    const std::string &path() const { return path_; }

  private:
    std::string path_;
};

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json &j, const std::string &path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ScenarioError(path, "expected a complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    json out;
    if (m.is_square()) {
        out["dim"] = m.rows();
    } else {
        out["rows"] = m.rows();
        out["cols"] = m.cols();
    }
    out["entries"] = std::move(rows);
    return out;
}

inline ComplexMatrix matrix_from_json(const json &j, const std::string &path) {
    if (!j.is_object() || !j.contains("entries")) throw ScenarioError(path, "expected a matrix object with 'entries'");
    const json &e = j["entries"];
    if (!e.is_array() || e.empty() || !e[0].is_array() || e[0].empty())
        throw ScenarioError(path + ".entries", "expected a non-empty array of rows");
    const std::size_t rows = e.size(), cols = e[0].size();
    if (j.contains("dim")) {
        if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() != rows || rows != cols)
            throw ScenarioError(path + ".dim", "does not match the entries");
    }
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = path + ".entries[" + std::to_string(r) + "]";
        if (!e[r].is_array() || e[r].size() != cols) throw ScenarioError(rp, "ragged matrix row");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(e[r][c], rp + "[" + std::to_string(c) + "]");
    }
    if (!m.all_finite()) throw ScenarioError(path, "matrix entries must be finite");
    return m;
}

struct DynamicsSpec {
    double delta_e = 0.0;
    std::vector<Dissipator> dissipators;
    RecoveryMethod recovery = RecoveryMethod::Procrustes;
    ApplicationMode application = ApplicationMode::Conjugate;

    bool operator==(const DynamicsSpec &) const = default;
};

struct MissionSpec {
    std::vector<int> target_bits;
    double delta = 0.05;
    std::size_t max_iterations = 100;
    double eta = 0.5;
    double noise_std = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const MissionSpec &) const = default;
};

struct ScenarioFile {
    int schema_version = 1;
    std::vector<RobotState> robots;
    std::vector<double> weights;  ///< always filled after parsing
    SwarmMode mode = SwarmMode::Mixed;
    std::optional<DynamicsSpec> dynamics;
    std::optional<MissionSpec> mission;

    SwarmState swarm() const { return SwarmState(robots, weights, mode); }

    /// (delta_e / 2) sigma_z on the first qubit of one robot register.
    Hamiltonian hamiltonian() const {
        const double de = dynamics ? dynamics->delta_e : 0.0;
        return hamiltonian_sigma_z(de, robots.front().roles.size(), 0);
    }

    MissionConfig mission_config() const {
        if (!mission) throw ScenarioError("mission", "scenario has no mission block");
        const DynamicsSpec dyn = dynamics.value_or(DynamicsSpec{});
        return MissionConfig{swarm(),
                             SensorModel{mission->target_bits, mission->noise_std, mission->seed},
                             mission->delta,
                             mission->max_iterations,
                             mission->eta,
                             dyn.recovery,
                             dyn.application};
    }

    bool operator==(const ScenarioFile &) const = default;
};

namespace detail {

inline const json &field(const json &obj, const char *key, const std::string &path) {
    if (!obj.contains(key)) throw ScenarioError(path.empty() ? key : path + "." + key, "missing required field");
    return obj[key];
}

inline double number(const json &j, const std::string &path) {
    if (!j.is_number()) throw ScenarioError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ScenarioError(path, "expected a finite number");
    return v;
}

inline std::string short_num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace detail

inline ScenarioFile scenario_from_json(const json &doc, const Tolerances &tol = {}) {
    using detail::field;
    using detail::number;
    if (!doc.is_object()) throw ScenarioError("", "scenario must be a JSON object");
    ScenarioFile sc;

    const json &ver = field(doc, "schema_version", "");
    if (!ver.is_number_integer() || ver.get<int>() != 1) throw ScenarioError("schema_version", "must be 1");

    const json &robots = field(doc, "robots", "");
    if (!robots.is_array() || robots.empty()) throw ScenarioError("robots", "expected a non-empty array");
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const std::string rp = "robots[" + std::to_string(i) + "]";
        const json &r = robots[i];
        if (!r.is_object()) throw ScenarioError(rp, "expected an object");
        const json &id = field(r, "id", rp);
        if (!id.is_string()) throw ScenarioError(rp + ".id", "expected a string");
        const json &roles = field(r, "roles", rp);
        if (!roles.is_array() || roles.empty()) throw ScenarioError(rp + ".roles", "expected a non-empty array");
        RoleList rl;
        for (std::size_t q = 0; q < roles.size(); ++q) {
            const auto role = roles[q].is_string() ? parse_role(roles[q].get<std::string>()) : std::nullopt;
            if (!role)
                throw ScenarioError(rp + ".roles[" + std::to_string(q) + "]",
                                    "expected one of position_x, position_y, success");
            rl.push_back(*role);
        }
        const json &amps = field(r, "amplitudes", rp);
        if (!amps.is_array()) throw ScenarioError(rp + ".amplitudes", "expected an array");
        CVector av;
        for (std::size_t k = 0; k < amps.size(); ++k)
            av.push_back(complex_from_json(amps[k], rp + ".amplitudes[" + std::to_string(k) + "]"));
        try {
            sc.robots.push_back(robot_from_amplitudes(id.get<std::string>(), std::move(rl), std::move(av), false, tol));
        } catch (const ValidationError &e) {
            throw ScenarioError(rp, e.what());
        }
    }

    if (doc.contains("mode")) {
        const json &m = doc["mode"];
        if (m == "mixed") sc.mode = SwarmMode::Mixed;
        else if (m == "tensor") sc.mode = SwarmMode::Tensor;
        else throw ScenarioError("mode", "expected \"mixed\" or \"tensor\"");
    }

    if (doc.contains("weights") && !doc["weights"].is_null()) {
        const json &w = doc["weights"];
        if (!w.is_array()) throw ScenarioError("weights", "expected an array");
        if (w.size() != sc.robots.size())
            throw ScenarioError("weights", "expected " + std::to_string(sc.robots.size()) + " weights, got " +
                                               std::to_string(w.size()));
        double sum = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double v = number(w[i], "weights[" + std::to_string(i) + "]");
            if (v < 0.0) throw ScenarioError("weights[" + std::to_string(i) + "]", "weights must be non-negative");
            sc.weights.push_back(v);
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ScenarioError("weights", "weights sum " + detail::short_num(sum) + " ≠ 1");
    } else {
        sc.weights.assign(sc.robots.size(), 1.0 / static_cast<double>(sc.robots.size()));
    }

    try {
        (void)sc.swarm();
    } catch (const ValidationError &e) {
        throw ScenarioError("robots", e.what());
    }

    if (doc.contains("dynamics") && !doc["dynamics"].is_null()) {
        const json &d = doc["dynamics"];
        if (!d.is_object()) throw ScenarioError("dynamics", "expected an object");
        DynamicsSpec dyn;
        if (d.contains("delta_e")) dyn.delta_e = number(d["delta_e"], "dynamics.delta_e");
        if (d.contains("dissipators")) {
            const json &ds = d["dissipators"];
            if (!ds.is_array()) throw ScenarioError("dynamics.dissipators", "expected an array");
            const std::size_t dim = sc.robots.front().dim();
            for (std::size_t k = 0; k < ds.size(); ++k) {
                const std::string dp = "dynamics.dissipators[" + std::to_string(k) + "]";
                ComplexMatrix l = matrix_from_json(field(ds[k], "l_matrix", dp), dp + ".l_matrix");
                if (!l.is_square() || l.rows() != dim)
                    throw ScenarioError(dp + ".l_matrix", "must be " + std::to_string(dim) + "x" + std::to_string(dim));
                const double g = ds[k].contains("gamma") ? number(ds[k]["gamma"], dp + ".gamma") : 1.0;
                if (g < 0.0) throw ScenarioError(dp + ".gamma", "must be >= 0");
                dyn.dissipators.emplace_back(std::move(l), g);
            }
        }
        if (d.contains("recovery")) {
            if (d["recovery"] == "paper") dyn.recovery = RecoveryMethod::Paper;
            else if (d["recovery"] == "procrustes") dyn.recovery = RecoveryMethod::Procrustes;
            else throw ScenarioError("dynamics.recovery", "expected \"paper\" or \"procrustes\"");
        }
        if (d.contains("application")) {
            if (d["application"] == "conjugate") dyn.application = ApplicationMode::Conjugate;
            else if (d["application"] == "left") dyn.application = ApplicationMode::Left;
            else throw ScenarioError("dynamics.application", "expected \"conjugate\" or \"left\"");
        }
        sc.dynamics = std::move(dyn);
    }

    if (doc.contains("mission") && !doc["mission"].is_null()) {
        const json &m = doc["mission"];
        if (!m.is_object()) throw ScenarioError("mission", "expected an object");
        MissionSpec ms;
        const json &tb = field(m, "target_bits", "mission");
        const std::size_t npos = position_qubits(sc.robots.front().roles).size();
        if (!tb.is_array() || tb.size() != npos)
            throw ScenarioError("mission.target_bits", "expected " + std::to_string(npos) + " bits (one per position qubit)");
        for (std::size_t k = 0; k < tb.size(); ++k) {
            if (!tb[k].is_number_integer() || (tb[k].get<int>() != 0 && tb[k].get<int>() != 1))
                throw ScenarioError("mission.target_bits[" + std::to_string(k) + "]", "expected 0 or 1");
            ms.target_bits.push_back(tb[k].get<int>());
        }
        if (m.contains("delta")) ms.delta = number(m["delta"], "mission.delta");
        if (ms.delta <= 0.0) throw ScenarioError("mission.delta", "must be > 0");
        if (m.contains("max_iterations")) {
            if (!m["max_iterations"].is_number_integer() || m["max_iterations"].get<long long>() < 1)
                throw ScenarioError("mission.max_iterations", "expected an integer >= 1");
            ms.max_iterations = m["max_iterations"].get<std::size_t>();
        }
        if (m.contains("eta")) ms.eta = number(m["eta"], "mission.eta");
        if (!(ms.eta > 0.0 && ms.eta <= 1.0)) throw ScenarioError("mission.eta", "must lie in (0, 1]");
        if (m.contains("noise_std")) ms.noise_std = number(m["noise_std"], "mission.noise_std");
        if (ms.noise_std < 0.0) throw ScenarioError("mission.noise_std", "must be >= 0");
        if (m.contains("seed")) {
            if (!m["seed"].is_number_unsigned()) throw ScenarioError("mission.seed", "expected a non-negative integer");
            ms.seed = m["seed"].get<std::uint64_t>();
        }
        if (sc.mode != SwarmMode::Mixed) throw ScenarioError("mission", "missions require mode \"mixed\"");
        sc.mission = std::move(ms);
    }
    return sc;
}

inline ScenarioFile parse_scenario(std::string_view text, const Tolerances &tol = {}) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ScenarioError("", std::string("malformed JSON: ") + e.what());
    }
    return scenario_from_json(doc, tol);
}

inline json scenario_to_json(const ScenarioFile &sc) {
    json doc;
    doc["schema_version"] = sc.schema_version;
    json robots = json::array();
    for (const auto &r : sc.robots) {
        json jr;
        jr["id"] = r.id;
        json roles = json::array();
        for (auto role : r.roles) roles.push_back(std::string(to_string(role)));
        jr["roles"] = std::move(roles);
        json amps = json::array();
        for (const auto &z : r.ket.amplitudes()) amps.push_back(complex_to_json(z));
        jr["amplitudes"] = std::move(amps);
        robots.push_back(std::move(jr));
    }
    doc["robots"] = std::move(robots);
    doc["weights"] = sc.weights;
    doc["mode"] = std::string(to_string(sc.mode));
    if (sc.dynamics) {
        json d;
        d["delta_e"] = sc.dynamics->delta_e;
        json ds = json::array();
        for (const auto &diss : sc.dynamics->dissipators)
            ds.push_back(json{{"l_matrix", matrix_to_json(diss.op)}, {"gamma", diss.rate}});
        d["dissipators"] = std::move(ds);
        d["recovery"] = std::string(to_string(sc.dynamics->recovery));
        d["application"] = std::string(to_string(sc.dynamics->application));
        doc["dynamics"] = std::move(d);
    }
    if (sc.mission) {
        const auto &m = *sc.mission;
        doc["mission"] = json{{"target_bits", m.target_bits}, {"delta", m.delta},
                              {"max_iterations", m.max_iterations}, {"eta", m.eta},
                              {"noise_std", m.noise_std}, {"seed", m.seed}};
    }
    return doc;
}

inline std::string serialize_scenario(const ScenarioFile &sc) { return scenario_to_json(sc).dump(2) + "\n"; }

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return ss.str();
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

inline ScenarioFile load_scenario(const std::string &path, const Tolerances &tol = {}) {
    return parse_scenario(read_text_file(path), tol);
}

/// Row-major CSV with 17 significant digits; each complex entry takes two
/// columns (re, im).
inline std::string matrix_to_csv(const ComplexMatrix &m) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? "," : "") << "re_" << c << ",im_" << c;
    os << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            os << (c ? "," : "") << m(r, c).real() << "," << m(r, c).imag();
        os << "\n";
    }
    return os.str();
}

}  // namespace qswarm
