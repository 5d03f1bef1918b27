#pragma once

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cardinal/params.hpp"
#include "cardinal/topology.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

// Raised for any malformed or out-of-domain configuration; the message
// names the offending key path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// One simulation run, fully specified. Antigens must be distinct across all
// worm and benign profiles.
struct RunConfig {
    TopologySpec topology;
    std::vector<WormProfile> worms;
    std::vector<BenignProfile> benign;
    AssessmentParams assessment;
    DifferentiationParams differentiation;
    InteractionParams interaction;
    ResponderParams responder;
    bool cardinal_enabled = true;
    std::vector<std::pair<HostId, AntigenId>> initial_infections;
    StepIndex horizon = 1;
};

namespace cfg {

using nlohmann::json;

inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError(path + "." + item.key() + ": unknown key");
    }
}

inline const json& require(const json& j, const std::string& path,
                           const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(path + "." + key + ": required key missing");
    return *it;
}

inline double as_number(const json& j, const std::string& where) {
    if (!j.is_number())
        throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

inline double get_number(const json& j, const std::string& path,
                         const char* key, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : as_number(*it, path + "." + key);
}

inline int get_int(const json& j, const std::string& path, const char* key,
                   int fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer())
        throw ConfigError(path + "." + key + ": expected an integer");
    return it->get<int>();
}

inline bool get_bool(const json& j, const std::string& path, const char* key,
                     bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean())
        throw ConfigError(path + "." + key + ": expected a boolean");
    return it->get<bool>();
}

inline std::string get_string(const json& j, const std::string& path,
                              const char* key) {
    const json& v = require(j, path, key);
    if (!v.is_string())
        throw ConfigError(path + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline void check(bool ok, const std::string& where, const char* rule) {
    if (!ok) throw ConfigError(where + ": " + rule);
}

// Antigen tokens appear verbatim in CSV headers and trace rows.
inline bool valid_antigen_token(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' &&
            c != '_' && c != '.')
            return false;
    return true;
}

inline std::pair<double, double> get_range(const json& j,
                                           const std::string& path,
                                           const char* key,
                                           std::pair<double, double> fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    const std::string where = path + "." + key;
    if (!it->is_array() || it->size() != 2)
        throw ConfigError(where + ": expected [lo, hi]");
    const double lo = as_number((*it)[0], where);
    const double hi = as_number((*it)[1], where);
    check(lo >= 0.0 && hi <= 1.0 && lo <= hi, where,
          "must be a sub-interval of [0,1]");
    return {lo, hi};
}

inline TopologySpec parse_topology(const json& j) {
    const std::string path = "topology";
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, path, {"type", "hosts", "mean_degree", "k", "edges"});

    TopologySpec spec;
    const std::string type = get_string(j, path, "type");
    const int hosts = get_int(j, path, "hosts", 0);
    check(hosts >= 1, path + ".hosts", "must be >= 1");
    spec.host_count = static_cast<std::uint32_t>(hosts);

    if (type == "erdos_renyi") {
        spec.kind = TopologyKind::ErdosRenyi;
        spec.mean_degree = get_number(j, path, "mean_degree", 8.0);
        check(spec.mean_degree > 0.0, path + ".mean_degree", "must be > 0");
    } else if (type == "ring") {
        spec.kind = TopologyKind::Ring;
        const int k = get_int(j, path, "k", 2);
        check(k >= 1, path + ".k", "must be >= 1");
        spec.ring_k = static_cast<std::uint32_t>(k);
    } else if (type == "complete") {
        spec.kind = TopologyKind::Complete;
    } else if (type == "edges") {
        spec.kind = TopologyKind::ExplicitEdgeList;
        const json& edges = require(j, path, "edges");
        if (!edges.is_array())
            throw ConfigError(path + ".edges: expected an array");
        for (const json& e : edges) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                !e[1].is_number_integer())
                throw ConfigError(path + ".edges: expected [a, b] pairs");
            const long long a = e[0].get<long long>();
            const long long b = e[1].get<long long>();
            check(a >= 0 && b >= 0 && a < hosts && b < hosts && a != b,
                  path + ".edges", "host ids must be distinct and in range");
            spec.edges.emplace_back(static_cast<HostId>(a),
                                    static_cast<HostId>(b));
        }
    } else {
        throw ConfigError(path + ".type: unknown topology type '" + type +
                          "'");
    }
    return spec;
}

inline WormProfile parse_worm(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, path,
               {"antigen", "scan", "attempts_per_step", "severity_mean",
                "severity_jitter", "certainty_base", "certainty_ramp",
                "symptoms_per_step"});
    WormProfile w;
    w.antigen = get_string(j, path, "antigen");
    check(valid_antigen_token(w.antigen), path + ".antigen",
          "must be a non-empty token of [A-Za-z0-9_.-]");
    const std::string scan =
        j.contains("scan") ? get_string(j, path, "scan") : "topology";
    if (scan == "topology")
        w.scan_mode = ScanMode::TopologyScan;
    else if (scan == "random")
        w.scan_mode = ScanMode::RandomScan;
    else
        throw ConfigError(path + ".scan: must be 'topology' or 'random'");
    w.attempts_per_step = get_int(j, path, "attempts_per_step", 2);
    check(w.attempts_per_step >= 1, path + ".attempts_per_step",
          "must be >= 1");
    w.severity_mean = get_number(j, path, "severity_mean", 0.8);
    check(w.severity_mean > 0.0 && w.severity_mean <= 1.0,
          path + ".severity_mean", "must be in (0,1]");
    w.severity_jitter = get_number(j, path, "severity_jitter", 0.1);
    check(w.severity_jitter >= 0.0, path + ".severity_jitter",
          "must be >= 0");
    w.certainty_base = get_number(j, path, "certainty_base", 0.3);
    check(w.certainty_base >= 0.0 && w.certainty_base <= 1.0,
          path + ".certainty_base", "must be in [0,1]");
    w.certainty_ramp = get_number(j, path, "certainty_ramp", 0.2);
    check(w.certainty_ramp >= 0.0, path + ".certainty_ramp", "must be >= 0");
    w.symptoms_per_step = get_int(j, path, "symptoms_per_step", 2);
    check(w.symptoms_per_step >= 1, path + ".symptoms_per_step",
          "must be >= 1");
    return w;
}

inline BenignProfile parse_benign(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, path,
               {"antigen", "event_rate", "severity_range", "certainty_range"});
    BenignProfile b;
    b.antigen = get_string(j, path, "antigen");
    check(valid_antigen_token(b.antigen), path + ".antigen",
          "must be a non-empty token of [A-Za-z0-9_.-]");
    b.event_rate = get_number(j, path, "event_rate", 0.01);
    check(b.event_rate >= 0.0 && b.event_rate <= 1.0, path + ".event_rate",
          "must be in [0,1]");
    b.severity_range = get_range(j, path, "severity_range", {0.05, 0.45});
    b.certainty_range = get_range(j, path, "certainty_range", {0.0, 1.0});
    return b;
}

inline AssessmentParams parse_assessment(const json& j) {
    const std::string path = "assessment";
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, path,
               {"severity_hi", "certainty_hi", "w_costim", "w_il12", "w_il4"});
    AssessmentParams p;
    p.severity_hi = get_number(j, path, "severity_hi", p.severity_hi);
    check(p.severity_hi > 0.0 && p.severity_hi < 1.0, path + ".severity_hi",
          "must be in (0,1)");
    p.certainty_hi = get_number(j, path, "certainty_hi", p.certainty_hi);
    check(p.certainty_hi > 0.0 && p.certainty_hi < 1.0, path + ".certainty_hi",
          "must be in (0,1)");
    p.w_costim = get_number(j, path, "w_costim", p.w_costim);
    p.w_il12 = get_number(j, path, "w_il12", p.w_il12);
    p.w_il4 = get_number(j, path, "w_il4", p.w_il4);
    check(p.w_costim > 0.0, path + ".w_costim", "must be > 0");
    check(p.w_il12 > 0.0, path + ".w_il12", "must be > 0");
    check(p.w_il4 > 0.0, path + ".w_il4", "must be > 0");
    return p;
}

inline DifferentiationParams parse_differentiation(const json& j) {
    const std::string path = "differentiation";
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, path,
               {"theta_ctl", "theta_th1", "theta_th2", "maturation_window",
                "clone_gain", "clone_cap", "memory_factor", "decay_per_step"});
    DifferentiationParams p;
    p.theta_ctl = get_number(j, path, "theta_ctl", p.theta_ctl);
    p.theta_th1 = get_number(j, path, "theta_th1", p.theta_th1);
    p.theta_th2 = get_number(j, path, "theta_th2", p.theta_th2);
    check(p.theta_ctl > 0.0, path + ".theta_ctl", "must be > 0");
    check(p.theta_th1 > 0.0, path + ".theta_th1", "must be > 0");
    check(p.theta_th2 > 0.0, path + ".theta_th2", "must be > 0");
    const int window = get_int(j, path, "maturation_window", 3);
    check(window >= 1, path + ".maturation_window", "must be >= 1");
    p.maturation_window = static_cast<StepIndex>(window);
    p.clone_gain = get_number(j, path, "clone_gain", p.clone_gain);
    check(p.clone_gain > 0.0, path + ".clone_gain", "must be > 0");
    p.clone_cap = get_int(j, path, "clone_cap", p.clone_cap);
    check(p.clone_cap >= 1, path + ".clone_cap", "must be >= 1");
    // 1.0 disables memory (the control arm of memory experiments).
    p.memory_factor = get_number(j, path, "memory_factor", p.memory_factor);
    check(p.memory_factor > 0.0 && p.memory_factor <= 1.0,
          path + ".memory_factor", "must be in (0,1]");
    p.decay_per_step = get_int(j, path, "decay_per_step", p.decay_per_step);
    check(p.decay_per_step >= 1, path + ".decay_per_step", "must be >= 1");
    return p;
}

inline InteractionParams parse_interaction(const json& j) {
    const std::string path = "interaction";
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, path,
               {"q_local", "q_peer", "delta_up", "delta_down", "suppress_step",
                "th1_fraction"});
    InteractionParams p;
    p.q_local = get_int(j, path, "q_local", p.q_local);
    check(p.q_local >= 1, path + ".q_local", "must be >= 1");
    p.q_peer = get_int(j, path, "q_peer", p.q_peer);
    check(p.q_peer >= 1, path + ".q_peer", "must be >= 1");
    p.delta_up = get_number(j, path, "delta_up", p.delta_up);
    check(p.delta_up > 0.0, path + ".delta_up", "must be > 0");
    p.delta_down = get_number(j, path, "delta_down", p.delta_down);
    check(p.delta_down > 0.0 && p.delta_down < 1.0, path + ".delta_down",
          "must be in (0,1)");
    p.suppress_step = get_int(j, path, "suppress_step", p.suppress_step);
    check(p.suppress_step >= 1, path + ".suppress_step", "must be >= 1");
    p.th1_fraction = get_number(j, path, "th1_fraction", p.th1_fraction);
    check(p.th1_fraction > 0.0 && p.th1_fraction <= 1.0,
          path + ".th1_fraction", "must be in (0,1]");
    return p;
}

inline ResponderParams parse_responder(const json& j) {
    const std::string path = "responder";
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    check_keys(j, path, {"weak_multiplier"});
    ResponderParams p;
    p.weak_multiplier = get_number(j, path, "weak_multiplier",
                                   p.weak_multiplier);
    check(p.weak_multiplier > 0.0 && p.weak_multiplier <= 1.0,
          path + ".weak_multiplier", "must be in (0,1]");
    return p;
}

} // namespace cfg

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    cfg::check_keys(j, "config",
                    {"topology", "worms", "benign", "assessment",
                     "differentiation", "interaction", "responder",
                     "cardinal_enabled", "initial_infections", "horizon"});

    RunConfig config;
    config.topology = cfg::parse_topology(cfg::require(j, "config", "topology"));

    if (auto it = j.find("worms"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("worms: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            config.worms.push_back(cfg::parse_worm(
                (*it)[i], "worms[" + std::to_string(i) + "]"));
    }
    if (auto it = j.find("benign"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("benign: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            config.benign.push_back(cfg::parse_benign(
                (*it)[i], "benign[" + std::to_string(i) + "]"));
    }

    // Antigens identify profiles; any collision would alias their metrics.
    std::set<AntigenId> seen;
    for (std::size_t i = 0; i < config.worms.size(); ++i)
        if (!seen.insert(config.worms[i].antigen).second)
            throw ConfigError("worms[" + std::to_string(i) +
                              "].antigen: duplicate antigen '" +
                              config.worms[i].antigen + "'");
    for (std::size_t i = 0; i < config.benign.size(); ++i)
        if (!seen.insert(config.benign[i].antigen).second)
            throw ConfigError("benign[" + std::to_string(i) +
                              "].antigen: duplicate antigen '" +
                              config.benign[i].antigen + "'");

    if (auto it = j.find("assessment"); it != j.end())
        config.assessment = cfg::parse_assessment(*it);
    if (auto it = j.find("differentiation"); it != j.end())
        config.differentiation = cfg::parse_differentiation(*it);
    if (auto it = j.find("interaction"); it != j.end())
        config.interaction = cfg::parse_interaction(*it);
    if (auto it = j.find("responder"); it != j.end())
        config.responder = cfg::parse_responder(*it);

    config.cardinal_enabled =
        cfg::get_bool(j, "config", "cardinal_enabled", true);

    if (auto it = j.find("initial_infections"); it != j.end()) {
        if (!it->is_array())
            throw ConfigError("initial_infections: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const nlohmann::json& e = (*it)[i];
            const std::string where =
                "initial_infections[" + std::to_string(i) + "]";
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                !e[1].is_string())
                throw ConfigError(where + ": expected [host, antigen]");
            const long long host = e[0].get<long long>();
            const AntigenId antigen = e[1].get<std::string>();
            cfg::check(host >= 0 &&
                           host < static_cast<long long>(
                                      config.topology.host_count),
                       where, "host id out of range");
            bool is_worm = false;
            for (const WormProfile& w : config.worms)
                if (w.antigen == antigen) is_worm = true;
            cfg::check(is_worm, where,
                       "antigen does not name a configured worm");
            config.initial_infections.emplace_back(
                static_cast<HostId>(host), antigen);
        }
    }

    const int horizon = cfg::get_int(j, "config", "horizon", 0);
    cfg::check(horizon >= 1, "horizon", "must be >= 1");
    config.horizon = static_cast<StepIndex>(horizon);
    return config;
}

} // namespace cardinal
