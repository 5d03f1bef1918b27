#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cardinal/config.hpp"
#include "cardinal/host_state.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

inline constexpr const char* kMetricsSchemaVersion = "cardinal.metrics.v1";

struct AntigenStateCounts {
    std::uint32_t susceptible = 0;
    std::uint32_t infected = 0;
    std::uint32_t cured = 0;
    std::uint32_t blocked_hosts = 0;
    std::uint32_t rate_limited_hosts = 0;
};

struct StepMetrics {
    StepIndex step = 0;
    std::map<AntigenId, AntigenStateCounts> per_antigen;
    int strong_responses = 0;
    int weak_responses = 0;
    int false_positive_strong = 0;
    int messages_sent = 0;
    int clones_ctl = 0;
    int clones_th1 = 0;
    int clones_th2 = 0;

    int total_clones() const { return clones_ctl + clones_th1 + clones_th2; }
};

struct RunSummary {
    std::map<AntigenId, double> final_infected_fraction;
    std::map<AntigenId, double> peak_infected_fraction;
    std::map<AntigenId, std::optional<StepIndex>> time_to_first_strong;
    long long false_positive_strong_total = 0;
    long long total_messages = 0;
    std::optional<StepIndex> quiescence_step;
};

// All antigens a run tracks, in config declaration order (worms first).
inline std::vector<AntigenId> tracked_antigens(const RunConfig& config) {
    std::vector<AntigenId> out;
    for (const WormProfile& w : config.worms) out.push_back(w.antigen);
    for (const BenignProfile& b : config.benign) out.push_back(b.antigen);
    return out;
}

inline StepMetrics collect_step_metrics(const std::vector<HostState>& hosts,
                                        const RunConfig& config,
                                        StepIndex step, int messages_sent) {
    StepMetrics m;
    m.step = step;
    m.messages_sent = messages_sent;

    std::set<AntigenId> benign_antigens;
    for (const BenignProfile& b : config.benign)
        benign_antigens.insert(b.antigen);

    for (const AntigenId& antigen : tracked_antigens(config))
        m.per_antigen.emplace(antigen, AntigenStateCounts{});

    for (const HostState& host : hosts) {
        for (auto& [antigen, counts] : m.per_antigen) {
            switch (infection_phase(host.infections, antigen)) {
                case InfectionPhase::Susceptible: ++counts.susceptible; break;
                case InfectionPhase::Infected: ++counts.infected; break;
                case InfectionPhase::Cured: ++counts.cured; break;
            }
            if (host.posture.blocked.contains(antigen))
                ++counts.blocked_hosts;
            if (host.posture.rate_limited.contains(antigen))
                ++counts.rate_limited_hosts;
        }
        for (auto it = host.posture.response_log.rbegin();
             it != host.posture.response_log.rend() && it->applied_at == step;
             ++it) {
            if (it->kind == ResponseKind::Strong) {
                ++m.strong_responses;
                if (benign_antigens.contains(it->antigen))
                    ++m.false_positive_strong;
            } else {
                ++m.weak_responses;
            }
        }
        for (const auto& [key, eff] : host.local_effectors) {
            switch (eff.cell_type) {
                case CellType::Ctl: m.clones_ctl += eff.clones; break;
                case CellType::Th1: m.clones_th1 += eff.clones; break;
                case CellType::Th2: m.clones_th2 += eff.clones; break;
            }
        }
    }

    const auto host_count = static_cast<std::uint32_t>(hosts.size());
    for (const auto& [antigen, counts] : m.per_antigen)
        if (counts.susceptible + counts.infected + counts.cured != host_count)
            throw std::logic_error(
                "metrics: per-antigen state counts do not sum to host count "
                "for antigen '" + antigen + "'");
    return m;
}

inline RunSummary summarize(const std::vector<StepMetrics>& series,
                            const std::vector<HostState>& hosts,
                            const RunConfig& config) {
    RunSummary s;
    const double n = static_cast<double>(config.topology.host_count);

    for (const WormProfile& w : config.worms) {
        double peak = 0.0;
        double final_frac = 0.0;
        for (const StepMetrics& row : series) {
            const AntigenStateCounts& c = row.per_antigen.at(w.antigen);
            const double frac = static_cast<double>(c.infected) / n;
            peak = std::max(peak, frac);
            final_frac = frac;
        }
        s.final_infected_fraction[w.antigen] = final_frac;
        s.peak_infected_fraction[w.antigen] = peak;
    }

    for (const AntigenId& antigen : tracked_antigens(config))
        s.time_to_first_strong.emplace(antigen, std::nullopt);
    for (const HostState& host : hosts)
        for (const ResponseAction& action : host.posture.response_log) {
            if (action.kind != ResponseKind::Strong) continue;
            auto& slot = s.time_to_first_strong[action.antigen];
            if (!slot.has_value() || action.applied_at < *slot)
                slot = action.applied_at;
        }

    std::optional<StepIndex> last_active;
    for (const StepMetrics& row : series) {
        s.false_positive_strong_total += row.false_positive_strong;
        s.total_messages += row.messages_sent;
        if (row.total_clones() > 0 || row.messages_sent > 0)
            last_active = row.step;
    }
    if (!last_active.has_value())
        s.quiescence_step = 0;
    else if (*last_active + 1 < series.size())
        s.quiescence_step = *last_active + 1;
    // else: still active at the end of the run, quiescence not reached.
    return s;
}

// One row per step, fixed column order derived from the config's antigen
// list. Every row repeats the schema token named in the header.
inline void write_metrics_csv(std::ostream& out,
                              const std::vector<StepMetrics>& series,
                              const RunConfig& config) {
    const std::vector<AntigenId> antigens = tracked_antigens(config);
    out << "schema_version,step";
    for (const AntigenId& a : antigens)
        out << ",susceptible_" << a << ",infected_" << a << ",cured_" << a
            << ",blocked_" << a << ",rate_limited_" << a;
    out << ",strong_responses,weak_responses,false_positive_strong,"
           "messages_sent,clones_ctl,clones_th1,clones_th2\n";

    for (const StepMetrics& row : series) {
        out << kMetricsSchemaVersion << ',' << row.step;
        for (const AntigenId& a : antigens) {
            const AntigenStateCounts& c = row.per_antigen.at(a);
            out << ',' << c.susceptible << ',' << c.infected << ',' << c.cured
                << ',' << c.blocked_hosts << ',' << c.rate_limited_hosts;
        }
        out << ',' << row.strong_responses << ',' << row.weak_responses << ','
            << row.false_positive_strong << ',' << row.messages_sent << ','
            << row.clones_ctl << ',' << row.clones_th1 << ','
            << row.clones_th2 << '\n';
    }
}

inline nlohmann::ordered_json summary_to_json(const RunSummary& s) {
    nlohmann::ordered_json j;
    j["schema_version"] = "cardinal.summary.v1";
    j["final_infected_fraction"] = nlohmann::ordered_json::object();
    for (const auto& [antigen, frac] : s.final_infected_fraction)
        j["final_infected_fraction"][antigen] = frac;
    j["peak_infected_fraction"] = nlohmann::ordered_json::object();
    for (const auto& [antigen, frac] : s.peak_infected_fraction)
        j["peak_infected_fraction"][antigen] = frac;
    j["time_to_first_strong"] = nlohmann::ordered_json::object();
    for (const auto& [antigen, step] : s.time_to_first_strong) {
        if (step.has_value())
            j["time_to_first_strong"][antigen] = *step;
        else
            j["time_to_first_strong"][antigen] = nullptr;
    }
    j["false_positive_strong_total"] = s.false_positive_strong_total;
    j["total_messages"] = s.total_messages;
    if (s.quiescence_step.has_value())
        j["quiescence_step"] = *s.quiescence_step;
    else
        j["quiescence_step"] = nullptr;
    return j;
}

inline void write_summary(std::ostream& out, const RunSummary& s) {
    out << summary_to_json(s).dump(2) << '\n';
}

} // namespace cardinal
