#pragma once

#include <algorithm>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cardinal/config.hpp"
#include "cardinal/epidemic.hpp"
#include "cardinal/host_state.hpp"
#include "cardinal/metrics.hpp"
#include "cardinal/peer_interaction.hpp"
#include "cardinal/periphery.hpp"
#include "cardinal/responder.hpp"
#include "cardinal/rng.hpp"
#include "cardinal/topology.hpp"

namespace cardinal {

// The whole simulated network: hosts, topology, in-flight messages and the
// step counter. step() advances everything one synchronous round; all
// cross-host effects (infections, messages) become visible next round, so
// the result does not depend on host evaluation order.
class World {
public:
    World(RunConfig config, std::uint64_t seed)
        : config_(std::move(config)),
          seed_(seed),
          topology_(build_topology(config_.topology, seed)),
          hosts_(config_.topology.host_count) {
        for (const auto& [host, antigen] : config_.initial_infections) {
            PerAntigenInfection inf;
            inf.phase = InfectionPhase::Infected;
            inf.infected_at = 0;
            hosts_[host].infections[antigen] = inf;
        }
        for (HostId h : topology_.isolated_hosts())
            warnings_.push_back("host " + std::to_string(h) +
                                " has no neighbors (disconnected topology)");
    }

    // One synchronous round, in fixed order:
    //   deliver -> propagate -> emit -> assess -> mature -> decay ->
    //   differentiate -> peer stages 1-4 -> Th1 boost -> migrate/respond ->
    //   shift histories -> record metrics.
    void step() {
        deliver_messages();
        epidemic_phase();
        emission_phase();

        int messages_sent = 0;
        if (config_.cardinal_enabled) {
            std::vector<PeerEffectorMessage> outbox;
            for (HostId h = 0; h < host_count(); ++h)
                defend_host(h, outbox);
            messages_sent = static_cast<int>(outbox.size());
            inflight_ = std::move(outbox);
            shift_histories();
        }

        series_.push_back(
            collect_step_metrics(hosts_, config_, step_, messages_sent));
        ++step_;
    }

    RunSummary summary() const { return summarize(series_, hosts_, config_); }

    const RunConfig& config() const { return config_; }
    const Topology& topology() const { return topology_; }
    const std::vector<HostState>& hosts() const { return hosts_; }
    const std::vector<PeerEffectorMessage>& inflight() const {
        return inflight_;
    }
    const std::vector<StepMetrics>& series() const { return series_; }
    StepIndex current_step() const { return step_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    void set_trace(std::ostream* sink) { trace_ = sink; }

private:
    std::uint32_t host_count() const {
        return static_cast<std::uint32_t>(hosts_.size());
    }

    void deliver_messages() {
        for (HostState& host : hosts_) {
            host.delivered.clear();
            host.responses_observed = 0;
        }
        for (PeerEffectorMessage& msg : inflight_) {
            HostState& host = hosts_.at(msg.receiver);
            host.responses_observed += msg.sender_active_responses;
            host.delivered.push_back(std::move(msg));
        }
        inflight_.clear();
    }

    void epidemic_phase() {
        activate_pending(hosts_, step_);
        for (std::size_t w = 0; w < config_.worms.size(); ++w)
            propagate(hosts_, topology_, config_.worms[w], seed_, step_, w);
    }

    void emission_phase() {
        if (!config_.cardinal_enabled) return;  // symptoms have no consumer
        for (HostId h = 0; h < host_count(); ++h) {
            HostState& host = hosts_[h];
            for (std::size_t w = 0; w < config_.worms.size(); ++w) {
                const WormProfile& worm = config_.worms[w];
                auto it = host.infections.find(worm.antigen);
                if (it == host.infections.end() ||
                    it->second.phase != InfectionPhase::Infected)
                    continue;
                Substream rng(seed_, h, StreamPurpose::Symptoms, step_, w);
                emit_symptoms(host, worm, infection_age(it->second, step_),
                              step_, rng);
            }
            for (std::size_t b = 0; b < config_.benign.size(); ++b) {
                Substream rng(seed_, h, StreamPurpose::Benign, step_, b);
                emit_benign(host, config_.benign[b], step_, rng);
            }
        }
    }

    void defend_host(HostId h, std::vector<PeerEffectorMessage>& outbox) {
        HostState& host = hosts_[h];

        const std::vector<SymptomEvent> events = collect_tissue(host.tissue);
        const std::vector<DendriticCellReport> reports =
            assess_events(events, config_.assessment);

        std::set<AntigenId> reported;
        for (const DendriticCellReport& report : reports) {
            NaiveTCell& naive =
                ensure_naive(host.naive_pool, report.antigen, step_,
                             host.memory, config_.differentiation);
            mature(naive, report);
            reported.insert(report.antigen);
        }

        decay_effectors(host.local_effectors, reported,
                        config_.differentiation);

        for (auto it = host.naive_pool.begin();
             it != host.naive_pool.end();) {
            DifferentiationResult result =
                differentiate(it->second, config_.differentiation, step_);
            for (EffectorTCell& eff : result.effectors)
                absorb_local_effector(host, std::move(eff));
            it = result.consumed ? host.naive_pool.erase(it) : ++it;
        }

        PeerEffectorMap peers = merge_peer_effectors(host.delivered);
        StageSelection selection =
            stage1_select(host.local_effectors, config_.interaction.q_local);
        for (EffectorKey& key :
             stage2_select(selection.remainder, host.delivered,
                           config_.interaction.q_peer))
            selection.selected.push_back(std::move(key));
        stage3_update(host.local_effectors, selection.selected, host.history,
                      config_.interaction, config_.differentiation.clone_cap);
        stage4_suppress(peers, host.local_effectors, host.memory,
                        config_.interaction);
        th1_boost_ctl(host.local_effectors, config_.interaction.th1_fraction,
                      config_.differentiation.clone_cap);

        Substream rng(seed_, h, StreamPurpose::Migration, step_);
        const std::vector<HostId>& neighbors = topology_.neighbors(h);
        MigrationPlan plan = plan_migration(host.local_effectors, peers,
                                            neighbors, rng, h, step_);

        const std::size_t log_mark = host.posture.response_log.size();
        for (const EffectorTCell& eff : plan.responses)
            apply_response(host.posture, host.infections, eff, step_,
                           config_.responder);
        if (trace_)
            for (std::size_t i = log_mark; i < host.posture.response_log.size();
                 ++i)
                trace_response(h, host.posture.response_log[i]);

        enforce_message_bound(h, host, peers, plan);
        for (PeerEffectorMessage& msg : plan.outbound) {
            if (trace_) trace_message(msg);
            outbox.push_back(std::move(msg));
        }
    }

    // Differentiation can re-emit an (antigen, type) that already exists
    // locally; merged entries accumulate clones up to the cap.
    void absorb_local_effector(HostState& host, EffectorTCell&& eff) {
        const EffectorKey key{eff.antigen, eff.cell_type};
        auto it = host.local_effectors.find(key);
        if (it == host.local_effectors.end()) {
            host.local_effectors.emplace(key, std::move(eff));
        } else {
            it->second.clones =
                std::min(config_.differentiation.clone_cap,
                         it->second.clones + eff.clones);
        }
    }

    // Self-DoS guard: a host's outbound traffic is bounded by the distinct
    // (antigen, type) effector entries present at migration time.
    void enforce_message_bound(HostId h, const HostState& host,
                               const PeerEffectorMap& peers,
                               const MigrationPlan& plan) const {
        std::set<EffectorKey> entries;
        for (const auto& [key, eff] : host.local_effectors)
            if (eff.clones > 0) entries.insert(key);
        for (const auto& [key, eff] : peers)
            if (eff.clones > 0) entries.insert(key);
        const std::size_t per_entry =
            std::min<std::size_t>(config_.differentiation.clone_cap,
                                  topology_.degree(h));
        if (plan.outbound.size() > entries.size() * per_entry)
            throw std::logic_error(
                "host " + std::to_string(h) +
                " exceeded the per-step message bound");
    }

    void shift_histories() {
        for (HostState& host : hosts_) {
            host.history.r_t2 = host.history.r_t1;
            host.history.r_t1 = host.responses_observed;
            record_clone_history(host.local_effectors);
        }
    }

    void trace_message(const PeerEffectorMessage& msg) {
        nlohmann::ordered_json j;
        j["type"] = "message";
        j["sender"] = msg.sender;
        j["receiver"] = msg.receiver;
        j["antigen"] = msg.effector.antigen;
        j["cell_type"] = to_string(msg.effector.cell_type);
        j["clones"] = msg.effector.clones;
        j["sender_active_responses"] = msg.sender_active_responses;
        j["sent_at"] = msg.sent_at;
        *trace_ << j.dump() << '\n';
    }

    void trace_response(HostId h, const ResponseAction& action) {
        nlohmann::ordered_json j;
        j["type"] = "response";
        j["step"] = action.applied_at;
        j["host"] = h;
        j["kind"] = to_string(action.kind);
        j["antigen"] = action.antigen;
        *trace_ << j.dump() << '\n';
    }

    RunConfig config_;
    std::uint64_t seed_ = 0;
    Topology topology_;
    std::vector<HostState> hosts_;
    std::vector<PeerEffectorMessage> inflight_;
    std::vector<StepMetrics> series_;
    std::vector<std::string> warnings_;
    StepIndex step_ = 0;
    std::ostream* trace_ = nullptr;
};

inline World build_world(const RunConfig& config, std::uint64_t seed) {
    return World(config, seed);
}

struct RunResult {
    std::vector<StepMetrics> series;
    RunSummary summary;
};

inline RunResult run(const RunConfig& config, std::uint64_t seed,
                     StepIndex horizon, std::ostream* trace = nullptr) {
    if (horizon < 1)
        throw std::invalid_argument("run: horizon must be >= 1");
    World world(config, seed);
    world.set_trace(trace);
    for (StepIndex i = 0; i < horizon; ++i) world.step();
    return {world.series(), world.summary()};
}

inline RunResult run(const RunConfig& config, std::uint64_t seed) {
    return run(config, seed, config.horizon, nullptr);
}

} // namespace cardinal
