#pragma once

// Randomized small-instance generator and invariant checker shared by the
// property suite and the acceptance harness.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cardinal/cardinal.hpp"
#include "support/test_support.hpp"

namespace testsup {

inline cardinal::RunConfig random_small_config(TestRng& rng) {
    using namespace cardinal;
    RunConfig config;

    const std::uint32_t hosts = 2 + static_cast<std::uint32_t>(rng.below(9));
    config.topology.host_count = hosts;
    switch (rng.below(3)) {
        case 0:
            config.topology.kind = TopologyKind::Ring;
            config.topology.ring_k = 1 + static_cast<std::uint32_t>(rng.below(2));
            break;
        case 1: config.topology.kind = TopologyKind::Complete; break;
        default:
            config.topology.kind = TopologyKind::ErdosRenyi;
            config.topology.mean_degree = rng.range(1.0, 4.0);
            break;
    }

    const int worm_count = rng.below(3);  // 0..2, <= 3 antigens overall
    for (int w = 0; w < worm_count; ++w) {
        WormProfile worm;
        worm.antigen = "w" + std::to_string(w);
        worm.scan_mode = rng.below(2) == 0 ? ScanMode::TopologyScan
                                           : ScanMode::RandomScan;
        worm.attempts_per_step = 1 + rng.below(3);
        worm.severity_mean = rng.range(0.3, 1.0);
        worm.severity_jitter = rng.range(0.0, 0.3);
        worm.certainty_base = rng.range(0.0, 1.0);
        worm.certainty_ramp = rng.range(0.0, 0.5);
        worm.symptoms_per_step = 1 + rng.below(3);
        config.worms.push_back(worm);
        config.initial_infections.emplace_back(
            static_cast<HostId>(rng.below(static_cast<int>(hosts))),
            worm.antigen);
    }
    const int benign_count = rng.below(2);
    for (int b = 0; b < benign_count; ++b) {
        BenignProfile profile;
        profile.antigen = "b" + std::to_string(b);
        profile.event_rate = rng.range(0.0, 0.5);
        const double s_lo = rng.range(0.0, 0.8);
        profile.severity_range = {s_lo, rng.range(s_lo, 1.0)};
        const double c_lo = rng.range(0.0, 0.8);
        profile.certainty_range = {c_lo, rng.range(c_lo, 1.0)};
        config.benign.push_back(profile);
    }

    config.assessment.severity_hi = rng.range(0.2, 0.8);
    config.assessment.certainty_hi = rng.range(0.2, 0.8);
    config.assessment.w_costim = rng.range(0.5, 4.0);
    config.assessment.w_il12 = rng.range(0.5, 4.0);
    config.assessment.w_il4 = rng.range(0.5, 4.0);

    config.differentiation.theta_ctl = rng.range(1.0, 8.0);
    config.differentiation.theta_th1 = rng.range(1.0, 8.0);
    config.differentiation.theta_th2 = rng.range(1.0, 8.0);
    config.differentiation.maturation_window =
        1 + static_cast<cardinal::StepIndex>(rng.below(4));
    config.differentiation.clone_gain = rng.range(0.3, 3.0);
    config.differentiation.clone_cap = 4 + rng.below(29);
    config.differentiation.memory_factor = rng.range(0.2, 1.0);
    config.differentiation.decay_per_step = 1 + rng.below(2);

    config.interaction.q_local = 1 + rng.below(8);
    config.interaction.q_peer = 1 + rng.below(3);
    config.interaction.delta_up = rng.range(0.1, 1.0);
    config.interaction.delta_down = rng.range(0.1, 0.9);
    config.interaction.suppress_step = 1 + rng.below(2);
    config.interaction.th1_fraction = rng.range(0.05, 1.0);

    config.responder.weak_multiplier = rng.range(0.1, 1.0);
    config.cardinal_enabled = rng.below(5) != 0;
    config.horizon = 5 + static_cast<cardinal::StepIndex>(rng.below(26));
    return config;
}

// Drives one world and checks the cross-module invariants every step.
// Returns the first violation as text, or an empty string.
inline std::string check_world_invariants(const cardinal::RunConfig& config,
                                          std::uint64_t seed) {
    using namespace cardinal;
    World world(config, seed);

    std::map<std::pair<HostId, AntigenId>,
             std::tuple<StepIndex, double, double, double>>
        naive_snapshot;
    std::vector<std::size_t> memory_sizes(config.topology.host_count, 0);
    std::vector<std::size_t> blocked_sizes(config.topology.host_count, 0);

    for (StepIndex s = 0; s < config.horizon; ++s) {
        const std::size_t inflight_before = world.inflight().size();
        try {
            world.step();
        } catch (const std::exception& e) {
            return std::string("engine invariant threw: ") + e.what();
        }

        std::size_t delivered = 0;
        for (const HostState& host : world.hosts())
            delivered += host.delivered.size();
        if (delivered != inflight_before)
            return "message conservation violated at step " +
                   std::to_string(s);

        for (HostId h = 0; h < world.hosts().size(); ++h) {
            const HostState& host = world.hosts()[h];
            for (const auto& [key, eff] : host.local_effectors) {
                if (eff.clones <= 0 ||
                    eff.clones > config.differentiation.clone_cap)
                    return "clone bound violated at step " + std::to_string(s);
            }
            for (const auto& [antigen, naive] : host.naive_pool) {
                auto it = naive_snapshot.find({h, antigen});
                if (it != naive_snapshot.end() &&
                    std::get<0>(it->second) == naive.created_at) {
                    const auto& [created, a_ctl, a_th1, a_th2] = it->second;
                    if (naive.a_ctl < a_ctl || naive.a_th1 < a_th1 ||
                        naive.a_th2 < a_th2)
                        return "activation decreased at step " +
                               std::to_string(s);
                }
                naive_snapshot[{h, antigen}] = {naive.created_at, naive.a_ctl,
                                                naive.a_th1, naive.a_th2};
            }
            if (host.memory.size() < memory_sizes[h])
                return "memory registry shrank at step " + std::to_string(s);
            memory_sizes[h] = host.memory.size();
            if (host.posture.blocked.size() < blocked_sizes[h])
                return "blocked set shrank at step " + std::to_string(s);
            blocked_sizes[h] = host.posture.blocked.size();
        }

        const StepMetrics& row = world.series().back();
        for (const auto& [antigen, counts] : row.per_antigen)
            if (counts.susceptible + counts.infected + counts.cured !=
                config.topology.host_count)
                return "state counts do not sum to host count at step " +
                       std::to_string(s);
    }
    return {};
}

} // namespace testsup
