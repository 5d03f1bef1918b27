#pragma once

#include <algorithm>
#include <vector>

#include "cardinal/host_state.hpp"
#include "cardinal/params.hpp"
#include "cardinal/rng.hpp"
#include "cardinal/topology.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

inline StepIndex infection_age(const PerAntigenInfection& inf,
                               StepIndex step) {
    return step - inf.infected_at;
}

// Activate infections queued by last step's attempts. Re-checks the target:
// a host blocked (or infected/cured) since the attempt stays clean, so
// blocking is absolute from the moment it is applied.
inline void activate_pending(std::vector<HostState>& hosts, StepIndex step) {
    for (HostState& host : hosts) {
        for (const AntigenId& antigen : host.pending_infections) {
            if (host.posture.blocked.contains(antigen)) continue;
            auto [it, inserted] = host.infections.try_emplace(antigen);
            if (!inserted && it->second.phase != InfectionPhase::Susceptible)
                continue;
            it->second.phase = InfectionPhase::Infected;
            it->second.infected_at = step;
        }
        host.pending_infections.clear();
    }
}

// One worm's infection attempts for one step. Targets come from the host's
// neighbors (TopologyScan) or the whole population (RandomScan); successes
// are queued and only become live next step, so hosts can be evaluated in
// any order.
inline void propagate(std::vector<HostState>& hosts, const Topology& topo,
                      const WormProfile& worm, std::uint64_t seed,
                      StepIndex step, std::uint64_t worm_index) {
    const std::uint32_t n = topo.host_count();
    for (HostId h = 0; h < n; ++h) {
        const HostState& attacker = hosts[h];
        auto it = attacker.infections.find(worm.antigen);
        if (it == attacker.infections.end() ||
            it->second.phase != InfectionPhase::Infected)
            continue;

        Substream rng(seed, h, StreamPurpose::Propagation, step, worm_index);
        const std::vector<HostId>& nbrs = topo.neighbors(h);
        for (int a = 0; a < worm.attempts_per_step; ++a) {
            HostId target;
            if (worm.scan_mode == ScanMode::TopologyScan) {
                if (nbrs.empty()) break;
                target = nbrs[rng.next_below(nbrs.size())];
            } else {
                target = static_cast<HostId>(rng.next_below(n));
            }
            if (target == h) continue;
            HostState& victim = hosts[target];
            if (infection_phase(victim.infections, worm.antigen) !=
                InfectionPhase::Susceptible)
                continue;
            if (victim.posture.blocked.contains(worm.antigen)) continue;
            const double mult =
                victim.posture.infection_multiplier(worm.antigen);
            if (mult < 1.0 && rng.next_unit() >= mult) continue;
            victim.pending_infections.insert(worm.antigen);
        }
    }
}

// Symptoms of a live infection: severity jitters around the worm's mean,
// certainty ramps with infection age (evidence accumulates over time).
inline void emit_symptoms(HostState& host, const WormProfile& worm,
                          StepIndex age, StepIndex step, Substream& rng) {
    for (int i = 0; i < worm.symptoms_per_step; ++i) {
        SymptomEvent ev;
        ev.antigen = worm.antigen;
        ev.severity = clamp01(worm.severity_mean +
                              rng.next_range(-worm.severity_jitter,
                                             worm.severity_jitter));
        ev.certainty = clamp01(worm.certainty_base +
                               worm.certainty_ramp * static_cast<double>(age));
        ev.emitted_at = step;
        host.tissue.buffer.push_back(std::move(ev));
    }
}

inline void emit_benign(HostState& host, const BenignProfile& profile,
                        StepIndex step, Substream& rng) {
    if (rng.next_unit() >= profile.event_rate) return;
    SymptomEvent ev;
    ev.antigen = profile.antigen;
    ev.severity = rng.next_range(profile.severity_range.first,
                                 profile.severity_range.second);
    ev.certainty = rng.next_range(profile.certainty_range.first,
                                  profile.certainty_range.second);
    ev.emitted_at = step;
    host.tissue.buffer.push_back(std::move(ev));
}

} // namespace cardinal
