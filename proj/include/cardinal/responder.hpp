#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "cardinal/params.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

// Concrete effect model for responses: blocked signatures cannot infect at
// all; rate-limited ones succeed only with the stored multiplier. Blocking
// is never rolled back within a run.
struct DefensePosture {
    std::set<AntigenId> blocked;
    std::map<AntigenId, double> rate_limited;
    std::vector<ResponseAction> response_log;

    double infection_multiplier(const AntigenId& antigen) const {
        auto it = rate_limited.find(antigen);
        return it == rate_limited.end() ? 1.0 : it->second;
    }
};

enum class InfectionPhase : std::uint8_t { Susceptible, Infected, Cured };

struct PerAntigenInfection {
    InfectionPhase phase = InfectionPhase::Susceptible;
    StepIndex infected_at = 0;
};

using InfectionStateMap = std::map<AntigenId, PerAntigenInfection>;

inline InfectionPhase infection_phase(const InfectionStateMap& states,
                                      const AntigenId& antigen) {
    auto it = states.find(antigen);
    return it == states.end() ? InfectionPhase::Susceptible : it->second.phase;
}

// Apply one effector's response to a host's posture. CTL blocks the
// signature and cures a live infection; Th2 rate-limits. Th1 is rejected:
// it only steers CTL clone counts in the lymph node. Logging is idempotent
// within a step per (kind, antigen).
inline void apply_response(DefensePosture& posture, InfectionStateMap& states,
                           const EffectorTCell& effector, StepIndex step,
                           const ResponderParams& params) {
    if (effector.cell_type == CellType::Th1)
        throw std::logic_error(
            "apply_response: Th1 effectors do not respond directly");
    if (effector.clones <= 0)
        throw std::logic_error("apply_response: effector has no clones");

    const ResponseKind kind = effector.cell_type == CellType::Ctl
                                  ? ResponseKind::Strong
                                  : ResponseKind::Weak;
    if (kind == ResponseKind::Strong) {
        posture.blocked.insert(effector.antigen);
        auto it = states.find(effector.antigen);
        if (it != states.end() && it->second.phase == InfectionPhase::Infected)
            it->second.phase = InfectionPhase::Cured;
    } else {
        posture.rate_limited[effector.antigen] = params.weak_multiplier;
    }

    const bool already_logged = std::any_of(
        posture.response_log.rbegin(), posture.response_log.rend(),
        [&](const ResponseAction& a) {
            if (a.applied_at != step) return false;
            return a.kind == kind && a.antigen == effector.antigen;
        });
    if (!already_logged)
        posture.response_log.push_back({kind, effector.antigen, step});
}

inline int count_active_responses(const DefensePosture& posture,
                                  StepIndex step) {
    int n = 0;
    for (auto it = posture.response_log.rbegin();
         it != posture.response_log.rend() && it->applied_at == step; ++it)
        ++n;
    return n;
}

} // namespace cardinal
