#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cardinal/lymph_node.hpp"
#include "cardinal/params.hpp"
#include "cardinal/rng.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

// Peer effectors delivered in one step, merged per (antigen, type). Multiple
// senders collapse to the strongest copy; raw message multiplicity is kept
// separately for stage-2 counting.
using PeerEffectorMap = std::map<EffectorKey, EffectorTCell>;

inline PeerEffectorMap merge_peer_effectors(
    const std::vector<PeerEffectorMessage>& delivered) {
    PeerEffectorMap peers;
    for (const PeerEffectorMessage& msg : delivered) {
        if (msg.effector.clones <= 0) continue;
        const EffectorKey key{msg.effector.antigen, msg.effector.cell_type};
        auto it = peers.find(key);
        if (it == peers.end()) {
            EffectorTCell copy = msg.effector;
            copy.peer_source = msg.sender;
            peers.emplace(key, std::move(copy));
        } else if (msg.effector.clones > it->second.clones) {
            it->second.clones = msg.effector.clones;
            it->second.peer_source = msg.sender;
        }
    }
    return peers;
}

struct StageSelection {
    std::vector<EffectorKey> selected;
    std::vector<EffectorKey> remainder;
};

// Stage 1: effectors whose clone counts alone mark the attack as severe and
// certain.
inline StageSelection stage1_select(const EffectorMap& locals, int q_local) {
    StageSelection out;
    for (const auto& [key, eff] : locals) {
        if (eff.clones >= q_local)
            out.selected.push_back(key);
        else
            out.remainder.push_back(key);
    }
    return out;
}

// Stage 2: remainder effectors corroborated by enough peer effectors of the
// same antigen AND type.
inline std::vector<EffectorKey> stage2_select(
    const std::vector<EffectorKey>& remainder,
    const std::vector<PeerEffectorMessage>& delivered, int q_peer) {
    std::map<EffectorKey, int> counts;
    for (const PeerEffectorMessage& msg : delivered)
        ++counts[{msg.effector.antigen, msg.effector.cell_type}];

    std::vector<EffectorKey> selected;
    for (const EffectorKey& key : remainder) {
        auto it = counts.find(key);
        if (it != counts.end() && it->second >= q_peer)
            selected.push_back(key);
    }
    return selected;
}

struct GrowthEstimate {
    int g_worm = 0;
    int g_clone = 0;
};

// Both rates are two-step differences: the worm's from aggregate peer
// responses, the effector's from its own clone history.
inline GrowthEstimate estimate_growth(const PeerResponseHistory& history,
                                      const EffectorTCell& effector) {
    return {history.r_t1 - history.r_t2,
            effector.clones_hist.second - effector.clones_hist.first};
}

// Stage 3: re-derive clone counts for the selected effectors. The worm
// outpacing the clones (ties included) grows the response, otherwise it
// shrinks. Effectors hitting zero are removed.
inline void stage3_update(EffectorMap& locals,
                          std::span<const EffectorKey> selected,
                          const PeerResponseHistory& history,
                          const InteractionParams& params, int clone_cap) {
    for (const EffectorKey& key : selected) {
        auto it = locals.find(key);
        if (it == locals.end()) continue;
        EffectorTCell& eff = it->second;
        const GrowthEstimate g = estimate_growth(history, eff);
        if (g.g_worm >= g.g_clone) {
            const double grown =
                std::ceil(static_cast<double>(eff.clones) *
                          (1.0 + params.delta_up));
            eff.clones = std::min(clone_cap, static_cast<int>(grown));
        } else {
            eff.clones = static_cast<int>(
                std::floor(static_cast<double>(eff.clones) *
                           (1.0 - params.delta_down)));
        }
        if (eff.clones <= 0) locals.erase(it);
    }
}

// Stage 4: peer effectors without any local effector for the same antigen
// (any type) are suppressed; survivors mark the antigen in the memory
// registry so the next naive cell starts with lowered thresholds. Peer
// effectors with a local same-antigen match are left untouched.
inline void stage4_suppress(PeerEffectorMap& peers, const EffectorMap& locals,
                            MemoryRegistry& memory,
                            const InteractionParams& params) {
    std::set<AntigenId> local_antigens;
    for (const auto& [key, eff] : locals) local_antigens.insert(key.first);

    for (auto it = peers.begin(); it != peers.end();) {
        EffectorTCell& peer = it->second;
        if (!local_antigens.contains(peer.antigen)) {
            peer.clones = std::max(0, peer.clones - params.suppress_step);
            if (peer.clones > 0) memory.insert(peer.antigen);
        }
        if (peer.clones <= 0)
            it = peers.erase(it);
        else
            ++it;
    }
}

// Th1 cells escort CTLs recognising the same antigen: a fraction of the Th1
// clone count is granted to the CTL. The donor keeps its clones.
inline void th1_boost_ctl(EffectorMap& locals, double th1_fraction,
                          int clone_cap) {
    for (auto& [key, ctl] : locals) {
        if (key.second != CellType::Ctl) continue;
        auto th1 = locals.find({key.first, CellType::Th1});
        if (th1 == locals.end()) continue;
        const int bonus = static_cast<int>(
            std::floor(th1_fraction * static_cast<double>(th1->second.clones)));
        ctl.clones = std::min(clone_cap, ctl.clones + bonus);
    }
}

struct MigrationPlan {
    // CTL and Th2 effectors (local and surviving peer) that respond at this
    // host's periphery this step. Th1 influence stays in the lymph node.
    std::vector<EffectorTCell> responses;
    std::vector<PeerEffectorMessage> outbound;
};

// Migration: decide who responds here and which effector copies travel.
// Every dispatched effector reaches min(clones, degree) distinct neighbors,
// drawn uniformly without replacement.
inline MigrationPlan plan_migration(const EffectorMap& locals,
                                    const PeerEffectorMap& peers,
                                    std::span<const HostId> neighbors,
                                    Substream& rng, HostId self,
                                    StepIndex step) {
    MigrationPlan plan;

    for (const auto& [key, eff] : locals)
        if (eff.clones > 0 && eff.cell_type != CellType::Th1)
            plan.responses.push_back(eff);
    for (const auto& [key, eff] : peers)
        if (eff.clones > 0 && eff.cell_type != CellType::Th1)
            plan.responses.push_back(eff);

    // Dispatch set: surviving peer effectors plus copies of local effectors
    // that have no same-(antigen, type) peer counterpart.
    PeerEffectorMap dispatch = peers;
    for (const auto& [key, eff] : locals)
        if (eff.clones > 0 && !dispatch.contains(key)) dispatch.emplace(key, eff);

    if (neighbors.empty()) return plan;

    const int active_responses = static_cast<int>(plan.responses.size());
    for (const auto& [key, eff] : dispatch) {
        if (eff.clones <= 0) continue;
        const std::size_t fan =
            std::min<std::size_t>(static_cast<std::size_t>(eff.clones),
                                  neighbors.size());
        const std::vector<HostId> targets =
            rng.sample_without_replacement(neighbors, fan);
        for (HostId target : targets) {
            PeerEffectorMessage msg;
            msg.effector = eff;
            msg.effector.peer_source = self;
            msg.sender = self;
            msg.receiver = target;
            msg.sender_active_responses = active_responses;
            msg.sent_at = step;
            plan.outbound.push_back(std::move(msg));
        }
    }
    return plan;
}

} // namespace cardinal
