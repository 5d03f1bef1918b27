#pragma once

#include <set>
#include <vector>

#include "cardinal/lymph_node.hpp"
#include "cardinal/periphery.hpp"
#include "cardinal/responder.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

// Everything one monitored host owns. A host's state is only touched while
// that host is being evaluated; cross-host effects go through pending
// infections and next-step messages.
struct HostState {
    Tissue tissue;
    NaivePool naive_pool;
    MemoryRegistry memory;
    EffectorMap local_effectors;
    DefensePosture posture;
    InfectionStateMap infections;
    PeerResponseHistory history;

    // Infections that activate at the start of the next step.
    std::set<AntigenId> pending_infections;

    // Messages delivered to this host at the start of the current step.
    std::vector<PeerEffectorMessage> delivered;

    // Sum of sender_active_responses over this step's delivered messages;
    // shifted into history at end of step.
    int responses_observed = 0;
};

} // namespace cardinal
