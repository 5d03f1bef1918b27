#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace cardinal {

// Opaque exact-match token identifying a worm or benign anomaly class.
using AntigenId = std::string;
using HostId = std::uint32_t;
using StepIndex = std::uint32_t;

enum class CellType : std::uint8_t { Ctl = 0, Th1 = 1, Th2 = 2 };

inline const char* to_string(CellType t) {
    switch (t) {
        case CellType::Ctl: return "CTL";
        case CellType::Th1: return "Th1";
        case CellType::Th2: return "Th2";
    }
    return "?";
}

// One observed anomaly datum: what was seen (antigen), how bad (severity)
// and how sure the detector is (certainty), both in [0,1].
struct SymptomEvent {
    AntigenId antigen;
    double severity = 0.0;
    double certainty = 0.0;
    StepIndex emitted_at = 0;
};

// Aggregated dendritic-cell assessment for one antigen in one step:
// costim counts severe+certain evidence, il12 severe+uncertain, il4 mild.
struct DendriticCellReport {
    AntigenId antigen;
    double costim = 0.0;
    double il12 = 0.0;
    double il4 = 0.0;
    StepIndex step = 0;
};

// Per-antigen accumulator awaiting threshold crossing. Thresholds are fixed
// at creation (scaled down when the antigen is in the host's memory registry).
struct NaiveTCell {
    AntigenId tcr;
    double a_ctl = 0.0;
    double a_th1 = 0.0;
    double a_th2 = 0.0;
    double theta_ctl = 0.0;
    double theta_th1 = 0.0;
    double theta_th2 = 0.0;
    StepIndex created_at = 0;
    bool is_memory = false;
};

// Differentiated responder. The clone count doubles as the peer-polling
// budget; clones_hist keeps the last two end-of-step counts for the
// growth-rate comparison.
struct EffectorTCell {
    AntigenId antigen;
    CellType cell_type = CellType::Ctl;
    int clones = 0;
    std::optional<HostId> peer_source;  // empty = locally differentiated
    std::pair<int, int> clones_hist{0, 0};
    StepIndex created_at = 0;

    bool is_local() const { return !peer_source.has_value(); }
};

// Effector copy in flight between hosts. sender_active_responses is the
// number of responses the sender applied in the sending step.
struct PeerEffectorMessage {
    EffectorTCell effector;
    HostId sender = 0;
    HostId receiver = 0;
    int sender_active_responses = 0;
    StepIndex sent_at = 0;
};

// Aggregate peer-response counts observed one and two steps ago; the proxy
// for the worm's growth rate.
struct PeerResponseHistory {
    int r_t1 = 0;
    int r_t2 = 0;
};

enum class ResponseKind : std::uint8_t { Strong = 0, Weak = 1 };

inline const char* to_string(ResponseKind k) {
    return k == ResponseKind::Strong ? "strong" : "weak";
}

struct ResponseAction {
    ResponseKind kind = ResponseKind::Strong;
    AntigenId antigen;
    StepIndex applied_at = 0;
};

} // namespace cardinal
