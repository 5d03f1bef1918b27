#pragma once

#include <string>
#include <utility>

#include "cardinal/types.hpp"

namespace cardinal {

// Dendritic-cell assessment scales. Ties classify as "high".
struct AssessmentParams {
    double severity_hi = 0.5;
    double certainty_hi = 0.7;
    double w_costim = 1.0;
    double w_il12 = 1.0;
    double w_il4 = 1.0;
};

struct DifferentiationParams {
    double theta_ctl = 5.0;
    double theta_th1 = 5.0;
    double theta_th2 = 3.0;
    StepIndex maturation_window = 3;
    double clone_gain = 1.0;
    int clone_cap = 32;
    double memory_factor = 0.5;  // 1.0 disables memory
    int decay_per_step = 1;
};

struct InteractionParams {
    int q_local = 4;
    int q_peer = 2;
    double delta_up = 0.5;
    double delta_down = 0.25;
    int suppress_step = 1;
    double th1_fraction = 0.5;
};

struct ResponderParams {
    double weak_multiplier = 0.5;
};

enum class ScanMode : std::uint8_t { RandomScan = 0, TopologyScan = 1 };

struct WormProfile {
    AntigenId antigen;
    ScanMode scan_mode = ScanMode::TopologyScan;
    int attempts_per_step = 2;
    double severity_mean = 0.8;
    double severity_jitter = 0.1;
    double certainty_base = 0.3;
    double certainty_ramp = 0.2;
    int symptoms_per_step = 2;
};

struct BenignProfile {
    AntigenId antigen;
    double event_rate = 0.01;
    std::pair<double, double> severity_range{0.05, 0.45};
    std::pair<double, double> certainty_range{0.0, 1.0};
};

} // namespace cardinal
