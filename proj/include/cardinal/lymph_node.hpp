#pragma once

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cardinal/params.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

using NaivePool = std::map<AntigenId, NaiveTCell>;

// Local effectors keyed by (antigen, type); the key discipline guarantees at
// most one entry per pair, which the self-DoS message bound relies on.
using EffectorKey = std::pair<AntigenId, CellType>;
using EffectorMap = std::map<EffectorKey, EffectorTCell>;

using MemoryRegistry = std::set<AntigenId>;

// Fetch-or-create the naive cell for an antigen. Thresholds are fixed at
// creation: scaled by memory_factor when the antigen is remembered.
inline NaiveTCell& ensure_naive(NaivePool& pool, const AntigenId& antigen,
                                StepIndex step, const MemoryRegistry& memory,
                                const DifferentiationParams& params) {
    auto it = pool.find(antigen);
    if (it != pool.end()) return it->second;

    NaiveTCell cell;
    cell.tcr = antigen;
    cell.created_at = step;
    cell.is_memory = memory.contains(antigen);
    const double f = cell.is_memory ? params.memory_factor : 1.0;
    cell.theta_ctl = params.theta_ctl * f;
    cell.theta_th1 = params.theta_th1 * f;
    cell.theta_th2 = params.theta_th2 * f;
    return pool.emplace(antigen, std::move(cell)).first->second;
}

// Accumulate one DC report into a matching naive cell. The TCR/antigen
// identity check is a hard contract; callers route reports by antigen.
inline void mature(NaiveTCell& naive, const DendriticCellReport& report) {
    if (naive.tcr != report.antigen)
        throw std::logic_error("mature: report antigen '" + report.antigen +
                               "' does not match TCR '" + naive.tcr + "'");
    naive.a_ctl += report.costim;
    naive.a_th1 += report.il12;
    naive.a_th2 += report.il4;
}

inline int clones_for(double activation, double threshold, double gain,
                      int cap) {
    const int c = static_cast<int>(std::ceil(gain * (activation - threshold)));
    return std::min(cap, c);
}

struct DifferentiationResult {
    std::vector<EffectorTCell> effectors;
    bool consumed = false;
};

// Threshold crossing is strict; one effector per exceeded type. The naive
// cell is consumed when anything is emitted and recreated on the next DC
// presentation of the antigen.
inline DifferentiationResult differentiate(const NaiveTCell& naive,
                                           const DifferentiationParams& params,
                                           StepIndex step) {
    DifferentiationResult result;
    if (step - naive.created_at < params.maturation_window) return result;

    const std::pair<double, double> checks[3] = {
        {naive.a_ctl, naive.theta_ctl},
        {naive.a_th1, naive.theta_th1},
        {naive.a_th2, naive.theta_th2},
    };
    const CellType types[3] = {CellType::Ctl, CellType::Th1, CellType::Th2};
    for (int i = 0; i < 3; ++i) {
        const auto [activation, threshold] = checks[i];
        if (activation > threshold) {
            EffectorTCell eff;
            eff.antigen = naive.tcr;
            eff.cell_type = types[i];
            eff.clones = clones_for(activation, threshold, params.clone_gain,
                                    params.clone_cap);
            eff.created_at = step;
            result.effectors.push_back(std::move(eff));
        }
    }
    result.consumed = !result.effectors.empty();
    return result;
}

// Unreinforced effectors lose clones; reinforced ones are untouched.
// Runs before differentiation so freshly created effectors are spared.
inline void decay_effectors(EffectorMap& effectors,
                            const std::set<AntigenId>& reported_antigens,
                            const DifferentiationParams& params) {
    for (auto it = effectors.begin(); it != effectors.end();) {
        EffectorTCell& eff = it->second;
        if (!reported_antigens.contains(eff.antigen)) {
            eff.clones = std::max(0, eff.clones - params.decay_per_step);
        }
        if (eff.clones <= 0)
            it = effectors.erase(it);
        else
            ++it;
    }
}

// End-of-step shift: (h1, h2) -> (h2, current clones).
inline void record_clone_history(EffectorMap& effectors) {
    for (auto& [key, eff] : effectors) {
        eff.clones_hist.first = eff.clones_hist.second;
        eff.clones_hist.second = eff.clones;
    }
}

} // namespace cardinal
