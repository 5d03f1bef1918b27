#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cardinal/params.hpp"
#include "cardinal/types.hpp"

namespace cardinal {

// Artificial tissue: buffer of symptom events emitted during the current
// step, cleared on read.
struct Tissue {
    std::vector<SymptomEvent> buffer;
};

inline std::vector<SymptomEvent> collect_tissue(Tissue& tissue) {
    std::vector<SymptomEvent> out;
    out.swap(tissue.buffer);
    return out;
}

// Dendritic-cell assessment: classify each event into exactly one channel
// and aggregate per antigen. Mild events feed il4 regardless of certainty.
inline std::vector<DendriticCellReport> assess_events(
    const std::vector<SymptomEvent>& events, const AssessmentParams& params) {
    std::vector<DendriticCellReport> reports;
    if (events.empty()) return reports;

    const StepIndex step = events.front().emitted_at;
    std::map<AntigenId, DendriticCellReport> acc;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const SymptomEvent& ev = events[i];
        if (ev.severity < 0.0 || ev.severity > 1.0 || ev.certainty < 0.0 ||
            ev.certainty > 1.0) {
            throw std::invalid_argument(
                "assess_events: event " + std::to_string(i) + " (antigen '" +
                ev.antigen + "') has severity/certainty outside [0,1]");
        }
        if (ev.antigen.empty())
            throw std::invalid_argument("assess_events: event " +
                                        std::to_string(i) +
                                        " has an empty antigen token");
        if (ev.emitted_at != step)
            throw std::invalid_argument(
                "assess_events: event " + std::to_string(i) +
                " carries a different step index than the batch");

        DendriticCellReport& r = acc[ev.antigen];
        r.antigen = ev.antigen;
        r.step = step;
        if (ev.severity >= params.severity_hi) {
            if (ev.certainty >= params.certainty_hi)
                r.costim += params.w_costim;
            else
                r.il12 += params.w_il12;
        } else {
            r.il4 += params.w_il4;
        }
    }

    reports.reserve(acc.size());
    for (auto& [antigen, report] : acc) reports.push_back(std::move(report));
    return reports;
}

} // namespace cardinal
