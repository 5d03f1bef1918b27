#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "cardinal/config.hpp"
#include "cardinal/metrics.hpp"
#include "cardinal/world.hpp"

namespace cardinal {

// Thresholds for the containment check: the defended arm must at least
// halve the median peak infected fraction, hold a 0.7 per-seed ratio in 80%
// of seeds, and the undefended baseline must actually saturate.
struct CompareCriteria {
    double median_ratio_max = 0.5;
    double per_seed_ratio_max = 0.7;
    double per_seed_pass_fraction = 0.8;
    double baseline_saturation_min = 0.95;
};

struct SeedComparison {
    std::uint64_t seed = 0;
    double defended_peak = 0.0;
    double defended_final = 0.0;
    double baseline_peak = 0.0;
    double baseline_final = 0.0;
    double ratio = 0.0;
    long long defended_false_positives = 0;
    long long baseline_false_positives = 0;
};

enum class CompareStatus { Ok, CriterionFailed, NoOutbreak };

struct CompareReport {
    CompareStatus status = CompareStatus::Ok;
    std::vector<SeedComparison> per_seed;
    double median_defended_peak = 0.0;
    double median_defended_final = 0.0;
    double median_baseline_peak = 0.0;
    double median_baseline_final = 0.0;
    double median_ratio = 0.0;
    int seeds_within_ratio = 0;
    CompareCriteria criteria;
};

inline double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

// Peak/final infected fraction over all worm antigens of one run.
inline double worst_peak(const RunSummary& summary) {
    double peak = 0.0;
    for (const auto& [antigen, frac] : summary.peak_infected_fraction)
        peak = std::max(peak, frac);
    return peak;
}

inline double worst_final(const RunSummary& summary) {
    double final_frac = 0.0;
    for (const auto& [antigen, frac] : summary.final_infected_fraction)
        final_frac = std::max(final_frac, frac);
    return final_frac;
}

// Run each seed with and without the defense and evaluate the containment
// criterion. Seeds with no outbreak in either arm report NoOutbreak.
inline CompareReport compare_runs(const RunConfig& config,
                                  const std::vector<std::uint64_t>& seeds,
                                  CompareCriteria criteria = {}) {
    if (seeds.empty())
        throw std::invalid_argument("compare_runs: need at least one seed");

    CompareReport report;
    report.criteria = criteria;
    if (config.worms.empty() || config.initial_infections.empty()) {
        report.status = CompareStatus::NoOutbreak;
        return report;
    }

    RunConfig defended = config;
    defended.cardinal_enabled = true;
    RunConfig baseline = config;
    baseline.cardinal_enabled = false;

    std::vector<double> ratios, defended_peaks, defended_finals,
        baseline_peaks, baseline_finals;
    for (std::uint64_t seed : seeds) {
        const RunResult d = run(defended, seed);
        const RunResult b = run(baseline, seed);
        SeedComparison c;
        c.seed = seed;
        c.defended_peak = worst_peak(d.summary);
        c.defended_final = worst_final(d.summary);
        c.baseline_peak = worst_peak(b.summary);
        c.baseline_final = worst_final(b.summary);
        c.ratio = c.baseline_peak > 0.0 ? c.defended_peak / c.baseline_peak
                                        : 0.0;
        c.defended_false_positives = d.summary.false_positive_strong_total;
        c.baseline_false_positives = b.summary.false_positive_strong_total;
        report.per_seed.push_back(c);
        ratios.push_back(c.ratio);
        defended_peaks.push_back(c.defended_peak);
        defended_finals.push_back(c.defended_final);
        baseline_peaks.push_back(c.baseline_peak);
        baseline_finals.push_back(c.baseline_final);
        if (c.ratio <= criteria.per_seed_ratio_max)
            ++report.seeds_within_ratio;
    }

    report.median_defended_peak = median_of(defended_peaks);
    report.median_defended_final = median_of(defended_finals);
    report.median_baseline_peak = median_of(baseline_peaks);
    report.median_baseline_final = median_of(baseline_finals);
    report.median_ratio = median_of(ratios);

    if (report.median_baseline_peak <= 0.0) {
        report.status = CompareStatus::NoOutbreak;
        return report;
    }

    const int needed = static_cast<int>(
        std::ceil(criteria.per_seed_pass_fraction *
                  static_cast<double>(seeds.size())));
    const bool ok =
        report.median_defended_peak <=
            criteria.median_ratio_max * report.median_baseline_peak &&
        report.seeds_within_ratio >= needed &&
        report.median_baseline_final >= criteria.baseline_saturation_min;
    report.status = ok ? CompareStatus::Ok : CompareStatus::CriterionFailed;
    return report;
}

inline nlohmann::ordered_json compare_to_json(const CompareReport& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = "cardinal.compare.v1";
    switch (r.status) {
        case CompareStatus::Ok: j["status"] = "ok"; break;
        case CompareStatus::CriterionFailed: j["status"] = "criterion_failed";
            break;
        case CompareStatus::NoOutbreak: j["status"] = "no_outbreak"; break;
    }
    j["median_defended_peak"] = r.median_defended_peak;
    j["median_defended_final"] = r.median_defended_final;
    j["median_baseline_peak"] = r.median_baseline_peak;
    j["median_baseline_final"] = r.median_baseline_final;
    j["median_ratio"] = r.median_ratio;
    j["seeds_within_ratio"] = r.seeds_within_ratio;
    j["per_seed"] = nlohmann::ordered_json::array();
    for (const SeedComparison& c : r.per_seed) {
        nlohmann::ordered_json row;
        row["seed"] = c.seed;
        row["defended_peak"] = c.defended_peak;
        row["defended_final"] = c.defended_final;
        row["baseline_peak"] = c.baseline_peak;
        row["baseline_final"] = c.baseline_final;
        row["ratio"] = c.ratio;
        row["defended_false_positives"] = c.defended_false_positives;
        row["baseline_false_positives"] = c.baseline_false_positives;
        j["per_seed"].push_back(std::move(row));
    }
    return j;
}

} // namespace cardinal
