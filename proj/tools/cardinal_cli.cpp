// Batch front door of the simulator: run one scenario, compare the defended
// and undefended arms over a seed range, or validate a configuration file.
//
// Exit codes: 0 success, 1 configuration error, 2 containment criterion
// failed (compare only), 3 I/O error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cardinal/cardinal.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCriterion = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write '" + path.string() + "'");
    out << data;
    if (!out) throw std::ios_base::failure("write failed for '" + path.string() + "'");
}

// "7" or "0..9"
std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) return {std::stoull(text)};
    const std::uint64_t lo = std::stoull(text.substr(0, dots));
    const std::uint64_t hi = std::stoull(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("seed range is empty");
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
}

int do_run(const std::string& config_path, std::uint64_t seed,
           const std::string& out_dir, bool trace) {
    const cardinal::RunConfig config =
        cardinal::parse_config(read_file(config_path));

    std::ostringstream trace_buf;
    cardinal::World world(config, seed);
    world.set_trace(trace ? &trace_buf : nullptr);
    for (const std::string& warning : world.warnings())
        std::cerr << "warning: " << warning << '\n';
    for (cardinal::StepIndex i = 0; i < config.horizon; ++i) world.step();

    std::ostringstream csv;
    cardinal::write_metrics_csv(csv, world.series(), config);
    std::ostringstream summary;
    cardinal::write_summary(summary, world.summary());

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "metrics.csv", csv.str());
    write_file(dir / "summary.json", summary.str());
    if (trace) write_file(dir / "trace.jsonl", trace_buf.str());

    std::cout << "wrote " << (dir / "metrics.csv").string() << " and "
              << (dir / "summary.json").string() << '\n';
    return kExitOk;
}

int do_compare(const std::string& config_path, const std::string& seed_spec,
               const std::string& out_dir) {
    const cardinal::RunConfig config =
        cardinal::parse_config(read_file(config_path));
    const std::vector<std::uint64_t> seeds = parse_seed_range(seed_spec);

    const cardinal::CompareReport report =
        cardinal::compare_runs(config, seeds);
    const nlohmann::ordered_json j = cardinal::compare_to_json(report);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "comparison.json", j.dump(2) + "\n");

    for (const cardinal::SeedComparison& c : report.per_seed)
        std::cout << "seed " << c.seed << ": defended_peak="
                  << c.defended_peak << " baseline_peak=" << c.baseline_peak
                  << " ratio=" << c.ratio << '\n';
    if (report.status == cardinal::CompareStatus::NoOutbreak) {
        std::cout << "no outbreak configured; nothing to compare\n";
        return kExitOk;
    }
    std::cout << "median ratio: " << report.median_ratio
              << "  seeds within " << report.criteria.per_seed_ratio_max
              << ": " << report.seeds_within_ratio << "/"
              << report.per_seed.size() << '\n';
    if (report.status == cardinal::CompareStatus::CriterionFailed) {
        std::cout << "containment criterion FAILED\n";
        return kExitCriterion;
    }
    std::cout << "containment criterion holds\n";
    return kExitOk;
}

int do_validate(const std::string& config_path) {
    cardinal::parse_config(read_file(config_path));
    std::cout << "ok: " << config_path << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cardinal - cooperative immune-inspired worm response simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string seed_spec = "0";
    std::uint64_t seed = 0;
    bool trace = false;

    CLI::App* cmd_run = app.add_subcommand("run", "run one scenario");
    cmd_run->add_option("--config", config_path, "scenario file")->required();
    cmd_run->add_option("--seed", seed, "random seed");
    cmd_run->add_option("--out", out_dir, "output directory")->required();
    cmd_run->add_flag("--trace", trace, "also write trace.jsonl");

    CLI::App* cmd_compare =
        app.add_subcommand("compare", "defended vs baseline over seeds");
    cmd_compare->add_option("--config", config_path, "scenario file")
        ->required();
    cmd_compare->add_option("--seeds", seed_spec, "seed or range A..B")
        ->required();
    cmd_compare->add_option("--out", out_dir, "output directory")->required();

    CLI::App* cmd_validate =
        app.add_subcommand("validate", "check a scenario file");
    cmd_validate->add_option("--config", config_path, "scenario file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return do_run(config_path, seed, out_dir, trace);
        if (cmd_compare->parsed())
            return do_compare(config_path, seed_spec, out_dir);
        return do_validate(config_path);
    } catch (const cardinal::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
