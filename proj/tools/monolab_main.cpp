// monolab: experiment runner for the monotonicity-formula laboratory.
//
//   monolab <scan|bound|dyadic|fh|solve|hebey|calibrate>
//           --config <file-or-dir> [--out <dir>] [--jobs N]
//           [--resolution-scale k]
//
// A config directory fans out every *.cfg of the matching kind, each into
// its own output subdirectory. Exit codes: 0 all verdicts pass, 1 verdict
// failure, 2 config error, 3 numerical error, 4 nonconvergence.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "monolab/runner.hpp"

namespace fs = std::filesystem;
using namespace monolab;

namespace {

std::string resolve_out(const std::string& cli_out, const ExperimentConfig& cfg) {
    if (!cli_out.empty()) return cli_out;
    if (!cfg.out.empty()) return cfg.out;
    if (const char* env = std::getenv("MONOLAB_OUT"); env && *env) return env;
    return "out";
}

int run_one(const fs::path& cfg_path, const std::string& cli_out, int scale,
            const std::string& kind, bool nested) {
    ExperimentConfig cfg;
    try {
        cfg = parse_config_file(cfg_path.string());
    } catch (const config_error& e) {
        std::cerr << cfg_path.string() << ": " << e.what() << "\n";
        return kExitConfig;
    }
    if (cfg.kind_name() != kind) {
        std::cerr << cfg_path.string() << ": config kind '" << cfg.kind_name()
                  << "' does not match subcommand '" << kind << "'\n";
        return kExitConfig;
    }
    fs::path out = resolve_out(cli_out, cfg);
    if (nested) out /= cfg_path.stem().string();
    Report rep = run_experiment(cfg, out.string(), scale);
    {
        static std::mutex io_mutex;
        std::lock_guard<std::mutex> lk(io_mutex);
        std::cout << cfg_path.string() << ": exit " << rep.exit_code;
        if (!rep.error.empty()) std::cout << " (" << rep.error << ")";
        std::cout << "\n";
        for (const auto& v : rep.verdicts)
            std::cout << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.name << "\n";
    }
    return rep.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"monolab: monotonicity formulas for the Laplace-Beltrami operator on "
                 "geodesic balls"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int jobs = 1, scale = 1;

    const std::vector<std::string> kinds = {"scan", "bound",  "dyadic",   "fh",
                                            "solve", "hebey", "calibrate"};
    for (const auto& k : kinds) {
        auto* sub = app.add_subcommand(k, "run a '" + k + "' experiment");
        sub->add_option("--config", config_path, "config file or directory")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "parallel jobs for config directories")
            ->check(CLI::Range(1, 256));
        sub->add_option("--resolution-scale", scale,
                        "multiply radial/angular resolutions (refinement studies)")
            ->check(CLI::Range(1, 64));
    }

    CLI11_PARSE(app, argc, argv);
    std::string kind = app.get_subcommands().front()->get_name();

    fs::path cp(config_path);
    if (!fs::exists(cp)) {
        std::cerr << "config path does not exist: " << config_path << "\n";
        return kExitConfig;
    }

    if (fs::is_regular_file(cp)) return run_one(cp, out_dir, scale, kind, false);

    // directory fan-out
    std::vector<fs::path> configs;
    for (const auto& e : fs::directory_iterator(cp))
        if (e.is_regular_file() && e.path().extension() == ".cfg") configs.push_back(e.path());
    std::sort(configs.begin(), configs.end());
    if (configs.empty()) {
        std::cerr << "no .cfg files in " << config_path << "\n";
        return kExitConfig;
    }

    std::atomic<size_t> next{0};
    std::atomic<int> worst{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= configs.size()) break;
            int code = run_one(configs[i], out_dir, scale, kind, true);
            int cur = worst.load();
            while (code > cur && !worst.compare_exchange_weak(cur, code)) {
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(jobs, (int)configs.size()); ++t)
        pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return worst.load();
}
