#pragma once
#include "monolab/config.hpp"

namespace monolab {

inline constexpr const char* kArtifactVersion = "monolab 0.1.0";

// exit code classes
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitNonconvergence = 4;

struct VerdictRow {
    std::string name;      // what was checked
    std::string op;        // operation the verdict traces to
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::string note;
};

struct Report {
    ExperimentConfig config;
    std::string model_desc;
    std::vector<VerdictRow> verdicts;
    std::vector<std::pair<std::string, double>> constants; // fitted values
    std::vector<std::string> files;
    double runtime_sec = 0.0;
    int exit_code = kExitOk;
    std::string error;

    bool all_pass() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

// Dispatches the experiment, writes trace CSVs / SVGs / report.txt under
// out_dir, and returns the report. Errors are captured into the report's
// exit code (config=2, numerical=3, nonconvergence=4); a failing verdict
// turns exit 0 into 1.
Report run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                      int resolution_scale = 1);

void write_report(const Report& rep, const std::string& path);

} // namespace monolab
