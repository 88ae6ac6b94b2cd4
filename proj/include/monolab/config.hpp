#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monolab/ballgrid.hpp"

namespace monolab {

enum class ExperimentKind { scan, bound, dyadic, fh, solve, hebey, calibrate };

// Flat key = value experiment description. Unknown keys and out-of-range
// values are rejected with line numbers.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::scan;

    // metric
    int n = 2;
    std::string metric = "euclidean"; // euclidean | sphere | hyperbolic | perturbation
    double kappa = 0.0;
    std::optional<double> lambda;
    std::optional<double> working_radius;
    double rescale_t = 1.0;
    double perturbation_eps = 0.0; // coefficient scale of the test perturbation

    // grid
    std::optional<double> grid_r;
    std::optional<int> n_r;
    std::optional<int> n_ang;   // n=2 count or n=3 product
    std::optional<int> n_polar; // n=3 explicit override
    std::optional<int> n_azim;

    // pair
    std::string pair = "plane"; // plane | sector | inhomogeneous | zero
    double dir_x = 1.0, dir_y = 0.0, dir_z = 0.0;
    double theta = M_PI / 2.0;
    double a = 0.5;

    // constants
    double c0 = 0.0;
    double C1 = 1.0, C2 = 10.0, C3 = 10.0;
    int k_max = 3;
    std::optional<double> delta;

    // scan radii
    std::optional<double> r_min, r_max;
    int r_count = 24;

    // fh
    int fh_count = 0; // 0: single opening check at theta
    double fh_theta = M_PI;

    // solve
    double h_x = 1.0, h_y = 0.0, h_z = 0.0, h_const = 0.0;
    double f1 = 0.0, f2 = 0.0;
    double solver_tol = 1e-9;
    long long max_sweeps = 400000;
    int max_outer = 60;
    std::optional<double> lipschitz_k;
    std::string flux_g = "diff"; // diff | prod1 | none

    // hebey
    std::optional<double> hebey_radius;
    std::optional<double> hebey_K; // absent: fit
    std::optional<double> fd_step;

    unsigned seed = 1;
    std::string out; // empty: resolved by the CLI (env var, then "out")
    bool svg = false;

    std::map<std::string, std::string> raw; // echoed into the report

    ModelMetric make_model() const;
    std::shared_ptr<const BallGrid> make_grid(const ModelMetric& model,
                                              int resolution_scale = 1) const;
    std::string kind_name() const;
};

// Parses the documented flat key-value format. Throws config_error whose
// message lists every problem with its line number.
ExperimentConfig parse_config(const std::string& text);

// Non-throwing variant: returns the error list (empty on success).
std::vector<std::string> parse_config_checked(const std::string& text, ExperimentConfig& out);

ExperimentConfig parse_config_file(const std::string& path);

} // namespace monolab
