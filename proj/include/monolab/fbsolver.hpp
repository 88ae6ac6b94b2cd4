#pragma once
#include <functional>

#include "monolab/pairs.hpp"

namespace monolab {

struct SolverOptions {
    double rel_tol = 1e-9;    // inner relaxation residual, relative to data scale
    long long max_sweeps = 400000;
    int max_outer = 60;
    double omega = 1.5;       // over-relaxation factor, red-black ordering
};

struct TwoPhaseProblem {
    ModelMetric model = ModelMetric::euclidean(2);
    std::shared_ptr<const BallGrid> grid;
    std::function<double(const Vec&)> h;          // Dirichlet data on the outer shell
    std::function<double(const Vec&)> f1;         // Delta_g u = f1 where u > 0
    std::function<double(const Vec&)> f2;         // Delta_g u^- = f2 where u < 0
    double f_bound = 1.0;                         // declared sup |f_i|
    SolverOptions opts;
};

struct FreeBoundarySolution {
    ScalarField u;
    double origin = 0.0;
    std::vector<int> interface_nodes;  // nodes with a sign change in the stencil
    std::vector<Vec> interface_points; // linear zero crossings along sign-change edges
    int outer_iterations = 0;
    long long sweeps = 0;
    double residual = 0.0; // max |Delta_g u - f| over interior unknowns
    bool converged = false;
    bool sign_cycle = false;
    ModelMetric model = ModelMetric::euclidean(2);
    double data_scale = 1.0;
};

// Sign-pattern fixed point: solve Delta_g u = f1 1_{u>0} - f2 1_{u<0} with
// Dirichlet data by damped red-black relaxation, iterate until the sign
// pattern repeats. A nonconvergent cycle is reported, not hidden.
FreeBoundarySolution two_phase_solve(const TwoPhaseProblem& problem);

struct LipschitzReport {
    bool vacuous = false;
    double sup_ratio = 0.0;
    int argmax_node = -1;
    double dist_at_argmax = 0.0;
};

// sup |u(x)| / dist(x, F(u)) over nodes of B_K with metric-corrected
// coordinate distance to the interface crossings in [5h, R/4].
LipschitzReport lipschitz_ratio(const FreeBoundarySolution& sol, double K);

struct FluxSample {
    int node = -1;
    double grad_plus = 0.0;  // |grad_g u^+| one-sided
    double grad_minus = 0.0; // |grad_g u^-| one-sided
    double G_value = 0.0;
};

// One-sided gradient magnitudes at interface nodes and the flux balance
// G(|grad u^+|, |grad u^-|); diagnostic only, the solver does not impose G.
std::vector<FluxSample> flux_balance_check(const FreeBoundarySolution& sol,
                                           const std::function<double(double, double)>& G);

// (u^+, u^-) of a converged solution as an admissible pair; f_scale divides
// the fields so the right-hand sides land in [-1, 1].
Pair solution_pair(const FreeBoundarySolution& sol, double f_scale);

} // namespace monolab
