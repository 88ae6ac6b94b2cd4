#pragma once
#include "monolab/pairs.hpp"

namespace monolab {

// Radial weight used in the two-phase energies: the singular kernel
// |x|^{2-n} or the curvature corrector F_g.
enum class WeightKind { distance_power, corrector };

// A_+(r), A_-(r): cumulative weighted Dirichlet energies of a pair.
std::pair<double, double> energies(const ModelMetric& model, const Pair& pair, double r,
                                   WeightKind weight, const CorrectorField* F = nullptr);

// B_+(r), B_-(r): weighted surface energies over the coordinate sphere.
std::pair<double, double> surface_energies(const ModelMetric& model, const Pair& pair, double r,
                                           WeightKind weight, const CorrectorField* F = nullptr);

// phi(r) = e^{c0 r^2} r^{-4} A_+(r) A_-(r) with the |x|^{2-n} weight.
double phi(const ModelMetric& model, const Pair& pair, double r, double c0);

struct MonotonicityTrace {
    std::vector<double> radii;
    std::vector<double> A_plus, A_minus;   // |x|^{2-n} weight
    std::vector<double> B_plus, B_minus;
    std::vector<double> AF_plus, AF_minus; // corrector weight
    std::vector<double> phi, phi_F;
    std::vector<int> step_ok; // per radius: phi >= running max * (1 - tol)
    double c0 = 0.0;
    double tol_mono = 0.0;
    double t = 1.0; // metric rescale factor, echoed for the diff check
    bool verdict_applicable = false;
    bool verdict = false;

    void validate() const; // strictly increasing radii, finite, A nondecreasing
};

// Evaluates phi (and phi_F) at the given radii, snapped to shells and
// restricted to r >= 4h. The monotonicity verdict compares each value
// against the running maximum so slow systematic drift cannot hide
// below the per-step tolerance tol_mono = 3 h^2 + 1e-9 (relative).
MonotonicityTrace phi_scan(const ModelMetric& model, const Pair& pair,
                           const std::vector<double>& radii, double c0);

struct CalibrationResult {
    bool found = false;
    double c0 = 0.0;
    double largest_failing = -1.0; // largest grid value that still failed, -1 if none
    std::vector<double> grid_tried;
    std::vector<MonotonicityTrace> traces; // traces at the chosen c0 (per pair)
};

// Smallest c0 on {0, L/4, L/2, L, 2L, 4L, 8L} (L = Lambda) that makes
// phi_scan pass for every pair of the family.
CalibrationResult calibrate_c0(const ModelMetric& model, const std::vector<Pair>& family,
                               const std::vector<double>& radii);

struct AlmostMonoReport {
    double sup_phi = 0.0;
    double sup_phi_radius = 0.0;
    double budget = 0.0; // (1 + A_+(delta) + A_-(delta))^2
    double C_fitted = 0.0;
};

// sup_{4h <= r <= delta} phi(r) with c0 = 0 against the almost-monotonicity
// budget; C_fitted = sup_phi / budget.
AlmostMonoReport almost_mono_bound(const ModelMetric& model, const Pair& pair, double delta);

struct DyadicTrace {
    std::vector<int> k;
    std::vector<double> radii;         // R 4^{-k}
    std::vector<double> A_plus, A_minus;
    std::vector<double> b_plus, b_minus; // 4^{4k} A
    std::vector<double> delta_k;
    std::vector<double> B_plus, B_minus;
    std::vector<double> phi, phi_F;
    std::vector<int> product_ok;  // 4^4 A_{k+1}+ A_{k+1}- <= A_k+ A_k- (1+delta_k)
    bool product_verdict = false;
    bool dichotomy_verdict = false;
    double fitted_eps = 0.0; // 1 - max A_{k+1}-/A_k- over triggered k
    int dichotomy_triggers = 0;
};

// Dyadic energies A_k over balls of radius R 4^{-k}, k = 0..k_max+1, with
// the product inequality (config constant C2 in delta_k) and the decay
// dichotomy with empirically fitted eps.
DyadicTrace dyadic_trace(const ModelMetric& model, const Pair& pair, int k_max, double C2);

struct DiffIneqReport {
    bool pass_differential = true;
    bool pass_integrated = true;
    double worst_margin = HUGE_VAL; // min over applicable radii of phi_F' - RHS
    int applicable_radii = 0;
    double integrated_lhs = 0.0; // phi_F(r_max/4)
    double integrated_rhs = 0.0; // (1 + C2 delta) phi_F(r_max)
};

// Differential inequality phi_F'(r) >= -C2 (A_+^{-1/2} + A_-^{-1/2} + C3 t^2) phi_F
// at interior trace radii with A_\pm >= C1, plus its integrated form
// between r_max/4 and r_max.
DiffIneqReport diff_inequality_check(const MonotonicityTrace& trace, double C2, double C3,
                                     double t, double C1);

} // namespace monolab
