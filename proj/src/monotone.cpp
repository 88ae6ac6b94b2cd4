#include "monolab/monotone.hpp"

#include <algorithm>
#include <cmath>

namespace monolab {

namespace {

// energy densities and per-shell sums of a pair, built once per scan
struct PairSums {
    std::shared_ptr<const BallGrid> grid;
    ShellSums plus;
    ShellSums minus;

    PairSums(const ModelMetric& model, const Pair& pair)
        : grid(pair.u_plus.grid),
          plus(*pair.u_plus.grid, model,
               gradient_energy_masked(model, pair.u_plus, pair.mask_plus).v),
          minus(*pair.u_minus.grid, model,
                gradient_energy_masked(model, pair.u_minus, pair.mask_minus).v) {}
};

std::vector<double> weight_vector(const BallGrid& g, WeightKind kind, const CorrectorField* F) {
    if (kind == WeightKind::distance_power) return radial_power_weights(g, 2.0 - g.n);
    if (!F) throw config_error("corrector weight requested without a corrector");
    return F->profile;
}

std::vector<double> snap_radii(const BallGrid& g, const std::vector<double>& radii) {
    std::vector<int> shells;
    for (double r : radii) {
        if (r <= 0.0) throw domain_error("scan radius must be positive");
        int k = g.cut_shell(r);
        if (k >= 4) shells.push_back(k); // r >= 4h: below that the energies carry O(1) error
    }
    std::sort(shells.begin(), shells.end());
    shells.erase(std::unique(shells.begin(), shells.end()), shells.end());
    if (shells.empty()) throw config_error("no usable scan radii (need r >= 4h)");
    std::vector<double> out;
    for (int k : shells) out.push_back(g.shell_r[k - 1]);
    return out;
}

} // namespace

std::pair<double, double> energies(const ModelMetric& model, const Pair& pair, double r,
                                   WeightKind weight, const CorrectorField* F) {
    const BallGrid& g = *pair.u_plus.grid;
    if (r > g.R * (1.0 + 1e-9)) throw domain_error("energies: radius exceeds grid");
    PairSums sums(model, pair);
    auto w = weight_vector(g, weight, F);
    int k = g.cut_shell(r);
    return {sums.plus.cumulative(k, w), sums.minus.cumulative(k, w)};
}

std::pair<double, double> surface_energies(const ModelMetric& model, const Pair& pair, double r,
                                           WeightKind weight, const CorrectorField* F) {
    const BallGrid& g = *pair.u_plus.grid;
    PairSums sums(model, pair);
    auto w = weight_vector(g, weight, F);
    int k = g.snap_shell(r);
    return {sums.plus.sphere(k, w), sums.minus.sphere(k, w)};
}

double phi(const ModelMetric& model, const Pair& pair, double r, double c0) {
    if (r <= 0.0) throw domain_error("phi: radius must be positive");
    auto [ap, am] = energies(model, pair, r, WeightKind::distance_power);
    return std::exp(c0 * r * r) * ap * am / (r * r * r * r);
}

void MonotonicityTrace::validate() const {
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1])) throw numerical_error("trace radii not increasing");
    auto check_nondec = [](const std::vector<double>& v, const char* what) {
        for (size_t i = 0; i + 1 < v.size(); ++i)
            if (v[i + 1] < v[i] - 1e-12 * std::max(1.0, std::abs(v[i])))
                throw numerical_error(std::string(what) + " not nondecreasing");
    };
    check_nondec(A_plus, "A_plus");
    check_nondec(A_minus, "A_minus");
    for (const auto* vec : {&A_plus, &A_minus, &B_plus, &B_minus, &phi, &phi_F})
        for (double x : *vec)
            if (!std::isfinite(x)) throw numerical_error("trace entry not finite");
}

MonotonicityTrace phi_scan(const ModelMetric& model, const Pair& pair,
                           const std::vector<double>& radii, double c0) {
    const BallGrid& g = *pair.u_plus.grid;
    MonotonicityTrace tr;
    tr.c0 = c0;
    tr.t = model.rescale_factor();
    tr.radii = snap_radii(g, radii);
    double h = g.h();
    tr.tol_mono = 3.0 * h * h + 1e-9;
    tr.verdict_applicable = pair.cls == PairClass::subharmonic;

    PairSums sums(model, pair);
    CorrectorField F = build_corrector(model, pair.u_plus.grid);
    auto w_pow = radial_power_weights(g, 2.0 - g.n);
    const auto& w_F = F.profile;

    double runmax = -HUGE_VAL;
    tr.verdict = true;
    for (double r : tr.radii) {
        int k = g.cut_shell(r);
        double ap = sums.plus.cumulative(k, w_pow);
        double am = sums.minus.cumulative(k, w_pow);
        double bp = sums.plus.sphere(k, w_pow);
        double bm = sums.minus.sphere(k, w_pow);
        double afp = sums.plus.cumulative(k, w_F);
        double afm = sums.minus.cumulative(k, w_F);
        double r4 = r * r * r * r;
        double ph = std::exp(c0 * r * r) * ap * am / r4;
        double phF = std::exp(c0 * r * r) * afp * afm / r4;

        tr.A_plus.push_back(ap);
        tr.A_minus.push_back(am);
        tr.B_plus.push_back(bp);
        tr.B_minus.push_back(bm);
        tr.AF_plus.push_back(afp);
        tr.AF_minus.push_back(afm);
        tr.phi.push_back(ph);
        tr.phi_F.push_back(phF);

        bool ok = ph >= runmax * (1.0 - tr.tol_mono) - 1e-300;
        tr.step_ok.push_back(ok ? 1 : 0);
        if (!ok) tr.verdict = false;
        runmax = std::max(runmax, ph);
    }
    tr.validate();
    return tr;
}

CalibrationResult calibrate_c0(const ModelMetric& model, const std::vector<Pair>& family,
                               const std::vector<double>& radii) {
    if (family.empty()) throw config_error("calibrate_c0: empty pair family");
    double L = model.lambda();
    std::vector<double> grid_c0 = {0.0};
    if (L > 0.0)
        grid_c0 = {0.0, L / 4.0, L / 2.0, L, 2.0 * L, 4.0 * L, 8.0 * L};

    // base traces at c0 = 0; other c0 values only reweight phi by e^{c0 r^2}
    std::vector<MonotonicityTrace> base;
    for (const Pair& p : family) base.push_back(phi_scan(model, p, radii, 0.0));

    CalibrationResult res;
    res.grid_tried = grid_c0;
    for (double c0 : grid_c0) {
        bool all_ok = true;
        for (const auto& tr : base) {
            double runmax = -HUGE_VAL;
            for (size_t i = 0; i < tr.radii.size(); ++i) {
                double ph = tr.phi[i] * std::exp(c0 * tr.radii[i] * tr.radii[i]);
                if (ph < runmax * (1.0 - tr.tol_mono)) {
                    all_ok = false;
                    break;
                }
                runmax = std::max(runmax, ph);
            }
            if (!all_ok) break;
        }
        if (all_ok) {
            res.found = true;
            res.c0 = c0;
            break;
        }
        res.largest_failing = c0;
    }
    if (res.found) {
        for (const Pair& p : family) res.traces.push_back(phi_scan(model, p, radii, res.c0));
    }
    return res;
}

AlmostMonoReport almost_mono_bound(const ModelMetric& model, const Pair& pair, double delta) {
    const BallGrid& g = *pair.u_plus.grid;
    if (delta > g.R * (1.0 + 1e-9)) throw domain_error("almost_mono_bound: delta exceeds grid");

    PairSums sums(model, pair);
    auto w = radial_power_weights(g, 2.0 - g.n);
    int k_delta = g.cut_shell(delta);

    AlmostMonoReport rep;
    for (int k = 4; k <= k_delta; ++k) {
        double r = g.shell_r[k - 1];
        double ph = sums.plus.cumulative(k, w) * sums.minus.cumulative(k, w) / std::pow(r, 4);
        if (ph > rep.sup_phi) {
            rep.sup_phi = ph;
            rep.sup_phi_radius = r;
        }
    }
    double ap = sums.plus.cumulative(k_delta, w);
    double am = sums.minus.cumulative(k_delta, w);
    rep.budget = (1.0 + ap + am) * (1.0 + ap + am);
    rep.C_fitted = rep.sup_phi / rep.budget;
    return rep;
}

DyadicTrace dyadic_trace(const ModelMetric& model, const Pair& pair, int k_max, double C2) {
    const BallGrid& g = *pair.u_plus.grid;
    if (k_max < 0) throw config_error("dyadic: k_max must be nonnegative");
    int finest = g.cut_shell(g.R * std::pow(4.0, -(k_max + 1)));
    if (finest < 8)
        throw config_error("dyadic: insufficient resolution (finest ball has fewer than 8 shells)");

    PairSums sums(model, pair);
    auto w = radial_power_weights(g, 2.0 - g.n);
    CorrectorField F = build_corrector(model, pair.u_plus.grid);

    DyadicTrace tr;
    for (int k = 0; k <= k_max + 1; ++k) {
        double r = g.R * std::pow(4.0, -k);
        int shell = g.cut_shell(r);
        double ap = sums.plus.cumulative(shell, w);
        double am = sums.minus.cumulative(shell, w);
        tr.k.push_back(k);
        tr.radii.push_back(r);
        tr.A_plus.push_back(ap);
        tr.A_minus.push_back(am);
        double fourk = std::pow(4.0, 4.0 * k);
        tr.b_plus.push_back(fourk * ap);
        tr.b_minus.push_back(fourk * am);
        tr.delta_k.push_back(C2 / std::sqrt(std::max(1e-300, fourk * ap)) +
                             C2 / std::sqrt(std::max(1e-300, fourk * am)) +
                             C2 * std::pow(4.0, -2.0 * k));
        tr.B_plus.push_back(sums.plus.sphere(shell, w));
        tr.B_minus.push_back(sums.minus.sphere(shell, w));
        double r4 = r * r * r * r;
        tr.phi.push_back(ap * am / r4);
        tr.phi_F.push_back(sums.plus.cumulative(shell, F.profile) *
                           sums.minus.cumulative(shell, F.profile) / r4);
    }

    tr.product_verdict = true;
    const double slack = 1e-9;
    for (int k = 0; k <= k_max; ++k) {
        double lhs = 256.0 * tr.A_plus[k + 1] * tr.A_minus[k + 1];
        double rhs = tr.A_plus[k] * tr.A_minus[k] * (1.0 + tr.delta_k[k]);
        bool ok = lhs <= rhs * (1.0 + slack) + 1e-300;
        tr.product_ok.push_back(ok ? 1 : 0);
        if (!ok) tr.product_verdict = false;
    }

    // decay dichotomy: where both b_k are large and A_+ fails to decay
    // geometrically, A_- must
    double worst_ratio = 0.0;
    double thr = std::max(C2, 1.0);
    for (int k = 0; k <= k_max; ++k) {
        if (tr.b_plus[k] < thr || tr.b_minus[k] < thr) continue;
        if (256.0 * tr.A_plus[k + 1] < tr.A_plus[k]) continue;
        ++tr.dichotomy_triggers;
        if (tr.A_minus[k] > 1e-300)
            worst_ratio = std::max(worst_ratio, tr.A_minus[k + 1] / tr.A_minus[k]);
    }
    tr.fitted_eps = tr.dichotomy_triggers > 0 ? 1.0 - worst_ratio : 0.0;
    tr.dichotomy_verdict = tr.dichotomy_triggers == 0 || tr.fitted_eps > 0.0;
    return tr;
}

DiffIneqReport diff_inequality_check(const MonotonicityTrace& trace, double C2, double C3,
                                     double t, double C1) {
    DiffIneqReport rep;
    const auto& r = trace.radii;
    if (r.size() < 3) throw config_error("diff_inequality_check: need at least 3 trace radii");

    for (size_t i = 1; i + 1 < r.size(); ++i) {
        if (trace.AF_plus[i] < C1 || trace.AF_minus[i] < C1) continue;
        double dphi = (trace.phi_F[i + 1] - trace.phi_F[i - 1]) / (r[i + 1] - r[i - 1]);
        double rhs = -C2 *
                     (1.0 / std::sqrt(trace.AF_plus[i]) + 1.0 / std::sqrt(trace.AF_minus[i]) +
                      C3 * t * t) *
                     trace.phi_F[i];
        double margin = dphi - rhs;
        double tol = (3.0 * (r[1] - r[0]) * (r[1] - r[0]) + 1e-9) *
                     (std::abs(trace.phi_F[i]) / r[i] + 1.0);
        ++rep.applicable_radii;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -tol) rep.pass_differential = false;
    }
    if (rep.applicable_radii == 0) rep.worst_margin = 0.0;

    // integrated form between r_max/4 and r_max
    double r_max = r.back();
    size_t i_quarter = 0;
    double best = HUGE_VAL;
    for (size_t i = 0; i < r.size(); ++i) {
        double d = std::abs(r[i] - r_max / 4.0);
        if (d < best) {
            best = d;
            i_quarter = i;
        }
    }
    double delta = 1.0 / std::sqrt(std::max(1e-300, trace.AF_plus.back())) +
                   1.0 / std::sqrt(std::max(1e-300, trace.AF_minus.back())) + C3 * t * t;
    rep.integrated_lhs = trace.phi_F[i_quarter];
    rep.integrated_rhs = (1.0 + C2 * delta) * trace.phi_F.back();
    double tol = (3.0 * (r[1] - r[0]) * (r[1] - r[0]) + 1e-9) * std::abs(rep.integrated_rhs);
    rep.pass_integrated = rep.integrated_lhs <= rep.integrated_rhs + tol;
    return rep;
}

} // namespace monolab
