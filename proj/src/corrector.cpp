#include <cmath>
#include <random>

#include "monolab/fields.hpp"

namespace monolab {

namespace {

// angular mean of sqrt(det g) on the sphere of radius s (grid directions)
double mean_sqrt_det(const ModelMetric& model, const BallGrid& g, double s) {
    if (model.radially_symmetric()) return metric_at(model, Vec{s, 0, 0}).sqrt_det;
    double acc = 0.0, w = 0.0;
    for (int a = 0; a < g.angular_count(); ++a) {
        acc += g.ang_w[a] * metric_at(model, s * g.unit_dir[a]).sqrt_det;
        w += g.ang_w[a];
    }
    return acc / w;
}

// d/dr ln sqrt(det g) along one direction, 4th-order differences
double s_dir(const ModelMetric& model, const Vec& u, double r, double eta) {
    auto lnsd = [&](double s) { return std::log(metric_at(model, s * u).sqrt_det); };
    return (-lnsd(r + 2 * eta) + 8 * lnsd(r + eta) - 8 * lnsd(r - eta) + lnsd(r - 2 * eta)) /
           (12.0 * eta);
}

} // namespace

ScalarField CorrectorField::as_field() const {
    ScalarField f = ScalarField::zeros(grid);
    for (int i = 0; i < grid->node_count(); ++i) f.v[i] = profile[grid->shell_of(i) - 1];
    return f;
}

CorrectorField build_corrector(const ModelMetric& model, std::shared_ptr<const BallGrid> grid) {
    CorrectorField F;
    F.grid = grid;
    F.n = grid->n;
    const BallGrid& g = *grid;

    if (g.n == 2) {
        F.profile.assign(g.n_r, 1.0);
        F.f1.assign(g.n_r, 0.0);
        F.fitted_c = 0.0;
        F.fitted_e_bound = 0.0;
        return F;
    }

    // F = 1/r + E with E(r) = int_r^R (1/Gbar(s) - 1)/s^2 ds, Gbar the
    // angular mean of sqrt(det g). Then r^2 Gbar F' = -1, so the
    // direction-averaged operator annihilates F exactly.
    const int sub = 8;
    const double hh = g.h() / sub;
    std::vector<double> E(g.n_r + 1, 0.0); // E at shell radii, E[n_r] = E(R) = 0
    auto integrand = [&](double s) {
        double gb = mean_sqrt_det(model, g, s);
        return (1.0 / gb - 1.0) / (s * s);
    };
    for (int k = g.n_r; k >= 1; --k) {
        double acc = 0.0;
        double a = g.shell_r[k - 1];
        for (int j = 0; j < sub; ++j) {
            double s0 = a + j * hh, s1 = s0 + hh;
            acc += hh / 6.0 * (integrand(s0) + 4.0 * integrand(0.5 * (s0 + s1)) + integrand(s1));
        }
        E[k - 1] = E[k] + acc;
    }

    F.profile.resize(g.n_r);
    F.f1.resize(g.n_r);
    double t = model.rescale_factor();
    double c_fit = 0.0;
    for (int k = 1; k <= g.n_r; ++k) {
        double r = g.shell_r[k - 1];
        F.f1[k - 1] = E[k - 1];
        F.profile[k - 1] = 1.0 / r + E[k - 1];
        c_fit = std::max(c_fit, std::abs(E[k - 1])); // |F_1g| r^{n-3}, n = 3
        if (F.profile[k - 1] < 0.5 / r - 1e-12)
            throw numerical_error("corrector: F_g >= r^{2-n}/2 fails at r=" + std::to_string(r));
    }
    F.fitted_c = c_fit / (t * t);

    // sign check of -Delta_g F = (s_dir - d_r ln Gbar)/(r^2 Gbar) and the
    // bound |Delta_g r^{2-n}| <= const * r^{2-n}
    double eta = std::min(1e-4 * model.working_radius(), g.h() / 8.0);
    double e_bound = 0.0;
    double worst = 0.0;
    auto lnGbar_prime = [&](double r) {
        auto f = [&](double s) { return std::log(mean_sqrt_det(model, g, s)); };
        return (-f(r + 2 * eta) + 8 * f(r + eta) - 8 * f(r - eta) + f(r - 2 * eta)) / (12.0 * eta);
    };
    for (int k = 1; k <= g.n_r; ++k) {
        double r = g.shell_r[k - 1];
        if (r < 4 * eta || r > model.working_radius() - 4 * eta) continue;
        double sbar = lnGbar_prime(r);
        if (model.radially_symmetric()) {
            double s = s_dir(model, g.unit_dir[0], r, eta);
            e_bound = std::max(e_bound, std::abs(s) / r);
            worst = std::min(worst, s - sbar);
        } else {
            for (int a = 0; a < g.angular_count(); ++a) {
                double s = s_dir(model, g.unit_dir[a], r, eta);
                e_bound = std::max(e_bound, std::abs(s) / r);
                worst = std::min(worst, s - sbar);
            }
        }
    }
    F.fitted_e_bound = e_bound; // |Delta_g r^{-1}| r = |s_dir| / r
    if (worst < -1e-8)
        throw numerical_error("corrector: -Delta_g F_g >= 0 fails (worst " +
                              std::to_string(worst) + ")");
    return F;
}

// ---- weak-form checks -----------------------------------------------------

EnergyIneqReport energy_inequality_check(const ModelMetric& model, const ScalarField& u, double C,
                                         const EnergyIneqOptions& opt) {
    const BallGrid& g = *u.grid;
    double umax = 0.0, umin = 0.0;
    for (double x : u.v) {
        umax = std::max(umax, x);
        umin = std::min(umin, x);
    }
    if (umin < -1e-12) throw domain_error("energy_inequality_check: field must be nonnegative");

    PhaseMask mask = PhaseMask::from_support(u);
    double h = g.h();
    double pre_tol = 5.0 * h * h * std::max(1.0, umax / (g.R * g.R));
    auto pre = check_superharmonic_bound(model, u, 1.0, pre_tol, &mask);
    if (!pre.pass)
        throw domain_error("energy_inequality_check: Delta_g u >= -1 fails (worst " +
                           std::to_string(pre.worst_value) + ")");

    ScalarField energy = gradient_energy_masked(model, u, mask);
    ScalarField u2 = ScalarField::zeros(u.grid);
    for (int i = 0; i < g.node_count(); ++i) u2.v[i] = u.v[i] * u.v[i];

    std::mt19937 rng(opt.seed);
    std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> urad(0.25, 0.45);
    std::uniform_real_distribution<double> urho(0.12, 0.30);
    std::uniform_real_distribution<double> umu(-1.0, 1.0);

    EnergyIneqReport rep;
    rep.bumps = opt.bumps;
    rep.worst_margin = -HUGE_VAL;
    double fitted = 0.0;
    for (int b = 0; b < opt.bumps; ++b) {
        double phi = uang(rng);
        double rc = urad(rng) * g.R;
        Vec x0;
        if (g.n == 2)
            x0 = {rc * std::cos(phi), rc * std::sin(phi), 0.0};
        else {
            double m = umu(rng);
            double s = std::sqrt(1.0 - m * m);
            x0 = {rc * s * std::cos(phi), rc * s * std::sin(phi), rc * m};
        }
        double rho = std::min({urho(rng) * g.R, 0.88 * g.R - rc, rc - 3.0 * h});
        rho = std::max(rho, 0.1 * g.R);

        ScalarField bump = ScalarField::sample(u.grid, [&](const Vec& x) {
            Vec d = x - x0;
            double q = 1.0 - dot(d, d) / (rho * rho);
            return q > 0.0 ? q * q * q : 0.0;
        });
        LaplaceOptions lo;
        lo.origin_value = 0.0; // bump supports stay away from the center
        ScalarField lap_bump = laplace_fd(model, bump, lo);

        std::vector<double> lhs_d(g.node_count()), r1_d(g.node_count()), r2_d(g.node_count());
        for (int i = 0; i < g.node_count(); ++i) {
            lhs_d[i] = 2.0 * energy.v[i] * bump.v[i];
            r1_d[i] = u.v[i] * bump.v[i];
            r2_d[i] = u2.v[i] * lap_bump.v[i];
        }
        double lhs = volume_integral(g, model, lhs_d, g.R, 0.0);
        double r1 = volume_integral(g, model, r1_d, g.R, 0.0);
        double r2 = volume_integral(g, model, r2_d, g.R, 0.0);

        double margin = lhs - (C * r1 + r2);
        rep.worst_margin = std::max(rep.worst_margin, margin);
        if (r1 > 1e-14) fitted = std::max(fitted, (lhs - r2) / r1);
        double tol = 5.0 * h * h * (std::abs(lhs) + std::abs(r1) * std::max(C, 1.0) +
                                    std::abs(r2) + 1.0);
        if (margin > tol) rep.pass = false;
    }
    rep.fitted_C = fitted;
    return rep;
}

CorrectorEnergyReport corrector_energy_bound(const ModelMetric& model, const ScalarField& u,
                                             const CorrectorField& F) {
    const BallGrid& g = *u.grid;
    double umin = 0.0;
    for (double x : u.v) umin = std::min(umin, x);
    if (umin < -1e-12) throw domain_error("corrector_energy_bound: field must be nonnegative");

    PhaseMask mask = PhaseMask::from_support(u);
    ScalarField energy = gradient_energy_masked(model, u, mask);

    std::vector<double> w(g.n_r);
    for (int i = 0; i < g.n_r; ++i) w[i] = F.profile[i];
    ShellSums esums(g, model, energy.v);
    CorrectorEnergyReport rep;
    rep.lhs = esums.cumulative(g.cut_shell(g.R / 4.0), w);

    std::vector<double> u2(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) u2[i] = u.v[i] * u.v[i];
    ShellSums usums(g, model, u2);
    auto ones = unit_weights(g);
    rep.annulus_u2 =
        usums.cumulative(g.cut_shell(g.R / 2.0), ones) - usums.cumulative(g.cut_shell(g.R / 4.0), ones);
    rep.fitted_C = rep.lhs / (1.0 + rep.annulus_u2);
    return rep;
}

} // namespace monolab
