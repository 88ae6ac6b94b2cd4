#include "monolab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace monolab {

namespace {

// f(r) = sin(s)/s resp. sinh(s)/s with s = sqrt(|kappa|) r; series for
// small s to avoid cancellation.
double profile_f(double kappa, double r) {
    if (kappa == 0.0) return 1.0;
    double s = std::sqrt(std::abs(kappa)) * r;
    if (s < 1e-4) {
        double s2 = s * s;
        double sign = kappa > 0 ? -1.0 : 1.0;
        return 1.0 + sign * s2 / 6.0 + s2 * s2 / 120.0;
    }
    return kappa > 0 ? std::sin(s) / s : std::sinh(s) / s;
}

// Direction sets used for ray-averaged quantities. Deterministic and
// grid-independent.
std::vector<Vec> ray_directions(int n) {
    std::vector<Vec> dirs;
    if (n == 2) {
        for (int j = 0; j < 16; ++j) {
            double phi = 2.0 * M_PI * j / 16.0;
            dirs.push_back({std::cos(phi), std::sin(phi), 0.0});
        }
    } else {
        // Fibonacci sphere, 32 points
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < 32; ++j) {
            double z = 1.0 - 2.0 * (j + 0.5) / 32.0;
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            dirs.push_back({rho * std::cos(ga * j), rho * std::sin(ga * j), z});
        }
    }
    return dirs;
}

} // namespace

void QuadraticPerturbation::add(int i, int j, int k, int l, double v) {
    // quarter shares keep the (i,j) and (k,l) symmetrizations idempotent
    double q = v / 4.0;
    c[i][j][k][l] += q;
    c[j][i][k][l] += q;
    c[i][j][l][k] += q;
    c[j][i][l][k] += q;
}

ModelMetric ModelMetric::euclidean(int n) {
    if (n != 2 && n != 3) throw config_error("dimension must be 2 or 3");
    ModelMetric m;
    m.n_ = n;
    m.kind_ = MetricKind::euclidean;
    m.lambda_ = 0.0;
    return m;
}

ModelMetric ModelMetric::space_form(int n, double kappa) {
    if (n != 2 && n != 3) throw config_error("dimension must be 2 or 3");
    if (kappa == 0.0) return euclidean(n);
    ModelMetric m;
    m.n_ = n;
    m.kind_ = MetricKind::space_form;
    m.kappa_ = kappa;
    m.lambda_ = std::abs(kappa);
    return m;
}

ModelMetric ModelMetric::polynomial(int n, const QuadraticPerturbation& pert, double lambda) {
    if (n != 2 && n != 3) throw config_error("dimension must be 2 or 3");
    if (lambda < 0.0) throw config_error("curvature bound must be nonnegative");
    ModelMetric m;
    m.n_ = n;
    m.kind_ = MetricKind::polynomial;
    m.pert_ = pert;
    m.lambda_ = lambda;
    return m;
}

ModelMetric ModelMetric::with_working_radius(double wr) const {
    if (wr <= 0.0) throw config_error("working radius must be positive");
    ModelMetric m = *this;
    m.wr_override_ = wr;
    return m;
}

ModelMetric ModelMetric::with_lambda(double lambda) const {
    if (lambda < 0.0) throw config_error("curvature bound must be nonnegative");
    ModelMetric m = *this;
    m.lambda_ = lambda;
    return m;
}

double ModelMetric::working_radius() const {
    double base;
    if (wr_override_)
        base = *wr_override_;
    else if (kind_ == MetricKind::euclidean)
        base = 2.0;
    else
        base = lambda_ > 0.0 ? std::min(0.8, 0.8 / std::sqrt(lambda_)) : 0.8;
    return std::min(2.0, base / t_);
}

std::string ModelMetric::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case MetricKind::euclidean: os << "euclidean"; break;
        case MetricKind::space_form: os << "space_form(kappa=" << kappa_ << ")"; break;
        case MetricKind::polynomial: os << "polynomial_perturbation"; break;
    }
    os << " n=" << n_ << " Lambda=" << lambda_;
    if (t_ != 1.0) os << " t=" << t_;
    return os.str();
}

MetricData metric_at(const ModelMetric& m, const Vec& x) {
    double wr = m.working_radius();
    double rx = norm(x);
    if (rx > wr * (1.0 + 1e-9))
        throw domain_error("metric_at: point outside working radius");

    Vec y = m.t_ * x;
    double r = norm(y);
    MetricData d;
    d.g = Mat3::identity();
    d.inv_g = Mat3::identity();
    d.sqrt_det = 1.0;

    switch (m.kind_) {
        case MetricKind::euclidean:
            return d;
        case MetricKind::space_form: {
            if (r < 1e-300) return d;
            double f = profile_f(m.kappa_, r);
            double f2 = f * f;
            Vec u = (1.0 / r) * y;
            for (int i = 0; i < m.n_; ++i)
                for (int j = 0; j < m.n_; ++j) {
                    double pr = u[i] * u[j];
                    double pt = (i == j ? 1.0 : 0.0) - pr;
                    d.g.m[i][j] = pr + f2 * pt;
                    d.inv_g.m[i][j] = pr + pt / f2;
                }
            d.sqrt_det = std::pow(f, m.n_ - 1);
            return d;
        }
        case MetricKind::polynomial: {
            for (int i = 0; i < m.n_; ++i)
                for (int j = 0; j < m.n_; ++j) {
                    double h = 0.0;
                    for (int k = 0; k < m.n_; ++k)
                        for (int l = 0; l < m.n_; ++l) h += m.pert_.c[i][j][k][l] * y[k] * y[l];
                    d.g.m[i][j] = (i == j ? 1.0 : 0.0) + h;
                }
            double det = det_n(d.g, m.n_);
            auto ev = sym_eigenvalues(d.g, m.n_);
            if (det <= 0.0 || ev[0] <= 0.0)
                throw numerical_error("metric_at: perturbed metric not positive definite");
            d.inv_g = inverse_n(d.g, m.n_, det);
            d.sqrt_det = std::sqrt(det);
            return d;
        }
    }
    return d;
}

ModelMetric rescale(const ModelMetric& m, double t) {
    if (!(t > 0.0) || t > 1.0) throw domain_error("rescale factor must lie in (0,1]");
    ModelMetric out = m;
    out.t_ = m.t_ * t;
    return out;
}

double radial_laplacian(const ModelMetric& m, double r) {
    if (r <= 0.0) throw domain_error("radial_laplacian: r must be positive");
    double wr = m.working_radius();
    if (r > wr * (1.0 + 1e-9)) throw domain_error("radial_laplacian: r outside working radius");

    // 4th-order central difference of ln sqrt(det g) along rays
    double eta = 1e-4 * wr;
    eta = std::min(eta, r / 4.0);
    eta = std::min(eta, (wr - r) / 4.0 + 1e-12 * wr);
    if (eta < 1e-10 * wr) eta = 1e-10 * wr;

    auto dirs = ray_directions(m.dimension());
    double acc = 0.0;
    for (const Vec& u : dirs) {
        auto lnsd = [&](double s) { return std::log(metric_at(m, s * u).sqrt_det); };
        double d = (-lnsd(r + 2 * eta) + 8 * lnsd(r + eta) - 8 * lnsd(r - eta) + lnsd(r - 2 * eta)) /
                   (12.0 * eta);
        acc += d;
    }
    return (m.dimension() - 1) / r + acc / static_cast<double>(dirs.size());
}

namespace {

struct HebeySample {
    Vec point;
    double r;
    double dev;  // max |g_ij - delta_ij|
    double grad; // max |d_k g_ij|
    double eig_min, eig_max;
};

std::vector<HebeySample> hebey_samples(const ModelMetric& m, double radius, double fd_step) {
    double wr = m.working_radius();
    if (radius > wr * (1.0 + 1e-9)) throw domain_error("hebey: radius outside working radius");
    double eta = fd_step > 0.0 ? fd_step : 1e-4 * wr;

    std::vector<Vec> dirs;
    if (m.dimension() == 2) {
        for (int j = 0; j < 48; ++j) {
            double phi = 2.0 * M_PI * j / 48.0;
            dirs.push_back({std::cos(phi), std::sin(phi), 0.0});
        }
    } else {
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < 96; ++j) {
            double z = 1.0 - 2.0 * (j + 0.5) / 96.0;
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            dirs.push_back({rho * std::cos(ga * j), rho * std::sin(ga * j), z});
        }
    }

    const int n = m.dimension();
    const int n_radii = 64;
    std::vector<HebeySample> out;
    out.reserve(dirs.size() * n_radii);
    double r_max = std::min(radius, wr - 2.5 * eta);
    for (int jr = 1; jr <= n_radii; ++jr) {
        double r = r_max * jr / n_radii;
        for (const Vec& u : dirs) {
            Vec p = r * u;
            MetricData d = metric_at(m, p);
            HebeySample s;
            s.point = p;
            s.r = r;
            s.dev = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    s.dev = std::max(s.dev, std::abs(d.g.m[i][j] - (i == j ? 1.0 : 0.0)));
            auto ev = sym_eigenvalues(d.g, n);
            s.eig_min = ev[0];
            s.eig_max = ev[n - 1];
            s.grad = 0.0;
            for (int k = 0; k < n; ++k) {
                Vec e{0, 0, 0};
                e[k] = 1.0;
                MetricData gp2 = metric_at(m, p + 2 * eta * e);
                MetricData gp1 = metric_at(m, p + eta * e);
                MetricData gm1 = metric_at(m, p - eta * e);
                MetricData gm2 = metric_at(m, p - 2 * eta * e);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double der = (-gp2.g.m[i][j] + 8 * gp1.g.m[i][j] - 8 * gm1.g.m[i][j] +
                                      gm2.g.m[i][j]) /
                                     (12.0 * eta);
                        s.grad = std::max(s.grad, std::abs(der));
                    }
            }
            out.push_back(s);
        }
    }
    return out;
}

} // namespace

HebeyReport hebey_verify(const ModelMetric& m, double radius, double K, double fd_step) {
    if (K < 0.0) throw domain_error("hebey_verify: K must be nonnegative");
    auto samples = hebey_samples(m, radius, fd_step);

    HebeyReport rep;
    rep.eig_ok = rep.dev_ok = rep.grad_ok = true;
    rep.min_eig = 1.0;
    rep.max_eig = 1.0;
    double fit_dev = 0.0, fit_grad = 0.0;
    double worst_excess = -1.0;
    const double abs_tol = 1e-12;

    for (const auto& s : samples) {
        rep.min_eig = std::min(rep.min_eig, s.eig_min);
        rep.max_eig = std::max(rep.max_eig, s.eig_max);
        if (s.eig_min < 0.25 - abs_tol || s.eig_max > 4.0 + abs_tol) rep.eig_ok = false;

        double dev_cap = K * s.r * s.r;
        double grad_cap = 2.0 * K * s.r;
        if (s.dev > dev_cap + abs_tol) rep.dev_ok = false;
        if (s.grad > grad_cap + abs_tol) rep.grad_ok = false;

        double ratio = 0.0;
        if (s.dev > abs_tol) ratio = std::max(ratio, dev_cap > 0 ? s.dev / dev_cap : HUGE_VAL);
        if (s.grad > abs_tol) ratio = std::max(ratio, grad_cap > 0 ? s.grad / grad_cap : HUGE_VAL);
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);

        double excess = std::max(s.dev - dev_cap, s.grad - grad_cap);
        if (excess > worst_excess) {
            worst_excess = excess;
            rep.worst_point = s.point;
        }

        fit_dev = std::max(fit_dev, s.dev / (s.r * s.r));
        fit_grad = std::max(fit_grad, s.grad / s.r);
    }
    rep.fitted_K = std::max(fit_dev, fit_grad / 2.0);
    rep.pass = rep.eig_ok && rep.dev_ok && rep.grad_ok;
    return rep;
}

double hebey_fit_K(const ModelMetric& m, double radius, double fd_step) {
    return hebey_verify(m, radius, 0.0, fd_step).fitted_K;
}

} // namespace monolab
