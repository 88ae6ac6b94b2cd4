#include "monolab/pairs.hpp"

#include <cmath>

namespace monolab {

namespace {

Pair finalize(std::shared_ptr<const BallGrid> grid, ScalarField up, ScalarField um,
              PairClass cls, std::string family, double param, Vec dir) {
    Pair p;
    p.u_plus = std::move(up);
    p.u_minus = std::move(um);
    p.cls = cls;
    p.family = std::move(family);
    p.param = param;
    p.direction = dir;
    p.mask_plus = PhaseMask::from_support(p.u_plus);
    p.mask_minus = PhaseMask::from_support(p.u_minus);
    (void)grid;
    return p;
}

} // namespace

Pair make_plane_pair(std::shared_ptr<const BallGrid> grid, const Vec& direction) {
    double nn = norm(direction);
    if (nn < 1e-14) throw config_error("plane pair: zero direction");
    Vec e = (1.0 / nn) * direction;
    if (grid->n == 2 && std::abs(e[2]) > 1e-14)
        throw config_error("plane pair: direction must be planar for n=2");
    auto up = ScalarField::sample(grid, [&](const Vec& x) { return std::max(dot(x, e), 0.0); });
    auto um = ScalarField::sample(grid, [&](const Vec& x) { return std::max(-dot(x, e), 0.0); });
    return finalize(grid, std::move(up), std::move(um), PairClass::subharmonic, "plane", 0.0, e);
}

Pair make_sector_pair(std::shared_ptr<const BallGrid> grid, double theta) {
    if (grid->n != 2) throw config_error("sector pair: n=2 only");
    if (!(theta > 0.0) || !(theta < 2.0 * M_PI)) throw config_error("sector opening out of range");
    double ap = M_PI / theta;
    double am = M_PI / (2.0 * M_PI - theta);
    auto angle_of = [](const Vec& x) {
        double phi = std::atan2(x[1], x[0]);
        if (phi < 0.0) phi += 2.0 * M_PI;
        return phi;
    };
    auto up = ScalarField::sample(grid, [&](const Vec& x) {
        double r = norm(x), phi = angle_of(x);
        if (phi <= 0.0 || phi >= theta) return 0.0;
        double s = std::sin(ap * phi);
        return s > 1e-12 ? std::pow(r, ap) * s : 0.0;
    });
    auto um = ScalarField::sample(grid, [&](const Vec& x) {
        double r = norm(x), phi = angle_of(x);
        if (phi <= theta || phi >= 2.0 * M_PI) return 0.0;
        double s = std::sin(am * (phi - theta));
        return s > 1e-12 ? std::pow(r, am) * s : 0.0;
    });
    return finalize(grid, std::move(up), std::move(um), PairClass::subharmonic, "sector", theta,
                    Vec{1, 0, 0});
}

Pair make_inhomogeneous_pair(std::shared_ptr<const BallGrid> grid, double a) {
    if (a < 0.0 || a > 1.0)
        throw config_error("inhomogeneous pair: parameter must lie in [0,1]");
    if (grid->R > 1.0 + 1e-12)
        throw config_error("inhomogeneous pair: grid radius must not exceed 1");
    auto up = ScalarField::sample(grid, [&](const Vec& x) {
        double xp = std::max(x[0], 0.0);
        return xp - 0.5 * a * xp * xp;
    });
    auto um = ScalarField::sample(grid, [&](const Vec& x) { return std::max(-x[0], 0.0); });
    PairClass cls = a == 0.0 ? PairClass::subharmonic : PairClass::delta_ge_minus_one;
    return finalize(grid, std::move(up), std::move(um), cls, "inhomogeneous", a, Vec{1, 0, 0});
}

Pair make_zero_pair(std::shared_ptr<const BallGrid> grid) {
    Pair p;
    p.u_plus = ScalarField::zeros(grid);
    p.u_minus = ScalarField::zeros(grid);
    p.cls = PairClass::subharmonic;
    p.family = "zero";
    p.mask_plus = PhaseMask::from_support(p.u_plus);
    p.mask_minus = PhaseMask::from_support(p.u_minus);
    return p;
}

namespace {

// First Dirichlet eigenvalue of the polar cap of opening theta on S^2 by
// shooting on u'' + cot(t) u' + lambda u = 0 from the regular pole.
double cap_eigenvalue_s2(double theta, int steps) {
    auto endpoint = [&](double lambda) {
        double t0 = 1e-3;
        // series start: u = 1 - (lambda/4) t^2 + b t^4
        double b = lambda * (lambda - 2.0 / 3.0) / 64.0;
        double u = 1.0 - lambda * t0 * t0 / 4.0 + b * t0 * t0 * t0 * t0;
        double v = -lambda * t0 / 2.0 + 4.0 * b * t0 * t0 * t0;
        double dt = (theta - t0) / steps;
        auto rhs = [&](double t, double uu, double vv, double& du, double& dv) {
            du = vv;
            dv = -1.0 / std::tan(t) * vv - lambda * uu;
        };
        for (int i = 0; i < steps; ++i) {
            double t = t0 + i * dt;
            double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
            rhs(t, u, v, k1u, k1v);
            rhs(t + dt / 2, u + dt / 2 * k1u, v + dt / 2 * k1v, k2u, k2v);
            rhs(t + dt / 2, u + dt / 2 * k2u, v + dt / 2 * k2v, k3u, k3v);
            rhs(t + dt, u + dt * k3u, v + dt * k3v, k4u, k4v);
            u += dt / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
            v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        }
        return u;
    };

    // bracket the first zero crossing of u(theta; lambda) in lambda
    double lo = 1e-4, hi = 0.0;
    double flo = endpoint(lo);
    double lam = lo;
    for (int i = 0; i < 200; ++i) {
        lam *= 1.4;
        double f = endpoint(lam);
        if (flo > 0.0 && f <= 0.0) {
            hi = lam;
            break;
        }
        lo = lam;
        flo = f;
        if (lam > 1e8) break;
    }
    if (hi == 0.0) throw numerical_error("cap eigenvalue: shooting failed to bracket");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (endpoint(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

CapExponent cap_exponent(int n, double theta) {
    CapExponent ce;
    ce.n = n;
    ce.theta = theta;
    if (n == 2) {
        if (!(theta > 0.0) || !(theta < 2.0 * M_PI))
            throw config_error("cap_exponent: opening out of range for n=2");
        ce.alpha = M_PI / theta;
        ce.lambda = ce.alpha * ce.alpha;
        return ce;
    }
    if (n != 3) throw config_error("cap_exponent: n must be 2 or 3");
    if (!(theta > 0.0) || !(theta < M_PI))
        throw config_error("cap_exponent: opening out of range for n=3");
    ce.lambda = cap_eigenvalue_s2(theta, 10000);
    ce.alpha = -0.5 + std::sqrt(0.25 + ce.lambda);
    return ce;
}

FHReport friedland_hayman_check(int n, double theta) {
    FHReport r;
    CapExponent cp = cap_exponent(n, theta);
    CapExponent cm = cap_exponent(n, n == 2 ? 2.0 * M_PI - theta : M_PI - theta);
    r.alpha_plus = cp.alpha;
    r.alpha_minus = cm.alpha;
    r.sum = cp.alpha + cm.alpha;
    r.pass = r.sum >= 2.0 - 1e-9;
    return r;
}

std::vector<double> fh_scan_openings(int n, int count) {
    if (count < 3) throw config_error("fh scan: count must be at least 3");
    double full = n == 2 ? 2.0 * M_PI : M_PI;
    std::vector<double> out;
    if (count % 2 == 1) {
        // uniform interior grid, symmetric partition at index (count+1)/2
        for (int k = 1; k <= count; ++k) out.push_back(full * k / (count + 1));
    } else {
        // k/(count) grid hits the midpoint exactly at k = count/2; the
        // excluded endpoint slot is replaced by one extra small opening
        out.push_back(full / (2.0 * count));
        for (int k = 1; k <= count - 1; ++k) out.push_back(full * k / count);
    }
    return out;
}

PairValidation validate_pair(const ModelMetric& model, const Pair& pair, double tol) {
    const BallGrid& g = *pair.u_plus.grid;
    PairValidation v;

    double minp = 0.0, minm = 0.0, worst_prod = 0.0, scale = 0.0;
    for (int i = 0; i < g.node_count(); ++i) {
        minp = std::min(minp, pair.u_plus.v[i]);
        minm = std::min(minm, pair.u_minus.v[i]);
        scale = std::max({scale, pair.u_plus.v[i], pair.u_minus.v[i]});
        worst_prod = std::max(worst_prod, std::abs(pair.u_plus.v[i] * pair.u_minus.v[i]));
    }
    v.nonnegative = minp >= -1e-12 && minm >= -1e-12;
    v.disjoint = worst_prod <= 1e-12 * std::max(1.0, scale * scale);
    v.worst_product = worst_prod;
    v.center_zero = std::abs(pair.center_plus) <= tol && std::abs(pair.center_minus) <= tol;

    double bound = pair.cls == PairClass::subharmonic ? 0.0 : 1.0;
    auto rp = check_superharmonic_bound(model, pair.u_plus, bound, tol, &pair.mask_plus);
    auto rm = check_superharmonic_bound(model, pair.u_minus, bound, tol, &pair.mask_minus);
    v.measured_min_lap_plus = rp.worst_value;
    v.measured_min_lap_minus = rm.worst_value;
    v.class_bound_ok = rp.pass && rm.pass;
    v.pass = v.nonnegative && v.disjoint && v.center_zero && v.class_bound_ok;
    return v;
}

} // namespace monolab
