#include <cmath>

#include "monolab/fields.hpp"

namespace monolab {

namespace {

// polar-frame metric G = J^T g J for coordinates (r, phi) resp. (r, mu, phi)
struct PolarG {
    Mat3 G;
    Mat3 invG;
    double sqrtG = 0.0;
};

PolarG polar_metric(const ModelMetric& model, int n, double r, const Vec& u /*unit dir*/,
                    double mu, double phi) {
    Vec x = r * u;
    MetricData md = metric_at(model, x);
    Mat3 J;
    if (n == 2) {
        J.m[0][0] = u[0];
        J.m[1][0] = u[1];
        J.m[0][1] = -r * u[1];
        J.m[1][1] = r * u[0];
        J.m[2][2] = 1.0;
    } else {
        double s = std::sqrt(std::max(1e-300, 1.0 - mu * mu));
        double c = std::cos(phi), sn = std::sin(phi);
        // d/dr, d/dmu, d/dphi of r*(s c, s sn, mu)
        J.m[0][0] = s * c;
        J.m[1][0] = s * sn;
        J.m[2][0] = mu;
        J.m[0][1] = r * (-mu / s) * c;
        J.m[1][1] = r * (-mu / s) * sn;
        J.m[2][1] = r;
        J.m[0][2] = -r * s * sn;
        J.m[1][2] = r * s * c;
        J.m[2][2] = 0.0;
    }
    PolarG out;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double acc = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) acc += J.m[i][a] * md.g.m[i][j] * J.m[j][b];
            out.G.m[a][b] = acc;
        }
    if (n == 2) out.G.m[2][2] = 1.0;
    double det = det_n(out.G, n);
    if (det <= 0.0) throw numerical_error("polar metric degenerate");
    out.invG = inverse_n(out.G, n, det);
    out.sqrtG = std::sqrt(det);
    return out;
}

Vec dir3(double mu, double phi) {
    double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    return {s * std::cos(phi), s * std::sin(phi), mu};
}

} // namespace

// ---- least-squares gradients -------------------------------------------

std::vector<Vec> nodal_gradients(const ModelMetric& model, const ScalarField& f,
                                 const GradientOptions& opt) {
    const BallGrid& g = *f.grid;
    const int N = g.node_count();
    const int A = g.angular_count();
    const int ndirs = g.n == 2 ? 2 : 4;
    std::vector<Vec> out(N, Vec{0, 0, 0});

    auto state = [&](int idx) {
        return opt.mask ? opt.mask->state[idx] : PhaseState::inside;
    };

    for (int idx = 0; idx < N; ++idx) {
        PhaseState st = state(idx);
        if (st == PhaseState::outside) continue;
        int shell = g.shell_of(idx), a = g.angular_of(idx);
        Vec p = g.position(idx);

        Mat3 M;
        Vec rhs{0, 0, 0};
        int rows = 0;
        auto add_row = [&](const Vec& q, double val_q) {
            Vec dx = q - p;
            double dv = val_q - f.v[idx];
            for (int i = 0; i < g.n; ++i) {
                for (int j = 0; j < g.n; ++j) M.m[i][j] += dx[i] * dx[j];
                rhs[i] += dx[i] * dv;
            }
            ++rows;
        };
        auto try_neighbor = [&](int nb_idx) {
            if (nb_idx < 0) return;
            // boundary nodes fit only against the inside of the phase
            PhaseState nst = state(nb_idx);
            if (st == PhaseState::inside && nst == PhaseState::outside) return;
            if (st == PhaseState::boundary && nst != PhaseState::inside) return;
            add_row(g.position(nb_idx), f.v[nb_idx]);
        };

        if (shell < g.n_r) try_neighbor(idx + A);
        if (shell > 1)
            try_neighbor(idx - A);
        else if (opt.origin_is_zero)
            add_row(Vec{0, 0, 0}, 0.0);
        for (int d = 0; d < ndirs; ++d) {
            int nb = g.angular_neighbor(a, d);
            if (nb >= 0) try_neighbor(g.index(shell, nb));
        }

        if (rows < g.n) continue; // degenerate stencil, leave zero
        Vec grad;
        if (solve_spd_n(M, rhs, g.n, grad)) out[idx] = grad;
    }
    return out;
}

ScalarField gradient_energy(const ModelMetric& model, const ScalarField& f) {
    auto grads = nodal_gradients(model, f);
    ScalarField e = ScalarField::zeros(f.grid);
    for (int i = 0; i < f.grid->node_count(); ++i) {
        MetricData md = metric_at(model, f.grid->position(i));
        Vec gu = mat_vec(md.inv_g, grads[i]);
        e.v[i] = dot(grads[i], gu);
    }
    return e;
}

ScalarField gradient_energy_masked(const ModelMetric& model, const ScalarField& f,
                                   const PhaseMask& mask) {
    GradientOptions opt;
    opt.mask = &mask;
    opt.origin_is_zero = true;
    auto grads = nodal_gradients(model, f, opt);
    ScalarField e = ScalarField::zeros(f.grid);
    for (int i = 0; i < f.grid->node_count(); ++i) {
        if (mask.state[i] == PhaseState::outside) continue;
        MetricData md = metric_at(model, f.grid->position(i));
        Vec gu = mat_vec(md.inv_g, grads[i]);
        double val = dot(grads[i], gu);
        // boundary node: density jumps to zero across the interface, so
        // the cell average is half the one-sided value
        e.v[i] = mask.state[i] == PhaseState::boundary ? 0.5 * val : val;
    }
    return e;
}

// ---- stencil operator ----------------------------------------------------

FdOperator FdOperator::build(const ModelMetric& model, std::shared_ptr<const BallGrid> grid) {
    FdOperator op;
    op.grid_ = std::move(grid);
    const BallGrid& g = *op.grid_;
    op.n_ = g.n;
    const int N = g.node_count();
    const int A = g.angular_count();
    const double h = g.h();
    for (auto& c : op.c_) c.assign(N, 0.0);
    op.diag_.assign(N, 0.0);
    op.origin_raw_.assign(A, 0.0);
    op.sqrtG_.assign(N, 1.0);
    op.has_cross_ = !model.radially_symmetric();
    if (op.has_cross_)
        for (auto& w : op.w_cross_) w.assign(N, 0.0);

    const double dphi = 2.0 * M_PI / (g.n == 2 ? g.n_ang : g.n_azim);

    for (int i = 1; i <= g.n_r; ++i) {
        double r = g.shell_r[i - 1];
        for (int a = 0; a < A; ++a) {
            int idx = g.index(i, a);
            double mu = 0.0, phi = 0.0;
            Vec u = g.unit_dir[a];
            int p = 0, q = a;
            if (g.n == 3) {
                p = a / g.n_azim;
                q = a % g.n_azim;
                mu = g.mu[p];
                phi = dphi * q;
            } else {
                phi = dphi * a;
            }
            PolarG at_node = polar_metric(model, g.n, r, u, mu, phi);
            double sG = at_node.sqrtG;
            op.sqrtG_[idx] = sG;

            // radial fluxes at r +- h/2
            if (i < g.n_r) {
                PolarG hp = polar_metric(model, g.n, r + h / 2.0, u, mu, phi);
                op.c_[0][idx] = hp.sqrtG * hp.invG.m[0][0] / (h * h * sG);
            }
            {
                PolarG hm = polar_metric(model, g.n, r - h / 2.0, u, mu, phi);
                op.c_[1][idx] = hm.sqrtG * hm.invG.m[0][0] / (h * h * sG);
                if (i == 1) op.origin_raw_[a] = hm.sqrtG * hm.invG.m[0][0];
            }

            if (g.n == 2) {
                PolarG ap = polar_metric(model, 2, r, dir3(0, phi + dphi / 2.0), 0, phi + dphi / 2.0);
                PolarG am = polar_metric(model, 2, r, dir3(0, phi - dphi / 2.0), 0, phi - dphi / 2.0);
                // dir3 with mu=0 gives the planar unit vector
                op.c_[2][idx] = ap.sqrtG * ap.invG.m[1][1] / (dphi * dphi * sG);
                op.c_[3][idx] = am.sqrtG * am.invG.m[1][1] / (dphi * dphi * sG);
            } else {
                // mu direction, nonuniform GL nodes with zero-flux pole closure
                double mu_lo = p > 0 ? 0.5 * (g.mu[p - 1] + mu) : -1.0;
                double mu_hi = p + 1 < g.n_polar ? 0.5 * (g.mu[p + 1] + mu) : 1.0;
                double cell = mu_hi - mu_lo;
                if (p + 1 < g.n_polar) {
                    PolarG mp = polar_metric(model, 3, r, dir3(mu_hi, phi), mu_hi, phi);
                    op.c_[2][idx] =
                        mp.sqrtG * mp.invG.m[1][1] / ((g.mu[p + 1] - mu) * cell * sG);
                }
                if (p > 0) {
                    PolarG mm = polar_metric(model, 3, r, dir3(mu_lo, phi), mu_lo, phi);
                    op.c_[3][idx] =
                        mm.sqrtG * mm.invG.m[1][1] / ((mu - g.mu[p - 1]) * cell * sG);
                }
                PolarG pp = polar_metric(model, 3, r, dir3(mu, phi + dphi / 2.0), mu,
                                         phi + dphi / 2.0);
                PolarG pm = polar_metric(model, 3, r, dir3(mu, phi - dphi / 2.0), mu,
                                         phi - dphi / 2.0);
                op.c_[4][idx] = pp.sqrtG * pp.invG.m[2][2] / (dphi * dphi * sG);
                op.c_[5][idx] = pm.sqrtG * pm.invG.m[2][2] / (dphi * dphi * sG);
            }

            double d = 0.0;
            for (const auto& c : op.c_) d += c[idx];
            op.diag_[idx] = d;

            if (op.has_cross_) {
                // sqrtG * G^{ab} for the off-diagonal pairs, node values
                op.w_cross_[0][idx] = at_node.sqrtG * at_node.invG.m[0][1];
                if (g.n == 3) {
                    op.w_cross_[1][idx] = at_node.sqrtG * at_node.invG.m[0][2];
                    op.w_cross_[2][idx] = at_node.sqrtG * at_node.invG.m[1][2];
                }
            }
        }
    }
    return op;
}

int FdOperator::neighbor(int idx, int slot) const {
    const BallGrid& g = *grid_;
    int shell = g.shell_of(idx), a = g.angular_of(idx);
    const int A = g.angular_count();
    switch (slot) {
        case 0: return shell < g.n_r ? idx + A : -2;
        case 1: return shell > 1 ? idx - A : -1;
        default: {
            int nb = g.angular_neighbor(a, slot - 2);
            return nb >= 0 ? g.index(shell, nb) : -2;
        }
    }
}

double FdOperator::neighbor_sum(const std::vector<double>& v, int idx, double origin_value) const {
    double acc = 0.0;
    for (int s = 0; s < 6; ++s) {
        double c = c_[s][idx];
        if (c == 0.0) continue;
        int nb = neighbor(idx, s);
        if (nb == -2) continue;
        acc += c * (nb == -1 ? origin_value : v[nb]);
    }
    return acc;
}

double FdOperator::apply_at(const std::vector<double>& v, int idx, double origin_value) const {
    double val = neighbor_sum(v, idx, origin_value) - diag_[idx] * v[idx];
    if (has_cross_) val += cross_at(v, idx);
    return val;
}

double FdOperator::solve_origin(const std::vector<double>& v, double f0) const {
    const BallGrid& g = *grid_;
    const double h = g.h();
    double num = 0.0, den = 0.0, wsum = 0.0;
    for (int a = 0; a < g.angular_count(); ++a) {
        double c = origin_raw_[a] * g.ang_w[a] / h;
        num += c * v[g.index(1, a)];
        den += c;
        wsum += g.ang_w[a];
    }
    double cell = wsum * std::pow(h / 2.0, g.n) / g.n;
    return (num - f0 * cell) / den;
}

double FdOperator::cross_at(const std::vector<double>& v, int idx) const {
    const BallGrid& g = *grid_;
    int shell = g.shell_of(idx);
    if (shell < 2 || shell > g.n_r - 1) return 0.0;
    const int A = g.angular_count();
    const double h = g.h();
    const double dphi = 2.0 * M_PI / (g.n == 2 ? g.n_ang : g.n_azim);
    int a = g.angular_of(idx);

    // central angular derivative in the first angular coordinate at a node
    auto d_ang1 = [&](int node) -> double {
        int sh = g.shell_of(node);
        int an = g.angular_of(node);
        int up = g.angular_neighbor(an, 0), dn = g.angular_neighbor(an, 1);
        if (up < 0 || dn < 0) return 0.0;
        if (g.n == 2) return (v[g.index(sh, up)] - v[g.index(sh, dn)]) / (2.0 * dphi);
        int p = an / g.n_azim;
        double dmu = g.mu[p + 1] - g.mu[p - 1];
        return (v[g.index(sh, up)] - v[g.index(sh, dn)]) / dmu;
    };
    auto d_r = [&](int node) -> double {
        int sh = g.shell_of(node);
        if (sh < 2 || sh >= g.n_r) return 0.0;
        return (v[node + A] - v[node - A]) / (2.0 * h);
    };

    double sG = sqrtG_[idx];
    double acc = 0.0;
    // d_r ( W_r,ang1 * d_ang1 u ) + d_ang1 ( W_r,ang1 * d_r u )
    acc += (w_cross_[0][idx + A] * d_ang1(idx + A) - w_cross_[0][idx - A] * d_ang1(idx - A)) /
           (2.0 * h);
    {
        int up = g.angular_neighbor(a, 0), dn = g.angular_neighbor(a, 1);
        if (up >= 0 && dn >= 0) {
            int nu = g.index(shell, up), nd = g.index(shell, dn);
            double denom;
            if (g.n == 2)
                denom = 2.0 * dphi;
            else {
                int p = a / g.n_azim;
                denom = g.mu[p + 1] - g.mu[p - 1];
            }
            acc += (w_cross_[0][nu] * d_r(nu) - w_cross_[0][nd] * d_r(nd)) / denom;
        }
    }
    if (g.n == 3) {
        auto d_phi = [&](int node) -> double {
            int sh = g.shell_of(node);
            int an = g.angular_of(node);
            int up = g.angular_neighbor(an, 2), dn = g.angular_neighbor(an, 3);
            return (v[g.index(sh, up)] - v[g.index(sh, dn)]) / (2.0 * dphi);
        };
        // (r, phi) pair
        acc += (w_cross_[1][idx + A] * d_phi(idx + A) - w_cross_[1][idx - A] * d_phi(idx - A)) /
               (2.0 * h);
        {
            int up = g.angular_neighbor(a, 2), dn = g.angular_neighbor(a, 3);
            int nu = g.index(shell, up), nd = g.index(shell, dn);
            acc += (w_cross_[1][nu] * d_r(nu) - w_cross_[1][nd] * d_r(nd)) / (2.0 * dphi);
        }
        // (mu, phi) pair
        int up1 = g.angular_neighbor(a, 0), dn1 = g.angular_neighbor(a, 1);
        if (up1 >= 0 && dn1 >= 0) {
            int p = a / g.n_azim;
            double dmu = g.mu[p + 1] - g.mu[p - 1];
            int nu = g.index(shell, up1), nd = g.index(shell, dn1);
            acc += (w_cross_[2][nu] * d_phi(nu) - w_cross_[2][nd] * d_phi(nd)) / dmu;
        }
        int up2 = g.angular_neighbor(a, 2), dn2 = g.angular_neighbor(a, 3);
        {
            int nu = g.index(shell, up2), nd = g.index(shell, dn2);
            acc += (w_cross_[2][nu] * d_ang1(nu) - w_cross_[2][nd] * d_ang1(nd)) / (2.0 * dphi);
        }
    }
    return acc / sG;
}

ScalarField laplace_fd(const ModelMetric& model, const ScalarField& f, const LaplaceOptions& opt) {
    FdOperator op = FdOperator::build(model, f.grid);
    const BallGrid& g = *f.grid;
    double origin;
    if (opt.origin_value)
        origin = *opt.origin_value;
    else {
        // angular mean of the first shell (exact for affine fields)
        double acc = 0.0, wsum = 0.0;
        for (int a = 0; a < g.angular_count(); ++a) {
            acc += g.ang_w[a] * f.v[g.index(1, a)];
            wsum += g.ang_w[a];
        }
        origin = acc / wsum;
    }
    ScalarField out = ScalarField::zeros(f.grid);
    for (int i = 0; i < g.node_count(); ++i) out.v[i] = op.apply_at(f.v, i, origin);
    return out;
}

// ---- flux and bound checks ----------------------------------------------

double flux_integral(const ModelMetric& model, const ScalarField& f, double r) {
    const BallGrid& g = *f.grid;
    int k = g.snap_shell(r);
    auto grads = nodal_gradients(model, f);
    std::vector<double> dens(g.node_count(), 0.0);
    for (int a = 0; a < g.angular_count(); ++a) {
        int idx = g.index(k, a);
        MetricData md = metric_at(model, g.position(idx));
        Vec gu = mat_vec(md.inv_g, grads[idx]);
        dens[idx] = dot(gu, g.unit_dir[a]);
    }
    return sphere_integral(g, model, dens, g.shell_r[k - 1]);
}

BoundCheckReport check_superharmonic_bound(const ModelMetric& model, const ScalarField& f,
                                           double bound, double tol, const PhaseMask* mask,
                                           double r_lo, double r_hi) {
    const BallGrid& g = *f.grid;
    FdOperator op = FdOperator::build(model, f.grid);
    const int A = g.angular_count();
    const int ndirs = g.n == 2 ? 2 : 4;

    double origin = 0.0;
    if (!mask) {
        double acc = 0.0, wsum = 0.0;
        for (int a = 0; a < A; ++a) {
            acc += g.ang_w[a] * f.v[g.index(1, a)];
            wsum += g.ang_w[a];
        }
        origin = acc / wsum;
    }

    BoundCheckReport rep;
    rep.worst_value = HUGE_VAL;
    for (int idx = 0; idx < g.node_count(); ++idx) {
        int shell = g.shell_of(idx);
        if (!g.is_interior_shell(shell)) continue;
        double r = g.radius_of(idx);
        if (r < r_lo * g.R || r > r_hi * g.R) continue;
        if (mask) {
            if (mask->state[idx] != PhaseState::inside) continue;
            bool ok = mask->state[idx + A] == PhaseState::inside &&
                      mask->state[idx - A] == PhaseState::inside;
            int a = g.angular_of(idx);
            for (int d = 0; d < ndirs && ok; ++d) {
                int nb = g.angular_neighbor(a, d);
                if (nb >= 0 && mask->state[g.index(shell, nb)] != PhaseState::inside) ok = false;
            }
            if (!ok) continue;
        }
        double lap = op.apply_at(f.v, idx, origin);
        ++rep.checked_nodes;
        if (lap < rep.worst_value) {
            rep.worst_value = lap;
            rep.worst_node = idx;
        }
    }
    if (rep.checked_nodes == 0) rep.worst_value = 0.0;
    rep.pass = rep.worst_value >= -bound - tol;
    return rep;
}

} // namespace monolab
