#include "monolab/ballgrid.hpp"

#include <cmath>

namespace monolab {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[n - 1 - i] = x; // ascending
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

std::shared_ptr<const BallGrid> BallGrid::build(int n, double R, int n_r, int n_ang) {
    if (n != 2 && n != 3) throw config_error("grid dimension must be 2 or 3");
    if (R <= 0.0) throw config_error("grid radius must be positive");
    if (n_r < 16) throw config_error("n_r must be at least 16");
    if (n_ang < 16) throw config_error("n_ang must be at least 16");
    if (n == 3) {
        // decompose the requested product count as polar x azimuthal with
        // azimuthal = 2 x polar
        int p = std::max(4, (int)std::lround(std::sqrt(n_ang / 2.0)));
        return build3(R, n_r, p, 2 * p);
    }

    auto g = std::make_shared<BallGrid>();
    g->n = 2;
    g->R = R;
    g->n_r = n_r;
    g->n_ang = n_ang;
    g->n_azim = n_ang;
    g->shell_r.resize(n_r);
    for (int i = 1; i <= n_r; ++i) g->shell_r[i - 1] = R * i / n_r;
    double dphi = 2.0 * M_PI / n_ang;
    g->unit_dir.resize(n_ang);
    g->ang_w.assign(n_ang, dphi);
    for (int j = 0; j < n_ang; ++j) {
        double phi = dphi * j;
        g->unit_dir[j] = {std::cos(phi), std::sin(phi), 0.0};
    }
    return g;
}

std::shared_ptr<const BallGrid> BallGrid::build3(double R, int n_r, int n_polar, int n_azim) {
    if (R <= 0.0) throw config_error("grid radius must be positive");
    if (n_r < 16) throw config_error("n_r must be at least 16");
    if (n_polar < 4 || n_azim < 8) throw config_error("angular resolution too small");

    auto g = std::make_shared<BallGrid>();
    g->n = 3;
    g->R = R;
    g->n_r = n_r;
    g->n_polar = n_polar;
    g->n_azim = n_azim;
    g->n_ang = n_polar * n_azim;
    g->shell_r.resize(n_r);
    for (int i = 1; i <= n_r; ++i) g->shell_r[i - 1] = R * i / n_r;

    std::vector<double> w;
    gauss_legendre(n_polar, g->mu, w);
    double dphi = 2.0 * M_PI / n_azim;
    g->unit_dir.resize(n_polar * n_azim);
    g->ang_w.resize(n_polar * n_azim);
    for (int p = 0; p < n_polar; ++p) {
        double m = g->mu[p];
        double s = std::sqrt(std::max(0.0, 1.0 - m * m));
        for (int q = 0; q < n_azim; ++q) {
            double phi = dphi * q;
            int a = p * n_azim + q;
            g->unit_dir[a] = {s * std::cos(phi), s * std::sin(phi), m};
            g->ang_w[a] = w[p] * dphi;
        }
    }
    return g;
}

int BallGrid::snap_shell(double r) const {
    double hh = h();
    int k = (int)std::lround(r / hh);
    if (k < 1 || k > n_r || std::abs(r - k * hh) > hh / 2.0 + 1e-9 * R)
        throw domain_error("no shell within half a spacing of the requested radius");
    return k;
}

int BallGrid::cut_shell(double r) const {
    if (r > R * (1.0 + 1e-9)) throw domain_error("radius exceeds grid radius");
    double hh = h();
    int k = (int)std::lround(r / hh);
    if (k < 0) k = 0;
    if (k > n_r) k = n_r;
    return k;
}

int BallGrid::angular_neighbor(int a, int dir) const {
    if (n == 2) {
        if (dir == 0) return (a + 1) % n_ang;
        if (dir == 1) return (a + n_ang - 1) % n_ang;
        return -1;
    }
    int p = a / n_azim, q = a % n_azim;
    switch (dir) {
        case 0: return p + 1 < n_polar ? (p + 1) * n_azim + q : -1;
        case 1: return p > 0 ? (p - 1) * n_azim + q : -1;
        case 2: return p * n_azim + (q + 1) % n_azim;
        case 3: return p * n_azim + (q + n_azim - 1) % n_azim;
    }
    return -1;
}

double BallGrid::metric_edge_length(const ModelMetric& m, const Vec& a, const Vec& b) const {
    Vec d = b - a;
    Vec mid = 0.5 * (a + b);
    double r = norm(mid);
    if (r > m.working_radius()) return norm(d);
    MetricData md = metric_at(m, mid);
    Vec gd = mat_vec(md.g, d);
    return std::sqrt(std::max(0.0, dot(d, gd)));
}

ShellSums::ShellSums(const BallGrid& grid, const ModelMetric& model,
                     const std::vector<double>& density)
    : grid_(&grid) {
    if ((int)density.size() != grid.node_count())
        throw config_error("density size does not match grid");
    const int A = grid.angular_count();
    S_.assign(grid.n_r, 0.0);
    for (int i = 1; i <= grid.n_r; ++i) {
        double r = grid.shell_r[i - 1];
        double rpow = std::pow(r, grid.n - 1);
        double acc = 0.0;
        for (int a = 0; a < A; ++a) {
            double sd = metric_at(model, r * grid.unit_dir[a]).sqrt_det;
            acc += density[grid.index(i, a)] * sd * grid.ang_w[a];
        }
        S_[i - 1] = acc * rpow;
    }
}

double ShellSums::cumulative(int k, const std::vector<double>& w) const {
    if (k <= 0) return 0.0;
    if (k > grid_->n_r) throw domain_error("cumulative: shell out of range");
    double hh = grid_->h();
    double acc = 0.0;
    for (int i = 1; i < k; ++i) acc += S_[i - 1] * w[i - 1];
    acc += 0.5 * S_[k - 1] * w[k - 1];
    return acc * hh;
}

double ShellSums::sphere(int k, const std::vector<double>& w) const {
    if (k < 1 || k > grid_->n_r) throw domain_error("sphere: shell out of range");
    return S_[k - 1] * w[k - 1];
}

std::vector<double> radial_power_weights(const BallGrid& grid, double power) {
    std::vector<double> w(grid.n_r);
    for (int i = 0; i < grid.n_r; ++i) w[i] = std::pow(grid.shell_r[i], power);
    return w;
}

std::vector<double> unit_weights(const BallGrid& grid) {
    return std::vector<double>(grid.n_r, 1.0);
}

double volume_integral(const BallGrid& grid, const ModelMetric& model,
                       const std::vector<double>& integrand, double r, double power) {
    int k = grid.cut_shell(r);
    ShellSums sums(grid, model, integrand);
    return sums.cumulative(k, radial_power_weights(grid, power));
}

double sphere_integral(const BallGrid& grid, const ModelMetric& model,
                       const std::vector<double>& integrand, double r) {
    int k = grid.snap_shell(r);
    ShellSums sums(grid, model, integrand);
    return sums.sphere(k, unit_weights(grid));
}

} // namespace monolab
