#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "monolab/geometry.hpp"

namespace monolab {

// Polar / spherical-product lattice over a coordinate ball of radius R.
//
// Radial shells sit at r_i = i h, i = 1..n_r, h = R/n_r, so the outer
// shell lies exactly at R and the origin is not a node. Cumulative radial
// quadrature is trapezoidal with a half weight at the cut shell; the
// implicit origin endpoint contributes nothing because every integrand we
// meet carries a factor r^{n-1+p} with p > 1-n.
//
// Angular rules: n=2 uniform angles phi_j = 2 pi j / n_ang; n=3
// Gauss-Legendre in mu = cos(theta) times uniform azimuth (exact for
// spherical polynomials up to the rule degree).
//
// Node order is shell-major: index = (shell-1)*angular_count + a.
class BallGrid {
  public:
    int n = 2;
    double R = 1.0;
    int n_r = 0;
    int n_ang = 0;   // n=2: angular count; n=3: n_polar * n_azim
    int n_polar = 1; // n=3 only
    int n_azim = 0;  // n=3 only (n=2: == n_ang)

    std::vector<double> shell_r;  // size n_r
    std::vector<Vec> unit_dir;    // per angular index
    std::vector<double> ang_w;    // flat angular measure weight per angular index
    std::vector<double> mu;       // n=3: GL nodes, size n_polar

    static std::shared_ptr<const BallGrid> build(int n, double R, int n_r, int n_ang);
    static std::shared_ptr<const BallGrid> build3(double R, int n_r, int n_polar, int n_azim);

    double h() const { return R / n_r; }
    int angular_count() const { return n == 2 ? n_ang : n_polar * n_azim; }
    int node_count() const { return n_r * angular_count(); }

    int index(int shell, int a) const { return (shell - 1) * angular_count() + a; }
    int shell_of(int idx) const { return idx / angular_count() + 1; }
    int angular_of(int idx) const { return idx % angular_count(); }
    Vec position(int idx) const { return shell_r[shell_of(idx) - 1] * unit_dir[angular_of(idx)]; }
    double radius_of(int idx) const { return shell_r[shell_of(idx) - 1]; }

    // shells 1 (origin-adjacent) and n_r (one-sided) are not interior
    bool is_interior_shell(int shell) const { return shell >= 2 && shell <= n_r - 1; }

    // Nearest shell to r; throws when none lies within half a spacing.
    int snap_shell(double r) const;
    // Shell cut for cumulative integrals; 0 means "empty ball".
    int cut_shell(double r) const;

    // Angular neighbor in the given direction, or -1 when absent
    // (polar-cap edge). dir: 0/1 = +/- first angular coordinate
    // (phi for n=2, mu for n=3), 2/3 = +/- azimuth (n=3).
    int angular_neighbor(int a, int dir) const;

    // Approximate geodesic length of the (tiny) segment between two nodes:
    // coordinate length scaled by the metric at the midpoint.
    double metric_edge_length(const ModelMetric& m, const Vec& a, const Vec& b) const;
};

// Gauss-Legendre nodes/weights on [-1,1] (ascending nodes).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Per-shell angular sums of density * sqrt(det g) * angular weight * r^{n-1}.
// Everything radial (singular weights, corrector profiles, the trapezoid
// closure) is applied on top of these, which keeps cumulative energies,
// surface terms and dyadic sums on one quadrature path.
class ShellSums {
  public:
    ShellSums(const BallGrid& grid, const ModelMetric& model, const std::vector<double>& density);

    // integral over B_{r_k} of density * w(r) dV_g, trapezoid with half
    // weight at shell k; w given per shell (size n_r).
    double cumulative(int k, const std::vector<double>& w) const;
    // integral over the coordinate sphere r = r_k of density * w(r_k) dS_g
    double sphere(int k, const std::vector<double>& w) const;

    const std::vector<double>& shell_values() const { return S_; }

  private:
    const BallGrid* grid_;
    std::vector<double> S_;
};

// radial weight vectors
std::vector<double> radial_power_weights(const BallGrid& grid, double power);
std::vector<double> unit_weights(const BallGrid& grid);

// ---- spec-facing quadrature operations -------------------------------

// sum over nodes with r_i <= r of integrand * |x|^power dV_g
double volume_integral(const BallGrid& grid, const ModelMetric& model,
                       const std::vector<double>& integrand, double r, double power);

// surface integral over the coordinate sphere nearest to r
double sphere_integral(const BallGrid& grid, const ModelMetric& model,
                       const std::vector<double>& integrand, double r);

} // namespace monolab
