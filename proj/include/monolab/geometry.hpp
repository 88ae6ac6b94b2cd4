#pragma once
#include <optional>
#include <string>

#include "monolab/errors.hpp"
#include "monolab/linalg.hpp"

namespace monolab {

// Model Riemannian metrics written in geodesic normal coordinates at the
// center: g_ij(0) = delta_ij and rays through 0 are geodesics, so the
// geodesic distance to the center is |x|.
//
// Three families:
//   euclidean                g = I everywhere
//   space_form(kappa)        constant curvature; closed form
//                            g(x) = P_rad + f(|x|)^2 P_tan with
//                            f(r) = sin(sqrt(k) r)/(sqrt(k) r)   (k > 0)
//                            f(r) = sinh(sqrt(-k) r)/(sqrt(-k) r) (k < 0)
//   polynomial_perturbation  g = I + h, h_ij(x) = sum_kl c_ijkl x_k x_l
//
// A rescale factor t in (0,1] turns the model into g^t(x) = g(t x).

enum class MetricKind { euclidean, space_form, polynomial };

// Coefficients of the quadratic correction h_ij(x) = sum c[i][j][k][l] x_k x_l.
// Stored symmetrized in (i,j) and in (k,l).
struct QuadraticPerturbation {
    double c[3][3][3][3] = {};

    // Adds v to the (i,j,k,l) entry, keeping both symmetries.
    void add(int i, int j, int k, int l, double v);
};

struct MetricData {
    Mat3 g;
    Mat3 inv_g;
    double sqrt_det = 1.0;
};

class ModelMetric {
  public:
    static ModelMetric euclidean(int n);
    // Lambda defaults to |kappa| (curvature tensor norm scale for a space
    // form; the gradient of the curvature vanishes identically).
    static ModelMetric space_form(int n, double kappa);
    static ModelMetric polynomial(int n, const QuadraticPerturbation& pert, double lambda);

    ModelMetric with_working_radius(double wr) const;
    ModelMetric with_lambda(double lambda) const;

    int dimension() const { return n_; }
    MetricKind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    double lambda() const { return lambda_; }
    double rescale_factor() const { return t_; }
    const QuadraticPerturbation& perturbation() const { return pert_; }

    // True when g is invariant under rotations about the center; the
    // Laplace-Beltrami operator is then diagonal per angular mode.
    bool radially_symmetric() const { return kind_ != MetricKind::polynomial; }

    // Radius within which the model is evaluated. Space forms default to
    // min(0.8, 0.8/sqrt(Lambda)); the flat model to 2. Rescaling by t
    // stretches the radius to min(2, base/t).
    double working_radius() const;

    std::string describe() const;

    friend ModelMetric rescale(const ModelMetric& m, double t);
    friend MetricData metric_at(const ModelMetric& m, const Vec& x);

  private:
    ModelMetric() = default;
    int n_ = 2;
    MetricKind kind_ = MetricKind::euclidean;
    double kappa_ = 0.0;
    double lambda_ = 0.0;
    double t_ = 1.0;
    QuadraticPerturbation pert_;
    std::optional<double> wr_override_;
};

// g, g^{-1} and sqrt(det g) at x; for a rescaled model these are the
// values of the base metric at t x. Throws domain_error outside the
// working radius (closure inclusive, with a 1e-9 slack).
MetricData metric_at(const ModelMetric& m, const Vec& x);

// g^t with t multiplied onto any rescale already present. t in (0,1].
ModelMetric rescale(const ModelMetric& m, double t);

// Delta_g r = (n-1)/r + d/dr ln sqrt(det g), evaluated on radial rays
// (direction-averaged; space forms are exactly direction-independent).
double radial_laplacian(const ModelMetric& m, double r);

// Normal-coordinate bound check: eigenvalues of g within [1/4, 4],
// |g_ij - delta_ij| <= K |y|^2 and |d_k g_ij| <= 2 K |y|. The derivative
// bound carries the factor 2 consistent with integrating it once to get
// the deviation bound; fitted_K is the smallest K passing both.
struct HebeyReport {
    bool pass = false;
    bool eig_ok = false;
    bool dev_ok = false;
    bool grad_ok = false;
    double worst_ratio = 0.0; // max of deviation/(K|y|^2), |dg|/(2K|y|)
    Vec worst_point{0, 0, 0}; // argmax of absolute bound excess
    double fitted_K = 0.0;
    double max_eig = 1.0;
    double min_eig = 1.0;
};

HebeyReport hebey_verify(const ModelMetric& m, double radius, double K, double fd_step = -1.0);

// Smallest K for which hebey_verify passes (eigenvalue bounds permitting).
double hebey_fit_K(const ModelMetric& m, double radius, double fd_step = -1.0);

} // namespace monolab
