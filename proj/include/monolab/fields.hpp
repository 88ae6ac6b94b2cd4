#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "monolab/ballgrid.hpp"

namespace monolab {

struct ScalarField {
    std::shared_ptr<const BallGrid> grid;
    std::vector<double> v;

    static ScalarField zeros(std::shared_ptr<const BallGrid> g);
    static ScalarField sample(std::shared_ptr<const BallGrid> g,
                              const std::function<double(const Vec&)>& f);
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
};

// Writes columns (r, phi, value) resp. (r, theta, phi, value), shortest
// round-trip decimal form, LF line endings.
void write_field_csv(const ScalarField& f, const std::string& path);

// Per-node support classification of one phase of a pair. Gradient and
// Laplacian stencils never reach across the support boundary; boundary
// nodes (value 0, support next door) carry half the one-sided energy
// density, which is its average over the node's angular cell.
enum class PhaseState : std::uint8_t { outside = 0, boundary = 1, inside = 2 };

struct PhaseMask {
    std::shared_ptr<const BallGrid> grid;
    std::vector<PhaseState> state;

    static PhaseMask all_inside(std::shared_ptr<const BallGrid> g);
    // inside where value > 0; boundary where value == 0 with an inside
    // stencil neighbor; outside elsewhere
    static PhaseMask from_support(const ScalarField& f);
};

struct GradientOptions {
    const PhaseMask* mask = nullptr;
    // fields that are known to vanish at the center (admissible pairs) get
    // an extra origin stencil point on the first shell
    bool origin_is_zero = false;
};

// Nodal Cartesian gradient by least-squares plane fit over the polar
// stencil (exact on affine fields).
std::vector<Vec> nodal_gradients(const ModelMetric& model, const ScalarField& f,
                                 const GradientOptions& opt = {});

// |grad_g u|^2 = g^{ij} d_i u d_j u per node.
ScalarField gradient_energy(const ModelMetric& model, const ScalarField& f);
ScalarField gradient_energy_masked(const ModelMetric& model, const ScalarField& f,
                                   const PhaseMask& mask);

struct LaplaceOptions {
    const PhaseMask* mask = nullptr;          // evaluate only where the full stencil is inside
    std::optional<double> origin_value = {};  // value at the center (pairs: 0)
};

// Divergence-form Laplace-Beltrami.
//
// laplace_beltrami: radially symmetric metrics get spectral angular
// derivatives (DFT for n=2, spherical harmonics for n=3) and conservative
// radial differences -- exact on affine fields and low harmonics.
// Polynomial perturbations fall back to the stencil operator.
//
// laplace_fd: pure finite-difference stencil operator (the one the
// two-phase solver iterates). Shell 1 and shell n_r are one-sided.
ScalarField laplace_beltrami(const ModelMetric& model, const ScalarField& f,
                             const LaplaceOptions& opt = {});
ScalarField laplace_fd(const ModelMetric& model, const ScalarField& f,
                       const LaplaceOptions& opt = {});

// Stencil coefficients of laplace_fd, shared with the relaxation solver.
// Neighbor slots: 0:r+ 1:r- 2:first angular + 3:first angular - 4:azim+
// 5:azim- (n=2 uses slots 0..3). Slot coefficient 0 means "no neighbor";
// the r- slot of shell 1 couples to the origin value.
class FdOperator {
  public:
    static FdOperator build(const ModelMetric& model, std::shared_ptr<const BallGrid> grid);

    double apply_at(const std::vector<double>& v, int idx, double origin_value) const;
    // relaxation helper: returns (sum_nb c_nb u_nb) and the diagonal
    double neighbor_sum(const std::vector<double>& v, int idx, double origin_value) const;
    double diagonal(int idx) const { return diag_[idx]; }
    int neighbor(int idx, int slot) const; // -1 origin, -2 none
    // finite-volume update of the origin value from the shell-1 fluxes,
    // solving (integral of Delta u over the origin cell) = f0 * cell volume
    double solve_origin(const std::vector<double>& v, double f0) const;
    bool has_cross_terms() const { return has_cross_; }
    double cross_at(const std::vector<double>& v, int idx) const;
    const BallGrid& grid() const { return *grid_; }

  private:
    std::shared_ptr<const BallGrid> grid_;
    int n_ = 2;
    std::vector<double> c_[6];
    std::vector<double> diag_;
    std::vector<double> origin_raw_; // sqrtG G^{rr} at (h/2, a): raw origin flux coefficients
    bool has_cross_ = false;
    std::vector<double> sqrtG_;      // nodal sqrt(det G), polar frame
    std::vector<double> w_cross_[3]; // sqrtG * G^{ab} per node for (r,ang1),(r,ang2),(ang1,ang2)
};

// Surface flux integral over the coordinate sphere nearest r:
// int g^{ij} d_j u nu_i sqrt(g) dS  (divergence-theorem counterpart).
double flux_integral(const ModelMetric& model, const ScalarField& f, double r);

struct BoundCheckReport {
    bool pass = true;
    int worst_node = -1;
    double worst_value = 0.0; // min of Delta_g u over the checked set
    int checked_nodes = 0;
};

// Verifies Delta_g u >= -bound - tol at interior nodes whose full stencil
// stays inside the (optional) mask, restricted to r in [r_lo, r_hi]*R.
BoundCheckReport check_superharmonic_bound(const ModelMetric& model, const ScalarField& f,
                                           double bound, double tol,
                                           const PhaseMask* mask = nullptr, double r_lo = 0.15,
                                           double r_hi = 0.95);

// ---- corrector F_g ----------------------------------------------------

// F_g = r^{2-n} + F_1g for n = 3 (identically 1 for n = 2), built from the
// radial kernel of the direction-averaged metric so that -Delta_g F_g >= 0
// away from the center and F_g >= r^{2-n}/2.
struct CorrectorField {
    std::shared_ptr<const BallGrid> grid;
    int n = 2;
    std::vector<double> profile;   // F_g per shell
    std::vector<double> f1;        // F_1g per shell (zero for n=2)
    double fitted_c = 0.0;         // sup |F_1g| r^{n-3} / t^2
    double fitted_e_bound = 0.0;   // sup |Delta_g r^{2-n}| r^{n-2} off-origin

    ScalarField as_field() const;
};

CorrectorField build_corrector(const ModelMetric& model, std::shared_ptr<const BallGrid> grid);

// ---- weak-form inequality checks --------------------------------------

struct EnergyIneqOptions {
    int bumps = 8;
    unsigned seed = 1;
};

struct EnergyIneqReport {
    bool pass = true;
    double fitted_C = 0.0;    // smallest C >= 0 making every test-function pass
    double worst_margin = 0.0; // max over bumps of LHS - RHS
    int bumps = 0;
};

// Both sides of  2 int |grad u|^2 phi <= C int u phi + int u^2 Delta phi
// over a family of seeded radial bump test functions.
EnergyIneqReport energy_inequality_check(const ModelMetric& model, const ScalarField& u, double C,
                                         const EnergyIneqOptions& opt = {});

struct CorrectorEnergyReport {
    double lhs = 0.0;        // int_{B_{d/4}} |grad u|^2 F_g
    double annulus_u2 = 0.0; // int_{B_{d/2} \ B_{d/4}} u^2
    double fitted_C = 0.0;   // lhs / (1 + annulus_u2)
};

CorrectorEnergyReport corrector_energy_bound(const ModelMetric& model, const ScalarField& u,
                                             const CorrectorField& F);

} // namespace monolab
