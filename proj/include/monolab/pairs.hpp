#pragma once
#include <string>
#include <vector>

#include "monolab/fields.hpp"

namespace monolab {

enum class PairClass { subharmonic, delta_ge_minus_one };

// Admissible two-phase pair: both components nonnegative with disjoint
// supports, vanishing at the center. Kink nodes along the support
// interface are tagged through the phase masks.
struct Pair {
    ScalarField u_plus;
    ScalarField u_minus;
    PairClass cls = PairClass::subharmonic;
    PhaseMask mask_plus;
    PhaseMask mask_minus;
    std::string family;
    double param = 0.0;
    Vec direction{1, 0, 0};
    double center_plus = 0.0; // |u_+| at the center (generators: exact 0)
    double center_minus = 0.0;
};

// u+ = <x,e>^+, u- = <x,e>^-
Pair make_plane_pair(std::shared_ptr<const BallGrid> grid, const Vec& direction);

// n=2 only: harmonic homogeneous pair on the sector of opening theta and
// its complement; exponents pi/theta and pi/(2 pi - theta).
Pair make_sector_pair(std::shared_ptr<const BallGrid> grid, double theta);

// u+ = (x1)^+ - (a/2)((x1)^+)^2 (so Delta u+ = -a on its flat support),
// u- = (x1)^-. Requires 0 <= a <= 1 and grid R <= 1.
Pair make_inhomogeneous_pair(std::shared_ptr<const BallGrid> grid, double a);

Pair make_zero_pair(std::shared_ptr<const BallGrid> grid);

// First Dirichlet eigenvalue of the spherical cap (n=3, polar opening
// theta) or circular sector arc (n=2), and the positive root alpha of
// alpha(alpha + n - 2) = lambda.
struct CapExponent {
    int n = 2;
    double theta = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
};

CapExponent cap_exponent(int n, double theta);

struct FHReport {
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
    double sum = 0.0;
    bool pass = false;
};

// Complementary partition (theta, 2pi-theta) for n=2, polar caps
// (theta, pi-theta) for n=3; pass iff alpha_+ + alpha_- >= 2 - 1e-9.
FHReport friedland_hayman_check(int n, double theta);

// Deterministic scan set of `count` openings that contains the symmetric
// partition exactly.
std::vector<double> fh_scan_openings(int n, int count);

struct PairValidation {
    bool nonnegative = false;
    bool disjoint = false;
    bool center_zero = false;
    bool class_bound_ok = false;
    bool pass = false;
    double measured_min_lap_plus = 0.0;
    double measured_min_lap_minus = 0.0;
    double worst_product = 0.0;
};

// Nonnegativity, disjoint supports, vanishing center, and the
// class-appropriate nodal Laplacian bound away from tagged kink nodes.
// On curved metrics the measured bound is reported as-is.
PairValidation validate_pair(const ModelMetric& model, const Pair& pair, double tol);

} // namespace monolab
