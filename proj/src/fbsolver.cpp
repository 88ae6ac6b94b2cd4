#include "monolab/fbsolver.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace monolab {

namespace {

uint64_t pattern_hash(const std::vector<int8_t>& s) {
    uint64_t h = 1469598103934665603ull;
    for (int8_t b : s) {
        h ^= (uint8_t)b;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

FreeBoundarySolution two_phase_solve(const TwoPhaseProblem& problem) {
    if (!problem.grid) throw config_error("two_phase_solve: missing grid");
    const BallGrid& g = *problem.grid;
    if (g.R > problem.model.working_radius() * (1.0 + 1e-9))
        throw config_error("two_phase_solve: grid exceeds the metric working radius");
    const int N = g.node_count();
    const int A = g.angular_count();

    FdOperator op = FdOperator::build(problem.model, problem.grid);

    // data samples
    std::vector<double> f1(N), f2(N);
    double fmax = 0.0, hmax = 0.0;
    for (int i = 0; i < N; ++i) {
        Vec x = g.position(i);
        f1[i] = problem.f1 ? problem.f1(x) : 0.0;
        f2[i] = problem.f2 ? problem.f2(x) : 0.0;
        fmax = std::max({fmax, std::abs(f1[i]), std::abs(f2[i])});
    }
    if (fmax > problem.f_bound + 1e-12)
        throw config_error("two_phase_solve: right-hand side exceeds the declared bound");

    FreeBoundarySolution sol;
    sol.model = problem.model;
    sol.u = ScalarField::zeros(problem.grid);

    // Dirichlet data on the outer shell; initial guess h * r/R
    std::vector<double>& u = sol.u.v;
    for (int a = 0; a < A; ++a) {
        double hb = problem.h ? problem.h(g.position(g.index(g.n_r, a))) : 0.0;
        hmax = std::max(hmax, std::abs(hb));
        for (int i = 1; i <= g.n_r; ++i) u[g.index(i, a)] = hb * g.shell_r[i - 1] / g.R;
    }
    sol.data_scale = std::max(1e-12, fmax + hmax / (g.R * g.R));
    const double noise = 1e-10 * std::max(1.0, hmax + fmax);

    const int unknowns_end = g.index(g.n_r - 1, A - 1) + 1; // shells 1..n_r-1
    std::vector<double> rhs(unknowns_end, 0.0);
    std::vector<int8_t> pattern(unknowns_end, 0), prev_pattern;
    std::unordered_set<uint64_t> seen;

    auto color_of = [&](int idx) {
        int shell = g.shell_of(idx), a = g.angular_of(idx);
        if (g.n == 2) return (shell + a) & 1;
        return (shell + a / g.n_azim + a % g.n_azim) & 1;
    };

    auto make_pattern = [&]() {
        for (int i = 0; i < unknowns_end; ++i)
            pattern[i] = u[i] > noise ? 1 : (u[i] < -noise ? -1 : 0);
    };

    const double omega = problem.opts.omega;
    double f_origin = 0.0;
    sol.converged = false;

    for (int outer = 0; outer < problem.opts.max_outer; ++outer) {
        ++sol.outer_iterations;
        make_pattern();
        uint64_t hsh = pattern_hash(pattern);
        if (outer > 0 && pattern == prev_pattern) {
            sol.converged = true;
            break;
        }
        if (outer > 0 && !seen.insert(hsh).second) {
            sol.sign_cycle = true; // pattern seen before but not the immediate predecessor
            break;
        }
        if (outer == 0) seen.insert(hsh);
        prev_pattern = pattern;

        for (int i = 0; i < unknowns_end; ++i)
            rhs[i] = pattern[i] > 0 ? f1[i] : (pattern[i] < 0 ? -f2[i] : 0.0);
        f_origin = 0.0; // the center belongs to the interface for admissible data

        // inner linear solve: red-black SOR to the requested residual
        double res = HUGE_VAL;
        while (res > problem.opts.rel_tol * sol.data_scale &&
               sol.sweeps < problem.opts.max_sweeps) {
            for (int color = 0; color < 2; ++color) {
                for (int i = 0; i < unknowns_end; ++i) {
                    if (color_of(i) != color) continue;
                    double nb = op.neighbor_sum(u, i, sol.origin);
                    double unew = (nb - rhs[i]) / op.diagonal(i);
                    u[i] += omega * (unew - u[i]);
                }
                sol.origin = op.solve_origin(u, f_origin);
            }
            ++sol.sweeps;
            if (sol.sweeps % 16 == 0 || sol.sweeps >= problem.opts.max_sweeps) {
                res = 0.0;
                for (int i = 0; i < unknowns_end; ++i)
                    res = std::max(res, std::abs(op.apply_at(u, i, sol.origin) - rhs[i]));
            }
        }
        if (sol.sweeps >= problem.opts.max_sweeps) break;
    }

    // final residual against the converged pattern
    make_pattern();
    sol.residual = 0.0;
    for (int i = 0; i < unknowns_end; ++i) {
        double f = pattern[i] > 0 ? f1[i] : (pattern[i] < 0 ? -f2[i] : 0.0);
        sol.residual = std::max(sol.residual, std::abs(op.apply_at(u, i, sol.origin) - f));
    }

    // interface: nodes with an opposite-sign stencil neighbor, plus the
    // linear zero crossings along those edges
    const int ndirs = g.n == 2 ? 2 : 4;
    auto sgn = [&](double v) { return v > noise ? 1 : (v < -noise ? -1 : 0); };
    std::vector<char> is_if(N, 0);
    for (int i = 0; i < N; ++i) {
        int si = sgn(u[i]);
        int shell = g.shell_of(i), a = g.angular_of(i);
        auto consider = [&](int j) {
            if (j < 0) return;
            int sj = sgn(u[j]);
            if (si * sj < 0) {
                is_if[i] = is_if[j] = 1;
                if (i < j) {
                    double w = u[i] / (u[i] - u[j]);
                    sol.interface_points.push_back(g.position(i) +
                                                   w * (g.position(j) - g.position(i)));
                }
            } else if (si == 0 && sj != 0) {
                is_if[i] = 1;
            }
        };
        if (shell < g.n_r) consider(i + A);
        for (int d = 0; d < ndirs; ++d) {
            int nb = g.angular_neighbor(a, d);
            if (nb >= 0) consider(g.index(shell, nb));
        }
    }
    for (int i = 0; i < N; ++i)
        if (is_if[i]) sol.interface_nodes.push_back(i);

    if (!sol.converged && !sol.sign_cycle && sol.outer_iterations >= problem.opts.max_outer)
        sol.sign_cycle = true;
    return sol;
}

LipschitzReport lipschitz_ratio(const FreeBoundarySolution& sol, double K) {
    const BallGrid& g = *sol.u.grid;
    LipschitzReport rep;
    if (sol.interface_points.empty()) {
        rep.vacuous = true;
        return rep;
    }
    if (K >= g.R) throw domain_error("lipschitz_ratio: K must be smaller than the grid radius");

    const double h = g.h();
    const double d_lo = 5.0 * h, d_hi = g.R / 4.0;
    for (int i = 0; i < g.node_count(); ++i) {
        Vec x = g.position(i);
        if (norm(x) > K) continue;
        double best = HUGE_VAL;
        Vec bestp{0, 0, 0};
        for (const Vec& p : sol.interface_points) {
            Vec d = p - x;
            double dd = dot(d, d);
            if (dd < best) {
                best = dd;
                bestp = p;
            }
        }
        double dist = g.metric_edge_length(sol.model, x, bestp);
        if (dist < d_lo || dist > d_hi) continue;
        double ratio = std::abs(sol.u.v[i]) / dist;
        if (ratio > rep.sup_ratio) {
            rep.sup_ratio = ratio;
            rep.argmax_node = i;
            rep.dist_at_argmax = dist;
        }
    }
    return rep;
}

std::vector<FluxSample> flux_balance_check(const FreeBoundarySolution& sol,
                                           const std::function<double(double, double)>& G) {
    const BallGrid& g = *sol.u.grid;
    if (sol.interface_nodes.empty()) return {};
    double umax = 0.0;
    for (double v : sol.u.v) umax = std::max(umax, std::abs(v));
    double noise = 1e-10 * std::max(1.0, umax);

    ScalarField up = ScalarField::zeros(sol.u.grid), um = ScalarField::zeros(sol.u.grid);
    for (int i = 0; i < g.node_count(); ++i) {
        up.v[i] = sol.u.v[i] > noise ? sol.u.v[i] : 0.0;
        um.v[i] = sol.u.v[i] < -noise ? -sol.u.v[i] : 0.0;
    }
    PhaseMask mp = PhaseMask::from_support(up), mm = PhaseMask::from_support(um);
    GradientOptions op_p, op_m;
    op_p.mask = &mp;
    op_m.mask = &mm;
    op_p.origin_is_zero = op_m.origin_is_zero = std::abs(sol.origin) <= noise;
    auto gp = nodal_gradients(sol.model, up, op_p);
    auto gm = nodal_gradients(sol.model, um, op_m);

    std::vector<FluxSample> out;
    for (int i : sol.interface_nodes) {
        MetricData md = metric_at(sol.model, g.position(i));
        auto mag = [&](const Vec& grad) {
            Vec t = mat_vec(md.inv_g, grad);
            return std::sqrt(std::max(0.0, dot(grad, t)));
        };
        FluxSample s;
        s.node = i;
        s.grad_plus = mag(gp[i]);
        s.grad_minus = mag(gm[i]);
        s.G_value = G ? G(s.grad_plus, s.grad_minus) : 0.0;
        out.push_back(s);
    }
    return out;
}

Pair solution_pair(const FreeBoundarySolution& sol, double f_scale) {
    if (f_scale <= 0.0) throw config_error("solution_pair: scale must be positive");
    const BallGrid& g = *sol.u.grid;
    Pair p;
    p.u_plus = ScalarField::zeros(sol.u.grid);
    p.u_minus = ScalarField::zeros(sol.u.grid);
    double umax = 0.0;
    for (double v : sol.u.v) umax = std::max(umax, std::abs(v));
    double noise = 1e-10 * std::max(1.0, umax);
    for (int i = 0; i < g.node_count(); ++i) {
        double v = sol.u.v[i] / f_scale;
        p.u_plus.v[i] = v > noise ? v : 0.0;
        p.u_minus.v[i] = v < -noise ? -v : 0.0;
    }
    p.cls = PairClass::delta_ge_minus_one;
    p.family = "solution";
    p.mask_plus = PhaseMask::from_support(p.u_plus);
    p.mask_minus = PhaseMask::from_support(p.u_minus);
    p.center_plus = std::max(sol.origin / f_scale, 0.0);
    p.center_minus = std::max(-sol.origin / f_scale, 0.0);
    return p;
}

} // namespace monolab
