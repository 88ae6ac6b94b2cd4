#include "monolab/fields.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace monolab {

ScalarField ScalarField::zeros(std::shared_ptr<const BallGrid> g) {
    ScalarField f;
    f.grid = std::move(g);
    f.v.assign(f.grid->node_count(), 0.0);
    return f;
}

ScalarField ScalarField::sample(std::shared_ptr<const BallGrid> g,
                                const std::function<double(const Vec&)>& fn) {
    ScalarField f;
    f.grid = std::move(g);
    f.v.resize(f.grid->node_count());
    for (int i = 0; i < f.grid->node_count(); ++i) f.v[i] = fn(f.grid->position(i));
    return f;
}

namespace {
std::string fmt_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}
} // namespace

void write_field_csv(const ScalarField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw numerical_error("cannot open " + path);
    const BallGrid& g = *f.grid;
    if (g.n == 2)
        os << "r,phi,value\n";
    else
        os << "r,theta,phi,value\n";
    for (int i = 0; i < g.node_count(); ++i) {
        int a = g.angular_of(i);
        double r = g.radius_of(i);
        if (g.n == 2) {
            double phi = 2.0 * M_PI * a / g.n_ang;
            os << fmt_double(r) << ',' << fmt_double(phi) << ',' << fmt_double(f.v[i]) << '\n';
        } else {
            int p = a / g.n_azim, q = a % g.n_azim;
            double theta = std::acos(g.mu[p]);
            double phi = 2.0 * M_PI * q / g.n_azim;
            os << fmt_double(r) << ',' << fmt_double(theta) << ',' << fmt_double(phi) << ','
               << fmt_double(f.v[i]) << '\n';
        }
    }
}

PhaseMask PhaseMask::all_inside(std::shared_ptr<const BallGrid> g) {
    PhaseMask m;
    m.grid = std::move(g);
    m.state.assign(m.grid->node_count(), PhaseState::inside);
    return m;
}

PhaseMask PhaseMask::from_support(const ScalarField& f) {
    PhaseMask m;
    m.grid = f.grid;
    const BallGrid& g = *f.grid;
    const int N = g.node_count();
    m.state.assign(N, PhaseState::outside);
    for (int i = 0; i < N; ++i)
        if (f.v[i] > 0.0) m.state[i] = PhaseState::inside;

    const int ndirs = g.n == 2 ? 2 : 4;
    const int A = g.angular_count();
    for (int i = 0; i < N; ++i) {
        if (m.state[i] != PhaseState::outside) continue;
        int shell = g.shell_of(i), a = g.angular_of(i);
        bool adj = false;
        for (int d = 0; d < ndirs && !adj; ++d) {
            int nb = g.angular_neighbor(a, d);
            if (nb >= 0 && m.state[g.index(shell, nb)] == PhaseState::inside) adj = true;
        }
        if (!adj && shell > 1 && m.state[i - A] == PhaseState::inside) adj = true;
        if (!adj && shell < g.n_r && m.state[i + A] == PhaseState::inside) adj = true;
        if (adj) m.state[i] = PhaseState::boundary;
    }
    return m;
}

} // namespace monolab
