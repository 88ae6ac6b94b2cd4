#include <cmath>
#include <vector>

#include "monolab/fields.hpp"

namespace monolab {

namespace {

// Angular second derivative on a uniform periodic grid via direct DFT;
// exact for every resolvable harmonic.
void dft_second_derivative(const std::vector<double>& u, std::vector<double>& ddu) {
    const int N = (int)u.size();
    ddu.assign(N, 0.0);
    const int K = N / 2;
    std::vector<double> ctab(N), stab(N);
    for (int m = 0; m < N; ++m) {
        ctab[m] = std::cos(2.0 * M_PI * m / N);
        stab[m] = std::sin(2.0 * M_PI * m / N);
    }
    for (int k = 1; k <= K; ++k) {
        double a = 0.0, b = 0.0;
        for (int j = 0; j < N; ++j) {
            int m = (int)(((long long)k * j) % N);
            a += u[j] * ctab[m];
            b += u[j] * stab[m];
        }
        double scale = (k == K && N % 2 == 0) ? 1.0 / N : 2.0 / N;
        a *= scale;
        b *= scale;
        double kk = -(double)k * k;
        for (int j = 0; j < N; ++j) {
            int m = (int)(((long long)k * j) % N);
            ddu[j] += kk * (a * ctab[m] + b * stab[m]);
        }
    }
}

// Fully normalized associated Legendre values P_l^m(mu) with
// int_{-1}^{1} P^2 dmu = 1, for l = m..L at the given nodes.
// table[m][l-m][p]
struct LegendreTable {
    int L;
    std::vector<std::vector<std::vector<double>>> tab;

    LegendreTable(int L_, const std::vector<double>& mu) : L(L_) {
        const int P = (int)mu.size();
        tab.resize(L + 1);
        std::vector<double> pmm(P), pm1(P), pl(P);
        for (int m = 0; m <= L; ++m) {
            if (m == 0)
                for (int p = 0; p < P; ++p) pmm[p] = std::sqrt(0.5);
            else
                for (int p = 0; p < P; ++p)
                    pmm[p] *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) *
                              std::sqrt(std::max(0.0, 1.0 - mu[p] * mu[p]));
            tab[m].resize(L - m + 1, std::vector<double>(P));
            tab[m][0] = pmm;
            if (m + 1 <= L) {
                for (int p = 0; p < P; ++p) pm1[p] = std::sqrt(2.0 * m + 3.0) * mu[p] * pmm[p];
                tab[m][1] = pm1;
                std::vector<double> lm2 = pmm, lm1 = pm1;
                for (int l = m + 2; l <= L; ++l) {
                    double a = std::sqrt((4.0 * l * l - 1.0) / ((double)l * l - m * m));
                    double b = std::sqrt((((l - 1.0) * (l - 1.0) - m * m)) /
                                         (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
                    for (int p = 0; p < P; ++p) pl[p] = a * (mu[p] * lm1[p] - b * lm2[p]);
                    tab[m][l - m] = pl;
                    lm2 = lm1;
                    lm1 = pl;
                }
            }
        }
    }
};

// Laplace-Beltrami on the unit sphere applied to one shell of nodal
// values, pseudospectrally in spherical harmonics.
void sphere_laplacian(const BallGrid& g, const LegendreTable& leg,
                      const std::vector<double>& glw, const std::vector<double>& u,
                      std::vector<double>& out) {
    const int P = g.n_polar, Q = g.n_azim;
    const int L = leg.L;
    const int M = std::min(L, Q / 2 - 1);
    const double dphi = 2.0 * M_PI / Q;
    out.assign(P * Q, 0.0);

    std::vector<double> ac(P), as(P), cc(L + 1), cs(L + 1);
    std::vector<double> ctab(Q), stab(Q);
    for (int m = 0; m <= M; ++m) {
        for (int q = 0; q < Q; ++q) {
            ctab[q] = std::cos(m * dphi * q);
            stab[q] = std::sin(m * dphi * q);
        }
        // azimuthal projection (orthonormal real Fourier basis)
        double fnorm = m == 0 ? 1.0 / std::sqrt(2.0 * M_PI) : 1.0 / std::sqrt(M_PI);
        for (int p = 0; p < P; ++p) {
            double a = 0.0, b = 0.0;
            for (int q = 0; q < Q; ++q) {
                a += u[p * Q + q] * ctab[q];
                if (m > 0) b += u[p * Q + q] * stab[q];
            }
            ac[p] = a * dphi * fnorm;
            as[p] = b * dphi * fnorm;
        }
        // Legendre projection with GL weights
        for (int l = m; l <= L; ++l) {
            double sc = 0.0, ss = 0.0;
            const auto& row = leg.tab[m][l - m];
            for (int p = 0; p < P; ++p) {
                sc += ac[p] * row[p] * glw[p];
                if (m > 0) ss += as[p] * row[p] * glw[p];
            }
            cc[l] = sc;
            cs[l] = ss;
        }
        // evaluate back with the eigenvalue -l(l+1)
        for (int p = 0; p < P; ++p) {
            double vc = 0.0, vs = 0.0;
            for (int l = m; l <= L; ++l) {
                double e = -(double)l * (l + 1.0);
                const auto& row = leg.tab[m][l - m];
                vc += e * cc[l] * row[p];
                if (m > 0) vs += e * cs[l] * row[p];
            }
            for (int q = 0; q < Q; ++q) {
                double add = vc * ctab[q] * fnorm;
                if (m > 0) add += vs * stab[q] * fnorm;
                out[p * Q + q] += add;
            }
        }
    }
}

} // namespace

ScalarField laplace_beltrami(const ModelMetric& model, const ScalarField& f,
                             const LaplaceOptions& opt) {
    if (!model.radially_symmetric()) return laplace_fd(model, f, opt);

    const BallGrid& g = *f.grid;
    const int A = g.angular_count();
    ScalarField out = ScalarField::zeros(f.grid);

    // per-shell radial metric scalars: sqrt(det g) and the tangential
    // eigenvalue f^2 (both direction-independent here)
    auto sd_at = [&](double r) {
        Vec x{r, 0, 0};
        return metric_at(model, x).sqrt_det;
    };
    auto f2_at = [&](double r) {
        Vec x{r, 0, 0};
        return metric_at(model, x).g.m[1][1];
    };

    double origin;
    if (opt.origin_value)
        origin = *opt.origin_value;
    else {
        double acc = 0.0, w = 0.0;
        for (int a = 0; a < A; ++a) {
            acc += g.ang_w[a] * f.v[g.index(1, a)];
            w += g.ang_w[a];
        }
        origin = acc / w;
    }

    const double h = g.h();
    // radial conservative part with C(r) = r^{n-1} sqrt(det g)
    for (int i = 1; i <= g.n_r; ++i) {
        double r = g.shell_r[i - 1];
        double c_node = std::pow(r, g.n - 1) * sd_at(r);
        double chp = i < g.n_r ? std::pow(r + h / 2, g.n - 1) * sd_at(r + h / 2) : 0.0;
        double chm = std::pow(r - h / 2, g.n - 1) * sd_at(r - h / 2);
        for (int a = 0; a < A; ++a) {
            int idx = g.index(i, a);
            double up = i < g.n_r ? f.v[idx + A] : 0.0;
            double dn = i > 1 ? f.v[idx - A] : origin;
            double flux = 0.0;
            if (i < g.n_r) flux += chp * (up - f.v[idx]);
            flux -= chm * (f.v[idx] - dn);
            out.v[idx] = flux / (h * h * c_node);
        }
    }

    // spectral angular part scaled by 1/(r^2 f^2)
    if (g.n == 2) {
        std::vector<double> shell(g.n_ang), dd;
        for (int i = 1; i <= g.n_r; ++i) {
            double r = g.shell_r[i - 1];
            double scale = 1.0 / (r * r * f2_at(r));
            for (int a = 0; a < g.n_ang; ++a) shell[a] = f.v[g.index(i, a)];
            dft_second_derivative(shell, dd);
            for (int a = 0; a < g.n_ang; ++a) out.v[g.index(i, a)] += scale * dd[a];
        }
    } else {
        std::vector<double> nodes, glw;
        gauss_legendre(g.n_polar, nodes, glw);
        LegendreTable leg(g.n_polar - 1, g.mu);
        std::vector<double> shell(A), dd;
        for (int i = 1; i <= g.n_r; ++i) {
            double r = g.shell_r[i - 1];
            double scale = 1.0 / (r * r * f2_at(r));
            for (int a = 0; a < A; ++a) shell[a] = f.v[g.index(i, a)];
            sphere_laplacian(g, leg, glw, shell, dd);
            for (int a = 0; a < A; ++a) out.v[g.index(i, a)] += scale * dd[a];
        }
    }
    return out;
}

} // namespace monolab
