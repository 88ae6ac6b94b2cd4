#pragma once
#include <array>
#include <cmath>

namespace monolab {

// Points and vectors live in R^3; planar problems use z = 0.
using Vec = std::array<double, 3>;

struct Mat3 {
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    static Mat3 identity() {
        Mat3 a;
        a.m[0][0] = a.m[1][1] = a.m[2][2] = 1.0;
        return a;
    }
};

inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec mat_vec(const Mat3& a, const Vec& x) {
    Vec y{0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) y[i] += a.m[i][j] * x[j];
    return y;
}

// Determinant of the leading n x n block.
inline double det_n(const Mat3& a, int n) {
    if (n == 2) return a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0];
    return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
           a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
           a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

// Inverse of the leading n x n block; the complementary diagonal stays 1.
inline Mat3 inverse_n(const Mat3& a, int n, double det) {
    Mat3 inv = Mat3::identity();
    if (n == 2) {
        inv.m[0][0] = a.m[1][1] / det;
        inv.m[1][1] = a.m[0][0] / det;
        inv.m[0][1] = -a.m[0][1] / det;
        inv.m[1][0] = -a.m[1][0] / det;
        return inv;
    }
    inv.m[0][0] = (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) / det;
    inv.m[0][1] = (a.m[0][2] * a.m[2][1] - a.m[0][1] * a.m[2][2]) / det;
    inv.m[0][2] = (a.m[0][1] * a.m[1][2] - a.m[0][2] * a.m[1][1]) / det;
    inv.m[1][0] = (a.m[1][2] * a.m[2][0] - a.m[1][0] * a.m[2][2]) / det;
    inv.m[1][1] = (a.m[0][0] * a.m[2][2] - a.m[0][2] * a.m[2][0]) / det;
    inv.m[1][2] = (a.m[0][2] * a.m[1][0] - a.m[0][0] * a.m[1][2]) / det;
    inv.m[2][0] = (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]) / det;
    inv.m[2][1] = (a.m[0][1] * a.m[2][0] - a.m[0][0] * a.m[2][1]) / det;
    inv.m[2][2] = (a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0]) / det;
    return inv;
}

// Eigenvalues of the symmetric leading n x n block, ascending.
// n=2 closed form; n=3 via the trigonometric (Cardano) method.
inline std::array<double, 3> sym_eigenvalues(const Mat3& a, int n) {
    if (n == 2) {
        double tr = a.m[0][0] + a.m[1][1];
        double d = a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0];
        double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - d));
        return {tr / 2.0 - disc, tr / 2.0 + disc, 1.0};
    }
    double p1 = a.m[0][1] * a.m[0][1] + a.m[0][2] * a.m[0][2] + a.m[1][2] * a.m[1][2];
    double q = (a.m[0][0] + a.m[1][1] + a.m[2][2]) / 3.0;
    if (p1 < 1e-30) {
        std::array<double, 3> ev = {a.m[0][0], a.m[1][1], a.m[2][2]};
        if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
        if (ev[1] > ev[2]) std::swap(ev[1], ev[2]);
        if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
        return ev;
    }
    double p2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        double d = a.m[i][i] - q;
        p2 += d * d;
    }
    p2 += 2.0 * p1;
    double p = std::sqrt(p2 / 6.0);
    Mat3 b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b.m[i][j] = (a.m[i][j] - (i == j ? q : 0.0)) / p;
    double r = det_n(b, 3) / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double e1 = q + 2.0 * p * std::cos(phi);
    double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    double e2 = 3.0 * q - e1 - e3;
    std::array<double, 3> ev = {e3, e2, e1};
    if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
    if (ev[1] > ev[2]) std::swap(ev[1], ev[2]);
    return ev;
}

// Solve the n x n symmetric positive system M x = b (normal equations of
// the local gradient fits). Returns false when M is numerically singular.
inline bool solve_spd_n(const Mat3& M, const Vec& b, int n, Vec& x) {
    double det = det_n(M, n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(M.m[i][i]));
    if (scale <= 0.0 || std::abs(det) < 1e-14 * std::pow(scale, n)) return false;
    Mat3 inv = inverse_n(M, n, det);
    x = mat_vec(inv, b);
    return true;
}

} // namespace monolab
