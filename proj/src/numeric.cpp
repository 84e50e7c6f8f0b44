#include "stein/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stein {

namespace {

// Implicit-shift QL for a symmetric tridiagonal matrix; z accumulates the
// first components of the eigenvectors (Golub-Welsch layout).
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-15 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("tridiagonal QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void solve_jacobi(unsigned n, std::vector<double>& d, std::vector<double>& z) {
    d.assign(n, 0.0);
    std::vector<double> e(n > 0 ? n - 1 : 0);
    for (unsigned k = 1; k < n; ++k) e[k - 1] = std::sqrt(static_cast<double>(k));
    z.assign(n, 0.0);
    if (n > 0) z[0] = 1.0;
    tridiag_ql(d, e, z);
    // sort ascending, carrying z along
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return d[a] < d[b]; });
    std::vector<double> ds(n), zs(n);
    for (size_t i = 0; i < n; ++i) {
        ds[i] = d[idx[i]];
        zs[i] = z[idx[i]];
    }
    d = std::move(ds);
    z = std::move(zs);
}

}  // namespace

std::vector<double> hermite_roots(unsigned n) {
    std::vector<double> d, z;
    solve_jacobi(n, d, z);
    return d;
}

Quadrature gauss_hermite(unsigned n) {
    std::vector<double> d, z;
    solve_jacobi(n, d, z);
    Quadrature q;
    q.nodes = d;
    q.weights.resize(n);
    for (unsigned i = 0; i < n; ++i) q.weights[i] = z[i] * z[i];
    return q;
}

Quadrature gauss_legendre(unsigned n) {
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n > 0 ? n - 1 : 0);
    for (unsigned k = 1; k < n; ++k) e[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    std::vector<double> z(n, 0.0);
    if (n > 0) z[0] = 1.0;
    tridiag_ql(d, e, z);
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return d[a] < d[b]; });
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (size_t i = 0; i < n; ++i) {
        q.nodes[i] = d[idx[i]];
        q.weights[i] = 2.0 * z[idx[i]] * z[idx[i]];
    }
    return q;
}

}  // namespace stein
