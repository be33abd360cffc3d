#pragma once

#include <cmath>
#include <vector>

#include "alphamax/matrix.hpp"
#include "alphamax/panel.hpp"
#include "alphamax/rng.hpp"

namespace test_helpers {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Random symmetric matrix with entries ~ N(0, 1).
inline alphamax::Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
    const alphamax::StreamKey key = alphamax::StreamKey::root(seed);
    alphamax::Matrix a(n, n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            a(i, j) = a(j, i) = alphamax::gaussian_at(key, idx++);
        }
    }
    return a;
}

// Random SPD matrix M M' + ridge * I.
inline alphamax::Matrix random_spd(std::size_t n, std::uint64_t seed, double ridge = 0.5) {
    const alphamax::StreamKey key = alphamax::StreamKey::root(seed);
    alphamax::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = alphamax::gaussian_at(key, i * n + j);
    alphamax::Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < n; ++l) s += m(i, l) * m(j, l);
            a(i, j) = a(j, i) = s;
        }
        a(i, i) += ridge;
    }
    return a;
}

// Independent full-diagonalization oracle: plain Jacobi sweeps until the
// off-diagonal mass vanishes. Returns eigenvalues sorted descending with the
// matching eigenvector columns. Intentionally separate from the library path.
struct OracleEigen {
    std::vector<double> values;
    alphamax::Matrix vectors;
};

inline OracleEigen jacobi_oracle(alphamax::Matrix a) {
    const std::size_t n = a.rows();
    alphamax::Matrix v = alphamax::Matrix::identity(n);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) < 1e-13) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double phi = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
                const double c = std::cos(phi);
                const double s = std::sin(phi);
                for (std::size_t l = 0; l < n; ++l) {
                    const double alp = a(l, p);
                    const double alq = a(l, q);
                    a(l, p) = c * alp - s * alq;
                    a(l, q) = s * alp + c * alq;
                }
                for (std::size_t l = 0; l < n; ++l) {
                    const double apl = a(p, l);
                    const double aql = a(q, l);
                    a(p, l) = c * apl - s * aql;
                    a(q, l) = s * apl + c * aql;
                }
                for (std::size_t l = 0; l < n; ++l) {
                    const double vlp = v(l, p);
                    const double vlq = v(l, q);
                    v(l, p) = c * vlp - s * vlq;
                    v(l, q) = s * vlp + c * vlq;
                }
            }
        }
    }
    OracleEigen out;
    out.values.resize(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    out.vectors = alphamax::Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

// Small panel with Gaussian returns and factors, handy for estimator tests.
inline std::pair<alphamax::ReturnPanel, alphamax::FactorPanel> random_panel(
    std::size_t n, std::size_t t, std::size_t k, std::uint64_t seed) {
    const alphamax::StreamKey key = alphamax::StreamKey::root(seed);
    alphamax::Matrix y(n, t);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < t; ++s)
            y(i, s) = alphamax::gaussian_at(key.child(1), i * t + s);
    alphamax::Matrix f(k, t);
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t s = 0; s < t; ++s)
            f(p, s) = alphamax::gaussian_at(key.child(2), p * t + s);
    std::vector<std::string> assets(n), dates(t), names(k);
    for (std::size_t i = 0; i < n; ++i) assets[i] = "A" + std::to_string(i);
    for (std::size_t s = 0; s < t; ++s) dates[s] = "D" + std::to_string(s);
    for (std::size_t p = 0; p < k; ++p) names[p] = "F" + std::to_string(p);
    return {alphamax::ReturnPanel(assets, dates, std::move(y)),
            alphamax::FactorPanel(names, std::move(f))};
}

}  // namespace test_helpers
