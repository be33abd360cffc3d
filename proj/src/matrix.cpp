#include "alphamax/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace alphamax {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidArgumentError("Matrix: data length " + std::to_string(data_.size()) +
                                   " does not equal rows*cols = " + std::to_string(rows_ * cols_));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw InvalidArgumentError("Matrix: non-finite entry rejected");
        }
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::times(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw InvalidArgumentError("Matrix::times: inner dimensions do not conform");
    }
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t l = 0; l < cols_; ++l) {
            const double a = (*this)(i, l);
            if (a == 0.0) continue;
            const double* rrow = rhs.data_.data() + l * rhs.cols_;
            double* orow = out.data_.data() + i * rhs.cols_;
            for (std::size_t j = 0; j < rhs.cols_; ++j) orow[j] += a * rrow[j];
        }
    }
    return out;
}

std::vector<double> Matrix::col(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

namespace {

constexpr double kPivotRel = 1e-12;

void check_square_symmetric_shape(const Matrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw InvalidArgumentError(std::string(who) + ": matrix must be square and non-empty");
    }
}

// In-place lower Cholesky factor of the lower triangle of a.
// Throws SingularMatrixError on pivot breakdown.
void cholesky_lower(Matrix& a) {
    const std::size_t n = a.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
    const double tol = kPivotRel * max_diag;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t l = 0; l < j; ++l) d -= a(j, l) * a(j, l);
        if (!(d > tol)) {
            throw SingularMatrixError("solve_spd: pivot " + std::to_string(d) +
                                      " below threshold at column " + std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t l = 0; l < j; ++l) s -= a(i, l) * a(j, l);
            a(i, j) = s / ljj;
        }
    }
}

}  // namespace

Matrix solve_spd(const Matrix& a, const Matrix& b) {
    check_square_symmetric_shape(a, "solve_spd");
    if (b.rows() != a.rows()) {
        throw InvalidArgumentError("solve_spd: right-hand side has " + std::to_string(b.rows()) +
                                   " rows, expected " + std::to_string(a.rows()));
    }
    const std::size_t n = a.rows();
    Matrix l = a;
    cholesky_lower(l);
    Matrix x = b;
    const std::size_t m = b.cols();
    // Forward substitution L y = b.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < m; ++c) {
            double s = x(i, c);
            for (std::size_t l2 = 0; l2 < i; ++l2) s -= l(i, l2) * x(l2, c);
            x(i, c) = s / l(i, i);
        }
    }
    // Back substitution L' x = y.
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t c = 0; c < m; ++c) {
            double s = x(ii, c);
            for (std::size_t l2 = ii + 1; l2 < n; ++l2) s -= l(l2, ii) * x(l2, c);
            x(ii, c) = s / l(ii, ii);
        }
    }
    return x;
}

namespace {

constexpr std::size_t kJacobiMaxSweeps = 100;
constexpr std::size_t kQlMaxIter = 60;
constexpr std::size_t kJacobiCutoff = 64;

// Cyclic Jacobi on a copy of a; fills eigenvalues (unordered) and the
// column-eigenvector matrix v. Returns the attained off-diagonal norm.
double jacobi_full(Matrix a, std::vector<double>& values, Matrix& v) {
    const std::size_t n = a.rows();
    v = Matrix::identity(n);
    const double fro = a.frobenius_norm();
    const double target = 1e-14 * (fro > 0 ? fro : 1.0);
    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
        return std::sqrt(s);
    };
    for (std::size_t sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_norm() <= target) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
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
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
    return off_norm();
}

// Householder reduction of symmetric a to tridiagonal (d, e) with accumulated
// transform in a itself (classic tred2), followed by implicit-shift QL (tql2).
// Eigenvectors end up in the columns of a.
void tridiag_ql(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    // tred2
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k)
                        a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
    }
    // tql2
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == kQlMaxIter) {
                    throw NoConvergenceError("top_k_eigen: QL iteration cap reached",
                                             std::abs(e[l]));
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                for (std::size_t i2 = m; i2-- > l;) {
                    double f = s * e[i2];
                    const double b = c * e[i2];
                    r = std::hypot(f, g);
                    e[i2 + 1] = r;
                    if (r == 0.0) {
                        d[i2 + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i2 + 1] - p;
                    r = (d[i2] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i2 + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = a(k, i2 + 1);
                        a(k, i2 + 1) = s * a(k, i2) + c * f;
                        a(k, i2) = c * a(k, i2) - s * f;
                    }
                }
                if (r == 0.0 && m - l > 1) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void apply_sign_convention(Matrix& vectors) {
    const std::size_t n = vectors.rows();
    for (std::size_t j = 0; j < vectors.cols(); ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(vectors(i, j));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        if (vectors(arg, j) < 0.0) {
            for (std::size_t i = 0; i < n; ++i) vectors(i, j) = -vectors(i, j);
        }
    }
}

void normalize_columns(Matrix& vectors) {
    const std::size_t n = vectors.rows();
    for (std::size_t j = 0; j < vectors.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += vectors(i, j) * vectors(i, j);
        s = std::sqrt(s);
        if (s > 0.0)
            for (std::size_t i = 0; i < n; ++i) vectors(i, j) /= s;
    }
}

}  // namespace

EigenPairs top_k_eigen(const Matrix& a, std::size_t k) {
    check_square_symmetric_shape(a, "top_k_eigen");
    const std::size_t n = a.rows();
    if (k < 1 || k > n) {
        throw InvalidKError("top_k_eigen: k = " + std::to_string(k) + " outside [1, " +
                            std::to_string(n) + "]");
    }

    std::vector<double> values;
    Matrix vectors;
    if (n <= kJacobiCutoff) {
        jacobi_full(a, values, vectors);
    } else {
        Matrix work = a;
        std::vector<double> d, e;
        tridiag_ql(work, d, e);
        values = std::move(d);
        vectors = std::move(work);
    }

    // Sort descending by eigenvalue; stable index order breaks exact ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });

    EigenPairs out;
    out.values.resize(k);
    out.vectors = Matrix(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        out.values[j] = values[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vectors(i, order[j]);
    }
    normalize_columns(out.vectors);
    apply_sign_convention(out.vectors);

    // Residual certificate against the original input.
    const double fro = a.frobenius_norm();
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double av = 0.0;
            for (std::size_t l = 0; l < n; ++l) av += a(i, l) * out.vectors(l, j);
            const double r = av - out.values[j] * out.vectors(i, j);
            r2 += r * r;
        }
        const double bound = 1e-8 * (1.0 + std::abs(out.values[j])) * (fro > 0 ? fro : 1.0);
        const double res = std::sqrt(r2);
        worst = std::max(worst, res);
        if (res > bound) {
            throw NoConvergenceError("top_k_eigen: residual " + std::to_string(res) +
                                         " exceeds bound for eigenpair " + std::to_string(j),
                                     res);
        }
    }
    (void)worst;
    return out;
}

}  // namespace alphamax
