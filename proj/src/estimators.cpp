#include "alphamax/estimators.hpp"

#include <cmath>
#include <string>

namespace alphamax {

namespace {

constexpr double kDegenerateScaleRel = 1e-14;

void require_fit_ready(const ReturnPanel& returns, const FactorPanel& factors) {
    const std::size_t n = returns.n();
    const std::size_t t = returns.t();
    const std::size_t k = factors.k();
    if (returns.assets.size() != n || returns.dates.size() != t || factors.names.size() != k) {
        throw InvalidArgumentError("fit: label/matrix dimension mismatch");
    }
    if (k > 0 && factors.t() != t) {
        throw InvalidArgumentError("fit: factor panel spans " + std::to_string(factors.t()) +
                                   " periods, returns span " + std::to_string(t));
    }
    if (n < 3) {
        throw InvalidArgumentError("fit: need at least 3 assets, have " + std::to_string(n));
    }
    if (t < k + 2) {
        throw InvalidArgumentError("fit: need T >= K + 2, have T = " + std::to_string(t) +
                                   ", K = " + std::to_string(k));
    }
}

std::vector<double> row_means(const Matrix& m) {
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (double v : m.row(i)) s += v;
        out[i] = s / static_cast<double>(m.cols());
    }
    return out;
}

double panel_rms(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s / static_cast<double>(m.size()));
}

double pooled_scale_or_throw(const Matrix& residuals, const Matrix& returns) {
    const double s = panel_rms(residuals);
    if (s <= kDegenerateScaleRel * panel_rms(returns)) {
        throw DegenerateScaleError(
            "fit: pooled residual scale is numerically zero (exactly fitting panel)");
    }
    return s;
}

// Time-series OLS slopes for every asset: solves the centered normal
// equations once per asset against a shared factor Gram.
Matrix time_series_betas(const ReturnPanel& returns, const FactorPanel& factors,
                         const std::vector<double>& fbar) {
    const std::size_t n = returns.n();
    const std::size_t t = returns.t();
    const std::size_t k = factors.k();
    Matrix beta(n, k);
    if (k == 0) return beta;

    Matrix centered(k, t);
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t c = 0; c < t; ++c) centered(p, c) = factors.values(p, c) - fbar[p];

    Matrix gram(k, k);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = p; q < k; ++q) {
            double s = 0.0;
            for (std::size_t c = 0; c < t; ++c) s += centered(p, c) * centered(q, c);
            gram(p, q) = gram(q, p) = s;
        }
    }

    // Cross products for all assets at once: rhs is K x N.
    Matrix rhs(k, n);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const auto yrow = returns.excess_returns.row(i);
            const auto frow = centered.row(p);
            for (std::size_t c = 0; c < t; ++c) s += frow[c] * yrow[c];
            rhs(p, i) = s;
        }
    }

    Matrix solved;
    try {
        solved = solve_spd(gram, rhs);
    } catch (const SingularMatrixError& e) {
        throw SingularFactorCovarianceError(std::string("fit: ") + e.what());
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) beta(i, p) = solved(p, i);
    return beta;
}

// Cross-sectional regression of ybar on a constant and the loadings:
// lambda = (beta' M beta)^{-1} beta' M ybar with M = I - 11'/N.
std::vector<double> cross_sectional_lambda(const Matrix& beta, const std::vector<double>& ybar) {
    const std::size_t n = beta.rows();
    const std::size_t k = beta.cols();
    std::vector<double> beta_mean(k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t i = 0; i < n; ++i) beta_mean[p] += beta(i, p);
        beta_mean[p] /= static_cast<double>(n);
    }
    double ybar_mean = 0.0;
    for (double v : ybar) ybar_mean += v;
    ybar_mean /= static_cast<double>(n);

    Matrix gram(k, k);
    Matrix rhs(k, 1);
    double undemeaned_mass = 0.0;  // reference scale for the degeneracy check
    for (std::size_t p = 0; p < k; ++p) {
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) mass += beta(i, p) * beta(i, p);
        undemeaned_mass = std::max(undemeaned_mass, mass);
        for (std::size_t q = p; q < k; ++q) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += (beta(i, p) - beta_mean[p]) * (beta(i, q) - beta_mean[q]);
            gram(p, q) = gram(q, p) = s;
        }
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r += (beta(i, p) - beta_mean[p]) * (ybar[i] - ybar_mean);
        rhs(p, 0) = r;
    }
    // M beta = 0 (loadings identical across assets) leaves a Gram that is tiny
    // relative to the loading mass itself; the self-relative pivot check alone
    // cannot see that.
    double max_diag = 0.0;
    for (std::size_t p = 0; p < k; ++p) max_diag = std::max(max_diag, gram(p, p));
    if (max_diag <= 1e-12 * undemeaned_mass) {
        throw SingularBetaGramError(
            "fit: demeaned loadings are numerically zero (identical loadings across assets)");
    }
    Matrix solved;
    try {
        solved = solve_spd(gram, rhs);
    } catch (const SingularMatrixError& e) {
        throw SingularBetaGramError(std::string("fit: demeaned loading Gram is singular: ") +
                                    e.what());
    }
    return solved.col(0);
}

Matrix residuals_against_factors(const ReturnPanel& returns, const Matrix& factor_values,
                                 const std::vector<double>& alphas, const Matrix& beta) {
    const std::size_t n = returns.n();
    const std::size_t t = returns.t();
    const std::size_t k = beta.cols();
    Matrix resid(n, t);
    for (std::size_t i = 0; i < n; ++i) {
        const auto yrow = returns.excess_returns.row(i);
        auto rrow = resid.row(i);
        for (std::size_t c = 0; c < t; ++c) {
            double fitted = alphas[i];
            for (std::size_t p = 0; p < k; ++p) fitted += beta(i, p) * factor_values(p, c);
            rrow[c] = yrow[c] - fitted;
        }
    }
    return resid;
}

}  // namespace

AlphaFit fit_ols(const ReturnPanel& returns, const FactorPanel& factors) {
    require_fit_ready(returns, factors);
    const std::size_t n = returns.n();
    const std::size_t k = factors.k();

    const std::vector<double> ybar = row_means(returns.excess_returns);
    const std::vector<double> fbar = k > 0 ? row_means(factors.values) : std::vector<double>();

    Matrix beta = time_series_betas(returns, factors, fbar);

    std::vector<double> alphas(n);
    for (std::size_t i = 0; i < n; ++i) {
        double b_f = 0.0;
        for (std::size_t p = 0; p < k; ++p) b_f += beta(i, p) * fbar[p];
        alphas[i] = ybar[i] - b_f;
    }

    AlphaFit fit;
    fit.estimator = Estimator::OLS;
    fit.alphas = std::move(alphas);
    fit.residuals = residuals_against_factors(returns, factors.values, fit.alphas, beta);
    fit.betas = std::move(beta);
    fit.scale = pooled_scale_or_throw(fit.residuals, returns.excess_returns);
    return fit;
}

FmIntermediate compute_fm_intermediate(const ReturnPanel& returns, const FactorPanel& factors) {
    require_fit_ready(returns, factors);
    if (returns.n() <= factors.k()) {
        throw InvalidArgumentError("fit_fama_macbeth: requires N > K");
    }
    FmIntermediate im;
    im.ybar = row_means(returns.excess_returns);
    im.fbar = row_means(factors.values);
    im.beta_hat = time_series_betas(returns, factors, im.fbar);
    im.lambda_hat = cross_sectional_lambda(im.beta_hat, im.ybar);
    return im;
}

AlphaFit fit_fama_macbeth(const ReturnPanel& returns, const FactorPanel& factors) {
    FmIntermediate im = compute_fm_intermediate(returns, factors);
    const std::size_t n = returns.n();
    const std::size_t k = factors.k();

    std::vector<double> alphas(n);
    for (std::size_t i = 0; i < n; ++i) {
        double b_l = 0.0;
        for (std::size_t p = 0; p < k; ++p) b_l += im.beta_hat(i, p) * im.lambda_hat[p];
        alphas[i] = im.ybar[i] - b_l;
    }

    AlphaFit fit;
    fit.estimator = Estimator::FM;
    fit.alphas = std::move(alphas);
    fit.residuals = residuals_against_factors(returns, factors.values, fit.alphas, im.beta_hat);
    fit.betas = std::move(im.beta_hat);
    fit.lambda = std::move(im.lambda_hat);
    fit.scale = pooled_scale_or_throw(fit.residuals, returns.excess_returns);
    return fit;
}

PcIntermediate compute_pc_intermediate(const ReturnPanel& returns, std::size_t k) {
    require_fit_ready(returns, FactorPanel{});
    const std::size_t n = returns.n();
    const std::size_t t = returns.t();
    if (k < 1 || k >= std::min(n, t)) {
        throw InvalidKError("fit_pca: k must satisfy 1 <= k < min(N, T), got k = " +
                            std::to_string(k));
    }

    const std::vector<double> ybar = row_means(returns.excess_returns);
    Matrix demeaned(n, t);
    for (std::size_t i = 0; i < n; ++i) {
        const auto yrow = returns.excess_returns.row(i);
        auto drow = demeaned.row(i);
        for (std::size_t c = 0; c < t; ++c) drow[c] = yrow[c] - ybar[i];
    }

    PcIntermediate im;
    im.sigma_y = Matrix(n, n);
    const double inv_nt = 1.0 / (static_cast<double>(n) * static_cast<double>(t));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            const auto ri = demeaned.row(i);
            const auto rj = demeaned.row(j);
            for (std::size_t c = 0; c < t; ++c) s += ri[c] * rj[c];
            im.sigma_y(i, j) = im.sigma_y(j, i) = s * inv_nt;
        }
    }

    im.eigen = top_k_eigen(im.sigma_y, k);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    im.beta_pc = Matrix(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) im.beta_pc(i, p) = sqrt_n * im.eigen.vectors(i, p);

    im.lambda_pc = cross_sectional_lambda(im.beta_pc, ybar);

    im.fhat = Matrix(k, t);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t c = 0; c < t; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += im.beta_pc(i, p) * demeaned(i, c);
            im.fhat(p, c) = s * inv_n;
        }
    }
    return im;
}

AlphaFit fit_pca(const ReturnPanel& returns, std::size_t k) {
    PcIntermediate im = compute_pc_intermediate(returns, k);
    const std::size_t n = returns.n();

    const std::vector<double> ybar = row_means(returns.excess_returns);
    std::vector<double> alphas(n);
    for (std::size_t i = 0; i < n; ++i) {
        double b_l = 0.0;
        for (std::size_t p = 0; p < k; ++p) b_l += im.beta_pc(i, p) * im.lambda_pc[p];
        alphas[i] = ybar[i] - b_l;
    }

    AlphaFit fit;
    fit.estimator = Estimator::PC;
    fit.alphas = std::move(alphas);
    fit.residuals = residuals_against_factors(returns, im.fhat, fit.alphas, im.beta_pc);
    fit.betas = std::move(im.beta_pc);
    fit.lambda = std::move(im.lambda_pc);
    fit.eigen = std::move(im.eigen);
    fit.scale = pooled_scale_or_throw(fit.residuals, returns.excess_returns);
    return fit;
}

}  // namespace alphamax
