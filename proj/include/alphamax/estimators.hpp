#pragma once

#include "alphamax/panel.hpp"

namespace alphamax {

/// Intermediates of the two-pass (Fama-MacBeth) estimator: time-series slopes,
/// cross-sectional risk premia, and the sample means they were built from.
struct FmIntermediate {
    Matrix beta_hat;                 // N x K
    std::vector<double> lambda_hat;  // K
    std::vector<double> ybar;        // N
    std::vector<double> fbar;        // K
};

/// Intermediates of the principal-component estimator.
struct PcIntermediate {
    Matrix sigma_y;                  // N x N second-moment matrix of demeaned returns
    Matrix beta_pc;                  // N x K, normalized so beta'beta = N I_K
    std::vector<double> lambda_pc;   // K
    Matrix fhat;                     // K x T recovered factors
    EigenPairs eigen;                // top-k eigenpairs of sigma_y
};

/// Per-asset time-series OLS with intercept.
///
/// For asset i, beta_i solves the centered normal equations
///   [sum_t (f_t - fbar)(f_t - fbar)'] beta_i = sum_t (f_t - fbar) y_{i,t},
/// alpha_i = ybar_i - beta_i' fbar, u_{i,t} = y_{i,t} - alpha_i - beta_i' f_t,
/// and the pooled scale is s = sqrt(sum_{i,t} u^2 / (N T)).
///
/// Throws SingularFactorCovarianceError for collinear/constant factors and
/// DegenerateScaleError when s <= 1e-14 * rms(y) (an exactly fitting panel).
AlphaFit fit_ols(const ReturnPanel& returns, const FactorPanel& factors);

/// Two-pass estimator for non-tradable observable factors.
///
/// Step 1: time-series OLS slopes beta_i (identical to fit_ols betas).
/// Step 2: lambda = (beta' M beta)^{-1} (beta' M ybar) with M = I - 11'/N.
/// Step 3: alpha_i = ybar_i - beta_i' lambda, residuals
///         u_{i,t} = y_{i,t} - (alpha_i + beta_i' f_t), pooled scale as above.
///
/// Throws SingularBetaGramError when the demeaned loadings are collinear
/// (e.g. identical loadings across assets).
AlphaFit fit_fama_macbeth(const ReturnPanel& returns, const FactorPanel& factors);

/// Principal-component estimator for latent factors.
///
/// Sigma_y = sum_t ytilde_t ytilde_t' / (N T) with ytilde_t = y_t - ybar;
/// beta = sqrt(N) times the top-k unit eigenvectors (so beta'beta = N I_K);
/// lambda and alpha as in the two-pass step; fhat_t = beta' ytilde_t / N;
/// residuals u_{i,t} = y_{i,t} - (alpha_i + beta_i' fhat_t).
///
/// Requires 1 <= k < min(N, T) (InvalidKError otherwise).
AlphaFit fit_pca(const ReturnPanel& returns, std::size_t k);

/// Steps 1-2 of the two-pass estimator, exposed for diagnostics and tests.
FmIntermediate compute_fm_intermediate(const ReturnPanel& returns, const FactorPanel& factors);

/// PCA decomposition and factor recovery, exposed for diagnostics and tests.
PcIntermediate compute_pc_intermediate(const ReturnPanel& returns, std::size_t k);

}  // namespace alphamax
