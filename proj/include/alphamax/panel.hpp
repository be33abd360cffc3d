#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alphamax/matrix.hpp"

namespace alphamax {

/// N x T panel of excess returns (percent per period) with asset/date labels.
/// Dates are opaque ordered labels; the methods only use ordering and lengths.
struct ReturnPanel {
    std::vector<std::string> assets;  // length N
    std::vector<std::string> dates;   // length T
    Matrix excess_returns;            // N x T

    ReturnPanel() = default;
    ReturnPanel(std::vector<std::string> assets_, std::vector<std::string> dates_,
                Matrix returns_);

    std::size_t n() const { return excess_returns.rows(); }
    std::size_t t() const { return excess_returns.cols(); }
};

/// K x T panel of observed factor realizations. K = 0 encodes the latent-factor
/// case where no factors are observed.
struct FactorPanel {
    std::vector<std::string> names;  // length K
    Matrix values;                   // K x T

    FactorPanel() = default;
    FactorPanel(std::vector<std::string> names_, Matrix values_);

    std::size_t k() const { return values.rows(); }
    std::size_t t() const { return values.cols(); }

    /// Sub-panel with the named factors, in the given order.
    FactorPanel subset(const std::vector<std::string>& which) const;
};

enum class Estimator { OLS, FM, PC };

const char* estimator_name(Estimator e);

/// Fitted alpha model: per-asset intercepts and loadings, the residual matrix,
/// and the pooled residual scale s = sqrt(sum(u^2) / (N T)). FM and PC fits
/// carry the estimated risk premia; PC fits also carry the eigenpairs that
/// produced the loadings.
struct AlphaFit {
    Estimator estimator = Estimator::OLS;
    std::vector<double> alphas;  // N
    Matrix betas;                // N x K
    Matrix residuals;            // N x T
    double scale = 0.0;
    std::optional<std::vector<double>> lambda;  // K (FM/PC)
    std::optional<EigenPairs> eigen;            // PC

    std::size_t n() const { return alphas.size(); }
    std::size_t t() const { return residuals.cols(); }
    std::size_t k() const { return betas.cols(); }
};

struct ValidationIssue {
    std::string code;     // stable machine-readable tag
    std::string message;  // human-readable detail
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// Report-style check that a (returns, factors) pair is fit-ready: consistent
/// dimensions, no NaN, N >= 3, T >= K + 2, nonsingular factor covariance.
/// An empty report means every estimator precondition holds.
ValidationReport validate_panel(const ReturnPanel& returns, const FactorPanel& factors);

}  // namespace alphamax
