#include "alphamax/panel.hpp"

#include <algorithm>
#include <cmath>

namespace alphamax {

ReturnPanel::ReturnPanel(std::vector<std::string> assets_, std::vector<std::string> dates_,
                         Matrix returns_)
    : assets(std::move(assets_)), dates(std::move(dates_)), excess_returns(std::move(returns_)) {
    if (assets.size() != excess_returns.rows() || dates.size() != excess_returns.cols()) {
        throw InvalidArgumentError("ReturnPanel: label lengths do not match the return matrix");
    }
}

FactorPanel::FactorPanel(std::vector<std::string> names_, Matrix values_)
    : names(std::move(names_)), values(std::move(values_)) {
    if (names.size() != values.rows()) {
        throw InvalidArgumentError("FactorPanel: name count does not match the value matrix");
    }
}

FactorPanel FactorPanel::subset(const std::vector<std::string>& which) const {
    Matrix sub(which.size(), t());
    std::vector<std::string> sub_names;
    sub_names.reserve(which.size());
    for (std::size_t r = 0; r < which.size(); ++r) {
        const auto it = std::find(names.begin(), names.end(), which[r]);
        if (it == names.end()) {
            throw InvalidArgumentError("FactorPanel::subset: unknown factor '" + which[r] + "'");
        }
        const std::size_t src = static_cast<std::size_t>(it - names.begin());
        for (std::size_t c = 0; c < t(); ++c) sub(r, c) = values(src, c);
        sub_names.push_back(which[r]);
    }
    return FactorPanel(std::move(sub_names), std::move(sub));
}

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::OLS: return "OLS";
        case Estimator::FM: return "FM";
        case Estimator::PC: return "PC";
    }
    return "?";
}

std::string ValidationReport::to_string() const {
    if (issues.empty()) return "ok";
    std::string s;
    for (const auto& issue : issues) {
        if (!s.empty()) s += "; ";
        s += issue.code + ": " + issue.message;
    }
    return s;
}

ValidationReport validate_panel(const ReturnPanel& returns, const FactorPanel& factors) {
    ValidationReport report;
    auto add = [&](std::string code, std::string message) {
        report.issues.push_back({std::move(code), std::move(message)});
    };

    const std::size_t n = returns.n();
    const std::size_t t = returns.t();
    const std::size_t k = factors.k();

    if (returns.assets.size() != n || returns.dates.size() != t) {
        add("dimension_mismatch", "return labels do not match the return matrix");
    }
    if (factors.names.size() != k) {
        add("dimension_mismatch", "factor names do not match the factor matrix");
    }
    if (k > 0 && factors.t() != t) {
        add("dimension_mismatch", "factor panel spans " + std::to_string(factors.t()) +
                                      " periods, returns span " + std::to_string(t));
    }
    for (double v : returns.excess_returns.data()) {
        if (std::isnan(v)) {
            add("nan_entry", "return matrix contains NaN");
            break;
        }
    }
    for (double v : factors.values.data()) {
        if (std::isnan(v)) {
            add("nan_entry", "factor matrix contains NaN");
            break;
        }
    }
    if (n < 3) {
        add("insufficient_cross_section", "need at least 3 assets, have " + std::to_string(n));
    }
    if (t < k + 2) {
        add("insufficient_observations",
            "need T >= K + 2, have T = " + std::to_string(t) + ", K = " + std::to_string(k));
    }
    if (k > 0 && factors.t() == t && t >= 2) {
        // Centered factor Gram; a failed Cholesky flags zero variance or
        // collinear factors.
        std::vector<double> mean(k, 0.0);
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t c = 0; c < t; ++c) mean[p] += factors.values(p, c);
            mean[p] /= static_cast<double>(t);
        }
        Matrix gram(k, k);
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t q = p; q < k; ++q) {
                double s = 0.0;
                for (std::size_t c = 0; c < t; ++c) {
                    s += (factors.values(p, c) - mean[p]) * (factors.values(q, c) - mean[q]);
                }
                gram(p, q) = gram(q, p) = s;
            }
        }
        try {
            solve_spd(gram, Matrix::identity(k));
        } catch (const SingularMatrixError&) {
            add("singular_factor_covariance", "factor sample covariance is singular");
        }
    }
    return report;
}

}  // namespace alphamax
