#include "alphamax/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace alphamax {

namespace {

// Fixed design constants of the three-factor simulation.
constexpr double kFbar[kDgpFactorCount] = {0.53, 0.19, 0.19};
constexpr double kPhi[kDgpFactorCount] = {-0.1, 0.2, -0.2};
constexpr double kBetaLo[kDgpFactorCount] = {0.3, -1.0, -0.6};
constexpr double kBetaHi[kDgpFactorCount] = {1.8, 1.0, 0.9};
constexpr double kGammaLo = 0.7;
constexpr double kGammaHi = 0.9;
constexpr double kGarchOmegaLo = 0.01, kGarchOmegaHi = 0.05;
constexpr double kGarchArchLo = 0.01, kGarchArchHi = 0.04;
constexpr double kGarchBetaLo = 0.85, kGarchBetaHi = 0.95;
constexpr double kLambdaLo = 0.0, kLambdaHi = 0.5;
constexpr std::size_t kBurnIn = 100;

std::size_t floor_pow(std::size_t n, double exponent) {
    return static_cast<std::size_t>(
        std::floor(std::pow(static_cast<double>(n), exponent) + 1e-9));
}

std::size_t ceil_fraction(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

void check_config(const DgpConfig& c) {
    if (c.n < 3) {
        throw InvalidConfigError("dgp: need n >= 3, got " + std::to_string(c.n));
    }
    if (c.t < kDgpFactorCount + 2) {
        throw InvalidConfigError("dgp: need t >= K + 2 = " +
                                 std::to_string(kDgpFactorCount + 2));
    }
    if (c.error_kind == ErrorKind::StudentT && !(c.student_df > 4.0)) {
        throw InvalidConfigError("dgp: StudentT needs df > 4, got " +
                                 std::to_string(c.student_df));
    }
    if (!(std::abs(c.phi_g) < 1.0)) {
        throw InvalidConfigError("dgp: |phi_g| must be < 1, got " + std::to_string(c.phi_g));
    }
    if (c.alpha_scheme == AlphaScheme::SparseNormal &&
        !(c.mispriced_fraction > 0.0 && c.mispriced_fraction <= 1.0)) {
        throw InvalidConfigError("dgp: mispriced fraction must lie in (0, 1], got " +
                                 std::to_string(c.mispriced_fraction));
    }
}

// First `take` entries of a seeded uniform shuffle of {0, ..., n-1}. Taking a
// larger `take` under the same key extends the smaller selection, which keeps
// sparse-alternative subsets nested across fractions.
std::vector<std::size_t> select_subset(const StreamKey& key, std::size_t n, std::size_t take) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    take = std::min(take, n);
    for (std::size_t j = 0; j < take; ++j) {
        const auto span = static_cast<double>(n - j);
        auto offset = static_cast<std::size_t>(uniform01(key, j) * span);
        if (offset >= n - j) offset = n - j - 1;
        std::swap(idx[j], idx[j + offset]);
    }
    idx.resize(take);
    return idx;
}

struct LatentDrivers {
    Matrix factor_path;     // K x T: f_t (Tradable) or v_t (NonTradable/Latent)
    std::vector<double> g;  // T
    Matrix xi;              // N x T
};

Matrix simulate_var(const StreamKey& zeta, const StreamKey& init, std::size_t t_len,
                    bool with_intercept) {
    Matrix path(kDgpFactorCount, t_len);
    double state[kDgpFactorCount];
    for (std::size_t p = 0; p < kDgpFactorCount; ++p) {
        const double mean = with_intercept ? kFbar[p] / (1.0 - kPhi[p]) : 0.0;
        const double sd = std::sqrt(1.0 / (1.0 - kPhi[p] * kPhi[p]));
        state[p] = mean + sd * gaussian_at(init, p);
    }
    for (std::size_t step = 0; step < kBurnIn + t_len; ++step) {
        for (std::size_t p = 0; p < kDgpFactorCount; ++p) {
            const double innov = gaussian_at(zeta, step * kDgpFactorCount + p);
            state[p] = (with_intercept ? kFbar[p] : 0.0) + kPhi[p] * state[p] + innov;
            if (step >= kBurnIn) path(p, step - kBurnIn) = state[p];
        }
    }
    return path;
}

std::vector<double> simulate_g(const StreamKey& chi, const StreamKey& init, double phi_g,
                               std::size_t t_len) {
    std::vector<double> g(t_len);
    const double sd0 = std::sqrt(1.0 / (1.0 - phi_g * phi_g));
    // init indices 0..K-1 belong to the VAR start, index K to g.
    double state = sd0 * gaussian_at(init, kDgpFactorCount);
    for (std::size_t step = 0; step < kBurnIn + t_len; ++step) {
        state = phi_g * state + gaussian_at(chi, step);
        if (step >= kBurnIn) g[step - kBurnIn] = state;
    }
    return g;
}

Matrix simulate_xi(const DgpConfig& c, const StreamKey& xi_key, const StreamKey& param_key) {
    const std::size_t n = c.n;
    const std::size_t t = c.t;
    Matrix xi(n, t);
    switch (c.error_kind) {
        case ErrorKind::Gaussian:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t s = 0; s < t; ++s) xi(i, s) = gaussian_at(xi_key, i * t + s);
            break;
        case ErrorKind::StudentT:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t s = 0; s < t; ++s)
                    xi(i, s) = student_t_at(xi_key, c.student_df, i * t + s);
            break;
        case ErrorKind::Garch:
            for (std::size_t i = 0; i < n; ++i) {
                const double omega =
                    uniform_range_at(param_key, 3 * i, kGarchOmegaLo, kGarchOmegaHi);
                const double arch =
                    uniform_range_at(param_key, 3 * i + 1, kGarchArchLo, kGarchArchHi);
                const double garch =
                    uniform_range_at(param_key, 3 * i + 2, kGarchBetaLo, kGarchBetaHi);
                // Lagged recursion h2_t = omega + arch xi_{t-1}^2 + garch h2_{t-1},
                // started at the stationary variance.
                double h2 = omega / (1.0 - arch - garch);
                double prev_xi = std::sqrt(h2) * gaussian_at(xi_key, i * (t + 1));
                for (std::size_t s = 0; s < t; ++s) {
                    h2 = omega + arch * prev_xi * prev_xi + garch * h2;
                    const double draw = std::sqrt(h2) * gaussian_at(xi_key, i * (t + 1) + s + 1);
                    xi(i, s) = draw;
                    prev_xi = draw;
                }
            }
            break;
    }
    return xi;
}

LatentDrivers simulate_drivers(const DgpConfig& c) {
    LatentDrivers d;
    const bool tradable = c.model_kind == ModelKind::Tradable;
    d.factor_path = simulate_var(dgp_stream(c.seed, dgp_streams::kZeta),
                                 dgp_stream(c.seed, dgp_streams::kInit), c.t, tradable);
    d.g = simulate_g(dgp_stream(c.seed, dgp_streams::kChi),
                     dgp_stream(c.seed, dgp_streams::kInit), c.phi_g, c.t);
    d.xi = simulate_xi(c, dgp_stream(c.seed, dgp_streams::kXi),
                       dgp_stream(c.seed, dgp_streams::kGarchParams));
    return d;
}

}  // namespace

StreamKey dgp_stream(std::uint64_t seed, std::uint64_t purpose) {
    return StreamKey::root(seed).child(purpose);
}

SimulatedPanel generate(const DgpConfig& config) {
    check_config(config);
    const std::size_t n = config.n;
    const std::size_t t = config.t;
    const std::size_t k = kDgpFactorCount;

    const StreamKey load_key = dgp_stream(config.seed, dgp_streams::kLoadings);
    Matrix beta(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p)
            beta(i, p) = uniform_range_at(load_key, i * k + p, kBetaLo[p], kBetaHi[p]);

    if (config.pricing_strength == PricingStrength::OneStrongRestSemiStrong) {
        const std::size_t zero_count = n - floor_pow(n, 0.8);
        for (std::size_t i :
             select_subset(dgp_stream(config.seed, dgp_streams::kPricingSelect), n, zero_count)) {
            beta(i, 1) = 0.0;
            beta(i, 2) = 0.0;
        }
    }

    // Omitted-factor loadings gamma; the strength setting decides how many stay
    // nonzero (all, floor(N^0.8), floor(N^0.4), or none).
    std::vector<double> gamma(n, 0.0);
    if (config.omitted_strength != OmittedStrength::None) {
        const StreamKey gamma_key = dgp_stream(config.seed, dgp_streams::kGamma);
        for (std::size_t i = 0; i < n; ++i)
            gamma[i] = uniform_range_at(gamma_key, i, kGammaLo, kGammaHi);
        std::size_t keep = n;
        if (config.omitted_strength == OmittedStrength::SemiStrong) keep = floor_pow(n, 0.8);
        if (config.omitted_strength == OmittedStrength::Weak) keep = floor_pow(n, 0.4);
        if (keep < n) {
            std::vector<char> keep_mask(n, 0);
            for (std::size_t i :
                 select_subset(dgp_stream(config.seed, dgp_streams::kOmittedSelect), n, keep))
                keep_mask[i] = 1;
            for (std::size_t i = 0; i < n; ++i)
                if (!keep_mask[i]) gamma[i] = 0.0;
        }
    }

    double lambda[kDgpFactorCount] = {0.0, 0.0, 0.0};
    if (config.model_kind != ModelKind::Tradable) {
        const StreamKey lambda_key = dgp_stream(config.seed, dgp_streams::kLambda);
        for (std::size_t p = 0; p < k; ++p)
            lambda[p] = uniform_range_at(lambda_key, p, kLambdaLo, kLambdaHi);
    }

    std::vector<double> alphas(n, 0.0);
    std::vector<std::size_t> mispriced;
    if (config.alpha_scheme == AlphaScheme::SparseNormal) {
        const std::size_t m = ceil_fraction(config.mispriced_fraction, n);
        mispriced = select_subset(dgp_stream(config.seed, dgp_streams::kMispricedSelect), n, m);
        const StreamKey value_key = dgp_stream(config.seed, dgp_streams::kAlphaValues);
        for (std::size_t j = 0; j < mispriced.size(); ++j)
            alphas[mispriced[j]] = gaussian_at(value_key, j);
        std::sort(mispriced.begin(), mispriced.end());
    }

    const LatentDrivers drivers = simulate_drivers(config);

    Matrix returns(n, t);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = returns.row(i);
        for (std::size_t s = 0; s < t; ++s) {
            double common = 0.0;
            for (std::size_t p = 0; p < k; ++p) common += beta(i, p) * drivers.factor_path(p, s);
            if (config.model_kind != ModelKind::Tradable) {
                for (std::size_t p = 0; p < k; ++p) common += beta(i, p) * lambda[p];
            }
            row[s] = alphas[i] + common + gamma[i] * drivers.g[s] + drivers.xi(i, s);
        }
    }

    // Zero-padded labels sort lexicographically, which the CSV readers require.
    auto padded = [](char prefix, std::size_t value) {
        std::string digits = std::to_string(value);
        return prefix + std::string(6 - std::min<std::size_t>(6, digits.size()), '0') + digits;
    };
    std::vector<std::string> asset_names(n);
    for (std::size_t i = 0; i < n; ++i) asset_names[i] = padded('A', i + 1);
    std::vector<std::string> date_names(t);
    for (std::size_t s = 0; s < t; ++s) date_names[s] = padded('P', s + 1);

    SimulatedPanel panel;
    panel.returns = ReturnPanel(std::move(asset_names), date_names, std::move(returns));
    if (config.model_kind == ModelKind::Latent) {
        panel.factors = FactorPanel({}, Matrix(0, t));
    } else {
        panel.factors = FactorPanel({"F1", "F2", "F3"}, drivers.factor_path);
    }
    panel.true_alphas = std::move(alphas);
    panel.mispriced_indices = std::move(mispriced);
    return panel;
}

bool MomentReport::all_within() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const MomentCheck& c) { return c.within; });
}

std::string MomentReport::to_string() const {
    std::string s;
    for (const auto& c : checks) {
        s += c.quantity + ": observed " + std::to_string(c.observed) + ", expected " +
             std::to_string(c.expected) + ", tol " + std::to_string(c.tolerance) +
             (c.within ? " [ok]\n" : " [OUT]\n");
    }
    return s;
}

namespace {

double sample_mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_var(std::span<const double> xs) {
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double lag1_autocorr(std::span<const double> xs) {
    const double m = sample_mean(xs);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t s = 0; s < xs.size(); ++s) {
        den += (xs[s] - m) * (xs[s] - m);
        if (s + 1 < xs.size()) num += (xs[s] - m) * (xs[s + 1] - m);
    }
    return num / den;
}

double excess_kurtosis(std::span<const double> xs) {
    const double m = sample_mean(xs);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(xs.size());
    m4 /= static_cast<double>(xs.size());
    return m4 / (m2 * m2) - 3.0;
}

}  // namespace

MomentReport sample_moments_check(const SimulatedPanel& panel, const DgpConfig& config) {
    MomentReport report;
    const std::size_t t = config.t;
    const double td = static_cast<double>(t);
    auto add = [&](std::string name, double obs, double expected, double tol) {
        report.checks.push_back({std::move(name), obs, expected, tol,
                                 std::abs(obs - expected) <= tol});
    };

    // Factor path: use the panel's factors when observed, else regenerate.
    const bool tradable = config.model_kind == ModelKind::Tradable;
    const Matrix factors =
        panel.factors.k() > 0
            ? panel.factors.values
            : simulate_var(dgp_stream(config.seed, dgp_streams::kZeta),
                           dgp_stream(config.seed, dgp_streams::kInit), t, tradable);
    for (std::size_t p = 0; p < kDgpFactorCount; ++p) {
        const auto row = factors.row(p);
        const double stat_mean = tradable ? kFbar[p] / (1.0 - kPhi[p]) : 0.0;
        const double stat_var = 1.0 / (1.0 - kPhi[p] * kPhi[p]);
        const double mean_sd = std::sqrt(stat_var / td * (1.0 + kPhi[p]) / (1.0 - kPhi[p]));
        add("factor" + std::to_string(p + 1) + "_mean", sample_mean(row), stat_mean,
            5.0 * mean_sd);
        add("factor" + std::to_string(p + 1) + "_autocorr", lag1_autocorr(row), kPhi[p],
            std::max(0.02, 5.0 / std::sqrt(td)));
    }

    const std::vector<double> g = simulate_g(dgp_stream(config.seed, dgp_streams::kChi),
                                             dgp_stream(config.seed, dgp_streams::kInit),
                                             config.phi_g, t);
    const double g_var_expected = 1.0 / (1.0 - config.phi_g * config.phi_g);
    add("g_variance", sample_var(g), g_var_expected, 0.05 * g_var_expected);

    // Innovation kurtosis, measured on the first asset's series.
    const Matrix xi = simulate_xi(config, dgp_stream(config.seed, dgp_streams::kXi),
                                  dgp_stream(config.seed, dgp_streams::kGarchParams));
    if (config.error_kind == ErrorKind::Gaussian) {
        add("xi_excess_kurtosis", excess_kurtosis(xi.row(0)), 0.0,
            std::max(0.1, 25.0 / std::sqrt(td)));
    } else if (config.error_kind == ErrorKind::StudentT) {
        const double expected = 6.0 / (config.student_df - 4.0);
        add("xi_excess_kurtosis", excess_kurtosis(xi.row(0)), expected, 0.15 * expected);
    }
    return report;
}

}  // namespace alphamax
