#include "alphamax/alpha_test.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "alphamax/rng.hpp"

namespace alphamax {

std::vector<std::string> config_warnings(const TestConfig& config) {
    std::vector<std::string> warnings;
    if (config.nu == 4.0) {
        warnings.push_back(
            "nu = 4 is the boundary of the admissible moment range; inference is "
            "asymptotically valid only for nu > 4");
    }
    return warnings;
}

namespace {

void check_config(const TestConfig& config) {
    if (!(config.nu >= 4.0)) {
        throw InvalidArgumentError("TestConfig: nu must be >= 4, got " +
                                   std::to_string(config.nu));
    }
    if (!(config.tau > 0.0 && config.tau < 1.0)) {
        throw InvalidTauError("TestConfig: tau must lie in (0, 1), got " +
                              std::to_string(config.tau));
    }
}

}  // namespace

std::vector<double> compute_psi(const AlphaFit& fit, const TestConfig& config, std::size_t t_len,
                                std::size_t n_len) {
    check_config(config);
    if (!(fit.scale > 0.0)) {
        throw DegenerateScaleError("compute_psi: fit scale must be positive");
    }
    if (fit.alphas.size() != n_len) {
        throw InvalidArgumentError("compute_psi: n_len does not match the fit");
    }

    const double rate_base = fit.estimator == Estimator::PC
                                 ? static_cast<double>(std::min(n_len, t_len))
                                 : static_cast<double>(t_len);
    double exponent;
    if (config.exponent_mode == ExponentMode::Standard) {
        exponent = 1.0 / config.nu;
    } else {
        const double upper = 0.5 - (2.0 / config.nu) * std::log(static_cast<double>(n_len)) /
                                       std::log(static_cast<double>(t_len));
        if (!(config.delta > 0.0 && config.delta < upper)) {
            throw DeltaOutOfRangeError("compute_psi: delta = " + std::to_string(config.delta) +
                                       " outside (0, " + std::to_string(upper) +
                                       ") for this panel");
        }
        exponent = config.delta;
    }

    const double rate = std::pow(rate_base, exponent);
    const double half_nu = config.nu / 2.0;
    std::vector<double> psi(n_len);
    for (std::size_t i = 0; i < n_len; ++i) {
        psi[i] = std::pow(std::abs(rate * fit.alphas[i] / fit.scale), half_nu);
    }
    return psi;
}

std::pair<double, double> norming_constants(std::size_t n_len) {
    if (n_len < 3) {
        throw NTooSmallError("norming_constants: need N >= 3, got " + std::to_string(n_len));
    }
    const double n = static_cast<double>(n_len);
    const double two_log_n = 2.0 * std::log(n);
    const double root = std::sqrt(two_log_n);
    const double b_n = root - (std::log(std::log(n)) + std::log(4.0 * std::numbers::pi)) /
                                  (2.0 * root);
    const double a_n = b_n / (1.0 + b_n * b_n);
    return {a_n, b_n};
}

double critical_value(std::size_t n_len, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw InvalidTauError("critical_value: tau must lie in (0, 1), got " +
                              std::to_string(tau));
    }
    const auto [a_n, b_n] = norming_constants(n_len);
    return b_n - a_n * std::log(-std::log(1.0 - tau));
}

double gumbel_cdf(double x) {
    const double v = std::exp(-std::exp(-x));
    return std::clamp(v, 0.0, 1.0);
}

std::vector<double> omega_vector(std::uint64_t seed, std::size_t n_len) {
    return gaussian(StreamKey::root(seed), n_len);
}

TestOutcome run_one_shot(const AlphaFit& fit, const TestConfig& config) {
    const std::size_t n = fit.n();
    const std::size_t t = fit.t();

    TestOutcome out;
    out.config = config;
    out.estimator = fit.estimator;
    out.psi = compute_psi(fit, config, t, n);
    const std::vector<double> omega = omega_vector(config.seed, n);

    out.z.resize(n);
    out.z_max = -std::numeric_limits<double>::infinity();
    out.argmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.z[i] = out.psi[i] + omega[i];
        if (out.z[i] > out.z_max) {
            out.z_max = out.z[i];
            out.argmax = i;
        }
    }

    const auto [a_n, b_n] = norming_constants(n);
    out.a_n = a_n;
    out.b_n = b_n;
    out.critical_value = b_n - a_n * std::log(-std::log(1.0 - config.tau));
    out.p_value = 1.0 - gumbel_cdf((out.z_max - b_n) / a_n);
    out.reject = out.z_max > out.critical_value;
    return out;
}

}  // namespace alphamax
