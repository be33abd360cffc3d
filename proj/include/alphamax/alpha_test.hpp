#pragma once

#include <cstdint>
#include <utility>

#include "alphamax/panel.hpp"

namespace alphamax {

/// How the convergence-rate factor enters the alpha transform: Standard uses
/// exponent 1/nu on the rate base; Delta uses a user-chosen exponent, admissible
/// only while 0 < delta < 1/2 - (2/nu) log N / log T for the panel at hand.
enum class ExponentMode { Standard, Delta };

struct TestConfig {
    double nu = 4.0;    // moment parameter, >= 4
    double tau = 0.05;  // nominal level, in (0, 1)
    ExponentMode exponent_mode = ExponentMode::Standard;
    double delta = 0.0;  // only read in Delta mode
    std::uint64_t seed = 0;
};

/// Non-fatal configuration notes (currently: nu == 4 sits on the boundary of
/// the theory; valid in practice for short samples but worth flagging).
std::vector<std::string> config_warnings(const TestConfig& config);

/// Outcome of one randomized max test.
struct TestOutcome {
    std::vector<double> psi;  // N, nonnegative
    std::vector<double> z;    // psi + standard normal perturbation
    double z_max = 0.0;
    std::size_t argmax = 0;  // first index attaining the max
    double a_n = 0.0;
    double b_n = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;  // asymptotic, from the Gumbel limit
    bool reject = false;
    TestConfig config;
    Estimator estimator = Estimator::OLS;
};

/// Nonnegative per-asset transform of the fitted alphas:
///   psi_i = | R^e alpha_i / s | ^ (nu / 2)
/// with rate base R = T for OLS/FM fits and R = min(N, T) for PC fits, and
/// exponent e = 1/nu (Standard) or delta (Delta mode).
std::vector<double> compute_psi(const AlphaFit& fit, const TestConfig& config, std::size_t t_len,
                                std::size_t n_len);

/// Norming constants (a_N, b_N) of the Gumbel limit:
///   b_N = sqrt(2 log N) - (log log N + log 4 pi) / (2 sqrt(2 log N)),
///   a_N = b_N / (1 + b_N^2).
/// Requires n_len >= 3.
std::pair<double, double> norming_constants(std::size_t n_len);

/// Asymptotic critical value c_tau = b_N - a_N log(-log(1 - tau)).
double critical_value(std::size_t n_len, double tau);

/// exp(-exp(-x)), clamped to [0, 1].
double gumbel_cdf(double x);

/// The standard-normal perturbations used by the randomized test: omega_i is
/// the i-th gaussian of the stream rooted at `seed`. Shared with the
/// de-randomizer, which feeds per-replication seeds through the same path.
std::vector<double> omega_vector(std::uint64_t seed, std::size_t n_len);

/// One randomized max test: z_i = psi_i + omega_i with omega drawn from
/// config.seed, Z = max_i z_i, rejecting when Z exceeds the critical value.
/// Deterministic given (fit, config).
TestOutcome run_one_shot(const AlphaFit& fit, const TestConfig& config);

}  // namespace alphamax
