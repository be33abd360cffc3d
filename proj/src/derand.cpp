#include "alphamax/derand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "alphamax/rng.hpp"

namespace alphamax {

const char* decision_name(Decision d) {
    return d == Decision::RetainNull ? "RetainNull" : "RejectNull";
}

std::uint64_t derand_replication_seed(std::uint64_t master_seed, std::size_t replication) {
    return StreamKey::root(master_seed).child(replication).state;
}

std::size_t resolve_b_count(std::size_t requested, std::size_t n_len) {
    if (requested > 0) return requested;
    const double log_n = std::log(static_cast<double>(n_len));
    const auto b = static_cast<std::size_t>(std::floor(log_n * log_n + 0.5));
    return std::max<std::size_t>(b, 1);
}

double derand_threshold_value(DerandThreshold threshold, double tau, std::size_t b_count) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw InvalidTauError("derand: tau must lie in (0, 1), got " + std::to_string(tau));
    }
    const double b = static_cast<double>(b_count);
    if (threshold == DerandThreshold::LIL) {
        if (b_count <= 15) {
            throw BTooSmallForLILError("derand: LIL band needs B >= 16, got B = " +
                                       std::to_string(b_count));
        }
        return (1.0 - tau) -
               std::sqrt(tau * (1.0 - tau)) * std::sqrt(2.0 * std::log(std::log(b)) / b);
    }
    return (1.0 - tau) - std::pow(b, -0.25);
}

DerandReport run_derandomized(const AlphaFit& fit, const TestConfig& test_config,
                              const DerandConfig& config) {
    const std::size_t n = fit.n();
    const std::size_t t = fit.t();
    const std::size_t b_count = resolve_b_count(config.b_count, n);

    DerandReport report;
    report.b_used = b_count;
    report.threshold_value = derand_threshold_value(config.threshold, config.tau, b_count);

    TestConfig psi_config = test_config;
    psi_config.tau = config.tau;
    const std::vector<double> psi = compute_psi(fit, psi_config, t, n);
    const double c_tau = critical_value(n, config.tau);

    report.per_rep_z.resize(b_count);
    std::size_t retained = 0;
    for (std::size_t b = 0; b < b_count; ++b) {
        const std::uint64_t rep_seed = derand_replication_seed(config.master_seed, b);
        const StreamKey rep = StreamKey::root(rep_seed);
        double z_max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double z = psi[i] + gaussian_at(rep, i);
            z_max = std::max(z_max, z);
        }
        report.per_rep_z[b] = z_max;
        if (z_max <= c_tau) ++retained;
    }
    report.q_value = static_cast<double>(retained) / static_cast<double>(b_count);
    report.decision =
        report.q_value >= report.threshold_value ? Decision::RetainNull : Decision::RejectNull;
    return report;
}

}  // namespace alphamax
