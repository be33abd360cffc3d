#pragma once

#include "alphamax/alpha_test.hpp"

namespace alphamax {

/// Decision band for the retain fraction Q: LIL uses the iterated-logarithm
/// envelope (1-tau) - sqrt(tau(1-tau)) sqrt(2 log log B / B); FofB uses the
/// less conservative (1-tau) - B^{-1/4}.
enum class DerandThreshold { LIL, FofB };

enum class Decision { RetainNull, RejectNull };

const char* decision_name(Decision d);

struct DerandConfig {
    double tau = 0.05;
    std::size_t b_count = 0;  // 0 = auto: round(log^2 N), natural log, half-up
    DerandThreshold threshold = DerandThreshold::FofB;
    std::uint64_t master_seed = 0;
};

struct DerandReport {
    double q_value = 0.0;          // exact multiple of 1/B
    double threshold_value = 0.0;  // retain iff q_value >= threshold_value
    Decision decision = Decision::RetainNull;
    std::vector<double> per_rep_z;  // B max statistics
    std::size_t b_used = 0;
};

/// Seed of replication b: the fixed mixing chain root(master_seed).child(b).
/// Replication b of run_derandomized is exactly run_one_shot with this seed.
std::uint64_t derand_replication_seed(std::uint64_t master_seed, std::size_t replication);

/// Replication count after auto-resolution: round(log^2 N) when requested == 0.
std::size_t resolve_b_count(std::size_t requested, std::size_t n_len);

/// Decision band value for a given configuration and replication count.
/// Throws BTooSmallForLILError if B <= 15 under the LIL threshold.
double derand_threshold_value(DerandThreshold threshold, double tau, std::size_t b_count);

/// De-randomized decision rule: runs the randomized max test B times with
/// per-replication seeds derived from master_seed (replication b uses the seed
/// root(master_seed).child(b)), counts the retain fraction
/// Q = #{b : Z^(b) <= c_tau} / B, and retains the null iff Q clears the band.
///
/// psi is computed once; config.tau drives both c_tau and the band. The B
/// replications are independent by construction and are evaluated in a way
/// that is bit-identical whether run sequentially or concurrently.
DerandReport run_derandomized(const AlphaFit& fit, const TestConfig& test_config,
                              const DerandConfig& config);

}  // namespace alphamax
