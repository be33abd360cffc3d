#pragma once

#include <optional>

#include "alphamax/derand.hpp"
#include "alphamax/dgp.hpp"

namespace alphamax {

struct GridCell {
    std::size_t n = 0;
    std::size_t t = 0;
};

/// One Monte Carlo experiment: a DGP template swept over an (N, T) grid with M
/// replications per cell. dgp.seed acts as the master seed; each replication
/// derives panel/test/derand sub-seeds from (cell index, replication index),
/// which makes reports independent of scheduling and worker count.
struct ExperimentSpec {
    DgpConfig dgp;
    std::vector<GridCell> grid;
    std::size_t replications = 100;
    TestConfig test;
    std::optional<DerandConfig> derand;
    std::vector<double> power_fractions;  // used by power_curve only
    std::size_t threads = 0;              // 0 = hardware concurrency
    std::size_t pca_factors = kDgpFactorCount;  // K handed to fit_pca in Latent mode
};

struct CellResult {
    std::size_t n = 0;
    std::size_t t = 0;
    std::string setting;
    std::size_t replications = 0;
    double rejection_rate_one_shot = 0.0;
    std::optional<double> rejection_rate_derand;
    double mc_std_error = 0.0;  // sqrt(r (1 - r) / M) of the one-shot rate
    double wall_time_ms = 0.0;
};

struct ExperimentReport {
    std::vector<CellResult> cells;
};

/// Sub-seed of (cell, replication, purpose) under a master seed; purposes are
/// 0 = panel, 1 = one-shot test, 2 = de-randomized rule.
std::uint64_t experiment_sub_seed(std::uint64_t master, std::size_t cell,
                                  std::size_t replication, std::uint64_t purpose);

/// Runs the experiment: per replication, generate a panel, fit the estimator
/// implied by dgp.model_kind (OLS for Tradable, FM for NonTradable, PCA for
/// Latent), run the one-shot test and optionally the de-randomized rule, and
/// aggregate rejection frequencies. A replication error aborts the run with
/// the offending cell/replication/seed in the message. Deterministic given
/// the spec, regardless of thread count.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// One run_experiment sweep per entry of power_fractions (fraction 0 = exact
/// null), with common random numbers across fractions so that the mispriced
/// sets are nested. Rows are labeled by fraction.
ExperimentReport power_curve(const ExperimentSpec& spec);

/// JSON document for the report; timing fields are volatile across runs and
/// are omitted unless include_timing is set.
std::string report_to_json(const ExperimentReport& report, bool include_timing = true);

/// Tidy CSV: one row per cell.
std::string report_to_csv(const ExperimentReport& report);

/// Table-layout CSV mirroring the usual presentation: one block per setting,
/// rows = T, columns = N.
std::string report_to_table_csv(const ExperimentReport& report);

}  // namespace alphamax
