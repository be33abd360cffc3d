#pragma once

#include <cstdint>
#include <iosfwd>

#include "alphamax/derand.hpp"

namespace alphamax {

/// Parsed security file. Two CSV schemas are accepted, detected from the
/// header (UTF-8, header row mandatory, decimal point, empty cell = missing):
///
///   schema A (prices):  date, rf, <asset>_P, <asset>_DY, ...
///   schema B (returns): date, rf, <asset>, ...
///
/// Schema A carries end-of-period prices and percent-per-annum dividend
/// yields; schema B carries pre-built excess returns (the rf column is parsed
/// for format uniformity but not consumed). The risk-free series must be
/// complete in schema A.
struct RawSecurityFile {
    std::vector<std::string> dates;   // length T, strictly increasing
    std::vector<double> risk_free;    // length T (NaN = missing)
    std::vector<std::string> assets;  // length N
    bool has_prices = false;          // true = schema A
    // Row-major N x T; NaN encodes a missing cell.
    std::vector<double> prices;           // schema A only
    std::vector<double> dividend_yields;  // schema A only
    std::vector<double> excess_returns;   // schema B only
};

/// Excess-return table that still carries missing cells; rolling windows drop
/// incomplete securities per window before fitting.
struct ReturnTable {
    std::vector<std::string> assets;
    std::vector<std::string> dates;
    std::vector<double> values;        // N x T row-major; only valid where !missing
    std::vector<std::uint8_t> missing; // N x T

    std::size_t n() const { return assets.size(); }
    std::size_t t() const { return dates.size(); }
    bool is_missing(std::size_t i, std::size_t s) const { return missing[i * t() + s] != 0; }
    double at(std::size_t i, std::size_t s) const { return values[i * t() + s]; }

    bool complete() const;
    /// Conversion for fully observed tables; throws InvalidArgumentError if
    /// any cell is missing.
    ReturnPanel to_panel() const;
    static ReturnTable from_panel(const ReturnPanel& panel);
};

RawSecurityFile read_security_csv(const std::string& path);

/// Factor file contents: the panel plus its date column, so callers can check
/// alignment against the return panel.
struct FactorFile {
    FactorPanel panel;
    std::vector<std::string> dates;
};

/// Factor CSV: `date, MKT, SMB, HML, RMW, CMA, MOM` (any subset of factor
/// columns is allowed); no missing cells.
FactorFile read_factor_csv(const std::string& path);

/// Excess returns from prices: r = 100 (P_t - P_{t-1}) / P_{t-1} + DY_t / 12,
/// excess = r - rf_t, first date dropped. Schema B files pass through (their
/// returns are already excess), also dropping nothing. Missing inputs yield
/// missing cells; a non-positive price throws NonPositivePriceError.
ReturnTable build_returns(const RawSecurityFile& raw);

/// One de-randomized decision per rolling window.
struct RollingResult {
    std::vector<std::string> window_ends;
    std::vector<double> q_values;
    std::vector<Decision> decisions;
    std::vector<std::size_t> n_per_window;

    std::size_t windows() const { return q_values.size(); }
};

/// Slides a `window`-period span one period at a time (T - window + 1 windows
/// in total). Each window keeps only securities with no missing value inside
/// the window, fits per-asset OLS on the selected factor columns, and applies
/// the de-randomized rule with the per-window seed
/// root(derand.master_seed).child(window index).
///
/// model_factors selects factor rows by name (empty = use all).
/// Throws WindowTooShortError when the window cannot support a fit,
/// NoSurvivingSecuritiesError when fewer than 3 securities survive a window.
RollingResult run_rolling(const ReturnTable& table, const FactorPanel& factors,
                          std::size_t window, const TestConfig& test, const DerandConfig& derand,
                          const std::vector<std::string>& model_factors = {},
                          std::size_t threads = 0);

/// Convenience overload for fully observed panels.
RollingResult run_rolling(const ReturnPanel& panel, const FactorPanel& factors,
                          std::size_t window, const TestConfig& test, const DerandConfig& derand,
                          const std::vector<std::string>& model_factors = {},
                          std::size_t threads = 0);

/// Plot-ready CSV `window_end,q_value,threshold,decision,n`; q values print at
/// full precision so a re-parse reproduces the result exactly.
void write_q_series(const RollingResult& result, double threshold, const std::string& path);
void write_q_series(const RollingResult& result, double threshold, std::ostream& out);

/// Re-parse of write_q_series output (round-trip check and plotting helper).
RollingResult read_q_series(const std::string& path);

/// Schema B writer for a fully observed panel (rf written as zeros). Values
/// print in shortest round-trip form, so read-back is bit-identical.
void write_panel_csv(const ReturnPanel& panel, const std::string& path);

/// Factor CSV writer.
void write_factor_csv(const FactorPanel& factors, const std::vector<std::string>& dates,
                      const std::string& path);

}  // namespace alphamax
