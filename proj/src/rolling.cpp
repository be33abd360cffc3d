#include "alphamax/rolling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "alphamax/estimators.hpp"
#include "alphamax/parallel.hpp"
#include "alphamax/rng.hpp"

namespace alphamax {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Shortest round-trip formatting; keeps CSV serialization bit-exact.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view cell, const std::string& context) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw InvalidArgumentError("csv: cannot parse number '" + std::string(cell) + "' in " +
                                   context);
    }
    return v;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("csv: cannot open '" + path + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && rows.empty()) continue;
        if (line.empty()) continue;
        rows.push_back(split_line(line));
    }
    if (rows.empty()) {
        throw InvalidArgumentError("csv: '" + path + "' is empty");
    }
    const std::size_t width = rows.front().size();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != width) {
            throw InvalidArgumentError("csv: row " + std::to_string(r + 1) + " of '" + path +
                                       "' has " + std::to_string(rows[r].size()) +
                                       " cells, header has " + std::to_string(width));
        }
    }
    return rows;
}

void check_dates(const std::vector<std::string>& dates, const std::string& path) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw InvalidArgumentError("csv: dates in '" + path +
                                       "' must be strictly increasing strings; '" +
                                       dates[i - 1] + "' >= '" + dates[i] + "'");
        }
    }
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(),
                                                  suffix) == 0;
}

}  // namespace

bool ReturnTable::complete() const {
    return std::all_of(missing.begin(), missing.end(), [](std::uint8_t m) { return m == 0; });
}

ReturnPanel ReturnTable::to_panel() const {
    if (!complete()) {
        throw InvalidArgumentError("ReturnTable: cannot convert to panel with missing cells");
    }
    return ReturnPanel(assets, dates, Matrix(n(), t(), values));
}

ReturnTable ReturnTable::from_panel(const ReturnPanel& panel) {
    ReturnTable table;
    table.assets = panel.assets;
    table.dates = panel.dates;
    table.values = panel.excess_returns.data();
    table.missing.assign(table.values.size(), 0);
    return table;
}

RawSecurityFile read_security_csv(const std::string& path) {
    const auto rows = read_csv(path);
    const auto& header = rows.front();
    if (header.size() < 3 || header[0] != "date") {
        throw InvalidArgumentError("csv: '" + path +
                                   "' must start with columns date, rf, <securities...>");
    }
    if (header[1] != "rf") {
        throw MissingRiskFreeError("csv: '" + path + "' lacks the rf column");
    }

    RawSecurityFile raw;
    const std::size_t t = rows.size() - 1;
    raw.dates.reserve(t);
    for (std::size_t r = 1; r < rows.size(); ++r) raw.dates.push_back(rows[r][0]);
    check_dates(raw.dates, path);

    raw.risk_free.resize(t);
    for (std::size_t r = 0; r < t; ++r) {
        const std::string& cell = rows[r + 1][1];
        raw.risk_free[r] = cell.empty() ? kNaN : parse_double(cell, "rf of " + path);
    }

    // Schema detection: price files qualify every security column with _P/_DY.
    std::size_t p_cols = 0;
    std::size_t dy_cols = 0;
    for (std::size_t c = 2; c < header.size(); ++c) {
        if (ends_with(header[c], "_P")) ++p_cols;
        if (ends_with(header[c], "_DY")) ++dy_cols;
    }
    raw.has_prices = p_cols > 0 || dy_cols > 0;

    if (raw.has_prices) {
        if (p_cols + dy_cols != header.size() - 2 || p_cols != dy_cols) {
            throw InvalidArgumentError("csv: '" + path +
                                       "' mixes price (_P/_DY) and plain return columns");
        }
        std::vector<std::size_t> p_index, dy_index;
        for (std::size_t c = 2; c < header.size(); ++c) {
            if (ends_with(header[c], "_P")) {
                raw.assets.push_back(header[c].substr(0, header[c].size() - 2));
                p_index.push_back(c);
            }
        }
        for (const std::string& asset : raw.assets) {
            const auto it = std::find(header.begin(), header.end(), asset + "_DY");
            if (it == header.end()) {
                throw InvalidArgumentError("csv: '" + path + "' lacks column " + asset + "_DY");
            }
            dy_index.push_back(static_cast<std::size_t>(it - header.begin()));
        }
        const std::size_t n = raw.assets.size();
        raw.prices.assign(n * t, kNaN);
        raw.dividend_yields.assign(n * t, kNaN);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t r = 0; r < t; ++r) {
                const std::string& p = rows[r + 1][p_index[i]];
                const std::string& dy = rows[r + 1][dy_index[i]];
                if (!p.empty()) raw.prices[i * t + r] = parse_double(p, path);
                if (!dy.empty()) raw.dividend_yields[i * t + r] = parse_double(dy, path);
            }
        }
    } else {
        for (std::size_t c = 2; c < header.size(); ++c) raw.assets.push_back(header[c]);
        const std::size_t n = raw.assets.size();
        raw.excess_returns.assign(n * t, kNaN);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t r = 0; r < t; ++r) {
                const std::string& cell = rows[r + 1][i + 2];
                if (!cell.empty()) raw.excess_returns[i * t + r] = parse_double(cell, path);
            }
        }
    }

    std::vector<std::string> sorted = raw.assets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgumentError("csv: '" + path + "' has duplicated asset identifiers");
    }
    return raw;
}

FactorFile read_factor_csv(const std::string& path) {
    const auto rows = read_csv(path);
    const auto& header = rows.front();
    if (header.size() < 2 || header[0] != "date") {
        throw InvalidArgumentError("csv: '" + path + "' must start with date, <factors...>");
    }
    FactorFile file;
    const std::size_t t = rows.size() - 1;
    const std::size_t k = header.size() - 1;
    for (std::size_t r = 1; r < rows.size(); ++r) file.dates.push_back(rows[r][0]);
    check_dates(file.dates, path);

    std::vector<std::string> names(header.begin() + 1, header.end());
    Matrix values(k, t);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t r = 0; r < t; ++r) {
            const std::string& cell = rows[r + 1][p + 1];
            if (cell.empty()) {
                throw InvalidArgumentError("csv: '" + path + "' has a missing factor value at " +
                                           file.dates[r] + ", " + names[p]);
            }
            values(p, r) = parse_double(cell, path);
        }
    }
    file.panel = FactorPanel(std::move(names), std::move(values));
    return file;
}

ReturnTable build_returns(const RawSecurityFile& raw) {
    const std::size_t t = raw.dates.size();
    const std::size_t n = raw.assets.size();
    if (!raw.has_prices) {
        ReturnTable table;
        table.assets = raw.assets;
        table.dates = raw.dates;
        table.values.assign(n * t, 0.0);
        table.missing.assign(n * t, 0);
        for (std::size_t idx = 0; idx < n * t; ++idx) {
            if (std::isnan(raw.excess_returns[idx])) {
                table.missing[idx] = 1;
            } else {
                table.values[idx] = raw.excess_returns[idx];
            }
        }
        return table;
    }

    if (t < 2) {
        throw InvalidArgumentError("build_returns: need at least 2 date rows, have " +
                                   std::to_string(t));
    }
    for (std::size_t r = 0; r < t; ++r) {
        if (std::isnan(raw.risk_free[r])) {
            throw MissingRiskFreeError("build_returns: risk-free series is missing at date " +
                                       raw.dates[r]);
        }
    }
    for (std::size_t idx = 0; idx < n * t; ++idx) {
        if (!std::isnan(raw.prices[idx]) && raw.prices[idx] <= 0.0) {
            throw NonPositivePriceError("build_returns: non-positive price for asset " +
                                        raw.assets[idx / t] + " at date " +
                                        raw.dates[idx % t]);
        }
    }

    ReturnTable table;
    table.assets = raw.assets;
    table.dates.assign(raw.dates.begin() + 1, raw.dates.end());
    const std::size_t t_out = t - 1;
    table.values.assign(n * t_out, 0.0);
    table.missing.assign(n * t_out, 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 1; s < t; ++s) {
            const double p_now = raw.prices[i * t + s];
            const double p_prev = raw.prices[i * t + s - 1];
            const double dy = raw.dividend_yields[i * t + s];
            if (std::isnan(p_now) || std::isnan(p_prev) || std::isnan(dy)) continue;
            const double r = 100.0 * (p_now - p_prev) / p_prev + dy / 12.0;
            table.values[i * t_out + (s - 1)] = r - raw.risk_free[s];
            table.missing[i * t_out + (s - 1)] = 0;
        }
    }
    return table;
}

RollingResult run_rolling(const ReturnTable& table, const FactorPanel& factors,
                          std::size_t window, const TestConfig& test, const DerandConfig& derand,
                          const std::vector<std::string>& model_factors, std::size_t threads) {
    const FactorPanel model =
        model_factors.empty() ? factors : factors.subset(model_factors);
    const std::size_t t = table.t();
    const std::size_t k = model.k();
    if (model.t() != t) {
        throw InvalidArgumentError("run_rolling: factor panel spans " +
                                   std::to_string(model.t()) + " periods, returns span " +
                                   std::to_string(t));
    }
    if (window < k + 2) {
        throw WindowTooShortError("run_rolling: window " + std::to_string(window) +
                                  " cannot support a fit with K = " + std::to_string(k));
    }
    if (window > t) {
        throw InvalidArgumentError("run_rolling: window " + std::to_string(window) +
                                   " exceeds the sample length " + std::to_string(t));
    }

    const std::size_t n_windows = t - window + 1;
    RollingResult result;
    result.window_ends.resize(n_windows);
    result.q_values.resize(n_windows);
    result.decisions.resize(n_windows);
    result.n_per_window.resize(n_windows);

    parallel_for(0, n_windows, threads, [&](std::size_t w) {
        std::vector<std::size_t> survivors;
        for (std::size_t i = 0; i < table.n(); ++i) {
            bool keep = true;
            for (std::size_t s = w; s < w + window; ++s) {
                if (table.is_missing(i, s)) {
                    keep = false;
                    break;
                }
            }
            if (keep) survivors.push_back(i);
        }
        if (survivors.size() < 3) {
            throw NoSurvivingSecuritiesError(
                "run_rolling: only " + std::to_string(survivors.size()) +
                " securities survive window " + std::to_string(w) + " (need 3)");
        }

        Matrix returns(survivors.size(), window);
        std::vector<std::string> assets(survivors.size());
        for (std::size_t r = 0; r < survivors.size(); ++r) {
            assets[r] = table.assets[survivors[r]];
            for (std::size_t s = 0; s < window; ++s) {
                returns(r, s) = table.at(survivors[r], w + s);
            }
        }
        std::vector<std::string> dates(table.dates.begin() + static_cast<std::ptrdiff_t>(w),
                                       table.dates.begin() + static_cast<std::ptrdiff_t>(w + window));
        Matrix factor_slice(k, window);
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t s = 0; s < window; ++s) factor_slice(p, s) = model.values(p, w + s);

        const ReturnPanel panel(std::move(assets), std::move(dates), std::move(returns));
        const FactorPanel window_factors(model.names, std::move(factor_slice));
        const AlphaFit fit = fit_ols(panel, window_factors);

        DerandConfig window_derand = derand;
        window_derand.master_seed = StreamKey::root(derand.master_seed).child(w).state;
        const DerandReport report = run_derandomized(fit, test, window_derand);

        result.window_ends[w] = table.dates[w + window - 1];
        result.q_values[w] = report.q_value;
        result.decisions[w] = report.decision;
        result.n_per_window[w] = survivors.size();
    });
    return result;
}

RollingResult run_rolling(const ReturnPanel& panel, const FactorPanel& factors,
                          std::size_t window, const TestConfig& test, const DerandConfig& derand,
                          const std::vector<std::string>& model_factors, std::size_t threads) {
    return run_rolling(ReturnTable::from_panel(panel), factors, window, test, derand,
                       model_factors, threads);
}

void write_q_series(const RollingResult& result, double threshold, std::ostream& out) {
    out << "window_end,q_value,threshold,decision,n\n";
    for (std::size_t w = 0; w < result.windows(); ++w) {
        out << result.window_ends[w] << ',' << format_double(result.q_values[w]) << ','
            << format_double(threshold) << ',' << decision_name(result.decisions[w]) << ','
            << result.n_per_window[w] << '\n';
    }
}

void write_q_series(const RollingResult& result, double threshold, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_q_series: cannot open '" + path + "'");
    }
    write_q_series(result, threshold, out);
    if (!out) {
        throw IoError("write_q_series: failed writing '" + path + "'");
    }
}

RollingResult read_q_series(const std::string& path) {
    const auto rows = read_csv(path);
    const std::vector<std::string> expected = {"window_end", "q_value", "threshold", "decision",
                                               "n"};
    if (rows.front() != expected) {
        throw InvalidArgumentError("read_q_series: unexpected header in '" + path + "'");
    }
    RollingResult result;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        result.window_ends.push_back(rows[r][0]);
        result.q_values.push_back(parse_double(rows[r][1], path));
        parse_double(rows[r][2], path);  // threshold column, validated only
        if (rows[r][3] == "RetainNull") {
            result.decisions.push_back(Decision::RetainNull);
        } else if (rows[r][3] == "RejectNull") {
            result.decisions.push_back(Decision::RejectNull);
        } else {
            throw InvalidArgumentError("read_q_series: unknown decision '" + rows[r][3] + "'");
        }
        result.n_per_window.push_back(
            static_cast<std::size_t>(parse_double(rows[r][4], path)));
    }
    return result;
}

void write_panel_csv(const ReturnPanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_panel_csv: cannot open '" + path + "'");
    }
    out << "date,rf";
    for (const std::string& asset : panel.assets) out << ',' << asset;
    out << '\n';
    for (std::size_t s = 0; s < panel.t(); ++s) {
        out << panel.dates[s] << ",0";
        for (std::size_t i = 0; i < panel.n(); ++i)
            out << ',' << format_double(panel.excess_returns(i, s));
        out << '\n';
    }
    if (!out) {
        throw IoError("write_panel_csv: failed writing '" + path + "'");
    }
}

void write_factor_csv(const FactorPanel& factors, const std::vector<std::string>& dates,
                      const std::string& path) {
    if (dates.size() != factors.t()) {
        throw InvalidArgumentError("write_factor_csv: date count does not match the panel");
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_factor_csv: cannot open '" + path + "'");
    }
    out << "date";
    for (const std::string& name : factors.names) out << ',' << name;
    out << '\n';
    for (std::size_t s = 0; s < factors.t(); ++s) {
        out << dates[s];
        for (std::size_t p = 0; p < factors.k(); ++p)
            out << ',' << format_double(factors.values(p, s));
        out << '\n';
    }
    if (!out) {
        throw IoError("write_factor_csv: failed writing '" + path + "'");
    }
}

}  // namespace alphamax
