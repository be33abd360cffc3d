#include "alphamax/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "alphamax/estimators.hpp"
#include "alphamax/parallel.hpp"

namespace alphamax {

namespace {

using Clock = std::chrono::steady_clock;

std::string setting_label(const DgpConfig& dgp) {
    std::string s;
    switch (dgp.alpha_scheme) {
        case AlphaScheme::Null: s = "null"; break;
        case AlphaScheme::SparseNormal: {
            std::ostringstream os;
            os << "sparse(" << dgp.mispriced_fraction << ")";
            s = os.str();
            break;
        }
    }
    switch (dgp.error_kind) {
        case ErrorKind::Gaussian: s += "-gaussian"; break;
        case ErrorKind::StudentT: s += "-student_t"; break;
        case ErrorKind::Garch: s += "-garch"; break;
    }
    return s;
}

void check_spec(const ExperimentSpec& spec) {
    if (spec.grid.empty()) {
        throw InvalidConfigError("experiment: grid must be nonempty");
    }
    if (spec.replications < 1) {
        throw InvalidConfigError("experiment: need at least 1 replication");
    }
    for (const GridCell& cell : spec.grid) {
        if (cell.n < 3 || cell.t < kDgpFactorCount + 2) {
            throw InvalidConfigError("experiment: grid cell (" + std::to_string(cell.n) + ", " +
                                     std::to_string(cell.t) + ") too small");
        }
    }
}

struct RepOutcome {
    bool one_shot_reject = false;
    bool derand_reject = false;
};

}  // namespace

std::uint64_t experiment_sub_seed(std::uint64_t master, std::size_t cell,
                                  std::size_t replication, std::uint64_t purpose) {
    return StreamKey::root(master).descend({cell, replication, purpose}).state;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    check_spec(spec);
    const std::size_t m = spec.replications;

    ExperimentReport report;
    for (std::size_t ci = 0; ci < spec.grid.size(); ++ci) {
        const GridCell cell = spec.grid[ci];
        const auto started = Clock::now();

        std::vector<RepOutcome> outcomes(m);
        parallel_for(0, m, spec.threads, [&](std::size_t rep) {
            DgpConfig dgp = spec.dgp;
            dgp.n = cell.n;
            dgp.t = cell.t;
            dgp.seed = experiment_sub_seed(spec.dgp.seed, ci, rep, 0);
            try {
                const SimulatedPanel panel = generate(dgp);

                AlphaFit fit;
                switch (dgp.model_kind) {
                    case ModelKind::Tradable:
                        fit = fit_ols(panel.returns, panel.factors);
                        break;
                    case ModelKind::NonTradable:
                        fit = fit_fama_macbeth(panel.returns, panel.factors);
                        break;
                    case ModelKind::Latent:
                        fit = fit_pca(panel.returns, spec.pca_factors);
                        break;
                }

                TestConfig test = spec.test;
                test.seed = experiment_sub_seed(spec.dgp.seed, ci, rep, 1);
                outcomes[rep].one_shot_reject = run_one_shot(fit, test).reject;

                if (spec.derand) {
                    DerandConfig derand = *spec.derand;
                    derand.master_seed = experiment_sub_seed(spec.dgp.seed, ci, rep, 2);
                    outcomes[rep].derand_reject =
                        run_derandomized(fit, test, derand).decision == Decision::RejectNull;
                }
            } catch (const Error& e) {
                // Fail fast with enough context to replay the offending draw;
                // silently skipping replications would bias the frequencies.
                throw InvalidConfigError("experiment: replication failed at cell " +
                                         std::to_string(ci) + " (N=" + std::to_string(cell.n) +
                                         ", T=" + std::to_string(cell.t) + "), replication " +
                                         std::to_string(rep) + ", panel seed " +
                                         std::to_string(dgp.seed) + ": " + e.what());
            }
        });

        std::size_t one_shot = 0;
        std::size_t derand = 0;
        for (const RepOutcome& o : outcomes) {
            one_shot += o.one_shot_reject ? 1 : 0;
            derand += o.derand_reject ? 1 : 0;
        }

        CellResult result;
        result.n = cell.n;
        result.t = cell.t;
        result.setting = setting_label(spec.dgp);
        result.replications = m;
        result.rejection_rate_one_shot =
            static_cast<double>(one_shot) / static_cast<double>(m);
        if (spec.derand) {
            result.rejection_rate_derand = static_cast<double>(derand) / static_cast<double>(m);
        }
        const double r = result.rejection_rate_one_shot;
        result.mc_std_error = std::sqrt(r * (1.0 - r) / static_cast<double>(m));
        result.wall_time_ms =
            std::chrono::duration<double, std::milli>(Clock::now() - started).count();
        report.cells.push_back(std::move(result));
    }
    return report;
}

ExperimentReport power_curve(const ExperimentSpec& spec) {
    if (spec.power_fractions.empty()) {
        throw InvalidConfigError("power_curve: power_fractions must be nonempty");
    }
    ExperimentReport out;
    for (double fraction : spec.power_fractions) {
        ExperimentSpec sub = spec;
        if (fraction == 0.0) {
            sub.dgp.alpha_scheme = AlphaScheme::Null;
        } else {
            if (!(fraction > 0.0 && fraction <= 1.0)) {
                throw InvalidConfigError("power_curve: fraction must lie in [0, 1], got " +
                                         std::to_string(fraction));
            }
            sub.dgp.alpha_scheme = AlphaScheme::SparseNormal;
            sub.dgp.mispriced_fraction = fraction;
        }
        // Same master seed across fractions: common random numbers plus nested
        // mispriced sets make the curve monotone replication by replication.
        const ExperimentReport sweep = run_experiment(sub);
        out.cells.insert(out.cells.end(), sweep.cells.begin(), sweep.cells.end());
    }
    return out;
}

std::string report_to_json(const ExperimentReport& report, bool include_timing) {
    nlohmann::json doc;
    doc["cells"] = nlohmann::json::array();
    for (const CellResult& c : report.cells) {
        nlohmann::json cell{{"n", c.n},
                            {"t", c.t},
                            {"setting", c.setting},
                            {"replications", c.replications},
                            {"rejection_rate_one_shot", c.rejection_rate_one_shot},
                            {"mc_std_error", c.mc_std_error}};
        if (c.rejection_rate_derand) {
            cell["rejection_rate_derand"] = *c.rejection_rate_derand;
        }
        if (include_timing) {
            cell["wall_time_ms"] = c.wall_time_ms;
        }
        doc["cells"].push_back(std::move(cell));
    }
    return doc.dump(2);
}

std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "setting,n,t,replications,rejection_rate_one_shot,rejection_rate_derand,mc_std_error,"
          "wall_time_ms\n";
    os.precision(17);
    for (const CellResult& c : report.cells) {
        os << c.setting << ',' << c.n << ',' << c.t << ',' << c.replications << ','
           << c.rejection_rate_one_shot << ',';
        if (c.rejection_rate_derand) os << *c.rejection_rate_derand;
        os << ',' << c.mc_std_error << ',' << c.wall_time_ms << '\n';
    }
    return os.str();
}

std::string report_to_table_csv(const ExperimentReport& report) {
    // Group rows by setting, pivot each group with rows = T and columns = N.
    std::vector<std::string> settings;
    for (const CellResult& c : report.cells) {
        if (std::find(settings.begin(), settings.end(), c.setting) == settings.end()) {
            settings.push_back(c.setting);
        }
    }
    std::ostringstream os;
    os.precision(17);
    for (const std::string& setting : settings) {
        std::set<std::size_t> ns, ts;
        std::map<std::pair<std::size_t, std::size_t>, const CellResult*> by_nt;
        for (const CellResult& c : report.cells) {
            if (c.setting != setting) continue;
            ns.insert(c.n);
            ts.insert(c.t);
            by_nt[{c.n, c.t}] = &c;
        }
        os << "setting," << setting << "\nT\\N";
        for (std::size_t n : ns) os << ',' << n;
        os << '\n';
        for (std::size_t t : ts) {
            os << t;
            for (std::size_t n : ns) {
                os << ',';
                const auto it = by_nt.find({n, t});
                if (it != by_nt.end()) os << it->second->rejection_rate_one_shot;
            }
            os << '\n';
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace alphamax
