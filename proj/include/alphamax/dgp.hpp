#pragma once

#include <cstdint>

#include "alphamax/panel.hpp"
#include "alphamax/rng.hpp"

namespace alphamax {

enum class ErrorKind { Gaussian, StudentT, Garch };
enum class OmittedStrength { Strong, SemiStrong, Weak, None };
enum class PricingStrength { AllStrong, OneStrongRestSemiStrong };
enum class AlphaScheme { Null, SparseNormal };
enum class ModelKind { Tradable, NonTradable, Latent };

/// Configuration of the three-factor simulation designs.
///
/// The measurement equation is y_{i,t} = alpha_i + beta_i' f_t + u_{i,t} with
/// a diagonal VAR(1) factor process and factor-structured errors
/// u_t = gamma g_t + xi_t, g_t = phi_g g_{t-1} + chi_t. The NonTradable and
/// Latent kinds switch to y_{i,t} = alpha_i + beta_i' lambda + beta_i' v_t +
/// u_{i,t} with a zero-mean VAR for v_t; Latent additionally hides the factors.
struct DgpConfig {
    std::size_t n = 100;
    std::size_t t = 200;
    ErrorKind error_kind = ErrorKind::Gaussian;
    double student_df = 5.5;  // StudentT only; must exceed 4
    double phi_g = 0.4;       // AR coefficient of the omitted common factor
    OmittedStrength omitted_strength = OmittedStrength::Strong;
    PricingStrength pricing_strength = PricingStrength::AllStrong;
    AlphaScheme alpha_scheme = AlphaScheme::Null;
    double mispriced_fraction = 0.05;  // SparseNormal only; in (0, 1]
    ModelKind model_kind = ModelKind::Tradable;
    std::uint64_t seed = 0;
};

/// A generated panel plus the ground truth needed to score test decisions.
struct SimulatedPanel {
    ReturnPanel returns;
    FactorPanel factors;  // empty in Latent mode
    std::vector<double> true_alphas;
    std::vector<std::size_t> mispriced_indices;  // sorted
};

/// Number of pricing factors in every design.
constexpr std::size_t kDgpFactorCount = 3;

/// Purpose indices of the independent sub-streams drawn under config.seed.
/// Exposed so tests can audit stream independence and determinism.
namespace dgp_streams {
constexpr std::uint64_t kLoadings = 0;
constexpr std::uint64_t kGamma = 1;
constexpr std::uint64_t kGarchParams = 2;
constexpr std::uint64_t kLambda = 3;
constexpr std::uint64_t kAlphaValues = 4;
constexpr std::uint64_t kMispricedSelect = 5;
constexpr std::uint64_t kOmittedSelect = 6;
constexpr std::uint64_t kPricingSelect = 7;
constexpr std::uint64_t kZeta = 8;
constexpr std::uint64_t kChi = 9;
constexpr std::uint64_t kXi = 10;
constexpr std::uint64_t kInit = 11;
}  // namespace dgp_streams

/// Key of one purpose stream of a simulation seed.
StreamKey dgp_stream(std::uint64_t seed, std::uint64_t purpose);

/// Draws one panel. Deterministic given config (all sub-streams derive from
/// config.seed). Throws InvalidConfigError on out-of-range parameters.
SimulatedPanel generate(const DgpConfig& config);

/// One observed-vs-expected moment comparison.
struct MomentCheck {
    std::string quantity;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;  // |observed - expected| bound used for `within`
    bool within = false;
};

struct MomentReport {
    std::vector<MomentCheck> checks;
    bool all_within() const;
    std::string to_string() const;
};

/// Golden-sample guardrail: recomputes the latent driver streams of `config`
/// (the panel must come from the same config) and compares sample moments
/// against the implied stationary values - factor means and lag-1
/// autocorrelations, var(g) vs 1/(1 - phi_g^2), innovation kurtosis.
/// Meaningful for large T (>= 10^4 recommended).
MomentReport sample_moments_check(const SimulatedPanel& panel, const DgpConfig& config);

}  // namespace alphamax
