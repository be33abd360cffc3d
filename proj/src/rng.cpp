#include "alphamax/rng.hpp"

#include <cmath>

namespace alphamax {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform01(const StreamKey& key, std::uint64_t counter) {
    const std::uint64_t bits = mix64(key.state + counter * kGamma);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double uniform_range_at(const StreamKey& key, std::uint64_t index, double lo, double hi) {
    return lo + (hi - lo) * uniform01(key, index);
}

double gaussian_at(const StreamKey& key, std::uint64_t index) {
    const StreamKey sub = key.child(index);
    for (std::uint64_t attempt = 0;; ++attempt) {
        const double x = 2.0 * uniform01(sub, 2 * attempt) - 1.0;
        const double y = 2.0 * uniform01(sub, 2 * attempt + 1) - 1.0;
        const double s = x * x + y * y;
        if (s > 0.0 && s < 1.0) {
            return x * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

namespace {

// Marsaglia-Tsang sampler for Gamma(shape, 1) with shape >= 1, consuming the
// substream in (normal, uniform) pairs so the draw is a pure function of key.
double gamma_at(const StreamKey& sub, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (std::uint64_t attempt = 0;; ++attempt) {
        const double x = gaussian_at(sub, 2 * attempt);
        const double f = 1.0 + c * x;
        if (f <= 0.0) continue;
        const double v = f * f * f;
        const double u = uniform01(sub.child(2 * attempt + 1), 0);
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            return d * v;
        }
    }
}

}  // namespace

double student_t_at(const StreamKey& key, double df, std::uint64_t index) {
    if (!(df > 2.0)) {
        throw InvalidDfError("student_t: df must exceed 2, got " + std::to_string(df));
    }
    const StreamKey sub = key.child(index);
    const double z = gaussian_at(sub.child(0), 0);
    const double chi2 = 2.0 * gamma_at(sub.child(1), df / 2.0);
    return z / std::sqrt(chi2 / df);
}

std::vector<double> gaussian(const StreamKey& key, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = gaussian_at(key, i);
    return out;
}

std::vector<double> student_t(const StreamKey& key, double df, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = student_t_at(key, df, i);
    return out;
}

}  // namespace alphamax
