#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "alphamax/errors.hpp"

namespace alphamax {

/// Avalanche step of the splitmix64 generator (Steele, Lea & Flood 2014).
/// This is the single mixing primitive behind every stream in the library:
///
///     z += 0x9E3779B97F4A7C15            (golden-ratio increment)
///     z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     return z ^ (z >> 31)
///
/// All randomness in the artifact flows through keys derived with mix64;
/// no wall clock or OS entropy is consulted anywhere.
std::uint64_t mix64(std::uint64_t z);

/// Key of a counter-based random stream.
///
/// A key is derived from a master seed and a path of 64-bit indices, e.g.
/// [cell, replication, purpose]. Distinct paths under the same master give
/// statistically independent streams, and any (key, counter) pair can be
/// evaluated in isolation, which is what makes parallel generation exactly
/// reproduce sequential output.
struct StreamKey {
    std::uint64_t state = 0;

    static StreamKey root(std::uint64_t master) { return {mix64(master)}; }

    StreamKey child(std::uint64_t index) const { return {mix64(state ^ mix64(index))}; }

    StreamKey descend(std::initializer_list<std::uint64_t> path) const {
        StreamKey k = *this;
        for (std::uint64_t idx : path) k = k.child(idx);
        return k;
    }

    bool operator==(const StreamKey&) const = default;
};

/// Uniform variate on [0, 1) at position `counter` of the stream: the top 53
/// bits of mix64(state + counter * 0x9E3779B97F4A7C15).
double uniform01(const StreamKey& key, std::uint64_t counter);

/// Uniform variate on [lo, hi) at per-draw index `index`.
double uniform_range_at(const StreamKey& key, std::uint64_t index, double lo, double hi);

/// Standard normal variate at per-draw index `index`, via the Marsaglia polar
/// method on the draw's private substream. Each index is self-contained, so
/// draws at different indices may be evaluated concurrently and in any order.
double gaussian_at(const StreamKey& key, std::uint64_t index);

/// Student-t variate with df degrees of freedom and unit scale at per-draw
/// index `index` (normal over square-root of chi-square/df; the chi-square
/// comes from a Marsaglia-Tsang gamma). Throws InvalidDfError for df <= 2.
double student_t_at(const StreamKey& key, double df, std::uint64_t index);

/// First `count` gaussian_at draws of the stream.
std::vector<double> gaussian(const StreamKey& key, std::size_t count);

/// First `count` student_t_at draws of the stream.
std::vector<double> student_t(const StreamKey& key, double df, std::size_t count);

}  // namespace alphamax
