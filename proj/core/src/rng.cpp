// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/rng.hpp"

#include <cmath>

namespace azero {

std::uint64_t SeededRng::next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SeededRng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() noexcept {
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * fixed_log(s) / s);
        }
    }
}

double fixed_log(double x) noexcept {
    constexpr double kLn2 = 0.69314718055994530942;
    constexpr double kSqrtHalf = 0.70710678118654752440;
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, m in [0.5, 1)
    if (m < kSqrtHalf) {
        m *= 2.0;
        e -= 1;
    }
    // ln m = 2 atanh(s), |s| <= 0.1716; 13 odd terms reach below 1e-19.
    const double s = (m - 1.0) / (m + 1.0);
    const double s2 = s * s;
    double series = 1.0 / 25.0;
    for (int k = 11; k >= 0; --k) {
        series = 1.0 / static_cast<double>(2 * k + 1) + s2 * series;
    }
    return 2.0 * s * series + static_cast<double>(e) * kLn2;
}

Tensor randn(SeededRng& rng, std::vector<std::size_t> dims) {
    Tensor out(std::move(dims));
    for (auto& v : out.data()) v = static_cast<float>(rng.normal());
    return out;
}

Tensor rand_uniform(SeededRng& rng, std::vector<std::size_t> dims, double bound) {
    Tensor out(std::move(dims));
    for (auto& v : out.data()) v = static_cast<float>(bound * (2.0 * rng.uniform() - 1.0));
    return out;
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes, std::uint64_t basis) noexcept {
    std::uint64_t h = basis;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
    return fnv1a64(std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

}  // namespace azero
