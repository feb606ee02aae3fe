// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "azero/tensor.hpp"

namespace azero {

/// SplitMix64 generator with a fixed normal transform, so streams are
/// reproducible bit-for-bit on any IEEE-754 platform.
///
/// next_u64: state += 0x9E3779B97F4A7C15, then the output mixer
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z ^ (z >> 31)
/// uniform: top 53 bits of next_u64 scaled by 2^-53, giving [0, 1).
/// normal: Marsaglia polar method in double precision. Draw u, v in
///   [-1, 1) from two uniforms, reject s = u^2 + v^2 outside (0, 1), return
///   u * sqrt(-2 ln(s) / s). The paired v-sample is discarded so the whole
///   generator state stays one 64-bit word. ln is `fixed_log` (below), sqrt is
///   IEEE correctly rounded; the f32 value is the double rounded to nearest.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept;
    double uniform() noexcept;
    double normal() noexcept;

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Natural log for x > 0 from frexp and a fixed atanh series, independent of
/// the platform libm.
double fixed_log(double x) noexcept;

/// Standard-normal array of the given dims.
Tensor randn(SeededRng& rng, std::vector<std::size_t> dims);

/// Uniform array in [-bound, bound].
Tensor rand_uniform(SeededRng& rng, std::vector<std::size_t> dims, double bound);

/// 64-bit FNV-1a, used for prompt seeding and file checksums.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;

}  // namespace azero
