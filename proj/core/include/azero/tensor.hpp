// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace azero {

/// Dense row-major f32 array. The first axis is the slowest; for latent
/// videos that is the frame axis, so `slice(i)` is frame i (0-based).
class Tensor {
public:
    Tensor() = default;

    /// Zero-filled array. Every dim must be positive.
    explicit Tensor(std::vector<std::size_t> dims);
    Tensor(std::vector<std::size_t> dims, std::vector<float> data);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
    std::size_t rank() const noexcept { return dims_.size(); }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::span<float> data() noexcept { return data_; }
    std::span<const float> data() const noexcept { return data_; }
    const std::vector<float>& values() const noexcept { return data_; }

    float& operator[](std::size_t i) noexcept { return data_[i]; }
    float operator[](std::size_t i) const noexcept { return data_[i]; }

    /// Rank-2 element access.
    float& at(std::size_t r, std::size_t c) noexcept { return data_[r * dims_[1] + c]; }
    float at(std::size_t r, std::size_t c) const noexcept { return data_[r * dims_[1] + c]; }

    /// Contiguous sub-array at index `i` of the first axis.
    std::span<float> slice(std::size_t i);
    std::span<const float> slice(std::size_t i) const;

    bool all_finite() const noexcept;

    /// Identical dims and identical bit patterns.
    bool bitwise_equal(const Tensor& other) const noexcept;

private:
    std::vector<std::size_t> dims_;
    std::vector<float> data_;
};

std::size_t element_count(std::span<const std::size_t> dims);

/// Throws DimensionError unless `t` has exactly `dims`.
void require_dims(const Tensor& t, std::span<const std::size_t> dims, const char* what);
void require_rank(const Tensor& t, std::size_t rank, const char* what);
/// Throws Error when `t` holds NaN or Inf.
void require_finite(const Tensor& t, const char* what);

/// Largest |a - b| over all elements; dims must match.
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace azero
