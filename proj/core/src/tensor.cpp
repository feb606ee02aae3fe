// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "azero/error.hpp"

namespace azero {

namespace {

std::string dims_string(std::span<const std::size_t> dims) {
    std::string s = "[";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(dims[i]);
    }
    return s + "]";
}

}  // namespace

std::size_t element_count(std::span<const std::size_t> dims) {
    if (dims.empty()) throw DimensionError("tensor needs at least one dimension");
    std::size_t n = 1;
    for (auto d : dims) {
        if (d == 0) throw DimensionError("tensor dimensions must be positive, got " + dims_string(dims));
        n *= d;
    }
    return n;
}

Tensor::Tensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    data_.assign(element_count(dims_), 0.0f);
}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<float> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    if (element_count(dims_) != data_.size()) {
        throw DimensionError("tensor of dims " + dims_string(dims_) + " cannot hold " +
                             std::to_string(data_.size()) + " values");
    }
}

std::span<float> Tensor::slice(std::size_t i) {
    const std::size_t stride = data_.size() / dims_.at(0);
    if (i >= dims_[0]) throw IndexError("slice " + std::to_string(i) + " out of range");
    return std::span<float>(data_).subspan(i * stride, stride);
}

std::span<const float> Tensor::slice(std::size_t i) const {
    const std::size_t stride = data_.size() / dims_.at(0);
    if (i >= dims_[0]) throw IndexError("slice " + std::to_string(i) + " out of range");
    return std::span<const float>(data_).subspan(i * stride, stride);
}

bool Tensor::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

bool Tensor::bitwise_equal(const Tensor& other) const noexcept {
    return dims_ == other.dims_ &&
           (data_.empty() || std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0);
}

void require_dims(const Tensor& t, std::span<const std::size_t> dims, const char* what) {
    if (!std::equal(t.dims().begin(), t.dims().end(), dims.begin(), dims.end())) {
        throw DimensionError(std::string(what) + ": expected dims " + dims_string(dims) + ", got " +
                             dims_string(t.dims()));
    }
}

void require_rank(const Tensor& t, std::size_t rank, const char* what) {
    if (t.rank() != rank) {
        throw DimensionError(std::string(what) + ": expected rank " + std::to_string(rank) + ", got dims " +
                             dims_string(t.dims()));
    }
}

void require_finite(const Tensor& t, const char* what) {
    if (!t.all_finite()) throw Error(std::string(what) + ": non-finite value");
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    require_dims(b, a.dims(), "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
    }
    return m;
}

}  // namespace azero
