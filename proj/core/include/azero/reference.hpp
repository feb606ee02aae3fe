// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Naive reference implementations used as oracles by the test suites and the
// `check` command. They share no code with the production kernels: lists are
// built by explicit enumeration, projections are W (z + p) computed per entry
// and softmax is a plain two-loop evaluation.

#include <cstdint>
#include <vector>

#include "azero/attention.hpp"
#include "azero/rng.hpp"
#include "azero/tensor.hpp"
#include "azero/window_attention.hpp"

namespace azero::reference {

using Vec = std::vector<double>;

Vec matvec(const Tensor& weight, const Vec& x);
Vec add(const Vec& a, const Vec& b);
Vec row(const Tensor& t, std::size_t r);

/// softmax(q . k_j / sqrt(c)) weighted sum of `values`.
Vec attention(const Vec& query, const std::vector<Vec>& keys, const std::vector<Vec>& values);

/// W (z_content + p_position), with 1-based indices.
Vec project(const LinearParams& w, const Tensor& z, const PositionEmbeddings& pos, std::size_t content,
            std::size_t position);

/// Key list (content, position) pairs for frame i, enumerated from the
/// textbook definitions.
std::vector<TokenRef> key_list(AttentionMode mode, std::size_t i, std::size_t frames);

Tensor temporal_attention(const Tensor& z, const TemporalAttentionParams& params, AttentionMode mode);
Tensor spatial_attention(const Tensor& x, const SpatialAttentionParams& params, const Tensor* shared_source = nullptr);

/// Convenience: random single-head temporal block with sinusoidal positions.
TemporalAttentionParams random_temporal_params(SeededRng& rng, std::size_t channels, std::size_t max_frames);
SpatialAttentionParams random_spatial_params(SeededRng& rng, std::size_t channels);

/// max |a - b| / max(max |b|, 1e-30)
double relative_error(const Tensor& a, const Tensor& b);

}  // namespace azero::reference
