// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "azero/tensor.hpp"

namespace azero {

/// Bias-free linear map, weight stored [out_ch, in_ch].
struct LinearParams {
    Tensor weight;

    std::size_t out_ch() const { return weight.dim(0); }
    std::size_t in_ch() const { return weight.dim(1); }

    /// y = W x, accumulated in double.
    void apply(std::span<const float> x, std::span<double> y) const;
    std::vector<float> apply(std::span<const float> x) const;
};

/// Row j (0-based) is the embedding added to the token at frame j + 1.
struct PositionEmbeddings {
    Tensor table;  // [f_max, c]

    static PositionEmbeddings sinusoidal(std::size_t f_max, std::size_t channels);

    std::size_t max_frames() const { return table.dim(0); }
    std::size_t channels() const { return table.dim(1); }
    std::span<const float> row(std::size_t j) const { return table.slice(j); }
};

/// Transformer-style sinusoid with base 10000:
///   out[2m]   = sin(j / 10000^(2m / c))
///   out[2m+1] = cos(j / 10000^(2m / c))
std::vector<float> sinusoidal_embedding(std::size_t j, std::size_t channels);

/// One single-head temporal self-attention block of a motion module.
struct TemporalAttentionParams {
    LinearParams wq, wk, wv;
    PositionEmbeddings pos;

    std::size_t channels() const { return wq.out_ch(); }
    /// Throws DimensionError/IndexError unless `z` is [f, c] with f <= f_max.
    void validate(const Tensor& z) const;
};

struct QKV {
    Tensor q, k, v;  // [f, c] each
};

/// Content and position halves of W(z_i + p_j) = W z_i + W p_j, kept in
/// double so that any pairing (i, j) rounds to f32 exactly once. Both the
/// frame-aligned projection and the position-corrected pool are built from
/// this, which makes their shared entries bit-identical.
struct ProjectionTerms {
    std::size_t frames = 0;
    std::size_t channels = 0;
    std::vector<double> content[3];   // [f * c] for q, k, v
    std::vector<double> position[3];  // [f * c] for q, k, v

    float entry(int which, std::size_t content_idx, std::size_t position_idx, std::size_t ch) const {
        return static_cast<float>(content[which][content_idx * channels + ch] +
                                  position[which][position_idx * channels + ch]);
    }
};

ProjectionTerms projection_terms(const Tensor& z, const TemporalAttentionParams& params);

/// Row i of each output is W(z_i + p_i).
QKV project_qkv(const Tensor& z, const TemporalAttentionParams& params);

/// Max-subtracted softmax over `scores`.
std::vector<double> softmax(std::span<const double> scores);

/// Softmax weights of `query` against each row of `keys`, scaled by 1/sqrt(c).
std::vector<double> attention_weights(std::span<const float> query, const Tensor& keys);

/// out = sum_j w_j * values_j with w = attention_weights(query, keys).
void attend(std::span<const float> query, const Tensor& keys, const Tensor& values, std::span<float> out);

/// Frame-axis self-attention over all f frames: out_i = V softmax(q_i^T K / sqrt(c)).
Tensor global_temporal_attention(const Tensor& z, const TemporalAttentionParams& params);

/// Spatial self-attention of one frame. No position embeddings: token order
/// carries the layout.
struct SpatialAttentionParams {
    LinearParams wq, wk, wv;

    std::size_t channels() const { return wq.out_ch(); }
};

struct KVPair {
    Tensor k, v;  // [hw, c]
};

KVPair spatial_keys_values(const Tensor& x, const SpatialAttentionParams& params);

/// Queries from `x` ([hw, c]). Keys and values come from `x` itself, or from
/// `shared_kv` (frame-1 keys/values) when given.
Tensor spatial_self_attention(const Tensor& x, const SpatialAttentionParams& params,
                              const KVPair* shared_kv = nullptr);

}  // namespace azero
