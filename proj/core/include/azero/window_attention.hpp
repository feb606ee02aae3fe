// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "azero/attention.hpp"
#include "azero/tensor.hpp"

namespace azero {

enum class AttentionMode {
    Global,             // every frame attends to all f frames
    WindowUncorrected,  // frame i sees frames 1..i, frame 1 duplicated to length f
    WindowCorrected,    // as above, with position superscripts reassigned to 1..f
    WindowTwoAnchor,    // frames 1 and f both duplicated (interpolation / loops)
};

std::string_view to_string(AttentionMode mode) noexcept;
std::optional<AttentionMode> parse_attention_mode(std::string_view name) noexcept;

/// Frames emphasized by duplication in a mode's key/value lists.
struct WindowSpec {
    AttentionMode mode = AttentionMode::Global;
    std::vector<std::size_t> anchors;  // 1-based frame indices

    static WindowSpec of(AttentionMode mode, std::size_t frames);
};

/// One element of a key/value list: the token of frame `content` carrying
/// position embedding `position`, i.e. k_content^position. Both 1-based.
struct TokenRef {
    std::size_t content = 0;
    std::size_t position = 0;

    friend bool operator==(const TokenRef&, const TokenRef&) = default;
};

/// q/k/v projections of a_i^j = z_i + p_j for every content i and position j
/// in 1..f. Accessors take 1-based indices.
class PositionCorrectedPool {
public:
    PositionCorrectedPool(std::size_t frames, std::size_t channels);

    std::size_t frames() const noexcept { return frames_; }
    std::size_t channels() const noexcept { return channels_; }

    std::span<const float> q(std::size_t content, std::size_t position) const;
    std::span<const float> k(std::size_t content, std::size_t position) const;
    std::span<const float> v(std::size_t content, std::size_t position) const;

    std::span<float> mutable_row(int which, std::size_t content, std::size_t position);

private:
    std::size_t offset(std::size_t content, std::size_t position) const;

    std::size_t frames_;
    std::size_t channels_;
    Tensor rows_[3];  // q, k, v; each [f * f, c], row (i-1) * f + (j-1)
};

PositionCorrectedPool build_pool(const Tensor& z, const TemporalAttentionParams& params);

/// {k_1^1 x (f-i+1), k_2^2, ..., k_i^i}
std::vector<TokenRef> uncorrected_window(std::size_t i, std::size_t frames);
/// {k_1^1, k_1^2, ..., k_1^(f-i+1), k_2^(f-i+2), ..., k_i^f}
std::vector<TokenRef> corrected_window(std::size_t i, std::size_t frames);
/// Two-anchor list, frames >= 3. Positions run 1..f in list order.
///   i = 1:      {1 x (f-1), f}
///   i = f:      {1, f x (f-1)}
///   otherwise:  {1 x (1 + ceil(p/2)), 2, ..., i, f x (1 + floor(p/2))}
///               with p = f - (i + 1) padding slots.
std::vector<TokenRef> two_anchor_window(std::size_t i, std::size_t frames);

std::vector<TokenRef> window_list(AttentionMode mode, std::size_t i, std::size_t frames);

/// Position superscript of frame i's query: the position that frame i's own
/// token carries in its list (its last occurrence).
std::size_t query_position(std::span<const TokenRef> list, std::size_t i);

struct WindowKV {
    Tensor keys;    // [f, c]
    Tensor values;  // [f, c]
    std::vector<TokenRef> refs;
};

WindowKV gather_window(const PositionCorrectedPool& pool, std::vector<TokenRef> refs);

WindowKV window_keys_values_uncorrected(const PositionCorrectedPool& pool, std::size_t i, std::size_t frames);
WindowKV window_keys_values_corrected(const PositionCorrectedPool& pool, std::size_t i, std::size_t frames);
WindowKV two_anchor_keys_values(const PositionCorrectedPool& pool, std::size_t i, std::size_t frames);

/// Per-frame window attention, out_i = V~_i softmax(q_i^s K~_i / sqrt(c)) where
/// s is query_position of frame i's list. Mode must not be Global.
Tensor window_attention_output(const Tensor& z, const TemporalAttentionParams& params, AttentionMode mode);

/// Dispatches to global or window attention.
Tensor temporal_attention(const Tensor& z, const TemporalAttentionParams& params, AttentionMode mode);

}  // namespace azero
