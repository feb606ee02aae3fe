// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/window_attention.hpp"

#include <algorithm>
#include <string>

#include "azero/error.hpp"

namespace azero {

std::string_view to_string(AttentionMode mode) noexcept {
    switch (mode) {
        case AttentionMode::Global: return "global";
        case AttentionMode::WindowUncorrected: return "window";
        case AttentionMode::WindowCorrected: return "window-pc";
        case AttentionMode::WindowTwoAnchor: return "window-two-anchor";
    }
    return "unknown";
}

std::optional<AttentionMode> parse_attention_mode(std::string_view name) noexcept {
    for (auto mode : {AttentionMode::Global, AttentionMode::WindowUncorrected, AttentionMode::WindowCorrected,
                      AttentionMode::WindowTwoAnchor}) {
        if (to_string(mode) == name) return mode;
    }
    return std::nullopt;
}

WindowSpec WindowSpec::of(AttentionMode mode, std::size_t frames) {
    switch (mode) {
        case AttentionMode::Global: return {mode, {}};
        case AttentionMode::WindowUncorrected:
        case AttentionMode::WindowCorrected: return {mode, {1}};
        case AttentionMode::WindowTwoAnchor: return {mode, {1, frames}};
    }
    return {mode, {}};
}

PositionCorrectedPool::PositionCorrectedPool(std::size_t frames, std::size_t channels)
    : frames_(frames),
      channels_(channels),
      rows_{Tensor({frames * frames, channels}), Tensor({frames * frames, channels}),
            Tensor({frames * frames, channels})} {}

std::size_t PositionCorrectedPool::offset(std::size_t content, std::size_t position) const {
    if (content < 1 || content > frames_ || position < 1 || position > frames_) {
        throw IndexError("pool entry (" + std::to_string(content) + ", " + std::to_string(position) +
                         ") outside 1.." + std::to_string(frames_));
    }
    return (content - 1) * frames_ + (position - 1);
}

std::span<const float> PositionCorrectedPool::q(std::size_t content, std::size_t position) const {
    return rows_[0].slice(offset(content, position));
}
std::span<const float> PositionCorrectedPool::k(std::size_t content, std::size_t position) const {
    return rows_[1].slice(offset(content, position));
}
std::span<const float> PositionCorrectedPool::v(std::size_t content, std::size_t position) const {
    return rows_[2].slice(offset(content, position));
}
std::span<float> PositionCorrectedPool::mutable_row(int which, std::size_t content, std::size_t position) {
    return rows_[which].slice(offset(content, position));
}

PositionCorrectedPool build_pool(const Tensor& z, const TemporalAttentionParams& params) {
    const auto terms = projection_terms(z, params);
    const std::size_t f = terms.frames;
    const std::size_t c = terms.channels;
    PositionCorrectedPool pool(f, c);
    for (int which = 0; which < 3; ++which) {
        for (std::size_t i = 1; i <= f; ++i) {
            for (std::size_t j = 1; j <= f; ++j) {
                auto row = pool.mutable_row(which, i, j);
                for (std::size_t ch = 0; ch < c; ++ch) row[ch] = terms.entry(which, i - 1, j - 1, ch);
            }
        }
    }
    return pool;
}

namespace {

void check_frame(std::size_t i, std::size_t frames) {
    if (frames == 0 || i < 1 || i > frames) {
        throw IndexError("frame " + std::to_string(i) + " outside 1.." + std::to_string(frames));
    }
}

}  // namespace

std::vector<TokenRef> uncorrected_window(std::size_t i, std::size_t frames) {
    check_frame(i, frames);
    std::vector<TokenRef> list(frames - i + 1, TokenRef{1, 1});
    for (std::size_t m = 2; m <= i; ++m) list.push_back({m, m});
    return list;
}

std::vector<TokenRef> corrected_window(std::size_t i, std::size_t frames) {
    check_frame(i, frames);
    std::vector<TokenRef> list;
    list.reserve(frames);
    const std::size_t copies = frames - i + 1;
    for (std::size_t j = 1; j <= copies; ++j) list.push_back({1, j});
    for (std::size_t m = 2; m <= i; ++m) list.push_back({m, copies + m - 1});
    return list;
}

std::vector<TokenRef> two_anchor_window(std::size_t i, std::size_t frames) {
    if (frames < 3) {
        throw ConfigError("two-anchor window attention needs at least 3 frames, got " + std::to_string(frames));
    }
    check_frame(i, frames);
    std::vector<std::size_t> contents;
    if (i == 1) {
        contents.assign(frames - 1, 1);
        contents.push_back(frames);
    } else if (i == frames) {
        contents.assign(frames, frames);
        contents.front() = 1;
    } else {
        const std::size_t padding = frames - (i + 1);
        contents.assign(1 + (padding + 1) / 2, 1);
        for (std::size_t m = 2; m <= i; ++m) contents.push_back(m);
        contents.insert(contents.end(), 1 + padding / 2, frames);
    }
    std::vector<TokenRef> list(frames);
    for (std::size_t p = 0; p < frames; ++p) list[p] = {contents[p], p + 1};
    return list;
}

std::vector<TokenRef> window_list(AttentionMode mode, std::size_t i, std::size_t frames) {
    switch (mode) {
        case AttentionMode::WindowUncorrected: return uncorrected_window(i, frames);
        case AttentionMode::WindowCorrected: return corrected_window(i, frames);
        case AttentionMode::WindowTwoAnchor: return two_anchor_window(i, frames);
        case AttentionMode::Global: break;
    }
    check_frame(i, frames);
    std::vector<TokenRef> list(frames);
    for (std::size_t m = 1; m <= frames; ++m) list[m - 1] = {m, m};
    return list;
}

std::size_t query_position(std::span<const TokenRef> list, std::size_t i) {
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
        if (it->content == i) return it->position;
    }
    throw IndexError("frame " + std::to_string(i) + " is missing from its own key list");
}

WindowKV gather_window(const PositionCorrectedPool& pool, std::vector<TokenRef> refs) {
    const std::size_t n = refs.size();
    const std::size_t c = pool.channels();
    WindowKV out{Tensor({n, c}), Tensor({n, c}), std::move(refs)};
    for (std::size_t r = 0; r < n; ++r) {
        const auto k = pool.k(out.refs[r].content, out.refs[r].position);
        const auto v = pool.v(out.refs[r].content, out.refs[r].position);
        std::copy(k.begin(), k.end(), out.keys.slice(r).begin());
        std::copy(v.begin(), v.end(), out.values.slice(r).begin());
    }
    return out;
}

namespace {

void check_pool(const PositionCorrectedPool& pool, std::size_t frames) {
    if (pool.frames() != frames) {
        throw DimensionError("pool built for " + std::to_string(pool.frames()) + " frames, asked for " +
                             std::to_string(frames));
    }
}

}  // namespace

WindowKV window_keys_values_uncorrected(const PositionCorrectedPool& pool, std::size_t i, std::size_t frames) {
    check_pool(pool, frames);
    return gather_window(pool, uncorrected_window(i, frames));
}

WindowKV window_keys_values_corrected(const PositionCorrectedPool& pool, std::size_t i, std::size_t frames) {
    check_pool(pool, frames);
    return gather_window(pool, corrected_window(i, frames));
}

WindowKV two_anchor_keys_values(const PositionCorrectedPool& pool, std::size_t i, std::size_t frames) {
    check_pool(pool, frames);
    return gather_window(pool, two_anchor_window(i, frames));
}

Tensor window_attention_output(const Tensor& z, const TemporalAttentionParams& params, AttentionMode mode) {
    if (mode == AttentionMode::Global) throw ConfigError("window_attention_output needs a window mode");
    const auto pool = build_pool(z, params);
    const std::size_t f = pool.frames();
    Tensor out(z.dims());
    for (std::size_t i = 1; i <= f; ++i) {
        const auto kv = gather_window(pool, window_list(mode, i, f));
        attend(pool.q(i, query_position(kv.refs, i)), kv.keys, kv.values, out.slice(i - 1));
    }
    return out;
}

Tensor temporal_attention(const Tensor& z, const TemporalAttentionParams& params, AttentionMode mode) {
    if (mode == AttentionMode::Global) return global_temporal_attention(z, params);
    return window_attention_output(z, params, mode);
}

}  // namespace azero
