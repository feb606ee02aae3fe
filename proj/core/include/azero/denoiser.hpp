// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "azero/attention.hpp"
#include "azero/tensor.hpp"
#include "azero/window_attention.hpp"

namespace azero {

/// Shape of the toy pseudo-UNet. Latents are [f, channels, height, width];
/// every block runs at `channels` width, no resampling between blocks.
struct DenoiserArch {
    std::size_t encoder_blocks = 2;
    std::size_t decoder_blocks = 2;
    std::size_t channels = 8;
    std::size_t motion_channels = 8;
    std::size_t cond_channels = 8;
    std::size_t max_frames = 32;

    void validate() const;
    friend bool operator==(const DenoiserArch&, const DenoiserArch&) = default;
};

/// project-in, two temporal self-attention blocks, project-out.
struct MotionModuleParams {
    LinearParams project_in;   // [motion_channels, channels]
    TemporalAttentionParams attn1;
    TemporalAttentionParams attn2;
    LinearParams project_out;  // [channels, motion_channels]
};

/// Self-attention over the hw tokens of one frame, then a token-wise channel mix.
struct SpatialBlockParams {
    SpatialAttentionParams attn;
    LinearParams mix;
};

struct DenoiserBlock {
    SpatialBlockParams spatial;
    MotionModuleParams motion;
};

struct DenoiserParams {
    DenoiserArch arch;
    std::uint64_t seed = 0;
    std::vector<DenoiserBlock> blocks;  // encoder blocks first, then decoder
    LinearParams cond_proj;             // [channels, cond_channels]
    LinearParams time_proj;             // [channels, 4]

    bool is_encoder(std::size_t block) const noexcept { return block < arch.encoder_blocks; }
    /// FNV-1a over every weight in initialization order.
    std::string checksum() const;
};

/// Deterministic prompt vector: FNV-1a of the text seeds a SeededRng whose
/// first `channels` normal draws form the embedding.
struct PromptEmbedding {
    std::string text;
    Tensor vec;  // [cond_channels]

    static PromptEmbedding from_text(const std::string& text, std::size_t channels);
};

/// [sin t, cos t, sin(t / 100), cos(t / 100)]
std::array<float, 4> time_features(int t) noexcept;

/// Per-block spatial keys/values of frame 1, indexed by block.
using BlockKVCaches = std::vector<KVPair>;

/// Which spatial and temporal controls are active for one denoiser call.
struct ControlHooks {
    AttentionMode encoder_mode = AttentionMode::Global;
    AttentionMode decoder_mode = AttentionMode::Global;
    bool bypass_motion = false;
    bool share_kv = false;
    // Frame-1 K/V per block. Takes precedence over first_frame_tokens.
    const BlockKVCaches* kv_source = nullptr;
    // Frame-1 spatial-attention inputs per block ([hw, c] each); K/V are
    // projected from these with the block's own weights.
    const std::vector<Tensor>* first_frame_tokens = nullptr;

    /// Window attention with position correction in the encoder, global in the decoder.
    static ControlHooks animate_defaults();
};

/// Optional instrumentation filled in by `denoise`.
struct DenoiseRecord {
    bool capture_frame1 = false;
    bool keep_spatial_outputs = false;

    std::vector<std::optional<AttentionMode>> temporal_modes;  // nullopt: motion bypassed
    BlockKVCaches frame1_kv;                                   // when capture_frame1
    std::vector<Tensor> frame1_tokens;                         // when capture_frame1
    std::vector<Tensor> spatial_outputs;                       // [f, hw, c] per block
};

/// Weights uniform in [-1/sqrt(in_ch), 1/sqrt(in_ch)] drawn from SeededRng(seed)
/// in block order; position tables are sinusoidal.
DenoiserParams init_denoiser(std::uint64_t seed, const DenoiserArch& arch = {});

/// Predicted noise for latent video `z` ([f, c, h, w]) at timestep `t`.
///
/// Per block: add the prompt and time biases; spatial self-attention + channel
/// mix per frame with a residual; then, unless bypassed, the motion module per
/// spatial site over the f-token sequence with a residual. The prediction is
/// the activations after the last block.
Tensor denoise(const Tensor& z, const PromptEmbedding& prompt, int t, const DenoiserParams& params,
               const ControlHooks& hooks, DenoiseRecord* record = nullptr);

/// Runs `denoise` on the single frame `z1` ([1, c, h, w]) and returns each
/// spatial block's K/V ([hw, c] each).
BlockKVCaches capture_frame1_kv(const Tensor& z1, const PromptEmbedding& prompt, int t,
                                const DenoiserParams& params);

/// [f, c, h, w] <-> [f, hw, c]
Tensor latents_to_tokens(const Tensor& z);
Tensor tokens_to_latents(const Tensor& x, std::size_t height, std::size_t width);

}  // namespace azero
