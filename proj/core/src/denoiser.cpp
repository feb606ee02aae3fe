// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/denoiser.hpp"

#include <cmath>
#include <string>

#include "azero/error.hpp"
#include "azero/rng.hpp"
#include "azero/tensor_io.hpp"

namespace azero {

void DenoiserArch::validate() const {
    if (encoder_blocks < 1 || decoder_blocks < 1) throw ConfigError("denoiser needs at least one encoder and one decoder block");
    if (channels < 2 || motion_channels < 2 || cond_channels < 2) throw ConfigError("denoiser channel widths must be >= 2");
    if (max_frames < 1) throw ConfigError("denoiser max_frames must be positive");
}

namespace {

LinearParams draw_linear(SeededRng& rng, std::size_t out_ch, std::size_t in_ch) {
    return LinearParams{rand_uniform(rng, {out_ch, in_ch}, 1.0 / std::sqrt(static_cast<double>(in_ch)))};
}

template <typename Fn>
void for_each_weight(const DenoiserParams& p, Fn&& fn) {
    for (const auto& b : p.blocks) {
        fn(b.spatial.attn.wq);
        fn(b.spatial.attn.wk);
        fn(b.spatial.attn.wv);
        fn(b.spatial.mix);
        fn(b.motion.project_in);
        for (const auto* a : {&b.motion.attn1, &b.motion.attn2}) {
            fn(a->wq);
            fn(a->wk);
            fn(a->wv);
        }
        fn(b.motion.project_out);
    }
    fn(p.cond_proj);
    fn(p.time_proj);
}

}  // namespace

DenoiserParams init_denoiser(std::uint64_t seed, const DenoiserArch& arch) {
    arch.validate();
    SeededRng rng(seed);
    DenoiserParams p;
    p.arch = arch;
    p.seed = seed;
    const auto c = arch.channels;
    const auto m = arch.motion_channels;
    const auto pos = PositionEmbeddings::sinusoidal(arch.max_frames, m);
    for (std::size_t b = 0; b < arch.encoder_blocks + arch.decoder_blocks; ++b) {
        DenoiserBlock block;
        block.spatial.attn.wq = draw_linear(rng, c, c);
        block.spatial.attn.wk = draw_linear(rng, c, c);
        block.spatial.attn.wv = draw_linear(rng, c, c);
        block.spatial.mix = draw_linear(rng, c, c);
        block.motion.project_in = draw_linear(rng, m, c);
        for (auto* a : {&block.motion.attn1, &block.motion.attn2}) {
            a->wq = draw_linear(rng, m, m);
            a->wk = draw_linear(rng, m, m);
            a->wv = draw_linear(rng, m, m);
            a->pos = pos;
        }
        block.motion.project_out = draw_linear(rng, c, m);
        p.blocks.push_back(std::move(block));
    }
    p.cond_proj = draw_linear(rng, c, arch.cond_channels);
    p.time_proj = draw_linear(rng, c, 4);
    return p;
}

std::string DenoiserParams::checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for_each_weight(*this, [&](const LinearParams& w) {
        const auto bytes = encode_tensor(w.weight);
        h = fnv1a64(bytes, h);
    });
    return hex64(h);
}

PromptEmbedding PromptEmbedding::from_text(const std::string& text, std::size_t channels) {
    SeededRng rng(fnv1a64(text));
    return PromptEmbedding{text, randn(rng, {channels})};
}

std::array<float, 4> time_features(int t) noexcept {
    const double x = static_cast<double>(t);
    return {static_cast<float>(std::sin(x)), static_cast<float>(std::cos(x)), static_cast<float>(std::sin(x / 100.0)),
            static_cast<float>(std::cos(x / 100.0))};
}

ControlHooks ControlHooks::animate_defaults() {
    ControlHooks h;
    h.encoder_mode = AttentionMode::WindowCorrected;
    h.decoder_mode = AttentionMode::Global;
    return h;
}

Tensor latents_to_tokens(const Tensor& z) {
    require_rank(z, 4, "latent video");
    const std::size_t f = z.dim(0), c = z.dim(1), hw = z.dim(2) * z.dim(3);
    Tensor x({f, hw, c});
    for (std::size_t fi = 0; fi < f; ++fi) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            for (std::size_t s = 0; s < hw; ++s) x[(fi * hw + s) * c + ch] = z[(fi * c + ch) * hw + s];
        }
    }
    return x;
}

Tensor tokens_to_latents(const Tensor& x, std::size_t height, std::size_t width) {
    require_rank(x, 3, "token video");
    const std::size_t f = x.dim(0), hw = x.dim(1), c = x.dim(2);
    if (hw != height * width) throw DimensionError("token count does not match latent height * width");
    Tensor z({f, c, height, width});
    for (std::size_t fi = 0; fi < f; ++fi) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            for (std::size_t s = 0; s < hw; ++s) z[(fi * c + ch) * hw + s] = x[(fi * hw + s) * c + ch];
        }
    }
    return z;
}

namespace {

Tensor frame_tokens(const Tensor& x, std::size_t fi) {
    const auto src = x.slice(fi);
    return Tensor({x.dim(1), x.dim(2)}, std::vector<float>(src.begin(), src.end()));
}

// rows of `x` ([n, in]) mapped through `w` into a fresh [n, out] tensor.
Tensor map_rows(const Tensor& x, const LinearParams& w) {
    Tensor out({x.dim(0), w.out_ch()});
    std::vector<double> acc(w.out_ch());
    for (std::size_t r = 0; r < x.dim(0); ++r) {
        w.apply(x.slice(r), acc);
        auto dst = out.slice(r);
        for (std::size_t ch = 0; ch < acc.size(); ++ch) dst[ch] = static_cast<float>(acc[ch]);
    }
    return out;
}

void add_in_place(Tensor& dst, const Tensor& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void apply_spatial(Tensor& x, const DenoiserBlock& block, std::size_t b, const ControlHooks& hooks,
                   DenoiseRecord* record) {
    const std::size_t f = x.dim(0);
    const auto& attn = block.spatial.attn;

    KVPair derived;
    const KVPair* shared = nullptr;
    if (hooks.share_kv) {
        if (hooks.kv_source != nullptr) {
            if (b >= hooks.kv_source->size()) throw TraceMismatch("K/V cache has no entry for block " + std::to_string(b));
            shared = &(*hooks.kv_source)[b];
        } else if (hooks.first_frame_tokens != nullptr) {
            if (b >= hooks.first_frame_tokens->size()) {
                throw TraceMismatch("frame-1 tokens have no entry for block " + std::to_string(b));
            }
            derived = spatial_keys_values((*hooks.first_frame_tokens)[b], attn);
            shared = &derived;
        } else {
            throw ConfigError("K/V sharing requested without a frame-1 K/V source");
        }
    }

    if (record != nullptr && record->capture_frame1) {
        Tensor first = frame_tokens(x, 0);
        record->frame1_kv.push_back(spatial_keys_values(first, attn));
        record->frame1_tokens.push_back(std::move(first));
    }

    for (std::size_t fi = 0; fi < f; ++fi) {
        const Tensor tokens = frame_tokens(x, fi);
        const Tensor mixed = map_rows(spatial_self_attention(tokens, attn, shared), block.spatial.mix);
        auto dst = x.slice(fi);
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += mixed[i];
    }
    if (record != nullptr && record->keep_spatial_outputs) record->spatial_outputs.push_back(x);
}

void apply_motion(Tensor& x, const MotionModuleParams& motion, AttentionMode mode) {
    const std::size_t f = x.dim(0), hw = x.dim(1), c = x.dim(2);
    Tensor site({f, c});
    for (std::size_t s = 0; s < hw; ++s) {
        for (std::size_t fi = 0; fi < f; ++fi) {
            for (std::size_t ch = 0; ch < c; ++ch) site.at(fi, ch) = x[(fi * hw + s) * c + ch];
        }
        Tensor u = map_rows(site, motion.project_in);
        add_in_place(u, temporal_attention(u, motion.attn1, mode));
        add_in_place(u, temporal_attention(u, motion.attn2, mode));
        const Tensor out = map_rows(u, motion.project_out);
        for (std::size_t fi = 0; fi < f; ++fi) {
            for (std::size_t ch = 0; ch < c; ++ch) x[(fi * hw + s) * c + ch] += out.at(fi, ch);
        }
    }
}

}  // namespace

Tensor denoise(const Tensor& z, const PromptEmbedding& prompt, int t, const DenoiserParams& params,
               const ControlHooks& hooks, DenoiseRecord* record) {
    require_rank(z, 4, "denoiser input");
    require_finite(z, "denoiser input");
    if (z.dim(1) != params.arch.channels) {
        throw DimensionError("denoiser input has " + std::to_string(z.dim(1)) + " channels, model expects " +
                             std::to_string(params.arch.channels));
    }
    if (z.dim(0) > params.arch.max_frames) throw IndexError("video has more frames than the position table");
    if (t < 0) throw IndexError("timestep must be non-negative, got " + std::to_string(t));
    if (prompt.vec.size() != params.arch.cond_channels) throw DimensionError("prompt embedding width mismatch");

    const std::size_t c = params.arch.channels;
    std::vector<double> bias(c), time_bias(c);
    params.cond_proj.apply(prompt.vec.data(), bias);
    const auto tf = time_features(t);
    params.time_proj.apply(tf, time_bias);
    std::vector<float> block_bias(c);
    for (std::size_t ch = 0; ch < c; ++ch) block_bias[ch] = static_cast<float>(bias[ch] + time_bias[ch]);

    Tensor x = latents_to_tokens(z);
    for (std::size_t b = 0; b < params.blocks.size(); ++b) {
        const auto& block = params.blocks[b];
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += block_bias[i % c];

        apply_spatial(x, block, b, hooks, record);

        if (hooks.bypass_motion) {
            if (record != nullptr) record->temporal_modes.push_back(std::nullopt);
            continue;
        }
        const AttentionMode mode = params.is_encoder(b) ? hooks.encoder_mode : hooks.decoder_mode;
        apply_motion(x, block.motion, mode);
        if (record != nullptr) record->temporal_modes.push_back(mode);
    }
    return tokens_to_latents(x, z.dim(2), z.dim(3));
}

BlockKVCaches capture_frame1_kv(const Tensor& z1, const PromptEmbedding& prompt, int t, const DenoiserParams& params) {
    require_rank(z1, 4, "frame-1 latent");
    if (z1.dim(0) != 1) throw DimensionError("capture_frame1_kv expects a single-frame latent");
    DenoiseRecord record;
    record.capture_frame1 = true;
    denoise(z1, prompt, t, params, ControlHooks{}, &record);
    return std::move(record.frame1_kv);
}

}  // namespace azero
