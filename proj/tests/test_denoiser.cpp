// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "azero/denoiser.hpp"
#include "azero/error.hpp"
#include "azero/rng.hpp"
#include "naive.hpp"

namespace azero {
namespace {

using naive::Vec;
using Frames = std::vector<std::vector<Vec>>;  // [f][hw] -> channel vector

// ---------------------------------------------------------------------------
// Straight-line denoiser: every hook inlined, double precision throughout.

std::vector<std::pair<std::size_t, std::size_t>> oracle_keys(AttentionMode mode, std::size_t i, std::size_t f,
                                                             std::size_t& query_pos) {
    std::vector<std::pair<std::size_t, std::size_t>> keys;  // (content, position)
    switch (mode) {
        case AttentionMode::Global:
            for (std::size_t j = 1; j <= f; ++j) keys.push_back({j, j});
            query_pos = i;
            break;
        case AttentionMode::WindowUncorrected:
            for (std::size_t n = 0; n < f - i + 1; ++n) keys.push_back({1, 1});
            for (std::size_t m = 2; m <= i; ++m) keys.push_back({m, m});
            query_pos = i;
            break;
        case AttentionMode::WindowCorrected:
            for (std::size_t n = 1; n <= f - i + 1; ++n) keys.push_back({1, n});
            for (std::size_t m = 2; m <= i; ++m) keys.push_back({m, f - i + m});
            query_pos = f;
            break;
        case AttentionMode::WindowTwoAnchor:
            ADD_FAILURE() << "not covered by this oracle";
    }
    return keys;
}

// u: [f] motion-channel vectors; returns u + attention(u).
std::vector<Vec> oracle_temporal(const std::vector<Vec>& u, const TemporalAttentionParams& p, AttentionMode mode) {
    const std::size_t f = u.size();
    auto proj = [&](const Tensor& w, std::size_t content, std::size_t position) {
        Vec a = u[content - 1];
        for (std::size_t c = 0; c < a.size(); ++c) a[c] += p.pos.table.at(position - 1, c);
        return naive::matvec(w, a);
    };
    std::vector<Vec> out = u;
    for (std::size_t i = 1; i <= f; ++i) {
        std::size_t qpos = 0;
        const auto list = oracle_keys(mode, i, f, qpos);
        std::vector<Vec> keys, values;
        for (auto [content, position] : list) {
            keys.push_back(proj(p.wk.weight, content, position));
            values.push_back(proj(p.wv.weight, content, position));
        }
        const Vec o = naive::attend(proj(p.wq.weight, i, qpos), keys, values);
        for (std::size_t c = 0; c < o.size(); ++c) out[i - 1][c] += o[c];
    }
    return out;
}

struct OracleRun {
    Frames eps;
    std::vector<std::vector<Vec>> frame1_inputs;  // per block, spatial-attention input of frame 1
};

OracleRun oracle_denoise(const Tensor& z, const Vec& prompt, int t, const DenoiserParams& params, AttentionMode enc,
                         AttentionMode dec, const std::vector<std::vector<Vec>>* shared) {
    const std::size_t f = z.dim(0), c = z.dim(1), hw = z.dim(2) * z.dim(3);
    Frames x(f, std::vector<Vec>(hw, Vec(c)));
    for (std::size_t fi = 0; fi < f; ++fi) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            for (std::size_t s = 0; s < hw; ++s) x[fi][s][ch] = z[(fi * c + ch) * hw + s];
        }
    }
    const double td = t;
    Vec bias = naive::matvec(params.cond_proj.weight, prompt);
    const Vec tb = naive::matvec(params.time_proj.weight, {std::sin(td), std::cos(td), std::sin(td / 100), std::cos(td / 100)});
    for (std::size_t ch = 0; ch < c; ++ch) bias[ch] += tb[ch];

    OracleRun run;
    for (std::size_t b = 0; b < params.blocks.size(); ++b) {
        const auto& blk = params.blocks[b];
        for (auto& frame : x) {
            for (auto& tok : frame) {
                for (std::size_t ch = 0; ch < c; ++ch) tok[ch] += bias[ch];
            }
        }
        run.frame1_inputs.push_back(x[0]);

        Frames next = x;
        for (std::size_t fi = 0; fi < f; ++fi) {
            const auto& source = shared ? (*shared)[b] : x[fi];
            std::vector<Vec> keys, values;
            for (const auto& tok : source) {
                keys.push_back(naive::matvec(blk.spatial.attn.wk.weight, tok));
                values.push_back(naive::matvec(blk.spatial.attn.wv.weight, tok));
            }
            for (std::size_t s = 0; s < hw; ++s) {
                const Vec o = naive::attend(naive::matvec(blk.spatial.attn.wq.weight, x[fi][s]), keys, values);
                const Vec mixed = naive::matvec(blk.spatial.mix.weight, o);
                for (std::size_t ch = 0; ch < c; ++ch) next[fi][s][ch] += mixed[ch];
            }
        }
        x = next;

        const AttentionMode mode = b < params.arch.encoder_blocks ? enc : dec;
        for (std::size_t s = 0; s < hw; ++s) {
            std::vector<Vec> u;
            for (std::size_t fi = 0; fi < f; ++fi) u.push_back(naive::matvec(blk.motion.project_in.weight, x[fi][s]));
            u = oracle_temporal(u, blk.motion.attn1, mode);
            u = oracle_temporal(u, blk.motion.attn2, mode);
            for (std::size_t fi = 0; fi < f; ++fi) {
                const Vec o = naive::matvec(blk.motion.project_out.weight, u[fi]);
                for (std::size_t ch = 0; ch < c; ++ch) x[fi][s][ch] += o[ch];
            }
        }
    }
    run.eps = x;
    return run;
}

double relative_gap(const Tensor& eps, const Frames& oracle) {
    const std::size_t f = eps.dim(0), c = eps.dim(1), hw = eps.dim(2) * eps.dim(3);
    double diff = 0.0, scale = 0.0;
    for (std::size_t fi = 0; fi < f; ++fi) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            for (std::size_t s = 0; s < hw; ++s) {
                const double o = oracle[fi][s][ch];
                diff = std::max(diff, std::abs(eps[(fi * c + ch) * hw + s] - o));
                scale = std::max(scale, std::abs(o));
            }
        }
    }
    return diff / scale;
}

Vec as_vec(const Tensor& t) { return Vec(t.data().begin(), t.data().end()); }

// ---------------------------------------------------------------------------

TEST(InitDenoiser, SameSeedSameWeights) {
    const auto a = init_denoiser(4);
    const auto b = init_denoiser(4);
    EXPECT_EQ(a.checksum(), b.checksum());
    EXPECT_TRUE(a.blocks[3].motion.attn2.wv.weight.bitwise_equal(b.blocks[3].motion.attn2.wv.weight));
    EXPECT_NE(init_denoiser(1).checksum(), init_denoiser(2).checksum());
}

TEST(InitDenoiser, DefaultArchitectureShape) {
    const auto p = init_denoiser(9);
    ASSERT_EQ(p.blocks.size(), 4u);
    EXPECT_TRUE(p.is_encoder(1));
    EXPECT_FALSE(p.is_encoder(2));
    EXPECT_EQ(p.blocks[0].motion.attn1.pos.max_frames(), 32u);
    EXPECT_EQ(p.cond_proj.weight.dims(), (std::vector<std::size_t>{8, 8}));
    EXPECT_EQ(p.time_proj.weight.dims(), (std::vector<std::size_t>{8, 4}));
    for (float w : p.blocks[0].spatial.mix.weight.data()) EXPECT_LE(std::abs(w), 1.0 / std::sqrt(8.0));
}

TEST(InitDenoiser, GoldenChecksumForSeedNine) {
    EXPECT_EQ(init_denoiser(9).checksum(), "a86f1524112d3133");
}

TEST(InitDenoiser, RejectsBadArchitectures) {
    DenoiserArch arch;
    arch.channels = 0;
    EXPECT_THROW(init_denoiser(1, arch), ConfigError);
}

TEST(Denoise, MatchesStraightLineOracle) {
    const auto params = init_denoiser(3);
    const auto prompt = PromptEmbedding::from_text("a red ball", 8);
    SeededRng rng(3);
    const Tensor z = randn(rng, {4, 8, 8, 8});
    const Tensor eps = denoise(z, prompt, 37, params, ControlHooks::animate_defaults());
    const auto oracle = oracle_denoise(z, as_vec(prompt.vec), 37, params, AttentionMode::WindowCorrected,
                                       AttentionMode::Global, nullptr);
    EXPECT_LT(relative_gap(eps, oracle.eps), 1e-5);
}

TEST(Denoise, SharedKeysMatchStraightLineOracle) {
    const auto params = init_denoiser(3);
    const auto prompt = PromptEmbedding::from_text("a red ball", 8);
    SeededRng rng(4);
    const Tensor z1 = randn(rng, {1, 8, 8, 8});
    const Tensor z = randn(rng, {4, 8, 8, 8});

    const BlockKVCaches caches = capture_frame1_kv(z1, prompt, 12, params);
    ControlHooks hooks = ControlHooks::animate_defaults();
    hooks.share_kv = true;
    hooks.kv_source = &caches;
    const Tensor eps = denoise(z, prompt, 12, params, hooks);

    const auto first = oracle_denoise(z1, as_vec(prompt.vec), 12, params, AttentionMode::Global, AttentionMode::Global,
                                      nullptr);
    const auto oracle = oracle_denoise(z, as_vec(prompt.vec), 12, params, AttentionMode::WindowCorrected,
                                       AttentionMode::Global, &first.frame1_inputs);
    EXPECT_LT(relative_gap(eps, oracle.eps), 1e-5);
}

TEST(Denoise, ZeroWeightsLeaveOnlyTheBiasResidual) {
    auto params = init_denoiser(5);
    for (auto& blk : params.blocks) {
        for (auto* w : {&blk.spatial.attn.wv, &blk.spatial.mix, &blk.motion.project_out}) {
            w->weight = Tensor(w->weight.dims());
        }
    }
    const auto prompt = PromptEmbedding::from_text("x", 8);
    SeededRng rng(6);
    const Tensor z = randn(rng, {3, 8, 2, 2});
    const int t = 20;
    const Tensor eps = denoise(z, prompt, t, params, ControlHooks::animate_defaults());

    const Vec cond = naive::matvec(params.cond_proj.weight, as_vec(prompt.vec));
    const Vec time = naive::matvec(params.time_proj.weight, {std::sin(20.0), std::cos(20.0), std::sin(0.2), std::cos(0.2)});
    for (std::size_t fi = 0; fi < 3; ++fi) {
        for (std::size_t ch = 0; ch < 8; ++ch) {
            for (std::size_t s = 0; s < 4; ++s) {
                const std::size_t idx = (fi * 8 + ch) * 4 + s;
                EXPECT_NEAR(eps[idx], z[idx] + 4.0 * (cond[ch] + time[ch]), 1e-5);
            }
        }
    }
}

TEST(Denoise, SingleFrameIgnoresTemporalModesAndSelfSharing) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    SeededRng rng(7);
    const Tensor z1 = randn(rng, {1, 8, 8, 8});
    const Tensor plain = denoise(z1, prompt, 30, params, ControlHooks{});
    const BlockKVCaches own = capture_frame1_kv(z1, prompt, 30, params);
    for (auto mode : {AttentionMode::WindowUncorrected, AttentionMode::WindowCorrected}) {
        ControlHooks hooks;
        hooks.encoder_mode = mode;
        hooks.decoder_mode = mode;
        hooks.share_kv = true;
        hooks.kv_source = &own;
        EXPECT_TRUE(denoise(z1, prompt, 30, params, hooks).bitwise_equal(plain));
    }
}

TEST(Denoise, IdenticalFramesStayIdenticalUnderGlobalAttention) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    SeededRng rng(8);
    const Tensor one = randn(rng, {1, 8, 4, 4});
    Tensor z({5, 8, 4, 4});
    for (std::size_t fi = 0; fi < 5; ++fi) std::copy(one.data().begin(), one.data().end(), z.slice(fi).begin());
    auto pos = params;
    // Identical tokens only stay identical if no position signal is added.
    for (auto& blk : pos.blocks) {
        for (auto* a : {&blk.motion.attn1, &blk.motion.attn2}) a->pos.table = Tensor(a->pos.table.dims());
    }
    const Tensor eps = denoise(z, prompt, 10, pos, ControlHooks{});
    for (std::size_t fi = 1; fi < 5; ++fi) {
        EXPECT_TRUE(std::equal(eps.slice(fi).begin(), eps.slice(fi).end(), eps.slice(0).begin()));
    }
}

TEST(Denoise, WindowModesAreCausalInTime) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    SeededRng rng(9);
    const Tensor z = randn(rng, {6, 8, 4, 4});
    Tensor changed = z;
    for (auto& v : changed.slice(4)) v += 1.0f;
    for (auto mode : {AttentionMode::WindowUncorrected, AttentionMode::WindowCorrected}) {
        ControlHooks hooks;
        hooks.encoder_mode = mode;
        hooks.decoder_mode = mode;
        const Tensor a = denoise(z, prompt, 5, params, hooks);
        const Tensor b = denoise(changed, prompt, 5, params, hooks);
        for (std::size_t fi = 0; fi < 4; ++fi) {
            EXPECT_TRUE(std::equal(a.slice(fi).begin(), a.slice(fi).end(), b.slice(fi).begin())) << "frame " << fi;
        }
        EXPECT_FALSE(std::equal(a.slice(5).begin(), a.slice(5).end(), b.slice(5).begin()));
    }
}

TEST(Denoise, BypassedMotionMakesFramesIndependent) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    SeededRng rng(10);
    const Tensor z = randn(rng, {3, 8, 4, 4});
    Tensor changed = z;
    for (auto& v : changed.slice(2)) v -= 0.5f;
    ControlHooks hooks;
    hooks.bypass_motion = true;
    const Tensor a = denoise(z, prompt, 5, params, hooks);
    const Tensor b = denoise(changed, prompt, 5, params, hooks);
    EXPECT_TRUE(std::equal(a.slice(0).begin(), a.slice(0).end(), b.slice(0).begin()));
    EXPECT_TRUE(std::equal(a.slice(1).begin(), a.slice(1).end(), b.slice(1).begin()));
}

TEST(Denoise, RecordsTheTemporalModeOfEveryBlock) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    const Tensor z({2, 8, 2, 2});
    DenoiseRecord rec;
    denoise(z, prompt, 1, params, ControlHooks::animate_defaults(), &rec);
    using M = std::optional<AttentionMode>;
    EXPECT_EQ(rec.temporal_modes, (std::vector<M>{AttentionMode::WindowCorrected, AttentionMode::WindowCorrected,
                                                  AttentionMode::Global, AttentionMode::Global}));
    ControlHooks bypass;
    bypass.bypass_motion = true;
    DenoiseRecord rec2;
    denoise(z, prompt, 1, params, bypass, &rec2);
    EXPECT_EQ(rec2.temporal_modes, std::vector<M>(4, std::nullopt));
}

TEST(Denoise, RejectsMismatchedInputs) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    EXPECT_THROW(denoise(Tensor({1, 4, 2, 2}), prompt, 1, params, {}), DimensionError);
    EXPECT_THROW(denoise(Tensor({33, 8, 1, 1}), prompt, 1, params, {}), IndexError);
    EXPECT_THROW(denoise(Tensor({1, 8, 2, 2}), PromptEmbedding::from_text("p", 3), 1, params, {}), DimensionError);
    ControlHooks no_source;
    no_source.share_kv = true;
    EXPECT_THROW(denoise(Tensor({1, 8, 2, 2}), prompt, 1, params, no_source), ConfigError);
}

TEST(FrameOneCache, ShapesPerBlock) {
    const auto params = init_denoiser(9);
    const auto caches = capture_frame1_kv(Tensor({1, 8, 4, 2}), PromptEmbedding::from_text("p", 8), 3, params);
    ASSERT_EQ(caches.size(), 4u);
    for (const auto& kv : caches) {
        EXPECT_EQ(kv.k.dims(), (std::vector<std::size_t>{8, 8}));
        EXPECT_EQ(kv.v.dims(), (std::vector<std::size_t>{8, 8}));
    }
    EXPECT_THROW(capture_frame1_kv(Tensor({2, 8, 4, 2}), PromptEmbedding::from_text("p", 8), 3, params),
                 DimensionError);
}

TEST(FrameOneCache, FedBackOnTheSameFrameChangesNothing) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    SeededRng rng(11);
    const Tensor z1 = randn(rng, {1, 8, 4, 4});
    const auto caches = capture_frame1_kv(z1, prompt, 8, params);
    ControlHooks hooks;
    hooks.share_kv = true;
    hooks.kv_source = &caches;
    EXPECT_TRUE(denoise(z1, prompt, 8, params, hooks).bitwise_equal(denoise(z1, prompt, 8, params, {})));
}

TEST(FrameOneCache, CopiesOfFrameOneGetFrameOneSpatialOutputs) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    SeededRng rng(12);
    const Tensor z1 = randn(rng, {1, 8, 4, 4});
    Tensor z({4, 8, 4, 4});
    for (std::size_t fi = 0; fi < 4; ++fi) std::copy(z1.data().begin(), z1.data().end(), z.slice(fi).begin());
    const auto caches = capture_frame1_kv(z1, prompt, 8, params);
    ControlHooks hooks = ControlHooks::animate_defaults();
    hooks.share_kv = true;
    hooks.kv_source = &caches;
    auto max_gap = [&](const Tensor& out) {
        double worst = 0.0;
        for (std::size_t fi = 1; fi < 4; ++fi) {
            for (std::size_t i = 0; i < out.slice(0).size(); ++i) {
                worst = std::max(worst, static_cast<double>(std::abs(out.slice(fi)[i] - out.slice(0)[i])));
            }
        }
        return worst;
    };
    DenoiseRecord rec;
    rec.keep_spatial_outputs = true;
    denoise(z, prompt, 8, params, hooks, &rec);
    // Block 0 sees identical frames. Later blocks inherit the position-dependent
    // motion output unless the motion modules are bypassed.
    EXPECT_LT(max_gap(rec.spatial_outputs[0]), 1e-6);

    hooks.bypass_motion = true;
    DenoiseRecord bypassed;
    bypassed.keep_spatial_outputs = true;
    denoise(z, prompt, 8, params, hooks, &bypassed);
    for (const auto& out : bypassed.spatial_outputs) EXPECT_LT(max_gap(out), 1e-6);
}

TEST(FrameOneCache, FirstFrameTokensDeriveTheSameKeys) {
    const auto params = init_denoiser(9);
    const auto prompt = PromptEmbedding::from_text("p", 8);
    SeededRng rng(13);
    const Tensor z1 = randn(rng, {1, 8, 4, 4});
    const Tensor z = randn(rng, {3, 8, 4, 4});
    DenoiseRecord rec;
    rec.capture_frame1 = true;
    denoise(z1, prompt, 8, params, {}, &rec);
    ControlHooks a;
    a.share_kv = true;
    a.kv_source = &rec.frame1_kv;
    ControlHooks b;
    b.share_kv = true;
    b.first_frame_tokens = &rec.frame1_tokens;
    EXPECT_TRUE(denoise(z, prompt, 8, params, a).bitwise_equal(denoise(z, prompt, 8, params, b)));
}

TEST(PromptEmbedding, DeterministicPerText) {
    const auto a = PromptEmbedding::from_text("cat", 8);
    EXPECT_TRUE(a.vec.bitwise_equal(PromptEmbedding::from_text("cat", 8).vec));
    EXPECT_FALSE(a.vec.bitwise_equal(PromptEmbedding::from_text("dog", 8).vec));
}

TEST(TokenLayout, RoundTrip) {
    SeededRng rng(14);
    const Tensor z = randn(rng, {2, 3, 4, 5});
    const Tensor x = latents_to_tokens(z);
    EXPECT_EQ(x.dims(), (std::vector<std::size_t>{2, 20, 3}));
    EXPECT_EQ(x[(1 * 20 + 7) * 3 + 2], z[(1 * 3 + 2) * 20 + 7]);
    EXPECT_TRUE(tokens_to_latents(x, 4, 5).bitwise_equal(z));
}

}  // namespace
}  // namespace azero
