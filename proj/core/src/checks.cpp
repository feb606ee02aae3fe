// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "azero/reference.hpp"
#include "azero/sampler.hpp"
#include "azero/window_attention.hpp"

namespace azero {

namespace {

std::string fmt(const char* pattern, double value) {
    char buf[96];
    std::snprintf(buf, sizeof buf, pattern, value);
    return buf;
}

TemporalAttentionParams make_params(SeededRng& rng, std::size_t c, std::size_t f_max, const CheckOptions& options) {
    auto p = reference::random_temporal_params(rng, c, f_max);
    if (options.corrupt_position_table && f_max > 3) p.pos.table.at(3, 0) += 0.5f;
    return p;
}

CheckResult position_table(const CheckOptions& options) {
    SeededRng rng(1);
    const auto p = make_params(rng, 16, 16, options);
    double worst = 0.0;
    for (std::size_t j = 0; j < 16; ++j) {
        const auto expect = sinusoidal_embedding(j, 16);
        for (std::size_t c = 0; c < 16; ++c) {
            worst = std::max(worst, std::abs(static_cast<double>(p.pos.table.at(j, c)) - expect[c]));
        }
    }
    return {"position-table-sinusoidal", worst == 0.0, fmt("max deviation %.3g", worst)};
}

CheckResult window_equals_global_at_last_frame(const CheckOptions& options) {
    double worst = 0.0;
    for (std::size_t f : {2, 4, 8, 16}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            SeededRng rng(seed * 31 + f);
            const auto p = make_params(rng, 64, 16, options);
            const Tensor z = randn(rng, {f, 64});
            const Tensor global = global_temporal_attention(z, p);
            const Tensor last_g({1, 64}, std::vector<float>(global.slice(f - 1).begin(), global.slice(f - 1).end()));
            for (auto mode : {AttentionMode::WindowUncorrected, AttentionMode::WindowCorrected}) {
                const Tensor w = window_attention_output(z, p, mode);
                const Tensor last_w({1, 64}, std::vector<float>(w.slice(f - 1).begin(), w.slice(f - 1).end()));
                worst = std::max(worst, reference::relative_error(last_w, last_g));
            }
        }
    }
    return {"window-equals-global-at-last-frame", worst <= 1e-5, fmt("max relative error %.3g (tol 1e-5)", worst)};
}

CheckResult first_frame_boundary(const CheckOptions& options) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SeededRng rng(seed + 1000);
        const std::size_t f = 2 + seed % 15;
        const auto p = make_params(rng, 8, 16, options);
        const Tensor z = randn(rng, {f, 8});
        const Tensor out = window_attention_output(z, p, AttentionMode::WindowUncorrected);
        const auto v11 = reference::project(p.wv, z, p.pos, 1, 1);
        for (std::size_t c = 0; c < 8; ++c) worst = std::max(worst, std::abs(out.at(0, c) - v11[c]));
    }
    return {"uncorrected-frame1-equals-v11", worst <= 1e-6, fmt("max abs error %.3g (tol 1e-6)", worst)};
}

CheckResult correction_degeneracy(const CheckOptions& options) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SeededRng rng(seed + 2000);
        const std::size_t f = 1 + seed % 16;
        auto p = make_params(rng, 8, 16, options);
        const Tensor row = randn(rng, {1, 8});
        for (std::size_t j = 0; j < 16; ++j) {
            std::copy(row.data().begin(), row.data().end(), p.pos.table.slice(j).begin());
        }
        const Tensor z = randn(rng, {f, 8});
        worst = std::max(worst, max_abs_diff(window_attention_output(z, p, AttentionMode::WindowCorrected),
                                             window_attention_output(z, p, AttentionMode::WindowUncorrected)));
    }
    return {"constant-positions-corrected-equals-uncorrected", worst <= 1e-6, fmt("max abs error %.3g (tol 1e-6)", worst)};
}

CheckResult oracle_equivalence(const CheckOptions& options) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SeededRng rng(seed + 3000);
        const std::size_t f = 1 + seed % 8;
        const std::size_t c = 2 + (seed / 8) % 7;
        const auto p = make_params(rng, c, 8, options);
        const Tensor z = randn(rng, {f, c});
        worst = std::max(worst, max_abs_diff(global_temporal_attention(z, p),
                                             reference::temporal_attention(z, p, AttentionMode::Global)));
        for (auto mode : {AttentionMode::WindowUncorrected, AttentionMode::WindowCorrected}) {
            worst = std::max(worst, max_abs_diff(window_attention_output(z, p, mode),
                                                 reference::temporal_attention(z, p, mode)));
        }
        if (f >= 3) {
            worst = std::max(worst, max_abs_diff(window_attention_output(z, p, AttentionMode::WindowTwoAnchor),
                                                 reference::temporal_attention(z, p, AttentionMode::WindowTwoAnchor)));
        }
        const std::size_t hw = 1 + (seed / 3) % 8;
        const auto sp = reference::random_spatial_params(rng, c);
        const Tensor x = randn(rng, {hw, c});
        const Tensor source = randn(rng, {hw, c});
        const KVPair shared = spatial_keys_values(source, sp);
        worst = std::max(worst, max_abs_diff(spatial_self_attention(x, sp), reference::spatial_attention(x, sp)));
        worst = std::max(worst, max_abs_diff(spatial_self_attention(x, sp, &shared),
                                             reference::spatial_attention(x, sp, &source)));
    }
    return {"production-matches-naive-oracles", worst <= 1e-6, fmt("max abs error %.3g (tol 1e-6)", worst)};
}

CheckResult corrected_list_structure(const CheckOptions&) {
    for (std::size_t f = 1; f <= 16; ++f) {
        for (std::size_t i = 1; i <= f; ++i) {
            const auto list = corrected_window(i, f);
            std::multiset<std::size_t> positions, contents;
            for (const auto& r : list) {
                positions.insert(r.position);
                contents.insert(r.content);
            }
            std::multiset<std::size_t> want_positions, want_contents;
            for (std::size_t j = 1; j <= f; ++j) want_positions.insert(j);
            for (std::size_t n = 0; n < f - i + 1; ++n) want_contents.insert(1);
            for (std::size_t m = 2; m <= i; ++m) want_contents.insert(m);
            if (positions != want_positions || contents != want_contents) {
                return {"corrected-key-list-structure", false,
                        "f=" + std::to_string(f) + " i=" + std::to_string(i) + " list is malformed"};
            }
        }
    }
    return {"corrected-key-list-structure", true, "all i <= f <= 16"};
}

CheckResult first_frame_exactness(const CheckOptions&) {
    DenoiserArch arch;
    arch.channels = 4;
    arch.motion_channels = 4;
    arch.cond_channels = 4;
    const auto model = init_denoiser(9, arch);
    SamplerConfig config;
    config.steps = 6;
    config.frames = 4;
    config.tt_lo = 2;
    config.tt_hi = 3;
    config.tt_iters = 1;
    config.time_travel = true;
    config.seed = 3;
    const auto trace = generate_t2i_trace("check", 1, config, model, 4, 4);
    const auto run = animate(trace, config, model);
    const bool exact = run.log.anchors_exact_everywhere() && first_frame_mse(run.video, trace.latent(0)) == 0.0;
    return {"first-frame-exactness", exact, exact ? "frame 1 equals z_0 and every logged step" : "frame 1 drifted"};
}

}  // namespace

std::vector<CheckResult> run_fast_checks(const CheckOptions& options) {
    return {
        position_table(options),
        window_equals_global_at_last_frame(options),
        first_frame_boundary(options),
        correction_degeneracy(options),
        oracle_equivalence(options),
        corrected_list_structure(options),
        first_frame_exactness(options),
    };
}

}  // namespace azero
