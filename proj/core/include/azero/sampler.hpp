// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "azero/denoiser.hpp"
#include "azero/rng.hpp"
#include "azero/schedule.hpp"
#include "azero/trace.hpp"
#include "azero/window_attention.hpp"

namespace azero {

struct SamplerConfig {
    int steps = 50;
    int frames = 16;
    double eta = 0.0;
    bool insert_latents = true;
    bool share_kv = true;
    AttentionMode encoder_mode = AttentionMode::WindowCorrected;
    AttentionMode decoder_mode = AttentionMode::Global;
    bool bypass_motion = false;
    bool time_travel = false;
    int tt_iters = 5;
    // Inclusive range of denoising-step indices; step 1 is the first reverse
    // step (t = T), step T the last (t = 1).
    int tt_lo = 10;
    int tt_hi = 20;
    std::uint64_t seed = 0;
    // DDIM inversion: extra rounds that re-evaluate eps at the current z_t
    // estimate. 0 is the textbook approximation (eps taken at z_{t-1}).
    int inversion_refinements = 2;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
    NoiseSchedule schedule() const { return NoiseSchedule::linear(steps); }
    bool time_travel_at(int step) const noexcept { return time_travel && step >= tt_lo && step <= tt_hi; }
};

/// What happened in one denoising step of a video run.
struct StepEvent {
    int step = 0;  // 1-based
    int t = 0;     // diffusion timestep entering the step
    bool inserted = false;
    // Frame 1 (and frame f when interpolating) at denoiser input equals the
    // trace latent at t, and after the step equals the trace latent at t - 1.
    bool anchors_match_trace = false;
    int tt_iterations = 0;
    bool kv_shared = false;
    bool kv_recomputed = false;  // K/V rebuilt from trace latents (no cache recorded)
    AttentionMode encoder_mode = AttentionMode::Global;
    AttentionMode decoder_mode = AttentionMode::Global;
    bool motion_bypassed = false;
};

struct StepLog {
    std::vector<StepEvent> events;

    int total_tt_iterations() const;
    bool anchors_exact_everywhere() const;
};

struct AnimationResult {
    Tensor video;  // [f, c, h, w], final z_0
    StepLog log;
};

struct Metrics {
    double first_frame_mse = 0.0;
    double frame_smoothness = 0.0;
};

/// Single-frame deterministic DDIM run from seeded noise recording every
/// latent and every spatial K/V set.
GenerationTrace generate_t2i_trace(const std::string& prompt, std::uint64_t seed, const SamplerConfig& config,
                                   const DenoiserParams& denoiser, int height = 8, int width = 8);

/// Copy of `z` whose frame `frame` (1-based) is replaced by `latent` ([1, c, h, w]).
Tensor insert_frame(const Tensor& z, std::size_t frame, const Tensor& latent);
/// Frame 1 of `z` replaced by the trace latent at t. Missing t is an error.
Tensor insert_first_frame(const Tensor& z, const GenerationTrace& trace, int t);

/// Callbacks for time-travel sampling at one timestep.
struct TimeTravelStep {
    std::function<Tensor(Tensor&)> predict_noise;     // may insert anchors into z_t first
    std::function<void(Tensor&)> after_reverse;       // re-applies insertion to z_{t-1}; may be empty
};

/// `iters` rounds of {z_t = sqrt(alpha_t) z_{t-1} + sqrt(1 - alpha_t) N with
/// fresh N; eps = predict_noise(z_t); z_{t-1} = DDIM reverse step}.
Tensor time_travel_loop(Tensor z_prev, int t, int iters, const NoiseSchedule& schedule, const TimeTravelStep& step,
                        SeededRng& rng, double eta = 0.0);

/// Two-step animation: trace frame 1 drives the video via latent insertion,
/// K/V sharing and window attention.
AnimationResult animate(const GenerationTrace& trace, const SamplerConfig& config, const DenoiserParams& denoiser);

/// Frames 1 and f pinned to two traces; two-anchor window attention in the
/// encoder; spatial K/V shared from trace_a only.
AnimationResult interpolate(const GenerationTrace& trace_a, const GenerationTrace& trace_b,
                            const SamplerConfig& config, const DenoiserParams& denoiser);

/// DDIM inversion of a single-frame latent into a pseudo-trace (no K/V caches).
/// Each step starts from eps(z_{t-1}) and then runs
/// `config.inversion_refinements` fixed-point rounds z_t <- invert(z_{t-1}, eps(z_t)),
/// which converge to the exact inverse of the deterministic reverse step.
GenerationTrace invert_latent(const Tensor& z0, const std::string& prompt, const SamplerConfig& config,
                              const DenoiserParams& denoiser);

/// Plain joint sampling from `initial` with no controls beyond the given
/// temporal hooks. Reference path for control-free runs.
Tensor sample_joint(const Tensor& initial, const PromptEmbedding& prompt, const NoiseSchedule& schedule,
                    const DenoiserParams& denoiser, const ControlHooks& hooks);

/// Initial latents used by animate/interpolate: seeded noise for all frames.
Tensor initial_noise(std::uint64_t seed, std::size_t frames, const Tensor& like_frame);

double first_frame_mse(const Tensor& video, const Tensor& reference_frame);
double frame_smoothness(const Tensor& video);
Metrics compute_metrics(const Tensor& video, const GenerationTrace& trace);

/// Throws TraceMismatch unless the trace was made with this schedule and model.
void check_trace_compatible(const GenerationTrace& trace, const SamplerConfig& config, const DenoiserParams& denoiser);

}  // namespace azero
