// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/sampler.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "azero/error.hpp"

namespace azero {

void SamplerConfig::validate() const {
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (frames < 1) throw ConfigError("frames must be >= 1");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
    if (inversion_refinements < 0) throw ConfigError("inversion refinements must be >= 0");
    if (tt_iters < 0) throw ConfigError("tt-iters must be >= 0");
    if (tt_lo < 1 || tt_lo > tt_hi || (time_travel && tt_hi > steps)) {
        throw ConfigError("tt-range must satisfy 1 <= lo <= hi <= steps, got " + std::to_string(tt_lo) + ":" +
                          std::to_string(tt_hi));
    }
}

int StepLog::total_tt_iterations() const {
    int n = 0;
    for (const auto& e : events) n += e.tt_iterations;
    return n;
}

bool StepLog::anchors_exact_everywhere() const {
    return !events.empty() && std::all_of(events.begin(), events.end(), [](const StepEvent& e) {
        return e.inserted && e.anchors_match_trace;
    });
}

Tensor insert_frame(const Tensor& z, std::size_t frame, const Tensor& latent) {
    require_rank(z, 4, "video latent");
    const std::size_t expect[4] = {1, z.dim(1), z.dim(2), z.dim(3)};
    require_dims(latent, expect, "inserted latent");
    if (frame < 1 || frame > z.dim(0)) {
        throw IndexError("frame " + std::to_string(frame) + " outside 1.." + std::to_string(z.dim(0)));
    }
    Tensor out = z;
    const auto src = latent.data();
    std::copy(src.begin(), src.end(), out.slice(frame - 1).begin());
    return out;
}

Tensor insert_first_frame(const Tensor& z, const GenerationTrace& trace, int t) {
    return insert_frame(z, 1, trace.latent(t));
}

Tensor time_travel_loop(Tensor z_prev, int t, int iters, const NoiseSchedule& schedule, const TimeTravelStep& step,
                        SeededRng& rng, double eta) {
    const double alpha = schedule.alpha(t);
    for (int k = 0; k < iters; ++k) {
        const Tensor noise = randn(rng, z_prev.dims());
        Tensor z_t = rediffuse(z_prev, alpha, noise);
        const Tensor eps = step.predict_noise(z_t);
        z_prev = ddim_reverse_step(z_t, eps, t, schedule, eta, &rng);
        if (step.after_reverse) step.after_reverse(z_prev);
    }
    return z_prev;
}

void check_trace_compatible(const GenerationTrace& trace, const SamplerConfig& config, const DenoiserParams& denoiser) {
    const auto expected = config.schedule().hash();
    if (trace.schedule_hash != expected) {
        throw TraceMismatch("trace schedule hash " + trace.schedule_hash + " does not match the requested schedule " +
                            expected + " (" + std::to_string(config.steps) + " steps)");
    }
    if (!(trace.arch == denoiser.arch) || trace.model_checksum != denoiser.checksum()) {
        throw TraceMismatch("trace was generated with a different denoiser (model checksum " + trace.model_checksum +
                            ", have " + denoiser.checksum() + ")");
    }
    trace.validate();
}

Tensor initial_noise(std::uint64_t seed, std::size_t frames, const Tensor& like_frame) {
    SeededRng rng(seed);
    return randn(rng, {frames, like_frame.dim(1), like_frame.dim(2), like_frame.dim(3)});
}

namespace {

ControlHooks temporal_hooks(const SamplerConfig& config) {
    ControlHooks hooks;
    hooks.encoder_mode = config.encoder_mode;
    hooks.decoder_mode = config.decoder_mode;
    hooks.bypass_motion = config.bypass_motion;
    return hooks;
}

bool frame_equals(const Tensor& video, std::size_t frame, const Tensor& latent) {
    const auto a = video.slice(frame - 1);
    const auto b = latent.data();
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](float x, float y) { return std::bit_cast<std::uint32_t>(x) == std::bit_cast<std::uint32_t>(y); });
}

struct Anchor {
    std::size_t frame;  // 1-based
    const GenerationTrace* trace;
};

// Shared loop behind animate and interpolate.
AnimationResult run_video(const std::vector<Anchor>& anchors, const GenerationTrace& kv_trace, Tensor z,
                          const SamplerConfig& config, const ControlHooks& base_hooks, const DenoiserParams& denoiser) {
    const NoiseSchedule schedule = config.schedule();
    const PromptEmbedding prompt = PromptEmbedding::from_text(kv_trace.prompt, denoiser.arch.cond_channels);
    const int T = schedule.steps();
    // Seeded apart from the initial-noise stream so frame noise does not
    // depend on whether time travel or eta > 0 is enabled.
    SeededRng rng(config.seed ^ 0xA5A5A5A5DEADBEEFULL);
    std::map<int, BlockKVCaches> recomputed;

    auto insert_at = [&](Tensor& video, int t) {
        for (const auto& a : anchors) video = insert_frame(video, a.frame, a.trace->latent(t));
    };
    auto anchors_at = [&](const Tensor& video, int t) {
        return std::all_of(anchors.begin(), anchors.end(),
                           [&](const Anchor& a) { return frame_equals(video, a.frame, a.trace->latent(t)); });
    };

    AnimationResult result;
    for (int step = 1; step <= T; ++step) {
        const int t = T - step + 1;
        StepEvent event;
        event.step = step;
        event.t = t;
        event.encoder_mode = base_hooks.encoder_mode;
        event.decoder_mode = base_hooks.decoder_mode;
        event.motion_bypassed = base_hooks.bypass_motion;

        ControlHooks hooks = base_hooks;
        if (config.share_kv) {
            hooks.share_kv = true;
            hooks.kv_source = kv_trace.kv_at(t);
            if (hooks.kv_source == nullptr) {
                auto it = recomputed.find(t);
                if (it == recomputed.end()) {
                    it = recomputed.emplace(t, capture_frame1_kv(kv_trace.latent(t), prompt, t, denoiser)).first;
                }
                hooks.kv_source = &it->second;
                event.kv_recomputed = true;
            }
            event.kv_shared = true;
        }

        auto predict = [&](Tensor& z_t) {
            if (config.insert_latents) insert_at(z_t, t);
            return denoise(z_t, prompt, t, denoiser, hooks);
        };

        if (config.insert_latents) insert_at(z, t);
        event.inserted = config.insert_latents;
        bool exact = config.insert_latents && anchors_at(z, t);

        z = ddim_reverse_step(z, predict(z), t, schedule, config.eta, &rng);
        if (config.insert_latents) insert_at(z, t - 1);

        if (config.time_travel_at(step) && config.tt_iters > 0) {
            TimeTravelStep tt;
            tt.predict_noise = predict;
            if (config.insert_latents) tt.after_reverse = [&](Tensor& z_prev) { insert_at(z_prev, t - 1); };
            z = time_travel_loop(std::move(z), t, config.tt_iters, schedule, tt, rng, config.eta);
            event.tt_iterations = config.tt_iters;
        }
        event.anchors_match_trace = exact && anchors_at(z, t - 1);
        result.log.events.push_back(event);
    }
    result.video = std::move(z);
    return result;
}

}  // namespace

GenerationTrace generate_t2i_trace(const std::string& prompt, std::uint64_t seed, const SamplerConfig& config,
                                   const DenoiserParams& denoiser, int height, int width) {
    if (config.steps < 1) throw ConfigError("steps must be >= 1");
    if (height < 1 || width < 1) throw ConfigError("latent height and width must be positive");
    const NoiseSchedule schedule = config.schedule();
    const PromptEmbedding embedding = PromptEmbedding::from_text(prompt, denoiser.arch.cond_channels);

    GenerationTrace trace;
    trace.origin = "t2i";
    trace.prompt = prompt;
    trace.seed = seed;
    trace.steps = schedule.steps();
    trace.schedule_hash = schedule.hash();
    trace.arch = denoiser.arch;
    trace.model_seed = denoiser.seed;
    trace.model_checksum = denoiser.checksum();

    SeededRng rng(seed);
    Tensor z = randn(rng, {1, denoiser.arch.channels, static_cast<std::size_t>(height), static_cast<std::size_t>(width)});
    const int T = schedule.steps();
    trace.latents[T] = z;
    for (int t = T; t >= 1; --t) {
        DenoiseRecord record;
        record.capture_frame1 = true;
        const Tensor eps = denoise(z, embedding, t, denoiser, ControlHooks{}, &record);
        trace.kv[t] = std::move(record.frame1_kv);
        z = ddim_reverse_step(z, eps, t, schedule);
        trace.latents[t - 1] = z;
    }
    return trace;
}

AnimationResult animate(const GenerationTrace& trace, const SamplerConfig& config, const DenoiserParams& denoiser) {
    config.validate();
    check_trace_compatible(trace, config, denoiser);
    const int T = config.steps;
    Tensor z = initial_noise(config.seed, static_cast<std::size_t>(config.frames), trace.latent(T));
    z = insert_frame(z, 1, trace.latent(T));
    return run_video({Anchor{1, &trace}}, trace, std::move(z), config, temporal_hooks(config), denoiser);
}

AnimationResult interpolate(const GenerationTrace& trace_a, const GenerationTrace& trace_b,
                            const SamplerConfig& config, const DenoiserParams& denoiser) {
    config.validate();
    if (config.frames < 3) throw ConfigError("interpolation needs at least 3 frames");
    check_trace_compatible(trace_a, config, denoiser);
    check_trace_compatible(trace_b, config, denoiser);
    if (!(trace_a.latent(0).dims() == trace_b.latent(0).dims())) {
        throw TraceMismatch("interpolation traces have different latent shapes");
    }
    const int T = config.steps;
    const auto f = static_cast<std::size_t>(config.frames);
    Tensor z = initial_noise(config.seed, f, trace_a.latent(T));
    z = insert_frame(z, 1, trace_a.latent(T));
    z = insert_frame(z, f, trace_b.latent(T));

    ControlHooks hooks = temporal_hooks(config);
    if (hooks.encoder_mode != AttentionMode::Global) hooks.encoder_mode = AttentionMode::WindowTwoAnchor;
    if (hooks.decoder_mode != AttentionMode::Global) hooks.decoder_mode = AttentionMode::WindowTwoAnchor;
    return run_video({Anchor{1, &trace_a}, Anchor{f, &trace_b}}, trace_a, std::move(z), config, hooks, denoiser);
}

GenerationTrace invert_latent(const Tensor& z0, const std::string& prompt, const SamplerConfig& config,
                              const DenoiserParams& denoiser) {
    require_rank(z0, 4, "inversion input");
    if (z0.dim(0) != 1) throw DimensionError("inversion expects a single-frame latent [1, c, h, w]");
    require_finite(z0, "inversion input");
    if (config.steps < 1) throw ConfigError("steps must be >= 1");
    if (config.inversion_refinements < 0) throw ConfigError("inversion refinements must be >= 0");
    const NoiseSchedule schedule = config.schedule();
    const PromptEmbedding embedding = PromptEmbedding::from_text(prompt, denoiser.arch.cond_channels);

    GenerationTrace trace;
    trace.origin = "inversion";
    trace.prompt = prompt;
    trace.steps = schedule.steps();
    trace.schedule_hash = schedule.hash();
    trace.arch = denoiser.arch;
    trace.model_seed = denoiser.seed;
    trace.model_checksum = denoiser.checksum();

    Tensor z = z0;
    trace.latents[0] = z;
    for (int t = 1; t <= schedule.steps(); ++t) {
        Tensor z_t = ddim_inversion_step(z, denoise(z, embedding, t, denoiser, ControlHooks{}), t, schedule);
        for (int r = 0; r < config.inversion_refinements; ++r) {
            z_t = ddim_inversion_step(z, denoise(z_t, embedding, t, denoiser, ControlHooks{}), t, schedule);
        }
        z = std::move(z_t);
        trace.latents[t] = z;
    }
    return trace;
}

Tensor sample_joint(const Tensor& initial, const PromptEmbedding& prompt, const NoiseSchedule& schedule,
                    const DenoiserParams& denoiser, const ControlHooks& hooks) {
    Tensor z = initial;
    for (int t = schedule.steps(); t >= 1; --t) {
        z = ddim_reverse_step(z, denoise(z, prompt, t, denoiser, hooks), t, schedule);
    }
    return z;
}

double first_frame_mse(const Tensor& video, const Tensor& reference_frame) {
    require_rank(video, 4, "video");
    const auto a = video.slice(0);
    const auto b = reference_frame.data();
    if (a.size() != b.size()) throw DimensionError("first_frame_mse: frame shapes differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

double frame_smoothness(const Tensor& video) {
    require_rank(video, 4, "video");
    const std::size_t f = video.dim(0);
    if (f < 2) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < f; ++i) {
        const auto a = video.slice(i);
        const auto b = video.slice(i + 1);
        double sum = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = static_cast<double>(b[k]) - static_cast<double>(a[k]);
            sum += d * d;
        }
        total += sum / static_cast<double>(a.size());
    }
    return total / static_cast<double>(f - 1);
}

Metrics compute_metrics(const Tensor& video, const GenerationTrace& trace) {
    return Metrics{first_frame_mse(video, trace.latent(0)), frame_smoothness(video)};
}

}  // namespace azero
