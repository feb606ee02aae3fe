// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "azero/checks.hpp"
#include "azero/error.hpp"
#include "azero/tensor_io.hpp"

namespace azero::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create directory");
}

DenoiserArch arch_for(const ModelOptions& model) {
    DenoiserArch arch;
    arch.channels = model.channels;
    arch.motion_channels = model.channels;
    arch.cond_channels = model.channels;
    return arch;
}

std::string range_string(int lo, int hi) { return std::to_string(lo) + ":" + std::to_string(hi); }

json config_json(const SamplerConfig& c) {
    return json{{"frames", c.frames},
                {"steps", c.steps},
                {"seed", c.seed},
                {"eta", c.eta},
                {"insert_latents", c.insert_latents},
                {"share_kv", c.share_kv},
                {"encoder_attn", std::string(to_string(c.encoder_mode))},
                {"decoder_attn", std::string(to_string(c.decoder_mode))},
                {"bypass_motion", c.bypass_motion},
                {"time_travel", c.time_travel},
                {"tt_iters", c.tt_iters},
                {"tt_range", range_string(c.tt_lo, c.tt_hi)}};
}

json log_summary(const StepLog& log) {
    int insertions = 0, recomputed = 0, shared = 0;
    json tt_steps = json::array();
    for (const auto& e : log.events) {
        insertions += e.inserted ? 1 : 0;
        recomputed += e.kv_recomputed ? 1 : 0;
        shared += e.kv_shared ? 1 : 0;
        if (e.tt_iterations > 0) tt_steps.push_back(e.step);
    }
    return json{{"count", log.events.size()},
                {"insertions", insertions},
                {"kv_shared_steps", shared},
                {"kv_recomputed_steps", recomputed},
                {"tt_iterations", log.total_tt_iterations()},
                {"tt_steps", tt_steps},
                {"anchors_exact", log.anchors_exact_everywhere()}};
}

std::string frame_name(std::size_t frame) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "frame_%03zu.pgm", frame);
    return buffer;
}

// video.azt plus optional frames; returns {relative name -> checksum}.
json write_video_outputs(const fs::path& out, const Tensor& video, bool export_frames) {
    make_dir(out);
    json outputs;
    const auto bytes = encode_tensor(video);
    write_file_atomic(out / "video.azt", bytes);
    outputs["video.azt"] = hex64(fnv1a64(bytes));
    if (export_frames) {
        make_dir(out / "frames");
        for (std::size_t f = 1; f <= video.dim(0); ++f) {
            const auto pgm = render_pgm(video, f);
            const auto name = "frames/" + frame_name(f);
            write_file_atomic(out / name, pgm);
            outputs[name] = hex64(fnv1a64(pgm));
        }
    }
    return outputs;
}

void write_report(const fs::path& out, const json& report) {
    write_file_atomic(out / "report.json", report.dump(2) + "\n");
}

}  // namespace

std::pair<int, int> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("range must look like LO:HI, got '" + text + "'");
    try {
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo_text = text.substr(0, colon);
        const std::string hi_text = text.substr(colon + 1);
        const int lo = std::stoi(lo_text, &used_lo);
        const int hi = std::stoi(hi_text, &used_hi);
        if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument(text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ConfigError("range must look like LO:HI, got '" + text + "'");
    }
}

std::vector<unsigned char> render_pgm(const Tensor& video, std::size_t frame) {
    require_rank(video, 4, "video");
    if (frame < 1 || frame > video.dim(0)) throw IndexError("frame " + std::to_string(frame) + " out of range");
    const std::size_t h = video.dim(2), w = video.dim(3);
    const std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    const auto channel0 = video.slice(frame - 1).first(h * w);
    for (float x : channel0) {
        const double g = std::floor(128.0 + 64.0 * static_cast<double>(x) + 0.5);
        out.push_back(static_cast<unsigned char>(std::clamp(g, 0.0, 255.0)));
    }
    return out;
}

std::string cmd_t2i(const T2iOptions& options) {
    if (options.out.empty()) throw ConfigError("t2i needs --out");
    const auto model = init_denoiser(options.model.model_seed, arch_for(options.model));
    SamplerConfig config;
    config.steps = options.steps;
    const auto size = static_cast<int>(options.model.latent_size);
    const auto trace = generate_t2i_trace(options.prompt, options.seed, config, model, size, size);
    return save_trace(trace, options.out);
}

nlohmann::json cmd_animate(const AnimateOptions& options) {
    if (options.out.empty()) throw ConfigError("animate needs --out");
    options.sampler.validate();
    const auto trace = load_trace(options.trace);
    const auto model = init_denoiser(trace.model_seed, trace.arch);
    const auto run = animate(trace, options.sampler, model);
    const auto metrics = compute_metrics(run.video, trace);

    json report;
    report["command"] = "animate";
    report["config"] = config_json(options.sampler);
    report["config"]["trace"] = options.trace.string();
    report["config"]["export_frames"] = options.export_frames;
    report["trace_origin"] = trace.origin;
    report["metrics"] = {{"first_frame_mse", metrics.first_frame_mse}, {"frame_smoothness", metrics.frame_smoothness}};
    if (options.compare_bypass) {
        SamplerConfig bypass = options.sampler;
        bypass.bypass_motion = true;
        report["metrics"]["frame_smoothness_bypassed"] = frame_smoothness(animate(trace, bypass, model).video);
    }
    report["steps"] = log_summary(run.log);
    report["outputs"] = write_video_outputs(options.out, run.video, options.export_frames);
    write_report(options.out, report);
    return report;
}

nlohmann::json cmd_interpolate(const InterpolateOptions& options) {
    if (options.out.empty()) throw ConfigError("interpolate needs --out");
    options.sampler.validate();
    const auto trace_a = load_trace(options.trace_a);
    const auto trace_b = load_trace(options.trace_b);
    if (trace_a.model_checksum != trace_b.model_checksum) {
        throw TraceMismatch("interpolation traces come from different denoisers");
    }
    const auto model = init_denoiser(trace_a.model_seed, trace_a.arch);
    const auto run = interpolate(trace_a, trace_b, options.sampler, model);

    const auto f = run.video.dim(0);
    const Tensor last({1, run.video.dim(1), run.video.dim(2), run.video.dim(3)},
                      std::vector<float>(run.video.slice(f - 1).begin(), run.video.slice(f - 1).end()));
    json report;
    report["command"] = "interpolate";
    report["config"] = config_json(options.sampler);
    report["config"]["trace_a"] = options.trace_a.string();
    report["config"]["trace_b"] = options.trace_b.string();
    report["config"]["export_frames"] = options.export_frames;
    report["loop"] = fs::equivalent(options.trace_a, options.trace_b);
    report["metrics"] = {{"first_frame_mse", first_frame_mse(run.video, trace_a.latent(0))},
                         {"last_frame_mse", first_frame_mse(last, trace_b.latent(0))},
                         {"frame_smoothness", frame_smoothness(run.video)}};
    report["steps"] = log_summary(run.log);
    report["outputs"] = write_video_outputs(options.out, run.video, options.export_frames);
    write_report(options.out, report);
    return report;
}

std::string cmd_invert(const InvertOptions& options) {
    if (options.out.empty()) throw ConfigError("invert needs --out");
    const Tensor z0 = read_tensor(options.input);
    if (z0.rank() != 4 || z0.dim(0) != 1) throw ConfigError("invert input must be a single-frame latent [1, c, h, w]");
    ModelOptions model_opts = options.model;
    model_opts.channels = z0.dim(1);
    const auto model = init_denoiser(model_opts.model_seed, arch_for(model_opts));
    SamplerConfig config;
    config.steps = options.steps;
    config.inversion_refinements = options.refinements;
    return save_trace(invert_latent(z0, options.prompt, config, model), options.out);
}

int cmd_check(bool corrupt_position_table, std::ostream& out) {
    CheckOptions options;
    options.corrupt_position_table = corrupt_position_table;
    int failed = 0;
    for (const auto& r : run_fast_checks(options)) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        failed += r.passed ? 0 : 1;
    }
    out << (failed == 0 ? "all invariants hold" : std::to_string(failed) + " invariant(s) failed") << "\n";
    return failed == 0 ? kExitOk : kExitInvariant;
}

}  // namespace azero::cli
