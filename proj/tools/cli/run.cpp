// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "azero/error.hpp"
#include "cli/commands.hpp"

namespace azero::cli {

namespace {

AttentionMode to_mode(const std::string& name) {
    const auto mode = parse_attention_mode(name);
    if (!mode || *mode == AttentionMode::WindowTwoAnchor) {
        throw ConfigError("attention mode must be global, window or window-pc, got '" + name + "'");
    }
    return *mode;
}

void add_model_options(CLI::App& cmd, ModelOptions& model) {
    cmd.add_option("--model-seed", model.model_seed, "denoiser weight seed")->capture_default_str();
    cmd.add_option("--channels", model.channels, "latent channels")->capture_default_str();
    cmd.add_option("--latent-size", model.latent_size, "latent height and width")->capture_default_str();
}

struct VideoFlags {
    std::string encoder = "window-pc";
    std::string decoder = "global";
    std::string tt_range = "10:20";
};

void add_sampler_options(CLI::App& cmd, SamplerConfig& config, VideoFlags& flags) {
    cmd.add_option("--frames", config.frames, "video length")->capture_default_str();
    cmd.add_option("--steps", config.steps, "DDIM steps; must match the trace")->capture_default_str();
    cmd.add_option("--seed", config.seed, "initial noise seed")->capture_default_str();
    cmd.add_option("--eta", config.eta, "DDIM stochasticity")->capture_default_str();
    cmd.add_flag("--share-kv,!--no-share-kv", config.share_kv, "share first-frame spatial K/V");
    cmd.add_flag("--insert-latents,!--no-insert-latents", config.insert_latents, "insert trace latents");
    cmd.add_option("--encoder-attn", flags.encoder, "global | window | window-pc")->capture_default_str();
    cmd.add_option("--decoder-attn", flags.decoder, "global | window | window-pc")->capture_default_str();
    cmd.add_flag("--bypass-motion", config.bypass_motion, "skip every motion module");
    cmd.add_flag("--time-travel", config.time_travel, "enable time-travel sampling");
    cmd.add_option("--tt-iters", config.tt_iters, "time-travel iterations per step")->capture_default_str();
    cmd.add_option("--tt-range", flags.tt_range, "inclusive step range LO:HI")->capture_default_str();
}

void finish_sampler(SamplerConfig& config, const VideoFlags& flags) {
    config.encoder_mode = to_mode(flags.encoder);
    config.decoder_mode = to_mode(flags.decoder);
    std::tie(config.tt_lo, config.tt_hi) = parse_range(flags.tt_range);
    config.validate();
}

void print_summary(const nlohmann::json& report, std::ostream& out) {
    out << "video.azt " << report["outputs"]["video.azt"].get<std::string>() << "\n";
    for (const auto& [key, value] : report["metrics"].items()) out << key << " " << value.dump() << "\n";
}

int dispatch(CLI::App& app, std::ostream& out, std::ostream& err, std::vector<std::string> args) {
    T2iOptions t2i;
    AnimateOptions anim;
    InterpolateOptions interp;
    InvertOptions inv;
    VideoFlags anim_flags, interp_flags;
    bool corrupt = false;
    std::string t2i_out, anim_trace, anim_out, interp_a, interp_b, interp_out, inv_input, inv_out;

    auto* c_t2i = app.add_subcommand("t2i", "generate a single-frame trace");
    c_t2i->add_option("--prompt", t2i.prompt, "prompt text")->capture_default_str();
    c_t2i->add_option("--seed", t2i.seed, "noise seed")->capture_default_str();
    c_t2i->add_option("--steps", t2i.steps, "DDIM steps")->capture_default_str();
    c_t2i->add_option("--out", t2i_out, "trace directory")->required();
    add_model_options(*c_t2i, t2i.model);

    auto* c_anim = app.add_subcommand("animate", "animate a trace");
    c_anim->add_option("--trace", anim_trace, "trace directory")->required();
    c_anim->add_option("--out", anim_out, "output directory")->required();
    add_sampler_options(*c_anim, anim.sampler, anim_flags);
    c_anim->add_flag("--export-frames", anim.export_frames, "write frames/frame_NNN.pgm");
    c_anim->add_flag("--compare-bypass", anim.compare_bypass, "also report smoothness with motion bypassed");

    auto* c_interp = app.add_subcommand("interpolate", "interpolate between two traces");
    c_interp->add_option("--trace-a", interp_a, "first-frame trace")->required();
    c_interp->add_option("--trace-b", interp_b, "last-frame trace")->required();
    c_interp->add_option("--out", interp_out, "output directory")->required();
    add_sampler_options(*c_interp, interp.sampler, interp_flags);
    c_interp->add_flag("--export-frames", interp.export_frames, "write frames/frame_NNN.pgm");

    auto* c_inv = app.add_subcommand("invert", "DDIM-invert a single-frame latent");
    c_inv->add_option("--input", inv_input, "latent tensor file [1,c,h,w]")->required();
    c_inv->add_option("--prompt", inv.prompt, "prompt text")->capture_default_str();
    c_inv->add_option("--steps", inv.steps, "DDIM steps")->capture_default_str();
    c_inv->add_option("--refine", inv.refinements, "fixed-point rounds per step")->capture_default_str();
    c_inv->add_option("--out", inv_out, "trace directory")->required();
    add_model_options(*c_inv, inv.model);

    auto* c_check = app.add_subcommand("check", "run the fast invariant suite");
    c_check->add_flag("--corrupt-position-table", corrupt)->group("");

    app.require_subcommand(1);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e_out;
        const int code = app.exit(e, o, e_out);
        out << o.str();
        err << e_out.str();
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (c_t2i->parsed()) {
        t2i.out = t2i_out;
        out << cmd_t2i(t2i) << "\n";
    } else if (c_anim->parsed()) {
        finish_sampler(anim.sampler, anim_flags);
        anim.trace = anim_trace;
        anim.out = anim_out;
        print_summary(cmd_animate(anim), out);
    } else if (c_interp->parsed()) {
        finish_sampler(interp.sampler, interp_flags);
        interp.trace_a = interp_a;
        interp.trace_b = interp_b;
        interp.out = interp_out;
        print_summary(cmd_interpolate(interp), out);
    } else if (c_inv->parsed()) {
        inv.input = inv_input;
        inv.out = inv_out;
        out << cmd_invert(inv) << "\n";
    } else if (c_check->parsed()) {
        return cmd_check(corrupt, out);
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"azero: animate a toy text-to-image trace"};
    app.name("azero");
    try {
        return dispatch(app, out, err, args);
    } catch (const TraceMismatch& e) {
        err << "trace mismatch: " << e.what() << "\n";
        return kExitTraceMismatch;
    } catch (const InvariantFailure& e) {
        err << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace azero::cli
