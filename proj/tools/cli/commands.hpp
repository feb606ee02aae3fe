// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "azero/sampler.hpp"

namespace azero::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitTraceMismatch = 3,
    kExitInvariant = 4,
    kExitIo = 5,
};

struct ModelOptions {
    std::uint64_t model_seed = 9;
    std::size_t channels = 8;
    std::size_t latent_size = 8;
};

struct T2iOptions {
    std::string prompt = "a toy image";
    std::uint64_t seed = 0;
    int steps = 50;
    std::filesystem::path out;
    ModelOptions model;
};

struct AnimateOptions {
    std::filesystem::path trace;
    std::filesystem::path out;
    SamplerConfig sampler;
    bool export_frames = false;
    bool compare_bypass = false;
};

struct InterpolateOptions {
    std::filesystem::path trace_a;
    std::filesystem::path trace_b;
    std::filesystem::path out;
    SamplerConfig sampler;
    bool export_frames = false;
};

struct InvertOptions {
    std::filesystem::path input;
    std::string prompt = "a toy image";
    int steps = 50;
    int refinements = 2;
    std::filesystem::path out;
    ModelOptions model;
};

/// Writes a generation trace and returns its checksum.
std::string cmd_t2i(const T2iOptions& options);

/// Writes video.azt, report.json and (optionally) frames/frame_NNN.pgm under
/// options.out; returns the report.
nlohmann::json cmd_animate(const AnimateOptions& options);
nlohmann::json cmd_interpolate(const InterpolateOptions& options);

/// Writes a pseudo-trace for a single-frame latent file; returns its checksum.
std::string cmd_invert(const InvertOptions& options);

/// Prints one line per invariant; returns kExitOk or kExitInvariant.
int cmd_check(bool corrupt_position_table, std::ostream& out);

/// Binary PGM (P5) of latent channel 0 of `frame` (1-based):
/// gray = clamp(floor(128 + 64 x + 0.5), 0, 255).
std::vector<unsigned char> render_pgm(const Tensor& video, std::size_t frame);

/// Parses "LO:HI".
std::pair<int, int> parse_range(const std::string& text);

/// Full command line entry point; maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace azero::cli
