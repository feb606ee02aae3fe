// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "azero/denoiser.hpp"
#include "azero/tensor.hpp"

namespace azero {

/// Intermediate frame-1 latents z_T .. z_0 of a single-image generation, plus
/// the spatial K/V of every denoiser call, keyed by timestep.
struct GenerationTrace {
    std::string origin = "t2i";  // "t2i" or "inversion"
    std::string prompt;
    std::uint64_t seed = 0;
    int steps = 0;
    std::string schedule_hash;
    DenoiserArch arch;
    std::uint64_t model_seed = 0;
    std::string model_checksum;

    std::map<int, Tensor> latents;        // t -> [1, c, h, w], t = 0..steps
    std::map<int, BlockKVCaches> kv;      // t -> per-block K/V, t = 1..steps; empty for inversions

    /// Throws TraceMismatch when t is missing.
    const Tensor& latent(int t) const;
    /// nullptr when no cache was recorded for t.
    const BlockKVCaches* kv_at(int t) const;

    /// Throws TraceMismatch unless every latent t = 0..steps is present and
    /// every recorded K/V set covers all blocks.
    void validate() const;
};

// Trace directory layout:
//   manifest.json           metadata and the file list, keys in sorted order
//   z_{t}.azt               frame-1 latent at t, dims [1, c, h, w]
//   kv_t{t}_b{block}_k.azt  spatial keys of frame 1, block index 0-based, [hw, c]
//   kv_t{t}_b{block}_v.azt  spatial values of frame 1
//
// Every file entry in the manifest carries its FNV-1a 64 checksum.

/// Writes the trace and returns its checksum (see trace_checksum).
std::string save_trace(const GenerationTrace& trace, const std::filesystem::path& dir);
/// Reads a trace, verifying file checksums and dims against the manifest.
GenerationTrace load_trace(const std::filesystem::path& dir);

/// FNV-1a 64 over manifest.json followed by each listed file in manifest order.
std::string trace_checksum(const std::filesystem::path& dir);

}  // namespace azero
