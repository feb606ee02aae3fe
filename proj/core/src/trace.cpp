// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/trace.hpp"

#include <nlohmann/json.hpp>

#include "azero/error.hpp"
#include "azero/rng.hpp"
#include "azero/tensor_io.hpp"

namespace azero {

namespace fs = std::filesystem;
using nlohmann::json;

const Tensor& GenerationTrace::latent(int t) const {
    auto it = latents.find(t);
    if (it == latents.end()) throw TraceMismatch("trace has no latent for t = " + std::to_string(t));
    return it->second;
}

const BlockKVCaches* GenerationTrace::kv_at(int t) const {
    auto it = kv.find(t);
    return it == kv.end() ? nullptr : &it->second;
}

void GenerationTrace::validate() const {
    if (steps < 1) throw TraceMismatch("trace has no steps");
    for (int t = 0; t <= steps; ++t) {
        const auto& z = latent(t);
        if (z.rank() != 4 || z.dim(0) != 1 || z.dim(1) != arch.channels) {
            throw TraceMismatch("trace latent at t = " + std::to_string(t) + " is not a single-frame latent");
        }
    }
    const std::size_t blocks = arch.encoder_blocks + arch.decoder_blocks;
    for (const auto& [t, caches] : kv) {
        if (caches.size() != blocks) throw TraceMismatch("K/V cache at t = " + std::to_string(t) + " is incomplete");
    }
}

namespace {

json dims_json(const Tensor& t) {
    json d = json::array();
    for (auto v : t.dims()) d.push_back(v);
    return d;
}

std::string latent_name(int t) { return "z_" + std::to_string(t) + ".azt"; }

std::string kv_name(int t, std::size_t block, char which) {
    return "kv_t" + std::to_string(t) + "_b" + std::to_string(block) + "_" + which + ".azt";
}

std::string write_entry(const fs::path& dir, const std::string& name, const Tensor& t) {
    const auto bytes = encode_tensor(t);
    write_file_atomic(dir / name, bytes);
    return hex64(fnv1a64(bytes));
}

json arch_json(const DenoiserArch& a) {
    return json{{"encoder_blocks", a.encoder_blocks}, {"decoder_blocks", a.decoder_blocks},
                {"channels", a.channels},             {"motion_channels", a.motion_channels},
                {"cond_channels", a.cond_channels},   {"max_frames", a.max_frames}};
}

Tensor read_entry(const fs::path& dir, const json& entry, const char* file_key, const char* sum_key) {
    const auto name = entry.at(file_key).get<std::string>();
    const auto bytes = read_file_bytes(dir / name);
    if (hex64(fnv1a64(bytes)) != entry.at(sum_key).get<std::string>()) {
        throw TraceMismatch("checksum mismatch for '" + (dir / name).string() + "'");
    }
    Tensor t = decode_tensor(bytes, (dir / name).string());
    if (dims_json(t) != entry.at("dims")) throw TraceMismatch("dims in manifest disagree with '" + name + "'");
    return t;
}

// Files in manifest order, for the directory checksum.
std::vector<std::string> listed_files(const json& manifest) {
    std::vector<std::string> files;
    for (const auto& e : manifest.at("latents")) files.push_back(e.at("file").get<std::string>());
    for (const auto& e : manifest.at("kv")) {
        files.push_back(e.at("k").get<std::string>());
        files.push_back(e.at("v").get<std::string>());
    }
    return files;
}

}  // namespace

std::string save_trace(const GenerationTrace& trace, const fs::path& dir) {
    trace.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create trace directory");

    json manifest;
    manifest["format"] = "azero-trace";
    manifest["version"] = 1;
    manifest["origin"] = trace.origin;
    manifest["prompt"] = trace.prompt;
    manifest["seed"] = trace.seed;
    manifest["steps"] = trace.steps;
    manifest["schedule_hash"] = trace.schedule_hash;
    manifest["model"] = {{"seed", trace.model_seed}, {"checksum", trace.model_checksum}, {"arch", arch_json(trace.arch)}};

    json latents = json::array();
    for (int t = trace.steps; t >= 0; --t) {
        const auto& z = trace.latent(t);
        const auto name = latent_name(t);
        latents.push_back({{"t", t}, {"file", name}, {"dims", dims_json(z)}, {"fnv1a64", write_entry(dir, name, z)}});
    }
    manifest["latents"] = std::move(latents);

    json kv = json::array();
    for (auto it = trace.kv.rbegin(); it != trace.kv.rend(); ++it) {
        const int t = it->first;
        for (std::size_t b = 0; b < it->second.size(); ++b) {
            const auto& pair = it->second[b];
            const auto k_name = kv_name(t, b, 'k');
            const auto v_name = kv_name(t, b, 'v');
            kv.push_back({{"t", t},
                          {"block", b},
                          {"k", k_name},
                          {"v", v_name},
                          {"dims", dims_json(pair.k)},
                          {"k_fnv1a64", write_entry(dir, k_name, pair.k)},
                          {"v_fnv1a64", write_entry(dir, v_name, pair.v)}});
        }
    }
    manifest["kv"] = std::move(kv);

    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    return trace_checksum(dir);
}

GenerationTrace load_trace(const fs::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    const auto bytes = read_file_bytes(manifest_path);
    json manifest;
    try {
        manifest = json::parse(bytes.begin(), bytes.end());
    } catch (const json::exception& e) {
        throw TraceMismatch("malformed manifest '" + manifest_path.string() + "': " + e.what());
    }

    GenerationTrace trace;
    try {
        if (manifest.at("format") != "azero-trace" || manifest.at("version") != 1) {
            throw TraceMismatch("'" + manifest_path.string() + "' is not a version-1 azero trace");
        }
        trace.origin = manifest.at("origin").get<std::string>();
        trace.prompt = manifest.at("prompt").get<std::string>();
        trace.seed = manifest.at("seed").get<std::uint64_t>();
        trace.steps = manifest.at("steps").get<int>();
        trace.schedule_hash = manifest.at("schedule_hash").get<std::string>();
        const auto& model = manifest.at("model");
        trace.model_seed = model.at("seed").get<std::uint64_t>();
        trace.model_checksum = model.at("checksum").get<std::string>();
        const auto& a = model.at("arch");
        trace.arch.encoder_blocks = a.at("encoder_blocks").get<std::size_t>();
        trace.arch.decoder_blocks = a.at("decoder_blocks").get<std::size_t>();
        trace.arch.channels = a.at("channels").get<std::size_t>();
        trace.arch.motion_channels = a.at("motion_channels").get<std::size_t>();
        trace.arch.cond_channels = a.at("cond_channels").get<std::size_t>();
        trace.arch.max_frames = a.at("max_frames").get<std::size_t>();

        for (const auto& e : manifest.at("latents")) {
            trace.latents[e.at("t").get<int>()] = read_entry(dir, e, "file", "fnv1a64");
        }
        for (const auto& e : manifest.at("kv")) {
            const int t = e.at("t").get<int>();
            const auto b = e.at("block").get<std::size_t>();
            auto& caches = trace.kv[t];
            if (caches.size() <= b) caches.resize(b + 1);
            caches[b] = KVPair{read_entry(dir, e, "k", "k_fnv1a64"), read_entry(dir, e, "v", "v_fnv1a64")};
        }
    } catch (const json::exception& e) {
        throw TraceMismatch("malformed manifest '" + manifest_path.string() + "': " + e.what());
    }
    trace.validate();
    return trace;
}

std::string trace_checksum(const fs::path& dir) {
    const auto manifest_bytes = read_file_bytes(dir / "manifest.json");
    std::uint64_t h = fnv1a64(manifest_bytes);
    json manifest;
    try {
        manifest = json::parse(manifest_bytes.begin(), manifest_bytes.end());
        for (const auto& name : listed_files(manifest)) h = fnv1a64(read_file_bytes(dir / name), h);
    } catch (const json::exception& e) {
        throw TraceMismatch("malformed manifest in '" + dir.string() + "': " + e.what());
    }
    return hex64(h);
}

}  // namespace azero
