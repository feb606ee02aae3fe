// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "azero/denoiser.hpp"
#include "azero/reference.hpp"
#include "azero/rng.hpp"
#include "azero/window_attention.hpp"

namespace {

using azero::AttentionMode;

void temporal(benchmark::State& state, AttentionMode mode) {
    const auto f = static_cast<std::size_t>(state.range(0));
    const auto c = static_cast<std::size_t>(state.range(1));
    azero::SeededRng rng(1);
    const auto params = azero::reference::random_temporal_params(rng, c, 32);
    const auto z = azero::randn(rng, {f, c});
    for (auto _ : state) benchmark::DoNotOptimize(azero::temporal_attention(z, params, mode));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f));
}

void BM_GlobalAttention(benchmark::State& s) { temporal(s, AttentionMode::Global); }
void BM_WindowUncorrected(benchmark::State& s) { temporal(s, AttentionMode::WindowUncorrected); }
void BM_WindowCorrected(benchmark::State& s) { temporal(s, AttentionMode::WindowCorrected); }

BENCHMARK(BM_GlobalAttention)->ArgsProduct({{4, 16, 32}, {8, 64}});
BENCHMARK(BM_WindowUncorrected)->ArgsProduct({{4, 16, 32}, {8, 64}});
BENCHMARK(BM_WindowCorrected)->ArgsProduct({{4, 16, 32}, {8, 64}});

void BM_SpatialSharedKV(benchmark::State& state) {
    const auto hw = static_cast<std::size_t>(state.range(0));
    azero::SeededRng rng(2);
    const auto params = azero::reference::random_spatial_params(rng, 8);
    const auto x = azero::randn(rng, {hw, 8});
    const auto kv = azero::spatial_keys_values(azero::randn(rng, {hw, 8}), params);
    for (auto _ : state) benchmark::DoNotOptimize(azero::spatial_self_attention(x, params, &kv));
}
BENCHMARK(BM_SpatialSharedKV)->Arg(16)->Arg(64)->Arg(256);

void BM_DenoiseStep(benchmark::State& state) {
    const auto f = static_cast<std::size_t>(state.range(0));
    const auto params = azero::init_denoiser(9);
    const auto prompt = azero::PromptEmbedding::from_text("bench", 8);
    azero::SeededRng rng(3);
    const auto z = azero::randn(rng, {f, 8, 8, 8});
    const auto hooks = azero::ControlHooks::animate_defaults();
    for (auto _ : state) benchmark::DoNotOptimize(azero::denoise(z, prompt, 25, params, hooks));
}
BENCHMARK(BM_DenoiseStep)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
