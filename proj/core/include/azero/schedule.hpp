// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "azero/rng.hpp"
#include "azero/tensor.hpp"

namespace azero {

/// Diffusion timesteps t = 1..T with f32 tables beta_t, alpha_t = 1 - beta_t
/// and alpha_bar_t = prod_{s <= t} alpha_s. alpha_bar(0) is 1.
class NoiseSchedule {
public:
    /// beta ramps linearly from `beta_start` (t = 1) to `beta_end` (t = T).
    static NoiseSchedule linear(int steps, double beta_start = 1e-4, double beta_end = 0.02);

    int steps() const noexcept { return static_cast<int>(beta_.size()); }
    float beta(int t) const;
    float alpha(int t) const;
    float alpha_bar(int t) const;

    /// FNV-1a over T and the beta table bytes.
    std::string hash() const;

private:
    std::vector<float> beta_;
    std::vector<float> alpha_;
    std::vector<float> alpha_bar_;
};

// Deterministic DDIM (eta = 0), with x0 = (z_t - sqrt(1 - ab_t) eps) / sqrt(ab_t):
//   z_{t-1} = sqrt(ab_{t-1}) x0 + sqrt(1 - ab_{t-1} - sigma^2) eps + sigma n
//   sigma   = eta * sqrt((1 - ab_{t-1}) / (1 - ab_t)) * sqrt(1 - ab_t / ab_{t-1})
// All arithmetic per element in double, rounded to f32 at the end.

Tensor ddim_reverse_step(const Tensor& z_t, const Tensor& eps, double alpha_bar_t, double alpha_bar_prev,
                         double eta = 0.0, SeededRng* rng = nullptr);
Tensor ddim_reverse_step(const Tensor& z_t, const Tensor& eps, int t, const NoiseSchedule& schedule,
                         double eta = 0.0, SeededRng* rng = nullptr);

/// Inverse of the eta = 0 reverse step for a fixed eps:
///   z_t = sqrt(ab_t) x0 + sqrt(1 - ab_t) eps, x0 = (z_{t-1} - sqrt(1 - ab_{t-1}) eps) / sqrt(ab_{t-1}).
/// DDIM inversion evaluates eps at z_{t-1}, which the caller supplies.
Tensor ddim_inversion_step(const Tensor& z_prev, const Tensor& eps, double alpha_bar_t, double alpha_bar_prev);
Tensor ddim_inversion_step(const Tensor& z_prev, const Tensor& eps, int t, const NoiseSchedule& schedule);

/// One forward diffusion step: sqrt(alpha_t) z_{t-1} + sqrt(1 - alpha_t) noise.
Tensor rediffuse(const Tensor& z_prev, double alpha_t, const Tensor& noise);

}  // namespace azero
