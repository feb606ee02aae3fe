// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "azero/error.hpp"
#include "azero/tensor_io.hpp"

namespace azero {

NoiseSchedule NoiseSchedule::linear(int steps, double beta_start, double beta_end) {
    if (steps < 1) throw ConfigError("schedule needs at least one step");
    if (!(beta_start > 0.0 && beta_end < 1.0 && beta_start <= beta_end)) {
        throw ConfigError("schedule betas must satisfy 0 < start <= end < 1");
    }
    if (steps > 1 && beta_start == beta_end) throw ConfigError("schedule betas must increase");
    NoiseSchedule s;
    double cumulative = 1.0;
    for (int k = 0; k < steps; ++k) {
        const double frac = steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(steps - 1);
        const auto beta = static_cast<float>(beta_start + (beta_end - beta_start) * frac);
        const double alpha = 1.0 - static_cast<double>(beta);
        cumulative *= alpha;
        s.beta_.push_back(beta);
        s.alpha_.push_back(static_cast<float>(alpha));
        s.alpha_bar_.push_back(static_cast<float>(cumulative));
    }
    return s;
}

namespace {

void check_t(int t, int steps, int lo) {
    if (t < lo || t > steps) {
        throw IndexError("timestep " + std::to_string(t) + " outside " + std::to_string(lo) + ".." +
                         std::to_string(steps));
    }
}

}  // namespace

float NoiseSchedule::beta(int t) const {
    check_t(t, steps(), 1);
    return beta_[static_cast<std::size_t>(t - 1)];
}

float NoiseSchedule::alpha(int t) const {
    check_t(t, steps(), 1);
    return alpha_[static_cast<std::size_t>(t - 1)];
}

float NoiseSchedule::alpha_bar(int t) const {
    check_t(t, steps(), 0);
    return t == 0 ? 1.0f : alpha_bar_[static_cast<std::size_t>(t - 1)];
}

std::string NoiseSchedule::hash() const {
    std::vector<unsigned char> bytes(sizeof(std::uint32_t) + beta_.size() * sizeof(float));
    const auto n = static_cast<std::uint32_t>(beta_.size());
    std::memcpy(bytes.data(), &n, sizeof n);
    std::memcpy(bytes.data() + sizeof n, beta_.data(), beta_.size() * sizeof(float));
    return hex64(fnv1a64(bytes));
}

Tensor ddim_reverse_step(const Tensor& z_t, const Tensor& eps, double alpha_bar_t, double alpha_bar_prev, double eta,
                         SeededRng* rng) {
    require_dims(eps, z_t.dims(), "ddim eps");
    if (eta < 0.0 || eta > 1.0) throw ConfigError("eta must lie in [0, 1]");
    if (eta > 0.0 && rng == nullptr) throw ConfigError("stochastic DDIM step needs an rng");
    const double sqrt_ab = std::sqrt(alpha_bar_t);
    const double sqrt_one_minus_ab = std::sqrt(1.0 - alpha_bar_t);
    const double sqrt_ab_prev = std::sqrt(alpha_bar_prev);
    double sigma = 0.0;
    if (eta > 0.0 && alpha_bar_t < 1.0) {
        sigma = eta * std::sqrt((1.0 - alpha_bar_prev) / (1.0 - alpha_bar_t)) *
                std::sqrt(1.0 - alpha_bar_t / alpha_bar_prev);
    }
    const double dir = std::sqrt(std::max(0.0, 1.0 - alpha_bar_prev - sigma * sigma));
    Tensor out(z_t.dims());
    for (std::size_t i = 0; i < z_t.size(); ++i) {
        const double e = eps[i];
        const double x0 = (static_cast<double>(z_t[i]) - sqrt_one_minus_ab * e) / sqrt_ab;
        double v = sqrt_ab_prev * x0 + dir * e;
        if (sigma > 0.0) v += sigma * rng->normal();
        out[i] = static_cast<float>(v);
    }
    return out;
}

Tensor ddim_reverse_step(const Tensor& z_t, const Tensor& eps, int t, const NoiseSchedule& schedule, double eta,
                         SeededRng* rng) {
    check_t(t, schedule.steps(), 1);
    return ddim_reverse_step(z_t, eps, schedule.alpha_bar(t), schedule.alpha_bar(t - 1), eta, rng);
}

Tensor ddim_inversion_step(const Tensor& z_prev, const Tensor& eps, double alpha_bar_t, double alpha_bar_prev) {
    require_dims(eps, z_prev.dims(), "ddim inversion eps");
    const double sqrt_ab = std::sqrt(alpha_bar_t);
    const double sqrt_one_minus_ab = std::sqrt(1.0 - alpha_bar_t);
    const double sqrt_ab_prev = std::sqrt(alpha_bar_prev);
    const double sqrt_one_minus_ab_prev = std::sqrt(1.0 - alpha_bar_prev);
    Tensor out(z_prev.dims());
    for (std::size_t i = 0; i < z_prev.size(); ++i) {
        const double e = eps[i];
        const double x0 = (static_cast<double>(z_prev[i]) - sqrt_one_minus_ab_prev * e) / sqrt_ab_prev;
        out[i] = static_cast<float>(sqrt_ab * x0 + sqrt_one_minus_ab * e);
    }
    return out;
}

Tensor ddim_inversion_step(const Tensor& z_prev, const Tensor& eps, int t, const NoiseSchedule& schedule) {
    check_t(t, schedule.steps(), 1);
    return ddim_inversion_step(z_prev, eps, schedule.alpha_bar(t), schedule.alpha_bar(t - 1));
}

Tensor rediffuse(const Tensor& z_prev, double alpha_t, const Tensor& noise) {
    require_dims(noise, z_prev.dims(), "re-diffusion noise");
    const double a = std::sqrt(alpha_t);
    const double b = std::sqrt(1.0 - alpha_t);
    Tensor out(z_prev.dims());
    for (std::size_t i = 0; i < z_prev.size(); ++i) {
        out[i] = static_cast<float>(a * static_cast<double>(z_prev[i]) + b * static_cast<double>(noise[i]));
    }
    return out;
}

}  // namespace azero
