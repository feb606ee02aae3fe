// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/reference.hpp"

#include <algorithm>
#include <cmath>

#include "azero/error.hpp"

namespace azero::reference {

Vec matvec(const Tensor& weight, const Vec& x) {
    Vec y(weight.dim(0), 0.0);
    for (std::size_t r = 0; r < weight.dim(0); ++r) {
        for (std::size_t c = 0; c < weight.dim(1); ++c) y[r] += weight.at(r, c) * x[c];
    }
    return y;
}

Vec add(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vec row(const Tensor& t, std::size_t r) {
    Vec out(t.dim(1));
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = t.at(r, c);
    return out;
}

Vec attention(const Vec& query, const std::vector<Vec>& keys, const std::vector<Vec>& values) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(query.size()));
    Vec scores;
    for (const auto& k : keys) {
        double s = 0.0;
        for (std::size_t c = 0; c < query.size(); ++c) s += query[c] * k[c];
        scores.push_back(s * scale);
    }
    double top = scores[0];
    for (double s : scores) top = std::max(top, s);
    double total = 0.0;
    for (double& s : scores) {
        s = std::exp(s - top);
        total += s;
    }
    Vec out(values[0].size(), 0.0);
    for (std::size_t j = 0; j < values.size(); ++j) {
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += scores[j] / total * values[j][c];
    }
    return out;
}

Vec project(const LinearParams& w, const Tensor& z, const PositionEmbeddings& pos, std::size_t content,
            std::size_t position) {
    Vec a(z.dim(1));
    for (std::size_t c = 0; c < a.size(); ++c) {
        a[c] = static_cast<double>(z.at(content - 1, c)) + static_cast<double>(pos.table.at(position - 1, c));
    }
    return matvec(w.weight, a);
}

std::vector<TokenRef> key_list(AttentionMode mode, std::size_t i, std::size_t f) {
    std::vector<TokenRef> list;
    switch (mode) {
        case AttentionMode::Global:
            for (std::size_t m = 1; m <= f; ++m) list.push_back({m, m});
            break;
        case AttentionMode::WindowUncorrected:
            // (f - i + 1) copies of k_1^1, then k_2^2 .. k_i^i
            for (std::size_t n = 0; n < f - i + 1; ++n) list.push_back({1, 1});
            for (std::size_t m = 2; m <= i; ++m) list.push_back({m, m});
            break;
        case AttentionMode::WindowCorrected: {
            // same contents; superscripts count 1, 2, ..., f
            std::size_t position = 0;
            for (std::size_t n = 0; n < f - i + 1; ++n) list.push_back({1, ++position});
            for (std::size_t m = 2; m <= i; ++m) list.push_back({m, ++position});
            break;
        }
        case AttentionMode::WindowTwoAnchor: {
            std::size_t ones = 0, lasts = 0;
            std::vector<std::size_t> interior;
            if (i == 1) {
                ones = f - 1;
                lasts = 1;
            } else if (i == f) {
                ones = 1;
                lasts = f - 1;
            } else {
                for (std::size_t m = 2; m <= i; ++m) interior.push_back(m);
                const std::size_t spare = f - 2 - interior.size();
                lasts = 1 + spare / 2;
                ones = 1 + spare - spare / 2;
            }
            std::size_t position = 0;
            for (std::size_t n = 0; n < ones; ++n) list.push_back({1, ++position});
            for (auto m : interior) list.push_back({m, ++position});
            for (std::size_t n = 0; n < lasts; ++n) list.push_back({f, ++position});
            break;
        }
    }
    return list;
}

Tensor temporal_attention(const Tensor& z, const TemporalAttentionParams& params, AttentionMode mode) {
    const std::size_t f = z.dim(0);
    Tensor out(z.dims());
    for (std::size_t i = 1; i <= f; ++i) {
        const auto list = key_list(mode, i, f);
        std::vector<Vec> keys, values;
        std::size_t query_pos = 0;
        for (const auto& ref : list) {
            keys.push_back(project(params.wk, z, params.pos, ref.content, ref.position));
            values.push_back(project(params.wv, z, params.pos, ref.content, ref.position));
            if (ref.content == i) query_pos = ref.position;
        }
        const Vec q = project(params.wq, z, params.pos, i, query_pos);
        const Vec o = attention(q, keys, values);
        for (std::size_t c = 0; c < o.size(); ++c) out.at(i - 1, c) = static_cast<float>(o[c]);
    }
    return out;
}

Tensor spatial_attention(const Tensor& x, const SpatialAttentionParams& params, const Tensor* shared_source) {
    const Tensor& source = shared_source ? *shared_source : x;
    std::vector<Vec> keys, values;
    for (std::size_t r = 0; r < source.dim(0); ++r) {
        keys.push_back(matvec(params.wk.weight, row(source, r)));
        values.push_back(matvec(params.wv.weight, row(source, r)));
    }
    Tensor out({x.dim(0), params.wv.out_ch()});
    for (std::size_t r = 0; r < x.dim(0); ++r) {
        const Vec o = attention(matvec(params.wq.weight, row(x, r)), keys, values);
        for (std::size_t c = 0; c < o.size(); ++c) out.at(r, c) = static_cast<float>(o[c]);
    }
    return out;
}

TemporalAttentionParams random_temporal_params(SeededRng& rng, std::size_t channels, std::size_t max_frames) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(channels));
    TemporalAttentionParams p;
    p.wq.weight = rand_uniform(rng, {channels, channels}, bound);
    p.wk.weight = rand_uniform(rng, {channels, channels}, bound);
    p.wv.weight = rand_uniform(rng, {channels, channels}, bound);
    p.pos = PositionEmbeddings::sinusoidal(max_frames, channels);
    return p;
}

SpatialAttentionParams random_spatial_params(SeededRng& rng, std::size_t channels) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(channels));
    SpatialAttentionParams p;
    p.wq.weight = rand_uniform(rng, {channels, channels}, bound);
    p.wk.weight = rand_uniform(rng, {channels, channels}, bound);
    p.wv.weight = rand_uniform(rng, {channels, channels}, bound);
    return p;
}

double relative_error(const Tensor& a, const Tensor& b) {
    double scale = 0.0;
    for (float v : b.data()) scale = std::max(scale, static_cast<double>(std::abs(v)));
    return max_abs_diff(a, b) / std::max(scale, 1e-30);
}

}  // namespace azero::reference
