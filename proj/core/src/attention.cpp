// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "azero/error.hpp"

namespace azero {

void LinearParams::apply(std::span<const float> x, std::span<double> y) const {
    const std::size_t rows = out_ch();
    const std::size_t cols = in_ch();
    if (x.size() != cols || y.size() != rows) {
        throw DimensionError("linear: input has " + std::to_string(x.size()) + " channels, weight expects " +
                             std::to_string(cols));
    }
    const float* w = weight.data().data();
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        const float* wr = w + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += static_cast<double>(wr[c]) * x[c];
        y[r] = acc;
    }
}

std::vector<float> LinearParams::apply(std::span<const float> x) const {
    std::vector<double> acc(out_ch());
    apply(x, acc);
    return std::vector<float>(acc.begin(), acc.end());
}

std::vector<float> sinusoidal_embedding(std::size_t j, std::size_t channels) {
    std::vector<float> out(channels);
    for (std::size_t d = 0; d < channels; ++d) {
        const double exponent = static_cast<double>(d - d % 2) / static_cast<double>(channels);
        const double angle = static_cast<double>(j) / std::pow(10000.0, exponent);
        out[d] = static_cast<float>(d % 2 == 0 ? std::sin(angle) : std::cos(angle));
    }
    return out;
}

PositionEmbeddings PositionEmbeddings::sinusoidal(std::size_t f_max, std::size_t channels) {
    std::vector<float> data;
    data.reserve(f_max * channels);
    for (std::size_t j = 0; j < f_max; ++j) {
        auto row = sinusoidal_embedding(j, channels);
        data.insert(data.end(), row.begin(), row.end());
    }
    return PositionEmbeddings{Tensor({f_max, channels}, std::move(data))};
}

void TemporalAttentionParams::validate(const Tensor& z) const {
    require_rank(z, 2, "temporal attention input");
    const std::size_t c = channels();
    if (z.dim(1) != c || wq.in_ch() != c || wk.in_ch() != c || wk.out_ch() != c || wv.in_ch() != c ||
        wv.out_ch() != c || pos.channels() != c) {
        throw DimensionError("temporal attention: token channels " + std::to_string(z.dim(1)) +
                             " do not match block channels " + std::to_string(c));
    }
    if (z.dim(0) > pos.max_frames()) {
        throw IndexError("temporal attention: " + std::to_string(z.dim(0)) + " frames exceed the " +
                         std::to_string(pos.max_frames()) + "-row position table");
    }
}

ProjectionTerms projection_terms(const Tensor& z, const TemporalAttentionParams& params) {
    params.validate(z);
    ProjectionTerms terms;
    terms.frames = z.dim(0);
    terms.channels = params.channels();
    const LinearParams* w[3] = {&params.wq, &params.wk, &params.wv};
    const std::size_t c = terms.channels;
    for (int which = 0; which < 3; ++which) {
        terms.content[which].resize(terms.frames * c);
        terms.position[which].resize(terms.frames * c);
        for (std::size_t i = 0; i < terms.frames; ++i) {
            w[which]->apply(z.slice(i), std::span<double>(terms.content[which]).subspan(i * c, c));
            w[which]->apply(params.pos.row(i), std::span<double>(terms.position[which]).subspan(i * c, c));
        }
    }
    return terms;
}

QKV project_qkv(const Tensor& z, const TemporalAttentionParams& params) {
    const auto terms = projection_terms(z, params);
    const std::size_t f = terms.frames;
    const std::size_t c = terms.channels;
    QKV out{Tensor({f, c}), Tensor({f, c}), Tensor({f, c})};
    Tensor* dst[3] = {&out.q, &out.k, &out.v};
    for (int which = 0; which < 3; ++which) {
        for (std::size_t i = 0; i < f; ++i) {
            for (std::size_t ch = 0; ch < c; ++ch) dst[which]->at(i, ch) = terms.entry(which, i, i, ch);
        }
    }
    return out;
}

std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> w(scores.begin(), scores.end());
    if (w.empty()) return w;
    const double m = *std::max_element(w.begin(), w.end());
    double sum = 0.0;
    for (auto& v : w) {
        v = std::exp(v - m);
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return w;
}

std::vector<double> attention_weights(std::span<const float> query, const Tensor& keys) {
    require_rank(keys, 2, "attention keys");
    const std::size_t n = keys.dim(0);
    const std::size_t c = keys.dim(1);
    if (query.size() != c) throw DimensionError("attention: query and key channels differ");
    const double scale = 1.0 / std::sqrt(static_cast<double>(c));
    std::vector<double> scores(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto k = keys.slice(j);
        double dot = 0.0;
        for (std::size_t ch = 0; ch < c; ++ch) dot += static_cast<double>(query[ch]) * k[ch];
        scores[j] = dot * scale;
    }
    return softmax(scores);
}

void attend(std::span<const float> query, const Tensor& keys, const Tensor& values, std::span<float> out) {
    require_rank(values, 2, "attention values");
    if (values.dim(0) != keys.dim(0)) throw DimensionError("attention: key and value counts differ");
    if (out.size() != values.dim(1)) throw DimensionError("attention: output width differs from values");
    const auto w = attention_weights(query, keys);
    const std::size_t c = values.dim(1);
    std::vector<double> acc(c, 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) {
        const auto v = values.slice(j);
        for (std::size_t ch = 0; ch < c; ++ch) acc[ch] += w[j] * v[ch];
    }
    for (std::size_t ch = 0; ch < c; ++ch) out[ch] = static_cast<float>(acc[ch]);
}

Tensor global_temporal_attention(const Tensor& z, const TemporalAttentionParams& params) {
    const auto qkv = project_qkv(z, params);
    Tensor out(z.dims());
    for (std::size_t i = 0; i < z.dim(0); ++i) attend(qkv.q.slice(i), qkv.k, qkv.v, out.slice(i));
    return out;
}

namespace {

Tensor project_rows(const Tensor& x, const LinearParams& w) {
    const std::size_t n = x.dim(0);
    Tensor out({n, w.out_ch()});
    std::vector<double> acc(w.out_ch());
    for (std::size_t r = 0; r < n; ++r) {
        w.apply(x.slice(r), acc);
        auto dst = out.slice(r);
        std::copy(acc.begin(), acc.end(), dst.begin());
    }
    return out;
}

void check_spatial(const Tensor& x, const SpatialAttentionParams& params) {
    require_rank(x, 2, "spatial attention input");
    const std::size_t c = params.channels();
    if (x.dim(1) != params.wq.in_ch() || params.wk.in_ch() != x.dim(1) || params.wv.in_ch() != x.dim(1) ||
        params.wk.out_ch() != c) {
        throw DimensionError("spatial attention: input channels " + std::to_string(x.dim(1)) +
                             " do not match projections");
    }
}

}  // namespace

KVPair spatial_keys_values(const Tensor& x, const SpatialAttentionParams& params) {
    check_spatial(x, params);
    return KVPair{project_rows(x, params.wk), project_rows(x, params.wv)};
}

Tensor spatial_self_attention(const Tensor& x, const SpatialAttentionParams& params, const KVPair* shared_kv) {
    check_spatial(x, params);
    const Tensor q = project_rows(x, params.wq);
    KVPair own;
    if (shared_kv == nullptr) {
        own = spatial_keys_values(x, params);
    } else {
        const std::size_t expect_k[2] = {x.dim(0), params.channels()};
        const std::size_t expect_v[2] = {x.dim(0), params.wv.out_ch()};
        require_dims(shared_kv->k, expect_k, "shared keys");
        require_dims(shared_kv->v, expect_v, "shared values");
    }
    const KVPair& kv = shared_kv ? *shared_kv : own;
    Tensor out({x.dim(0), kv.v.dim(1)});
    for (std::size_t r = 0; r < x.dim(0); ++r) attend(q.slice(r), kv.k, kv.v, out.slice(r));
    return out;
}

}  // namespace azero
