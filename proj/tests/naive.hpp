// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

// Straight-line double-precision helpers for test oracles. Deliberately
// written without any library kernels.

#pragma once

#include <cmath>
#include <vector>

#include "azero/attention.hpp"
#include "azero/window_attention.hpp"

namespace azero::naive {

using Vec = std::vector<double>;

inline Vec matvec(const Tensor& w, const Vec& x) {
    Vec y(w.dim(0), 0.0);
    for (std::size_t r = 0; r < w.dim(0); ++r) {
        for (std::size_t c = 0; c < w.dim(1); ++c) y[r] += static_cast<double>(w.at(r, c)) * x[c];
    }
    return y;
}

inline Vec row(const Tensor& t, std::size_t r) {
    Vec out(t.dim(1));
    for (std::size_t c = 0; c < t.dim(1); ++c) out[c] = t.at(r, c);
    return out;
}

// W (z_content + p_position), indices 1-based; position j uses table row j - 1.
inline Vec project(const Tensor& w, const Tensor& z, const Tensor& table, std::size_t content, std::size_t position) {
    Vec a = row(z, content - 1);
    const Vec p = row(table, position - 1);
    for (std::size_t c = 0; c < a.size(); ++c) a[c] += p[c];
    return matvec(w, a);
}

inline Vec attend(const Vec& q, const std::vector<Vec>& keys, const std::vector<Vec>& values) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(q.size()));
    std::vector<double> s(keys.size());
    double top = -1e300;
    for (std::size_t m = 0; m < keys.size(); ++m) {
        double dot = 0.0;
        for (std::size_t c = 0; c < q.size(); ++c) dot += q[c] * keys[m][c];
        s[m] = dot * scale;
        top = std::max(top, s[m]);
    }
    double total = 0.0;
    for (auto& x : s) total += (x = std::exp(x - top));
    Vec out(values[0].size(), 0.0);
    for (std::size_t m = 0; m < values.size(); ++m) {
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += s[m] / total * values[m][c];
    }
    return out;
}

// Temporal attention for frame i (1-based) over an explicit key list; the
// query uses `query_position`.
inline Vec temporal_row(const Tensor& z, const TemporalAttentionParams& p, std::size_t i, std::size_t query_position,
                        const std::vector<TokenRef>& list) {
    const Vec q = project(p.wq.weight, z, p.pos.table, i, query_position);
    std::vector<Vec> keys, values;
    for (const auto& ref : list) {
        keys.push_back(project(p.wk.weight, z, p.pos.table, ref.content, ref.position));
        values.push_back(project(p.wv.weight, z, p.pos.table, ref.content, ref.position));
    }
    return attend(q, keys, values);
}

// Spatial attention: queries from x, keys and values from `source`.
inline Tensor spatial(const Tensor& x, const SpatialAttentionParams& p, const Tensor& source) {
    std::vector<Vec> keys, values;
    for (std::size_t m = 0; m < source.dim(0); ++m) {
        keys.push_back(matvec(p.wk.weight, row(source, m)));
        values.push_back(matvec(p.wv.weight, row(source, m)));
    }
    Tensor out(x.dims());
    for (std::size_t n = 0; n < x.dim(0); ++n) {
        const Vec o = attend(matvec(p.wq.weight, row(x, n)), keys, values);
        for (std::size_t c = 0; c < o.size(); ++c) out.at(n, c) = static_cast<float>(o[c]);
    }
    return out;
}

inline double max_abs(const Tensor& a, const std::vector<Vec>& rows) {
    double worst = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            worst = std::max(worst, std::abs(static_cast<double>(a.at(r, c)) - rows[r][c]));
        }
    }
    return worst;
}

}  // namespace azero::naive
