// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include "azero/tensor_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "azero/error.hpp"
#include "azero/rng.hpp"

namespace azero {

const char* to_string(FormatErrorKind kind) noexcept {
    switch (kind) {
        case FormatErrorKind::BadMagic: return "bad magic";
        case FormatErrorKind::BadVersion: return "bad version";
        case FormatErrorKind::BadDtype: return "bad dtype";
        case FormatErrorKind::ShortHeader: return "short header";
        case FormatErrorKind::BadDims: return "bad dims";
        case FormatErrorKind::ShortPayload: return "short payload";
        case FormatErrorKind::TrailingBytes: return "trailing bytes";
        case FormatErrorKind::NonFinite: return "non-finite value";
    }
    return "format error";
}

namespace {

constexpr std::size_t kFixedHeader = 7;

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

std::vector<unsigned char> encode_tensor(const Tensor& a) {
    if (a.rank() == 0 || a.rank() > 255) throw DimensionError("tensor rank must be in [1, 255]");
    if (!a.all_finite()) throw FormatError(FormatErrorKind::NonFinite, "<encode>");
    std::vector<unsigned char> out;
    out.reserve(kFixedHeader + 8 * a.rank() + 4 * a.size());
    out.insert(out.end(), std::begin(kTensorMagic), std::end(kTensorMagic));
    out.push_back(kTensorVersion);
    out.push_back(kTensorDtypeF32);
    out.push_back(static_cast<unsigned char>(a.rank()));
    for (auto d : a.dims()) put_u64(out, d);
    for (float v : a.data()) {
        const auto bits = std::bit_cast<std::uint32_t>(v);
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
    }
    return out;
}

Tensor decode_tensor(const std::vector<unsigned char>& bytes, const std::string& origin) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kTensorMagic, 4) != 0) {
        throw FormatError(FormatErrorKind::BadMagic, origin);
    }
    if (bytes.size() < kFixedHeader) throw FormatError(FormatErrorKind::ShortHeader, origin);
    if (bytes[4] != kTensorVersion) throw FormatError(FormatErrorKind::BadVersion, origin);
    if (bytes[5] != kTensorDtypeF32) throw FormatError(FormatErrorKind::BadDtype, origin);
    const std::size_t ndim = bytes[6];
    if (ndim == 0) throw FormatError(FormatErrorKind::BadDims, origin, "ndim is 0");
    if (bytes.size() < kFixedHeader + 8 * ndim) throw FormatError(FormatErrorKind::ShortHeader, origin);

    std::vector<std::size_t> dims(ndim);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < ndim; ++i) {
        const std::uint64_t d = get_u64(bytes.data() + kFixedHeader + 8 * i);
        if (d == 0 || d > (std::uint64_t{1} << 40) || count > (std::uint64_t{1} << 40) / d) {
            throw FormatError(FormatErrorKind::BadDims, origin);
        }
        count *= d;
        dims[i] = static_cast<std::size_t>(d);
    }

    const std::size_t offset = kFixedHeader + 8 * ndim;
    const std::size_t payload = bytes.size() - offset;
    if (payload < 4 * count) throw FormatError(FormatErrorKind::ShortPayload, origin);
    if (payload > 4 * count) throw FormatError(FormatErrorKind::TrailingBytes, origin);

    std::vector<float> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        const unsigned char* p = bytes.data() + offset + 4 * i;
        const std::uint32_t bits = std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
                                   (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
        data[i] = std::bit_cast<float>(bits);
    }
    Tensor t(std::move(dims), std::move(data));
    if (!t.all_finite()) throw FormatError(FormatErrorKind::NonFinite, origin);
    return t;
}

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(path.string(), "read failed");
    return bytes;
}

void write_file_atomic(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(tmp.string(), "cannot open for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw IoError(tmp.string(), "write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError(path.string(), "rename failed");
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, std::vector<unsigned char>(text.begin(), text.end()));
}

void write_tensor(const std::filesystem::path& path, const Tensor& a) {
    write_file_atomic(path, encode_tensor(a));
}

Tensor read_tensor(const std::filesystem::path& path) {
    return decode_tensor(read_file_bytes(path), path.string());
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string file_checksum(const std::filesystem::path& path) {
    return hex64(fnv1a64(read_file_bytes(path)));
}

}  // namespace azero
