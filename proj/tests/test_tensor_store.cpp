// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "azero/error.hpp"
#include "azero/rng.hpp"
#include "azero/tensor_io.hpp"
#include "temp_dir.hpp"

namespace azero {
namespace {

using Bytes = std::vector<unsigned char>;

FormatErrorKind decode_error_kind(const Bytes& bytes) {
    try {
        decode_tensor(bytes);
    } catch (const FormatError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "decode succeeded";
    return FormatErrorKind::BadMagic;
}

TEST(TensorFile, ZeroArrayLayout) {
    const Tensor zeros({2, 2});
    const Bytes bytes = encode_tensor(zeros);
    ASSERT_EQ(bytes.size(), 4u + 1 + 1 + 1 + 16 + 16);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "AZTN");
    EXPECT_EQ(bytes[4], 1);  // version
    EXPECT_EQ(bytes[5], 0);  // f32
    EXPECT_EQ(bytes[6], 2);  // ndim
    EXPECT_EQ(bytes[7], 2);  // dims[0] low byte, little endian
    EXPECT_EQ(bytes[15], 2);
    EXPECT_TRUE(decode_tensor(bytes).bitwise_equal(zeros));
}

TEST(TensorFile, PayloadIsLittleEndianIeee) {
    const Bytes bytes = encode_tensor(Tensor({1}, {1.5f}));
    const Bytes payload(bytes.end() - 4, bytes.end());
    EXPECT_EQ(payload, (Bytes{0x00, 0x00, 0xC0, 0x3F}));
}

TEST(TensorFile, RandomArrayRoundTripsThroughDisk) {
    testing::TempDir dir("io");
    SeededRng rng(7);
    const Tensor a = randn(rng, {3, 4, 5});
    write_tensor(dir / "a.azt", a);
    const Tensor b = read_tensor(dir / "a.azt");
    EXPECT_TRUE(a.bitwise_equal(b));
    EXPECT_EQ(read_file_bytes(dir / "a.azt"), encode_tensor(a));
}

TEST(TensorFile, RoundTripProperty) {
    SeededRng shapes(123);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> dims(1 + shapes.next_u64() % 4);
        for (auto& d : dims) d = 1 + shapes.next_u64() % 5;
        const Tensor a = randn(shapes, dims);
        EXPECT_TRUE(decode_tensor(encode_tensor(a)).bitwise_equal(a)) << "trial " << trial;
    }
}

TEST(TensorFile, MalformedInputsNameTheirDefect) {
    const Bytes good = encode_tensor(Tensor({2, 3}));

    Bytes bad_magic = good;
    std::copy_n("XXXX", 4, bad_magic.begin());
    EXPECT_EQ(decode_error_kind(bad_magic), FormatErrorKind::BadMagic);

    Bytes bad_version = good;
    bad_version[4] = 7;
    EXPECT_EQ(decode_error_kind(bad_version), FormatErrorKind::BadVersion);

    Bytes bad_dtype = good;
    bad_dtype[5] = 1;
    EXPECT_EQ(decode_error_kind(bad_dtype), FormatErrorKind::BadDtype);

    EXPECT_EQ(decode_error_kind(Bytes(good.begin(), good.begin() + 10)), FormatErrorKind::ShortHeader);

    Bytes zero_dim = good;
    std::fill(zero_dim.begin() + 7, zero_dim.begin() + 15, 0);
    EXPECT_EQ(decode_error_kind(zero_dim), FormatErrorKind::BadDims);

    EXPECT_EQ(decode_error_kind(Bytes(good.begin(), good.end() - 1)), FormatErrorKind::ShortPayload);

    Bytes trailing = good;
    trailing.push_back(0);
    EXPECT_EQ(decode_error_kind(trailing), FormatErrorKind::TrailingBytes);

    Bytes nan = encode_tensor(Tensor({1}, {1.0f}));
    const float q = std::numeric_limits<float>::quiet_NaN();
    std::memcpy(nan.data() + nan.size() - 4, &q, 4);
    EXPECT_EQ(decode_error_kind(nan), FormatErrorKind::NonFinite);
}

TEST(TensorFile, ErrorMessagesUseStableWording) {
    try {
        decode_tensor(Bytes{'X', 'X', 'X', 'X', 1, 0, 1}, "z.azt");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("bad magic"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("z.azt"), std::string::npos);
    }
    Bytes truncated = encode_tensor(Tensor({4}));
    truncated.resize(truncated.size() - 3);
    try {
        decode_tensor(truncated);
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("short payload"), std::string::npos);
    }
}

TEST(TensorFile, MissingFileIsIoError) {
    testing::TempDir dir("io");
    EXPECT_THROW(read_tensor(dir / "absent.azt"), IoError);
}

TEST(TensorFile, AtomicWriteLeavesNoTemporaries) {
    testing::TempDir dir("io");
    write_tensor(dir / "a.azt", Tensor({3}));
    write_tensor(dir / "a.azt", Tensor({3}, {1, 2, 3}));
    std::size_t entries = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
        (void)e;
        ++entries;
    }
    EXPECT_EQ(entries, 1u);
    EXPECT_EQ(read_tensor(dir / "a.azt")[2], 3.0f);
}

TEST(TensorFile, ChecksumIsFnv1a) {
    // Published FNV-1a 64 test vectors.
    EXPECT_EQ(fnv1a64(std::string_view("")), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64(std::string_view("a")), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64(std::string_view("foobar")), 0x85944171f73967e8ULL);
    EXPECT_EQ(hex64(0xaf63dc4c8601ec8cULL), "af63dc4c8601ec8c");
    EXPECT_EQ(hex64(1), "0000000000000001");
}

TEST(SeededRng, MatchesSplitmix64ReferenceStream) {
    SeededRng rng(0);
    EXPECT_EQ(rng.next_u64(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(rng.next_u64(), 0x6e789e6aa1b965f4ULL);
}

TEST(SeededRng, SameSeedSameStream) {
    SeededRng a(1), b(1), c(2);
    const Tensor x = randn(a, {4});
    EXPECT_TRUE(x.bitwise_equal(randn(b, {4})));
    EXPECT_FALSE(x.bitwise_equal(randn(c, {4})));
}

TEST(SeededRng, UniformUses53Bits) {
    SeededRng a(5), b(5);
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, static_cast<double>(b.next_u64() >> 11) * 0x1.0p-53);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(SeededRng, NormalMomentsOverAMillionDraws) {
    SeededRng rng(42);
    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    EXPECT_LT(std::abs(mean), 0.01);
    EXPECT_LT(std::abs(var - 1.0), 0.01);
}

TEST(SeededRng, FixedLogAgreesWithLibm) {
    SeededRng rng(3);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform() + 1e-300;
        EXPECT_NEAR(fixed_log(x), std::log(x), 1e-14 * std::max(1.0, std::abs(std::log(x))));
    }
    EXPECT_EQ(fixed_log(1.0), 0.0);
}

}  // namespace
}  // namespace azero
