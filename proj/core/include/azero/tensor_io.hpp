// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "azero/tensor.hpp"

namespace azero {

// On-disk tensor layout, all integers little-endian:
//
//   offset  size        field
//   0       4           magic "AZTN"
//   4       1           version (1)
//   5       1           dtype (0 = f32 little-endian)
//   6       1           ndim (>= 1)
//   7       8 * ndim    dims, u64 each, all positive
//   ...     4 * prod    payload, row-major
//
// Anything after the payload is rejected.
inline constexpr char kTensorMagic[4] = {'A', 'Z', 'T', 'N'};
inline constexpr std::uint8_t kTensorVersion = 1;
inline constexpr std::uint8_t kTensorDtypeF32 = 0;

std::vector<unsigned char> encode_tensor(const Tensor& a);
Tensor decode_tensor(const std::vector<unsigned char>& bytes, const std::string& origin = "<memory>");

/// Writes through a temporary sibling file and renames it into place.
void write_tensor(const std::filesystem::path& path, const Tensor& a);
Tensor read_tensor(const std::filesystem::path& path);

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

/// FNV-1a 64 of the file contents, as 16 lowercase hex digits.
std::string file_checksum(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

}  // namespace azero
