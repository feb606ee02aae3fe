// Copyright (C) 2026 The azero Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace azero {

/// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape or channel-count mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Frame or step index outside its valid range. Messages use 1-based frames.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (architecture, sampler settings, CLI values).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operating-system level failure while reading or writing `path`.
class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(what + ": '" + path + "'"), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class FormatErrorKind {
    BadMagic,
    BadVersion,
    BadDtype,
    ShortHeader,
    BadDims,
    ShortPayload,
    TrailingBytes,
    NonFinite,
};

const char* to_string(FormatErrorKind kind) noexcept;

/// A tensor file or manifest that does not decode.
class FormatError : public Error {
public:
    FormatError(FormatErrorKind kind, const std::string& path)
        : Error(std::string(to_string(kind)) + " in '" + path + "'"), kind_(kind) {}
    FormatError(FormatErrorKind kind, const std::string& path, const std::string& detail)
        : Error(std::string(to_string(kind)) + " in '" + path + "': " + detail), kind_(kind) {}

    FormatErrorKind kind() const noexcept { return kind_; }

private:
    FormatErrorKind kind_;
};

/// A generation trace that is incomplete or incompatible with the request.
class TraceMismatch : public Error {
public:
    using Error::Error;
};

/// Raised by the fast invariant suite.
class InvariantFailure : public Error {
public:
    using Error::Error;
};

}  // namespace azero
