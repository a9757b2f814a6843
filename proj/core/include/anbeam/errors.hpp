// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace anbeam {

/// Base class for all anbeam contract violations.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested EH target is at or above the rectifier's maximum DC output.
struct SaturationError : Error {
    using Error::Error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

}  // namespace anbeam
