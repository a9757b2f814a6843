// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anbeam/sweep.hpp"

namespace anbeam {

/// Fully resolved run configuration: every default materialized, echoed
/// verbatim into the manifest so no hidden parameter exists.
struct RunConfig {
    ExperimentConfig experiment;
    std::uint64_t seed = 1;
    int workers = 0;
    int verify_samples = 10000;
    std::string solution_path;  // verify command input

    /// section -> (key, value) pairs, resolved (defaults included)
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> echo;

    /// FNV-1a hash of the resolved configuration and seed; names the run
    /// directory so identical runs land in identical places.
    std::string content_hash() const;
};

/// Parses configuration text: either the INI-style key-value format with
/// [sections], or a manifest JSON produced by an earlier run (detected by a
/// leading '{').  `overrides` holds "key=value" or "section.key=value"
/// entries applied on top.  Unknown keys and unit-less powers are rejected
/// with the offending key named.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// parse_config over a file's contents; an empty path yields the defaults.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Manifest text (JSON with fixed key order).
std::string manifest_json(const RunConfig& cfg, const std::string& command,
                          const std::vector<std::string>& outputs,
                          const std::string& created_utc);

/// Power parsing with a mandatory unit: "8 dBm", "0.024 W", "10 mW", "3 uW".
double parse_power_watts(const std::string& text, const std::string& key);

/// 64-bit FNV-1a, hex encoded; stable across platforms.
std::string fnv1a_hex(const std::string& data);

}  // namespace anbeam
