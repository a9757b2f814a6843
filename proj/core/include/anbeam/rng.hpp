// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "anbeam/linalg.hpp"

namespace anbeam {

/// Deterministic random source.  All draws are produced from raw 64-bit
/// outputs of a splitmix-scrambled xorshift state, so sequences are
/// reproducible across platforms for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard real Gaussian (Box-Muller).
    double gaussian();
    /// Circularly-symmetric complex Gaussian, unit variance (E|z|^2 = 1).
    cplx cgaussian();
    /// Vector of iid CN(0, 1) entries.
    CVec cgaussian_vec(int n);

private:
    std::uint64_t s_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Sub-seed for an independent trial: base XOR trial index, so parallel
/// trials are deterministic and order-independent.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial) { return base ^ trial; }

}  // namespace anbeam
