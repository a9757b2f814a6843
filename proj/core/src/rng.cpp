// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/rng.hpp"

#include <cmath>

namespace anbeam {

namespace {
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace

Rng::Rng(std::uint64_t seed) : s_(seed) {
    // warm-up so nearby seeds decorrelate
    splitmix64(s_);
    splitmix64(s_);
}

std::uint64_t Rng::next_u64() { return splitmix64(s_); }

double Rng::uniform() {
    // 53 high bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

cplx Rng::cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return cplx(re, im) * 0.7071067811865475244008443621048;
}

CVec Rng::cgaussian_vec(int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cgaussian();
    return v;
}

}  // namespace anbeam
