#include <algorithm>
#include <cmath>

#include "anbeam/channel.hpp"
#include "anbeam/rng.hpp"
#include "doctest.h"

using namespace anbeam;

TEST_CASE("rng determinism and moments") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(7);
    double mean = 0.0, var = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = c.gaussian();
        mean += g;
        var += g * g;
    }
    mean /= n;
    var = var / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    // complex: E|z|^2 = 1
    double cvar = 0.0;
    for (int i = 0; i < n; ++i) cvar += std::norm(c.cgaussian());
    CHECK(cvar / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("path_loss") {
    PathLossParams p;  // d0 = 10 m, alpha = 2
    CHECK(path_loss(10.0, p) == doctest::Approx(1.0));
    CHECK(path_loss(20.0, p) == doctest::Approx(0.25));
    CHECK(path_loss(14.0, p) == doctest::Approx(100.0 / 196.0).epsilon(1e-15));
    CHECK_THROWS_AS(path_loss(0.0, p), Error);
    CHECK_THROWS_AS(path_loss(-3.0, p), Error);
}

TEST_CASE("ula_los") {
    const CVec a0 = ula_los(4, 0.0);
    for (const cplx& v : a0) {
        CHECK(v.real() == doctest::Approx(1.0));
        CHECK(v.imag() == doctest::Approx(0.0));
    }
    const CVec a2 = ula_los(2, 1.5707963267948966);
    CHECK(a2[0].real() == doctest::Approx(1.0));
    CHECK(a2[1].real() == doctest::Approx(-1.0).epsilon(1e-12));
    // n = 4, angle = pi/6: entries exp(-i pi m / 2)
    const CVec a4 = ula_los(4, 0.5235987755982988);
    for (int m = 0; m < 4; ++m) {
        const cplx expect = std::polar(1.0, -1.5707963267948966 * m);
        CHECK(std::abs(a4[m] - expect) < 1e-12);
    }
    CHECK_THROWS_AS(ula_los(0, 0.0), Error);
}

TEST_CASE("rician_channel: limits and Monte Carlo moment check") {
    Rng rng(2026);
    const CVec los = cscale(1.0, ula_los(4, 0.3));  // D = 1, per-antenna amplitude 1

    // K_R -> infinity limit is exactly the LOS component
    Rng r1(5);
    const CVec h_inf = rician_channel(los, 1.0, 1e30, r1);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(h_inf[i] - los[i]) < 1e-10);

    // K_R = 0 is pure Gaussian with per-entry variance D
    Rng r2(5);
    double acc = 0.0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        const CVec h = rician_channel(CVec(4, cplx(0, 0)), 2.0, 0.0, r2);
        for (const cplx& v : h) acc += std::norm(v);
    }
    CHECK(acc / trials == doctest::Approx(8.0).epsilon(0.02));  // 4 entries x D = 2

    // K_R = 3, D = 1: E||h||^2 = N_T within 2 percent
    double acc3 = 0.0;
    for (int t = 0; t < trials; ++t) {
        const CVec h = rician_channel(los, 1.0, 3.0, rng);
        acc3 += std::norm(h[0]) + std::norm(h[1]) + std::norm(h[2]) + std::norm(h[3]);
    }
    CHECK(acc3 / trials == doctest::Approx(4.0).epsilon(0.02));

    // mixing weights add to one
    const double k = 3.0;
    CHECK(k / (1 + k) + 1 / (1 + k) == doctest::Approx(1.0));
}

TEST_CASE("rician determinism for fixed seed") {
    const CVec los = ula_los(4, -0.2);
    Rng a(99), b(99);
    const CVec h1 = rician_channel(los, 0.5, 3.0, a);
    const CVec h2 = rician_channel(los, 0.5, 3.0, b);
    for (int i = 0; i < 4; ++i) CHECK(h1[i] == h2[i]);
}

TEST_CASE("doubling the gain doubles the mean channel energy") {
    ChannelGeometry geo;
    geo.n_antennas = 4;
    geo.user_distance_m = {10.0};
    Rng rng(31415);
    double e1 = 0.0, e2 = 0.0;
    const int trials = 50000;
    for (int t = 0; t < trials; ++t) {
        const double angle = rng.uniform(-1.5, 1.5);
        const CVec los = ula_los(4, angle);
        const CVec ha = rician_channel(cscale(std::sqrt(1.0), los), 1.0, 3.0, rng);
        const CVec hb = rician_channel(cscale(std::sqrt(2.0), los), 2.0, 3.0, rng);
        for (int i = 0; i < 4; ++i) {
            e1 += std::norm(ha[i]);
            e2 += std::norm(hb[i]);
        }
    }
    CHECK(e2 / e1 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("sample_bounded_error: zero, surface, ball radius law") {
    Rng rng(17);
    const CVec z = sample_bounded_error(0.0, 4, false, rng);
    CHECK(norm(z) == 0.0);

    for (int t = 0; t < 200; ++t) {
        const CVec s = sample_bounded_error(0.3, 4, true, rng);
        CHECK(norm(s) == doctest::Approx(0.3).epsilon(1e-12));
    }

    // ball mode: all within the ball, and the radius CDF follows r^(2 dim)
    const int n = 100000;
    const int dim = 4;
    const double eps = 1.0;
    Vec radii(n);
    for (int i = 0; i < n; ++i) {
        const CVec e = sample_bounded_error(eps, dim, false, rng);
        radii[i] = norm(e);
        CHECK(radii[i] <= eps + 1e-12);
    }
    std::sort(radii.begin(), radii.end());
    // Kolmogorov-Smirnov distance against F(r) = r^8; 1% critical value
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = std::pow(radii[i], 2.0 * dim);
        ks = std::max(ks, std::abs(f - (i + 1.0) / n));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    }
    const double crit = 1.63 / std::sqrt(static_cast<double>(n));
    CHECK(ks < crit);

    CHECK_THROWS_AS(sample_bounded_error(-0.1, 4, false, rng), Error);
}

TEST_CASE("sample_gaussian_error: zero, scaled identity, degenerate diag") {
    Rng rng(19);
    const CVec z = sample_gaussian_error(CMat(3, 3), rng);
    CHECK(norm(z) == doctest::Approx(0.0));

    // Theta = eps^2 I: empirical covariance within 2 percent Frobenius
    const double eps2 = 0.04;
    CMat theta = CMat::identity(3);
    theta *= cplx(eps2, 0);
    CMat cov(3, 3);
    const int n = 100000;
    for (int t = 0; t < n; ++t) {
        const CVec e = sample_gaussian_error(theta, rng);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov(i, j) += e[i] * std::conj(e[j]);
    }
    cov *= cplx(1.0 / n, 0);
    CHECK(frob(cov - theta) < 0.02 * frob(theta));

    // Theta = diag(1, 0): second coordinate identically zero
    CMat d2(2, 2);
    d2(0, 0) = 1.0;
    for (int t = 0; t < 100; ++t) {
        const CVec e = sample_gaussian_error(d2, rng);
        CHECK(std::abs(e[1]) == 0.0);
    }

    CMat neg = CMat::identity(2);
    neg(0, 0) = -1.0;
    CHECK_THROWS_AS(sample_gaussian_error(neg, rng), Error);
}

TEST_CASE("generate_channel_set shapes and determinism") {
    ChannelGeometry geo;
    geo.n_antennas = 4;
    geo.user_distance_m = {10.0, 14.0, 18.0};
    geo.eav_distance_m = {8.0, 8.0};
    Rng r1(1001), r2(1001);
    const ChannelSet c1 = generate_channel_set(geo, r1);
    const ChannelSet c2 = generate_channel_set(geo, r2);
    REQUIRE(c1.legit.size() == 3);
    REQUIRE(c1.eav.size() == 2);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 4; ++i) CHECK(c1.legit[k][i] == c2.legit[k][i]);
    for (double a : c1.legit_angle_rad) {
        CHECK(a > -1.5707963267948966);
        CHECK(a < 1.5707963267948966);
    }
}
