#include <cmath>

#include "anbeam/eh.hpp"
#include "anbeam/rng.hpp"
#include "anbeam/units.hpp"
#include "doctest.h"

using namespace anbeam;

namespace {

// Independent root-finder on the forward model: smallest P with E(P) >= target.
double bisect_required_power(double target_w, const EhParams& p) {
    double lo = 0.0, hi = 1.0;
    while (nonlinear_eh_output(hi, p) < target_w) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (nonlinear_eh_output(mid, p) < target_w)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

const EhParams paper_params{};  // M = 10 dBm, a = 150 1/W, b = 0.024 W, zeta = 1

}  // namespace

TEST_CASE("received_rf_power: trivial cases and dense recomputation") {
    Rng rng(3);
    CVec h = rng.cgaussian_vec(4);
    std::vector<CMat> qs;
    for (int k = 0; k < 3; ++k) {
        CVec q = rng.cgaussian_vec(4);
        qs.push_back(outer(q, q));
    }
    CVec v = rng.cgaussian_vec(4);
    const CMat vv = outer(v, v);

    // rho = 1 sends everything to the decoder
    CHECK(received_rf_power(h, qs, vv, 1.0, 1e-8, 1.0) == doctest::Approx(0.0));

    // zero covariances
    std::vector<CMat> zq(3, CMat(4, 4));
    CHECK(received_rf_power(h, zq, CMat(4, 4), 0.5, 2.0, 1.0) == doctest::Approx(1.0));

    // term-by-term recomputation
    double expect = 1e-8;
    for (const CMat& q : qs) expect += quad_form(h, q);
    expect += quad_form(h, vv);
    expect *= 1.0 * (1.0 - 0.3);
    CHECK(received_rf_power(h, qs, vv, 0.3, 1e-8, 1.0) == doctest::Approx(expect).epsilon(1e-12));

    CHECK_THROWS_AS(received_rf_power(h, qs, vv, 0.0, 1e-8, 1.0), Error);
    CHECK_THROWS_AS(received_rf_power(h, qs, vv, 1.5, 1e-8, 1.0), Error);
}

TEST_CASE("nonlinear_eh_output: origin, saturation, turn-on point") {
    const EhParams& p = paper_params;
    CHECK(nonlinear_eh_output(0.0, p) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nonlinear_eh_output(100.0 * p.turn_on_w, p) > 0.999 * p.max_dc_w);
    // P = b gives Psi = M/2
    const double om = p.omega0();
    const double expect = (0.5 * p.max_dc_w - p.max_dc_w * om) / (1.0 - om);
    CHECK(nonlinear_eh_output(p.turn_on_w, p) == doctest::Approx(expect).epsilon(1e-12));
    // bounded below the maximum; strict inequality is representable in
    // doubles up to the point where the sigmoid tail underflows (~0.27 W)
    for (double x : {0.001, 0.01, 0.05, 0.1, 0.2, 0.25}) CHECK(nonlinear_eh_output(x, p) < p.max_dc_w);
    for (double x : {0.5, 1.0, 10.0}) CHECK(nonlinear_eh_output(x, p) <= p.max_dc_w);
}

TEST_CASE("required_input_power: paper-parameter value, frozen and cross-checked") {
    const double target = dbm_to_watts(8.0);  // 6.30957 mW
    const double omega = required_input_power(target, paper_params);
    // frozen from the closed form; independently confirmed by bisection below
    CHECK(omega == doctest::Approx(0.027858131723548184).epsilon(1e-12));
    CHECK(watts_to_dbm(omega) == doctest::Approx(14.449519875595767).epsilon(1e-12));
    const double bisect = bisect_required_power(target, paper_params);
    CHECK(std::abs(omega - bisect) <= 1e-9 * omega);
    CHECK(std::abs(nonlinear_eh_output(omega, paper_params) - target) <= 1e-9 * target);
}

TEST_CASE("required_input_power: saturation guard and near-saturation round trip") {
    CHECK_THROWS_AS(required_input_power(paper_params.max_dc_w, paper_params), SaturationError);
    CHECK_THROWS_AS(required_input_power(dbm_to_watts(12.0), paper_params), SaturationError);
    CHECK_THROWS_AS(required_input_power(0.0, paper_params), Error);
    CHECK_THROWS_AS(required_input_power(-1.0, paper_params), Error);

    const double target = paper_params.max_dc_w * (1.0 - 1e-3);
    const double omega = required_input_power(target, paper_params);
    CHECK(std::isfinite(omega));
    CHECK(std::abs(nonlinear_eh_output(omega, paper_params) - target) <= 1e-9 * target);

    // target -> 0+ sends omega -> 0+
    CHECK(required_input_power(1e-12, paper_params) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(required_input_power(1e-12, paper_params) > 0.0);
}

TEST_CASE("inverse round-trip and monotonicity over 1000 targets") {
    const EhParams& p = paper_params;
    double prev_omega = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double target = p.max_dc_w * i / 1001.0;
        const double omega = required_input_power(target, p);
        CHECK(std::abs(nonlinear_eh_output(omega, p) - target) <= 1e-9 * p.max_dc_w);
        CHECK(omega > prev_omega);  // strictly increasing inverse
        prev_omega = omega;
    }
    // forward model strictly increasing
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double e = nonlinear_eh_output(0.2 * i / 1000.0, p);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("linear_eh_output") {
    CHECK(linear_eh_output(0.0, 1.0) == doctest::Approx(0.0));
    CHECK(linear_eh_output(5e-3, 1.0) == doctest::Approx(5e-3));
    CHECK(linear_eh_output(0.027858131723548184, 0.5) ==
          doctest::Approx(0.013929065861774092).epsilon(1e-15));
    CHECK_THROWS_AS(linear_eh_output(-1.0, 1.0), Error);
    CHECK_THROWS_AS(linear_eh_output(1.0, 0.0), Error);
}
