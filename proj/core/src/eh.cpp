// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/eh.hpp"

#include <cmath>

namespace anbeam {

double EhParams::omega0() const { return 1.0 / (1.0 + std::exp(rate * turn_on_w)); }

void EhParams::validate() const {
    require(max_dc_w > 0.0, "EhParams: max DC power must be positive");
    require(rate > 0.0, "EhParams: charging rate must be positive");
    require(turn_on_w > 0.0, "EhParams: turn-on power must be positive");
    require(zeta > 0.0 && zeta <= 1.0, "EhParams: zeta must lie in (0, 1]");
}

double received_rf_power(const CVec& h, const std::vector<CMat>& qs, const CMat& v, double rho,
                         double sigma2_w, double zeta) {
    require(rho > 0.0 && rho <= 1.0, "received_rf_power: rho must lie in (0, 1]");
    double rf = sigma2_w;
    for (const CMat& q : qs) rf += quad_form(h, q);
    rf += quad_form(h, v);
    return zeta * (1.0 - rho) * rf;
}

double nonlinear_eh_output(double input_w, const EhParams& p) {
    require(input_w >= 0.0, "nonlinear_eh_output: input power must be non-negative");
    const double om = p.omega0();
    const double psi = p.max_dc_w / (1.0 + std::exp(-p.rate * (input_w - p.turn_on_w)));
    return (psi - p.max_dc_w * om) / (1.0 - om);
}

double required_input_power(double target_w, const EhParams& p) {
    require(target_w > 0.0, "required_input_power: target must be positive");
    if (target_w >= p.max_dc_w)
        throw SaturationError("required_input_power: EH target is at or above the maximum DC power");
    const double om = p.omega0();
    const double psi = target_w + (p.max_dc_w - target_w) * om;
    // psi < M is guaranteed for target < M and omega < 1; anything else is a
    // unit mix-up upstream.
    require(psi < p.max_dc_w, "required_input_power: inconsistent EH parameters (check units)");
    return p.turn_on_w - std::log(p.max_dc_w / psi - 1.0) / p.rate;
}

double linear_eh_output(double input_w, double eta) {
    require(input_w >= 0.0, "linear_eh_output: input power must be non-negative");
    require(eta > 0.0 && eta <= 1.0, "linear_eh_output: eta must lie in (0, 1]");
    return eta * input_w;
}

}  // namespace anbeam
