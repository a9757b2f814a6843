// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "anbeam/linalg.hpp"

namespace anbeam {

/// Parameters of the sigmoidal non-linear RF-to-DC harvesting model.
/// All powers in watts; `rate` in 1/W.
struct EhParams {
    double max_dc_w = 0.01;  // maximum output DC power M
    double rate = 150.0;     // charging-rate parameter a
    double turn_on_w = 0.024;  // turn-on parameter b
    double zeta = 1.0;       // RF collection efficiency in (0, 1]

    /// Omega = 1 / (1 + exp(a*b)), always in (0, 1/2).
    double omega0() const;
    void validate() const;
};

/// zeta * (1 - rho) * (sum_l h^H Q_l h + h^H V h + sigma2).
double received_rf_power(const CVec& h, const std::vector<CMat>& qs, const CMat& v, double rho,
                         double sigma2_w, double zeta);

/// Output DC power of the non-linear model; in [0, M) for finite input.
double nonlinear_eh_output(double input_w, const EhParams& p);

/// Inverse of nonlinear_eh_output: the RF input power needed to harvest
/// `target_w`.  Targets at or above the saturation power M are rejected
/// with SaturationError.
double required_input_power(double target_w, const EhParams& p);

/// Linear baseline model: eta * input.
double linear_eh_output(double input_w, double eta);

}  // namespace anbeam
