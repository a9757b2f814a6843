// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "anbeam/linalg.hpp"
#include "anbeam/rng.hpp"

namespace anbeam {

struct PathLossParams {
    double d0_m = 10.0;  // reference distance
    double alpha = 2.0;  // path-loss exponent

    void validate() const {
        require(d0_m > 0.0, "PathLossParams: reference distance must be positive");
        require(alpha >= 0.0, "PathLossParams: exponent must be non-negative");
    }
};

/// Nominal channels of one trial: K legitimate users plus J eavesdroppers.
struct ChannelSet {
    std::vector<CVec> legit;        // \hat h_{s,k}, length n_antennas each
    std::vector<CVec> eav;          // h_{e,j}
    std::vector<double> legit_angle_rad;
    std::vector<double> eav_angle_rad;
    std::vector<double> legit_distance_m;
    std::vector<double> eav_distance_m;
};

enum class UncertaintyKind { None, Bounded, Statistical };

/// Channel error model: either a norm ball per user (bounded) or a Gaussian
/// covariance per user (statistical).
struct UncertaintyModel {
    UncertaintyKind kind = UncertaintyKind::None;
    std::vector<double> epsilon;  // bounded: per-user ||e|| bound (amplitude)
    std::vector<CMat> theta;      // statistical: per-user PSD covariance

    void validate(int users, int antennas) const;
};

/// (d / d0)^(-alpha), linear power gain.
double path_loss(double distance_m, const PathLossParams& p);

/// Unit-modulus far-field ULA steering vector, entries exp(-i pi m sin(angle)).
/// The caller applies the per-antenna amplitude (sqrt of path-loss gain).
CVec ula_los(int n_antennas, double angle_rad);

/// sqrt(K_R/(1+K_R)) * los + sqrt(1/(1+K_R)) * w with w ~ CN(0, gain * I).
CVec rician_channel(const CVec& los, double gain, double k_factor, Rng& rng);

/// Error vector with ||e|| = eps (surface mode) or ||e|| <= eps uniform in
/// the ball (radius ~ u^(1/(2 dim)) scaling of a uniform direction).
CVec sample_bounded_error(double eps, int dim, bool surface, Rng& rng);

/// e = Theta^(1/2) z with z ~ CN(0, I); non-PSD covariances are rejected.
CVec sample_gaussian_error(const CMat& theta, Rng& rng);

/// Geometry inputs for one trial's channel draw.
struct ChannelGeometry {
    int n_antennas = 4;
    double rician_k = 3.0;
    PathLossParams path_loss;
    std::vector<double> user_distance_m;  // one per legitimate user
    std::vector<double> eav_distance_m;   // one per eavesdropper
};

/// Draws all terminals of one trial.  Angles are uniform in (-pi/2, pi/2),
/// per terminal; the LOS component is sqrt(D) * ula_los so that
/// E||h||^2 = n_antennas * D.
ChannelSet generate_channel_set(const ChannelGeometry& geo, Rng& rng);

}  // namespace anbeam
