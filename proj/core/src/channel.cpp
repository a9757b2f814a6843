// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/channel.hpp"

#include <cmath>

namespace anbeam {

void UncertaintyModel::validate(int users, int antennas) const {
    if (kind == UncertaintyKind::Bounded) {
        require(static_cast<int>(epsilon.size()) == users, "UncertaintyModel: need one epsilon per user");
        for (double e : epsilon) require(e >= 0.0, "UncertaintyModel: epsilon must be non-negative");
    } else if (kind == UncertaintyKind::Statistical) {
        require(static_cast<int>(theta.size()) == users, "UncertaintyModel: need one covariance per user");
        for (const CMat& t : theta) {
            require(t.rows() == antennas && t.cols() == antennas,
                    "UncertaintyModel: covariance dimension mismatch");
            require(hermitian_residual(t) <= 1e-10, "UncertaintyModel: covariance must be Hermitian");
            require(min_eigenvalue(t) >= -1e-12 * std::max(1.0, frob(t)),
                    "UncertaintyModel: covariance must be PSD");
        }
    }
}

double path_loss(double distance_m, const PathLossParams& p) {
    p.validate();
    require(distance_m > 0.0, "path_loss: distance must be positive");
    return std::pow(distance_m / p.d0_m, -p.alpha);
}

CVec ula_los(int n_antennas, double angle_rad) {
    require(n_antennas >= 1, "ula_los: need at least one antenna");
    CVec a(n_antennas);
    const double phi = -3.14159265358979323846 * std::sin(angle_rad);
    for (int m = 0; m < n_antennas; ++m) a[m] = std::polar(1.0, phi * m);
    return a;
}

CVec rician_channel(const CVec& los, double gain, double k_factor, Rng& rng) {
    require(gain >= 0.0, "rician_channel: gain must be non-negative");
    require(k_factor >= 0.0, "rician_channel: Rician factor must be non-negative");
    const double w_los = std::sqrt(k_factor / (1.0 + k_factor));
    const double w_nlos = std::sqrt(1.0 / (1.0 + k_factor));
    const double amp = std::sqrt(gain);
    CVec h(los.size());
    for (size_t i = 0; i < los.size(); ++i) h[i] = w_los * los[i] + w_nlos * amp * rng.cgaussian();
    return h;
}

CVec sample_bounded_error(double eps, int dim, bool surface, Rng& rng) {
    require(eps >= 0.0, "sample_bounded_error: epsilon must be non-negative");
    if (eps == 0.0) return CVec(dim, cplx(0, 0));
    CVec dir = rng.cgaussian_vec(dim);
    double n = norm(dir);
    while (n == 0.0) {
        dir = rng.cgaussian_vec(dim);
        n = norm(dir);
    }
    double radius = eps;
    if (!surface) {
        // uniform in the complex ball: real dimension is 2*dim
        radius = eps * std::pow(rng.uniform(), 1.0 / (2.0 * dim));
    }
    return cscale(radius / n, std::move(dir));
}

CVec sample_gaussian_error(const CMat& theta, Rng& rng) {
    const CMat root = matrix_sqrt_psd(theta);  // rejects non-PSD input
    return root * rng.cgaussian_vec(theta.rows());
}

ChannelSet generate_channel_set(const ChannelGeometry& geo, Rng& rng) {
    require(geo.n_antennas >= 1, "generate_channel_set: need at least one antenna");
    require(!geo.user_distance_m.empty(), "generate_channel_set: need at least one user");
    require(geo.rician_k >= 0.0, "generate_channel_set: Rician factor must be non-negative");
    ChannelSet ch;
    ch.legit_distance_m = geo.user_distance_m;
    ch.eav_distance_m = geo.eav_distance_m;
    auto draw = [&](double dist) {
        const double gain = path_loss(dist, geo.path_loss);
        const double angle = rng.uniform(-1.5707963267948966, 1.5707963267948966);
        CVec los = cscale(std::sqrt(gain), ula_los(geo.n_antennas, angle));
        CVec h = rician_channel(los, gain, geo.rician_k, rng);
        return std::pair<CVec, double>(std::move(h), angle);
    };
    for (double d : geo.user_distance_m) {
        auto [h, ang] = draw(d);
        ch.legit.push_back(std::move(h));
        ch.legit_angle_rad.push_back(ang);
    }
    for (double d : geo.eav_distance_m) {
        auto [h, ang] = draw(d);
        ch.eav.push_back(std::move(h));
        ch.eav_angle_rad.push_back(ang);
    }
    return ch;
}

}  // namespace anbeam
