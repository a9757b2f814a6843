// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/metrics.hpp"

namespace anbeam {

double sinr_legit(const CVec& h, const std::vector<CMat>& qs, const CMat& v, double rho,
                  double sigma2_s, double sigma2_sp, int k) {
    require(rho > 0.0 && rho <= 1.0, "sinr_legit: rho must lie in (0, 1]");
    double signal = quad_form(h, qs[k]);
    double denom = sigma2_s + sigma2_sp / rho + quad_form(h, v);
    for (size_t i = 0; i < qs.size(); ++i)
        if (static_cast<int>(i) != k) denom += quad_form(h, qs[i]);
    return std::max(0.0, signal) / denom;
}

double sinr_eav(const CVec& h_e, const std::vector<CMat>& qs, const CMat& v, double sigma2_e,
                int k) {
    double signal = quad_form(h_e, qs[k]);
    double denom = sigma2_e + quad_form(h_e, v);
    for (size_t i = 0; i < qs.size(); ++i)
        if (static_cast<int>(i) != k) denom += quad_form(h_e, qs[i]);
    return std::max(0.0, signal) / denom;
}

std::optional<double> max_eav_sinr(const std::vector<CMat>& qs, const CMat& v,
                                   const ChannelSet& ch, double sigma2_e) {
    if (ch.eav.empty()) return std::nullopt;
    double worst = 0.0;
    for (const CVec& he : ch.eav)
        for (size_t k = 0; k < qs.size(); ++k)
            worst = std::max(worst, sinr_eav(he, qs, v, sigma2_e, static_cast<int>(k)));
    return worst;
}

}  // namespace anbeam
