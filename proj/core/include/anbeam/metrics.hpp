// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "anbeam/channel.hpp"
#include "anbeam/linalg.hpp"

namespace anbeam {

/// h^H Q_k h / (sum_{i != k} h^H Q_i h + h^H V h + sigma2_s + sigma2_sp / rho).
double sinr_legit(const CVec& h, const std::vector<CMat>& qs, const CMat& v, double rho,
                  double sigma2_s, double sigma2_sp, int k);

/// h_e^H Q_k h_e / (sum_{i != k} h_e^H Q_i h_e + h_e^H V h_e + sigma2_e); the
/// eavesdropper overhears user k's message without power splitting.
double sinr_eav(const CVec& h_e, const std::vector<CMat>& qs, const CMat& v, double sigma2_e,
                int k);

/// Worst leakage over eavesdroppers and message indices; empty when the
/// channel set carries no eavesdroppers.
std::optional<double> max_eav_sinr(const std::vector<CMat>& qs, const CMat& v,
                                   const ChannelSet& ch, double sigma2_e);

}  // namespace anbeam
