// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anbeam/problems.hpp"
#include "anbeam/solver.hpp"

namespace anbeam {

struct ConstraintMargins {
    std::vector<double> sinr_rel;  // (SINR_k - gamma) / gamma at the nominal channel
    std::vector<double> eh_rel;    // (received RF - omega) / omega
    double budget_rel = 0.0;       // (P_total - used) / P_total
    std::vector<double> rho_box;   // min(rho - rho_min, 1 - rho)
    double q_min_eig = 0.0;        // min over k of lambda_min(Q_k)
    double v_min_eig = 0.0;
};

struct BeamformingSolution {
    std::vector<CMat> q_cov;  // Q_k
    CMat v_cov;               // V
    std::vector<double> rho;
    std::vector<CVec> beams;           // recovered q_k, global phase fixed
    std::vector<int> q_rank;           // rank_eps(Q_k, 1e-6)
    std::vector<double> recon_rel_err;  // ||q q^H - Q||_F / ||Q||_F
    double objective_w = 0.0;          // tr(V)
    ConstraintMargins margins;
    bool used_fallback = false;
    bool approximate = false;  // fallback could not restore feasibility
};

/// Recovers beamformers from an optimal solve: dominant eigenpair of each
/// Q_k, rank report, nominal feasibility margins.  Q_k flagged with rank > 1
/// go through the Gaussian randomization fallback when an rng is supplied.
BeamformingSolution extract_beamformers(const BuiltProblem& built, const SolveResult& result,
                                        Rng* fallback_rng = nullptr);

struct KktCertificate {
    bool available = false;
    std::string reason;          // when unavailable
    double stationarity_q = 0.0;  // max_k relative residual of the Q_k stationarity
    double stationarity_v = 0.0;
    double comp_slack = 0.0;      // max of ||Z_k Q_k||, ||Y V|| (relative)
    double reconstruction = 0.0;  // Z_k vs I + Y - lambda_k (1 + 1/gamma) h h^H
    double max_residual = 0.0;
    std::vector<double> lambda, mu;
    double alpha = 0.0;
    std::vector<int> rank_bound;  // rank of lambda_k (1 + 1/gamma) h h^H (<= 1)
    double iy_min_eig = 0.0;      // lambda_min(I + Y) (>= 1 up to solver slack)
};

/// Evaluates the KKT-based rank-one certificate of the perfect-CSI design:
/// stationarity in Q_k and V, complementary slackness, and the dual-slack
/// reconstruction Z_k = I + Y - lambda_k (1 + 1/gamma) h_k h_k^H whose
/// low-rank right-hand side bounds rank(Q_k) by one.
KktCertificate kkt_rank_certificate(const BuiltProblem& built, const SolveResult& result);

/// Gaussian randomization: draws candidates with covariance q_cov, rescales
/// each to tr(q_cov) transmit power, and returns the one with the best
/// margin under the supplied callback (nullptr-free; return 0 for "any").
CVec randomization_fallback(const CMat& q_cov, int n_draws, Rng& rng,
                            const std::function<double(const CVec&)>& margin);

struct UserViolation {
    double worst_sinr_rel = 0.0;  // min over samples of (SINR - gamma)/gamma
    double worst_eh_rel = 0.0;    // min over samples of (RF - omega)/omega
    int sinr_violations = 0;      // margin below -1e-6
    int eh_violations = 0;
};

struct RobustnessReport {
    std::vector<UserViolation> users;
    int n_samples = 0;
    int total_violations = 0;
    std::string to_json() const;
};

/// Samples channel errors (half on the epsilon sphere, half uniform in the
/// ball) and evaluates the original SINR and EH constraints at the
/// perturbed channels.
RobustnessReport verify_bounded_robustness(const BeamformingSolution& sol, const ChannelSet& ch,
                                           const ScenarioConfig& cfg,
                                           const std::vector<double>& eps, int n_samples,
                                           Rng& rng);

struct UserOutage {
    double sinr_outage = 0.0;
    double sinr_wilson_lo = 0.0, sinr_wilson_hi = 0.0;
    double eh_outage = 0.0;
    double eh_wilson_lo = 0.0, eh_wilson_hi = 0.0;
};

struct OutageReport {
    std::vector<UserOutage> users;
    int n_mc = 0;
    std::string to_json() const;
};

/// Draws Gaussian channel errors per user and reports empirical SINR and EH
/// outage rates with Wilson 95% intervals.
OutageReport verify_outage(const BeamformingSolution& sol, const ChannelSet& ch,
                           const ScenarioConfig& cfg, const std::vector<CMat>& theta, int n_mc,
                           Rng& rng);

/// Wilson score interval for a binomial proportion at 95% confidence.
std::pair<double, double> wilson_interval(int successes, int trials);

}  // namespace anbeam
