// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "anbeam/eh.hpp"
#include "anbeam/metrics.hpp"

namespace anbeam {

namespace {

ConstraintMargins compute_margins(const ScenarioConfig& cfg, const ChannelSet& ch,
                                  const std::vector<CMat>& qs, const CMat& v,
                                  const std::vector<double>& rho,
                                  const std::vector<double>& omega) {
    ConstraintMargins m;
    double used = trace_re(v);
    for (const CMat& q : qs) used += trace_re(q);
    m.budget_rel = (cfg.p_total_w - used) / cfg.p_total_w;
    double qmin = 1e300;
    for (const CMat& q : qs) qmin = std::min(qmin, min_eigenvalue(q));
    m.q_min_eig = qs.empty() ? 0.0 : qmin;
    m.v_min_eig = min_eigenvalue(v);
    for (int k = 0; k < cfg.users; ++k) {
        const CVec& h = ch.legit[k];
        const double g = sinr_legit(h, qs, v, rho[k], cfg.sigma2_s_w[k], cfg.sigma2_sp_w[k], k);
        m.sinr_rel.push_back((g - cfg.gamma[k]) / cfg.gamma[k]);
        const double rf =
            received_rf_power(h, qs, v, rho[k], cfg.sigma2_s_w[k], cfg.eh[k].zeta);
        m.eh_rel.push_back((rf - omega[k]) / omega[k]);
        m.rho_box.push_back(std::min(rho[k] - cfg.rho_min, 1.0 - rho[k]));
    }
    return m;
}

double min_margin(const ConstraintMargins& m) {
    double worst = std::min(m.budget_rel, std::min(m.q_min_eig, m.v_min_eig));
    for (double v : m.sinr_rel) worst = std::min(worst, v);
    for (double v : m.eh_rel) worst = std::min(worst, v);
    for (double v : m.rho_box) worst = std::min(worst, v);
    return worst;
}

CVec dominant_beam(const CMat& q) {
    const HermEig eig = herm_eig(q);
    const int n = q.rows();
    const double lmax = std::max(eig.values.back(), 0.0);
    CVec beam(n);
    for (int i = 0; i < n; ++i) beam[i] = std::sqrt(lmax) * eig.vectors(i, n - 1);
    return beam;
}

void fix_phase(CVec& q) {
    size_t imax = 0;
    for (size_t i = 1; i < q.size(); ++i)
        if (std::abs(q[i]) > std::abs(q[imax])) imax = i;
    const double mag = std::abs(q[imax]);
    if (mag > 0.0) {
        const cplx rot = std::conj(q[imax]) / mag;
        for (cplx& v : q) v *= rot;
    }
}

}  // namespace

BeamformingSolution extract_beamformers(const BuiltProblem& built, const SolveResult& result,
                                        Rng* fallback_rng) {
    require(result.status == SolveStatus::Optimal,
            "extract_beamformers: solver status must be optimal");
    const ScenarioConfig& cfg = built.scenario;
    BeamformingSolution s;
    for (int blk : built.q_blocks) s.q_cov.push_back(built.prog.get_psd_complex(result.x, blk));
    s.v_cov = built.prog.get_psd_complex(result.x, built.v_block);
    for (int blk : built.rho_blocks) s.rho.push_back(built.prog.get_scalar(result.x, blk));
    s.objective_w = trace_re(s.v_cov);

    for (int k = 0; k < cfg.users; ++k) {
        CVec beam = dominant_beam(s.q_cov[k]);
        fix_phase(beam);
        const int rank = rank_eps(s.q_cov[k], 1e-6);
        s.q_rank.push_back(rank);
        const double qn = frob(s.q_cov[k]);
        s.recon_rel_err.push_back(qn > 0.0 ? frob(outer(beam, beam) - s.q_cov[k]) / qn : 0.0);
        s.beams.push_back(std::move(beam));
    }
    s.margins = compute_margins(cfg, built.channels, s.q_cov, s.v_cov, s.rho, built.omega_w);

    // Gaussian randomization for any Q_k that failed the rank-one report
    for (int k = 0; k < cfg.users; ++k) {
        if (s.q_rank[k] <= 1 || fallback_rng == nullptr) continue;
        s.used_fallback = true;
        auto margin_of = [&](const CVec& cand) {
            std::vector<CMat> qs = s.q_cov;
            qs[k] = outer(cand, cand);
            return min_margin(
                compute_margins(cfg, built.channels, qs, s.v_cov, s.rho, built.omega_w));
        };
        CVec cand = randomization_fallback(s.q_cov[k], 1000, *fallback_rng, margin_of);
        fix_phase(cand);
        if (margin_of(cand) < -1e-6) s.approximate = true;
        s.beams[k] = std::move(cand);
    }
    return s;
}

CVec randomization_fallback(const CMat& q_cov, int n_draws, Rng& rng,
                            const std::function<double(const CVec&)>& margin) {
    require(n_draws >= 1, "randomization_fallback: need at least one draw");
    const CMat root = matrix_sqrt_psd(q_cov);
    const double power = std::max(trace_re(q_cov), 0.0);
    const int n = q_cov.rows();
    CVec best;
    double best_margin = -1e300;
    for (int d = 0; d < n_draws; ++d) {
        CVec cand = root * rng.cgaussian_vec(n);
        const double nrm = norm(cand);
        if (nrm == 0.0) continue;
        cand = cscale(std::sqrt(power) / nrm, std::move(cand));
        const double m = margin ? margin(cand) : 0.0;
        if (m > best_margin) {
            best_margin = m;
            best = std::move(cand);
        }
    }
    require(!best.empty(), "randomization_fallback: all draws degenerate");
    return best;
}

KktCertificate kkt_rank_certificate(const BuiltProblem& built, const SolveResult& result) {
    KktCertificate cert;
    if (built.design != DesignKind::Perfect) {
        cert.reason = "certificate applies to the perfect-CSI design";
        return cert;
    }
    if (result.status != SolveStatus::Optimal) {
        cert.reason = "solver status is not optimal";
        return cert;
    }
    if (result.y.empty() || result.z.empty()) {
        cert.reason = "dual variables unavailable";
        return cert;
    }
    const ScenarioConfig& cfg = built.scenario;
    const int n = cfg.antennas;
    const int users = cfg.users;

    // dual multipliers: 2x2 block duals give lambda_k / mu_k as the (1,1)
    // entries (the multipliers of the quadratic-form entries); alpha is the
    // budget-row multiplier
    cert.lambda.resize(users);
    cert.mu.resize(users);
    for (int k = 0; k < users; ++k) {
        const Mat d_sinr = built.prog.get_psd_real(result.z, built.sinr_schur[k].block);
        const Mat d_eh = built.prog.get_psd_real(result.z, built.eh_schur[k].block);
        cert.lambda[k] = d_sinr(1, 1);
        cert.mu[k] = d_eh(1, 1);
    }
    cert.alpha = -result.y[built.budget_row];

    const CMat yv = built.prog.get_dual_herm(result.z, built.v_block);

    double st_q = 0.0, st_v = 0.0, comp = 0.0, recon = 0.0;
    cert.rank_bound.resize(users);
    for (int k = 0; k < users; ++k) {
        const CMat zk = built.prog.get_dual_herm(result.z, built.q_blocks[k]);
        // stationarity in Q_k:
        //   Z_k = alpha I - (lambda_k / gamma) h_k h_k^H
        //         + sum_{j != k} lambda_j h_j h_j^H - sum_j mu_j h_j h_j^H
        CMat rhs = CMat::identity(n);
        rhs *= cplx(cert.alpha, 0);
        for (int j = 0; j < users; ++j) {
            const CMat hh = outer(built.channels.legit[j], built.channels.legit[j]);
            const double coef =
                (j == k ? -cert.lambda[k] / cfg.gamma[k] : cert.lambda[j]) - cert.mu[j];
            CMat term = hh;
            term *= cplx(coef, 0);
            rhs += term;
        }
        const double scale_q = 1.0 + frob(zk);
        st_q = std::max(st_q, frob(zk - rhs) / scale_q);

        const CMat q = built.prog.get_psd_complex(result.x, built.q_blocks[k]);
        comp = std::max(comp, frob(zk * q) / ((1.0 + frob(zk)) * (1.0 + frob(q))));

        // Z_k = I + Y - lambda_k (1 + 1/gamma) h_k h_k^H
        CMat zt = CMat::identity(n) + yv;
        CMat hh = outer(built.channels.legit[k], built.channels.legit[k]);
        hh *= cplx(cert.lambda[k] * (1.0 + 1.0 / cfg.gamma[k]), 0);
        zt -= hh;
        recon = std::max(recon, frob(zk - zt) / scale_q);
        cert.rank_bound[k] = cert.lambda[k] > 1e-12 ? 1 : 0;
    }
    // stationarity in V: Y = (alpha - 1) I + sum_j (lambda_j - mu_j) h_j h_j^H
    {
        CMat rhs = CMat::identity(n);
        rhs *= cplx(cert.alpha - 1.0, 0);
        for (int j = 0; j < users; ++j) {
            CMat hh = outer(built.channels.legit[j], built.channels.legit[j]);
            hh *= cplx(cert.lambda[j] - cert.mu[j], 0);
            rhs += hh;
        }
        st_v = frob(yv - rhs) / (1.0 + frob(yv));
        const CMat v = built.prog.get_psd_complex(result.x, built.v_block);
        comp = std::max(comp, frob(yv * v) / ((1.0 + frob(yv)) * (1.0 + frob(v))));
    }
    CMat iy = CMat::identity(n) + yv;
    cert.iy_min_eig = min_eigenvalue(iy);

    cert.available = true;
    cert.stationarity_q = st_q;
    cert.stationarity_v = st_v;
    cert.comp_slack = comp;
    cert.reconstruction = recon;
    cert.max_residual = std::max(std::max(st_q, st_v), std::max(comp, recon));
    return cert;
}

// ---------------------------------------------------------------------------

RobustnessReport verify_bounded_robustness(const BeamformingSolution& sol, const ChannelSet& ch,
                                           const ScenarioConfig& cfg,
                                           const std::vector<double>& eps, int n_samples,
                                           Rng& rng) {
    require(n_samples >= 1, "verify_bounded_robustness: need at least one sample");
    require(static_cast<int>(eps.size()) == cfg.users,
            "verify_bounded_robustness: need one epsilon per user");
    RobustnessReport rep;
    rep.n_samples = n_samples;
    for (int k = 0; k < cfg.users; ++k) {
        UserViolation uv;
        uv.worst_sinr_rel = 1e300;
        uv.worst_eh_rel = 1e300;
        const double omega = cfg.required_rf_power_w(k);
        for (int s = 0; s < n_samples; ++s) {
            const bool surface = s < n_samples / 2;  // half sphere, half ball
            const CVec e = sample_bounded_error(eps[k], cfg.antennas, surface, rng);
            CVec h = ch.legit[k];
            for (int i = 0; i < cfg.antennas; ++i) h[i] += e[i];
            const double g =
                sinr_legit(h, sol.q_cov, sol.v_cov, sol.rho[k], cfg.sigma2_s_w[k],
                           cfg.sigma2_sp_w[k], k);
            const double sinr_rel = (g - cfg.gamma[k]) / cfg.gamma[k];
            const double rf = received_rf_power(h, sol.q_cov, sol.v_cov, sol.rho[k],
                                                cfg.sigma2_s_w[k], cfg.eh[k].zeta);
            const double eh_rel = (rf - omega) / omega;
            uv.worst_sinr_rel = std::min(uv.worst_sinr_rel, sinr_rel);
            uv.worst_eh_rel = std::min(uv.worst_eh_rel, eh_rel);
            if (sinr_rel < -1e-6) ++uv.sinr_violations;
            if (eh_rel < -1e-6) ++uv.eh_violations;
        }
        rep.total_violations += uv.sinr_violations + uv.eh_violations;
        rep.users.push_back(uv);
    }
    return rep;
}

std::pair<double, double> wilson_interval(int successes, int trials) {
    require(trials > 0, "wilson_interval: need at least one trial");
    const double z = 1.959963984540054;
    const double n = trials;
    const double phat = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    double lo = std::max(0.0, center - half), hi = std::min(1.0, center + half);
    if (successes == 0) lo = 0.0;
    if (successes == trials) hi = 1.0;
    return {lo, hi};
}

OutageReport verify_outage(const BeamformingSolution& sol, const ChannelSet& ch,
                           const ScenarioConfig& cfg, const std::vector<CMat>& theta, int n_mc,
                           Rng& rng) {
    require(n_mc >= 1, "verify_outage: need at least one Monte Carlo draw");
    require(static_cast<int>(theta.size()) == cfg.users,
            "verify_outage: need one covariance per user");
    OutageReport rep;
    rep.n_mc = n_mc;
    for (int k = 0; k < cfg.users; ++k) {
        const CMat root = matrix_sqrt_psd(theta[k]);
        int sinr_fail = 0, eh_fail = 0;
        for (int s = 0; s < n_mc; ++s) {
            const CVec e = root * rng.cgaussian_vec(cfg.antennas);
            CVec h = ch.legit[k];
            for (int i = 0; i < cfg.antennas; ++i) h[i] += e[i];
            const double g =
                sinr_legit(h, sol.q_cov, sol.v_cov, sol.rho[k], cfg.sigma2_s_w[k],
                           cfg.sigma2_sp_w[k], k);
            // outage events share the -1e-6 relative violation tolerance,
            // which sits above the solver's feasibility slack
            if (g < cfg.gamma[k] * (1.0 - 1e-6)) ++sinr_fail;
            const double rf = received_rf_power(h, sol.q_cov, sol.v_cov, sol.rho[k],
                                                cfg.sigma2_s_w[k], cfg.eh[k].zeta);
            const double harvested = cfg.eh_variant == EhVariant::Linear
                                         ? linear_eh_output(rf, cfg.linear_eta)
                                         : nonlinear_eh_output(rf, cfg.eh[k]);
            if (harvested < cfg.e_bar_w[k] * (1.0 - 1e-6)) ++eh_fail;
        }
        UserOutage uo;
        uo.sinr_outage = static_cast<double>(sinr_fail) / n_mc;
        uo.eh_outage = static_cast<double>(eh_fail) / n_mc;
        std::tie(uo.sinr_wilson_lo, uo.sinr_wilson_hi) = wilson_interval(sinr_fail, n_mc);
        std::tie(uo.eh_wilson_lo, uo.eh_wilson_hi) = wilson_interval(eh_fail, n_mc);
        rep.users.push_back(uo);
    }
    return rep;
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}
}  // namespace

std::string RobustnessReport::to_json() const {
    std::ostringstream os;
    os << "{\"n_samples\": " << n_samples << ", \"total_violations\": " << total_violations
       << ", \"users\": [";
    for (size_t k = 0; k < users.size(); ++k) {
        if (k) os << ", ";
        os << "{\"worst_sinr_rel\": " << fmt(users[k].worst_sinr_rel)
           << ", \"worst_eh_rel\": " << fmt(users[k].worst_eh_rel)
           << ", \"sinr_violations\": " << users[k].sinr_violations
           << ", \"eh_violations\": " << users[k].eh_violations << "}";
    }
    os << "]}";
    return os.str();
}

std::string OutageReport::to_json() const {
    std::ostringstream os;
    os << "{\"n_mc\": " << n_mc << ", \"users\": [";
    for (size_t k = 0; k < users.size(); ++k) {
        if (k) os << ", ";
        os << "{\"sinr_outage\": " << fmt(users[k].sinr_outage) << ", \"sinr_wilson\": ["
           << fmt(users[k].sinr_wilson_lo) << ", " << fmt(users[k].sinr_wilson_hi)
           << "], \"eh_outage\": " << fmt(users[k].eh_outage) << ", \"eh_wilson\": ["
           << fmt(users[k].eh_wilson_lo) << ", " << fmt(users[k].eh_wilson_hi) << "]}";
    }
    os << "]}";
    return os.str();
}

}  // namespace anbeam
