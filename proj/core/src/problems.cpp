// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/problems.hpp"

#include <cmath>

#include "anbeam/units.hpp"

namespace anbeam {

ScenarioConfig ScenarioConfig::paper_defaults() {
    ScenarioConfig c;
    c.users = 3;
    c.antennas = 4;
    c.eavesdroppers = 2;
    c.gamma.assign(3, db_to_linear(8.0));
    c.e_bar_w.assign(3, dbm_to_watts(8.0));
    c.p_total_w = dbm_to_watts(30.0);
    c.sigma2_s_w.assign(3, 1e-8);   // -50 dBm
    c.sigma2_sp_w.assign(3, 1e-8);  // -50 dBm
    c.sigma2_e_w = 1e-8;
    c.eh.assign(3, EhParams{});
    c.p_outage.assign(3, 0.1);
    c.q_outage.assign(3, 0.1);
    c.user_distance_m = {10.0, 14.0, 18.0};
    c.eav_distance_m = 8.0;
    return c;
}

void ScenarioConfig::validate() const {
    require(users >= 1, "ScenarioConfig: need at least one user");
    require(antennas >= 1, "ScenarioConfig: need at least one antenna");
    require(eavesdroppers >= 0, "ScenarioConfig: eavesdropper count must be non-negative");
    auto per_user = [&](size_t n, const char* what) {
        require(static_cast<int>(n) == users, std::string("ScenarioConfig: need one ") + what +
                                                  " per user (" + std::to_string(n) + " given)");
    };
    per_user(gamma.size(), "SINR target");
    per_user(e_bar_w.size(), "EH target");
    per_user(sigma2_s_w.size(), "receiver noise power");
    per_user(sigma2_sp_w.size(), "processing noise power");
    per_user(eh.size(), "EH parameter set");
    per_user(user_distance_m.size(), "distance");
    for (double g : gamma) require(g > 0.0, "ScenarioConfig: SINR targets must be positive");
    for (double e : e_bar_w) require(e > 0.0, "ScenarioConfig: EH targets must be positive");
    require(p_total_w > 0.0, "ScenarioConfig: power budget must be positive");
    for (double s : sigma2_s_w) require(s > 0.0, "ScenarioConfig: noise powers must be positive");
    for (double s : sigma2_sp_w) require(s > 0.0, "ScenarioConfig: noise powers must be positive");
    require(sigma2_e_w > 0.0, "ScenarioConfig: noise powers must be positive");
    for (const EhParams& p : eh) p.validate();
    require(rho_min > 0.0 && rho_min < 1.0, "ScenarioConfig: rho_min must lie in (0, 1)");
    require(linear_eta > 0.0 && linear_eta <= 1.0, "ScenarioConfig: eta must lie in (0, 1]");
    require(rician_k >= 0.0, "ScenarioConfig: Rician factor must be non-negative");
    path_loss.validate();
    uncertainty.validate(users, antennas);
    if (uncertainty.kind == UncertaintyKind::Statistical) {
        per_user(p_outage.size(), "SINR outage target");
        per_user(q_outage.size(), "EH outage target");
        for (double p : p_outage)
            require(p > 0.0 && p <= 1.0, "ScenarioConfig: outage probabilities must lie in (0, 1]");
        for (double q : q_outage)
            require(q > 0.0 && q <= 1.0, "ScenarioConfig: outage probabilities must lie in (0, 1]");
    }
}

ChannelGeometry ScenarioConfig::geometry() const {
    ChannelGeometry g;
    g.n_antennas = antennas;
    g.rician_k = rician_k;
    g.path_loss = path_loss;
    g.user_distance_m = user_distance_m;
    g.eav_distance_m.assign(eavesdroppers, eav_distance_m);
    return g;
}

double ScenarioConfig::required_rf_power_w(int k) const {
    if (eh_variant == EhVariant::Linear) return e_bar_w[k] / linear_eta;
    return required_input_power(e_bar_w[k], eh[k]);
}

const char* to_string(DesignKind k) {
    switch (k) {
        case DesignKind::Perfect: return "perfect";
        case DesignKind::Bounded: return "bounded";
        case DesignKind::Statistical: return "statistical";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// affine-expression plumbing

CExpr& CExpr::add_const(cplx c) {
    constant += c;
    return *this;
}
CExpr& CExpr::add_sandwich(int block, CVec left, CVec right) {
    sandwiches.push_back({block, std::move(left), std::move(right)});
    return *this;
}
CExpr& CExpr::add_trace(int block, CMat coef) {
    traces.push_back({block, std::move(coef)});
    return *this;
}
CExpr& CExpr::add_scalar(int block, double coef) {
    scalars.emplace_back(block, coef);
    return *this;
}
CExpr& CExpr::add_soc_head(int block, double coef) {
    soc_heads.emplace_back(block, coef);
    return *this;
}

CExpr conj_expr(const CExpr& e) {
    CExpr c = e;
    c.constant = std::conj(e.constant);
    for (auto& s : c.sandwiches) std::swap(s.left, s.right);
    return c;
}

CExprMat::CExprMat(int n) : side(n), upper(static_cast<size_t>(n) * (n + 1) / 2) {}

CExpr& CExprMat::at(int i, int j) {
    require(i <= j && j < side, "CExprMat: upper-triangle access only");
    // row-major upper triangle: row i starts at i*side - i(i-1)/2
    const int idx = i * side - i * (i - 1) / 2 + (j - i);
    return upper[idx];
}

const CExpr& CExprMat::at(int i, int j) const { return const_cast<CExprMat*>(this)->at(i, j); }

CExpr CExprMat::entry(int i, int j) const { return i <= j ? at(i, j) : conj_expr(at(j, i)); }

namespace {

// tr(P C) = Re P_ij
CMat basis_re(int n, int i, int j) {
    CMat c(n, n);
    if (i == j) {
        c(i, i) = 1.0;
    } else {
        c(i, j) = 0.5;
        c(j, i) = 0.5;
    }
    return c;
}

// tr(P C) = Im P_ij (i < j)
CMat basis_im(int n, int i, int j) {
    CMat c(n, n);
    c(i, j) = cplx(0, 0.5);
    c(j, i) = cplx(0, -0.5);
    return c;
}

// coefficient matrices of Re / Im of left^H X right
CMat sandwich_re(const CVec& u, const CVec& w) {
    const CMat c = outer(w, u);
    return hermitian_part(c);  // (w u^H + u w^H)/2
}

CMat sandwich_im(const CVec& u, const CVec& w) {
    const int n = static_cast<int>(u.size());
    const CMat c = outer(w, u);
    CMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = (c(i, j) - std::conj(c(j, i))) * cplx(0, -0.5);  // (C - C^H)/(2i)
    return out;
}

// Adds sign * (variable part of e) to the row; imag_part selects which
// component.  Real-valued terms vanish from imaginary parts.
void emit_cexpr(ConicProgram& p, int row, const CExpr& e, double sign, bool imag_part) {
    for (const auto& s : e.sandwiches)
        p.add_herm_coef(row, s.block, imag_part ? sandwich_im(s.left, s.right) : sandwich_re(s.left, s.right),
                        sign);
    if (!imag_part) {
        for (const auto& t : e.traces) p.add_herm_coef(row, t.block, t.coef, sign);
        for (const auto& [blk, c] : e.scalars) p.add_scalar_coef(row, blk, sign * c);
        for (const auto& [blk, c] : e.soc_heads) p.add_soc_coef(row, blk, 0, sign * c);
    }
}

// Row "<pending coefficient> - expr = const"; the caller contributes the
// positive side (a slack-block basis entry or a SOC tail coordinate).
int new_tie_row(ConicProgram& p, const CExpr& e, bool imag_part) {
    const int row = p.add_row(imag_part ? e.constant.imag() : e.constant.real());
    emit_cexpr(p, row, e, -1.0, imag_part);
    return row;
}

HermTie tie_herm_block(ConicProgram& p, const std::string& name, const CExprMat& m) {
    HermTie tie;
    tie.block = p.add_psd_complex(name, m.side);
    tie.side = m.side;
    tie.row_re.assign(m.side, std::vector<int>(m.side, -1));
    tie.row_im.assign(m.side, std::vector<int>(m.side, -1));
    for (int j = 0; j < m.side; ++j) {
        for (int i = 0; i <= j; ++i) {
            const CExpr& e = m.at(i, j);
            const int row = new_tie_row(p, e, false);
            p.add_herm_coef(row, tie.block, basis_re(m.side, i, j));
            tie.row_re[i][j] = row;
            if (i < j) {
                const int row_i = new_tie_row(p, e, true);
                p.add_herm_coef(row_i, tie.block, basis_im(m.side, i, j));
                tie.row_im[i][j] = row_i;
            }
        }
    }
    return tie;
}

RealTie tie_real2_block(ConicProgram& p, const std::string& name, const CExpr& e00,
                        const CExpr& e01, const CExpr& e11) {
    RealTie tie;
    tie.block = p.add_psd_real(name, 2);
    tie.side = 2;
    tie.row.assign(2, std::vector<int>(2, -1));
    Mat b00(2, 2), b01(2, 2), b11(2, 2);
    b00(0, 0) = 1.0;
    b11(1, 1) = 1.0;
    b01(0, 1) = 0.5;
    b01(1, 0) = 0.5;
    tie.row[0][0] = new_tie_row(p, e00, false);
    p.add_real_sym_coef(tie.row[0][0], tie.block, b00);
    tie.row[0][1] = new_tie_row(p, e01, false);
    p.add_real_sym_coef(tie.row[0][1], tie.block, b01);
    tie.row[1][1] = new_tie_row(p, e11, false);
    p.add_real_sym_coef(tie.row[1][1], tie.block, b11);
    return tie;
}

struct CommonBlocks {
    std::vector<int> q_blocks;
    int v_block = -1;
    std::vector<int> rho_blocks;
    int budget_row = -1;
};

CommonBlocks build_common(ConicProgram& p, const ScenarioConfig& cfg) {
    CommonBlocks c;
    const int n = cfg.antennas;
    for (int k = 0; k < cfg.users; ++k)
        c.q_blocks.push_back(p.add_psd_complex("Q_" + std::to_string(k + 1), n));
    c.v_block = p.add_psd_complex("V", n);
    for (int k = 0; k < cfg.users; ++k)
        c.rho_blocks.push_back(p.add_nonneg("rho_" + std::to_string(k + 1)));

    p.set_maximize(true);
    p.obj_herm(c.v_block, CMat::identity(n));

    const int slack = p.add_nonneg("budget_slack");
    c.budget_row = p.add_row(cfg.p_total_w);
    for (int k = 0; k < cfg.users; ++k)
        p.add_herm_coef(c.budget_row, c.q_blocks[k], CMat::identity(n));
    p.add_herm_coef(c.budget_row, c.v_block, CMat::identity(n));
    p.add_scalar_coef(c.budget_row, slack, 1.0);

    for (int k = 0; k < cfg.users; ++k) {
        const std::string id = std::to_string(k + 1);
        const int lo = p.add_nonneg("rho_lo_" + id);
        const int rlo = p.add_row(cfg.rho_min);
        p.add_scalar_coef(rlo, c.rho_blocks[k], 1.0);
        p.add_scalar_coef(rlo, lo, -1.0);
        const int hi = p.add_nonneg("rho_hi_" + id);
        const int rhi = p.add_row(1.0);
        p.add_scalar_coef(rhi, c.rho_blocks[k], 1.0);
        p.add_scalar_coef(rhi, hi, 1.0);
    }
    return c;
}

// u^H W_k w with W_k = Q_k / gamma - sum_{i != k} Q_i - V
CExpr w_form(const CommonBlocks& c, int k, double gamma, const CVec& u, const CVec& w) {
    CExpr e;
    for (size_t l = 0; l < c.q_blocks.size(); ++l) {
        const double s = (static_cast<int>(l) == k) ? 1.0 / gamma : -1.0;
        e.add_sandwich(c.q_blocks[l], u, cscale(s, w));
    }
    e.add_sandwich(c.v_block, u, cscale(-1.0, w));
    return e;
}

// u^H M w with M = sum_l Q_l + V
CExpr m_form(const CommonBlocks& c, const CVec& u, const CVec& w) {
    CExpr e;
    for (int blk : c.q_blocks) e.add_sandwich(blk, u, w);
    e.add_sandwich(c.v_block, u, w);
    return e;
}

// tr(W_k T) / tr(M T) with a fixed Hermitian T
CExpr w_trace(const CommonBlocks& c, int k, double gamma, const CMat& t) {
    CExpr e;
    for (size_t l = 0; l < c.q_blocks.size(); ++l) {
        const double s = (static_cast<int>(l) == k) ? 1.0 / gamma : -1.0;
        CMat coef = t;
        coef *= s;
        e.add_trace(c.q_blocks[l], coef);
    }
    CMat coef = t;
    coef *= -1.0;
    e.add_trace(c.v_block, coef);
    return e;
}

CExpr m_trace(const CommonBlocks& c, const CMat& t) {
    CExpr e;
    for (int blk : c.q_blocks) e.add_trace(blk, t);
    e.add_trace(c.v_block, t);
    return e;
}

CVec unit_vec(int n, int i) {
    CVec e(n, cplx(0, 0));
    e[i] = 1.0;
    return e;
}

void init_built(BuiltProblem& b, DesignKind kind, const ScenarioConfig& cfg, const ChannelSet& ch,
                const CommonBlocks& c) {
    b.design = kind;
    b.scenario = cfg;
    b.channels = ch;
    b.q_blocks = c.q_blocks;
    b.v_block = c.v_block;
    b.rho_blocks = c.rho_blocks;
    b.budget_row = c.budget_row;
    b.omega_w.resize(cfg.users);
    for (int k = 0; k < cfg.users; ++k) b.omega_w[k] = cfg.required_rf_power_w(k);
    b.sinr_key_row.assign(cfg.users, -1);
    b.eh_key_row.assign(cfg.users, -1);
}

void check_channels(const ScenarioConfig& cfg, const ChannelSet& ch) {
    require(static_cast<int>(ch.legit.size()) == cfg.users,
            "build: channel set does not match the user count");
    for (const CVec& h : ch.legit)
        require(static_cast<int>(h.size()) == cfg.antennas,
                "build: channel dimension does not match the antenna count");
}

// perfect-CSI constraint pair for one user (also the epsilon = 0 fallback of
// the bounded design)
void add_perfect_user(ConicProgram& p, BuiltProblem& b, const CommonBlocks& c,
                      const ScenarioConfig& cfg, int k, double omega) {
    const std::string id = std::to_string(k + 1);
    const CVec& h = b.channels.legit[k];

    CExpr e00;
    e00.add_scalar(c.rho_blocks[k], 1.0);
    CExpr e01;
    e01.add_const(std::sqrt(cfg.sigma2_sp_w[k]));
    CExpr e11 = w_form(c, k, cfg.gamma[k], h, h);
    e11.add_const(-cfg.sigma2_s_w[k]);
    RealTie sinr = tie_real2_block(p, "sinr_" + id, e00, e01, e11);
    b.sinr_key_row[k] = sinr.row[1][1];
    b.sinr_schur.push_back(std::move(sinr));

    const double zeta = cfg.eh[k].zeta;
    CExpr f00;
    f00.add_const(zeta);
    f00.add_scalar(c.rho_blocks[k], -zeta);
    CExpr f01;
    f01.add_const(std::sqrt(omega));
    CExpr f11 = m_form(c, h, h);
    f11.add_const(cfg.sigma2_s_w[k]);
    RealTie eh = tie_real2_block(p, "eh_" + id, f00, f01, f11);
    b.eh_key_row[k] = eh.row[1][1];
    b.eh_schur.push_back(std::move(eh));
}

}  // namespace

CMat w_matrix(const std::vector<CMat>& qs, const CMat& v, int k, double gamma) {
    require(!qs.empty(), "w_matrix: need at least one user");
    require(gamma > 0.0, "w_matrix: gamma must be positive");
    CMat w = qs[k];
    w *= cplx(1.0 / gamma, 0);
    for (size_t l = 0; l < qs.size(); ++l)
        if (static_cast<int>(l) != k) w -= qs[l];
    w -= v;
    return w;
}

CMat m_matrix(const std::vector<CMat>& qs, const CMat& v) {
    CMat m = v;
    for (const CMat& q : qs) m += q;
    return m;
}

BuiltProblem build_perfect_csi(const ScenarioConfig& cfg, const ChannelSet& ch) {
    cfg.validate();
    check_channels(cfg, ch);
    BuiltProblem b;
    CommonBlocks c = build_common(b.prog, cfg);
    init_built(b, DesignKind::Perfect, cfg, ch, c);
    for (int k = 0; k < cfg.users; ++k) add_perfect_user(b.prog, b, c, cfg, k, b.omega_w[k]);
    b.prog.canonicalize();
    return b;
}

BuiltProblem build_bounded_robust(const ScenarioConfig& cfg, const ChannelSet& ch) {
    cfg.validate();
    check_channels(cfg, ch);
    require(cfg.uncertainty.kind == UncertaintyKind::Bounded,
            "build_bounded_robust: uncertainty model must be bounded");
    const int n = cfg.antennas;

    BuiltProblem b;
    CommonBlocks c = build_common(b.prog, cfg);
    init_built(b, DesignKind::Bounded, cfg, ch, c);
    b.lambda_blocks.assign(cfg.users, -1);
    b.t_blocks.assign(cfg.users, -1);

    for (int k = 0; k < cfg.users; ++k) {
        const double eps = cfg.uncertainty.epsilon[k];
        require(eps >= 0.0, "build_bounded_robust: epsilon must be non-negative");
        if (eps <= 1e-9) {
            // zero-radius ball: the worst case is the nominal channel
            add_perfect_user(b.prog, b, c, cfg, k, b.omega_w[k]);
            continue;
        }
        const std::string id = std::to_string(k + 1);
        const CVec& h = b.channels.legit[k];
        const double eps2 = eps * eps;
        const int lam = b.prog.add_nonneg("lambda_" + id);
        const int tk = b.prog.add_nonneg("t_" + id);
        b.lambda_blocks[k] = lam;
        b.t_blocks[k] = tk;

        // SINR LMI block
        CExprMat e(n + 2);
        e.at(0, 0).add_scalar(c.rho_blocks[k], 1.0);
        e.at(0, 1).add_const(std::sqrt(cfg.sigma2_sp_w[k]));
        e.at(1, 1) = w_form(c, k, cfg.gamma[k], h, h);
        e.at(1, 1).add_const(-cfg.sigma2_s_w[k]).add_scalar(lam, -1.0);
        for (int j = 0; j < n; ++j) e.at(1, 2 + j) = w_form(c, k, cfg.gamma[k], h, unit_vec(n, j));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                e.at(2 + i, 2 + j) = w_form(c, k, cfg.gamma[k], unit_vec(n, i), unit_vec(n, j));
                if (i == j) e.at(2 + i, 2 + j).add_scalar(lam, 1.0 / eps2);
            }
        HermTie sinr = tie_herm_block(b.prog, "sinr_lmi_" + id, e);
        b.sinr_key_row[k] = sinr.row_re[1][1];
        b.sinr_lmi.push_back(std::move(sinr));

        // EH LMI block
        const double zeta = cfg.eh[k].zeta;
        CExprMat f(n + 2);
        f.at(0, 0).add_const(zeta).add_scalar(c.rho_blocks[k], -zeta);
        f.at(0, 1).add_const(std::sqrt(b.omega_w[k]));
        f.at(1, 1) = m_form(c, h, h);
        f.at(1, 1).add_const(cfg.sigma2_s_w[k]).add_scalar(tk, -1.0);
        for (int j = 0; j < n; ++j) f.at(1, 2 + j) = m_form(c, h, unit_vec(n, j));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                f.at(2 + i, 2 + j) = m_form(c, unit_vec(n, i), unit_vec(n, j));
                if (i == j) f.at(2 + i, 2 + j).add_scalar(tk, 1.0 / eps2);
            }
        HermTie eh = tie_herm_block(b.prog, "eh_lmi_" + id, f);
        b.eh_key_row[k] = eh.row_re[1][1];
        b.eh_lmi.push_back(std::move(eh));
    }
    b.prog.canonicalize();
    return b;
}

namespace {

// SOC + shifted-PSD part of the Bernstein certificate (shared by the
// statistical builder and the standalone lowering).
struct BernCones {
    int soc_block = -1;
    int y_block = -1;
    HermTie psd;
};

BernCones emit_bernstein_cones(ConicProgram& p, const CExprMat& bmat, const CExprVec& r,
                               const std::string& x_name, const std::string& y_name,
                               const std::string& psd_name) {
    const int n = bmat.side;
    BernCones out;
    const int dim = 1 + 2 * n * n + 2 * static_cast<int>(r.entries.size());
    out.soc_block = p.add_soc(x_name, dim);
    out.y_block = p.add_nonneg(y_name);

    // tail ties: vec(B) column-major, Re/Im interleaved, then sqrt(2) r
    int idx = 1;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const CExpr e = bmat.entry(i, j);
            const int row_re = new_tie_row(p, e, false);
            p.add_soc_coef(row_re, out.soc_block, idx++, 1.0);
            const int row_im = new_tie_row(p, e, true);
            p.add_soc_coef(row_im, out.soc_block, idx++, 1.0);
        }
    }
    const double rt2 = std::sqrt(2.0);
    for (const CExpr& re : r.entries) {
        CExpr scaled = re;
        for (auto& s : scaled.sandwiches) s.right = cscale(rt2, s.right);
        for (auto& t : scaled.traces) t.coef *= rt2;
        for (auto& sc : scaled.scalars) sc.second *= rt2;
        for (auto& sh : scaled.soc_heads) sh.second *= rt2;
        scaled.constant *= rt2;
        const int row_re = new_tie_row(p, scaled, false);
        p.add_soc_coef(row_re, out.soc_block, idx++, 1.0);
        const int row_im = new_tie_row(p, scaled, true);
        p.add_soc_coef(row_im, out.soc_block, idx++, 1.0);
    }

    // y I + B PSD
    CExprMat shifted = bmat;
    for (int i = 0; i < n; ++i) shifted.at(i, i).add_scalar(out.y_block, 1.0);
    out.psd = tie_herm_block(p, psd_name, shifted);
    return out;
}

}  // namespace

BernsteinRefs bernstein_lower_to_cones(ConicProgram& prog, const CExprMat& b, const CExprVec& r,
                                       const CExpr& s, double p, const std::string& name_prefix) {
    require(p > 0.0 && p <= 1.0, "bernstein_lower_to_cones: p must lie in (0, 1]");
    BernCones cones = emit_bernstein_cones(prog, b, r, name_prefix + "_x", name_prefix + "_y",
                                            name_prefix + "_psd");
    BernsteinRefs refs;
    refs.soc_block = cones.soc_block;
    refs.y_block = cones.y_block;
    refs.psd = std::move(cones.psd);

    // tr(B) - sqrt(-2 ln p) x + ln(p) y + s >= 0
    CExpr total = s;
    for (int i = 0; i < b.side; ++i) {
        const CExpr& d = b.at(i, i);
        total.constant += d.constant;
        for (const auto& sw : d.sandwiches) total.sandwiches.push_back(sw);
        for (const auto& t : d.traces) total.traces.push_back(t);
        for (const auto& sc : d.scalars) total.scalars.push_back(sc);
        for (const auto& sh : d.soc_heads) total.soc_heads.push_back(sh);
    }
    total.add_soc_head(cones.soc_block, -std::sqrt(-2.0 * std::log(p)));
    total.add_scalar(cones.y_block, std::log(p));

    refs.linear_slack = prog.add_nonneg(name_prefix + "_margin");
    refs.linear_row = prog.add_row(-total.constant.real());
    emit_cexpr(prog, refs.linear_row, total, 1.0, false);
    prog.add_coef(refs.linear_row, prog.block(refs.linear_slack).offset, -1.0);
    return refs;
}

BuiltProblem build_statistical_robust(const ScenarioConfig& cfg, const ChannelSet& ch) {
    cfg.validate();
    check_channels(cfg, ch);
    require(cfg.uncertainty.kind == UncertaintyKind::Statistical,
            "build_statistical_robust: uncertainty model must be statistical");
    const int n = cfg.antennas;

    BuiltProblem b;
    CommonBlocks c = build_common(b.prog, cfg);
    init_built(b, DesignKind::Statistical, cfg, ch, c);

    for (int k = 0; k < cfg.users; ++k) {
        const std::string id = std::to_string(k + 1);
        const CVec& h = b.channels.legit[k];
        const double pk = cfg.p_outage[k];
        const double qk = cfg.q_outage[k];
        const CMat root = matrix_sqrt_psd(cfg.uncertainty.theta[k]);
        const CMat& theta = cfg.uncertainty.theta[k];

        std::vector<CVec> rt_cols(n);
        for (int i = 0; i < n; ++i) {
            rt_cols[i].resize(n);
            for (int j = 0; j < n; ++j) rt_cols[i][j] = root(j, i);
        }

        // ---- SINR side: B_k = root W_k root, r_k = root W_k h
        CExprMat bmat(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                bmat.at(i, j) = w_form(c, k, cfg.gamma[k], rt_cols[i], rt_cols[j]);
        CExprVec rvec;
        for (int i = 0; i < n; ++i) rvec.entries.push_back(w_form(c, k, cfg.gamma[k], rt_cols[i], h));
        BernCones sc =
            emit_bernstein_cones(b.prog, bmat, rvec, "x_s_" + id, "y_s_" + id, "bern_sinr_" + id);
        b.sinr_soc.push_back(sc.soc_block);
        b.y_blocks.push_back(sc.y_block);
        b.sinr_bern_psd.push_back(std::move(sc.psd));

        // 2x2 Schur block [[f + h^H W h - sigma2, sigma_sp], [sigma_sp, rho]]
        // with f = tr(B) - sqrt(-2 ln p) x + ln(p) y and tr(B) = tr(W Theta)
        CExpr e00 = w_trace(c, k, cfg.gamma[k], theta);
        {
            CExpr hwh = w_form(c, k, cfg.gamma[k], h, h);
            for (auto& sw : hwh.sandwiches) e00.sandwiches.push_back(sw);
        }
        e00.add_const(-cfg.sigma2_s_w[k]);
        e00.add_soc_head(sc.soc_block, -std::sqrt(-2.0 * std::log(pk)));
        e00.add_scalar(sc.y_block, std::log(pk));
        CExpr e01;
        e01.add_const(std::sqrt(cfg.sigma2_sp_w[k]));
        CExpr e11;
        e11.add_scalar(c.rho_blocks[k], 1.0);
        RealTie sinr = tie_real2_block(b.prog, "sinr_" + id, e00, e01, e11);
        b.sinr_key_row[k] = sinr.row[0][0];
        b.sinr_schur.push_back(std::move(sinr));

        // ---- EH side: E_k = root M root, g_k = root M h
        CExprMat emat(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) emat.at(i, j) = m_form(c, rt_cols[i], rt_cols[j]);
        CExprVec gvec;
        for (int i = 0; i < n; ++i) gvec.entries.push_back(m_form(c, rt_cols[i], h));
        BernCones ec =
            emit_bernstein_cones(b.prog, emat, gvec, "m_s_" + id, "n_s_" + id, "bern_eh_" + id);
        b.eh_soc.push_back(ec.soc_block);
        b.n_blocks.push_back(ec.y_block);
        b.eh_bern_psd.push_back(std::move(ec.psd));

        // [[g + h^H M h + sigma2, sqrt(omega)], [sqrt(omega), zeta (1 - rho)]]
        const double zeta = cfg.eh[k].zeta;
        CExpr f00 = m_trace(c, theta);
        {
            CExpr hmh = m_form(c, h, h);
            for (auto& sw : hmh.sandwiches) f00.sandwiches.push_back(sw);
        }
        f00.add_const(cfg.sigma2_s_w[k]);
        f00.add_soc_head(ec.soc_block, -std::sqrt(-2.0 * std::log(qk)));
        f00.add_scalar(ec.y_block, std::log(qk));
        CExpr f01;
        f01.add_const(std::sqrt(b.omega_w[k]));
        CExpr f11;
        f11.add_const(zeta);
        f11.add_scalar(c.rho_blocks[k], -zeta);
        RealTie eh = tie_real2_block(b.prog, "eh_" + id, f00, f01, f11);
        b.eh_key_row[k] = eh.row[0][0];
        b.eh_schur.push_back(std::move(eh));
    }
    b.prog.canonicalize();
    return b;
}

// ---------------------------------------------------------------------------

CMat BuiltProblem::tied_herm_expr(const HermTie& tie, const std::vector<double>& x) const {
    std::vector<double> xz = x;
    const Block& blk = prog.block(tie.block);
    std::fill(xz.begin() + blk.offset, xz.begin() + blk.offset + blk.size, 0.0);
    CMat m(tie.side, tie.side);
    for (int i = 0; i < tie.side; ++i)
        for (int j = i; j < tie.side; ++j) {
            const double re = prog.rhs()[tie.row_re[i][j]] - prog.eval_row(tie.row_re[i][j], xz);
            double im = 0.0;
            if (i < j) im = prog.rhs()[tie.row_im[i][j]] - prog.eval_row(tie.row_im[i][j], xz);
            m(i, j) = cplx(re, im);
            if (i != j) m(j, i) = cplx(re, -im);
        }
    return m;
}

Mat BuiltProblem::tied_real_expr(const RealTie& tie, const std::vector<double>& x) const {
    std::vector<double> xz = x;
    const Block& blk = prog.block(tie.block);
    std::fill(xz.begin() + blk.offset, xz.begin() + blk.offset + blk.size, 0.0);
    Mat m(tie.side, tie.side);
    for (int i = 0; i < tie.side; ++i)
        for (int j = i; j < tie.side; ++j) {
            const double v = prog.rhs()[tie.row[i][j]] - prog.eval_row(tie.row[i][j], xz);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

ProgramStats program_stats(const ConicProgram& prog) {
    require(prog.num_vars() > 0, "program_stats: empty program");
    return prog.stats();
}

}  // namespace anbeam
