// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "anbeam/channel.hpp"
#include "anbeam/conic.hpp"
#include "anbeam/eh.hpp"

namespace anbeam {

enum class EhVariant { Nonlinear, Linear };

/// Full physical and design configuration of one problem instance.
/// All powers in watts, SINR targets linear.
struct ScenarioConfig {
    int users = 3;
    int antennas = 4;
    int eavesdroppers = 2;

    std::vector<double> gamma;       // per-user SINR target (linear)
    std::vector<double> e_bar_w;     // per-user EH target
    double p_total_w = 1.0;          // 30 dBm
    std::vector<double> sigma2_s_w;   // receiver noise, per user
    std::vector<double> sigma2_sp_w;  // decoder processing noise, per user
    double sigma2_e_w = 1e-8;        // eavesdropper noise
    std::vector<EhParams> eh;        // per user

    UncertaintyModel uncertainty;
    std::vector<double> p_outage;  // statistical SINR outage targets
    std::vector<double> q_outage;  // statistical EH outage targets

    double rho_min = 1e-6;  // closed lower bound standing in for rho > 0

    EhVariant eh_variant = EhVariant::Nonlinear;
    double linear_eta = 1.0;  // efficiency of the linear EH baseline

    // channel geometry
    double rician_k = 3.0;
    PathLossParams path_loss;                       // d0 = 10 m, alpha = 2
    std::vector<double> user_distance_m = {10.0, 14.0, 18.0};
    double eav_distance_m = 8.0;

    static ScenarioConfig paper_defaults();
    void validate() const;
    ChannelGeometry geometry() const;
    /// Required received RF power for user k (nonlinear inverse, or
    /// target/eta under the linear variant).  Throws SaturationError when
    /// the nonlinear target is unattainable.
    double required_rf_power_w(int k) const;
};

/// Entry-to-row bookkeeping for a complex Hermitian slack block, kept so
/// tests can re-evaluate the tied affine expression entrywise.
struct HermTie {
    int block = -1;
    int side = 0;
    std::vector<std::vector<int>> row_re;  // [i][j], i <= j
    std::vector<std::vector<int>> row_im;  // [i][j], i <  j; -1 on diagonal
};

struct RealTie {
    int block = -1;
    int side = 0;
    std::vector<std::vector<int>> row;  // [i][j], i <= j
};

enum class DesignKind { Perfect, Bounded, Statistical };

const char* to_string(DesignKind k);

/// A lowered design problem plus the variable dictionary needed to read
/// solutions and duals back in model terms.
struct BuiltProblem {
    ConicProgram prog;
    DesignKind design = DesignKind::Perfect;
    ScenarioConfig scenario;
    ChannelSet channels;

    std::vector<int> q_blocks;
    int v_block = -1;
    std::vector<int> rho_blocks;
    int budget_row = -1;

    // perfect / statistical: 2x2 Schur slack blocks with their tie rows
    std::vector<RealTie> sinr_schur, eh_schur;
    // bounded: (N_T+2) LMI slack blocks
    std::vector<HermTie> sinr_lmi, eh_lmi;
    std::vector<int> lambda_blocks, t_blocks;
    // statistical: Bernstein cones
    std::vector<int> sinr_soc, eh_soc;          // heads are x_{s,k}, m_{s,k}
    std::vector<int> y_blocks, n_blocks;
    std::vector<HermTie> sinr_bern_psd, eh_bern_psd;  // y I + B and n I + E blocks

    // dual extraction hooks: the rows whose multipliers correspond to the
    // SINR / EH quadratic-form constraints of each user
    std::vector<int> sinr_key_row, eh_key_row;

    std::vector<double> omega_w;  // per-user required RF input power

    /// Value of a tied Hermitian block's affine expression at x (the slack
    /// block's own coordinates are ignored).
    CMat tied_herm_expr(const HermTie& tie, const std::vector<double>& x) const;
    Mat tied_real_expr(const RealTie& tie, const std::vector<double>& x) const;
};

/// W_k = Q_k / gamma - sum_{i != k} Q_i - V (numeric form).
CMat w_matrix(const std::vector<CMat>& qs, const CMat& v, int k, double gamma);
/// M = sum_l Q_l + V.
CMat m_matrix(const std::vector<CMat>& qs, const CMat& v);

/// SDR of the perfect-CSI design: max tr(V) under per-user SINR and EH
/// Schur constraints, the power budget, and the rho box.
BuiltProblem build_perfect_csi(const ScenarioConfig& cfg, const ChannelSet& ch);

/// Worst-case design over norm-bounded channel errors; each user
/// contributes two (N_T+2)-sided LMI blocks with multipliers lambda_k, t_k.
/// Users with epsilon below 1e-9 fall back to their perfect-CSI forms.
BuiltProblem build_bounded_robust(const ScenarioConfig& cfg, const ChannelSet& ch);

/// Chance-constrained design under Gaussian channel errors via the
/// Bernstein-type inequality; each user contributes two SOC blocks, two
/// shifted-PSD blocks and two 2x2 Schur blocks.
BuiltProblem build_statistical_robust(const ScenarioConfig& cfg, const ChannelSet& ch);

// --- Bernstein lowering as a standalone constraint constructor ------------

/// Complex affine expression over a ConicProgram's variables, as a constant
/// plus sandwich terms left^H X_block right plus trace terms tr(X_block C)
/// plus real scalar terms.
struct CExpr {
    cplx constant{0.0, 0.0};
    struct Sandwich {
        int block;
        CVec left, right;
    };
    std::vector<Sandwich> sandwiches;
    struct HermTrace {
        int block;
        CMat coef;
    };
    std::vector<HermTrace> traces;
    std::vector<std::pair<int, double>> scalars;    // (scalar block id, coef)
    std::vector<std::pair<int, double>> soc_heads;  // (SOC block id, coef)

    CExpr& add_const(cplx c);
    CExpr& add_sandwich(int block, CVec left, CVec right);
    CExpr& add_trace(int block, CMat coef);
    CExpr& add_scalar(int block, double coef);
    CExpr& add_soc_head(int block, double coef);
};

/// Conjugate of an affine expression (sandwich sides swap; real terms keep).
CExpr conj_expr(const CExpr& e);

/// Hermitian-matrix-valued affine map (entries for i <= j; the lower
/// triangle is the conjugate).
struct CExprMat {
    int side = 0;
    std::vector<CExpr> upper;  // row-major upper triangle, i <= j
    CExpr& at(int i, int j);
    const CExpr& at(int i, int j) const;
    /// Entry with the Hermitian completion: conj_expr(at(j, i)) when i > j.
    CExpr entry(int i, int j) const;
    explicit CExprMat(int n);
};

struct CExprVec {
    std::vector<CExpr> entries;
};

struct BernsteinRefs {
    int soc_block = -1;   // head coordinate is the slack "x"
    int y_block = -1;     // non-negative slack "y"
    HermTie psd;          // y I + B >= 0 tie
    int linear_row = -1;  // the scalarized probability bound (when emitted)
    int linear_slack = -1;
};

/// Lowers Prob{ e^H B e + 2 Re(e^H r) + s >= 0 } >= 1 - p (e standard
/// complex Gaussian) to its convex certificate:
///   (i)  tr(B) - sqrt(-2 ln p) x + ln(p) y + s >= 0,
///   (ii) || [vec(B); sqrt(2) r] || <= x,
///   (iii) y I + B PSD, y >= 0.
/// The SOC dimension is 2 (n^2 + n) + 1 after real expansion.
BernsteinRefs bernstein_lower_to_cones(ConicProgram& prog, const CExprMat& b, const CExprVec& r,
                                       const CExpr& s, double p, const std::string& name_prefix);

ProgramStats program_stats(const ConicProgram& prog);


}  // namespace anbeam
