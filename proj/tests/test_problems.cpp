#include <cmath>

#include "anbeam/analysis.hpp"
#include "anbeam/metrics.hpp"
#include "anbeam/problems.hpp"
#include "anbeam/solver.hpp"
#include "anbeam/units.hpp"
#include "doctest.h"

using namespace anbeam;

namespace {

CMat random_hermitian(int n, Rng& rng, double scale = 1.0) {
    CMat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = scale * rng.cgaussian();
    return hermitian_part(a);
}

CMat random_psd(int n, Rng& rng, double scale = 1.0) {
    CMat a = random_hermitian(n, rng, scale);
    return a * a.adjoint();
}

ChannelSet paper_channels(const ScenarioConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    return generate_channel_set(cfg.geometry(), rng);
}

ScenarioConfig bounded_cfg(double eps2) {
    ScenarioConfig cfg = ScenarioConfig::paper_defaults();
    cfg.uncertainty.kind = UncertaintyKind::Bounded;
    cfg.uncertainty.epsilon.assign(cfg.users, std::sqrt(eps2));
    return cfg;
}

ScenarioConfig statistical_cfg(double eps2, double p = 0.1, double q = 0.1) {
    ScenarioConfig cfg = ScenarioConfig::paper_defaults();
    cfg.uncertainty.kind = UncertaintyKind::Statistical;
    CMat theta = CMat::identity(cfg.antennas);
    theta *= cplx(eps2, 0);
    cfg.uncertainty.theta.assign(cfg.users, theta);
    cfg.p_outage.assign(cfg.users, p);
    cfg.q_outage.assign(cfg.users, q);
    return cfg;
}

// Scalar-case feasibility oracle (K = 1, N_T = 1): brute-force grid over
// (q, rho) with the AN power interval solved in closed form.
bool scalar_feasible(double g, double gamma, double s2, double sp2, double omega, double zeta,
                     double p_total, int grid = 400) {
    for (int qi = 0; qi <= grid; ++qi) {
        const double q = p_total * qi / grid;
        for (int ri = 1; ri < grid; ++ri) {
            const double rho = static_cast<double>(ri) / grid;
            const double vmax = (q * g / gamma - s2 - sp2 / rho) / g;
            if (vmax < 0) continue;
            const double vmin = (omega / (zeta * (1.0 - rho)) - s2) / g - q;
            const double lo = std::max(0.0, vmin);
            const double hi = std::min(vmax, p_total - q);
            if (lo <= hi) return true;
        }
    }
    return false;
}

ScenarioConfig scalar_cfg(double gamma_db, double e_bar_dbm, double p_total_dbm) {
    ScenarioConfig cfg = ScenarioConfig::paper_defaults();
    cfg.users = 1;
    cfg.antennas = 1;
    cfg.eavesdroppers = 0;
    cfg.gamma.assign(1, db_to_linear(gamma_db));
    cfg.e_bar_w.assign(1, dbm_to_watts(e_bar_dbm));
    cfg.p_total_w = dbm_to_watts(p_total_dbm);
    cfg.sigma2_s_w.assign(1, 1e-8);
    cfg.sigma2_sp_w.assign(1, 1e-8);
    cfg.eh.assign(1, EhParams{});
    cfg.p_outage.assign(1, 0.1);
    cfg.q_outage.assign(1, 0.1);
    cfg.user_distance_m = {10.0};
    return cfg;
}

ChannelSet scalar_channel(double gain) {
    ChannelSet ch;
    ch.legit.push_back({cplx(std::sqrt(gain), 0)});
    ch.legit_distance_m = {10.0};
    ch.legit_angle_rad = {0.0};
    return ch;
}

}  // namespace

TEST_CASE("w_matrix fixed forms and numeric recomputation") {
    Rng rng(5);
    // K = 1, V = 0: W = Q / gamma
    {
        std::vector<CMat> qs = {random_psd(3, rng)};
        const CMat w = w_matrix(qs, CMat(3, 3), 0, 2.0);
        CMat expect = qs[0];
        expect *= cplx(0.5, 0);
        CHECK(frob(w - expect) < 1e-14);
    }
    // gamma = 1, K = 2, first user: W = Q_1 - Q_2 - V
    {
        std::vector<CMat> qs = {random_psd(3, rng), random_psd(3, rng)};
        const CMat v = random_psd(3, rng);
        const CMat w = w_matrix(qs, v, 0, 1.0);
        CHECK(frob(w - (qs[0] - qs[1] - v)) < 1e-14);
    }
    // numeric 4x4 vs term-by-term
    {
        std::vector<CMat> qs = {random_psd(4, rng), random_psd(4, rng), random_psd(4, rng)};
        const CMat v = random_psd(4, rng);
        const double gamma = 3.7;
        const CMat w = w_matrix(qs, v, 1, gamma);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const cplx expect =
                    qs[1](i, j) / gamma - qs[0](i, j) - qs[2](i, j) - v(i, j);
                CHECK(std::abs(w(i, j) - expect) < 1e-13);
            }
    }
}

TEST_CASE("Eq.17 homogeneity: 2x2 Schur block PSD iff the SINR meets the target") {
    Rng rng(31);
    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 3;
        std::vector<CMat> qs = {random_psd(n, rng), random_psd(n, rng)};
        const CMat v = random_psd(n, rng, 0.4);
        const CVec h = rng.cgaussian_vec(n);
        const double rho = rng.uniform(0.05, 1.0);
        const double gamma = rng.uniform(0.3, 4.0);
        const double s2 = rng.uniform(0.001, 0.1), sp2 = rng.uniform(0.001, 0.1);
        const int k = static_cast<int>(rng.next_u64() % 2);

        const CMat w = w_matrix(qs, v, k, gamma);
        const double a11 = quad_form(h, w) - s2;
        const bool psd = schur_2x2_psd(rho, std::sqrt(sp2), a11);
        const double sinr = sinr_legit(h, qs, v, rho, s2, sp2, k);
        const bool meets = sinr >= gamma;
        // exclude razor-thin boundary cases from the equivalence check
        if (std::abs(sinr - gamma) < 1e-9 * gamma) continue;
        CHECK(psd == meets);
        ++checked;
    }
    CHECK(checked > 990);
}

TEST_CASE("perfect CSI, scalar case: solver verdict matches the grid oracle") {
    const double gain = 0.8;
    struct Case {
        double gamma_db, e_bar_dbm, p_total_dbm;
    };
    const Case cases[] = {{6.0, 5.0, 18.0}, {6.0, 5.0, 14.0}, {10.0, 8.0, 21.0},
                          {10.0, 8.0, 15.5}, {3.0, 0.0, 9.0}, {3.0, 0.0, 12.0}};
    for (const Case& c : cases) {
        const ScenarioConfig cfg = scalar_cfg(c.gamma_db, c.e_bar_dbm, c.p_total_dbm);
        const ChannelSet ch = scalar_channel(gain);
        const BuiltProblem built = build_perfect_csi(cfg, ch);
        const SolveResult res = solve(built.prog);
        const bool oracle = scalar_feasible(gain, cfg.gamma[0], cfg.sigma2_s_w[0],
                                            cfg.sigma2_sp_w[0], built.omega_w[0],
                                            cfg.eh[0].zeta, cfg.p_total_w);
        INFO("gamma_db=", c.gamma_db, " e_bar_dbm=", c.e_bar_dbm, " p_dbm=", c.p_total_dbm);
        if (oracle) {
            CHECK(res.status == SolveStatus::Optimal);
        } else {
            CHECK(res.status == SolveStatus::PrimalInfeasible);
        }
    }
}

TEST_CASE("perfect CSI, scalar case: infeasible below the bisected power threshold") {
    const double gain = 0.6;
    const ScenarioConfig base = scalar_cfg(8.0, 8.0, 30.0);
    const ChannelSet ch = scalar_channel(gain);
    const double omega = base.required_rf_power_w(0);
    // bisect the minimal feasible budget with the grid oracle
    double lo = 1e-4, hi = 10.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (scalar_feasible(gain, base.gamma[0], base.sigma2_s_w[0], base.sigma2_sp_w[0], omega,
                            1.0, mid))
            hi = mid;
        else
            lo = mid;
    }
    const double p_star = 0.5 * (lo + hi);
    ScenarioConfig cfg = base;
    cfg.p_total_w = 0.85 * p_star;
    CHECK(solve(build_perfect_csi(cfg, ch).prog).status == SolveStatus::PrimalInfeasible);
    cfg.p_total_w = 1.15 * p_star;
    CHECK(solve(build_perfect_csi(cfg, ch).prog).status == SolveStatus::Optimal);
}

TEST_CASE("vacuous targets send all power to artificial noise") {
    ScenarioConfig cfg = ScenarioConfig::paper_defaults();
    cfg.gamma.assign(cfg.users, 1e-6);
    cfg.e_bar_w.assign(cfg.users, 1e-9);
    const ChannelSet ch = paper_channels(cfg, 101);
    const SolveResult res = solve(build_perfect_csi(cfg, ch).prog);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective >= 0.999 * cfg.p_total_w);
    CHECK(res.objective <= cfg.p_total_w * (1 + 1e-6));
}

TEST_CASE("program_stats block inventory per design") {
    const ScenarioConfig perfect = ScenarioConfig::paper_defaults();
    const ChannelSet ch = paper_channels(perfect, 77);
    {
        const ProgramStats st = program_stats(build_perfect_csi(perfect, ch).prog);
        int emb8 = 0, s2 = 0;
        for (int d : st.psd_sides) {
            if (d == 8) ++emb8;
            if (d == 2) ++s2;
        }
        CHECK(emb8 == 4);  // K+1 embedded blocks of size 2 N_T
        CHECK(s2 == 6);    // 2K Schur blocks
        CHECK(st.soc_dims.empty());
    }
    {
        const ProgramStats st = program_stats(build_bounded_robust(bounded_cfg(0.01), ch).prog);
        int emb8 = 0, emb12 = 0;
        for (int d : st.psd_sides) {
            if (d == 8) ++emb8;
            if (d == 12) ++emb12;
        }
        CHECK(emb8 == 4);
        CHECK(emb12 == 6);  // two (N_T+2)-sided complex LMI blocks per user
    }
    {
        const ProgramStats st =
            program_stats(build_statistical_robust(statistical_cfg(0.01), ch).prog);
        int emb8 = 0, s2 = 0;
        for (int d : st.psd_sides) {
            if (d == 8) ++emb8;
            if (d == 2) ++s2;
        }
        CHECK(emb8 == 4 + 6);  // Q/V plus the shifted Bernstein PSD blocks
        CHECK(s2 == 6);
        REQUIRE(st.soc_dims.size() == 6);
        for (int d : st.soc_dims) CHECK(d == 41);  // 2 (N_T^2 + N_T) + 1
    }
    ScenarioConfig empty = ScenarioConfig::paper_defaults();
    empty.users = 0;
    CHECK_THROWS_AS(empty.validate(), Error);
}

TEST_CASE("variable dictionary carries the model names") {
    const ChannelSet ch = paper_channels(ScenarioConfig::paper_defaults(), 3);
    const BuiltProblem b = build_statistical_robust(statistical_cfg(0.01), ch);
    for (const char* name : {"Q_1", "Q_3", "V", "rho_2", "x_s_1", "y_s_1", "m_s_3", "n_s_2"})
        CHECK(b.prog.has_block(name));
    const BuiltProblem b2 = build_bounded_robust(bounded_cfg(0.01), ch);
    for (const char* name : {"lambda_1", "t_3", "sinr_lmi_2", "eh_lmi_1"})
        CHECK(b2.prog.has_block(name));
}

TEST_CASE("constraint faithfulness: emitted blocks match dense assembly") {
    Rng rng(2027);
    const ScenarioConfig cfg = bounded_cfg(0.01);
    const ChannelSet ch = paper_channels(cfg, 55);
    const BuiltProblem b = build_bounded_robust(cfg, ch);
    const int n = cfg.antennas;

    // random numeric assignment of the decision variables
    std::vector<double> x(b.prog.num_vars(), 0.0);
    std::vector<CMat> qs;
    for (int k = 0; k < cfg.users; ++k) {
        qs.push_back(random_psd(n, rng, 0.3));
        b.prog.set_psd_complex(x, b.q_blocks[k], qs.back());
    }
    const CMat v = random_psd(n, rng, 0.3);
    b.prog.set_psd_complex(x, b.v_block, v);
    std::vector<double> rho, lam, tk;
    for (int k = 0; k < cfg.users; ++k) {
        rho.push_back(rng.uniform(0.1, 0.9));
        lam.push_back(rng.uniform(0.0, 2.0));
        tk.push_back(rng.uniform(0.0, 2.0));
        b.prog.set_scalar(x, b.rho_blocks[k], rho.back());
        b.prog.set_scalar(x, b.lambda_blocks[k], lam.back());
        b.prog.set_scalar(x, b.t_blocks[k], tk.back());
    }

    for (int k = 0; k < cfg.users; ++k) {
        const CVec& h = ch.legit[k];
        const double eps2 = cfg.uncertainty.epsilon[k] * cfg.uncertainty.epsilon[k];
        // independent dense assembly of the SINR LMI
        const CMat w = w_matrix(qs, v, k, cfg.gamma[k]);
        CMat expect(n + 2, n + 2);
        expect(0, 0) = rho[k];
        expect(0, 1) = std::sqrt(cfg.sigma2_sp_w[k]);
        expect(1, 0) = expect(0, 1);
        expect(1, 1) = quad_form(h, w) - cfg.sigma2_s_w[k] - lam[k];
        const CVec wh = w * h;
        for (int i = 0; i < n; ++i) {
            expect(1, 2 + i) = std::conj(wh[i]);  // h^H W row
            expect(2 + i, 1) = wh[i];
            for (int j = 0; j < n; ++j) expect(2 + i, 2 + j) = w(i, j);
            expect(2 + i, 2 + i) += lam[k] / eps2;
        }
        const CMat got = b.tied_herm_expr(b.sinr_lmi[k], x);
        CHECK(frob(got - expect) <= 1e-12 * std::max(1.0, frob(expect)));

        // EH LMI
        const CMat m = m_matrix(qs, v);
        CMat fexp(n + 2, n + 2);
        fexp(0, 0) = cfg.eh[k].zeta * (1.0 - rho[k]);
        fexp(0, 1) = std::sqrt(b.omega_w[k]);
        fexp(1, 0) = fexp(0, 1);
        fexp(1, 1) = quad_form(h, m) + cfg.sigma2_s_w[k] - tk[k];
        const CVec mh = m * h;
        for (int i = 0; i < n; ++i) {
            fexp(1, 2 + i) = std::conj(mh[i]);
            fexp(2 + i, 1) = mh[i];
            for (int j = 0; j < n; ++j) fexp(2 + i, 2 + j) = m(i, j);
            fexp(2 + i, 2 + i) += tk[k] / eps2;
        }
        const CMat fgot = b.tied_herm_expr(b.eh_lmi[k], x);
        CHECK(frob(fgot - fexp) <= 1e-12 * std::max(1.0, frob(fexp)));
    }
}

TEST_CASE("constraint faithfulness: statistical blocks match dense assembly") {
    Rng rng(2028);
    const ScenarioConfig cfg = statistical_cfg(0.01);
    const ChannelSet ch = paper_channels(cfg, 56);
    const BuiltProblem b = build_statistical_robust(cfg, ch);
    const int n = cfg.antennas;

    std::vector<double> x(b.prog.num_vars(), 0.0);
    std::vector<CMat> qs;
    for (int k = 0; k < cfg.users; ++k) {
        qs.push_back(random_psd(n, rng, 0.3));
        b.prog.set_psd_complex(x, b.q_blocks[k], qs.back());
    }
    const CMat v = random_psd(n, rng, 0.3);
    b.prog.set_psd_complex(x, b.v_block, v);
    std::vector<double> rho, xs, ys, ms, ns;
    for (int k = 0; k < cfg.users; ++k) {
        rho.push_back(rng.uniform(0.1, 0.9));
        xs.push_back(rng.uniform(0.1, 2.0));
        ys.push_back(rng.uniform(0.0, 2.0));
        ms.push_back(rng.uniform(0.1, 2.0));
        ns.push_back(rng.uniform(0.0, 2.0));
        b.prog.set_scalar(x, b.rho_blocks[k], rho.back());
        Vec soc(b.prog.block(b.sinr_soc[k]).dim, 0.0);
        soc[0] = xs.back();
        b.prog.set_soc(x, b.sinr_soc[k], soc);
        b.prog.set_scalar(x, b.y_blocks[k], ys.back());
        Vec soc2(b.prog.block(b.eh_soc[k]).dim, 0.0);
        soc2[0] = ms.back();
        b.prog.set_soc(x, b.eh_soc[k], soc2);
        b.prog.set_scalar(x, b.n_blocks[k], ns.back());
    }

    for (int k = 0; k < cfg.users; ++k) {
        const CVec& h = ch.legit[k];
        const CMat root = matrix_sqrt_psd(cfg.uncertainty.theta[k]);
        const CMat w = w_matrix(qs, v, k, cfg.gamma[k]);
        const CMat m = m_matrix(qs, v);
        const CMat bk = root * w * root;
        const CMat ek = root * m * root;

        // y I + B and n I + E blocks
        CMat yb = bk;
        for (int i = 0; i < n; ++i) yb(i, i) += ys[k];
        CHECK(frob(b.tied_herm_expr(b.sinr_bern_psd[k], x) - yb) <=
              1e-12 * std::max(1.0, frob(yb)));
        CMat ne = ek;
        for (int i = 0; i < n; ++i) ne(i, i) += ns[k];
        CHECK(frob(b.tied_herm_expr(b.eh_bern_psd[k], x) - ne) <=
              1e-12 * std::max(1.0, frob(ne)));

        // 2x2 blocks of the scalarized chance constraints
        const double fk = trace_re(bk) - std::sqrt(-2.0 * std::log(cfg.p_outage[k])) * xs[k] +
                          std::log(cfg.p_outage[k]) * ys[k];
        Mat s22(2, 2);
        s22(0, 0) = fk + quad_form(h, w) - cfg.sigma2_s_w[k];
        s22(0, 1) = std::sqrt(cfg.sigma2_sp_w[k]);
        s22(1, 0) = s22(0, 1);
        s22(1, 1) = rho[k];
        const Mat sgot = b.tied_real_expr(b.sinr_schur[k], x);
        CHECK(frob(sgot - s22) <= 1e-12 * std::max(1.0, frob(s22)));

        const double gk = trace_re(ek) - std::sqrt(-2.0 * std::log(cfg.q_outage[k])) * ms[k] +
                          std::log(cfg.q_outage[k]) * ns[k];
        Mat e22(2, 2);
        e22(0, 0) = gk + quad_form(h, m) + cfg.sigma2_s_w[k];
        e22(0, 1) = std::sqrt(b.omega_w[k]);
        e22(1, 0) = e22(0, 1);
        e22(1, 1) = cfg.eh[k].zeta * (1.0 - rho[k]);
        const Mat egot = b.tied_real_expr(b.eh_schur[k], x);
        CHECK(frob(egot - e22) <= 1e-12 * std::max(1.0, frob(e22)));

        // SOC tail carries [vec(B); sqrt(2) r] with r = root W h
        const Vec soc = b.prog.get_soc(x, b.sinr_soc[k]);
        // tail must be all zero here except the expression values: recompute
        // the expected stacked norm by setting the tail from the rows
        // (covered implicitly by the solver tests; here check dimension)
        CHECK(static_cast<int>(soc.size()) == 2 * (n * n + n) + 1);
    }
}

TEST_CASE("reduction consistency: zero uncertainty reproduces perfect CSI") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const ScenarioConfig perfect = ScenarioConfig::paper_defaults();
        const ChannelSet ch = paper_channels(perfect, seed);
        const SolveResult rp = solve(build_perfect_csi(perfect, ch).prog);
        REQUIRE(rp.status == SolveStatus::Optimal);

        const ScenarioConfig b0 = bounded_cfg(0.0);
        const SolveResult rb = solve(build_bounded_robust(b0, ch).prog);
        REQUIRE(rb.status == SolveStatus::Optimal);
        CHECK(std::abs(rb.objective - rp.objective) <= 1e-6 * std::abs(rp.objective));

        const ScenarioConfig s0 = statistical_cfg(0.0);
        const SolveResult rs = solve(build_statistical_robust(s0, ch).prog);
        REQUIRE(rs.status == SolveStatus::Optimal);
        CHECK(std::abs(rs.objective - rp.objective) <= 1e-6 * std::abs(rp.objective));
    }
}

TEST_CASE("robust designs trade AN power monotonically") {
    const ScenarioConfig cfg = ScenarioConfig::paper_defaults();
    const ChannelSet ch = paper_channels(cfg, 404);

    const SolveResult r_perfect = solve(build_perfect_csi(cfg, ch).prog);
    const SolveResult r_small = solve(build_bounded_robust(bounded_cfg(0.001), ch).prog);
    const SolveResult r_large = solve(build_bounded_robust(bounded_cfg(0.01), ch).prog);
    REQUIRE(r_perfect.status == SolveStatus::Optimal);
    REQUIRE(r_small.status == SolveStatus::Optimal);
    REQUIRE(r_large.status == SolveStatus::Optimal);
    CHECK(r_large.objective <= r_small.objective + 1e-9);
    CHECK(r_small.objective <= r_perfect.objective + 1e-9);

    const SolveResult r_stat = solve(build_statistical_robust(statistical_cfg(0.01), ch).prog);
    REQUIRE(r_stat.status == SolveStatus::Optimal);
    CHECK(r_stat.objective <= r_perfect.objective + 1e-9);

    const SolveResult r_tight =
        solve(build_statistical_robust(statistical_cfg(0.01, 0.01, 0.01), ch).prog);
    REQUIRE(r_tight.status == SolveStatus::Optimal);
    CHECK(r_tight.objective <= r_stat.objective + 1e-9);
}

TEST_CASE("bounded robust, N_T = 1: S-procedure certificate versus error-interval grid") {
    ScenarioConfig cfg = scalar_cfg(6.0, 5.0, 20.0);
    cfg.uncertainty.kind = UncertaintyKind::Bounded;
    cfg.uncertainty.epsilon.assign(1, 0.1);
    const ChannelSet ch = scalar_channel(0.9);
    const BuiltProblem b = build_bounded_robust(cfg, ch);
    const SolveResult res = solve(b.prog, design_solve_config());
    REQUIRE(res.status == SolveStatus::Optimal);

    const CMat q = b.prog.get_psd_complex(res.x, b.q_blocks[0]);
    const CMat v = b.prog.get_psd_complex(res.x, b.v_block);
    const double rho = b.prog.get_scalar(res.x, b.rho_blocks[0]);
    // worst case over the error interval [-eps, eps] along the channel phase
    const double habs = std::abs(ch.legit[0][0]);
    for (int i = 0; i <= 200; ++i) {
        const double t = -0.1 + 0.2 * i / 200.0;
        const CVec h = {cplx(habs + t, 0)};
        const double sinr = sinr_legit(h, {q}, v, rho, cfg.sigma2_s_w[0], cfg.sigma2_sp_w[0], 0);
        CHECK((sinr - cfg.gamma[0]) / cfg.gamma[0] >= -1e-6);
        const double rf = received_rf_power(h, {q}, v, rho, cfg.sigma2_s_w[0], 1.0);
        CHECK((rf - b.omega_w[0]) / b.omega_w[0] >= -1e-6);
    }
}

TEST_CASE("S-procedure soundness: certified LMIs imply sampled original constraints") {
    const ScenarioConfig cfg = bounded_cfg(0.01);
    const ChannelSet ch = paper_channels(cfg, 606);
    const BuiltProblem b = build_bounded_robust(cfg, ch);
    const SolveResult res = solve(b.prog, design_solve_config());
    REQUIRE(res.status == SolveStatus::Optimal);
    const BeamformingSolution sol = extract_beamformers(b, res);
    Rng rng(607);
    const RobustnessReport rep =
        verify_bounded_robustness(sol, ch, cfg, cfg.uncertainty.epsilon, 10000, rng);
    CHECK(rep.total_violations == 0);
}

TEST_CASE("builder input validation") {
    const ScenarioConfig cfg = ScenarioConfig::paper_defaults();
    const ChannelSet ch = paper_channels(cfg, 1);

    ScenarioConfig bad = bounded_cfg(0.01);
    bad.uncertainty.epsilon[1] = -0.5;
    CHECK_THROWS_AS(build_bounded_robust(bad, ch), Error);

    ScenarioConfig stat = statistical_cfg(0.01);
    stat.uncertainty.theta[0](0, 0) = -1.0;
    CHECK_THROWS_AS(build_statistical_robust(stat, ch), Error);

    ScenarioConfig badp = statistical_cfg(0.01);
    badp.p_outage[0] = 0.0;
    CHECK_THROWS_AS(build_statistical_robust(badp, ch), Error);
    badp.p_outage[0] = 1.5;
    CHECK_THROWS_AS(build_statistical_robust(badp, ch), Error);

    // EH target at the saturation power propagates the eh-model guard
    ScenarioConfig sat = ScenarioConfig::paper_defaults();
    sat.e_bar_w.assign(sat.users, dbm_to_watts(10.0));
    CHECK_THROWS_AS(build_perfect_csi(sat, ch), SaturationError);
}

TEST_CASE("bernstein_lower_to_cones: trivial and identity cases") {
    // B = 0, r = 0, s = 1: satisfied at x = y = 0
    {
        ConicProgram p;
        CExprMat b(2);
        CExprVec r;
        r.entries.resize(2);
        CExpr s;
        s.add_const(1.0);
        const BernsteinRefs refs = bernstein_lower_to_cones(p, b, r, s, 0.1, "bern");
        p.set_maximize(false);
        p.obj_coef(p.block(refs.soc_block).offset, 1.0);  // minimize x
        const SolveResult res = solve(p);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(std::abs(res.objective) <= 1e-7);  // x driven to zero
        // x = y = 0 satisfies every emitted row exactly
        std::vector<double> x0(p.num_vars(), 0.0);
        const ResidualReport rep = residuals(p, x0);
        // the linear row needs its margin slack: s = 1 with everything else zero
        // leaves margin 1 on the scalarized bound
        std::vector<double> x1 = x0;
        p.set_scalar(x1, refs.linear_slack, 1.0);
        const ResidualReport rep1 = residuals(p, x1);
        CHECK(rep1.primal_res <= 1e-12);
        CHECK(rep1.min_cone_margin >= 0.0);
    }
    // B = I_4, r = 0, s free, p = 0.1: minimal s is sqrt(2 ln 10) * 2 - 4
    {
        ConicProgram p;
        const int sv = p.add_free("s");
        CExprMat b(4);
        for (int i = 0; i < 4; ++i) b.at(i, i).add_const(1.0);
        CExprVec r;
        r.entries.resize(4);
        CExpr s;
        s.add_scalar(sv, 1.0);
        bernstein_lower_to_cones(p, b, r, s, 0.1, "bern");
        p.set_maximize(false);
        p.obj_scalar(sv, 1.0);
        const SolveResult res = solve(p);
        REQUIRE(res.status == SolveStatus::Optimal);
        const double expect = std::sqrt(-2.0 * std::log(0.1)) * 2.0 - 4.0;
        CHECK(std::sqrt(-2.0 * std::log(0.1)) == doctest::Approx(2.1459660262893476).epsilon(1e-12));
        CHECK(res.objective == doctest::Approx(expect).epsilon(1e-6));
    }
    CHECK_THROWS_AS(
        [] {
            ConicProgram p;
            CExprMat b(2);
            CExprVec r;
            r.entries.resize(2);
            bernstein_lower_to_cones(p, b, r, CExpr{}, 0.0, "x");
        }(),
        Error);
}

TEST_CASE("bernstein certificate is probabilistically sound (Monte Carlo)") {
    Rng rng(909);
    const int n = 4;
    const CMat b = random_hermitian(n, rng);  // indefinite in general
    const CVec r = rng.cgaussian_vec(n);
    // tightest s allowed by the three conditions at p = 0.1
    double vecnorm2 = frob(b) * frob(b);
    for (const cplx& c : r) vecnorm2 += 2.0 * std::norm(c);
    const double x = std::sqrt(vecnorm2);
    const double y = std::max(0.0, -min_eigenvalue(b));
    const double p = 0.1;
    const double s = std::sqrt(-2.0 * std::log(p)) * x - std::log(p) * y - trace_re(b);

    int ok = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        const CVec e = rng.cgaussian_vec(n);
        const double val = quad_form(e, b) + 2.0 * cdot(e, r).real() + s;
        if (val >= 0.0) ++ok;
    }
    CHECK(static_cast<double>(ok) / trials >= 0.9);
}

TEST_CASE("golden serialization of a small perfect-CSI program") {
    ScenarioConfig cfg = scalar_cfg(6.0, 5.0, 20.0);
    cfg.antennas = 2;
    ChannelSet ch;
    ch.legit.push_back({cplx(0.8, 0.1), cplx(-0.3, 0.55)});
    ch.legit_distance_m = {10.0};
    ch.legit_angle_rad = {0.0};
    const BuiltProblem b = build_perfect_csi(cfg, ch);
    const std::string s1 = b.prog.serialize();
    const BuiltProblem b2 = build_perfect_csi(cfg, ch);
    CHECK(s1 == b2.prog.serialize());
    CHECK(s1.find("block psdc 2 Q_1") != std::string::npos);
    CHECK(s1.find("block psdc 2 V") != std::string::npos);
}
