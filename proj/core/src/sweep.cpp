// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "anbeam/metrics.hpp"
#include "anbeam/units.hpp"

namespace anbeam {

std::string DesignSpec::label() const {
    std::ostringstream os;
    os << to_string(kind);
    if (kind == DesignKind::Bounded) os << "[eps2=" << epsilon2;
    if (kind == DesignKind::Statistical)
        os << "[eps2=" << epsilon2 << ",p=" << p_outage << ",q=" << q_outage;
    if (kind == DesignKind::Perfect) os << "[";
    os << (kind == DesignKind::Perfect ? "NT=" : ",NT=") << antennas;
    if (eh_variant == EhVariant::Linear) os << ",linear-eh";
    os << "]";
    return os.str();
}

void ExperimentConfig::validate() const {
    scenario.validate();
    require(!grid.empty(), "ExperimentConfig: sweep grid must be non-empty");
    require(!designs.empty(), "ExperimentConfig: need at least one design");
    require(trials >= 1, "ExperimentConfig: need at least one trial per point");
    for (const DesignSpec& d : designs) {
        require(d.antennas >= 1, "ExperimentConfig: antenna count must be positive");
        require(d.epsilon2 >= 0.0, "ExperimentConfig: epsilon2 must be non-negative");
    }
}

const char* to_string(TrialStatus s) {
    switch (s) {
        case TrialStatus::Optimal: return "optimal";
        case TrialStatus::Infeasible: return "infeasible";
        case TrialStatus::Failed: return "failed";
    }
    return "?";
}

ScenarioConfig scenario_for(const ExperimentConfig& cfg, const DesignSpec& d, double sweep_value) {
    ScenarioConfig sc = cfg.scenario;
    sc.antennas = d.antennas;
    sc.eh_variant = d.eh_variant;
    if (cfg.variable == SweepVariable::Gamma)
        sc.gamma.assign(sc.users, db_to_linear(sweep_value));
    else
        sc.e_bar_w.assign(sc.users, dbm_to_watts(sweep_value));
    switch (d.kind) {
        case DesignKind::Perfect:
            sc.uncertainty.kind = UncertaintyKind::None;
            sc.uncertainty.epsilon.clear();
            sc.uncertainty.theta.clear();
            break;
        case DesignKind::Bounded:
            sc.uncertainty.kind = UncertaintyKind::Bounded;
            sc.uncertainty.epsilon.assign(sc.users, std::sqrt(d.epsilon2));
            sc.uncertainty.theta.clear();
            break;
        case DesignKind::Statistical: {
            sc.uncertainty.kind = UncertaintyKind::Statistical;
            sc.uncertainty.epsilon.clear();
            CMat theta = CMat::identity(sc.antennas);
            theta *= cplx(d.epsilon2, 0);
            sc.uncertainty.theta.assign(sc.users, theta);
            sc.p_outage.assign(sc.users, d.p_outage);
            sc.q_outage.assign(sc.users, d.q_outage);
            break;
        }
    }
    return sc;
}

namespace {

BuiltProblem build_design(const ScenarioConfig& sc, const ChannelSet& ch, DesignKind kind) {
    switch (kind) {
        case DesignKind::Bounded: return build_bounded_robust(sc, ch);
        case DesignKind::Statistical: return build_statistical_robust(sc, ch);
        default: return build_perfect_csi(sc, ch);
    }
}

// One end-to-end trial; may be retried once with a re-derived seed.
TrialRecord run_trial(const ExperimentConfig& cfg, const DesignSpec& d, double sweep_value,
                      int trial) {
    TrialRecord rec;
    rec.sweep_value = sweep_value;
    rec.design = d.label();
    rec.trial = trial;
    const ScenarioConfig sc = scenario_for(cfg, d, sweep_value);

    std::uint64_t seed = derive_seed(cfg.base_seed, static_cast<std::uint64_t>(trial));
    for (int attempt = 0; attempt < 2; ++attempt) {
        rec.seed = seed;
        Rng ch_rng(seed);
        const ChannelSet ch = generate_channel_set(sc.geometry(), ch_rng);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const BuiltProblem built = build_design(sc, ch, d.kind);
            const SolveResult res = solve(built.prog, design_solve_config());
            rec.solve_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
            if (res.status == SolveStatus::PrimalInfeasible) {
                rec.status = TrialStatus::Infeasible;
                return rec;
            }
            if (res.status != SolveStatus::Optimal) {
                rec.status = TrialStatus::Failed;
                seed = derive_seed(seed, 0x9E3779B97F4A7C15ULL);  // one retry
                continue;
            }
            Rng fb_rng(derive_seed(seed, 0xD1B54A32D192ED03ULL));
            const BeamformingSolution sol = extract_beamformers(built, res, &fb_rng);
            rec.status = TrialStatus::Optimal;
            rec.tr_v_w = sol.objective_w;
            const auto eav = max_eav_sinr(sol.q_cov, sol.v_cov, ch, sc.sigma2_e_w);
            rec.max_eav_sinr_db =
                eav.has_value() ? linear_to_db(std::max(*eav, 1e-300)) : std::nan("");
            double min_sinr = 1e300, min_eh = 1e300;
            for (int k = 0; k < sc.users; ++k) {
                min_sinr = std::min(
                    min_sinr, sinr_legit(ch.legit[k], sol.q_cov, sol.v_cov, sol.rho[k],
                                         sc.sigma2_s_w[k], sc.sigma2_sp_w[k], k));
                const double rf = received_rf_power(ch.legit[k], sol.q_cov, sol.v_cov,
                                                    sol.rho[k], sc.sigma2_s_w[k], sc.eh[k].zeta);
                const double harvested = sc.eh_variant == EhVariant::Linear
                                             ? linear_eh_output(rf, sc.linear_eta)
                                             : nonlinear_eh_output(rf, sc.eh[k]);
                min_eh = std::min(min_eh, harvested);
            }
            rec.min_legit_sinr_db = linear_to_db(std::max(min_sinr, 1e-300));
            rec.min_eh_w = min_eh;
            return rec;
        } catch (const SaturationError&) {
            // EH target at or above the rectifier maximum: infeasible by design
            rec.solve_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
            rec.status = TrialStatus::Infeasible;
            return rec;
        } catch (const Error&) {
            rec.status = TrialStatus::Failed;
            seed = derive_seed(seed, 0x9E3779B97F4A7C15ULL);
        }
    }
    return rec;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double ci95_of(const std::vector<double>& v) {
    if (v.size() < 2) return std::nan("");
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
    return 1.959963984540054 * sd / std::sqrt(static_cast<double>(v.size()));
}

std::string csv_num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepResult out;
    const int cells = static_cast<int>(cfg.grid.size() * cfg.designs.size());
    const int total = cells * cfg.trials;
    out.rows.resize(total);

    parallel_for(total, cfg.workers, [&](int flat) {
        const int trial = flat % cfg.trials;
        const int cell = flat / cfg.trials;
        const int di = cell % static_cast<int>(cfg.designs.size());
        const int gi = cell / static_cast<int>(cfg.designs.size());
        out.rows[flat] = run_trial(cfg, cfg.designs[di], cfg.grid[gi], trial);
    });

    // deterministic aggregation in (grid, design) order
    for (size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        for (size_t di = 0; di < cfg.designs.size(); ++di) {
            AggregateRecord agg;
            agg.sweep_value = cfg.grid[gi];
            agg.design = cfg.designs[di].label();
            std::vector<double> trv, eav, sinr, eh, ms;
            for (int t = 0; t < cfg.trials; ++t) {
                const TrialRecord& r =
                    out.rows[(gi * cfg.designs.size() + di) * cfg.trials + t];
                ++agg.n_trials;
                ms.push_back(r.solve_ms);
                if (r.status != TrialStatus::Optimal) continue;
                ++agg.n_feasible;
                trv.push_back(r.tr_v_w);
                if (!std::isnan(r.max_eav_sinr_db)) eav.push_back(r.max_eav_sinr_db);
                sinr.push_back(r.min_legit_sinr_db);
                eh.push_back(r.min_eh_w);
            }
            agg.feasibility_rate = static_cast<double>(agg.n_feasible) / agg.n_trials;
            agg.low_feasibility = agg.feasibility_rate < 0.5;
            agg.mean_tr_v_w = mean_of(trv);
            agg.ci95_tr_v_w = ci95_of(trv);
            agg.mean_max_eav_sinr_db = mean_of(eav);
            agg.ci95_max_eav_sinr_db = ci95_of(eav);
            agg.mean_min_legit_sinr_db = mean_of(sinr);
            agg.mean_min_eh_w = mean_of(eh);
            agg.mean_solve_ms = mean_of(ms);
            out.aggregates.push_back(std::move(agg));
        }
    }
    return out;
}

std::string SweepResult::results_csv() const {
    std::ostringstream os;
    os << "sweep_value,design,trial,seed,status,tr_V_watts,max_eav_sinr_db,min_legit_sinr_db,"
          "min_eh_watts,solve_ms\n";
    for (const TrialRecord& r : rows) {
        os << csv_num(r.sweep_value) << "," << r.design << "," << r.trial << "," << r.seed << ","
           << to_string(r.status) << ",";
        if (r.status == TrialStatus::Optimal) {
            os << csv_num(r.tr_v_w) << "," << csv_num(r.max_eav_sinr_db) << ","
               << csv_num(r.min_legit_sinr_db) << "," << csv_num(r.min_eh_w);
        } else {
            os << "nan,nan,nan,nan";
        }
        os << "," << csv_num(r.solve_ms) << "\n";
    }
    return os.str();
}

std::string SweepResult::aggregate_csv() const {
    std::ostringstream os;
    os << "sweep_value,design,n_trials,n_feasible,feasibility_rate,low_feasibility_flag,"
          "mean_tr_V_watts,ci95_tr_V_watts,mean_max_eav_sinr_db,ci95_max_eav_sinr_db,"
          "mean_min_legit_sinr_db,mean_min_eh_watts,mean_solve_ms\n";
    for (const AggregateRecord& a : aggregates) {
        os << csv_num(a.sweep_value) << "," << a.design << "," << a.n_trials << ","
           << a.n_feasible << "," << csv_num(a.feasibility_rate) << ","
           << (a.low_feasibility ? 1 : 0) << "," << csv_num(a.mean_tr_v_w) << ","
           << csv_num(a.ci95_tr_v_w) << "," << csv_num(a.mean_max_eav_sinr_db) << ","
           << csv_num(a.ci95_max_eav_sinr_db) << "," << csv_num(a.mean_min_legit_sinr_db) << ","
           << csv_num(a.mean_min_eh_w) << "," << csv_num(a.mean_solve_ms) << "\n";
    }
    return os.str();
}

bool sign_test_greater(int greater, int less, double confidence) {
    const int n = greater + less;
    if (n <= 0) return false;
    // one-sided exact binomial tail: P(X >= greater | n, 1/2)
    double tail = 0.0;
    for (int k = greater; k <= n; ++k) {
        const double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(n - k + 1.0) - n * std::log(2.0);
        tail += std::exp(logc);
    }
    return tail <= 1.0 - confidence;
}

}  // namespace anbeam
