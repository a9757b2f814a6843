// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anbeam/analysis.hpp"
#include "anbeam/problems.hpp"

namespace anbeam {

enum class SweepVariable { Gamma, EBar };

/// One curve of a sweep: a design family with its uncertainty level, EH
/// model variant and antenna count.
struct DesignSpec {
    DesignKind kind = DesignKind::Perfect;
    double epsilon2 = 0.01;  // bounded: ||e||^2 bound; statistical: Theta = eps2 I
    double p_outage = 0.1;
    double q_outage = 0.1;
    EhVariant eh_variant = EhVariant::Nonlinear;
    int antennas = 4;

    std::string label() const;
};

struct ExperimentConfig {
    ScenarioConfig scenario;  // base; per-point gamma / e_bar come from the grid
    SweepVariable variable = SweepVariable::Gamma;
    std::vector<double> grid;  // gamma sweeps in dB, EH sweeps in dBm
    std::vector<DesignSpec> designs;
    int trials = 10;
    std::uint64_t base_seed = 1;
    int workers = 0;  // 0: hardware concurrency

    void validate() const;
};

enum class TrialStatus { Optimal, Infeasible, Failed };

const char* to_string(TrialStatus s);

struct TrialRecord {
    double sweep_value = 0.0;
    std::string design;
    int trial = 0;
    std::uint64_t seed = 0;
    TrialStatus status = TrialStatus::Failed;
    double tr_v_w = 0.0;
    double max_eav_sinr_db = 0.0;
    double min_legit_sinr_db = 0.0;
    double min_eh_w = 0.0;
    double solve_ms = 0.0;
};

struct AggregateRecord {
    double sweep_value = 0.0;
    std::string design;
    int n_trials = 0;
    int n_feasible = 0;
    double feasibility_rate = 0.0;
    bool low_feasibility = false;  // rate < 0.5: flagged, not silently averaged
    double mean_tr_v_w = 0.0, ci95_tr_v_w = 0.0;
    double mean_max_eav_sinr_db = 0.0, ci95_max_eav_sinr_db = 0.0;
    double mean_min_legit_sinr_db = 0.0;
    double mean_min_eh_w = 0.0;
    double mean_solve_ms = 0.0;
};

struct SweepResult {
    std::vector<TrialRecord> rows;  // ordered by (grid point, design, trial)
    std::vector<AggregateRecord> aggregates;

    std::string results_csv() const;
    std::string aggregate_csv() const;
};

/// Runs the full pipeline: per grid point, design and trial, draw channels,
/// build and solve the design, extract beamformers and record metrics.
/// Trials use derived seeds (base XOR trial index) and are paired across
/// designs and grid points that share an antenna count.  Infeasible trials
/// enter the feasibility rate; numerically failed trials are re-seeded once.
SweepResult run_sweep(const ExperimentConfig& cfg);

/// Scenario of one (design, grid value) cell, with the design's uncertainty
/// model and EH variant materialized.
ScenarioConfig scenario_for(const ExperimentConfig& cfg, const DesignSpec& d, double sweep_value);

/// One-sided sign test: true when `greater` successes out of
/// `greater + less` Bernoulli(1/2) trials are significant at `confidence`.
bool sign_test_greater(int greater, int less, double confidence = 0.95);

}  // namespace anbeam
