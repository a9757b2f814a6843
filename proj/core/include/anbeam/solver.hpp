// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "anbeam/conic.hpp"

namespace anbeam {

struct SolverConfig {
    double feas_tol = 1e-8;      // primal/dual feasibility tolerance (relative)
    double gap_tol = 1e-8;       // relative duality-gap tolerance
    int max_iters = 200;
    double step_frac = 0.98;     // fraction of the step to the cone boundary
    double infeas_ratio = 1e-6;  // tau/kappa threshold for infeasibility declaration
    double cert_tol = 1e-6;      // certificate residual required to declare infeasibility
    std::ostream* log = nullptr;  // optional tab-separated iteration log

    void validate() const;
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIterations, NumericalFailure };

const char* to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::NumericalFailure;

    // For Optimal / MaxIterations: the de-homogenized primal/dual iterate in
    // the program's coordinates.  For infeasibility statuses, x or (y, z)
    // carry the normalized improving ray (Farkas certificate).
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;

    double objective = 0.0;  // in the program's max/min sense (Optimal only)
    double primal_res = 0.0;
    double dual_res = 0.0;
    double gap_abs = 0.0;
    double gap_rel = 0.0;
    double tau = 0.0;
    double kappa = 0.0;
    double cert_residual = 0.0;  // infeasibility certificate residual
    int iterations = 0;
};

/// Path-following primal-dual solve of a standard-form cone program.
/// Deterministic: identical program and config give an identical iterate
/// sequence.
SolveResult solve(const ConicProgram& prog, const SolverConfig& cfg = {});

/// Settings used for the design solves across the pipeline: one decade
/// tighter than the defaults, keeping solver slack well inside the -1e-6
/// relative margins of the verification layers (the SINR rows scale by
/// sigma_sp^2 / rho_min, which amplifies absolute slack into them).
inline SolverConfig design_solve_config() {
    SolverConfig cfg;
    cfg.feas_tol = 1e-9;
    cfg.gap_tol = 1e-8;  // objective accuracy is not margin-critical
    return cfg;
}

struct ResidualReport {
    double primal_res = 0.0;      // || A x - b ||_2
    double dual_res = 0.0;        // || A^T y + z - c ||_2 (minimization sense)
    double gap = 0.0;             // | c^T x - b^T y | (minimization sense)
    double min_cone_margin = 0.0;  // min over cone blocks of the boundary distance
    std::vector<double> row_residual;  // per-row a_r^T x - b_r
};

/// Exact evaluation of feasibility residuals and cone margins for an
/// arbitrary assignment.  Vectors must match the program's dimensions.
ResidualReport residuals(const ConicProgram& prog, const std::vector<double>& x,
                         const std::vector<double>& y, const std::vector<double>& z);

/// Primal-only variant: dual quantities are reported as zero.
ResidualReport residuals(const ConicProgram& prog, const std::vector<double>& x);

}  // namespace anbeam
