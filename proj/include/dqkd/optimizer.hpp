// Copyright 2026 The dqkd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Numerical maximization of Eve's entropy S(rho_BE) at fixed verified
 * fidelities, used to certify the closed-form maximum 1 + h(xi).
 *
 * The search runs over symmetric attacks c00 = c11 = c0 with
 * f0 = f1 = c0^2 and f+ = f- = c++^2 held fixed. Those equalities are
 * enforced by elimination: r0 = -s0 (f+ = f-) and
 * p0 = (2 c++^2 - 1 - c1^2 q0) / c0^2 (boundary identity), so q0 moves
 * along the feasible segment. The remaining coordinates p1, q1, s0, s1,
 * r1 and u (with v = -u) are free; infeasible points (Gram not PSD) are
 * rejected.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dqkd/attack.hpp"

namespace dqkd {

struct FidelityConstraint {
    double c0sq = 1.0;  ///< verified f_{0,1}
    double cppsq = 1.0; ///< verified f_{+,-}
    double tolerance = 1e-9;
};

struct OptimizerSettings {
    int grid_points = 33;
    int grid_jitter = 2;  ///< random probes per grid point
    int refine_starts = 4;
    double convergence_tol = 1e-8;
    double certification_gap = 1e-5;
};

struct OptResult {
    AttackParams best_params;
    double best_entropy = 0.0;
    double closed_form_entropy = 0.0;
    double gap = 0.0; ///< closed_form_entropy - best_entropy
    int iterations = 0; ///< objective evaluations spent
    bool converged = false;
    /// best_entropy exceeded the closed form by more than 1e-8.
    bool counterexample = false;
    /// max(|r0|, |s0|, |q1|, |p1|) of best_params.
    double slice_deviation = 0.0;
    /// max deviation of the realized fidelities from the constraint.
    double constraint_residual = 0.0;
};

/// S(rho_BE): closed-form spectrum for symmetric amplitudes, numerical
/// diagonalization otherwise.
double entropy_objective(const AttackParams &params);

/// S(rho_BE) by building and diagonalizing rho_BE.
double entropy_numeric(const AttackParams &params);

/**
 * Grid over the feasible q0 segment followed by Nelder-Mead refinement of
 * all free coordinates. Deterministic for fixed (constraint, budget, seed).
 * Throws BoundaryViolation when c++^2 - (1 - c0^2) < 1/2 and Infeasible
 * when no admissible point exists.
 */
OptResult maximize_s_be(const FidelityConstraint &constraint, int budget,
                        std::uint64_t seed, const OptimizerSettings &settings = {});

namespace detail {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

/// Minimizes f from x0 with an axis-aligned initial simplex of the given
/// per-coordinate steps. Non-finite values act as +infinity.
SimplexResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                          std::vector<double> x0, const std::vector<double> &step,
                          int max_evaluations, double ftol);

} // namespace detail

} // namespace dqkd
