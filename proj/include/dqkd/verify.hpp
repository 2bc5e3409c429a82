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
 * Bulk numerical certification of the security-analysis identities over
 * seeded random attacks.
 */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dqkd/attack.hpp"

namespace dqkd {

/// Names of every check, in report order.
const std::vector<std::string> &verify_check_names();

/// Per-check tolerance; defaults are the library's declared tolerances.
std::map<std::string, double> default_verify_tolerances();

struct VerifyCheck {
    std::string name;
    std::string description;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    int trials = 0;
    int skipped = 0; ///< perturbations that could not be kept valid
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    [[nodiscard]] bool all_pass() const;
};

/**
 * Runs the selected checks (all when only is empty) on `trials` sampled
 * parameter sets each. Tolerance overrides replace defaults by name.
 * Throws InvalidArgument for trials < 1 or an unknown check name.
 */
VerifyReport run_verification(int trials, std::uint64_t seed,
                              const std::map<std::string, double> &tolerance_overrides = {},
                              const std::vector<std::string> &only = {});

/// Which single coordinate a spectrum-insensitivity probe moves.
enum class Perturbation { UV, S0, S1, R0, R1 };

/**
 * Moves one coordinate of a symmetric attack by a random step of size up
 * to `scale` (halving until the result validates) and returns the
 * largest change of the sorted numerical rho_BE spectrum. For UV, u moves
 * and v follows so the unitarity residual stays zero. Returns a negative
 * value when no valid perturbation was found.
 */
double spectrum_shift_under(const AttackParams &params, Perturbation which, double scale,
                            std::uint64_t seed);

} // namespace dqkd
