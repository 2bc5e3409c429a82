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
 * Command-line front end: key-rate evaluation, sweeps, optimization,
 * protocol simulation and the verification suite.
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dqkd/keyrate.hpp"

namespace dqkd::cli {

/// Process exit statuses.
enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 1,
    kIoError = 2,
    kVerificationFailed = 3,
};

enum class SweepVariable { E, Xi, BackwardNoise };

std::string to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string &name);

struct SweepSpec {
    SweepVariable variable = SweepVariable::E;
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;
    /// Fixed xi. When empty, xi follows the symmetric-attack curve 1 - 2e
    /// (forward error for a backward_noise sweep). Ignored for an xi sweep.
    std::optional<double> xi;
    /// Fixed QBER for an xi sweep.
    double e = 0.0;
    /// Forward-channel QBER for a backward_noise sweep.
    double forward_error = 0.0;
};

struct SweepRow {
    std::string var;
    double value = 0.0;
    KeyRateReport report;
};

/// Throws InvalidArgument unless start < stop and steps >= 2.
void validate(const SweepSpec &spec);

std::vector<SweepRow> run_sweep(const SweepSpec &spec);

inline constexpr const char *kSweepHeader =
    "var,value,xi,e,r_pa,r_final,r_final_raw,r_bb84,aborted";

/// %.12g formatting; NaN renders as "nan".
std::string format_number(double x);

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);

/// Parses a file written by write_sweep_csv. Throws ParseError on a bad header or row.
std::vector<SweepRow> read_sweep_csv(std::istream &in);

/// Full CLI dispatch. args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace dqkd::cli
