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
 * Monte-Carlo simulation of the four-state two-way protocol at finite n.
 *
 * Per round Bob prepares one of |0>,|1>,|+>,|-> uniformly. The forward
 * attack acts through build_unitary and Eve's ancilla is traced out. Alice
 * then either checks (probability check_fraction; uniform X/Z basis, only
 * consistent-basis results feed the fidelity estimates) or encodes a
 * uniform bit with I or Y. The return trip is a bit-flip channel with
 * probability backward_noise, and Bob measures in his preparation basis.
 * After the run a uniform announce_fraction of the encoding rounds is
 * revealed to estimate e; the rest form the raw key.
 *
 * Rounds are simulated in fixed blocks with per-block generators derived
 * from (seed, block index), so results do not depend on the worker count.
 */

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "dqkd/attack.hpp"
#include "dqkd/keyrate.hpp"

namespace dqkd {

enum class PrepState : std::uint8_t { Zero = 0, One = 1, Plus = 2, Minus = 3 };
enum class Basis : std::uint8_t { Z = 0, X = 1 };

Basis basis_of(PrepState state);
/// The other state of the same basis.
PrepState complement(PrepState state);
std::string_view to_string(PrepState state);
std::string_view to_string(Basis basis);

/// 0 when outcome == prepared, 1 when outcome is its basis complement.
/// Throws InvalidArgument for cross-basis input.
int decode_key_bit(PrepState prepared, PrepState outcome);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
    std::int64_t n_used = 0;

    bool operator==(const Estimate &) const = default;
};

/// Binomial point estimate with se = sqrt(p(1-p)/n). Throws
/// InsufficientData when trials == 0.
Estimate estimate_with_se(std::int64_t successes, std::int64_t trials);

struct ProtocolConfig {
    std::int64_t n = 100000;
    double check_fraction = 0.5;
    double announce_fraction = 0.5;
    AttackParams attack;
    double backward_noise = 0.0;
    std::uint64_t seed = 0;
    bool permute = false;
    /// Abort unless xi_hat - abort_slack_z * se(xi_hat) >= 1/2.
    double abort_slack_z = 0.0;
};

/// Throws InvalidArgument (or ValidationError for the attack).
void validate(const ProtocolConfig &config);

struct ProtocolStats {
    std::int64_t n = 0;
    std::int64_t m = 0;              ///< raw key rounds
    std::int64_t check_count = 0;    ///< consistent-basis check rounds
    std::int64_t discard_count = 0;  ///< inconsistent-basis check rounds
    std::int64_t announced_count = 0;
    /// counts[prepared][basis][outcome], outcome 0 = |0> or |+>.
    std::array<std::array<std::array<std::int64_t, 2>, 2>, 4> counts{};

    Estimate f0, f1, fplus, fminus;
    Estimate e;
    double f01 = 0.0;
    double fpm = 0.0;
    double xi = 0.0;
    double xi_se = 0.0;

    /// Decoding errors over every encoding round, announced or not.
    std::int64_t true_error_count = 0;
    std::int64_t k_est = 0;
    bool insufficient_data = false;
    bool aborted = false;

    bool operator==(const ProtocolStats &) const = default;
};

struct ProtocolResult {
    ProtocolStats stats;
    KeyRateReport report;
};

/// workers == 0 picks the hardware concurrency.
ProtocolResult run_protocol(const ProtocolConfig &config, unsigned workers = 0);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Range of 1 - h(x) over x in [xi - z se, xi + z se] clipped to [0, 1].
Interval pa_rate_interval(double xi, double se_xi, double z);

/// Range of 1 - h(xi') - h(e') over the z-standard-error box.
Interval final_rate_interval(double xi, double se_xi, double e, double se_e, double z);

} // namespace dqkd
