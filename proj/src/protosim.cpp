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

#include "dqkd/protosim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "dqkd/errors.hpp"

namespace dqkd {

namespace {

constexpr std::int64_t kBlockSize = 1 << 15;

enum Stream : std::uint32_t { kRounds = 1, kPermute = 2, kAnnounce = 3 };

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                      stream, static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32U)};
    return std::mt19937_64(seq);
}

Ket ket_of(PrepState s) {
    switch (s) {
    case PrepState::Zero:
        return basis::zero();
    case PrepState::One:
        return basis::one();
    case PrepState::Plus:
        return basis::plus();
    case PrepState::Minus:
        return basis::minus();
    }
    return basis::zero();
}

PrepState first_of(Basis b) { return b == Basis::Z ? PrepState::Zero : PrepState::Plus; }

double expectation(const ComplexMatrix &rho, const Ket &k) {
    return (k.adjoint() * rho * k)(0).real();
}

// Marginal qubit statistics implied by the forward attack, per prepared state.
struct RoundModel {
    // P(check outcome = first state of basis | prepared, basis)
    std::array<std::array<double, 2>, 4> check_first{};
    // P(Bob's outcome == prepared | prepared, encoded bit), before backward noise
    std::array<std::array<double, 2>, 4> bob_same{};
};

RoundModel make_model(const AttackParams &attack) {
    const ComplexMatrix u = build_unitary(attack);
    const ComplexMatrix y = basis::encode_y();
    Ket ancilla0 = Ket::Zero(4);
    ancilla0(0) = 1.0;
    RoundModel model;
    for (int i = 0; i < 4; ++i) {
        const auto prep = static_cast<PrepState>(i);
        const Ket out = u * kron(ket_of(prep), ancilla0);
        const DensityMatrix joint = DensityMatrix::pure(out, {2, 4});
        const std::array<int, 1> keep_qubit = {0};
        const ComplexMatrix rho_a = partial_trace(joint, keep_qubit).matrix();
        for (int b = 0; b < 2; ++b) {
            model.check_first[i][b] =
                std::clamp(expectation(rho_a, ket_of(first_of(static_cast<Basis>(b)))), 0.0, 1.0);
        }
        const ComplexMatrix encoded1 = y * rho_a * y.adjoint();
        model.bob_same[i][0] = std::clamp(expectation(rho_a, ket_of(prep)), 0.0, 1.0);
        model.bob_same[i][1] = std::clamp(expectation(encoded1, ket_of(prep)), 0.0, 1.0);
    }
    return model;
}

struct BlockResult {
    std::array<std::array<std::array<std::int64_t, 2>, 2>, 4> counts{};
    std::int64_t consistent = 0;
    std::int64_t discarded = 0;
    std::int64_t true_errors = 0;
    std::vector<std::uint8_t> encoding_errors;
};

BlockResult simulate_block(const ProtocolConfig &cfg, const RoundModel &model,
                           std::uint64_t block, std::int64_t rounds) {
    std::mt19937_64 rng = make_rng(cfg.seed, kRounds, block);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> four(0, 3);
    std::uniform_int_distribution<int> coin(0, 1);

    BlockResult out;
    out.encoding_errors.reserve(static_cast<std::size_t>(rounds));
    for (std::int64_t k = 0; k < rounds; ++k) {
        const auto prep = static_cast<PrepState>(four(rng));
        const int pi = static_cast<int>(prep);
        if (unif(rng) < cfg.check_fraction) {
            const int b = coin(rng);
            const int outcome = unif(rng) < model.check_first[pi][b] ? 0 : 1;
            ++out.counts[pi][b][outcome];
            if (static_cast<Basis>(b) == basis_of(prep)) {
                ++out.consistent;
            } else {
                ++out.discarded;
            }
            continue;
        }
        const int bit = coin(rng);
        PrepState outcome = unif(rng) < model.bob_same[pi][bit] ? prep : complement(prep);
        if (unif(rng) < cfg.backward_noise) {
            outcome = complement(outcome);
        }
        const bool error = decode_key_bit(prep, outcome) != bit;
        out.true_errors += error ? 1 : 0;
        out.encoding_errors.push_back(error ? 1 : 0);
    }
    return out;
}

// Fidelity estimate for a prepared state from consistent-basis checks.
Estimate fidelity_estimate(const ProtocolStats &st, PrepState prep, bool &insufficient) {
    const int pi = static_cast<int>(prep);
    const int b = static_cast<int>(basis_of(prep));
    const auto &row = st.counts[pi][b];
    const std::int64_t trials = row[0] + row[1];
    const int success_index = prep == first_of(basis_of(prep)) ? 0 : 1;
    if (trials == 0) {
        insufficient = true;
        return {};
    }
    return estimate_with_se(row[success_index], trials);
}

} // namespace

Basis basis_of(PrepState state) {
    return state == PrepState::Zero || state == PrepState::One ? Basis::Z : Basis::X;
}

PrepState complement(PrepState state) {
    switch (state) {
    case PrepState::Zero:
        return PrepState::One;
    case PrepState::One:
        return PrepState::Zero;
    case PrepState::Plus:
        return PrepState::Minus;
    case PrepState::Minus:
        return PrepState::Plus;
    }
    return state;
}

std::string_view to_string(PrepState state) {
    switch (state) {
    case PrepState::Zero:
        return "0";
    case PrepState::One:
        return "1";
    case PrepState::Plus:
        return "+";
    case PrepState::Minus:
        return "-";
    }
    return "?";
}

std::string_view to_string(Basis basis) { return basis == Basis::Z ? "Z" : "X"; }

int decode_key_bit(PrepState prepared, PrepState outcome) {
    if (basis_of(prepared) != basis_of(outcome)) {
        throw InvalidArgument("decode_key_bit: prepared |" + std::string(to_string(prepared)) +
                              "> and outcome |" + std::string(to_string(outcome)) +
                              "> are in different bases");
    }
    return prepared == outcome ? 0 : 1;
}

Estimate estimate_with_se(std::int64_t successes, std::int64_t trials) {
    if (trials < 1) {
        throw InsufficientData("estimate_with_se: no trials");
    }
    if (successes < 0 || successes > trials) {
        throw InvalidArgument("estimate_with_se: successes outside [0, trials]");
    }
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

void validate(const ProtocolConfig &c) {
    if (c.n < 1) {
        throw InvalidArgument("protocol config: n must be >= 1");
    }
    if (!(c.check_fraction > 0.0 && c.check_fraction < 1.0)) {
        throw InvalidArgument("protocol config: check_fraction must lie in (0, 1)");
    }
    if (!(c.announce_fraction > 0.0 && c.announce_fraction < 1.0)) {
        throw InvalidArgument("protocol config: announce_fraction must lie in (0, 1)");
    }
    if (!(c.backward_noise >= 0.0 && c.backward_noise <= 0.5)) {
        throw InvalidArgument("protocol config: backward_noise must lie in [0, 1/2]");
    }
    if (!(c.abort_slack_z >= 0.0) || !std::isfinite(c.abort_slack_z)) {
        throw InvalidArgument("protocol config: abort_slack_z must be a non-negative number");
    }
    validate(c.attack);
}

ProtocolResult run_protocol(const ProtocolConfig &cfg, unsigned workers) {
    validate(cfg);
    const RoundModel model = make_model(cfg.attack);

    const std::int64_t blocks = (cfg.n + kBlockSize - 1) / kBlockSize;
    std::vector<BlockResult> results(static_cast<std::size_t>(blocks));
    if (workers == 0) {
        workers = std::max(1U, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, blocks));
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (std::int64_t b = next++; b < blocks; b = next++) {
            const std::int64_t rounds = std::min(kBlockSize, cfg.n - b * kBlockSize);
            results[static_cast<std::size_t>(b)] =
                simulate_block(cfg, model, static_cast<std::uint64_t>(b), rounds);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    ProtocolStats st;
    st.n = cfg.n;
    std::vector<std::uint8_t> encoding;
    encoding.reserve(static_cast<std::size_t>(cfg.n));
    for (const BlockResult &r : results) {
        for (int i = 0; i < 4; ++i) {
            for (int b = 0; b < 2; ++b) {
                for (int o = 0; o < 2; ++o) {
                    st.counts[i][b][o] += r.counts[i][b][o];
                }
            }
        }
        st.check_count += r.consistent;
        st.discard_count += r.discarded;
        st.true_error_count += r.true_errors;
        encoding.insert(encoding.end(), r.encoding_errors.begin(), r.encoding_errors.end());
    }

    if (cfg.permute) {
        std::mt19937_64 prng = make_rng(cfg.seed, kPermute, 0);
        std::shuffle(encoding.begin(), encoding.end(), prng);
    }
    std::mt19937_64 arng = make_rng(cfg.seed, kAnnounce, 0);
    std::bernoulli_distribution announce(cfg.announce_fraction);
    std::int64_t announced_errors = 0;
    for (std::uint8_t err : encoding) {
        if (announce(arng)) {
            ++st.announced_count;
            announced_errors += err;
        } else {
            ++st.m;
        }
    }

    bool insufficient = false;
    st.f0 = fidelity_estimate(st, PrepState::Zero, insufficient);
    st.f1 = fidelity_estimate(st, PrepState::One, insufficient);
    st.fplus = fidelity_estimate(st, PrepState::Plus, insufficient);
    st.fminus = fidelity_estimate(st, PrepState::Minus, insufficient);
    if (st.announced_count > 0) {
        st.e = estimate_with_se(announced_errors, st.announced_count);
    } else {
        insufficient = true;
    }
    st.insufficient_data = insufficient;
    st.f01 = 0.5 * (st.f0.value + st.f1.value);
    st.fpm = 0.5 * (st.fplus.value + st.fminus.value);
    st.xi = st.fpm + st.f01 - 1.0;
    st.xi_se = 0.5 * std::sqrt(st.f0.se * st.f0.se + st.f1.se * st.f1.se +
                               st.fplus.se * st.fplus.se + st.fminus.se * st.fminus.se);

    KeyRateReport rep = final_rate(st.xi, std::min(st.e.value, 0.5));
    const bool verified = !insufficient && st.e.value <= 0.5 &&
                          boundary_satisfied(st.xi - cfg.abort_slack_z * st.xi_se);
    if (!verified) {
        rep.boundary_ok = false;
        rep.aborted = true;
        rep.r_pa = 0.0;
        rep.r_final = 0.0;
    }
    st.aborted = rep.aborted;
    st.k_est = rep.aborted ? 0
                           : std::max<std::int64_t>(
                                 0, std::llround(static_cast<double>(st.m) * rep.r_final));
    return {st, rep};
}

Interval pa_rate_interval(double xi, double se_xi, double z) {
    const double lo = std::clamp(xi - z * se_xi, 0.0, 1.0);
    const double hi = std::clamp(xi + z * se_xi, 0.0, 1.0);
    const double h_max = (lo <= 0.5 && hi >= 0.5)
                             ? 1.0
                             : std::max(binary_entropy(lo), binary_entropy(hi));
    const double h_min = std::min(binary_entropy(lo), binary_entropy(hi));
    return {1.0 - h_max, 1.0 - h_min};
}

Interval final_rate_interval(double xi, double se_xi, double e, double se_e, double z) {
    const Interval pa = pa_rate_interval(xi, se_xi, z);
    // 1 - h(e') has the same shape as the PA term.
    const Interval ec = pa_rate_interval(e, se_e, z);
    // (1 - h(xi')) + (1 - h(e')) - 1
    return {pa.lo + ec.lo - 1.0, pa.hi + ec.hi - 1.0};
}

} // namespace dqkd
