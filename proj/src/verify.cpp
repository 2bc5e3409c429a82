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

#include "dqkd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dqkd/errors.hpp"
#include "dqkd/keyrate.hpp"

namespace dqkd {

namespace {

std::vector<double> numeric_be_spectrum(const AttackParams &a) {
    return build_rho_abe(a).rho_be.spectrum().eigenvalues;
}

double max_diff(const std::vector<double> &x, const std::vector<double> &y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d = std::max(d, std::abs(x[i] - y[i]));
    }
    return d;
}

// Distinct, reproducible seeds per (check, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t check, int trial) {
    return seed * 1'000'003ULL + check * 7'919ULL * 1'000'000ULL + static_cast<std::uint64_t>(trial);
}

double check_s_abe(std::uint64_t seed) {
    const AttackParams a = sample_valid(seed);
    return std::abs(von_neumann_entropy(build_rho_abe(a).rho_abe) - 2.0);
}

double check_closed_form(std::uint64_t seed) {
    const AttackParams a = sample_symmetric(seed);
    const std::vector<double> numeric = numeric_be_spectrum(a);
    const std::array<double, 4> cf = be_spectrum_closed_form(a).sorted();
    double d = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        const double expected = i < 4 ? cf[i] : 0.0;
        d = std::max(d, std::abs(numeric[i] - expected));
    }
    return d;
}

double check_bc_identity(std::uint64_t seed) {
    const AttackParams a = sample_balanced(seed);
    const ChannelFidelities f = forward_fidelities(a);
    const double c0sq = a.c00 * a.c00;
    const double c1sq = a.c01 * a.c01;
    const double lhs = 1.0 + c0sq * a.p.real() + c1sq * a.q.real();
    return std::max(std::abs(lhs - 2.0 * f.fplus), std::abs(f.fplus - f.fminus));
}

double check_backward(std::uint64_t seed) {
    // rho_B = I/2 conjugated by a random unitary is still I/2 up to rounding.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(2, 2);
    for (Eigen::Index i = 0; i < 4; ++i) {
        m(i / 2, i % 2) = Complex(g(rng), g(rng));
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    const ComplexMatrix q = qr.householderQ();
    ComplexMatrix rho = q * (0.5 * identity(2)) * q.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    return backward_indistinguishability(DensityMatrix(rho, {2}));
}

} // namespace

const std::vector<std::string> &verify_check_names() {
    static const std::vector<std::string> names = {
        "s_abe_equals_2",        "be_closed_form",        "bc_identity",
        "backward_indistinguishable", "insensitive_u_v", "insensitive_s1_r1",
        "insensitive_s0_r0",
    };
    return names;
}

std::map<std::string, double> default_verify_tolerances() {
    return {{"s_abe_equals_2", 1e-9},       {"be_closed_form", 1e-10},
            {"bc_identity", 1e-10},         {"backward_indistinguishable", 1e-12},
            {"insensitive_u_v", 1e-10},     {"insensitive_s1_r1", 1e-10},
            {"insensitive_s0_r0", 1e-10}};
}

bool VerifyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.pass; });
}

double spectrum_shift_under(const AttackParams &params, Perturbation which, double scale,
                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double dir_re = unif(rng);
    const double dir_im = unif(rng);
    const std::vector<double> before = numeric_be_spectrum(params);
    for (int attempt = 0; attempt < 30; ++attempt, scale *= 0.5) {
        AttackParams a = params;
        switch (which) {
        case Perturbation::UV: {
            const Complex du(scale * dir_re, scale * dir_im);
            a.u += du;
            // c00 c10 conj(u) + c11 c01 conj(v) = 0
            a.v = a.c11 * a.c01 > 0.0 ? -(a.c00 * a.c10 / (a.c11 * a.c01)) * a.u : a.v;
            break;
        }
        case Perturbation::S0:
            a.s += Complex(scale * dir_re, 0.0);
            break;
        case Perturbation::S1:
            a.s += Complex(0.0, scale * dir_re);
            break;
        case Perturbation::R0:
            a.r += Complex(scale * dir_re, 0.0);
            break;
        case Perturbation::R1:
            a.r += Complex(0.0, scale * dir_re);
            break;
        }
        if (is_valid(a)) {
            return max_diff(before, numeric_be_spectrum(a));
        }
    }
    return -1.0;
}

VerifyReport run_verification(int trials, std::uint64_t seed,
                              const std::map<std::string, double> &tolerance_overrides,
                              const std::vector<std::string> &only) {
    if (trials < 1) {
        throw InvalidArgument("verify: trials must be >= 1");
    }
    const std::vector<std::string> &all = verify_check_names();
    for (const std::string &name : only) {
        if (std::find(all.begin(), all.end(), name) == all.end()) {
            throw InvalidArgument("verify: unknown check '" + name + "'");
        }
    }
    std::map<std::string, double> tolerances = default_verify_tolerances();
    for (const auto &[name, value] : tolerance_overrides) {
        if (!tolerances.contains(name)) {
            throw InvalidArgument("verify: unknown check '" + name + "'");
        }
        tolerances[name] = value;
    }

    VerifyReport report;
    for (std::size_t idx = 0; idx < all.size(); ++idx) {
        const std::string &name = all[idx];
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) {
            continue;
        }
        VerifyCheck check;
        check.name = name;
        check.tolerance = tolerances[name];
        check.trials = trials;
        for (int t = 0; t < trials; ++t) {
            const std::uint64_t s = trial_seed(seed, idx, t);
            double dev = 0.0;
            if (name == "s_abe_equals_2") {
                check.description = "|S(rho_ABE) - 2| over general attacks";
                dev = check_s_abe(s);
            } else if (name == "be_closed_form") {
                check.description = "closed-form vs numerical rho_BE spectrum";
                dev = check_closed_form(s);
            } else if (name == "bc_identity") {
                check.description = "|1 + c0^2 p0 + c1^2 q0 - 2 f+| with f+ = f-";
                dev = check_bc_identity(s);
            } else if (name == "backward_indistinguishable") {
                check.description = "trace distance I-encoded vs Y-encoded rho_B = I/2";
                dev = check_backward(s);
            } else {
                const AttackParams a = sample_symmetric(s);
                std::vector<Perturbation> probes;
                if (name == "insensitive_u_v") {
                    check.description = "rho_BE spectrum shift when u moves (v = -u)";
                    probes = {Perturbation::UV};
                } else if (name == "insensitive_s1_r1") {
                    check.description = "rho_BE spectrum shift when Im s or Im r moves";
                    probes = {Perturbation::S1, Perturbation::R1};
                } else {
                    check.description = "rho_BE spectrum shift when Re s or Re r moves";
                    probes = {Perturbation::S0, Perturbation::R0};
                }
                for (std::size_t k = 0; k < probes.size(); ++k) {
                    const double shift = spectrum_shift_under(a, probes[k], 0.05, s + 17 * k);
                    if (shift < 0.0) {
                        ++check.skipped;
                    } else {
                        dev = std::max(dev, shift);
                    }
                }
            }
            check.max_deviation = std::max(check.max_deviation, dev);
        }
        check.pass = check.max_deviation <= check.tolerance && check.skipped < trials;
        report.checks.push_back(std::move(check));
    }
    return report;
}

} // namespace dqkd
