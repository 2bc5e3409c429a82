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

// Acceptance gate: one PASS/FAIL line per criterion. Pass a criterion
// number to run only that one. Exit status is nonzero iff any selected
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dqkd/attack.hpp"
#include "dqkd/keyrate.hpp"
#include "dqkd/optimizer.hpp"
#include "dqkd/protosim.hpp"
#include "dqkd/qstate.hpp"
#include "dqkd/serialize.hpp"
#include "dqkd/verify.hpp"

using namespace dqkd;

namespace {

// Tolerances and targets, pinned.
constexpr double kEntropyTol = 1e-9;
constexpr double kSpectrumTol = 1e-10;
constexpr double kInsensitivityTol = 1e-10;
constexpr double kInsensitivityStep = 1e-3;
constexpr double kMaxCertTol = 1e-5;
constexpr double kSliceTol = 1e-3;
constexpr double kSpecialRateTol = 1e-9;
constexpr double kZ = 3.0;
constexpr double kRootTol = 1e-6;
constexpr double kBackwardTol = 1e-12;
constexpr std::int64_t kMonteCarloN = 1'000'000;
constexpr int kOptBudget = 20000;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent high-precision roots of 1 - h(2e) - h(e) and 1 - 2h(e).
constexpr double kDqkdRoot = 0.0756794560109924205;
constexpr double kBb84Root = 0.110027864438359551;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string fmt_root(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", x);
    return buf;
}

void info(const std::string &line) { std::cout << "[INFO] " << line << '\n'; }

void sub(bool pass, const std::string &line) {
    std::cout << "    " << (pass ? "ok   " : "FAIL ") << line << '\n';
}

Outcome exact_entropy() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const AttackParams a = sample_valid(1'000'000 + k);
        worst = std::max(worst, std::abs(von_neumann_entropy(build_rho_abe(a).rho_abe) - 2.0));
    }
    const double t = seconds_since(t0);
    return {worst <= kEntropyTol && t < 10.0,
            "1000 attacks, max |S(rho_ABE) - 2| = " + fmt(worst) + " (tol " + fmt(kEntropyTol) +
                "), " + fmt(t) + " s (target < 10 s)"};
}

// Delta formulas built from the real parts s0, r0 and c0^2 p + c1^2 q, for
// the deviation info line.
std::array<double, 4> real_part_variant(const AttackParams &a) {
    const double c0sq = a.c00 * a.c00;
    const double c1sq = a.c01 * a.c01;
    const double d1 = std::sqrt(std::pow(c0sq * a.p.real() + c1sq * a.q.real(), 2) +
                                std::pow(c0sq * a.p.imag() + c1sq * a.q.imag(), 2) +
                                c0sq * c1sq * std::pow(a.s.real() + a.r.real(), 2));
    const double d2 = std::sqrt(c0sq * c1sq) * std::abs(a.s.real() - a.r.real());
    std::array<double, 4> l = {(1 + d1 + d2) / 4, (1 + d1 - d2) / 4, (1 - d1 - d2) / 4,
                               (1 - d1 + d2) / 4};
    std::sort(l.rbegin(), l.rend());
    return l;
}

Outcome spectrum_oracle() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    double variant_worst = 0.0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const AttackParams a = sample_symmetric(2'000'000 + k);
        const std::vector<double> numeric = build_rho_abe(a).rho_be.spectrum().eigenvalues;
        const std::array<double, 4> cf = be_spectrum_closed_form(a).sorted();
        const std::array<double, 4> pv = real_part_variant(a);
        for (std::size_t i = 0; i < numeric.size(); ++i) {
            worst = std::max(worst, std::abs(numeric[i] - (i < 4 ? cf[i] : 0.0)));
            if (i < 4) {
                variant_worst = std::max(variant_worst, std::abs(numeric[i] - pv[i]));
            }
        }
    }
    const double t = seconds_since(t0);
    info("real-part variant of Delta1/Delta2 (s0, r0 and c0^2 p + c1^2 q) deviates from brute force by "
         "up to " +
         fmt(variant_worst) + "; the exact form uses s1, r1 and c0^2 p - c1^2 q");
    return {worst <= kSpectrumTol && t < 10.0,
            "1000 symmetric attacks, max |closed form - eig| = " + fmt(worst) + " (tol " +
                fmt(kSpectrumTol) + "), " + fmt(t) + " s (target < 10 s)"};
}

Outcome insensitivity() {
    struct Probe {
        const char *label;
        std::vector<Perturbation> moves;
        bool claimed; // part of the criterion
    };
    const std::vector<Probe> probes = {
        {"u, v (v = -u)", {Perturbation::UV}, true},
        {"s1", {Perturbation::S1}, true},
        {"r1", {Perturbation::R1}, true},
        {"s0, r0 (not claimed)", {Perturbation::S0, Perturbation::R0}, false},
    };
    bool all = true;
    for (const Probe &probe : probes) {
        double worst = 0.0;
        int skipped = 0;
        for (std::uint64_t k = 0; k < 200; ++k) {
            const AttackParams a = sample_symmetric(3'000'000 + k);
            for (std::size_t m = 0; m < probe.moves.size(); ++m) {
                const double d =
                    spectrum_shift_under(a, probe.moves[m], kInsensitivityStep, 77 * k + m);
                if (d < 0.0) {
                    ++skipped;
                } else {
                    worst = std::max(worst, d);
                }
            }
        }
        const bool ok = worst <= kInsensitivityTol && skipped == 0;
        const std::string line = std::string(probe.label) + ": max spectrum shift " + fmt(worst) +
                                 " for steps of " + fmt(kInsensitivityStep) +
                                 (skipped ? ", " + std::to_string(skipped) + " skipped" : "");
        if (probe.claimed) {
            all = all && ok;
            sub(ok, line);
        } else {
            info(line);
        }
    }
    return {all, "200 trials, tol " + fmt(kInsensitivityTol) +
                     " on sorted rho_BE spectrum under u/v, s1, r1 moves"};
}

Outcome maximum_certification() {
    const auto t0 = Clock::now();
    double worst_gap = 0.0;
    double worst_slice = 0.0;
    double worst_residual = 0.0;
    int converged = 0;
    int points = 0;
    int counterexamples = 0;
    long total_evals = 0;
    for (int i = 0; i < 10; ++i) {
        const double f01 = 0.55 + 0.45 * i / 9.0;
        const double lo = 1.5 - f01;
        for (int j = 0; j < 10; ++j) {
            const double fpm = lo + (1.0 - lo) * j / 9.0;
            const OptResult r =
                maximize_s_be({f01, fpm}, kOptBudget, static_cast<std::uint64_t>(10 * i + j));
            const double expected = 1.0 + binary_entropy(std::min(1.0, f01 + fpm - 1.0));
            worst_gap = std::max(worst_gap, std::abs(expected - r.best_entropy));
            worst_residual = std::max(worst_residual, r.constraint_residual);
            counterexamples += r.counterexample ? 1 : 0;
            total_evals += r.iterations;
            if (r.converged) {
                ++converged;
                worst_slice = std::max(worst_slice, r.slice_deviation);
            }
            ++points;
        }
    }
    const double t = seconds_since(t0);
    sub(worst_gap <= kMaxCertTol, "max |1 + h(xi) - best S| = " + fmt(worst_gap));
    sub(worst_slice <= kSliceTol, "max(|r0|,|s0|,|q1|,|p1|) over " + std::to_string(converged) +
                                      " converged maximizers = " + fmt(worst_slice));
    sub(t < 120.0, "runtime " + fmt(t) + " s (target < 120 s)");
    info("max constraint residual " + fmt(worst_residual) + ", counterexamples " +
         std::to_string(counterexamples) + ", mean evaluations " + fmt(total_evals / 100.0));
    // Soundness probe independent of the search: random attacks with
    // f+ = f- never beat 1 + h(xi) of their own fidelities.
    double excess = -kInf;
    int admissible = 0;
    for (std::uint64_t k = 0; k < 2000; ++k) {
        const AttackParams a = sample_balanced(4'000'000 + k);
        const double xi = forward_fidelities(a).xi;
        if (xi < 0.5) {
            continue;
        }
        ++admissible;
        excess = std::max(excess, entropy_numeric(a) - (1.0 + binary_entropy(std::min(xi, 1.0))));
    }
    info("random balanced attacks with xi >= 1/2: " + std::to_string(admissible) +
         ", max S(rho_BE) - (1 + h(xi)) = " + fmt(excess));
    const bool ok = worst_gap <= kMaxCertTol && worst_slice <= kSliceTol && converged > 0 &&
                    counterexamples == 0 && t < 120.0;
    return {ok, std::to_string(points) + "-point feasible fidelity grid, budget " +
                    std::to_string(kOptBudget)};
}

Outcome special_rates() {
    struct Case {
        NamedAttack attack;
        double r_pa;
    };
    const Case cases[] = {{NamedAttack::Identity, 1.0},
                          {NamedAttack::MeasureZ, 0.0},
                          {NamedAttack::MeasureX, 0.0}};
    bool all = true;
    for (const Case &c : cases) {
        const AttackParams a = named_attack(c.attack);
        const double xi = forward_fidelities(a).xi;
        const double formula = final_rate(xi, 0.0).r_pa;
        // Same quantity from the states: S(rho_ABE) - S(rho_BE).
        const JointStateBundle j = build_rho_abe(a);
        const double entropic = von_neumann_entropy(j.rho_abe) - von_neumann_entropy(j.rho_be);

        ProtocolConfig cfg;
        cfg.n = kMonteCarloN;
        cfg.attack = a;
        cfg.seed = 5;
        const ProtocolStats s = run_protocol(cfg).stats;
        const Interval box = pa_rate_interval(s.xi, s.xi_se, kZ);

        const bool ok_formula = std::abs(formula - c.r_pa) <= kSpecialRateTol &&
                                std::abs(entropic - c.r_pa) <= kSpecialRateTol;
        const bool ok_mc = box.contains(c.r_pa);
        all = all && ok_formula && ok_mc;
        sub(ok_formula, std::string(to_string(c.attack)) + ": r_PA formula " + fmt(formula) +
                            ", 2 - S(rho_BE) " + fmt(entropic) + ", expected " + fmt(c.r_pa));
        sub(ok_mc, std::string(to_string(c.attack)) + ": xi_hat " + fmt(s.xi) + " +- " +
                       fmt(s.xi_se) + ", 3-se r_PA range [" + fmt(box.lo) + ", " + fmt(box.hi) +
                       "] holds " + fmt(c.r_pa));
    }
    return {all, "identity r_PA = 1, Z/X measurement r_PA = 0, formula and Monte Carlo n = 1e6"};
}

double bisect(const std::function<double(double)> &f, double lo, double hi) {
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Outcome rate_curves() {
    int violations = 0;
    for (int k = 1; k <= 100; ++k) {
        const double e = 0.11 * k / 100.0;
        const KeyRateReport r = final_rate(1.0 - 2.0 * e, e);
        violations += r.r_final_raw < r.r_bb84 ? 0 : 1;
    }
    const double dqkd =
        bisect([](double e) { return final_rate(1.0 - 2.0 * e, e).r_final_raw; }, 0.01, 0.11);
    const double bb84 = bisect([](double e) { return final_rate(1.0, e).r_bb84; }, 0.01, 0.2);
    const bool ok_grid = violations == 0;
    const bool ok_dqkd = std::abs(dqkd - kDqkdRoot) <= kRootTol;
    const bool ok_bb84 = std::abs(bb84 - kBb84Root) <= kRootTol;
    sub(ok_grid, "1 - h(2e) - h(e) < 1 - 2h(e) at " + std::to_string(100 - violations) +
                     "/100 grid points");
    sub(ok_dqkd, "DQKD zero crossing e = " + fmt_root(dqkd));
    sub(ok_bb84, "BB84 zero crossing e = " + fmt_root(bb84));
    return {ok_grid && ok_dqkd && ok_bb84,
            "crossings DQKD " + fmt_root(dqkd) + ", BB84 " + fmt_root(bb84)};
}

Outcome backward_futility() {
    double worst = backward_indistinguishability(std::nullopt);
    const double direct = worst;
    // Any basis rotation of I/2 is still I/2.
    for (const double theta : {0.3, 1.1, 2.5}) {
        ComplexMatrix rot(2, 2);
        rot << std::cos(theta), -std::sin(theta) * Complex(0, 1), -std::sin(theta) * Complex(0, 1),
            std::cos(theta);
        ComplexMatrix rho = rot * (0.5 * identity(2)) * rot.adjoint();
        rho = 0.5 * (rho + rho.adjoint());
        worst = std::max(worst, backward_indistinguishability(DensityMatrix(rho, {2})));
    }
    return {worst <= kBackwardTol, "D(rho0_B, rho1_B) = " + fmt(direct) + ", max over rotations " +
                                       fmt(worst) + " (tol " + fmt(kBackwardTol) + ")"};
}

std::string result_json(const ProtocolResult &r) {
    Json doc;
    doc["stats"] = to_json(r.stats);
    doc["report"] = to_json(r.report);
    return doc.dump();
}

Outcome simulation_consistency() {
    bool all = true;
    for (const double b : {0.0, 0.05, 0.1}) {
        ProtocolConfig cfg;
        cfg.n = kMonteCarloN;
        cfg.backward_noise = b;
        cfg.seed = 8;
        cfg.permute = true;
        const auto t0 = Clock::now();
        const ProtocolResult r1 = run_protocol(cfg);
        const double t = seconds_since(t0);
        const ProtocolResult r2 = run_protocol(cfg);
        const ProtocolStats &s = r1.stats;
        const bool ok_e = std::abs(s.e.value - b) <= kZ * s.e.se;
        const double truth = 1.0 - binary_entropy(b);
        const Interval box = final_rate_interval(s.xi, s.xi_se, s.e.value, s.e.se, kZ);
        const bool ok_r = box.contains(truth);
        const bool ok_det = result_json(r1) == result_json(r2);
        const bool ok_t = t < 60.0;
        all = all && ok_e && ok_r && ok_det && ok_t;
        sub(ok_e && ok_r && ok_det && ok_t,
            "backward_noise " + fmt(b) + ": e_hat " + fmt(s.e.value) + " +- " + fmt(s.e.se) +
                ", r_final " + fmt(r1.report.r_final) + " 3-se range [" + fmt(box.lo) + ", " +
                fmt(box.hi) + "] vs " + fmt(truth) + ", rerun " +
                (ok_det ? "identical" : "DIFFERENT") + ", " + fmt(t) + " s");
    }
    return {all, "identity attack, n = 1e6, backward_noise in {0, 0.05, 0.1}"};
}

Outcome abort_rule() {
    bool all = true;
    for (const double e : {0.26, 0.3, 0.4, 0.5}) {
        ProtocolConfig cfg;
        cfg.n = kMonteCarloN;
        cfg.attack = named_attack(NamedAttack::Symmetric, e);
        cfg.seed = 9;
        const ProtocolResult r = run_protocol(cfg);
        const double xi = forward_fidelities(cfg.attack).xi;
        all = all && r.report.aborted && r.stats.aborted;
        sub(r.report.aborted, "symmetric e = " + fmt(e) + ": true xi " + fmt(xi) + ", xi_hat " +
                                  fmt(r.stats.xi) + ", aborted " +
                                  (r.report.aborted ? "true" : "false"));
    }
    ProtocolConfig z;
    z.n = kMonteCarloN;
    z.attack = named_attack(NamedAttack::MeasureZ);
    z.seed = 9;
    const ProtocolResult zr = run_protocol(z);
    info("measure_z has true xi exactly 1/2 (on the boundary); xi_hat " + fmt(zr.stats.xi) +
         ", aborted " + (zr.report.aborted ? "true" : "false"));
    return {all, "every configuration with true xi < 1/2 aborts at n = 1e6 (point estimate)"};
}

struct Criterion {
    int id;
    const char *title;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "exact-entropy certification", exact_entropy},
    {2, "spectrum oracle equivalence", spectrum_oracle},
    {3, "insensitivity claims", insensitivity},
    {4, "maximum certification", maximum_certification},
    {5, "special-case rates", special_rates},
    {6, "rate-curve comparison", rate_curves},
    {7, "backward-only attack futility", backward_futility},
    {8, "protocol simulation consistency", simulation_consistency},
    {9, "abort rule", abort_rule},
};

} // namespace

int main(int argc, char **argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.push_back(std::stoi(argv[i]));
    }
    int failures = 0;
    for (const Criterion &c : kCriteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
            continue;
        }
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << " " << c.title
                  << ": " << o.detail << std::endl;
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
