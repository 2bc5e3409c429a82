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

#include <doctest.h>

#include <cmath>
#include <random>

#include "dqkd/attack.hpp"
#include "dqkd/errors.hpp"
#include "dqkd/keyrate.hpp"
#include "dqkd/optimizer.hpp"
#include "dqkd/qstate.hpp"

using namespace dqkd;

namespace {

double ssy(double c0sq, double cppsq) { return 1.0 + binary_entropy(cppsq - (1.0 - c0sq)); }

} // namespace

TEST_CASE("no-attack constraint") {
    const OptResult r = maximize_s_be({1.0, 1.0}, 20000, 0);
    CHECK(r.best_entropy == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.closed_form_entropy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.gap) <= 1e-6);
}

TEST_CASE("c0^2 = 1, c++^2 = 0.75 reaches 1 + h(0.75)") {
    const OptResult r = maximize_s_be({1.0, 0.75}, 20000, 0);
    CHECK(std::abs(r.best_entropy - 1.81127812445913286) <= 1e-5);
    CHECK(std::abs(r.closed_form_entropy - 1.81127812445913286) <= 1e-12);
}

TEST_CASE("random feasible constraints certify the closed form") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const double c0sq = 0.5 + 0.5 * u01(rng);
        const double cppsq = (1.5 - c0sq) + (c0sq - 0.5) * u01(rng);
        const OptResult r = maximize_s_be({c0sq, cppsq}, 20000, static_cast<std::uint64_t>(t));
        CAPTURE(c0sq);
        CAPTURE(cppsq);
        CHECK(std::abs(r.gap) <= 1e-5);
        CHECK(r.closed_form_entropy == doctest::Approx(ssy(c0sq, cppsq)).epsilon(1e-12));
        CHECK(r.best_entropy <= r.closed_form_entropy + 1e-8);
        CHECK_FALSE(r.counterexample);
        CHECK(r.converged);
        CHECK(r.slice_deviation <= 1e-3);
        CHECK(r.constraint_residual <= 1e-9);
        CHECK(is_valid(r.best_params));
    }
}

TEST_CASE("returned maximizer reproduces the constraint fidelities") {
    const OptResult r = maximize_s_be({0.85, 0.8}, 20000, 3);
    const ChannelFidelities f = forward_fidelities(r.best_params);
    CHECK(std::abs(f.f01 - 0.85) <= 1e-9);
    CHECK(std::abs(f.fpm - 0.8) <= 1e-9);
    CHECK(std::abs(entropy_numeric(r.best_params) - r.best_entropy) <= 1e-10);
}

TEST_CASE("seed determinism") {
    const OptResult a = maximize_s_be({0.9, 0.8}, 5000, 42);
    const OptResult b = maximize_s_be({0.9, 0.8}, 5000, 42);
    CHECK(a.best_params == b.best_params);
    CHECK(a.best_entropy == b.best_entropy);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("budget is respected") {
    const OptResult r = maximize_s_be({0.9, 0.8}, 500, 1);
    CHECK(r.iterations <= 500);
    CHECK(r.best_entropy <= r.closed_form_entropy + 1e-8);
}

TEST_CASE("precondition errors") {
    CHECK_THROWS_AS(maximize_s_be({0.7, 0.7}, 1000, 0), BoundaryViolation);
    CHECK_THROWS_AS(maximize_s_be({1.2, 0.9}, 1000, 0), InvalidArgument);
    CHECK_THROWS_AS(maximize_s_be({0.9, 0.9}, 0, 0), InvalidArgument);
}

TEST_CASE("entropy objective oracles") {
    CHECK(entropy_objective(AttackParams{}) == doctest::Approx(1.0));
    CHECK(entropy_objective(named_attack(NamedAttack::MeasureZ)) == doctest::Approx(2.0));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const AttackParams a = sample_symmetric(seed);
        CHECK(std::abs(entropy_objective(a) - entropy_numeric(a)) <= 1e-10);
    }
    const AttackParams asym = sample_valid(4);
    CHECK(entropy_objective(asym) == doctest::Approx(entropy_numeric(asym)));
}

TEST_CASE("nelder-mead minimizes a quadratic") {
    const auto f = [](const std::vector<double> &x) {
        return (x[0] - 1.0) * (x[0] - 1.0) + 2.0 * (x[1] + 0.5) * (x[1] + 0.5);
    };
    const detail::SimplexResult r = detail::nelder_mead(f, {0.0, 0.0}, {0.3, 0.3}, 2000, 1e-14);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(-0.5).epsilon(1e-5));
    CHECK(r.evaluations <= 2000);
}
