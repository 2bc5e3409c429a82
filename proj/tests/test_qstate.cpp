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

#include <array>
#include <cmath>
#include <random>

#include "dqkd/attack.hpp"
#include "dqkd/errors.hpp"
#include "dqkd/keyrate.hpp"
#include "dqkd/qstate.hpp"

using namespace dqkd;

namespace {

ComplexMatrix random_unitary(std::mt19937_64 &rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ();
}

DensityMatrix random_state(std::mt19937_64 &rng, Eigen::Index n, std::vector<int> dims) {
    std::normal_distribution<double> g;
    ComplexMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(rho, std::move(dims));
}

} // namespace

TEST_CASE("kron of identities and basis projectors") {
    CHECK(max_abs_diff(kron(identity(2), identity(2)), identity(4)) == 0.0);

    const ComplexMatrix m =
        kron(outer(basis::zero(), basis::zero()), outer(basis::one(), basis::one()));
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(1, 1) = 1.0;
    CHECK(max_abs_diff(m, expected) == 0.0);
}

TEST_CASE("Y (x) I on |00> gives -|10>") {
    const Ket in = kron(basis::zero(), basis::zero());
    const Ket out = kron(basis::encode_y(), identity(2)) * in;
    const Ket expected = -kron(basis::one(), basis::zero());
    CHECK((out - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("Y maps the X basis as |+> -> |->, |-> -> -|+>") {
    const ComplexMatrix y = basis::encode_y();
    CHECK((y * basis::plus() - basis::minus()).norm() < 1e-15);
    CHECK((y * basis::minus() + basis::plus()).norm() < 1e-15);
}

TEST_CASE("DensityMatrix rejects invalid matrices") {
    ComplexMatrix m = 0.5 * identity(2);
    CHECK_NOTHROW(DensityMatrix(m, {2}));

    ComplexMatrix not_herm = m;
    not_herm(0, 1) = Complex(0.1, 0.0);
    CHECK_THROWS_AS(DensityMatrix(not_herm, {2}), InvalidArgument);

    CHECK_THROWS_AS(DensityMatrix(identity(2), {2}), InvalidArgument);

    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(neg, {2}), InvalidArgument);

    CHECK_THROWS_AS(DensityMatrix(m, {3}), InvalidArgument);
}

TEST_CASE("eigenvalues in [-1e-10, 0) are clamped, not rejected") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0 + 5e-11;
    m(1, 1) = -5e-11;
    const DensityMatrix rho(m, {2});
    const Spectrum s = rho.spectrum();
    CHECK(s.eigenvalues.back() == 0.0);
    CHECK(von_neumann_entropy(rho) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("partial trace examples") {
    Ket bell = kron(basis::zero(), basis::zero()) + kron(basis::one(), basis::one());
    bell /= std::sqrt(2.0);
    const DensityMatrix rho = DensityMatrix::pure(bell, {2, 2});
    const std::array<int, 1> keep_a{0};
    CHECK(max_abs_diff(partial_trace(rho, keep_a).matrix(), 0.5 * identity(2)) < 1e-15);

    std::mt19937_64 rng(11);
    const DensityMatrix ra = random_state(rng, 2, {2});
    const DensityMatrix rb = random_state(rng, 4, {4});
    const DensityMatrix prod(kron(ra.matrix(), rb.matrix()), {2, 4});
    const std::array<int, 1> keep_b{1};
    CHECK(max_abs_diff(partial_trace(prod, keep_b).matrix(), rb.matrix()) < 1e-14);
    CHECK(max_abs_diff(partial_trace(prod, keep_a).matrix(), ra.matrix()) < 1e-14);
}

TEST_CASE("partial trace keeps subsystem order and rejects bad indices") {
    std::mt19937_64 rng(5);
    const DensityMatrix a = random_state(rng, 2, {2});
    const DensityMatrix b = random_state(rng, 2, {2});
    const DensityMatrix c = random_state(rng, 4, {4});
    const DensityMatrix abc(kron(kron(a.matrix(), b.matrix()), c.matrix()), {2, 2, 4});
    const std::array<int, 2> keep{0, 2};
    CHECK(max_abs_diff(partial_trace(abc, keep).matrix(), kron(a.matrix(), c.matrix())) < 1e-14);

    const std::array<int, 0> none{};
    CHECK_THROWS_AS(partial_trace(abc, none), InvalidArgument);
    const std::array<int, 1> out_of_range{3};
    CHECK_THROWS_AS(partial_trace(abc, out_of_range), InvalidArgument);
    const std::array<int, 2> dup{1, 1};
    CHECK_THROWS_AS(partial_trace(abc, dup), InvalidArgument);
}

TEST_CASE("partial trace is trace preserving") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 50; ++t) {
        const DensityMatrix rho = random_state(rng, 16, {2, 2, 4});
        for (const std::vector<int> &keep :
             {std::vector<int>{0}, std::vector<int>{1, 2}, std::vector<int>{2}}) {
            CHECK(std::abs(partial_trace(rho, keep).trace() - rho.trace()) <= 1e-12);
        }
    }
}

TEST_CASE("tr_A of rho_ABE equals the direct branch mixture") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const JointStateBundle j = build_rho_abe(sample_valid(seed));
        const std::array<int, 2> keep{1, 2};
        const ComplexMatrix direct = 0.5 * (j.rho_be_0.matrix() + j.rho_be_1.matrix());
        CHECK(max_abs_diff(partial_trace(j.rho_abe, keep).matrix(), direct) <= 1e-12);
    }
}

TEST_CASE("spectra of simple states") {
    const Spectrum mixed = DensityMatrix(0.5 * identity(2), {2}).spectrum();
    CHECK(mixed.eigenvalues[0] == doctest::Approx(0.5));
    CHECK(mixed.eigenvalues[1] == doctest::Approx(0.5));

    const Spectrum pure = DensityMatrix::pure(basis::plus(), {2}).spectrum();
    CHECK(pure.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(std::abs(pure.eigenvalues[1]) < 1e-15);
}

TEST_CASE("eig_hermitian sum equals trace and rejects non-Hermitian input") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const DensityMatrix rho = random_state(rng, 8, {8});
        const Spectrum s = eig_hermitian(rho.matrix());
        CHECK(std::abs(s.sum() - rho.trace()) <= 1e-10);
        CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    }
    ComplexMatrix m = identity(2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(eig_hermitian(m), InvalidArgument);
}

TEST_CASE("eigensystem reconstructs its input") {
    std::mt19937_64 rng(8);
    const DensityMatrix rho = random_state(rng, 6, {6});
    const Eigensystem es = eigensystem_hermitian(rho.matrix());
    CHECK(max_abs_diff(es.reconstruct(), rho.matrix()) < 1e-13);
}

TEST_CASE("von Neumann entropy examples") {
    CHECK(von_neumann_entropy(DensityMatrix(0.5 * identity(2), {2})) == doctest::Approx(1.0));
    CHECK(von_neumann_entropy(DensityMatrix(0.25 * identity(4), {4})) == doctest::Approx(2.0));
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
        Ket psi(8);
        for (Eigen::Index i = 0; i < 8; ++i) {
            psi(i) = Complex(g(rng), g(rng));
        }
        psi.normalize();
        CHECK(std::abs(von_neumann_entropy(DensityMatrix::pure(psi, {8}))) < 1e-9);
    }
}

TEST_CASE("entropy is basis independent") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 100; ++t) {
        const DensityMatrix rho = random_state(rng, 8, {2, 4});
        const ComplexMatrix w = random_unitary(rng, 8);
        ComplexMatrix rotated = w * rho.matrix() * w.adjoint();
        rotated = 0.5 * (rotated + rotated.adjoint());
        const DensityMatrix rho2(rotated, {2, 4});
        CHECK(std::abs(von_neumann_entropy(rho) - von_neumann_entropy(rho2)) <= 1e-9);
    }
}

TEST_CASE("binary entropy values and symmetry") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    // Independent high-precision evaluation of -x log2 x - (1-x) log2(1-x).
    CHECK(std::abs(binary_entropy(0.05) - 0.286396957115956128766) < 1e-15);
    for (int k = 1; k < 1000; ++k) {
        const double x = k / 1000.0;
        CHECK(std::abs(binary_entropy(x) - binary_entropy(1.0 - x)) <= 1e-12);
    }
    CHECK_THROWS_AS(binary_entropy(-0.1), InvalidArgument);
    CHECK_THROWS_AS(binary_entropy(1.1), InvalidArgument);
}

TEST_CASE("trace distance of orthogonal and identical states") {
    const DensityMatrix z0 = DensityMatrix::pure(basis::zero(), {2});
    const DensityMatrix z1 = DensityMatrix::pure(basis::one(), {2});
    const DensityMatrix xp = DensityMatrix::pure(basis::plus(), {2});
    CHECK(trace_distance(z0, z1) == doctest::Approx(1.0));
    CHECK(trace_distance(z0, z0) == doctest::Approx(0.0));
    CHECK(trace_distance(z0, xp) == doctest::Approx(std::sqrt(0.5)));
}
