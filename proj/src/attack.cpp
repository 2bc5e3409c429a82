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

#include "dqkd/attack.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dqkd/errors.hpp"

namespace dqkd {

namespace {

constexpr double kUnitarityTol = 1e-12;
constexpr double kOverlapSlack = 1e-12;
constexpr int kMaxSamplerIterations = 1'000'000;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32U),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

Ket random_unit(std::mt19937_64 &rng, Eigen::Index dim = 4) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        Ket k(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            k(i) = Complex(re, im);
        }
        const double n = k.norm();
        if (n > 1e-6) {
            return k / n;
        }
    }
}

// Random unit vector orthogonal to the unit vector a.
Ket random_orthogonal(std::mt19937_64 &rng, const Ket &a) {
    for (;;) {
        Ket w = random_unit(rng, a.size());
        w -= a.dot(w) * a;
        const double n = w.norm();
        if (n > 1e-6) {
            return w / n;
        }
    }
}

AttackParams params_from_kets(double c00, double c11, const Ket &e00, const Ket &e01,
                              const Ket &e11, const Ket &e10) {
    AttackParams out;
    out.c00 = c00;
    out.c01 = std::sqrt(std::max(0.0, 1.0 - c00 * c00));
    out.c11 = c11;
    out.c10 = std::sqrt(std::max(0.0, 1.0 - c11 * c11));
    // Eigen's dot is antilinear in its first argument: a.dot(b) = <a|b>.
    out.s = e00.dot(e01);
    out.u = e00.dot(e10);
    out.p = e00.dot(e11);
    out.r = e11.dot(e10);
    out.v = e01.dot(e11);
    out.q = e01.dot(e10);
    return out;
}

// Draws c00, c11 and three free ancillas, then builds |E10> with the
// <E00|E10> that zeroes the unitarity residual.
AttackParams sample_impl(std::uint64_t seed, bool symmetric) {
    std::mt19937_64 rng = make_rng(seed, symmetric ? 2 : 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int it = 0; it < kMaxSamplerIterations; ++it) {
        const double c00 = unif(rng);
        const double c11 = symmetric ? c00 : unif(rng);
        const double c01 = std::sqrt(1.0 - c00 * c00);
        const double c10 = std::sqrt(1.0 - c11 * c11);
        const Ket e00 = random_unit(rng);
        const Ket e01 = random_unit(rng);
        const Ket e11 = random_unit(rng);
        const Complex v = e01.dot(e11);
        // c00 c10 conj(u) + c11 c01 conj(v) = 0
        Complex u;
        if (symmetric) {
            u = -v;
        } else {
            const double denom = c00 * c10;
            if (denom < 1e-9) {
                continue;
            }
            u = -(c11 * c01 / denom) * v;
        }
        if (std::abs(u) > 1.0) {
            continue;
        }
        const Ket w = random_orthogonal(rng, e00);
        const Ket e10 = u * e00 + std::sqrt(1.0 - std::norm(u)) * w;
        return params_from_kets(c00, c11, e00, e01, e11, e10);
    }
    throw InternalError("sample_valid: resampling budget exhausted");
}

} // namespace

OverlapName overlap_from_string(std::string_view name) {
    for (OverlapName n : kOverlapNames) {
        if (to_string(n) == name) {
            return n;
        }
    }
    throw InvalidArgument("unknown overlap name '" + std::string(name) + "'");
}

Complex AttackParams::overlap(OverlapName name) const {
    return const_cast<AttackParams *>(this)->overlap(name);
}

Complex &AttackParams::overlap(OverlapName name) {
    switch (name) {
    case OverlapName::S:
        return s;
    case OverlapName::U:
        return u;
    case OverlapName::P:
        return p;
    case OverlapName::R:
        return r;
    case OverlapName::V:
        return v;
    case OverlapName::Q:
        return q;
    }
    throw InvalidArgument("invalid overlap name");
}

bool AttackParams::symmetric_amplitudes(double tol) const {
    return std::abs(c00 - c11) <= tol && std::abs(c01 - c10) <= tol;
}

ComplexMatrix ancilla_gram(const AttackParams &a) {
    ComplexMatrix g = ComplexMatrix::Identity(4, 4);
    auto set = [&g](int i, int j, Complex value) {
        g(i, j) = value;
        g(j, i) = std::conj(value);
    };
    set(E00, E01, a.s);
    set(E00, E10, a.u);
    set(E00, E11, a.p);
    set(E11, E10, a.r);
    set(E01, E11, a.v);
    set(E01, E10, a.q);
    return g;
}

Complex unitarity_residual(const AttackParams &a) {
    return a.c00 * a.c10 * std::conj(a.u) + a.c11 * a.c01 * std::conj(a.v);
}

const AttackParams &validate(const AttackParams &a) {
    for (double c : {a.c00, a.c01, a.c11, a.c10}) {
        if (!(c >= 0.0 && c <= 1.0 + tol::kNormalization)) {
            throw ValidationError(ValidationKind::Normalization,
                                  "amplitude " + std::to_string(c) + " outside [0, 1]");
        }
    }
    const double n0 = a.c00 * a.c00 + a.c01 * a.c01;
    const double n1 = a.c11 * a.c11 + a.c10 * a.c10;
    if (std::abs(n0 - 1.0) > tol::kNormalization) {
        throw ValidationError(ValidationKind::Normalization,
                              "c00^2 + c01^2 = " + std::to_string(n0));
    }
    if (std::abs(n1 - 1.0) > tol::kNormalization) {
        throw ValidationError(ValidationKind::Normalization,
                              "c11^2 + c10^2 = " + std::to_string(n1));
    }
    for (OverlapName name : kOverlapNames) {
        const Complex z = a.overlap(name);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
            std::abs(z) > 1.0 + kOverlapSlack) {
            throw ValidationError(ValidationKind::OverlapMagnitude,
                                  "|" + std::string(to_string(name)) +
                                      "| = " + std::to_string(std::abs(z)) + " > 1");
        }
    }
    const double residual = std::abs(unitarity_residual(a));
    if (residual > kUnitarityTol) {
        throw ValidationError(ValidationKind::UnitarityConstraint,
                              "|c00 c10 <E10|E00> + c11 c01 <E11|E01>| = " +
                                  std::to_string(residual));
    }
    const Spectrum gram = eig_hermitian(ancilla_gram(a));
    if (gram.eigenvalues.back() < tol::kPsdFloor) {
        throw ValidationError(ValidationKind::GramNotPsd,
                              "min Gram eigenvalue " +
                                  std::to_string(gram.eigenvalues.back()));
    }
    return a;
}

bool is_valid(const AttackParams &params) {
    try {
        validate(params);
        return true;
    } catch (const ValidationError &) {
        return false;
    }
}

AttackParams sample_valid(std::uint64_t seed) { return sample_impl(seed, false); }

AttackParams sample_symmetric(std::uint64_t seed) { return sample_impl(seed, true); }

AttackParams sample_balanced(std::uint64_t seed) {
    std::mt19937_64 rng = make_rng(seed, 3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int it = 0; it < kMaxSamplerIterations; ++it) {
        const double c0 = unif(rng);
        const Ket e00 = random_unit(rng);
        const Ket e01 = random_unit(rng);
        const Ket e11 = random_unit(rng);
        const Complex s = e00.dot(e01);
        const Complex p = e00.dot(e11);
        const Complex u = -e01.dot(e11);

        // Orthonormal frame {e00, b2, b3, b4} with e11 in span{e00, b2}.
        Ket b2 = e11 - p * e00;
        const double n2 = b2.norm();
        if (n2 < 1e-6) {
            continue;
        }
        b2 /= n2;
        Ket b3 = random_orthogonal(rng, e00);
        b3 -= b2.dot(b3) * b2;
        b3.normalize();
        Ket b4 = random_unit(rng);
        for (const Ket *b : std::array<const Ket *, 3>{&e00, &b2, &b3}) {
            b4 -= b->dot(b4) * (*b);
        }
        if (b4.norm() < 1e-6) {
            continue;
        }
        b4.normalize();

        // |E10> = u e00 + x2 b2 + x3 b3 + x4 b4, with <E11|E10> = conj(p) u + n2 x2
        // and Re<E11|E10> = -Re<E00|E01> so that f+ = f-.
        const double re_x2 = (-s.real() - (std::conj(p) * u).real()) / n2;
        double budget = 1.0 - std::norm(u) - re_x2 * re_x2;
        if (budget < 0.0) {
            continue;
        }
        const double im_x2 = (2.0 * unif(rng) - 1.0) * std::sqrt(budget);
        budget -= im_x2 * im_x2;
        const double phase3 = 2.0 * std::numbers::pi * unif(rng);
        const double phase4 = 2.0 * std::numbers::pi * unif(rng);
        const double split = unif(rng);
        const Complex x2(re_x2, im_x2);
        const Complex x3 = std::polar(std::sqrt(budget * split), phase3);
        const Complex x4 = std::polar(std::sqrt(budget * (1.0 - split)), phase4);
        Ket e10 = u * e00 + x2 * b2 + x3 * b3 + x4 * b4;
        e10.normalize();
        AttackParams out = params_from_kets(c0, c0, e00, e01, e11, e10);
        if (is_valid(out)) {
            return out;
        }
    }
    throw InternalError("sample_balanced: resampling budget exhausted");
}

std::array<Ket, 4> realize_ancilla(const AttackParams &params) {
    const Eigensystem es = eigensystem_hermitian(ancilla_gram(params));
    if (es.values.back() < tol::kPsdFloor) {
        throw ValidationError(ValidationKind::GramNotPsd,
                              "min Gram eigenvalue " + std::to_string(es.values.back()));
    }
    // G = V L V^+ = W^+ W with W = sqrt(L) V^+; ket j is column j of W.
    Eigen::VectorXd root(4);
    for (int k = 0; k < 4; ++k) {
        // Rounding-level eigenvalues would contribute sqrt(1e-16) = 1e-8
        // components; treat them as exact zeros.
        const double lam = es.values[static_cast<std::size_t>(k)];
        root(k) = lam > 1e-13 ? std::sqrt(lam) : 0.0;
    }
    const ComplexMatrix w = root.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    // Rotate into the frame where |E00> is exactly basis vector 0: the R
    // factor of W = QR carries the same Gram, and its first column is
    // (r00, 0, 0, 0) with |r00| = 1. A common phase fixes r00 = 1.
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(w);
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    const Complex r00 = r(0, 0);
    if (std::abs(r00) > 0.0) {
        r *= std::conj(r00) / std::abs(r00);
    }
    std::array<Ket, 4> kets;
    for (int j = 0; j < 4; ++j) {
        kets[static_cast<std::size_t>(j)] = r.col(j);
    }
    // The first column is (|r00|, 0, 0, 0) up to rounding; pin it exactly.
    kets[0].setZero();
    kets[0](0) = 1.0;
    return kets;
}

ComplexMatrix build_unitary(const AttackParams &params) {
    validate(params);
    const std::array<Ket, 4> e = realize_ancilla(params);
    const Ket psi0 = params.c00 * kron(basis::zero(), e[E00]) +
                     params.c01 * kron(basis::one(), e[E01]);
    const Ket psi1 = params.c11 * kron(basis::one(), e[E11]) +
                     params.c10 * kron(basis::zero(), e[E10]);

    constexpr int n = 8;
    std::vector<Ket> columns = {psi0, psi1};
    // Greedy Gram-Schmidt: always take the basis vector with the largest
    // component outside the current span.
    while (static_cast<int>(columns.size()) < n) {
        Ket best;
        double best_norm = -1.0;
        for (int k = 0; k < n; ++k) {
            Ket cand = Ket::Zero(n);
            cand(k) = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (const Ket &c : columns) {
                    cand -= c.dot(cand) * c;
                }
            }
            const double norm = cand.norm();
            if (norm > best_norm) {
                best_norm = norm;
                best = cand;
            }
        }
        if (best_norm < 1e-6) {
            throw InternalError("build_unitary: orthonormal completion failed");
        }
        columns.push_back(best / best_norm);
    }

    ComplexMatrix u(n, n);
    // |0>|E> is index 0, |1>|E> is index 4; completion fills the rest.
    u.col(0) = columns[0];
    u.col(4) = columns[1];
    int next = 2;
    for (int col : {1, 2, 3, 5, 6, 7}) {
        u.col(col) = columns[static_cast<std::size_t>(next++)];
    }
    const double err = max_abs_diff(u.adjoint() * u, identity(n));
    if (err > 1e-10) {
        throw InternalError("build_unitary: completed matrix is not unitary (error " +
                            std::to_string(err) + ")");
    }
    return u;
}

ChannelFidelities ChannelFidelities::from(double f0, double f1, double fplus,
                                          double fminus) {
    ChannelFidelities f;
    f.f0 = f0;
    f.f1 = f1;
    f.fplus = fplus;
    f.fminus = fminus;
    f.f01 = 0.5 * (f0 + f1);
    f.fpm = 0.5 * (fplus + fminus);
    f.xi = f.fpm + f.f01 - 1.0;
    return f;
}

ChannelFidelities forward_fidelities(const AttackParams &params) {
    validate(params);
    const ComplexMatrix g = ancilla_gram(params);
    // Slot order E00, E01, E11, E10.
    Eigen::Vector4cd w_plus(params.c00, params.c01, params.c11, params.c10);
    Eigen::Vector4cd w_minus(params.c00, -params.c01, params.c11, -params.c10);
    const double fplus = (w_plus.adjoint() * g * w_plus)(0).real() / 4.0;
    const double fminus = (w_minus.adjoint() * g * w_minus)(0).real() / 4.0;
    return ChannelFidelities::from(params.c00 * params.c00, params.c11 * params.c11,
                                   fplus, fminus);
}

ChannelFidelities simulated_fidelities(const AttackParams &params) {
    const ComplexMatrix u = build_unitary(params);
    Ket ancilla0 = Ket::Zero(4);
    ancilla0(0) = 1.0;
    auto fidelity = [&](const Ket &psi) {
        const Ket out = u * kron(psi, ancilla0);
        // (<psi| (x) I) out
        const Ket projected = std::conj(psi(0)) * out.segment(0, 4) +
                              std::conj(psi(1)) * out.segment(4, 4);
        return projected.squaredNorm();
    };
    return ChannelFidelities::from(fidelity(basis::zero()), fidelity(basis::one()),
                                   fidelity(basis::plus()), fidelity(basis::minus()));
}

NamedAttack named_attack_from_string(std::string_view name) {
    for (NamedAttack a : {NamedAttack::Identity, NamedAttack::MeasureZ,
                          NamedAttack::MeasureX, NamedAttack::Symmetric}) {
        if (to_string(a) == name) {
            return a;
        }
    }
    throw InvalidArgument("unknown named attack '" + std::string(name) + "'");
}

std::string_view to_string(NamedAttack attack) {
    switch (attack) {
    case NamedAttack::Identity:
        return "identity";
    case NamedAttack::MeasureZ:
        return "measure_z";
    case NamedAttack::MeasureX:
        return "measure_x";
    case NamedAttack::Symmetric:
        return "symmetric";
    }
    return "?";
}

AttackParams named_attack(NamedAttack attack, double e) {
    AttackParams a;
    switch (attack) {
    case NamedAttack::Identity:
        // All four ancillas coincide with |E>.
        return a;
    case NamedAttack::MeasureZ:
        // Ancilla records the Z outcome in orthogonal states.
        a.s = a.u = a.p = a.r = a.v = a.q = 0.0;
        return a;
    case NamedAttack::MeasureX: {
        // Measure X and resend: |E00> = |E11> and |E01> = |E10> are the
        // record states (|E+> +- |E->)/sqrt2.
        const double c = std::sqrt(0.5);
        a.c00 = a.c01 = a.c11 = a.c10 = c;
        a.s = a.u = a.r = a.v = 0.0;
        a.p = a.q = 1.0;
        return a;
    }
    case NamedAttack::Symmetric: {
        if (!(e >= 0.0 && e <= 0.5)) {
            throw InvalidArgument("symmetric attack: e = " + std::to_string(e) +
                                  " outside [0, 1/2]");
        }
        // |E01> = |E10> orthogonal to |E00>, |E11> with <E00|E11> chosen so
        // that f+ = f- = 1 - e.
        a.c00 = a.c11 = std::sqrt(1.0 - e);
        a.c01 = a.c10 = std::sqrt(e);
        a.s = a.u = a.r = a.v = 0.0;
        a.q = 1.0;
        a.p = (1.0 - 3.0 * e) / (1.0 - e);
        return a;
    }
    }
    throw InvalidArgument("invalid named attack");
}

} // namespace dqkd
