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

#include "dqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dqkd/errors.hpp"

namespace dqkd {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kSymmetryTol = 1e-9;
constexpr double kRangeSlack = 1e-12;

ComplexMatrix y_on_qubit() { return kron(basis::encode_y(), identity(4)); }

BeSpectrumClosedForm from_deltas(double d1, double d2) {
    BeSpectrumClosedForm out;
    out.delta1 = d1;
    out.delta2 = d2;
    out.lambda = {0.25 * (1.0 + d1 + d2), 0.25 * (1.0 + d1 - d2),
                  0.25 * (1.0 - d1 - d2), 0.25 * (1.0 - d1 + d2)};
    return out;
}

} // namespace

JointStateBundle build_rho_abe(const AttackParams &params) {
    const ComplexMatrix u = build_unitary(params);
    ComplexMatrix ancilla0 = ComplexMatrix::Zero(4, 4);
    ancilla0(0, 0) = 1.0;
    const ComplexMatrix rho_in = kron(0.5 * identity(2), ancilla0);
    const ComplexMatrix rho0 = u * rho_in * u.adjoint();
    const ComplexMatrix y = y_on_qubit();
    const ComplexMatrix rho1 = y * rho0 * y.adjoint();

    ComplexMatrix proj0 = ComplexMatrix::Zero(2, 2);
    ComplexMatrix proj1 = ComplexMatrix::Zero(2, 2);
    proj0(0, 0) = 1.0;
    proj1(1, 1) = 1.0;
    DensityMatrix rho_abe(0.5 * kron(proj0, rho0) + 0.5 * kron(proj1, rho1), {2, 2, 4});
    const std::array<int, 2> keep_be = {1, 2};
    DensityMatrix rho_be = partial_trace(rho_abe, keep_be);
    return JointStateBundle{std::move(rho_abe), std::move(rho_be),
                            DensityMatrix(rho0, {2, 4}), DensityMatrix(rho1, {2, 4})};
}

double backward_indistinguishability(const DensityMatrix &rho_b) {
    if (rho_b.dim() != 2) {
        throw InvalidArgument("backward_indistinguishability: expected a qubit state");
    }
    const ComplexMatrix y = basis::encode_y();
    const DensityMatrix encoded1(y * rho_b.matrix() * y.adjoint(), {2});
    return trace_distance(rho_b, encoded1);
}

double backward_indistinguishability(const std::optional<AttackParams> &params) {
    if (!params) {
        return backward_indistinguishability(DensityMatrix(0.5 * identity(2), {2}));
    }
    const JointStateBundle bundle = build_rho_abe(*params);
    return trace_distance(bundle.rho_be_0, bundle.rho_be_1);
}

std::array<double, 4> BeSpectrumClosedForm::sorted() const {
    std::array<double, 4> out = lambda;
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

BeSpectrumClosedForm be_spectrum_block_form(const AttackParams &a) {
    validate(a);
    const Complex b = a.c00 * a.c11 * a.p - a.c01 * a.c10 * a.q;
    const double alpha = a.c00 * a.c01 * a.s.imag();
    const double delta = a.c10 * a.c11 * a.r.imag();
    const double d1 = std::sqrt(std::norm(b) + (alpha + delta) * (alpha + delta));
    const double d2 = std::abs(alpha - delta);
    return from_deltas(d1, d2);
}

BeSpectrumClosedForm be_spectrum_closed_form(const AttackParams &a) {
    if (!a.symmetric_amplitudes(kSymmetryTol)) {
        throw NotApplicable(
            "be_spectrum_closed_form: requires c00 == c11; symmetrize the "
            "fidelities and use xi_from_fidelities instead");
    }
    validate(a);
    const double c0sq = a.c00 * a.c00;
    const double c1sq = a.c01 * a.c01;
    const double c0c1 = a.c00 * a.c01;
    const Complex b = c0sq * a.p - c1sq * a.q;
    const double sum = a.s.imag() + a.r.imag();
    const double d1 = std::sqrt(std::norm(b) + c0c1 * c0c1 * sum * sum);
    const double d2 = c0c1 * std::abs(a.s.imag() - a.r.imag());
    return from_deltas(d1, d2);
}

double s_be_max(double c0sq, double c1sq, double cppsq) {
    for (double x : {c0sq, c1sq, cppsq}) {
        if (!(x >= -kRangeSlack && x <= 1.0 + kRangeSlack)) {
            throw InvalidArgument("s_be_max: fidelity " + std::to_string(x) +
                                  " outside [0, 1]");
        }
    }
    const double xi = cppsq - c1sq;
    if (xi < 0.5 - kBoundaryTol) {
        throw BoundaryViolation("s_be_max: c++^2 - c1^2 = " + std::to_string(xi) +
                                " < 1/2");
    }
    const double a = std::clamp(2.0 * xi, 0.0, 2.0);
    const double b = 2.0 - a;
    auto term = [](double x) { return x > 0.0 ? -(x / 2.0) * std::log2(x / 4.0) : 0.0; };
    return term(a) + term(b);
}

double xi_from_fidelities(const ChannelFidelities &f) {
    for (double x : {f.f0, f.f1, f.fplus, f.fminus}) {
        if (!(x >= -kRangeSlack && x <= 1.0 + kRangeSlack)) {
            throw InvalidArgument("xi_from_fidelities: fidelity " + std::to_string(x) +
                                  " outside [0, 1]");
        }
    }
    const double f01 = 0.5 * (f.f0 + f.f1);
    const double fpm = 0.5 * (f.fplus + f.fminus);
    return fpm + f01 - 1.0;
}

bool boundary_satisfied(double xi) { return xi >= 0.5 - kBoundaryTol; }

KeyRateReport final_rate(double xi, double e) {
    if (!(e >= -kRangeSlack && e <= 0.5 + kRangeSlack)) {
        throw InvalidArgument("final_rate: e = " + std::to_string(e) +
                              " outside [0, 1/2]");
    }
    if (!(xi >= -1.0 - kRangeSlack && xi <= 1.0 + kRangeSlack)) {
        throw InvalidArgument("final_rate: xi = " + std::to_string(xi) +
                              " outside [-1, 1]");
    }
    e = std::clamp(e, 0.0, 0.5);
    xi = std::clamp(xi, -1.0, 1.0);

    KeyRateReport rep;
    rep.xi = xi;
    rep.e = e;
    const double he = binary_entropy(e);
    rep.r_bb84 = 1.0 - 2.0 * he;
    rep.r_final_raw = xi >= 0.0 ? 1.0 - binary_entropy(xi) - he
                                : std::numeric_limits<double>::quiet_NaN();
    rep.boundary_ok = boundary_satisfied(xi);
    rep.aborted = !rep.boundary_ok;
    if (rep.boundary_ok) {
        rep.r_pa = 1.0 - binary_entropy(xi);
        rep.r_final = std::max(0.0, rep.r_final_raw);
    } else {
        rep.r_pa = 0.0;
        rep.r_final = 0.0;
    }
    return rep;
}

} // namespace dqkd
