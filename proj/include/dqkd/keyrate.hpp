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
 * Joint classical-quantum states after Alice's encoding, their spectra,
 * and the privacy-amplification and final key rates.
 *
 * After the forward attack and Alice's I/Y encoding with probability 1/2
 * each,
 *
 *     rho_ABE = 1/2 |0><0| (x) rho0_BE + 1/2 |1><1| (x) rho1_BE,
 *     rho1_BE = (Y (x) I) rho0_BE (Y (x) I)^+,
 *
 * with rho0_BE = U (I/2 (x) |E><E|) U^+.
 */

#pragma once

#include <array>
#include <optional>

#include "dqkd/attack.hpp"
#include "dqkd/qstate.hpp"

namespace dqkd {

struct JointStateBundle {
    DensityMatrix rho_abe; ///< dims {2, 2, 4}
    DensityMatrix rho_be;  ///< dims {2, 4}
    DensityMatrix rho_be_0;
    DensityMatrix rho_be_1;
};

JointStateBundle build_rho_abe(const AttackParams &params);

/**
 * Trace distance between Alice's two encoded qubit states when Eve only
 * touches the backward channel: rho_B is I-encoded vs Y-encoded.
 */
double backward_indistinguishability(const DensityMatrix &rho_b);

/// With no attack this uses rho_B = I/2. With a forward attack it returns
/// the distance between the two joint branch states rho0_BE and rho1_BE.
double backward_indistinguishability(const std::optional<AttackParams> &params);

/**
 * Nonzero spectrum of rho_BE in closed form:
 *
 *     lambda4 = (1 + D1 + D2)/4    lambda5 = (1 + D1 - D2)/4
 *     lambda6 = (1 - D1 - D2)/4    lambda7 = (1 - D1 + D2)/4
 *
 * where, for c0 = c00 = c11 and c1 = c01 = c10,
 *
 *     D1 = sqrt(|c0^2 p - c1^2 q|^2 + c0^2 c1^2 (s1 + r1)^2)
 *     D2 = c0 c1 |s1 - r1|.
 *
 * D1 +- D2 are the singular values of the 2x2 off-diagonal block of the
 * Gram matrix of {psi0, psi1, Y psi0, Y psi1}; u, v, s0 and r0 drop out.
 */
struct BeSpectrumClosedForm {
    double delta1 = 0.0;
    double delta2 = 0.0;
    std::array<double, 4> lambda{}; ///< lambda4..lambda7 in that order

    /// lambda4..lambda7 sorted descending.
    [[nodiscard]] std::array<double, 4> sorted() const;
};

/// Throws NotApplicable when |c00 - c11| > 1e-9.
BeSpectrumClosedForm be_spectrum_closed_form(const AttackParams &params);

/**
 * The same block-singular-value form without the symmetry guard:
 * D1 = sqrt(|c00 c11 p - c01 c10 q|^2 + (c00 c01 s1 + c10 c11 r1)^2),
 * D2 = |c00 c01 s1 - c10 c11 r1|. Reduces to be_spectrum_closed_form when
 * the amplitudes are symmetric.
 */
BeSpectrumClosedForm be_spectrum_block_form(const AttackParams &params);

/**
 * Eve's maximal entropy S(rho_BE) given verified c0^2, c1^2 and c++^2:
 * 1 + h(xi) with xi = c++^2 - c1^2. Throws BoundaryViolation when
 * xi < 1/2.
 */
double s_be_max(double c0sq, double c1sq, double cppsq);

/// xi = f_{+,-} + f_{0,1} - 1 from the averaged fidelities.
double xi_from_fidelities(const ChannelFidelities &f);

struct KeyRateReport {
    double xi = 1.0;
    double e = 0.0;
    double r_pa = 1.0;
    double r_final = 1.0;
    /// 1 - h(xi) - h(e) before clamping; NaN when xi < 0.
    double r_final_raw = 1.0;
    double r_bb84 = 1.0;
    bool boundary_ok = true;
    bool aborted = false;
};

/// Admissibility threshold xi >= 1/2, with 1e-12 slack for rounding.
[[nodiscard]] bool boundary_satisfied(double xi);

/**
 * r = max(0, 1 - h(xi) - h(e)) when xi >= 1/2; otherwise aborted with
 * r_pa = r_final = 0. Requires e in [0, 1/2] and xi in [-1, 1].
 */
KeyRateReport final_rate(double xi, double e);

} // namespace dqkd
