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
 * Eve's collective forward-channel attack.
 *
 * The attack is canonically the tuple of real transition amplitudes and the
 * six ancilla overlaps:
 *
 *     U|0>|E> = c00 |0>|E00> + c01 |1>|E01>
 *     U|1>|E> = c11 |1>|E11> + c10 |0>|E10>
 *
 * with s = <E00|E01>, u = <E00|E10>, p = <E00|E11>, r = <E11|E10>,
 * v = <E01|E11>, q = <E01|E10>. Bras are antilinear. Explicit ancilla kets
 * and the 8x8 unitary are views derived from the tuple.
 *
 * Amplitude phases are absorbed into the Z-basis ancillas, so every c_ij is
 * a non-negative real. The X-basis ancillas |E_{+-}> etc. are not
 * independent; they are fixed by the Z-basis ones.
 */

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "dqkd/qstate.hpp"

namespace dqkd {

enum class OverlapName { S, U, P, R, V, Q };

inline constexpr std::array<OverlapName, 6> kOverlapNames = {
    OverlapName::S, OverlapName::U, OverlapName::P,
    OverlapName::R, OverlapName::V, OverlapName::Q};

constexpr std::string_view to_string(OverlapName name) {
    switch (name) {
    case OverlapName::S:
        return "s";
    case OverlapName::U:
        return "u";
    case OverlapName::P:
        return "p";
    case OverlapName::R:
        return "r";
    case OverlapName::V:
        return "v";
    case OverlapName::Q:
        return "q";
    }
    return "?";
}

/// Throws InvalidArgument for anything but one of s,u,p,r,v,q.
OverlapName overlap_from_string(std::string_view name);

struct AttackParams {
    double c00 = 1.0;
    double c01 = 0.0;
    double c11 = 1.0;
    double c10 = 0.0;

    Complex s{1.0, 0.0}; ///< <E00|E01>
    Complex u{1.0, 0.0}; ///< <E00|E10>
    Complex p{1.0, 0.0}; ///< <E00|E11>
    Complex r{1.0, 0.0}; ///< <E11|E10>
    Complex v{1.0, 0.0}; ///< <E01|E11>
    Complex q{1.0, 0.0}; ///< <E01|E10>

    [[nodiscard]] Complex overlap(OverlapName name) const;
    Complex &overlap(OverlapName name);

    /// c00 == c11 (and hence c01 == c10) within tol.
    [[nodiscard]] bool symmetric_amplitudes(double tol = 1e-9) const;

    bool operator==(const AttackParams &) const = default;
};

/// Ancilla index order used by Gram matrices and realized kets.
enum AncillaSlot : int { E00 = 0, E01 = 1, E11 = 2, E10 = 3 };

/// 4x4 Gram matrix G(i, j) = <E_i|E_j> in AncillaSlot order.
ComplexMatrix ancilla_gram(const AttackParams &params);

/**
 * Residual of the orthogonality of the two forward outputs,
 * <U 1E | U 0E> = c00 c10 <E10|E00> + c11 c01 <E11|E01>.
 * Must vanish for U to be unitary.
 */
Complex unitarity_residual(const AttackParams &params);

/// Returns params unchanged or throws ValidationError naming the first
/// violated invariant.
const AttackParams &validate(const AttackParams &params);

[[nodiscard]] bool is_valid(const AttackParams &params);

/// Random valid attack; c00, c11 uniform in [0, 1]. Deterministic per seed.
AttackParams sample_valid(std::uint64_t seed);

/// As sample_valid but with c00 == c11.
AttackParams sample_symmetric(std::uint64_t seed);

/// Symmetric attack that additionally has f+ == f- (s0 + r0 == 0).
AttackParams sample_balanced(std::uint64_t seed);

/// Four unit kets in C^4 whose inner products reproduce the overlaps.
std::array<Ket, 4> realize_ancilla(const AttackParams &params);

/**
 * 8x8 unitary on qubit (x) ancilla with |E> = ancilla basis vector 0.
 * Columns for |0>|E> and |1>|E> are the forward outputs; the rest are an
 * orthonormal completion.
 */
ComplexMatrix build_unitary(const AttackParams &params);

struct ChannelFidelities {
    double f0 = 1.0;
    double f1 = 1.0;
    double fplus = 1.0;
    double fminus = 1.0;
    double f01 = 1.0;
    double fpm = 1.0;
    double xi = 1.0;

    /// Fills the averages and xi = fpm + f01 - 1.
    static ChannelFidelities from(double f0, double f1, double fplus, double fminus);
};

/// Fidelities from the amplitudes and Gram matrix, no ancilla realization.
ChannelFidelities forward_fidelities(const AttackParams &params);

/// Same quantities by sending |0>,|1>,|+>,|-> through build_unitary.
ChannelFidelities simulated_fidelities(const AttackParams &params);

enum class NamedAttack { Identity, MeasureZ, MeasureX, Symmetric };

/// Throws InvalidArgument for an unknown name.
NamedAttack named_attack_from_string(std::string_view name);
std::string_view to_string(NamedAttack attack);

/**
 * Canonical attacks. symmetric(e) is Eve's optimal attack with
 * f01 = fpm = 1 - e (so xi = 1 - 2e); e must lie in [0, 1/2].
 */
AttackParams named_attack(NamedAttack attack, double e = 0.0);

} // namespace dqkd
