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
 * Small dense complex linear algebra for the joint qubit/ancilla states.
 *
 * Tensor factors are always ordered A (x) B (x) E and composite indices are
 * big-endian: for dims {d0, d1, d2} the basis state |i0 i1 i2> has index
 * (i0 * d1 + i1) * d2 + i2. The largest space used is 2 * 2 * 4 = 16.
 */

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dqkd {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Ket = Eigen::VectorXcd;

namespace tol {
inline constexpr double kNormalization = 1e-12;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
/// Eigenvalues in [kPsdFloor, 0) are rounding noise and clamp to zero.
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kEntropyCutoff = 1e-12;
/// Input Hermiticity accepted by eig_hermitian.
inline constexpr double kEigInput = 1e-10;
} // namespace tol

namespace basis {
Ket zero();
Ket one();
Ket plus();
Ket minus();
/// Alice's bit-1 encoding Y = |0><1| - |1><0|.
ComplexMatrix encode_y();
} // namespace basis

ComplexMatrix identity(Eigen::Index n);

/// |a><b|
ComplexMatrix outer(const Ket &a, const Ket &b);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
Ket kron(const Ket &a, const Ket &b);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

/// Largest entrywise modulus of m - m^dagger.
double hermiticity_error(const ComplexMatrix &m);

/// Eigenvalues sorted descending.
struct Spectrum {
    std::vector<double> eigenvalues;

    [[nodiscard]] double sum() const;
};

/// Eigenpairs sorted by descending eigenvalue; column k of vectors pairs
/// with values[k].
struct Eigensystem {
    std::vector<double> values;
    ComplexMatrix vectors;

    [[nodiscard]] ComplexMatrix reconstruct() const;
};

/// Throws InvalidArgument when m is not Hermitian within tol::kEigInput.
Spectrum eig_hermitian(const ComplexMatrix &m);
Eigensystem eigensystem_hermitian(const ComplexMatrix &m);

/**
 * A validated density operator on a composite space.
 *
 * Construction enforces Hermiticity and unit trace within 1e-12 and
 * eigenvalues >= -1e-10; anything else throws InvalidArgument.
 */
class DensityMatrix {
  public:
    DensityMatrix(ComplexMatrix matrix, std::vector<int> dims);

    static DensityMatrix pure(const Ket &psi, std::vector<int> dims);

    [[nodiscard]] const ComplexMatrix &matrix() const noexcept {
        return matrix_;
    }
    [[nodiscard]] const std::vector<int> &dims() const noexcept {
        return dims_;
    }
    [[nodiscard]] Eigen::Index dim() const noexcept { return matrix_.rows(); }
    [[nodiscard]] double trace() const { return matrix_.trace().real(); }

    /// Spectrum with rounding-noise negatives clamped to zero.
    [[nodiscard]] Spectrum spectrum() const;

  private:
    ComplexMatrix matrix_;
    std::vector<int> dims_;
};

/// Reduced state on the subsystems listed in keep (indices into dims).
/// Kept subsystems retain their original relative order.
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep);

/// Shannon entropy in bits of a probability spectrum; entries <= 1e-12
/// contribute nothing.
double entropy_bits(const Spectrum &spectrum);

double von_neumann_entropy(const DensityMatrix &rho);

/// h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

/// (1/2) || a - b ||_1
double trace_distance(const DensityMatrix &a, const DensityMatrix &b);

} // namespace dqkd
