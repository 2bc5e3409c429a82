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

#include "dqkd/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dqkd/errors.hpp"

namespace dqkd {

namespace basis {

Ket zero() {
    Ket k = Ket::Zero(2);
    k(0) = 1.0;
    return k;
}

Ket one() {
    Ket k = Ket::Zero(2);
    k(1) = 1.0;
    return k;
}

Ket plus() { return (zero() + one()) / std::sqrt(2.0); }

Ket minus() { return (zero() - one()) / std::sqrt(2.0); }

ComplexMatrix encode_y() {
    ComplexMatrix y = ComplexMatrix::Zero(2, 2);
    y(0, 1) = 1.0;
    y(1, 0) = -1.0;
    return y;
}

} // namespace basis

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix outer(const Ket &a, const Ket &b) { return a * b.adjoint(); }

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

Ket kron(const Ket &a, const Ket &b) {
    Ket out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("max_abs_diff: shape mismatch");
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("hermiticity_error: matrix is not square");
    }
    return max_abs_diff(m, m.adjoint());
}

double Spectrum::sum() const {
    return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
}

ComplexMatrix Eigensystem::reconstruct() const {
    Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
    return vectors * lambda.cast<Complex>().asDiagonal() * vectors.adjoint();
}

Eigensystem eigensystem_hermitian(const ComplexMatrix &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InvalidArgument("eig_hermitian: matrix must be square and non-empty");
    }
    const double herr = hermiticity_error(m);
    if (herr > tol::kEigInput) {
        throw InvalidArgument("eig_hermitian: matrix is not Hermitian (max |M - M^+| = " +
                              std::to_string(herr) + ")");
    }
    // Solve on the exactly Hermitian part so both triangles agree.
    const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw InternalError("eig_hermitian: eigensolver did not converge");
    }
    const Eigen::Index n = m.rows();
    Eigensystem out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.resize(n, n);
    // Eigen returns ascending order.
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return out;
}

Spectrum eig_hermitian(const ComplexMatrix &m) {
    return Spectrum{eigensystem_hermitian(m).values};
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, std::vector<int> dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
        throw InvalidArgument("DensityMatrix: matrix must be square and non-empty");
    }
    if (dims_.empty()) {
        dims_ = {static_cast<int>(matrix_.rows())};
    }
    long long product = 1;
    for (int d : dims_) {
        if (d <= 0) {
            throw InvalidArgument("DensityMatrix: subsystem dimensions must be positive");
        }
        product *= d;
    }
    if (product != matrix_.rows()) {
        throw InvalidArgument("DensityMatrix: dims do not multiply to the matrix dimension");
    }
    const double herr = hermiticity_error(matrix_);
    if (herr > tol::kHermitian) {
        throw InvalidArgument("DensityMatrix: not Hermitian (max |M - M^+| = " +
                              std::to_string(herr) + ")");
    }
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol::kTrace) {
        throw InvalidArgument("DensityMatrix: trace " + std::to_string(tr) + " != 1");
    }
    const Spectrum s = eig_hermitian(matrix_);
    if (s.eigenvalues.back() < tol::kPsdFloor) {
        throw InvalidArgument("DensityMatrix: not positive semidefinite (min eigenvalue " +
                              std::to_string(s.eigenvalues.back()) + ")");
    }
}

DensityMatrix DensityMatrix::pure(const Ket &psi, std::vector<int> dims) {
    const double norm2 = psi.squaredNorm();
    if (std::abs(norm2 - 1.0) > tol::kNormalization) {
        throw InvalidArgument("DensityMatrix::pure: ket is not normalized");
    }
    return DensityMatrix(outer(psi, psi), std::move(dims));
}

Spectrum DensityMatrix::spectrum() const {
    Spectrum s = eig_hermitian(matrix_);
    for (double &v : s.eigenvalues) {
        v = std::max(v, 0.0);
    }
    return s;
}

namespace {

// Digits of a big-endian composite index.
std::vector<int> split_index(Eigen::Index index, const std::vector<int> &dims) {
    std::vector<int> digits(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = static_cast<int>(index % dims[k]);
        index /= dims[k];
    }
    return digits;
}

} // namespace

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep) {
    const std::vector<int> &dims = rho.dims();
    const int nsub = static_cast<int>(dims.size());
    if (keep.empty()) {
        throw InvalidArgument("partial_trace: keep must be non-empty");
    }
    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) {
        if (k < 0 || k >= nsub) {
            throw InvalidArgument("partial_trace: subsystem index " + std::to_string(k) +
                                  " out of range");
        }
        if (kept[static_cast<std::size_t>(k)]) {
            throw InvalidArgument("partial_trace: duplicate subsystem index " +
                                  std::to_string(k));
        }
        kept[static_cast<std::size_t>(k)] = true;
    }

    std::vector<int> out_dims;
    std::vector<int> traced_dims;
    for (int k = 0; k < nsub; ++k) {
        (kept[static_cast<std::size_t>(k)] ? out_dims : traced_dims)
            .push_back(dims[static_cast<std::size_t>(k)]);
    }
    Eigen::Index out_n = 1;
    for (int d : out_dims) {
        out_n *= d;
    }

    // Map each full index to its (kept, traced) index pair, then sum the
    // entries whose traced parts coincide.
    const Eigen::Index full_n = rho.dim();
    std::vector<Eigen::Index> kept_index(static_cast<std::size_t>(full_n));
    std::vector<Eigen::Index> traced_index(static_cast<std::size_t>(full_n));
    for (Eigen::Index i = 0; i < full_n; ++i) {
        const std::vector<int> digits = split_index(i, dims);
        Eigen::Index ki = 0;
        Eigen::Index ti = 0;
        for (int k = 0; k < nsub; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            if (kept[uk]) {
                ki = ki * dims[uk] + digits[uk];
            } else {
                ti = ti * dims[uk] + digits[uk];
            }
        }
        kept_index[static_cast<std::size_t>(i)] = ki;
        traced_index[static_cast<std::size_t>(i)] = ti;
    }

    ComplexMatrix out = ComplexMatrix::Zero(out_n, out_n);
    const ComplexMatrix &m = rho.matrix();
    for (Eigen::Index i = 0; i < full_n; ++i) {
        for (Eigen::Index j = 0; j < full_n; ++j) {
            if (traced_index[static_cast<std::size_t>(i)] ==
                traced_index[static_cast<std::size_t>(j)]) {
                out(kept_index[static_cast<std::size_t>(i)],
                    kept_index[static_cast<std::size_t>(j)]) += m(i, j);
            }
        }
    }
    return DensityMatrix(std::move(out), std::move(out_dims));
}

double entropy_bits(const Spectrum &spectrum) {
    double s = 0.0;
    for (double lambda : spectrum.eigenvalues) {
        if (lambda > tol::kEntropyCutoff) {
            s -= lambda * std::log2(lambda);
        }
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix &rho) {
    return entropy_bits(rho.spectrum());
}

double binary_entropy(double x) {
    constexpr double slack = 1e-12;
    if (!(x >= -slack && x <= 1.0 + slack)) {
        throw InvalidArgument("binary_entropy: argument " + std::to_string(x) +
                              " outside [0, 1]");
    }
    x = std::clamp(x, 0.0, 1.0);
    double h = 0.0;
    if (x > 0.0) {
        h -= x * std::log2(x);
    }
    if (x < 1.0) {
        h -= (1.0 - x) * std::log2(1.0 - x);
    }
    return h;
}

double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.dim() != b.dim()) {
        throw InvalidArgument("trace_distance: dimension mismatch");
    }
    const Spectrum s = eig_hermitian(a.matrix() - b.matrix());
    double sum = 0.0;
    for (double v : s.eigenvalues) {
        sum += std::abs(v);
    }
    return 0.5 * sum;
}

} // namespace dqkd
