// Copyright 2026 povmtool authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense Hermitian linear algebra used by every other module: a Hermitian
// carrier type, deterministic eigendecomposition, PSD membership, support
// isometries, and Frobenius distances. Everything here is a pure function of
// its inputs; identical input bits give identical output bits.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace povm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Default tolerances. PSD and rank cutoffs are relative; double-precision
// eigensolvers deliver ~1e-13 relative accuracy at the dimensions in scope
// (d <= ~100), so these leave one to three orders of headroom.
namespace tol {
inline constexpr double psd = 1e-10;        // relative PSD slack
inline constexpr double rank_cut = 1e-9;    // support cutoff, relative to largest eigenvalue
inline constexpr double orth = 1e-12;       // isometry residual
inline constexpr double drop = 1e-12;       // effects below this trace are pruned
inline constexpr double point = 1e-9;       // outcome-point coordinate matching
inline constexpr double reconstruction = 1e-8;  // per-effect mixture residual
inline constexpr double kernel_cut = 1e-10; // singular-value cutoff, relative to sigma_max
inline constexpr double density = 1e-9;     // node density trace/PSD slack

inline double povm_norm(int dim) { return 1e-9 * std::sqrt(static_cast<double>(dim)); }
inline double measure_mass(int dim) { return 1e-6 * static_cast<double>(dim); }
}  // namespace tol

// d x d complex Hermitian matrix. Construction applies the Hermitian
// projection (A + A^dag)/2, which is exact and idempotent bit-for-bit in
// IEEE arithmetic, so entries(j,k) == conj(entries(k,j)) always holds.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& raw);

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }
  double frobenius_norm() const { return mat_.norm(); }

 private:
  Matrix mat_;
};

struct EigenSystem {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // unitary, column k pairs with eigenvalues[k]
};

// d x r isometry whose columns span the support of a PSD operator
// (eigenspaces with eigenvalue above the rank cutoff).
struct SupportBasis {
  int dim = 0;
  int rank = 0;
  Matrix columns;  // d x rank, orthonormal columns
};

// Eigendecomposition with deterministic ordering: eigenvalues ascending;
// eigenvectors of exactly equal eigenvalues sorted by the lexicographic
// order of their (re, im) entry sequence.
EigenSystem eig_hermitian(const HermitianOperator& a);

// min eigenvalue >= -tau * max(1, sup-norm of a)
bool psd_check(const HermitianOperator& a, double tau = tol::psd);

// Requires a PSD (throws std::domain_error otherwise). Returns rank 0 for
// the zero operator.
SupportBasis support_basis(const HermitianOperator& a, double tau = tol::rank_cut);

double frobenius_distance(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace povm
