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

#include "povm/matops.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace povm {

HermitianOperator::HermitianOperator(const Matrix& raw) {
  if (raw.rows() < 1 || raw.rows() != raw.cols()) {
    throw std::invalid_argument("HermitianOperator: matrix must be square with dim >= 1");
  }
  mat_ = 0.5 * (raw + raw.adjoint());
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

namespace {

// Lexicographic order on the flattened (re, im) entry sequence of a column.
bool lex_less(const Matrix& vecs, int a, int b) {
  for (Eigen::Index k = 0; k < vecs.rows(); ++k) {
    const Complex& x = vecs(k, a);
    const Complex& y = vecs(k, b);
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

}  // namespace

EigenSystem eig_hermitian(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  Eigen::VectorXd vals = solver.eigenvalues();
  Matrix vecs = solver.eigenvectors();

  const int n = static_cast<int>(vals.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    if (vals[i] != vals[j]) return vals[i] < vals[j];
    return lex_less(vecs, i, j);
  });

  EigenSystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = vals[order[k]];
    out.eigenvectors.col(k) = vecs.col(order[k]);
  }
  return out;
}

bool psd_check(const HermitianOperator& a, double tau) {
  if (tau < 0) throw std::invalid_argument("psd_check: tolerance must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("psd_check: eigensolver did not converge");
  }
  const double lo = solver.eigenvalues().minCoeff();
  const double sup = solver.eigenvalues().cwiseAbs().maxCoeff();
  return lo >= -tau * std::max(1.0, sup);
}

SupportBasis support_basis(const HermitianOperator& a, double tau) {
  if (!psd_check(a)) {
    throw std::domain_error("support_basis: operator is not positive semidefinite");
  }
  EigenSystem es = eig_hermitian(a);
  const double top = es.eigenvalues.maxCoeff();

  SupportBasis basis;
  basis.dim = a.dim();
  if (top <= 0.0) {
    basis.rank = 0;
    basis.columns.resize(a.dim(), 0);
    return basis;
  }
  const double cut = tau * top;
  std::vector<int> kept;
  for (int k = 0; k < a.dim(); ++k) {
    if (es.eigenvalues[k] > cut) kept.push_back(k);
  }
  basis.rank = static_cast<int>(kept.size());
  basis.columns.resize(a.dim(), basis.rank);
  for (int k = 0; k < basis.rank; ++k) {
    basis.columns.col(k) = es.eigenvectors.col(kept[k]);
  }
  return basis;
}

double frobenius_distance(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("frobenius_distance: dimension mismatch");
  }
  return (a.matrix() - b.matrix()).norm();
}

}  // namespace povm
