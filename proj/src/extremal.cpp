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

#include "povm/extremal.hpp"

#include <cmath>
#include <limits>

namespace povm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

// Real orthonormal basis of Hermitian m x m matrices under the
// Hilbert-Schmidt inner product: the m diagonal units first, then for each
// pair k < l (row-major) the symmetric and antisymmetric combinations.
Matrix hermitian_basis_element(int m, int index) {
  Matrix b = Matrix::Zero(m, m);
  if (index < m) {
    b(index, index) = 1.0;
    return b;
  }
  int rest = index - m;
  const int pair = rest / 2;
  const bool antisymmetric = (rest % 2) == 1;
  int seen = 0;
  for (int k = 0; k < m; ++k) {
    for (int l = k + 1; l < m; ++l, ++seen) {
      if (seen != pair) continue;
      if (antisymmetric) {
        b(k, l) = Complex(0.0, 1.0) / kSqrt2;
        b(l, k) = Complex(0.0, -1.0) / kSqrt2;
      } else {
        b(k, l) = 1.0 / kSqrt2;
        b(l, k) = 1.0 / kSqrt2;
      }
      return b;
    }
  }
  throw std::logic_error("hermitian_basis_element: index out of range");
}

Eigen::VectorXd hermitian_coords(const Matrix& h) {
  const int m = static_cast<int>(h.rows());
  Eigen::VectorXd c(m * m);
  int idx = 0;
  for (int k = 0; k < m; ++k) c[idx++] = h(k, k).real();
  for (int k = 0; k < m; ++k) {
    for (int l = k + 1; l < m; ++l) {
      c[idx++] = kSqrt2 * h(k, l).real();
      c[idx++] = kSqrt2 * h(k, l).imag();
    }
  }
  return c;
}

Matrix hermitian_from_coords(const Eigen::VectorXd& c, int m) {
  Matrix h = Matrix::Zero(m, m);
  int idx = 0;
  for (int k = 0; k < m; ++k) h(k, k) = c[idx++];
  for (int k = 0; k < m; ++k) {
    for (int l = k + 1; l < m; ++l) {
      const double re = c[idx++] / kSqrt2;
      const double im = c[idx++] / kSqrt2;
      h(k, l) = Complex(re, im);
      h(l, k) = Complex(re, -im);
    }
  }
  return h;
}

Matrix inverse_sqrt(const HermitianOperator& a) {
  EigenSystem es = eig_hermitian(a);
  Eigen::VectorXd inv = es.eigenvalues;
  for (Eigen::Index k = 0; k < inv.size(); ++k) {
    if (!(inv[k] > 0)) {
      throw std::domain_error("inverse_sqrt: operator is singular on its support");
    }
    inv[k] = 1.0 / std::sqrt(inv[k]);
  }
  return es.eigenvectors * inv.asDiagonal() * es.eigenvectors.adjoint();
}

// Zeroes negative eigenvalues; returns the input untouched when nothing is
// clipped so repeated passes are bit-stable.
std::pair<HermitianOperator, double> clip_psd(const HermitianOperator& a) {
  EigenSystem es = eig_hermitian(a);
  double clipped_sq = 0.0;
  bool any = false;
  Eigen::VectorXd vals = es.eigenvalues;
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (vals[k] < 0) {
      clipped_sq += vals[k] * vals[k];
      vals[k] = 0.0;
      any = true;
    }
  }
  if (!any) return {a, 0.0};
  Matrix rebuilt = es.eigenvectors * vals.asDiagonal() * es.eigenvectors.adjoint();
  return {HermitianOperator(rebuilt), std::sqrt(clipped_sq)};
}

}  // namespace

double PerturbationDirection::total_norm() const {
  double acc = 0.0;
  for (const auto& op : operators) acc += op.frobenius_norm() * op.frobenius_norm();
  return std::sqrt(acc);
}

KernelAnalysis::KernelAnalysis(const FinitePOVM& p) : dim_(p.dim()) {
  p.require_valid();
  const int n = p.size();
  supports_.reserve(n);
  offsets_.resize(n);
  columns_ = 0;
  for (int i = 0; i < n; ++i) {
    supports_.push_back(support_basis(p.effects()[i]));
    offsets_[i] = columns_;
    columns_ += supports_[i].rank * supports_[i].rank;
  }

  Eigen::MatrixXd constraint(dim_ * dim_, columns_);
  for (int i = 0; i < n; ++i) {
    const int r = supports_[i].rank;
    const Matrix& u = supports_[i].columns;
    for (int m = 0; m < r * r; ++m) {
      const Matrix lifted = u * hermitian_basis_element(r, m) * u.adjoint();
      constraint.col(offsets_[i] + m) = hermitian_coords(lifted);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint, Eigen::ComputeFullV);
  singular_values_ = svd.singularValues();
  right_vectors_ = svd.matrixV();
  sigma_max_ = singular_values_.size() > 0 ? singular_values_[0] : 0.0;
}

int KernelAnalysis::rank(double cutoff_factor) const {
  const double cut = cutoff_factor * sigma_max_;
  int r = 0;
  for (Eigen::Index k = 0; k < singular_values_.size(); ++k) {
    if (singular_values_[k] > cut) ++r;
  }
  return r;
}

PerturbationDirection KernelAnalysis::direction(int column_index) const {
  if (column_index < 0 || column_index >= columns_) {
    throw std::invalid_argument("KernelAnalysis::direction: column index out of range");
  }
  const Eigen::VectorXd c = right_vectors_.col(column_index);
  PerturbationDirection d;
  d.operators.reserve(supports_.size());
  for (std::size_t i = 0; i < supports_.size(); ++i) {
    const int r = supports_[i].rank;
    const Matrix h = hermitian_from_coords(c.segment(offsets_[i], r * r), r);
    d.operators.emplace_back(supports_[i].columns * h * supports_[i].columns.adjoint());
  }
  const double norm = d.total_norm();
  if (norm > 0) {
    for (auto& op : d.operators) op = HermitianOperator(op.matrix() / norm);
  }
  return d;
}

ExtremalityReport extremality_check(const FinitePOVM& p) {
  KernelAnalysis analysis(p);
  ExtremalityReport report;
  const int rank = analysis.rank(tol::kernel_cut);
  report.kernel_dimension = analysis.columns() - rank;
  report.extremal = report.kernel_dimension == 0;
  if (!report.extremal) report.witness = analysis.direction(rank);
  return report;
}

std::pair<double, double> max_steps(const FinitePOVM& p, const PerturbationDirection& d) {
  if (static_cast<int>(d.operators.size()) != p.size()) {
    throw std::invalid_argument("max_steps: direction/POVM outcome count mismatch");
  }
  const double total = d.total_norm();
  if (!(total > 0)) throw std::domain_error("max_steps: zero direction");

  double max_norm = 0.0;
  for (const auto& op : d.operators) max_norm = std::max(max_norm, op.frobenius_norm());

  Matrix sum = Matrix::Zero(p.dim(), p.dim());
  for (const auto& op : d.operators) sum += op.matrix();
  if (sum.norm() > 1e-6 * total * std::sqrt(static_cast<double>(p.dim()))) {
    throw std::domain_error("max_steps: direction is not zero-sum");
  }

  double t_plus = kInf;
  double t_minus = kInf;
  for (int i = 0; i < p.size(); ++i) {
    const HermitianOperator& di = d.operators[i];
    if (di.dim() != p.dim()) throw std::invalid_argument("max_steps: dimension mismatch");
    if (di.frobenius_norm() <= 1e-14 * max_norm) continue;

    SupportBasis u = support_basis(p.effects()[i]);
    const Matrix proj = u.columns * u.columns.adjoint();
    const Matrix outside = (Matrix::Identity(p.dim(), p.dim()) - proj) * di.matrix() *
                           (Matrix::Identity(p.dim(), p.dim()) - proj);
    if (outside.norm() > 1e-9 * di.frobenius_norm()) {
      throw std::domain_error("max_steps: direction leaves the support of effect " +
                              std::to_string(i));
    }

    const HermitianOperator compressed_effect(u.columns.adjoint() * p.effects()[i].matrix() *
                                              u.columns);
    const Matrix s = inverse_sqrt(compressed_effect);
    const HermitianOperator scaled(s * (u.columns.adjoint() * di.matrix() * u.columns) * s);
    EigenSystem es = eig_hermitian(scaled);
    const double lo = es.eigenvalues.minCoeff();
    const double hi = es.eigenvalues.maxCoeff();
    if (lo < 0) t_plus = std::min(t_plus, 1.0 / (-lo));
    if (hi > 0) t_minus = std::min(t_minus, 1.0 / hi);
  }
  if (!std::isfinite(t_plus) || !std::isfinite(t_minus)) {
    throw std::domain_error("max_steps: direction admits an unbounded step");
  }
  return {t_plus, t_minus};
}

SplitResult split(const FinitePOVM& p, const PerturbationDirection& d) {
  const auto [t_plus, t_minus] = max_steps(p, d);

  std::vector<HermitianOperator> plus, minus;
  plus.reserve(p.size());
  minus.reserve(p.size());
  double clip_plus_sq = 0.0, clip_minus_sq = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    auto [ep, cp] = clip_psd(
        HermitianOperator(p.effects()[i].matrix() + t_plus * d.operators[i].matrix()));
    auto [em, cm] = clip_psd(
        HermitianOperator(p.effects()[i].matrix() - t_minus * d.operators[i].matrix()));
    clip_plus_sq += cp * cp;
    clip_minus_sq += cm * cm;
    plus.push_back(std::move(ep));
    minus.push_back(std::move(em));
  }
  return SplitResult{t_minus / (t_plus + t_minus),
                     t_plus / (t_plus + t_minus),
                     FinitePOVM(p.dim(), p.outcomes(), std::move(plus)),
                     FinitePOVM(p.dim(), p.outcomes(), std::move(minus)),
                     std::sqrt(clip_plus_sq),
                     std::sqrt(clip_minus_sq)};
}

int default_leaf_budget(const FinitePOVM& p) {
  return (p.size() - 1) * p.dim() * p.dim() + 1;
}

namespace {

// Largest lambda with R_i - lambda E_i PSD for all i, computed on the
// support of each R_i. Strictly below 1 unless R equals E: the effects of
// (R - lambda E)/(1 - lambda) sum to the identity, so at lambda = 1 a
// zero-sum family of PSD operators would have to vanish.
double peel_coefficient(const FinitePOVM& r, const FinitePOVM& e) {
  double lambda = kInf;
  for (int i = 0; i < r.size(); ++i) {
    const Matrix* effect = nullptr;
    for (int j = 0; j < e.size(); ++j) {
      if (point_distance(r.outcomes()[i], e.outcomes()[j]) <= tol::point) {
        effect = &e.effects()[j].matrix();
        break;
      }
    }
    if (effect == nullptr) continue;
    SupportBasis u = support_basis(r.effects()[i]);
    const HermitianOperator compressed(u.columns.adjoint() * r.effects()[i].matrix() * u.columns);
    const Matrix s = inverse_sqrt(compressed);
    const HermitianOperator scaled(s * (u.columns.adjoint() * (*effect) * u.columns) * s);
    EigenSystem es = eig_hermitian(scaled);
    const double hi = es.eigenvalues.maxCoeff();
    if (hi > 0) lambda = std::min(lambda, 1.0 / hi);
  }
  if (!std::isfinite(lambda)) {
    throw std::runtime_error("peel_coefficient: component does not overlap the remainder");
  }
  return std::min(lambda, 1.0);
}

struct Leaf {
  double weight;
  FinitePOVM povm;
  ComponentCertificate certificate;
};

MixtureDecomposition assemble(std::vector<Leaf>&& leaves) {
  MixtureDecomposition mix;
  mix.weights.reserve(leaves.size());
  mix.components.reserve(leaves.size());
  mix.certificates.reserve(leaves.size());
  for (auto& leaf : leaves) {
    mix.weights.push_back(leaf.weight);
    mix.components.push_back(std::move(leaf.povm));
    mix.certificates.push_back(leaf.certificate);
  }
  return mix;
}

ComponentCertificate make_certificate(const FinitePOVM& p, int kernel_dim_std, double clip) {
  ComponentCertificate cert;
  cert.extremal = kernel_dim_std == 0;
  cert.kernel_dimension = kernel_dim_std;
  cert.max_outcomes_check = p.size() <= p.dim() * p.dim();
  cert.clipping_residual = clip;
  return cert;
}

int total_rank(const FinitePOVM& p) {
  int acc = 0;
  for (const auto& effect : p.effects()) acc += support_basis(effect).rank;
  return acc;
}

}  // namespace

MixtureDecomposition decompose_extremal(const FinitePOVM& p, int max_leaves) {
  p.require_valid();
  if (max_leaves < 0) throw std::invalid_argument("decompose_extremal: max_leaves must be >= 1");
  const int budget = max_leaves == 0 ? default_leaf_budget(p) : max_leaves;

  std::vector<Leaf> leaves;
  FinitePOVM remainder = p;
  double residual_weight = 1.0;
  double clip_chain = 0.0;
  const int peel_cap = total_rank(p) + 8;

  for (int peel = 0;; ++peel) {
    KernelAnalysis analysis(remainder);
    const int kd_std = analysis.kernel_dimension(tol::kernel_cut);
    const int kd_tight = analysis.kernel_dimension(tol::kernel_cut * 0.1);
    if (kd_tight == 0) {
      // certified extremal (kd_std == 0) or marginal kernel: keep whole
      leaves.push_back({residual_weight, remainder,
                        make_certificate(remainder, kd_std, clip_chain)});
      break;
    }
    if (static_cast<int>(leaves.size()) + 2 > budget || peel >= peel_cap) {
      leaves.push_back({residual_weight, remainder,
                        make_certificate(remainder, kd_std, clip_chain)});
      throw DecompositionOverflow("decompose_extremal: leaf budget exceeded",
                                  assemble(std::move(leaves)));
    }

    // Descend along kernel directions, always taking the plus branch, until
    // the face degenerates to an extremal (or marginal) measurement.
    FinitePOVM extremal_leaf = remainder;
    double clip_descent = 0.0;
    int kernel_at_leaf = kd_std;
    for (int move = 0; move <= peel_cap; ++move) {
      KernelAnalysis inner(extremal_leaf);
      const int inner_std = inner.kernel_dimension(tol::kernel_cut);
      const int inner_tight = inner.kernel_dimension(tol::kernel_cut * 0.1);
      kernel_at_leaf = inner_std;
      if (inner_tight == 0) break;
      PerturbationDirection direction = inner.direction(inner.rank(tol::kernel_cut * 0.1));
      SplitResult step = split(extremal_leaf, direction);
      extremal_leaf = std::move(step.plus);
      clip_descent += step.clip_plus;
    }

    const double lambda = peel_coefficient(remainder, extremal_leaf);
    const ComponentCertificate leaf_certificate =
        make_certificate(extremal_leaf, kernel_at_leaf, clip_chain + clip_descent);
    if (lambda >= 1.0 - 1e-12) {
      leaves.push_back({residual_weight, std::move(extremal_leaf), leaf_certificate});
      break;
    }
    leaves.push_back({residual_weight * lambda, extremal_leaf, leaf_certificate});

    std::vector<HermitianOperator> next;
    next.reserve(remainder.size());
    double clip_sq = 0.0;
    for (int i = 0; i < remainder.size(); ++i) {
      Matrix effect = remainder.effects()[i].matrix();
      for (int j = 0; j < extremal_leaf.size(); ++j) {
        if (point_distance(remainder.outcomes()[i], extremal_leaf.outcomes()[j]) <= tol::point) {
          effect -= lambda * extremal_leaf.effects()[j].matrix();
          break;
        }
      }
      auto [clean, clipped] = clip_psd(HermitianOperator(effect / (1.0 - lambda)));
      clip_sq += clipped * clipped;
      next.push_back(std::move(clean));
    }
    clip_chain += std::sqrt(clip_sq);
    remainder = FinitePOVM(remainder.dim(), remainder.outcomes(), std::move(next));
    residual_weight *= (1.0 - lambda);
  }
  return assemble(std::move(leaves));
}

}  // namespace povm
