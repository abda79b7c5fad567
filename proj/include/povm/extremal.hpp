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

// Extremality of finite POVMs and decomposition of arbitrary finite POVMs
// into convex mixtures of extremal ones.
//
// A finite POVM {P_i} sits in the interior of a face of the POVM convex set
// exactly when there is a nonzero family {D_i} of Hermitian operators with
// supp(D_i) inside supp(P_i) and sum_i D_i = 0: then P +- t D are POVMs for
// small t and P is their midpoint mixture. Extremality is therefore a
// kernel computation: stack the per-effect Hermitian parameter spaces into
// a real matrix of shape d^2 x sum_i r_i^2 and inspect its singular values.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "povm/povm.hpp"

namespace povm {

// One Hermitian perturbation operator per outcome, zero-sum and supported
// inside the effects of the POVM it was generated from.
struct PerturbationDirection {
  std::vector<HermitianOperator> operators;

  double total_norm() const;  // sqrt(sum_i |D_i|_F^2)
};

struct ExtremalityReport {
  bool extremal = false;
  int kernel_dimension = 0;
  std::optional<PerturbationDirection> witness;
};

// Shared machinery behind extremality decisions: the singular values of the
// zero-sum constraint matrix together with everything needed to map kernel
// vectors back to operator families. Exposed so that the decomposition can
// evaluate the kernel under more than one cutoff without recomputation.
class KernelAnalysis {
 public:
  explicit KernelAnalysis(const FinitePOVM& p);

  int columns() const { return columns_; }
  double sigma_max() const { return sigma_max_; }
  const Eigen::VectorXd& singular_values() const { return singular_values_; }

  // number of singular values above cutoff_factor * sigma_max
  int rank(double cutoff_factor) const;
  int kernel_dimension(double cutoff_factor) const { return columns_ - rank(cutoff_factor); }

  // kernel vector by column index into the right singular basis (index >=
  // rank), mapped back to a normalized operator family
  PerturbationDirection direction(int column_index) const;

 private:
  int dim_;
  int columns_;
  double sigma_max_;
  Eigen::VectorXd singular_values_;
  Eigen::MatrixXd right_vectors_;
  std::vector<SupportBasis> supports_;
  std::vector<int> offsets_;  // start of each effect's parameter block
};

// Kernel test at the standard cutoff (tol::kernel_cut). The witness, when
// present, is the first kernel column under the deterministic descending
// singular-value ordering.
ExtremalityReport extremality_check(const FinitePOVM& p);

// Largest steps t keeping P_i + t D_i (t_plus) and P_i - t D_i (t_minus)
// positive semidefinite for all i, computed per outcome on the support
// subspace. Both are finite and positive for any nonzero zero-sum direction:
// were t_plus infinite every D_i would be PSD, and zero-sum PSD families
// with vanishing total trace are identically zero.
std::pair<double, double> max_steps(const FinitePOVM& p, const PerturbationDirection& d);

struct SplitResult {
  double weight_plus = 0.0;
  double weight_minus = 0.0;
  FinitePOVM plus;
  FinitePOVM minus;
  double clip_plus = 0.0;   // Frobenius size of the eigenvalue clipping applied
  double clip_minus = 0.0;
};

// Two-sided boundary split P = w_plus P_plus + w_minus P_minus along a
// direction; the identity holds algebraically since w_plus t_plus equals
// w_minus t_minus. At least one effect of each branch loses rank.
SplitResult split(const FinitePOVM& p, const PerturbationDirection& d);

class DecompositionOverflow : public std::runtime_error {
 public:
  DecompositionOverflow(std::string message, MixtureDecomposition partial_tree)
      : std::runtime_error(std::move(message)), partial(std::move(partial_tree)) {}

  MixtureDecomposition partial;
};

// Carathéodory-style budget for an n-outcome POVM in dimension d:
// (n - 1) d^2 + 1, the convex dimension of the body plus one.
int default_leaf_budget(const FinitePOVM& p);

// Decomposes P into a convex mixture of extremal finite POVMs: repeatedly
// descends along kernel directions to an extremal measurement and peels it
// off with the largest feasible weight, so the component count stays within
// the Carathéodory budget. Components whose kernel is only marginally
// nontrivial (nonzero under the standard cutoff, zero under a ten times
// tighter one) are kept whole and flagged uncertified rather than split
// along a noise-level direction. max_leaves <= 0 selects the default
// budget; exceeding the budget raises DecompositionOverflow carrying the
// partial mixture.
MixtureDecomposition decompose_extremal(const FinitePOVM& p, int max_leaves = 0);

}  // namespace povm
